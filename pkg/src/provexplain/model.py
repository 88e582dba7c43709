"""Core data model: typed values, schemas, databases, dependency trees,
conjunctive queries and word-to-variable mappings.

Values are comparable across a whole column: strings are trimmed and
case-sensitive, numbers keep exact integer semantics (2014 == 2014.0 and
prints as "2014").  Dependency trees keep children in word order; node ids
are word positions when loaded from tabular rows, or assigned pre-order
when a nested source omits them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

from .errors import (
    ArityMismatchError,
    InvalidMappingError,
    MalformedTreeError,
    TypeMismatchError,
)

STRING = "string"
NUMBER = "number"


@dataclass(frozen=True, eq=False)
class Value:
    """A typed database value."""

    kind: str
    data: Union[str, int, float]

    # values are hashed constantly during factorization; cache the hash
    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.kind, self.data)))
        if self.kind == NUMBER:
            skey = (0, float(self.data), "")
        else:
            skey = (1, 0.0, self.data)
        object.__setattr__(self, "_skey", skey)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if not isinstance(other, Value):
            return NotImplemented
        return self.kind == other.kind and self.data == other.data

    @staticmethod
    def string(text: str) -> "Value":
        return Value(STRING, text.strip())

    @staticmethod
    def number(num: Union[int, float]) -> "Value":
        if isinstance(num, float) and num.is_integer():
            num = int(num)
        return Value(NUMBER, num)

    @staticmethod
    def parse(text: str, kind: str) -> "Value":
        if kind == NUMBER:
            raw = text.strip()
            try:
                return Value.number(int(raw))
            except ValueError:
                try:
                    return Value.number(float(raw))
                except ValueError:
                    raise TypeMismatchError(f"not a number: {text!r}")
        return Value.string(text)

    @property
    def text(self) -> str:
        """Canonical rendering: integers without a decimal point."""
        if self.kind == NUMBER:
            if isinstance(self.data, float) and self.data.is_integer():
                return str(int(self.data))
            return str(self.data)
        return str(self.data)

    def sort_key(self):
        return self._skey

    def __lt__(self, other: "Value") -> bool:
        return self._skey < other._skey

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class Attribute:
    name: str
    kind: str = STRING
    category: Optional[str] = None
    aliases: tuple = ()


@dataclass(frozen=True)
class Relation:
    name: str
    attributes: tuple

    @property
    def arity(self) -> int:
        return len(self.attributes)

    def attribute(self, name: str) -> Attribute:
        for attr in self.attributes:
            if attr.name == name:
                return attr
        raise KeyError(name)


class Schema:
    def __init__(self, relations: Iterable[Relation]):
        self.relations: dict[str, Relation] = {}
        for rel in relations:
            if rel.name in self.relations:
                raise InvalidMappingError(f"duplicate relation {rel.name}")
            self.relations[rel.name] = rel

    def relation(self, name: str) -> Relation:
        return self.relations[name]

    def __contains__(self, name: str) -> bool:
        return name in self.relations

    def attribute_of(self, relation: str, position: int) -> Attribute:
        return self.relations[relation].attributes[position]


class Database:
    """Relations materialized as ordered rows of typed values."""

    def __init__(self, schema: Schema):
        self.schema = schema
        self.tables: dict[str, list[tuple]] = {name: [] for name in schema.relations}

    def insert(self, relation: str, values: Iterable[Value]) -> None:
        rel = self.schema.relation(relation)
        row = tuple(values)
        if len(row) != rel.arity:
            raise ArityMismatchError(
                f"{relation}: expected {rel.arity} values, got {len(row)}"
            )
        for pos, (value, attr) in enumerate(zip(row, rel.attributes)):
            if value.kind != attr.kind:
                raise TypeMismatchError(
                    f"{relation}.{attr.name} (column {pos}): "
                    f"expected {attr.kind}, got {value.kind}"
                )
        self.tables[relation].append(row)

    def rows(self, relation: str) -> list[tuple]:
        return self.tables[relation]

    def counts(self) -> dict[str, int]:
        return {name: len(rows) for name, rows in self.tables.items()}


# --- dependency trees ---------------------------------------------------


@dataclass
class DependencyNode:
    id: int
    word: str
    pos: str
    rel: str
    children: list = field(default_factory=list)

    def __repr__(self) -> str:
        return f"DependencyNode({self.id}, {self.word!r}, {self.pos}, {self.rel})"


class DependencyTree:
    def __init__(self, root: DependencyNode):
        self.root = root
        self.nodes: dict[int, DependencyNode] = {}
        self.parents: dict[int, Optional[int]] = {root.id: None}
        self._index(root)

    def _index(self, node: DependencyNode) -> None:
        if node.id in self.nodes:
            raise MalformedTreeError(f"duplicate node id {node.id}", [node.id])
        self.nodes[node.id] = node
        for child in node.children:
            self.parents[child.id] = node.id
            self._index(child)

    def node(self, node_id: int) -> DependencyNode:
        return self.nodes[node_id]

    def parent(self, node_id: int) -> Optional[DependencyNode]:
        pid = self.parents.get(node_id)
        return None if pid is None else self.nodes[pid]

    def walk(self) -> Iterator[DependencyNode]:
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def subtree_ids(self, node_id: int) -> set[int]:
        ids = set()
        stack = [self.nodes[node_id]]
        while stack:
            node = stack.pop()
            ids.add(node.id)
            stack.extend(node.children)
        return ids

    def is_ancestor(self, ancestor_id: int, node_id: int) -> bool:
        """True when ancestor_id lies on the path from node_id to the root
        (reflexive)."""
        current: Optional[int] = node_id
        while current is not None:
            if current == ancestor_id:
                return True
            current = self.parents.get(current)
        return False

    def words_in_order(self) -> list[str]:
        return [self.nodes[i].word for i in sorted(self.nodes)]

    def sentence(self) -> str:
        return " ".join(self.words_in_order())


@dataclass(frozen=True)
class StructureConfig:
    """Tree-shape knobs: which relations count as modifiers, what makes a
    verb, and the small closed word classes the generator manipulates."""

    modifier_rels: frozenset = frozenset({"prep", "rcmod", "advmod", "nn", "amod"})
    verb_pos_prefixes: tuple = ("VB",)
    noun_pos_prefixes: tuple = ("NN", "CD")
    determiner_rels: frozenset = frozenset({"det"})
    compound_rels: frozenset = frozenset({"nn", "amod", "det"})
    relative_pronouns: frozenset = frozenset({"who", "whom", "which", "that"})
    logical_ops: frozenset = frozenset({"and", "or"})

    def is_verb(self, pos: str) -> bool:
        return pos.startswith(self.verb_pos_prefixes)

    def is_noun_like(self, pos: str) -> bool:
        return pos.startswith(self.noun_pos_prefixes)

    def is_modifier(self, rel: str) -> bool:
        return rel in self.modifier_rels


DEFAULT_STRUCTURE = StructureConfig()


@dataclass
class ValidationReport:
    ok: bool
    object_id: Optional[int] = None
    modifier_id: Optional[int] = None
    modifier_is_verb: bool = False
    issues: list = field(default_factory=list)


def validate_question_tree(
    tree: DependencyTree, config: StructureConfig = DEFAULT_STRUCTURE
) -> ValidationReport:
    """Check the two supported question shapes: a sought object noun under
    the root, optionally carrying one modifier subtree (verb or not).

    Raises MalformedTreeError when no object can be found.
    """
    root = tree.root
    if config.is_noun_like(root.pos):
        obj = root
    else:
        obj = next((c for c in root.children if config.is_noun_like(c.pos)), None)
    if obj is None:
        raise MalformedTreeError(
            f"no object noun under root {root.word!r}", [root.id]
        )
    modifier = next(
        (c for c in obj.children if config.is_modifier(c.rel)), None
    )
    report = ValidationReport(ok=True, object_id=obj.id)
    if modifier is not None:
        report.modifier_id = modifier.id
        report.modifier_is_verb = config.is_verb(modifier.pos)
    return report


# --- queries ------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    value: Value

    def __str__(self) -> str:
        if self.value.kind == STRING:
            return f"'{self.value.data}'"
        return self.value.text


Term = Union[Var, Const]

EQ, LT, GT = "=", "<", ">"


@dataclass(frozen=True)
class Constraint:
    left: Var
    op: str
    right: Term

    def __str__(self) -> str:
        return f"{self.left} {self.op} {self.right}"


@dataclass(frozen=True)
class Atom:
    relation: str
    terms: tuple

    def __str__(self) -> str:
        return f"{self.relation}({', '.join(str(t) for t in self.terms)})"


class ConjunctiveQuery:
    def __init__(
        self,
        head_vars: Iterable[str],
        atoms: Iterable[Atom],
        constraints: Iterable[Constraint] = (),
        name: str = "q",
    ):
        self.name = name
        self.head_vars = tuple(head_vars)
        self.atoms = tuple(atoms)
        self.constraints = tuple(constraints)
        body = self.variables()
        missing = [v for v in self.head_vars if v not in body]
        if missing:
            raise InvalidMappingError(f"head variables not in body: {missing}")
        for con in self.constraints:
            if con.left.name not in body or (
                isinstance(con.right, Var) and con.right.name not in body
            ):
                raise InvalidMappingError(f"constraint on unbound variable: {con}")

    def variables(self) -> set[str]:
        return {
            term.name
            for atom in self.atoms
            for term in atom.terms
            if isinstance(term, Var)
        }

    def attribute_of(self, schema: Schema, var: str) -> Optional[tuple]:
        """First (relation, attribute) position where the variable occurs."""
        for atom in self.atoms:
            for pos, term in enumerate(atom.terms):
                if isinstance(term, Var) and term.name == var:
                    return atom.relation, schema.attribute_of(atom.relation, pos)
        return None

    def __str__(self) -> str:
        parts = [str(a) for a in self.atoms] + [str(c) for c in self.constraints]
        return f"{self.name}({', '.join(self.head_vars)}) :- {', '.join(parts)}"


class UnionQuery:
    def __init__(self, cqs: Iterable[ConjunctiveQuery], name: str = "q"):
        self.name = name
        self.cqs = tuple(cqs)
        if not self.cqs:
            raise InvalidMappingError("union of zero queries")
        arity = len(self.cqs[0].head_vars)
        if any(len(cq.head_vars) != arity for cq in self.cqs):
            raise InvalidMappingError("union members disagree on head arity")

    @staticmethod
    def wrap(query) -> "UnionQuery":
        if isinstance(query, UnionQuery):
            return query
        return UnionQuery([query], name=query.name)

    def __str__(self) -> str:
        return "\n".join(str(cq) for cq in self.cqs)


# --- word mappings ------------------------------------------------------


class WordMapping:
    """Partial map from tree node ids to variables of one conjunctive
    query.  Injective: two nodes never share a variable."""

    def __init__(self, node_to_var: dict):
        self.node_to_var = dict(node_to_var)
        seen: dict[str, int] = {}
        for node_id, var in self.node_to_var.items():
            if var in seen:
                raise InvalidMappingError(
                    f"variable {var} mapped from nodes {seen[var]} and {node_id}"
                )
            seen[var] = node_id
        self.var_to_node = {v: n for n, v in self.node_to_var.items()}

    def validate(self, tree: DependencyTree, cq: ConjunctiveQuery) -> None:
        body = cq.variables()
        for node_id, var in self.node_to_var.items():
            if node_id not in tree.nodes:
                raise InvalidMappingError(f"unknown node id {node_id}")
            if var not in body:
                raise InvalidMappingError(f"unknown variable {var}")

    def items(self):
        return self.node_to_var.items()

    def __contains__(self, node_id: int) -> bool:
        return node_id in self.node_to_var

    def __len__(self) -> int:
        return len(self.node_to_var)


class UnionWordMapping:
    """One WordMapping per union member, plus a shared compact numbering of
    all mapped nodes (1-based, in word order) used in provenance pairs."""

    def __init__(self, mappings: Iterable[WordMapping]):
        self.mappings = tuple(mappings)
        mapped_nodes = sorted(
            {n for m in self.mappings for n in m.node_to_var}
        )
        self.word_id_of_node = {n: i + 1 for i, n in enumerate(mapped_nodes)}
        self.node_of_word_id = {i: n for n, i in self.word_id_of_node.items()}

    @staticmethod
    def wrap(mapping) -> "UnionWordMapping":
        if isinstance(mapping, UnionWordMapping):
            return mapping
        return UnionWordMapping([mapping])

    def mapped_node_ids(self) -> list[int]:
        return sorted(self.word_id_of_node)

    def for_cq(self, index: int) -> WordMapping:
        return self.mappings[index]

    def word_pairs(self, index: int):
        """(word_id, var) pairs for one union member, in word order."""
        mapping = self.mappings[index]
        return sorted(
            (self.word_id_of_node[n], v) for n, v in mapping.node_to_var.items()
        )

    def validate(self, tree: DependencyTree, union: UnionQuery) -> None:
        if len(self.mappings) != len(union.cqs):
            raise InvalidMappingError(
                f"{len(self.mappings)} mappings for {len(union.cqs)} queries"
            )
        for mapping, cq in zip(self.mappings, union.cqs):
            mapping.validate(tree, cq)
