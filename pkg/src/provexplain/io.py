"""Loading and dumping of schemas, databases, trees, queries and mappings.

File formats:
  - schema: one relation per line, ``name(attr:kind, ...)``.  Each attribute
    may carry an optional category tag and an optional quoted alias list:
    ``cname:string:venue:"conference|conferences"``.
  - database: one RFC-4180 CSV per relation, header row = attribute names.
  - tree: either tabular rows ``id word pos head rel`` (tab separated, one
    word per line, ids are word positions) or nested JSON objects with
    ``word``/``pos``/``rel``/``children`` and optional ``id`` (missing ids
    are assigned pre-order).
  - query: datalog-style rules ``q(x) :- rel(x, y), y > 2005``; several
    rules in one file form a union.
  - mapping: JSON list (one object per union member) of node-id -> variable.
"""

from __future__ import annotations

import csv
import json
import re
from pathlib import Path

from .errors import (
    ArityMismatchError,
    InvalidMappingError,
    MalformedTreeError,
    TypeMismatchError,
    UnknownRelationError,
)
from .model import (
    Atom,
    Attribute,
    ConjunctiveQuery,
    Const,
    Constraint,
    Database,
    DependencyNode,
    DependencyTree,
    NUMBER,
    Relation,
    STRING,
    Schema,
    UnionQuery,
    UnionWordMapping,
    Value,
    Var,
    WordMapping,
)

_KINDS = {"string": STRING, "number": NUMBER, "str": STRING, "num": NUMBER}


# --- schema -------------------------------------------------------------

_ATTR_RE = re.compile(
    r"""^\s*(?P<name>\w+)\s*:\s*(?P<kind>\w+)
        (?:\s*:\s*(?P<category>\w+))?
        (?:\s*:\s*"(?P<aliases>[^"]*)")?\s*$""",
    re.VERBOSE,
)


def _split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split on sep outside parentheses and double quotes."""
    parts, depth, quoted, current = [], 0, False, []
    for ch in text:
        if ch == '"':
            quoted = not quoted
        elif not quoted:
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == sep and depth == 0:
                parts.append("".join(current).strip())
                current = []
                continue
        current.append(ch)
    tail = "".join(current).strip()
    if tail:
        parts.append(tail)
    return parts


def parse_schema(text: str) -> Schema:
    relations = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        match = re.match(r"^(\w+)\s*\((.*)\)\s*$", line)
        if not match:
            raise InvalidMappingError(f"schema line {lineno}: cannot parse {line!r}")
        name, body = match.groups()
        attributes = []
        for spec in _split_top_level(body):
            attr_match = _ATTR_RE.match(spec)
            if not attr_match:
                raise InvalidMappingError(
                    f"schema line {lineno}: bad attribute {spec!r}"
                )
            kind = attr_match.group("kind").lower()
            if kind not in _KINDS:
                raise TypeMismatchError(
                    f"schema line {lineno}: unknown kind {kind!r}"
                )
            aliases = attr_match.group("aliases")
            attributes.append(
                Attribute(
                    name=attr_match.group("name"),
                    kind=_KINDS[kind],
                    category=attr_match.group("category"),
                    aliases=tuple(a.strip() for a in aliases.split("|"))
                    if aliases
                    else (),
                )
            )
        relations.append(Relation(name, tuple(attributes)))
    return Schema(relations)


def load_schema(path) -> Schema:
    return parse_schema(Path(path).read_text())


# --- database -----------------------------------------------------------


def _read_table(db: Database, name: str, text: str, where: str) -> None:
    rel = db.schema.relations[name]
    reader = csv.reader(text.splitlines())
    header = next(reader, None)
    expected = [a.name for a in rel.attributes]
    if header != expected:
        raise ArityMismatchError(
            f"{where}: header {header} does not match {expected}"
        )
    for rowno, row in enumerate(reader, start=2):
        if len(row) != rel.arity:
            raise ArityMismatchError(
                f"{where} row {rowno}: {len(row)} values, expected {rel.arity}"
            )
        values = []
        for colno, (cell, attr) in enumerate(zip(row, rel.attributes)):
            try:
                values.append(Value.parse(cell, attr.kind))
            except TypeMismatchError as exc:
                raise TypeMismatchError(
                    f"{where} row {rowno} column {colno} ({attr.name}): {exc}"
                ) from None
        db.insert(name, values)


def parse_database(schema: Schema, tables: dict) -> Database:
    """Build a database from CSV text per relation name (header row
    included).  Every schema relation must be present."""
    db = Database(schema)
    for name in schema.relations:
        if name not in tables:
            raise UnknownRelationError(f"missing table {name!r}")
        _read_table(db, name, tables[name], f"table {name}")
    return db


def load_database(schema: Schema, directory) -> Database:
    """Load one CSV per schema relation from directory.  Errors carry the
    file, row and column of the offending cell."""
    directory = Path(directory)
    db = Database(schema)
    for name in schema.relations:
        path = directory / f"{name}.csv"
        if not path.exists():
            raise UnknownRelationError(f"missing table file {path}")
        _read_table(db, name, path.read_text(), str(path))
    return db


def dump_database(db: Database, directory) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name, rel in db.schema.relations.items():
        with open(directory / f"{name}.csv", "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow([a.name for a in rel.attributes])
            for row in db.rows(name):
                writer.writerow([v.text for v in row])


# --- dependency trees ---------------------------------------------------


def parse_tree_rows(text: str) -> DependencyTree:
    """Tabular form: ``id word pos head rel`` per line, tab separated."""
    entries = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t") if "\t" in line else line.split()
        if len(fields) != 5:
            raise MalformedTreeError(f"tree line {lineno}: expected 5 fields")
        node_id, word, pos, head, rel = fields
        try:
            entries.append((int(node_id), word, pos, int(head), rel))
        except ValueError:
            raise MalformedTreeError(
                f"tree line {lineno}: id and head must be integers"
            ) from None
    nodes: dict = {}
    for node_id, word, pos, _head, rel in entries:
        if node_id in nodes:
            raise MalformedTreeError(
                f"duplicate node id {node_id}", node_ids=(node_id,)
            )
        nodes[node_id] = DependencyNode(node_id, word, pos, rel)
    root = None
    for node_id, _word, _pos, head, _rel in entries:
        if head == 0:
            if root is not None:
                raise MalformedTreeError("tree has two roots")
            root = nodes[node_id]
        elif head not in nodes:
            raise MalformedTreeError(
                f"node {node_id} points at unknown head {head}",
                node_ids=(node_id,),
            )
        else:
            nodes[head].children.append(nodes[node_id])
    if root is None:
        raise MalformedTreeError("tree has no root row")
    for node in nodes.values():
        node.children.sort(key=lambda n: n.id)
    tree = DependencyTree(root)
    if len(tree.nodes) != len(entries):
        orphans = sorted(set(nodes) - set(tree.nodes))
        raise MalformedTreeError(
            f"nodes unreachable from the root: {orphans}", node_ids=orphans
        )
    return tree


def parse_tree_json(data) -> DependencyTree:
    if isinstance(data, str):
        data = json.loads(data)

    def has_all_ids(obj) -> bool:
        return "id" in obj and all(has_all_ids(c) for c in obj.get("children", []))

    use_given = has_all_ids(data)

    def build(obj, counter) -> DependencyNode:
        if use_given:
            node_id = int(obj["id"])
        else:
            node_id = counter[0]
            counter[0] += 1
        try:
            node = DependencyNode(node_id, obj["word"], obj["pos"], obj["rel"])
        except KeyError as exc:
            raise MalformedTreeError(
                f"tree node {node_id} is missing key {exc}", node_ids=(node_id,)
            ) from None
        for child in obj.get("children", []):
            node.children.append(build(child, counter))
        return node

    return DependencyTree(build(data, [1]))


def tree_to_json(tree: DependencyTree) -> dict:
    def dump(node: DependencyNode) -> dict:
        return {
            "id": node.id,
            "word": node.word,
            "pos": node.pos,
            "rel": node.rel,
            "children": [dump(c) for c in node.children],
        }

    return dump(tree.root)


def tree_to_rows(tree: DependencyTree) -> str:
    lines = []
    for node_id in sorted(tree.nodes):
        node = tree.nodes[node_id]
        parent = tree.parent(node_id)
        head = 0 if parent is None else parent.id
        lines.append(f"{node.id}\t{node.word}\t{node.pos}\t{head}\t{node.rel}")
    return "\n".join(lines) + "\n"


def load_tree(path) -> DependencyTree:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json" or text.lstrip().startswith("{"):
        return parse_tree_json(text)
    return parse_tree_rows(text)


# --- queries ------------------------------------------------------------

_NUM_RE = re.compile(r"^-?\d+(\.\d+)?$")


def _parse_term(token: str):
    token = token.strip()
    if token.startswith("'") and token.endswith("'") and len(token) >= 2:
        return Const(Value.string(token[1:-1]))
    if _NUM_RE.match(token):
        return Const(Value.parse(token, NUMBER))
    return Var(token)


def parse_query(text: str) -> UnionQuery:
    cqs = []
    name = "q"
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        match = re.match(r"^(\w+)\s*\(([^)]*)\)\s*:-\s*(.+)$", line)
        if not match:
            raise InvalidMappingError(f"query line {lineno}: cannot parse {line!r}")
        name, head, body = match.groups()
        head_vars = [v.strip() for v in head.split(",") if v.strip()]
        atoms, constraints = [], []
        for part in _split_top_level(body):
            atom_match = re.match(r"^(\w+)\s*\((.*)\)$", part)
            if atom_match:
                rel, terms = atom_match.groups()
                atoms.append(
                    Atom(rel, tuple(_parse_term(t) for t in terms.split(",")))
                )
                continue
            con_match = re.match(r"^(\w+)\s*(=|<|>)\s*(.+)$", part)
            if not con_match:
                raise InvalidMappingError(
                    f"query line {lineno}: cannot parse body item {part!r}"
                )
            left, op, right = con_match.groups()
            constraints.append(Constraint(Var(left), op, _parse_term(right)))
        cqs.append(ConjunctiveQuery(head_vars, atoms, constraints, name=name))
    if not cqs:
        raise InvalidMappingError("query text contains no rules")
    return UnionQuery(cqs, name=name)


def query_to_text(union: UnionQuery) -> str:
    return "\n".join(str(cq) for cq in union.cqs) + "\n"


def load_query(path) -> UnionQuery:
    return parse_query(Path(path).read_text())


# --- mappings -----------------------------------------------------------


def parse_mapping(data) -> UnionWordMapping:
    if isinstance(data, str):
        data = json.loads(data)
    if isinstance(data, dict):
        data = [data]
    return UnionWordMapping(
        [WordMapping({int(k): v for k, v in entry.items()}) for entry in data]
    )


def mapping_to_json(mapping: UnionWordMapping) -> list:
    return [
        {str(n): v for n, v in m.node_to_var.items()} for m in mapping.mappings
    ]


def load_mapping(path) -> UnionWordMapping:
    return parse_mapping(Path(path).read_text())
