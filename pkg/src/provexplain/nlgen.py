"""Sentence generation: rewrite the question tree into answer trees and
render single, factorized and summarized explanations from circuits.

The question tree is compiled once into a plan: an ordered list of value
slots (each accepting one or more word ids) with the surrounding scaffold
words attached.  The slot for a word knows how to phrase a value in that
position: connectors ("in 2014"), the copula for the sought object
("TAU is the organization"), quoting for titles.  Every rendering mode
then walks a circuit and fills slots, so all modes produce consistent
wording by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .circuit import Leaf, Sum, ordered_form
from .errors import (
    LookupFailedError,
    NoSiblingMappingError,
    UnhandledShapeError,
)
from .model import (
    Const,
    DEFAULT_STRUCTURE,
    DependencyNode,
    DependencyTree,
    NUMBER,
    Schema,
    StructureConfig,
    UnionQuery,
    UnionWordMapping,
    Value,
    validate_question_tree,
)
from .summarize import CountLeaf, RangeLeaf

KEPT = "KEPT"
REPLACED = "REPLACED"
INSERTED = "INSERTED"


@dataclass(frozen=True)
class RenderConfig:
    """Connector words per value category, the copula for the object slot
    and which categories render quoted.  Categories without a connector
    entry reuse the question's own modifier word."""

    connectors: tuple = (
        ("year", "in"),
        ("venue", "in"),
        ("location", "in"),
        ("affiliation", "from"),
        ("area", "in"),
    )
    copula: tuple = ("is", "the")
    quoted_categories: frozenset = frozenset({"title"})

    def connector_for(self, category: Optional[str], original_word: str) -> str:
        table = dict(self.connectors)
        if category in table:
            return table[category]
        return original_word


DEFAULT_RENDER = RenderConfig()


# --- planning: symbolic answer tree and slots ---------------------------


@dataclass
class _SymbolicNode:
    tag: str  # "kept" | "value" | "connector"
    key: tuple
    qnode_id: Optional[int] = None
    word: str = ""
    accepts: frozenset = frozenset()
    copula: tuple = ()
    alternation: str = "or"
    children: list = field(default_factory=list)


@dataclass
class Slot:
    index: int
    word_ids: frozenset
    prefix: tuple
    copula: tuple
    suffix: tuple
    category: Optional[str]
    numeric: bool
    alternation: str = "or"

    def format_value(self, value: Value, render: RenderConfig) -> str:
        text = value.text
        if self.category in render.quoted_categories:
            return f"'{text}'"
        return text

    def phrase(self, body: str) -> list[str]:
        return list(self.prefix) + [body] + list(self.copula) + list(self.suffix)


class Plan:
    def __init__(
        self,
        tree: DependencyTree,
        union: UnionQuery,
        mapping: UnionWordMapping,
        slots: list,
        symbolic_root: _SymbolicNode,
        render: RenderConfig,
        head_word_ids: frozenset,
    ):
        self.tree = tree
        self.union = union
        self.mapping = mapping
        self.slots = slots
        self.symbolic_root = symbolic_root
        self.render = render
        self.head_word_ids = head_word_ids
        self.slot_by_word: dict = {}
        for slot in slots:
            for wid in slot.word_ids:
                if wid in self.slot_by_word:
                    raise UnhandledShapeError(
                        f"word {wid} claimed by two slots"
                    )
                self.slot_by_word[wid] = slot

    def question_word(self, word_id: int) -> str:
        return self.tree.node(self.mapping.node_of_word_id[word_id]).word

    def slot_for(self, word_id: int) -> Slot:
        slot = self.slot_by_word.get(word_id)
        if slot is None:
            raise LookupFailedError(
                f"word {word_id} has no position in the answer tree"
            )
        return slot


class _PlanBuilder:
    def __init__(self, tree, union, mapping, schema, structure, render):
        self.tree = tree
        self.union = union
        self.mapping = mapping
        self.schema = schema
        self.structure = structure
        self.render = render
        self.word_meta: dict = {}
        for idx, member in enumerate(mapping.mappings):
            cq = union.cqs[idx]
            for node_id, var in member.node_to_var.items():
                wid = mapping.word_id_of_node[node_id]
                if wid in self.word_meta:
                    continue
                found = cq.attribute_of(schema, var)
                category = found[1].category if found else None
                numeric = bool(found) and found[1].kind == NUMBER
                self.word_meta[wid] = (category, numeric)

    # -- helpers

    def _mapped(self, node: DependencyNode) -> bool:
        return node.id in self.mapping.word_id_of_node

    def _wid(self, node: DependencyNode) -> int:
        return self.mapping.word_id_of_node[node.id]

    def _meta(self, accepts: Iterable[int]) -> tuple:
        for wid in sorted(accepts):
            if wid in self.word_meta:
                return self.word_meta[wid]
        return (None, False)

    def _conj_group(self, node: DependencyNode) -> list[DependencyNode]:
        """node plus coordinate alternatives reached through conj edges."""
        group = [node]
        stack = [node]
        while stack:
            cur = stack.pop()
            for child in cur.children:
                if child.rel == "conj":
                    group.append(child)
                    stack.append(child)
        return group

    def _alternation_word(self, nodes: list) -> str:
        """The coordinating word of a group ("or"/"and"), if present."""
        for node in nodes:
            for sub in node.children:
                if sub.rel == "cc" or sub.word.lower() in self.structure.logical_ops:
                    return sub.word
        return "or"

    def _subtree_has_mapped(self, root: DependencyNode) -> bool:
        return any(
            node_id in self.mapping.word_id_of_node
            for node_id in self.tree.subtree_ids(root.id)
        )

    def _constant_attributes(self) -> list[tuple]:
        """(value, (relation, attribute name)) for every comparison
        constant in the union."""
        out = []
        for cq in self.union.cqs:
            for con in cq.constraints:
                if isinstance(con.right, Const):
                    found = cq.attribute_of(self.schema, con.left.name)
                    if found:
                        out.append((con.right.value, (found[0], found[1].name)))
        return out

    def _attribute_key(self, node: DependencyNode) -> Optional[tuple]:
        """Schema position of the variable a node maps to, if any."""
        for idx, member in enumerate(self.mapping.mappings):
            var = member.node_to_var.get(node.id)
            if var is not None:
                found = self.union.cqs[idx].attribute_of(self.schema, var)
                if found:
                    return (found[0], found[1].name)
        return None

    # -- tree transformation

    def build(self) -> tuple:
        report = validate_question_tree(self.tree, self.structure)
        obj = self.tree.node(report.object_id)
        root = self._transform_object(obj)
        return root, self._head_word_ids()

    def _head_word_ids(self) -> frozenset:
        wids = set()
        for idx, member in enumerate(self.mapping.mappings):
            cq = self.union.cqs[idx]
            for var in cq.head_vars:
                node_id = member.var_to_node.get(var)
                if node_id is not None:
                    wids.add(self.mapping.word_id_of_node[node_id])
        return frozenset(wids)

    def _transform_object(self, obj: DependencyNode) -> _SymbolicNode:
        mods = [c for c in obj.children if self.structure.is_modifier(c.rel)]
        verb_mods = [m for m in mods if self.structure.is_verb(m.pos)]
        if self._mapped(obj) and verb_mods:
            # The sought noun itself is replaced; its relative clause turns
            # into the main clause, so relative pronouns go.
            node = _SymbolicNode(
                "value",
                key=(obj.id, 0),
                qnode_id=obj.id,
                accepts=frozenset({self._wid(obj)}),
            )
            for mod in mods:
                node.children.append(self._kept_modifier(mod, drop_relpron=True))
            return node
        if self._mapped(obj):
            node = _SymbolicNode("kept", key=(obj.id, 0), qnode_id=obj.id, word=obj.word)
            node.children.append(
                _SymbolicNode(
                    "value",
                    key=(obj.id, -1),
                    qnode_id=obj.id,
                    accepts=frozenset({self._wid(obj)}),
                    copula=self.render.copula,
                )
            )
            for mod in mods:
                node.children.append(self._kept_modifier(mod, drop_relpron=False))
            return node
        node = _SymbolicNode("kept", key=(obj.id, 0), qnode_id=obj.id, word=obj.word)
        for mod in mods:
            node.children.append(self._kept_modifier(mod, drop_relpron=False))
        return node

    def _kept_modifier(
        self, mod: DependencyNode, drop_relpron: bool
    ) -> _SymbolicNode:
        """A modifier of a replaced or kept noun: its own word stays, its
        children are rewritten."""
        node = _SymbolicNode("kept", key=(mod.id, 0), qnode_id=mod.id, word=mod.word)
        children = mod.children
        if drop_relpron:
            children = [
                c
                for c in children
                if c.word.lower() not in self.structure.relative_pronouns
            ]
        node.children.extend(self._transform_children(children))
        return node

    def _transform_children(self, children: list, skip: frozenset = frozenset()) -> list:
        out: list[_SymbolicNode] = []
        consumed: set = set(skip)
        for unit in self._collapse_logical(children, consumed):
            out.append(unit)
        for child in children:
            if child.id in consumed:
                continue
            transformed = self._dispatch(child)
            if transformed is not None:
                out.append(transformed)
        return out

    def _collapse_logical(self, children: list, consumed: set) -> list:
        """Handle explicit and/or between comparison subtrees: the whole
        group collapses to one value slot for the satisfying value."""
        units = []
        for child in children:
            if self._mapped(child):
                continue
            ops = [
                c
                for c in child.children
                if c.word.lower() in self.structure.logical_ops
            ]
            if not ops or child.id in consumed:
                continue
            group = self._logical_group(children, child)
            accepts = set()
            for member in group:
                for sub in member.children:
                    if self._mapped(sub):
                        accepts.add(self._wid(sub))
            if not accepts:
                raise NoSiblingMappingError(
                    f"logical operator under {child.word!r} has no mapped "
                    "comparison value among its group"
                )
            anchor = min(member.id for member in group)
            category, numeric = self._meta(accepts)
            connector = self.render.connector_for(category, child.word)
            unit = _SymbolicNode(
                "connector", key=(anchor, 0), qnode_id=None, word=connector
            )
            unit.children.append(
                _SymbolicNode(
                    "value",
                    key=(anchor, 1),
                    qnode_id=None,
                    accepts=frozenset(accepts),
                    alternation=ops[0].word,
                )
            )
            for member in group:
                consumed.add(member.id)
            units.append(unit)
        return units

    def _logical_group(self, children: list, op_holder: DependencyNode) -> list:
        """Sibling comparison subtrees talking about the same schema
        attribute as the operator's own subtree."""
        constants = self._constant_attributes()

        def attr_of(node: DependencyNode) -> Optional[tuple]:
            for sub in node.children:
                key = self._attribute_key(sub)
                if key is not None:
                    return key
            for sub in node.children:
                if self._mapped(sub):
                    continue
                for const_value, key in constants:
                    if sub.word == const_value.text:
                        return key
            return None

        target = attr_of(op_holder)
        if target is None:
            raise NoSiblingMappingError(
                f"cannot type the comparison under {op_holder.word!r}"
            )
        group = []
        for child in children:
            if child is op_holder:
                group.append(child)
                continue
            if self.structure.is_modifier(child.rel) and attr_of(child) == target:
                group.append(child)
        return group

    def _dispatch(self, child: DependencyNode) -> Optional[_SymbolicNode]:
        if self._mapped(child):
            return self._value_node(child)
        if child.word.lower() in self.structure.logical_ops and not child.children:
            return None  # stray operator word, consumed by its group
        if self.structure.is_modifier(child.rel):
            direct = [d for d in child.children if self._mapped(d)]
            if direct:
                return self._modifier_unit(child, direct)
            if self._subtree_has_mapped(child):
                # scaffold word over deeper mapped content: keep the word,
                # rewrite below it
                node = _SymbolicNode(
                    "kept", key=(child.id, 0), qnode_id=child.id, word=child.word
                )
                node.children.extend(self._transform_children(child.children))
                return node
            if child.rel in self.structure.compound_rels:
                return None
            return self._kept_subtree(child)
        node = _SymbolicNode(
            "kept", key=(child.id, 0), qnode_id=child.id, word=child.word
        )
        node.children.extend(self._transform_children(child.children))
        return node

    def _value_node(self, node: DependencyNode) -> _SymbolicNode:
        """A mapped node is replaced by its value; coordinated mapped
        alternatives fold into the same slot."""
        group = self._conj_group(node)
        accepts = frozenset(self._wid(n) for n in group if self._mapped(n))
        out = _SymbolicNode(
            "value",
            key=(node.id, 0),
            qnode_id=node.id,
            accepts=accepts,
            alternation=self._alternation_word(group),
        )
        for member in group:
            for sub in member.children:
                if sub.rel == "conj" or sub.word.lower() in self.structure.logical_ops:
                    continue
                if sub.rel in self.structure.compound_rels:
                    continue
                if self.structure.is_modifier(sub.rel):
                    transformed = self._dispatch(sub)
                    if transformed is not None:
                        out.children.append(transformed)
        return out

    def _modifier_unit(self, mod: DependencyNode, direct: list) -> _SymbolicNode:
        """An unmapped modifier with mapped values directly below it: the
        unit collapses to connector + value.  Verb modifiers keep their
        own word; other modifiers may be renamed by value category."""
        tops: list[DependencyNode] = []
        for head in direct:
            for member in self._conj_group(head):
                if all(member.id != seen.id for seen in tops):
                    tops.append(member)
        accepts = frozenset(self._wid(t) for t in tops if self._mapped(t))
        category, _numeric = self._meta(accepts)
        is_verb = any(
            mod.pos.startswith(p) for p in self.structure.verb_pos_prefixes
        )
        if is_verb:
            unit = _SymbolicNode(
                "kept", key=(mod.id, 0), qnode_id=mod.id, word=mod.word
            )
        else:
            unit = _SymbolicNode(
                "connector",
                key=(mod.id, 0),
                qnode_id=mod.id,
                word=self.render.connector_for(category, mod.word),
            )
        value = _SymbolicNode(
            "value",
            key=(mod.id, 1),
            qnode_id=tops[0].id,
            accepts=accepts,
            alternation=self._alternation_word(tops),
        )
        for top in tops:
            for sub in top.children:
                if sub.rel == "conj" or sub.word.lower() in self.structure.logical_ops:
                    continue
                if sub.rel in self.structure.compound_rels:
                    continue
                if self.structure.is_modifier(sub.rel):
                    transformed = self._dispatch(sub)
                    if transformed is not None:
                        value.children.append(transformed)
        claimed = frozenset(top.id for top in tops)
        for extra in self._transform_children(mod.children, skip=claimed):
            target = unit if extra.key < value.key else value
            target.children.append(extra)
        unit.children.append(value)
        return unit

    def _kept_subtree(self, node: DependencyNode) -> _SymbolicNode:
        out = _SymbolicNode(
            "kept", key=(node.id, 0), qnode_id=node.id, word=node.word
        )
        for child in node.children:
            out.children.append(self._kept_subtree(child))
        return out


def _linearize(node: _SymbolicNode) -> list[_SymbolicNode]:
    """In-order walk: children with keys before the node's own key come
    first (determiner-style insertions), the rest after."""
    ordered = sorted(node.children, key=lambda c: c.key)
    left = [c for c in ordered if c.key < node.key]
    right = [c for c in ordered if c.key >= node.key]
    out: list[_SymbolicNode] = []
    for child in left:
        out.extend(_linearize(child))
    out.append(node)
    for child in right:
        out.extend(_linearize(child))
    return out


def build_plan(
    tree: DependencyTree,
    query,
    mapping,
    schema: Schema,
    structure: StructureConfig = DEFAULT_STRUCTURE,
    render: RenderConfig = DEFAULT_RENDER,
) -> Plan:
    union = UnionQuery.wrap(query)
    union_mapping = UnionWordMapping.wrap(mapping)
    builder = _PlanBuilder(tree, union, union_mapping, schema, structure, render)
    symbolic_root, head_wids = builder.build()

    slots: list[Slot] = []
    pending_prefix: list[str] = []
    for atom in _linearize(symbolic_root):
        if atom.tag == "kept":
            if slots:
                last = slots[-1]
                slots[-1] = Slot(
                    last.index,
                    last.word_ids,
                    last.prefix,
                    last.copula,
                    last.suffix + (atom.word,),
                    last.category,
                    last.numeric,
                    last.alternation,
                )
            else:
                pending_prefix.append(atom.word)
        elif atom.tag == "connector":
            pending_prefix.append(atom.word)
        elif atom.tag == "value":
            category, numeric = builder._meta(atom.accepts)
            slots.append(
                Slot(
                    index=len(slots),
                    word_ids=atom.accepts,
                    prefix=tuple(pending_prefix),
                    copula=atom.copula,
                    suffix=(),
                    category=category,
                    numeric=numeric,
                    alternation=atom.alternation,
                )
            )
            pending_prefix = []

    plan = Plan(tree, union, union_mapping, slots, symbolic_root, render, head_wids)
    missing = [
        wid for wid in union_mapping.word_id_of_node.values()
        if wid not in plan.slot_by_word
    ]
    if missing:
        raise UnhandledShapeError(
            f"mapped words {sorted(missing)} found no place in the answer tree"
        )
    return plan


# --- answer trees -------------------------------------------------------


@dataclass
class AnswerNode:
    tag: str
    text: str
    qnode_id: Optional[int]
    children: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "tag": self.tag,
            "text": self.text,
            "node": self.qnode_id,
            "children": [c.to_json() for c in self.children],
        }


class AnswerTree:
    def __init__(self, root: AnswerNode, tokens: list):
        self.root = root
        self._tokens = tokens

    def tokens(self) -> list[str]:
        return list(self._tokens)

    def sentence(self) -> str:
        return " ".join(self._tokens)

    def to_json(self) -> dict:
        return self.root.to_json()


def compute_answer_tree(plan: Plan, monomial) -> AnswerTree:
    """Instantiate the plan with one assignment's values (the classic
    single-assignment answer)."""
    values = {wid: value for wid, value in monomial}

    def instantiate(node: _SymbolicNode) -> Optional[AnswerNode]:
        if node.tag == "value":
            hit = [wid for wid in sorted(node.accepts) if wid in values]
            if not hit:
                return None
            wid = hit[0]
            slot = plan.slot_for(wid)
            text = slot.format_value(values[wid], plan.render)
            if node.copula:
                text = " ".join([text, *node.copula])
                tag = INSERTED
            else:
                tag = REPLACED
            out = AnswerNode(tag, text, node.qnode_id)
        elif node.tag == "connector":
            out = AnswerNode(INSERTED, node.word, node.qnode_id)
        else:
            out = AnswerNode(KEPT, node.word, node.qnode_id)
        for child in sorted(node.children, key=lambda c: c.key):
            built = instantiate(child)
            if built is not None:
                out.children.append(built)
        # A connector with nothing to connect disappears (the value sat on
        # the other branch of an or-group).
        if node.tag == "connector" and not out.children:
            return None
        return out

    root = instantiate(plan.symbolic_root)
    if root is None:
        raise LookupFailedError("assignment fills no slot of the plan")

    tokens: list[str] = []

    def emit(sym: _SymbolicNode) -> list[str]:
        ordered = sorted(sym.children, key=lambda c: c.key)
        left = [c for c in ordered if c.key < sym.key]
        right = [c for c in ordered if c.key >= sym.key]
        out: list[str] = []
        for child in left:
            out.extend(emit(child))
        if sym.tag == "value":
            hit = [wid for wid in sorted(sym.accepts) if wid in values]
            if hit:
                slot = plan.slot_for(hit[0])
                out.append(slot.format_value(values[hit[0]], plan.render))
                out.extend(sym.copula)
        elif sym.tag == "connector":
            hit = any(
                wid in values
                for child in sym.children
                for wid in child.accepts
            )
            if hit:
                out.append(sym.word)
        else:
            out.append(sym.word)
        for child in right:
            out.extend(emit(child))
        return out

    tokens = emit(plan.symbolic_root)
    return AnswerTree(root, tokens)


def render(answer_tree: AnswerTree) -> str:
    """Single-assignment sentence: tokens joined by single spaces, no
    terminal punctuation."""
    return answer_tree.sentence()


# --- factorized answers -------------------------------------------------


@dataclass
class FactNode:
    """One multiplicative group: its own phrases plus alternative
    branches, one list per nested sum.  Tokens spell the group's line
    word by word, scaffold words repeated per branch as in the question."""

    phrases: list  # (slot, kind, payload); kind in {"value", "count", "range"}
    branches: list  # list of lists of FactNode
    tokens: list = field(default_factory=list)  # (text, role, slot index)

    def to_json(self) -> dict:
        return {
            "phrases": [
                {"slot": slot.index, "kind": kind, "text": text}
                for slot, kind, text in self.phrases
            ],
            "tokens": [
                {"text": text, "role": role, "slot": slot_index}
                for text, role, slot_index in self.tokens
            ],
            "branches": [
                [alt.to_json() for alt in branch] for branch in self.branches
            ],
        }


def compute_fact_answer_tree(plan: Plan, circuit) -> FactNode:
    """Rearrange the answer tree along a factorized circuit: values pulled
    out early appear before the branches they govern.  The circuit's
    alternatives are put in display order here, so callers may pass
    circuits with children in any order."""
    circuit = ordered_form(circuit)

    def leaf_phrase(leaf) -> tuple:
        if isinstance(leaf, Leaf):
            slot = plan.slot_for(leaf.word_id)
            return (slot, "value", slot.format_value(leaf.value, plan.render))
        if isinstance(leaf, CountLeaf):
            slot = plan.slot_for(leaf.word_id)
            text = f"{leaf.count} {plan.question_word(leaf.word_id)}"
            return (slot, "count", text)
        if isinstance(leaf, RangeLeaf):
            slot = plan.slot_for(leaf.word_id)
            text = f"{leaf.low.text} - {leaf.high.text}"
            return (slot, "range", text)
        raise LookupFailedError(f"cannot phrase circuit node {leaf!r}")

    def merge_same_slot(phrases: list) -> list:
        """Values landing in one slot (coordinated question words) share
        its scaffold, joined by the question's own "or"/"and"."""
        out: list = []
        for entry in phrases:
            if out and out[-1][0] is entry[0]:
                slot, kind, text = out[-1]
                joined = f"{text} {slot.alternation} {entry[2]}"
                out[-1] = (slot, kind, joined)
            else:
                out.append(entry)
        return out

    def materialize_tokens(phrases: list) -> list:
        """The group's word-by-word line: every branch restates the
        scaffold words around its values, like the question tree would."""
        tokens: list = []
        for slot, kind, text in phrases:
            for word in slot.prefix:
                tokens.append((word, "scaffold", slot.index))
            tokens.append((text, kind, slot.index))
            for word in slot.copula:
                tokens.append((word, "scaffold", slot.index))
            for word in slot.suffix:
                tokens.append((word, "scaffold", slot.index))
        return tokens

    def build(node) -> FactNode:
        if isinstance(node, (Leaf, CountLeaf, RangeLeaf)):
            phrases = [leaf_phrase(node)]
            return FactNode(phrases, [], materialize_tokens(phrases))
        if isinstance(node, Sum):
            return FactNode([], [[build(child) for child in node.children]])
        phrases = []
        branches = []
        for child in node.children:
            if isinstance(child, (Leaf, CountLeaf, RangeLeaf)):
                phrases.append(leaf_phrase(child))
            elif isinstance(child, Sum):
                branches.append([build(alt) for alt in child.children])
            else:  # a nested product would violate canonical form
                raise LookupFailedError("non-canonical circuit")
        phrases.sort(key=lambda entry: entry[0].index)
        merged = merge_same_slot(phrases)
        return FactNode(merged, branches, materialize_tokens(merged))

    return build(circuit)


def fact_lines(node: FactNode, indent: int = 0) -> list[tuple]:
    """(indent, text) lines: one line for the group's own phrases, then
    each alternative on its own indented lines, joined by "and"."""
    lines: list[tuple] = []
    child_indent = indent
    if node.tokens:
        lines.append((indent, " ".join(text for text, _r, _s in node.tokens)))
        child_indent = indent + 1
    for branch in node.branches:
        for i, alt in enumerate(branch):
            sub = fact_lines(alt, child_indent)
            if i > 0 and sub:
                first_indent, first_text = sub[0]
                sub = [(first_indent, "and " + first_text)] + sub[1:]
            lines.extend(sub)
    return lines


def render_fact(fact_tree: FactNode, terminal: str = ".") -> dict:
    lines = fact_lines(fact_tree)
    if lines and terminal:
        last_indent, last_text = lines[-1]
        lines = lines[:-1] + [(last_indent, last_text + terminal)]
    pretty = "\n".join("  " * ind + text for ind, text in lines)
    canonical = " ".join(text for _ind, text in lines)
    return {"pretty": pretty, "canonical": canonical}


def render_single(plan: Plan, monomial) -> str:
    return compute_answer_tree(plan, monomial).sentence()
