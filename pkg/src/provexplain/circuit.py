"""Circuits over provenance monomials: SUM/PRODUCT internal nodes with
(word id, value) leaves.

Canonical form guarantees: no SUM directly under a SUM, no PRODUCT under a
PRODUCT, internal nodes have at least two children (singletons collapse).
A polynomial is the special case of a SUM of flat PRODUCTs.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Union

from .model import Value

SUM = "sum"
PRODUCT = "product"
LEAF = "leaf"


@dataclass(frozen=True, slots=True)
class Leaf:
    word_id: int
    value: Value

    kind = LEAF

    @property
    def pair(self):
        return (self.word_id, self.value)


class _Internal:
    __slots__ = ("children",)

    def __init__(self, children):
        self.children = tuple(children)

    def __eq__(self, other):
        return type(other) is type(self) and other.children == self.children

    def __hash__(self):
        return hash((type(self).__name__, self.children))


class Prod(_Internal):
    kind = PRODUCT


class Sum(_Internal):
    kind = SUM


Circuit = Union[Leaf, Prod, Sum]


def product(children: Iterable[Circuit]) -> Circuit:
    flat: list[Circuit] = []
    for child in children:
        if isinstance(child, Prod):
            flat.extend(child.children)
        else:
            flat.append(child)
    if len(flat) == 1:
        return flat[0]
    return Prod(flat)


def summation(children: Iterable[Circuit]) -> Circuit:
    flat: list[Circuit] = []
    for child in children:
        if isinstance(child, Sum):
            flat.extend(child.children)
        else:
            flat.append(child)
    if len(flat) == 1:
        return flat[0]
    return Sum(flat)


def from_monomial(pairs) -> Circuit:
    return product(Leaf(w, v) for w, v in sorted(pairs, key=lambda p: p[0]))


def identity_circuit(monomials) -> Circuit:
    """The unfactorized SUM-of-PRODUCTs form of a polynomial."""
    return summation(from_monomial(m) for m in monomials)


def is_canonical(circuit: Circuit) -> bool:
    if isinstance(circuit, Leaf):
        return True
    if len(circuit.children) < 2:
        return False
    for child in circuit.children:
        if type(child) is type(circuit):
            return False
        if not is_canonical(child):
            return False
    return True


def leaves(circuit: Circuit) -> list[Leaf]:
    out: list[Leaf] = []
    stack = [circuit]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            out.append(node)
        else:
            stack.extend(reversed(node.children))
    return out


def length(circuit: Circuit) -> int:
    """Leaf occurrences, counted with multiplicity."""
    return len(leaves(circuit))


def readability(circuit: Circuit) -> int:
    """Highest number of times any single (word id, value) pair occurs."""
    counts = Counter(leaf.pair for leaf in leaves(circuit))
    return max(counts.values()) if counts else 0


def levels(circuit: Circuit) -> dict:
    """Map id(node) -> level, where the root sits at 0 and every edge
    steps down by one."""
    out = {id(circuit): 0}
    stack = [(circuit, 0)]
    while stack:
        node, depth = stack.pop()
        if not isinstance(node, Leaf):
            for child in node.children:
                out[id(child)] = depth - 1
                stack.append((child, depth - 1))
    return out


def level(circuit: Circuit, node: Circuit) -> int:
    table = levels(circuit)
    if id(node) not in table:
        raise KeyError("node is not part of the circuit")
    return table[id(node)]


def expand(circuit: Circuit) -> Counter:
    """Multiset of monomials the circuit denotes.  Monomials are sorted
    pair tuples; repeated pairs inside one expansion are kept."""

    def walk(node: Circuit) -> list[tuple]:
        if isinstance(node, Leaf):
            return [(node.pair,)]
        if isinstance(node, Sum):
            out: list[tuple] = []
            for child in node.children:
                out.extend(walk(child))
            return out
        parts = [walk(child) for child in node.children]
        combos: list[tuple] = [()]
        for part in parts:
            combos = [
                existing + extra for existing in combos for extra in part
            ]
        return combos

    return Counter(
        tuple(sorted(m, key=lambda p: (p[0], p[1].sort_key()))) for m in walk(circuit)
    )


def expansions_with_leaves(circuit: Circuit) -> list[tuple]:
    """Each expansion as (monomial, pair -> leaf nodes used).  One entry
    per choice of SUM branches; used to resolve which leaf produced which
    pair of an assignment.  A pair repeated inside one expansion keeps all
    its leaves."""

    def walk(node: Circuit) -> list[list]:
        if isinstance(node, Leaf):
            return [[node]]
        if isinstance(node, Sum):
            out: list[list] = []
            for child in node.children:
                out.extend(walk(child))
            return out
        combos: list[list] = [[]]
        for child in node.children:
            part = walk(child)
            combos = [got + extra for got in combos for extra in part]
        return combos

    out = []
    for chosen in walk(circuit):
        monomial = tuple(
            sorted(
                (leaf.pair for leaf in chosen),
                key=lambda p: (p[0], p[1].sort_key()),
            )
        )
        by_pair: dict = {}
        for leaf in chosen:
            by_pair.setdefault(leaf.pair, []).append(leaf)
        out.append((monomial, by_pair))
    return out


def serialize(circuit: Circuit) -> str:
    """One-line text form: products with ·, sums with +, leaves as
    [value]."""

    def walk(node: Circuit, parenthesize_sum: bool) -> str:
        if isinstance(node, Leaf):
            return f"[{node.value.text}]"
        if isinstance(node, Prod):
            return " · ".join(walk(c, True) for c in node.children)
        body = " + ".join(walk(c, False) for c in node.children)
        return f"({body})" if parenthesize_sum else body

    return walk(circuit, False)


def canonical_key(circuit: Circuit):
    """Order-insensitive structural key: equal keys mean the circuits are
    identical up to reordering children (commutativity)."""
    if isinstance(circuit, Leaf):
        return (LEAF, circuit.word_id, circuit.value.sort_key())
    keys = sorted(canonical_key(c) for c in circuit.children)
    return (circuit.kind, tuple(keys))


def ordered_form(circuit):
    """Display order for rendering: every SUM's alternatives sorted by
    descending expansion weight, then descending canonical key (reverse
    sort is stable, so full ties keep construction order).  PRODUCT child
    order is preserved.  Accepts circuits containing synopsis leaves."""
    keys: dict = {}

    def key_of(circ) -> tuple:
        got = keys.get(id(circ))
        if got is None:
            if isinstance(circ, Leaf):
                got = (LEAF, circ.word_id, circ.value.sort_key())
            elif isinstance(circ, (Prod, Sum)):
                got = (circ.kind, tuple(sorted(key_of(c) for c in circ.children)))
            else:
                low = getattr(circ, "low", None)
                detail = low.sort_key() if low is not None else (
                    (0, float(circ.count), "")
                )
                got = (LEAF, circ.word_id, detail)
            keys[id(circ)] = got
        return got

    def walk(circ) -> tuple:
        if not isinstance(circ, (Prod, Sum)):
            return circ, 1
        rebuilt = [walk(child) for child in circ.children]
        total = sum(n for _c, n in rebuilt)
        if isinstance(circ, Prod):
            return Prod([c for c, _n in rebuilt]), total
        ordered = sorted(
            ((c, n, key_of(c)) for c, n in rebuilt),
            key=lambda item: (item[1], item[2]),
            reverse=True,
        )
        return Sum([c for c, _n, _k in ordered]), total

    return walk(circuit)[0]


def to_json(circuit: Circuit) -> dict:
    if isinstance(circuit, Leaf):
        return {
            "leaf": {
                "word": circuit.word_id,
                "kind": circuit.value.kind,
                "value": circuit.value.data,
            }
        }
    key = PRODUCT if isinstance(circuit, Prod) else SUM
    return {key: [to_json(c) for c in circuit.children]}


def from_json(data: dict) -> Circuit:
    if "leaf" in data:
        payload = data["leaf"]
        return Leaf(payload["word"], Value(payload["kind"], payload["value"]))
    if PRODUCT in data:
        return product(from_json(c) for c in data[PRODUCT])
    if SUM in data:
        return summation(from_json(c) for c in data[SUM])
    raise ValueError(f"not a circuit node: {data!r}")
