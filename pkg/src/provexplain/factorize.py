"""Factorization of provenance polynomials guided by the question tree.

The question induces a partial order on mapped words (descendant words sit
below their ancestors).  A factorization is acceptable when, for every
assignment, words lower in the question never end up strictly higher in
the circuit than their ancestors; the greedy pass pulls shared values out
frontier by frontier, from the order's maximal words downward, so the
result respects the order by construction.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .circuit import (
    Circuit,
    Leaf,
    expansions_with_leaves,
    leaves as circuit_leaves,
    levels,
    product,
    summation,
)
from .errors import InvalidParamsError, LeafNotFoundError, TemplateMismatchError
from .model import DependencyTree, UnionWordMapping


class QuestionOrder:
    """Partial order over the word ids of mapped nodes: x <= y when x's
    node lies in y's subtree.  Reflexive by construction."""

    def __init__(self, tree: DependencyTree, mapping):
        union_mapping = UnionWordMapping.wrap(mapping)
        self.mapping = union_mapping
        self.word_ids = tuple(
            union_mapping.word_id_of_node[n]
            for n in union_mapping.mapped_node_ids()
        )
        self.question_words = {
            union_mapping.word_id_of_node[n]: tree.node(n).word
            for n in union_mapping.mapped_node_ids()
        }
        self._leq: set = set()
        for x in self.word_ids:
            nx = union_mapping.node_of_word_id[x]
            for y in self.word_ids:
                ny = union_mapping.node_of_word_id[y]
                if tree.is_ancestor(ny, nx):
                    self._leq.add((x, y))

    def leq(self, x: int, y: int) -> bool:
        return (x, y) in self._leq

    def strictly_less(self, x: int, y: int) -> bool:
        return x != y and (x, y) in self._leq

    def pairs(self) -> set:
        return set(self._leq)

    def maximal(self, word_ids: Iterable[int]) -> list[int]:
        ids = set(word_ids)
        return sorted(
            x
            for x in ids
            if not any(self.strictly_less(x, y) for y in ids if y != x)
        )

    def chain(self) -> tuple:
        """Word ids comparable to every mapped word, ancestors first.
        These are the positions with an unambiguous hierarchy."""
        members = [
            x
            for x in self.word_ids
            if all(self.leq(x, y) or self.leq(y, x) for y in self.word_ids)
        ]
        members.sort(key=lambda x: sum(1 for y in self.word_ids if self.leq(y, x)))
        return tuple(reversed(members))


def question_order(tree: DependencyTree, mapping) -> QuestionOrder:
    return QuestionOrder(tree, mapping)


# --- compatibility ------------------------------------------------------


@dataclass
class CompatibilityReport:
    compatible: bool
    ambiguous: bool = False
    violations: list = field(default_factory=list)


def check_compatibility(
    circuit: Circuit, order: QuestionOrder, monomials: Iterable[tuple]
) -> CompatibilityReport:
    """Resolve, per assignment, which leaf realizes each of its pairs (the
    unique expansion covering the assignment's monomial) and test that
    question-descendant words never sit at a strictly higher level than
    their ancestors.  When several expansions cover one monomial with
    different level vectors the report is flagged ambiguous and all of
    them must pass."""
    monomials = list(monomials)
    known_pairs = {leaf.pair for leaf in circuit_leaves(circuit)}
    for m in monomials:
        for pair in m:
            if pair not in known_pairs:
                raise LeafNotFoundError(
                    f"pair ({pair[0]},{pair[1].text}) has no leaf in the circuit"
                )
    depth = levels(circuit)
    resolutions: dict = {}
    for monomial, by_pair in expansions_with_leaves(circuit):
        vec = {
            pair: frozenset(depth[id(leaf)] for leaf in pair_leaves)
            for pair, pair_leaves in by_pair.items()
        }
        resolutions.setdefault(monomial, []).append(vec)

    report = CompatibilityReport(compatible=True)
    for index, m in enumerate(monomials):
        vecs = resolutions.get(m)
        if not vecs:
            raise LeafNotFoundError(
                f"assignment {index} is not covered by any expansion"
            )
        distinct = {
            tuple(sorted((p, tuple(sorted(ls))) for p, ls in vec.items()))
            for vec in vecs
        }
        if len(distinct) > 1 or any(
            len(ls) > 1 for vec in vecs for ls in vec.values()
        ):
            report.ambiguous = True
        present = {pair[0]: pair for pair in m}
        for x in present:
            for y in present:
                if x == y or not order.strictly_less(x, y):
                    continue
                for vec in vecs:
                    lx = max(vec[present[x]])
                    ly = min(vec[present[y]])
                    if lx > ly:
                        report.compatible = False
                        report.violations.append((x, y, index, lx, ly))
    return report


def is_compatible(
    circuit: Circuit, order: QuestionOrder, monomials: Iterable[tuple]
) -> bool:
    return check_compatibility(circuit, order, monomials).compatible


# --- greedy factorization ----------------------------------------------


class _WProd:
    __slots__ = ("pairs", "subs")

    def __init__(self, pairs, subs=None):
        self.pairs = list(pairs)
        self.subs = list(subs or ())

    def size(self) -> int:
        return len(self.pairs) + len(self.subs)


class _WSum:
    __slots__ = ("items",)

    def __init__(self, items):
        self.items = list(items)


def _collect_pairs(root: _WSum, counts: Counter) -> None:
    bag: list = []
    stack = [root]
    while stack:
        node = stack.pop()
        for item in node.items:
            bag.extend(item.pairs)
            stack.extend(item.subs)
    counts.update(bag)


def _extract_in_scope(scope: _WSum, ordered_vars: list, blocked: set) -> None:
    candidates = set(ordered_vars)
    occurrences: dict = {}
    for idx, item in enumerate(scope.items):
        # a summand still holding a value of an already handled (higher)
        # word must stay as is: pulling anything above that value would
        # sink the higher word below its question descendants
        if any(wid in blocked for wid, _v in item.pairs):
            continue
        for pair in item.pairs:
            if pair in candidates:
                occurrences.setdefault(pair, []).append(idx)
    alive = [True] * len(scope.items)
    for pair in ordered_vars:
        bucket = occurrences.get(pair)
        if bucket is None or len(bucket) < 2:
            continue
        where = [
            idx
            for idx in bucket
            if alive[idx]
            and pair in scope.items[idx].pairs
            and scope.items[idx].size() > 1
        ]
        if len(where) < 2:
            continue
        residuals = []
        for idx in where:
            item = scope.items[idx]
            remaining = list(item.pairs)
            remaining.remove(pair)
            residuals.append(_WProd(remaining, item.subs))
        first = where[0]
        scope.items[first] = _WProd([pair], [_WSum(residuals)])
        for idx in where[1:]:
            alive[idx] = False
    scope.items = [item for idx, item in enumerate(scope.items) if alive[idx]]


def _freeze(node) -> Circuit:
    """Work structure -> canonical circuit, children in construction
    order.  Display ordering is a rendering concern (circuit.ordered_form)."""
    if isinstance(node, _WProd):
        frozen: list = [Leaf(w, v) for w, v in node.pairs]
        frozen.extend(_freeze(sub) for sub in node.subs)
        return product(frozen)
    return summation(_freeze(item) for item in node.items)


def greedy_factorize(monomials: Iterable[tuple], order: QuestionOrder) -> Circuit:
    """Pull shared values out of the polynomial, one question frontier at
    a time.  Within a round, candidate values are processed from most to
    least frequent (ties: lower word id, then value order); a value is
    taken out of a scope only when at least two of its summands share it,
    each keeps a non-empty residue, and none of them still holds a value
    of an earlier (higher) round, which would invert the question order.
    Scopes created during a round are processed for the remaining values
    of the same round."""
    monomials = [tuple(m) for m in monomials]
    if not monomials:
        raise InvalidParamsError("nothing to factorize")
    root = _WSum(
        [_WProd(sorted(m, key=lambda p: (p[0], p[1].sort_key()))) for m in monomials]
    )
    processed: set = set()
    universe = set(order.word_ids)
    while universe - processed:
        frontier = set(order.maximal(universe - processed))
        counts: Counter = Counter()
        _collect_pairs(root, counts)
        # pairs occurring once can never be shared by two summands
        ordered_vars = sorted(
            (pair for pair in counts if pair[0] in frontier and counts[pair] > 1),
            key=lambda pair: (-counts[pair], pair[0], pair[1].sort_key()),
        )
        if not ordered_vars:
            processed |= frontier
            continue
        worklist = [root]
        seen = set()
        while worklist:
            scope = worklist.pop()
            if id(scope) in seen:
                continue
            seen.add(id(scope))
            _extract_in_scope(scope, ordered_vars, processed)
            for item in scope.items:
                worklist.extend(item.subs)
        processed |= frontier
    return _freeze(root)


def combine_answers(circuits: Iterable[Circuit]) -> Circuit:
    """Join per-answer factorizations under one root."""
    return summation(circuits)


# --- structure reuse across answers ------------------------------------


@dataclass(frozen=True)
class Template:
    """Reusable outline of a factorized answer: the hierarchy chain whose
    values are replaced by variables.  Words off the chain have no fixed
    place and stay free."""

    chain: tuple


def build_template(order: QuestionOrder) -> Template:
    return Template(order.chain())


def factorize_with_template(
    template: Template,
    monomials: Iterable[tuple],
    order: QuestionOrder,
    answer_word: Optional[int] = None,
) -> Circuit:
    """Factorize a polynomial along a previously derived outline.  The
    greedy pass already groups chain words first (each chain word is a
    frontier of its own), so instantiating the outline and re-deriving it
    coincide; what the template adds is the up-front applicability check.

    Raises TemplateMismatchError when some assignment lacks a value for a
    chain word, in which case the caller should fall back to the plain
    greedy pass."""
    monomials = [tuple(m) for m in monomials]
    for w in template.chain:
        for index, m in enumerate(monomials):
            if not any(pair[0] == w for pair in m):
                raise TemplateMismatchError(
                    f"assignment {index} has no value for template word {w}"
                )
    return greedy_factorize(monomials, order)
