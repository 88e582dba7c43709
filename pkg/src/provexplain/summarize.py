"""Summarize factorized circuits: collapse fully-detailed sub-circuits
into per-type synopses (distinct counts, or min - max ranges for numeric
values).

The summarization level is named by a question word: that word's type and
everything below it in the question order get summarized, while its strict
ancestors keep full detail.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .circuit import Leaf, Prod, Sum, product, summation
from .errors import InvalidParamsError, RangeOnNonNumericError
from .factorize import QuestionOrder
from .model import NUMBER, Value

COUNT = "count"
RANGE = "range"


@dataclass(frozen=True)
class CountLeaf:
    """Synopsis of one value type: how many distinct values occur."""

    word_id: int
    count: int
    values: tuple

    def to_json(self) -> dict:
        return {
            "kind": COUNT,
            "word": self.word_id,
            "count": self.count,
        }


@dataclass(frozen=True)
class RangeLeaf:
    """Synopsis of one numeric value type: the span of its values."""

    word_id: int
    low: Value
    high: Value
    count: int

    def to_json(self) -> dict:
        return {
            "kind": RANGE,
            "word": self.word_id,
            "low": self.low.text,
            "high": self.high.text,
            "count": self.count,
        }


@dataclass(frozen=True)
class SummarySpec:
    """What to summarize: `level` is a question word (or word id) naming
    the highest summarized type; `ops` overrides the synopsis kind per
    word id."""

    level: object
    ops: tuple = ()

    def op_for(self, word_id: int) -> Optional[str]:
        return dict(self.ops).get(word_id)


def resolve_level(order: QuestionOrder, level, head_word_ids=frozenset()) -> int:
    """Accept a word id or the question word naming it.  Question words
    win over ids for digit strings, so a numeric word like "2005" still
    resolves to its own position."""
    if isinstance(level, int):
        if level not in order.word_ids:
            raise InvalidParamsError(f"unknown summarization level {level!r}")
        wid = level
    else:
        text = str(level)
        matches = [
            wid
            for wid in order.word_ids
            if order.question_words.get(wid, "").lower() == text.lower()
        ]
        if matches:
            wid = matches[0]
        elif text.isdigit() and int(text) in order.word_ids:
            wid = int(text)
        else:
            raise InvalidParamsError(f"unknown summarization level {level!r}")
    if wid in head_word_ids:
        raise InvalidParamsError(
            "the answer itself cannot be summarized away; pick a level "
            "below it"
        )
    return wid


def available_levels(order: QuestionOrder, head_word_ids=frozenset()) -> list:
    """Summarizable types, top-down: (word id, question word)."""

    def depth(wid: int) -> int:
        return sum(
            1
            for other in order.word_ids
            if other != wid and order.leq(wid, other)
        )

    out = []
    for wid in sorted(order.word_ids, key=lambda w: (depth(w), w)):
        if wid in head_word_ids:
            continue
        out.append((wid, order.question_words.get(wid, str(wid))))
    return out


def _leaves_of(node) -> list:
    if isinstance(node, Leaf):
        return [node]
    if isinstance(node, (CountLeaf, RangeLeaf)):
        return []
    out = []
    for child in node.children:
        out.extend(_leaves_of(child))
    return out


def _word_ids_of(node) -> set:
    if isinstance(node, Leaf):
        return {node.word_id}
    if isinstance(node, (CountLeaf, RangeLeaf)):
        return {node.word_id}
    out: set = set()
    for child in node.children:
        out |= _word_ids_of(child)
    return out


def _synopsis(parts: list, spec: SummarySpec) -> list:
    """Replace a group of sibling factors by one synopsis per value type,
    ordered by word id.  A type with a single distinct value keeps it."""
    by_word: dict = {}
    for part in parts:
        for leaf in _leaves_of(part):
            by_word.setdefault(leaf.word_id, set()).add(leaf.value)
    out = []
    for wid in sorted(by_word):
        values = sorted(by_word[wid], key=Value.sort_key)
        numeric = all(v.kind == NUMBER for v in values)
        op = spec.op_for(wid) or (RANGE if numeric else COUNT)
        if op == RANGE and not numeric:
            raise RangeOnNonNumericError(
                f"range synopsis requested for non-numeric values of "
                f"word {wid}"
            )
        if len(values) == 1:
            out.append(Leaf(wid, values[0]))
        elif op == RANGE:
            out.append(RangeLeaf(wid, values[0], values[-1], len(values)))
        else:
            out.append(CountLeaf(wid, len(values), tuple(values)))
    return out


def summarize(circuit, order: QuestionOrder, spec: SummarySpec,
              head_word_ids=frozenset()):
    """Rewrite a circuit so that everything at or below the named level
    becomes synopses while higher levels keep their detail."""
    level_wid = resolve_level(order, spec.level, head_word_ids)
    keep = {
        wid
        for wid in order.word_ids
        if wid != level_wid and order.leq(level_wid, wid)
    }

    def summarizable(node) -> bool:
        return not (_word_ids_of(node) & keep)

    def rewrite(node):
        if isinstance(node, (Leaf, CountLeaf, RangeLeaf)):
            if isinstance(node, Leaf) and node.word_id not in keep:
                return _synopsis([node], spec)[0]
            return node
        if isinstance(node, Sum):
            return summation([rewrite(child) for child in node.children])
        # Product: the maximal run of fully-summarizable factors collapses
        # into one synopsis sequence at the first such position.
        group = [child for child in node.children if summarizable(child)]
        new_children = []
        emitted = False
        for child in node.children:
            if summarizable(child):
                if not emitted:
                    new_children.extend(_synopsis(group, spec))
                    emitted = True
                continue
            new_children.append(rewrite(child))
        return product(new_children)

    if summarizable(circuit):
        parts = _synopsis([circuit], spec)
        return parts[0] if len(parts) == 1 else product(parts)
    return rewrite(circuit)
