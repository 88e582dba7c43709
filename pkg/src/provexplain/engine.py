"""Query evaluation with value-level provenance.

An assignment binds every atom of one union member to a concrete row.
Rows are identified by their position in the table, so duplicate tuples
yield distinct assignments.  Provenance attaches, per distinct answer, one
monomial per assignment; a monomial is the set of (word id, value) pairs
for the words mapped into the source member's variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import UnknownRelationError, UnmappedHeadError
from .model import (
    ConjunctiveQuery,
    Const,
    Database,
    DependencyTree,
    EQ,
    GT,
    LT,
    UnionQuery,
    UnionWordMapping,
    Value,
    Var,
)


@dataclass(frozen=True)
class Assignment:
    """One satisfying binding: which row each atom matched and the variable
    valuation it induces."""

    cq_index: int
    atom_rows: tuple
    bindings: tuple  # sorted (var, Value) pairs

    def value(self, var: str) -> Value:
        for name, val in self.bindings:
            if name == var:
                return val
        raise KeyError(var)

    def binding_map(self) -> dict:
        return dict(self.bindings)


Monomial = tuple  # sorted tuple of (word_id, Value) pairs


@dataclass
class AnswerProvenance:
    answer: tuple  # tuple of Values, one per head variable
    monomials: list  # Monomial per assignment, in evaluation order
    assignments: list

    @property
    def key(self):
        return tuple(v.sort_key() for v in self.answer)


def _check_constraint(op: str, left: Value, right: Value) -> bool:
    if op == EQ:
        return left == right
    if left.kind != right.kind:
        return False
    if op == LT:
        return left.sort_key() < right.sort_key()
    if op == GT:
        return left.sort_key() > right.sort_key()
    raise ValueError(f"unknown operator {op}")


class _Evaluator:
    """Backtracking join over the atoms in written order, with hash indexes
    on (relation, position) so bound positions never trigger full scans.
    Results do not depend on atom order (set semantics over bindings plus
    row identities)."""

    def __init__(self, db: Database, cq: ConjunctiveQuery, cq_index: int):
        self.db = db
        self.cq = cq
        self.cq_index = cq_index
        self.indexes: dict = {}
        for atom in cq.atoms:
            if atom.relation not in db.schema:
                raise UnknownRelationError(f"unknown relation {atom.relation}")
            rel = db.schema.relation(atom.relation)
            if len(atom.terms) != rel.arity:
                raise UnknownRelationError(
                    f"{atom.relation} used with {len(atom.terms)} terms, "
                    f"declared arity {rel.arity}"
                )

    def _index(self, relation: str, position: int) -> dict:
        key = (relation, position)
        if key not in self.indexes:
            index: dict = {}
            for row_id, row in enumerate(self.db.rows(relation)):
                index.setdefault(row[position], []).append(row_id)
            self.indexes[key] = index
        return self.indexes[key]

    def _candidates(self, atom, bound: dict) -> Iterable[int]:
        """Row ids to try: use an index on the first fixed position."""
        fixed: Optional[tuple] = None
        for pos, term in enumerate(atom.terms):
            if isinstance(term, Const):
                fixed = (pos, term.value)
                break
            if term.name in bound:
                fixed = (pos, bound[term.name])
                break
        if fixed is None:
            return range(len(self.db.rows(atom.relation)))
        pos, value = fixed
        return self._index(atom.relation, pos)[value] if value in self._index(
            atom.relation, pos
        ) else ()

    def _matches(self, atom, row, bound: dict) -> Optional[dict]:
        new: dict = {}
        for term, cell in zip(atom.terms, row):
            if isinstance(term, Const):
                if term.value != cell:
                    return None
            else:
                expected = bound.get(term.name, new.get(term.name))
                if expected is None:
                    new[term.name] = cell
                elif expected != cell:
                    return None
        return new

    def _constraints_ok(self, bound: dict) -> bool:
        for con in self.cq.constraints:
            if con.left.name not in bound:
                continue
            right = (
                con.right.value
                if isinstance(con.right, Const)
                else bound.get(con.right.name)
            )
            if right is None:
                continue
            if not _check_constraint(con.op, bound[con.left.name], right):
                return False
        return True

    def run(self) -> list[Assignment]:
        results: list[Assignment] = []
        rows: list[int] = []

        def descend(atom_idx: int, bound: dict) -> None:
            if atom_idx == len(self.cq.atoms):
                results.append(
                    Assignment(
                        self.cq_index,
                        tuple(rows),
                        tuple(sorted(bound.items())),
                    )
                )
                return
            atom = self.cq.atoms[atom_idx]
            table = self.db.rows(atom.relation)
            for row_id in self._candidates(atom, bound):
                new = self._matches(atom, table[row_id], bound)
                if new is None:
                    continue
                merged = {**bound, **new}
                if not self._constraints_ok(merged):
                    continue
                rows.append(row_id)
                descend(atom_idx + 1, merged)
                rows.pop()

        descend(0, {})
        return results


def evaluate(query, db: Database) -> list[Assignment]:
    """All satisfying assignments of a query (or union of queries), in a
    deterministic order: union members in order, atoms in written order,
    candidate rows in table order."""
    union = UnionQuery.wrap(query)
    out: list[Assignment] = []
    for idx, cq in enumerate(union.cqs):
        out.extend(_Evaluator(db, cq, idx).run())
    return out


def answers_of(query, assignments: Iterable[Assignment]) -> list[tuple]:
    union = UnionQuery.wrap(query)
    seen: list[tuple] = []
    have = set()
    for assignment in assignments:
        cq = union.cqs[assignment.cq_index]
        answer = tuple(assignment.value(v) for v in cq.head_vars)
        if answer not in have:
            have.add(answer)
            seen.append(answer)
    return sorted(seen, key=lambda t: tuple(v.sort_key() for v in t))


def build_provenance(
    query,
    mapping,
    assignments: Iterable[Assignment],
) -> list[AnswerProvenance]:
    """Group assignments per distinct answer and translate each into a
    monomial over (word id, value) pairs.  Only mapped variables appear;
    for unions the per-member mappings are translated through the shared
    word numbering and joined as a multiset.

    Raises UnmappedHeadError when a member's head variable has no mapped
    word (no sentence could name the answer).
    """
    union = UnionQuery.wrap(query)
    union_mapping = UnionWordMapping.wrap(mapping)
    for idx, cq in enumerate(union.cqs):
        mapped_vars = set(union_mapping.for_cq(idx).var_to_node)
        missing = [v for v in cq.head_vars if v not in mapped_vars]
        if missing:
            raise UnmappedHeadError(
                f"head variable(s) {missing} of member {idx} have no mapped word"
            )
    grouped: dict = {}
    order: list = []
    for assignment in assignments:
        cq = union.cqs[assignment.cq_index]
        answer = tuple(assignment.value(v) for v in cq.head_vars)
        pairs = tuple(
            sorted(
                (word_id, assignment.value(var))
                for word_id, var in union_mapping.word_pairs(assignment.cq_index)
            )
        )
        if answer not in grouped:
            grouped[answer] = AnswerProvenance(answer, [], [])
            order.append(answer)
        grouped[answer].monomials.append(pairs)
        grouped[answer].assignments.append(assignment)
    return sorted((grouped[a] for a in order), key=lambda p: p.key)


def monomial_text(monomial: Monomial) -> str:
    return " · ".join(f"({w},{v.text})" for w, v in monomial)


def polynomial_text(monomials: Iterable[Monomial]) -> str:
    """Canonical text: pairs ordered by word id inside each monomial,
    monomials sorted."""
    ordered = sorted(
        monomials,
        key=lambda m: tuple((w, v.sort_key()) for w, v in m),
    )
    return " + ".join(monomial_text(m) for m in ordered)
