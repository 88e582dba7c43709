"""End-to-end runs: evaluate a question over a database, factorize each
answer's provenance and produce explanations in all three modes.

A run produces one report per answer carrying the representative single
sentence, the factorized sentence, size metrics against the unfactorized
form, the summarization levels on offer, and per-stage wall times.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from .circuit import Circuit, identity_circuit, length, readability
from .engine import build_provenance, evaluate, polynomial_text
from .errors import InvalidParamsError, LookupFailedError
from .factorize import QuestionOrder, check_compatibility, greedy_factorize
from .fixtures import Fixture, QueryFixture, load_fixture
from .model import DependencyTree, Schema
from .nlgen import (
    Plan,
    build_plan,
    compute_fact_answer_tree,
    render_fact,
    render_single,
)
from .summarize import SummarySpec, available_levels, resolve_level, summarize

SINGLE = "single"
FACTORIZED = "factorized"
SUMMARIZED = "summarized"
MODES = (SINGLE, FACTORIZED, SUMMARIZED)


@dataclass
class AnswerReport:
    """Everything the surfaces show about one answer."""

    index: int
    answer: tuple
    answer_text: str
    assignment_count: int
    monomials: list
    polynomial: str
    circuit: Circuit
    single_sentence: str
    factorized_canonical: str
    factorized_pretty: str
    factorized_length: int
    factorized_readability: int
    identity_length: int
    identity_readability: int
    compatible: bool
    levels: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "answer": [v.text for v in self.answer],
            "answer_text": self.answer_text,
            "assignments": self.assignment_count,
            "polynomial": self.polynomial,
            "single": self.single_sentence,
            "factorized": {
                "canonical": self.factorized_canonical,
                "pretty": self.factorized_pretty,
            },
            "metrics": {
                "factorized_length": self.factorized_length,
                "factorized_readability": self.factorized_readability,
                "identity_length": self.identity_length,
                "identity_readability": self.identity_readability,
                "compatible": self.compatible,
            },
            "levels": [
                {"word_id": wid, "word": word} for wid, word in self.levels
            ],
        }


@dataclass
class RunResult:
    fixture: str
    query: str
    question: str
    plan: Plan
    order: QuestionOrder
    answers: list
    timings: dict

    def answer(self, index: int) -> AnswerReport:
        if not 0 <= index < len(self.answers):
            raise LookupFailedError(
                f"answer index {index} out of range (have {len(self.answers)})"
            )
        return self.answers[index]

    def to_json(self) -> dict:
        return {
            "fixture": self.fixture,
            "query": self.query,
            "question": self.question,
            "answers": [report.to_json() for report in self.answers],
            "timings": self.timings,
        }


def execute(
    fixture: Fixture,
    query_fixture: QueryFixture,
    tree: Optional[DependencyTree] = None,
    schema: Optional[Schema] = None,
) -> RunResult:
    """Run one packaged question end to end.  Pass tree/schema to
    override the fixture's own (used by the inline service path)."""
    tree = tree if tree is not None else query_fixture.tree
    schema = schema if schema is not None else fixture.schema
    plan = build_plan(tree, query_fixture.query, query_fixture.mapping, schema)
    order = QuestionOrder(tree, query_fixture.mapping)

    t0 = time.perf_counter()
    assignments = evaluate(query_fixture.query, fixture.database)
    provs = build_provenance(
        query_fixture.query, query_fixture.mapping, assignments
    )
    t1 = time.perf_counter()

    factorize_time = 0.0
    sentence_time = 0.0
    reports = []
    levels = available_levels(order, plan.head_word_ids)
    for idx, prov in enumerate(provs):
        f0 = time.perf_counter()
        circuit = greedy_factorize(prov.monomials, order)
        f1 = time.perf_counter()
        single = render_single(plan, prov.monomials[0])
        fact = render_fact(compute_fact_answer_tree(plan, circuit))
        f2 = time.perf_counter()
        factorize_time += f1 - f0
        sentence_time += f2 - f1
        identity = identity_circuit(prov.monomials)
        report = AnswerReport(
            index=idx,
            answer=prov.answer,
            answer_text=", ".join(v.text for v in prov.answer),
            assignment_count=len(prov.monomials),
            monomials=list(prov.monomials),
            polynomial=polynomial_text(prov.monomials),
            circuit=circuit,
            single_sentence=single,
            factorized_canonical=fact["canonical"],
            factorized_pretty=fact["pretty"],
            factorized_length=length(circuit),
            factorized_readability=readability(circuit),
            identity_length=length(identity),
            identity_readability=readability(identity),
            compatible=check_compatibility(
                circuit, order, prov.monomials
            ).compatible,
            levels=list(levels),
        )
        reports.append(report)
    timings = {
        "evaluate_s": t1 - t0,
        "factorize_s": factorize_time,
        "sentences_s": sentence_time,
        "total_s": (t1 - t0) + factorize_time + sentence_time,
    }
    return RunResult(
        fixture=fixture.name,
        query=query_fixture.name,
        question=query_fixture.question,
        plan=plan,
        order=order,
        answers=reports,
        timings=timings,
    )


def run_fixture_query(fixture_name: str, query_name: str) -> RunResult:
    fixture = load_fixture(fixture_name)
    return execute(fixture, fixture.query(query_name))


def explanation(
    result: RunResult,
    answer_index: int,
    mode: str,
    level=None,
) -> dict:
    """One explanation for one answer.  Summarized mode resolves the
    level by word id or by question word."""
    report = result.answer(answer_index)
    if mode not in MODES:
        raise InvalidParamsError(
            f"unknown mode {mode!r}; expected one of {', '.join(MODES)}"
        )
    payload = {
        "mode": mode,
        "answer": report.answer_text,
        "levels": [
            {"word_id": wid, "word": word} for wid, word in report.levels
        ],
    }
    if mode == SINGLE:
        payload["text"] = report.single_sentence
        payload["pretty"] = report.single_sentence
        return payload
    if mode == FACTORIZED:
        payload["text"] = report.factorized_canonical
        payload["pretty"] = report.factorized_pretty
        return payload
    if level is None:
        raise InvalidParamsError("summarized mode needs a level")
    wid = resolve_level(result.order, level, result.plan.head_word_ids)
    summary = summarize(
        report.circuit, result.order, SummarySpec(level=wid),
        result.plan.head_word_ids,
    )
    rendered = render_fact(compute_fact_answer_tree(result.plan, summary))
    payload["level"] = {
        "word_id": wid,
        "word": result.order.question_words.get(wid, str(wid)),
    }
    payload["text"] = rendered["canonical"]
    payload["pretty"] = rendered["pretty"]
    return payload
