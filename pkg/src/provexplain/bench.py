"""Scale benchmark on synthetic provenance.

Builds a fixed chain-shaped question (answer word above a second word
above a flat group of leaf words), generates a random polynomial with a
controlled number of distinct values per word, then times factorization
and sentence generation separately.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field

from .circuit import identity_circuit, length
from .factorize import QuestionOrder, greedy_factorize
from .fixtures import generate_synthetic
from .io import parse_schema, parse_tree_rows
from .model import Atom, ConjunctiveQuery, UnionQuery, Var, WordMapping
from .nlgen import build_plan, compute_fact_answer_tree, render_fact, render_single
from .pipeline import RunResult  # noqa: F401  (kept for API symmetry)


def _chain_question(num_vars: int):
    """Question scaffold for synthetic runs: word 1 is the answer, word 2
    nests below it, words 3..n hang side by side under the verb."""
    rows = [
        "1 Return VB 0 root",
        "2 items NN 1 dobj",
        "3 of IN 2 prep",
        "4 things NN 3 pobj",
        "5 has VBD 4 rcmod",
    ]
    mapping = {2: "c1", 4: "c2"}
    next_id = 6
    for var in range(3, num_vars + 1):
        rows.append(f"{next_id} p{var} IN 5 prep")
        rows.append(f"{next_id + 1} w{var} NN {next_id} pobj")
        mapping[next_id + 1] = f"c{var}"
        next_id += 2
    tree = parse_tree_rows("\n".join(rows))
    variables = [f"c{i}" for i in range(1, num_vars + 1)]
    query = UnionQuery.wrap(
        ConjunctiveQuery(
            ["c1"], [Atom("syn", tuple(Var(v) for v in variables))], []
        )
    )
    attrs = ", ".join(f"{v}:string" for v in variables)
    schema = parse_schema(f"syn({attrs})")
    return tree, query, WordMapping(mapping), schema


@dataclass
class BenchmarkTrial:
    seed: int
    factorize_s: float
    sentences_s: float
    total_s: float
    factorized_length: int
    identity_length: int

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "factorize_s": self.factorize_s,
            "sentences_s": self.sentences_s,
            "total_s": self.total_s,
            "factorized_length": self.factorized_length,
            "identity_length": self.identity_length,
        }


@dataclass
class BenchmarkReport:
    num_assignments: int
    unique_values: int
    num_vars: int
    trials: list = field(default_factory=list)

    @property
    def mean_factorize_s(self) -> float:
        return statistics.fmean(t.factorize_s for t in self.trials)

    @property
    def mean_sentences_s(self) -> float:
        return statistics.fmean(t.sentences_s for t in self.trials)

    @property
    def mean_total_s(self) -> float:
        return statistics.fmean(t.total_s for t in self.trials)

    @property
    def mean_factorized_length(self) -> float:
        return statistics.fmean(t.factorized_length for t in self.trials)

    def to_json(self) -> dict:
        return {
            "num_assignments": self.num_assignments,
            "unique_values": self.unique_values,
            "num_vars": self.num_vars,
            "trials": [t.to_json() for t in self.trials],
            "mean": {
                "factorize_s": self.mean_factorize_s,
                "sentences_s": self.mean_sentences_s,
                "total_s": self.mean_total_s,
                "factorized_length": self.mean_factorized_length,
            },
        }


def run_benchmark(
    num_assignments: int,
    unique_values: int,
    num_vars: int = 5,
    trials: int = 3,
    seed: int = 0,
) -> BenchmarkReport:
    tree, query, mapping, schema = _chain_question(num_vars)
    order = QuestionOrder(tree, mapping)
    plan = build_plan(tree, query, mapping, schema)
    report = BenchmarkReport(num_assignments, unique_values, num_vars)
    for trial in range(trials):
        trial_seed = seed + trial
        monomials = generate_synthetic(
            num_assignments, unique_values, num_vars, trial_seed
        )
        t0 = time.perf_counter()
        circuit = greedy_factorize(monomials, order)
        t1 = time.perf_counter()
        render_single(plan, monomials[0])
        render_fact(compute_fact_answer_tree(plan, circuit))
        t2 = time.perf_counter()
        report.trials.append(
            BenchmarkTrial(
                seed=trial_seed,
                factorize_s=t1 - t0,
                sentences_s=t2 - t1,
                total_s=t2 - t0,
                factorized_length=length(circuit),
                identity_length=length(identity_circuit(monomials)),
            )
        )
    return report
