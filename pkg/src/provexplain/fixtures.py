"""Packaged example data and a synthetic provenance generator.

Fixtures bundle a schema, a database and ready-made question triples
(dependency tree, query, word mapping), so the test suite and the demo
service never depend on a natural-language parser being available.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from .circuit import Circuit, from_json
from .errors import InvalidParamsError, LookupFailedError
from .io import load_database, load_mapping, load_query, load_tree, parse_schema
from .model import (
    Database,
    DependencyTree,
    STRING,
    Schema,
    UnionQuery,
    UnionWordMapping,
    Value,
)

_DATA = Path(__file__).resolve().parent / "data"

Monomial = tuple


@dataclass(frozen=True)
class QueryFixture:
    """One packaged question: its text, tree, query and word mapping."""

    name: str
    question: str
    tree: DependencyTree
    query: UnionQuery
    mapping: UnionWordMapping


@dataclass(frozen=True)
class Fixture:
    name: str
    schema: Schema
    database: Database
    queries: tuple[QueryFixture, ...]

    def query(self, name: str) -> QueryFixture:
        for entry in self.queries:
            if entry.name == name:
                return entry
        raise LookupFailedError(f"fixture {self.name!r} has no query {name!r}")

    @property
    def query_names(self) -> list[str]:
        return [entry.name for entry in self.queries]


def _natural_key(name: str):
    digits = "".join(ch for ch in name if ch.isdigit())
    return (name.rstrip("0123456789"), int(digits) if digits else -1)


def list_fixtures() -> list[str]:
    return sorted(
        entry.name
        for entry in _DATA.iterdir()
        if entry.is_dir() and (entry / "schema.txt").exists()
    )


@lru_cache(maxsize=None)
def load_fixture(name: str) -> Fixture:
    root = _DATA / name
    if not (root / "schema.txt").exists():
        raise LookupFailedError(
            f"unknown fixture {name!r}; available: {', '.join(list_fixtures())}"
        )
    schema = parse_schema((root / "schema.txt").read_text())
    database = load_database(schema, root / "db")
    queries = []
    query_root = root / "queries"
    if query_root.exists():
        for qdir in sorted(query_root.iterdir(), key=lambda p: _natural_key(p.name)):
            if not qdir.is_dir():
                continue
            queries.append(
                QueryFixture(
                    name=qdir.name,
                    question=(qdir / "question.txt").read_text().strip(),
                    tree=load_tree(qdir / "tree.txt"),
                    query=load_query(qdir / "query.txt"),
                    mapping=load_mapping(qdir / "mapping.json"),
                )
            )
    return Fixture(name, schema, database, tuple(queries))


def stored_circuits(fixture: str) -> list[str]:
    """Names of pre-built circuits shipped with a fixture."""
    cdir = _DATA / fixture / "circuits"
    if not cdir.exists():
        return []
    return sorted(path.stem for path in cdir.glob("*.json"))


def load_stored_circuit(fixture: str, name: str) -> Circuit:
    path = _DATA / fixture / "circuits" / f"{name}.json"
    if not path.exists():
        raise LookupFailedError(
            f"fixture {fixture!r} has no stored circuit {name!r}"
        )
    return from_json(json.loads(path.read_text()))


def generate_synthetic(
    num_assignments: int,
    unique_values_per_var: int,
    num_vars: int,
    seed: int = 0,
) -> list[Monomial]:
    """Deterministic random polynomial for benchmarks.

    Word id 1 carries the shared answer value; every other word id draws
    from a pool of at most unique_values_per_var values.  When the pool
    size equals the number of assignments, each position gets a
    permutation, so no value repeats anywhere except the answer.
    """
    if num_assignments < 1:
        raise InvalidParamsError("num_assignments must be at least 1")
    if num_vars < 2:
        raise InvalidParamsError("num_vars must be at least 2")
    if not 1 <= unique_values_per_var <= num_assignments:
        raise InvalidParamsError(
            "unique_values_per_var must lie in [1, num_assignments]"
        )
    rng = random.Random(seed)
    columns = {}
    for var in range(2, num_vars + 1):
        if unique_values_per_var == num_assignments:
            columns[var] = rng.sample(range(num_assignments), num_assignments)
        else:
            columns[var] = [
                rng.randrange(unique_values_per_var)
                for _ in range(num_assignments)
            ]
    answer = Value(STRING, "v1_0")
    monomials = []
    for row in range(num_assignments):
        pairs = [(1, answer)]
        for var in range(2, num_vars + 1):
            pairs.append((var, Value(STRING, f"v{var}_{columns[var][row]}")))
        monomials.append(tuple(pairs))
    return monomials
