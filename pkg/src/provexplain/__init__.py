"""Query answering with value-level provenance, explained in the words of
the question.

The package evaluates conjunctive queries (and unions of them) over small
relational databases, records which database values satisfied which
question words for every derivation, and turns that record into natural
language: one sentence per derivation, a factorized multi-line sentence
whose nesting follows the question's structure, or a summarized sentence
with counts and ranges.
"""

from .circuit import (
    Leaf,
    Prod,
    Sum,
    expand,
    identity_circuit,
    length,
    ordered_form,
    readability,
    serialize,
)
from .engine import answers_of, build_provenance, evaluate
from .errors import ProvExplainError
from .factorize import (
    QuestionOrder,
    check_compatibility,
    combine_answers,
    greedy_factorize,
    is_compatible,
)
from .fixtures import generate_synthetic, list_fixtures, load_fixture
from .mapper import map_words
from .nlgen import build_plan, compute_answer_tree, compute_fact_answer_tree, render_fact, render_single
from .pipeline import execute, explanation, run_fixture_query
from .summarize import SummarySpec, available_levels, resolve_level, summarize

__version__ = "0.1.0"

__all__ = [
    "Leaf",
    "Prod",
    "Sum",
    "expand",
    "identity_circuit",
    "length",
    "ordered_form",
    "readability",
    "serialize",
    "answers_of",
    "build_provenance",
    "evaluate",
    "ProvExplainError",
    "QuestionOrder",
    "check_compatibility",
    "combine_answers",
    "greedy_factorize",
    "is_compatible",
    "generate_synthetic",
    "list_fixtures",
    "load_fixture",
    "map_words",
    "build_plan",
    "compute_answer_tree",
    "compute_fact_answer_tree",
    "render_fact",
    "render_single",
    "execute",
    "explanation",
    "run_fixture_query",
    "SummarySpec",
    "available_levels",
    "resolve_level",
    "summarize",
    "__version__",
]
