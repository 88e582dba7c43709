"""Command line front end: batch runs, golden checks and the benchmark.

Examples:
  provexplain --list
  provexplain --fixture mini_mas --query q7 --mode factorized
  provexplain --fixture mini_mas --query q7 --summarize authors
  provexplain --fixture mini_mas --query q7 --json run.json
  provexplain --bench --assignments 5000 --unique 5000 --vars 5 --trials 3
  provexplain --check
  provexplain --serve --port 8000

``--check`` recomputes every packaged query and compares against the
stored golden answers; any difference exits nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import run_benchmark
from .errors import ProvExplainError
from .fixtures import QueryFixture, list_fixtures, load_fixture
from .mapper import map_words
from .pipeline import (
    FACTORIZED,
    MODES,
    SINGLE,
    SUMMARIZED,
    execute,
    explanation,
)

_GOLDEN_DIR = Path(__file__).resolve().parent / "data" / "golden"


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="provexplain",
        description=(
            "Evaluate questions over packaged example databases and "
            "explain every answer in the words of the question."
        ),
    )
    parser.add_argument("--list", action="store_true",
                        help="list fixtures and their queries")
    parser.add_argument("--fixture", help="fixture name (see --list)")
    parser.add_argument("--query", help="query name within the fixture")
    parser.add_argument("--mode", choices=MODES, default=FACTORIZED,
                        help="explanation mode for run output")
    parser.add_argument("--summarize", metavar="LEVEL",
                        help="summarization level (question word or word id); "
                             "implies --mode summarized")
    parser.add_argument("--beta", type=float, default=None,
                        help="re-derive the word mapping with this matcher "
                             "threshold instead of the packaged mapping")
    parser.add_argument("--json", metavar="PATH",
                        help="also write the full result as JSON ('-' for stdout)")
    parser.add_argument("--bench", action="store_true",
                        help="run the synthetic scaling benchmark")
    parser.add_argument("--assignments", type=int, default=5000)
    parser.add_argument("--unique", type=int, default=5000,
                        help="distinct values per variable in the generator")
    parser.add_argument("--vars", type=int, default=5)
    parser.add_argument("--trials", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--check", action="store_true",
                        help="compare all packaged queries against stored "
                             "golden outputs; exit nonzero on any mismatch")
    parser.add_argument("--write-golden", action="store_true",
                        help="maintenance: rewrite the golden files from "
                             "current outputs")
    parser.add_argument("--serve", action="store_true",
                        help="start the HTTP service")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    return parser


def _write_json(path: str, payload) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path == "-":
        print(text)
    else:
        Path(path).write_text(text + "\n")


def _run_fixture(args) -> dict:
    fixture = load_fixture(args.fixture)
    query_fixture = fixture.query(args.query)
    if args.beta is not None:
        remapped = map_words(
            query_fixture.tree, query_fixture.query, fixture.schema,
            beta=args.beta,
        )
        query_fixture = QueryFixture(
            query_fixture.name, query_fixture.question,
            query_fixture.tree, query_fixture.query, remapped,
        )
    result = execute(fixture, query_fixture)
    mode = SUMMARIZED if args.summarize is not None else args.mode
    outputs = []
    for report in result.answers:
        payload = explanation(result, report.index, mode, args.summarize)
        outputs.append(payload)
    print(f"{result.fixture}/{result.query}: {result.question}")
    if not result.answers:
        print("  (no answers)")
    for report, payload in zip(result.answers, outputs):
        print(f"  [{report.answer_text}] {report.assignment_count} assignment(s)")
        for line in payload["pretty"].splitlines():
            print(f"    {line}")
    return {
        "run": result.to_json(),
        "mode": mode,
        "explanations": outputs,
    }


def _golden_snapshot(fixture_name: str, query_name: str) -> dict:
    """Everything --check compares: all three explanation forms for every
    answer, at every summarization level, plus the size metrics."""
    fixture = load_fixture(fixture_name)
    result = execute(fixture, fixture.query(query_name))
    answers = []
    for report in result.answers:
        summaries = {}
        for wid, _word in report.levels:
            payload = explanation(result, report.index, SUMMARIZED, wid)
            summaries[str(wid)] = payload["text"]
        answers.append(
            {
                "answer": report.answer_text,
                "assignments": report.assignment_count,
                "polynomial": report.polynomial,
                "single": report.single_sentence,
                "factorized": report.factorized_canonical,
                "factorized_pretty": report.factorized_pretty,
                "length": report.factorized_length,
                "readability": report.factorized_readability,
                "identity_length": report.identity_length,
                "compatible": report.compatible,
                "summaries": summaries,
            }
        )
    return {"question": result.question, "answers": answers}


def _golden_path(fixture_name: str, query_name: str) -> Path:
    return _GOLDEN_DIR / fixture_name / f"{query_name}.json"


def _iter_queries(fixture_filter=None):
    for fixture_name in list_fixtures():
        if fixture_filter and fixture_name != fixture_filter:
            continue
        fixture = load_fixture(fixture_name)
        for query_name in fixture.query_names:
            yield fixture_name, query_name


def _check(args) -> int:
    failures = 0
    checked = 0
    for fixture_name, query_name in _iter_queries(args.fixture):
        path = _golden_path(fixture_name, query_name)
        label = f"{fixture_name}/{query_name}"
        if not path.exists():
            print(f"FAIL {label}: no golden file {path}")
            failures += 1
            continue
        expected = json.loads(path.read_text())
        actual = _golden_snapshot(fixture_name, query_name)
        checked += 1
        if actual == expected:
            print(f"ok   {label} ({len(actual['answers'])} answers)")
            continue
        failures += 1
        print(f"FAIL {label}:")
        for idx, (exp, act) in enumerate(
            zip(expected.get("answers", []), actual["answers"])
        ):
            for key in sorted(set(exp) | set(act)):
                if exp.get(key) != act.get(key):
                    print(f"  answer {idx} field {key!r}:")
                    print(f"    expected: {exp.get(key)!r}")
                    print(f"    actual:   {act.get(key)!r}")
        if len(expected.get("answers", [])) != len(actual["answers"]):
            print(
                f"  answer count: expected "
                f"{len(expected.get('answers', []))}, "
                f"actual {len(actual['answers'])}"
            )
    print(f"{checked} checked, {failures} failed")
    return 1 if failures else 0


def _write_goldens(args) -> int:
    count = 0
    for fixture_name, query_name in _iter_queries(args.fixture):
        path = _golden_path(fixture_name, query_name)
        path.parent.mkdir(parents=True, exist_ok=True)
        snapshot = _golden_snapshot(fixture_name, query_name)
        path.write_text(json.dumps(snapshot, indent=2, sort_keys=True) + "\n")
        count += 1
        print(f"wrote {path}")
    print(f"{count} golden files written")
    return 0


def _bench(args) -> dict:
    report = run_benchmark(
        args.assignments, args.unique, args.vars,
        trials=args.trials, seed=args.seed,
    )
    print(
        f"benchmark: {args.assignments} assignments, "
        f"{args.unique} unique values, {args.vars} variables, "
        f"{args.trials} trial(s)"
    )
    for trial in report.trials:
        print(
            f"  seed {trial.seed}: factorize {trial.factorize_s:.4f}s"
            f"  sentences {trial.sentences_s:.4f}s"
            f"  length {trial.factorized_length}"
            f" (identity {trial.identity_length})"
        )
    print(
        f"  mean: factorize {report.mean_factorize_s:.4f}s"
        f"  sentences {report.mean_sentences_s:.4f}s"
    )
    return report.to_json()


def _list() -> None:
    for name in list_fixtures():
        fixture = load_fixture(name)
        print(name)
        for query in fixture.queries:
            print(f"  {query.name}: {query.question}")


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.list:
            _list()
            return 0
        if args.serve:
            import uvicorn

            from .service import create_app

            uvicorn.run(create_app(), host=args.host, port=args.port)
            return 0
        if args.bench:
            payload = _bench(args)
            if args.json:
                _write_json(args.json, payload)
            return 0
        if args.write_golden:
            return _write_goldens(args)
        if args.check:
            return _check(args)
        if args.fixture and args.query:
            payload = _run_fixture(args)
            if args.json:
                _write_json(args.json, payload)
            return 0
    except ProvExplainError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 2
    _parser().print_help()
    return 0


if __name__ == "__main__":
    sys.exit(main())
