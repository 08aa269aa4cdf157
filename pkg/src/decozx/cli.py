"""Command line front end.

Subcommands operate on the JSON file formats from :mod:`.formats` and
print one JSON line per result. ``-`` reads the file from stdin.

Exit codes: 0 success (and "equal" verdicts), 1 diagrams differ or
fuzzing found a failure, 2 malformed input, 3 non-affine support.
"""

from __future__ import annotations

import argparse
import json
import sys

from .formats import (
    diagram_from_dict,
    diagram_to_dict,
    dumps,
    matrix_from_dict,
    matrix_to_dict,
    normal_form_to_dict,
)
from .fuzz import run_fuzz
from .normalform import (
    NonAffineSupportError,
    diagrams_equal,
    normalize_diagram,
    synthesize,
)
from .rewrite import simplify_traced
from .semantics import evaluate

__all__ = ["main"]

EXIT_OK = 0
EXIT_DIFFERENT = 1
EXIT_INPUT = 2
EXIT_NON_AFFINE = 3


def _read_json(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path) as handle:
            text = handle.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise ValueError(f"{path}: not valid JSON: {err}") from err


def _cmd_eval(args) -> int:
    d = diagram_from_dict(_read_json(args.diagram))
    print(dumps(matrix_to_dict(evaluate(d))))
    return EXIT_OK


def _cmd_normalize(args) -> int:
    d = diagram_from_dict(_read_json(args.diagram))
    print(dumps(normal_form_to_dict(normalize_diagram(d))))
    return EXIT_OK


def _cmd_equal(args) -> int:
    d1 = diagram_from_dict(_read_json(args.first))
    d2 = diagram_from_dict(_read_json(args.second))
    if d1.arity != d2.arity:
        print(dumps({"equal": False, "reason": "arity mismatch"}))
        return EXIT_DIFFERENT
    verdict = diagrams_equal(d1, d2, args.tol)
    print(dumps({"equal": verdict}))
    return EXIT_OK if verdict else EXIT_DIFFERENT


def _cmd_synthesize(args) -> int:
    mat = matrix_from_dict(_read_json(args.matrix))
    print(dumps(diagram_to_dict(synthesize(mat))))
    return EXIT_OK


def _cmd_simplify(args) -> int:
    d = diagram_from_dict(_read_json(args.diagram))
    simplified, trace = simplify_traced(d)
    print(dumps(diagram_to_dict(simplified)))
    if args.trace:
        steps = [
            {"rule": step.rule, "site": list(step.site), "params": step.params}
            for step in trace
        ]
        print(dumps({"trace": steps}))
    return EXIT_OK


def _cmd_fuzz(args) -> int:
    report = run_fuzz(
        seed=args.seed,
        max_wires=args.wires,
        iterations=args.iters,
        tolerance=args.tol,
    )
    if args.report_dir:
        from .report import write_report

        paths = write_report(report, args.report_dir)
        summary = report.summary()
        summary["report_files"] = [str(p) for p in paths]
    else:
        summary = report.summary()
    print(dumps(summary))
    return EXIT_OK if not report.failed else EXIT_DIFFERENT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decozx",
        description="Evaluate, normalize, compare and synthesize decohered ZX diagrams.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a diagram file to its matrix")
    p.add_argument("diagram", help="diagram JSON file, or - for stdin")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("normalize", help="print a diagram's canonical normal form")
    p.add_argument("diagram", help="diagram JSON file, or - for stdin")
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("equal", help="decide whether two diagrams denote the same matrix")
    p.add_argument("first", help="diagram JSON file")
    p.add_argument("second", help="diagram JSON file, or - for stdin")
    p.add_argument("--tol", type=float, default=1e-9,
                   help="relative tolerance on normal form values (default 1e-9)")
    p.set_defaults(func=_cmd_equal)

    p = sub.add_parser("synthesize", help="build a diagram from a nonnegative matrix")
    p.add_argument("matrix", help="matrix JSON file, or - for stdin")
    p.set_defaults(func=_cmd_synthesize)

    p = sub.add_parser("simplify", help="fuse spiders and drop identities to a fixpoint")
    p.add_argument("diagram", help="diagram JSON file, or - for stdin")
    p.add_argument("--trace", action="store_true",
                   help="also print the applied rewrite steps as a second JSON line")
    p.set_defaults(func=_cmd_simplify)

    p = sub.add_parser("fuzz", help="run randomized self-checks")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p.add_argument("--wires", type=int, default=6,
                   help="maximum wires per layer (default 6)")
    p.add_argument("--iters", type=int, default=50,
                   help="number of iterations (default 50)")
    p.add_argument("--tol", type=float, default=1e-9,
                   help="tolerance for the checks (default 1e-9)")
    p.add_argument("--report-dir", default=None,
                   help="directory for iterations.csv and summary figures")
    p.set_defaults(func=_cmd_fuzz)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NonAffineSupportError as err:
        payload = {"error": str(err)}
        if err.witness is not None:
            payload["witness"] = [[int(b) for b in point] for point in err.witness]
        print(dumps(payload), file=sys.stderr)
        return EXIT_NON_AFFINE
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
