"""Command line front end.

Subcommands
-----------
exponents --p <rational|inf>        print the exact (p, s, r) triple as JSON
spectrum  --rep <file>              print a spectral report for a stored rep
factorize --rep <file> --out <file> write the factorization pipeline as JSON
suite     --config <file> [--only trace|factorize|ladder] [--out DIR] [--seed N]

Exit codes: 0 all assertions passed, 1 an assertion failed, 2 usage or
configuration error.  Diagnostics go to stderr; data goes to files or
stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .exponents import Exponent
from .factorization import build_pipeline, exponent_budget, pipeline_to_json
from .harness import (
    config_from_json,
    run_factorization_suite,
    run_ladder_suite,
    run_trace_suite,
)
from .nuclear import adjoint_rep, rep_from_json
from .spectra import spectral_report

USAGE_ERROR = 2
ASSERTION_ERROR = 1

_SUITES = {
    "trace": run_trace_suite,
    "factorize": run_factorization_suite,
    "ladder": run_ladder_suite,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nuctrace",
        description="nuclear representations, factorizations and spectral suites",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_exp = sub.add_parser("exponents", help="exact (p, s, r) triple for an exponent")
    p_exp.add_argument("--p", required=True, help='exponent: "2", "7/3" or "inf"')

    p_spec = sub.add_parser("spectrum", help="spectral report for a stored representation")
    p_spec.add_argument("--rep", required=True, help="representation JSON file")

    p_fac = sub.add_parser("factorize", help="factor a stored representation")
    p_fac.add_argument("--rep", required=True, help="representation JSON file")
    p_fac.add_argument("--out", required=True, help="output pipeline JSON file")

    p_suite = sub.add_parser("suite", help="run the verification suites")
    p_suite.add_argument("--config", required=True, help="experiment config JSON file")
    p_suite.add_argument("--only", choices=sorted(_SUITES), help="run a single suite")
    p_suite.add_argument("--out", help="override the config output directory")
    p_suite.add_argument("--seed", type=int, help="override the config seed")
    return parser


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path} is not valid JSON: {exc}") from exc


def _load_rep(path: str):
    return rep_from_json(_load_json(path))


def _cmd_exponents(args) -> int:
    triple = exponent_budget(Exponent(args.p))
    print(json.dumps(triple.as_dict()))
    return 0


def _cmd_spectrum(args) -> int:
    report = spectral_report(_load_rep(args.rep))
    print(json.dumps(report.as_dict(), sort_keys=True))
    return 0


def _cmd_factorize(args) -> int:
    rep = _load_rep(args.rep)
    if rep.ambient.p < 2:
        rep = adjoint_rep(rep)
    pipe = build_pipeline(rep)
    Path(args.out).write_text(json.dumps(pipeline_to_json(pipe), sort_keys=True) + "\n")
    print(f"wrote pipeline for p={pipe.triple.p} to {args.out}", file=sys.stderr)
    return 0


def _cmd_suite(args) -> int:
    import dataclasses

    config = config_from_json(_load_json(args.config))
    if args.seed is not None:
        config = dataclasses.replace(config, seed=args.seed)
    if args.out is not None:
        config = dataclasses.replace(config, out_dir=args.out)
    names = [args.only] if args.only else sorted(_SUITES)
    failed = 0
    for name in names:
        report = _SUITES[name](config)
        failed += report.failed
        print(
            f"suite {name}: {report.passed} passed, {report.failed} failed "
            f"({report.duration_seconds:.2f}s)",
            file=sys.stderr,
        )
    return ASSERTION_ERROR if failed else 0


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse reports usage problems on stderr and exits 2 already
        return int(exc.code) if exc.code is not None else 0
    handlers = {
        "exponents": _cmd_exponents,
        "spectrum": _cmd_spectrum,
        "factorize": _cmd_factorize,
        "suite": _cmd_suite,
    }
    try:
        return handlers[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ASSERTION_ERROR


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
