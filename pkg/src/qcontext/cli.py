"""Command-line workbench: build, check, search, dilate, audit, simulate.

Exit codes: 0 success/pass, 1 check failure, 2 usage or parse error, 3 for the
expected impossibility verdicts (hypergraph not colorable, one-to-one
extension infeasible).
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
from pathlib import Path

import numpy as np

from .bloch import BlochVector
from .dilation import (
    extension_audit,
    one_to_one_feasibility,
    sequential_dilation,
    verify_dilation,
)
from .hv import simulate_povm
from .ks import ContextHypergraph, enumerate_assignments, parse_hypergraph
from .povm import PovmFamily, cabello_family, check_completeness, nakamura_family

TOLERANCE = 1e-12

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IMPOSSIBLE = 3


class UsageError(Exception):
    pass


def _load_model(name: str) -> PovmFamily:
    return nakamura_family() if name == "nakamura" else cabello_family()


def _parse_state(text: str) -> BlochVector:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"state must be three comma-separated numbers, got {text!r}")
    try:
        x, y, z = (float(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"unparseable state component in {text!r}") from exc
    try:
        return BlochVector.normalized(x, y, z)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _context_index(family: PovmFamily, context: int) -> int:
    if not 1 <= context <= len(family.contexts):
        raise UsageError(
            f"context must be in 1..{len(family.contexts)} for {family.name}, got {context}"
        )
    return context - 1


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(payload: dict, out: str | None) -> None:
    _emit(json.dumps(payload, indent=2) + "\n", out)


def _require_json(args) -> None:
    if getattr(args, "format", "json") != "json":
        raise UsageError(f"--format csv is not supported for {args.command!r}")


def cmd_family(args) -> int:
    _require_json(args)
    family = _load_model(args.model)
    config = {"command": "family", "model": args.model, "format": args.format, "out": args.out}
    _emit_json({"config": config, "family": family.to_dict()}, args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    _require_json(args)
    config = {
        "command": "check",
        "model": args.model,
        "family_file": args.family_file,
        "format": args.format,
        "out": args.out,
    }
    if args.model:
        family = _load_model(args.model)
    else:
        try:
            text = sys.stdin.read() if args.family_file == "-" else Path(args.family_file).read_text()
            family = PovmFamily.from_json(text)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            _emit_json({"config": config, "passed": False, "error": f"invalid family: {exc}"}, args.out)
            return EXIT_CHECK_FAILED

    completeness = [
        {"context": i + 1, "residual": check_completeness(context, family)}
        for i, context in enumerate(family.contexts)
    ]
    incidence = [
        {"label": label, "count": len(family.element_contexts(label))}
        for label in family.elements
    ]
    psd = [
        {
            "label": label,
            "min_eigenvalue": float(np.min(np.linalg.eigvalsh(element.operator))),
        }
        for label, element in family.elements.items()
    ]
    passed = (
        all(row["residual"] <= TOLERANCE for row in completeness)
        and all(row["count"] == 2 for row in incidence)
        and all(row["min_eigenvalue"] >= -TOLERANCE for row in psd)
    )
    payload = {
        "config": config,
        "family": family.name,
        "completeness": completeness,
        "incidence": incidence,
        "psd": psd,
        "passed": passed,
    }
    _emit_json(payload, args.out)
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def cmd_ks_search(args) -> int:
    _require_json(args)
    config = {
        "command": "ks-search",
        "model": args.model,
        "hypergraph": args.hypergraph,
        "workers": args.workers,
        "format": args.format,
        "out": args.out,
    }
    if args.model:
        family = _load_model(args.model)
        hypergraph = ContextHypergraph.from_contexts(family.contexts)
    else:
        try:
            hypergraph = parse_hypergraph(Path(args.hypergraph).read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot parse hypergraph: {exc}") from exc
    verdict = enumerate_assignments(hypergraph, workers=args.workers)
    _emit_json({"config": config, "verdict": verdict.to_dict()}, args.out)
    return EXIT_OK if verdict.colorable else EXIT_IMPOSSIBLE


def cmd_simulate(args) -> int:
    if args.samples < 1:
        raise UsageError(f"samples must be >= 1, got {args.samples}")
    family = _load_model(args.model)
    context = _context_index(family, args.context)
    state = _parse_state(args.state)
    seed = args.seed if args.seed is not None else secrets.randbits(64)
    config = {
        "command": "simulate",
        "model": args.model,
        "context": args.context,
        "state": [state.x, state.y, state.z],
        "samples": args.samples,
        "seed": seed,
        "workers": args.workers,
        "format": args.format,
        "out": args.out,
    }
    report = simulate_povm(
        family, context, state, args.samples, seed, workers=args.workers
    )
    if args.format == "csv":
        lines = [f"# {key}={value}" for key, value in config.items()]
        _emit("\n".join(lines) + "\n" + report.to_csv(), args.out)
    else:
        _emit_json({"config": config, "report": report.to_dict()}, args.out)
    return EXIT_OK if max(abs(z) for z in report.z_scores) <= 5.0 else EXIT_CHECK_FAILED


def cmd_dilate(args) -> int:
    _require_json(args)
    family = _load_model(args.model)
    if args.context is None:
        indices = range(len(family.contexts))
    else:
        indices = [_context_index(family, args.context)]
    config = {
        "command": "dilate",
        "model": args.model,
        "context": args.context,
        "format": args.format,
        "out": args.out,
    }
    reports = [
        verify_dilation(sequential_dilation(family, i), family, i) for i in indices
    ]
    passed = all(report.passed(TOLERANCE) for report in reports)
    payload = {
        "config": config,
        "family": family.name,
        "reports": [report.to_dict() for report in reports],
        "passed": passed,
    }
    _emit_json(payload, args.out)
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def cmd_audit(args) -> int:
    _require_json(args)
    family = _load_model(args.model)
    config = {"command": "audit", "model": args.model, "format": args.format, "out": args.out}
    schemes = [sequential_dilation(family, i) for i in range(len(family.contexts))]
    entries = extension_audit(family, schemes)
    payload = {
        "config": config,
        "family": family.name,
        "entries": [entry.to_dict() for entry in entries],
        "mismatched": sum(not entry.equal for entry in entries),
    }
    _emit_json(payload, args.out)
    return EXIT_OK


def cmd_feasibility(args) -> int:
    _require_json(args)
    family = _load_model(args.model)
    config = {"command": "feasibility", "model": args.model, "format": args.format, "out": args.out}
    certificate = one_to_one_feasibility(family)
    if certificate is None:
        payload = {
            "config": config,
            "family": family.name,
            "verdict": "feasible",
            "element": None,
            "steps": [],
        }
        _emit_json(payload, args.out)
        return EXIT_OK
    payload = {"config": config, **certificate.to_dict()}
    _emit_json(payload, args.out)
    return EXIT_IMPOSSIBLE


def _add_common(parser, model_required=True, formats=True, workers=False):
    parser.add_argument(
        "--model", choices=["nakamura", "cabello"], required=model_required,
        help="built-in measurement family",
    )
    if formats:
        parser.add_argument("--format", choices=["json", "csv"], default="json")
        parser.add_argument("--out", metavar="PATH", default=None, help="write output to PATH")
    if workers:
        parser.add_argument(
            "--workers", type=int, default=1,
            help="parallel workers; never changes the output",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcontext",
        description="Single-qubit POVM contextuality workbench",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("family", help="emit a measurement family as JSON")
    _add_common(p)
    p.set_defaults(handler=cmd_family)

    p = sub.add_parser("check", help="validate completeness, incidence, and positivity")
    _add_common(p, model_required=False)
    p.add_argument("--family-file", metavar="PATH", default=None,
                   help="family JSON to check instead of a built-in model ('-' reads stdin)")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("ks-search", help="exhaustive 0/1 assignment search")
    _add_common(p, model_required=False, workers=True)
    p.add_argument("--hypergraph", metavar="PATH", default=None,
                   help="hypergraph text file (one context per line, comma-separated labels)")
    p.set_defaults(handler=cmd_ks_search)

    p = sub.add_parser("simulate", help="hidden-variable Monte Carlo vs Born statistics")
    _add_common(p, workers=True)
    p.add_argument("--context", type=int, required=True, help="context number, 1-based")
    p.add_argument("--state", default="0,0,1", help="system direction x,y,z (normalized on ingest)")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=None, help="master seed (default: fresh entropy)")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("dilate", help="build and verify sequential dilations")
    _add_common(p)
    p.add_argument("--context", type=int, default=None, help="context number, 1-based (default all)")
    p.set_defaults(handler=cmd_dilate)

    p = sub.add_parser("audit", help="compare extended projectors across contexts")
    _add_common(p)
    p.set_defaults(handler=cmd_audit)

    p = sub.add_parser("feasibility", help="one-to-one extension feasibility verdict")
    _add_common(p)
    p.set_defaults(handler=cmd_feasibility)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "check" and not args.model and not args.family_file:
        parser.error("check requires --model or --family-file")
    if args.command == "ks-search" and not args.model and not args.hypergraph:
        parser.error("ks-search requires --model or --hypergraph")
    if getattr(args, "workers", 1) < 1:
        parser.error("--workers must be >= 1")
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"qcontext: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
