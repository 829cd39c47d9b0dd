"""``nldelta`` command line: scatter, sweep, bound, validate and presets."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .bound import solve_bound, symmetric_double_report
from .errors import (ConvergenceError, DomainError, NoBoundStateError,
                     NoBranchError, ValidationError)
from .greens import solve_scattering
from .model import BoundProblem, bound_problem_from_dict, problem_from_dict
from .sweep import (DEFAULT_K_RANGE, PRESETS, SweepSpec, records_to_json,
                    run_sweep, write_csv)
from .validation import run_validation

EXIT_OK, EXIT_VALIDATION, EXIT_NO_BRANCH, EXIT_NO_BOUND = 0, 2, 3, 4

log = logging.getLogger("nldelta")


def _load_json(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError("config", f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError("config", f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _scatter_problem(args, k=None):
    if args.preset:
        if args.preset not in PRESETS:
            raise ValidationError("preset", f"unknown preset {args.preset!r}; see `nldelta preset list`")
        return PRESETS[args.preset].problem(k if k is not None else 1.0)
    if not args.config:
        raise ValidationError("config", "give a config file or --preset")
    return problem_from_dict(_load_json(args.config), k)


def _cpx(z):
    return [z.real, z.imag]


def cmd_scatter(args) -> int:
    problem = _scatter_problem(args, args.k)
    branches = solve_scattering(problem)
    if args.json:
        out = {"k": problem.k, "branches": [{
            "branch": s.branch_index, "T2": s.t_intensity, "R2": s.r_intensity,
            "T": _cpx(s.transmission), "R": _cpx(s.reflection),
            "psi": [_cpx(p) for p in s.psi_at_centers],
            "residual": s.closure_residual} for s in branches]}
        print(json.dumps(out, indent=2))
        return EXIT_OK
    print(f"k = {problem.k:.10g}, incidence = {problem.incidence.value}, branches = {len(branches)}")
    for s in branches:
        print(f"\nbranch {s.branch_index}: |T|^2 = {s.t_intensity:.12g}  |R|^2 = {s.r_intensity:.12g}"
              f"  residual = {s.closure_residual:.2e}")
        print(f"  T = {s.transmission:.12g}")
        print(f"  R = {s.reflection:.12g}")
        print(f"  {'c_i':>12} {'Re psi':>18} {'Im psi':>18} {'|psi|':>18}")
        for c, p in zip(problem.positions, s.psi_at_centers):
            print(f"  {c:12.6g} {p.real:18.12g} {p.imag:18.12g} {abs(p):18.12g}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    k_min = args.k_min if args.k_min is not None else DEFAULT_K_RANGE[0]
    k_max = args.k_max if args.k_max is not None else DEFAULT_K_RANGE[1]
    try:
        spec = SweepSpec(k_min, k_max, args.n, _scatter_problem(args, k_min),
                         log_spacing=args.log_spacing)
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError("sweep", str(exc)) from None
    records = run_sweep(spec, workers=args.workers)
    log.info("sweep: %d k points, %d records", args.n, len(records))
    meta = {"k_min": k_min, "k_max": k_max, "n_points": args.n}
    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                if args.json:
                    fh.write(records_to_json(records, **meta) + "\n")
                else:
                    write_csv(records, fh)
        elif args.json:
            print(records_to_json(records, **meta))
        else:
            write_csv(records, sys.stdout)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
        return 1
    return EXIT_OK


def _state_dict(s):
    return {"nu": s.nu, "E": s.energy, "parity": s.parity.value,
            "psi": [_cpx(complex(p)) for p in s.psi_at_centers],
            "norm_residual": s.norm_residual}


def cmd_bound(args) -> int:
    problem: BoundProblem = bound_problem_from_dict(_load_json(args.config))
    diagnostics = {}
    if problem.n == 2 and problem.is_symmetric_double():
        a, b = problem.centers
        states, diagnostics = symmetric_double_report(
            a.omega, a.exponent, b.position - a.position, 0.5 * (a.position + b.position))
        if not states:
            raise NoBoundStateError("no bound state", diagnostics)
    else:
        try:
            states = solve_bound(problem)
        except ConvergenceError as exc:
            raise NoBoundStateError(str(exc), {}) from None
        except DomainError as exc:
            raise NoBoundStateError("no normalisable bound state", {"even": str(exc)}) from None
    if args.json:
        print(json.dumps({"states": [_state_dict(s) for s in states],
                          "diagnostics": diagnostics}, indent=2))
        return EXIT_OK
    print(f"{'#':>2} {'nu':>18} {'E':>18} {'parity':>6} {'norm resid':>10}  psi(c_i)")
    for i, s in enumerate(states):
        psi = ", ".join(f"{complex(p).real:.10g}" if complex(p).imag == 0 else f"{complex(p):.10g}"
                        for p in s.psi_at_centers)
        print(f"{i:2d} {s.nu:18.12g} {s.energy:18.12g} {s.parity.value:>6} "
              f"{s.norm_residual:10.1e}  {psi}")
    for parity, note in diagnostics.items():
        print(f"note ({parity}): {note}")
    return EXIT_OK


def cmd_validate(args) -> int:
    report = run_validation(args.corpus, args.seed, allow_singular=args.allow_singular)
    for line in report.lines():
        print(line)
    for check, value, label in report.failures:
        print(f"FAIL {label}: {check} = {value:.3e}")
    return EXIT_OK if report.passed else 1


def cmd_preset(args) -> int:
    for p in PRESETS.values():
        cs = ", ".join(f"{c:g}" for c in p.positions)
        print(f"{p.name:<16} c = {{{cs}}}  z = {p.coupling}  alpha = {p.exponent:g}  |A| = 1  {p.description}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nldelta", description=__doc__)
    parser.add_argument("--log", default="WARNING", help="logging level (default WARNING)")
    sub = parser.add_subparsers(dest="command", required=True)

    def problem_args(p):
        p.add_argument("config", nargs="?", help="JSON problem file")
        p.add_argument("--preset", help="use a named parameter set instead of a file")

    p = sub.add_parser("scatter", help="all branches at one wavenumber")
    problem_args(p)
    p.add_argument("--k", type=float, help="wavenumber (overrides the file)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("sweep", help="transmission over a k range, one row per branch")
    problem_args(p)
    p.add_argument("--k-min", type=float)
    p.add_argument("--k-max", type=float)
    p.add_argument("--n", type=int, default=2000, help="number of k points")
    p.add_argument("--log-spacing", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bound", help="bound states of an attractive chain")
    p.add_argument("config", help="JSON bound problem file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("validate", help="randomised cross-check against the oracles")
    p.add_argument("--corpus", type=int, default=50)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--allow-singular", action="store_true",
                   help="include negative exponents in the corpus")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("preset", help="figure parameter sets")
    p.add_argument("action", choices=["list"])
    p.set_defaults(func=cmd_preset)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(args.log).upper(), logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValidationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NoBranchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_BRANCH
    except NoBoundStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for parity, note in getattr(exc, "diagnostics", {}).items():
            print(f"  {parity}: {note}", file=sys.stderr)
        return EXIT_NO_BOUND


if __name__ == "__main__":
    sys.exit(main())
