"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""

import time

import numpy as np
import pytest
from scipy.optimize import bisect

from nldelta.bound import (solve_bound, solve_general_bound, solve_single_bound,
                           symmetric_double_report)
from nldelta.errors import DomainError, NoBranchError
from nldelta.greens import (closure_residual, default_scan_config,
                            single_delta_closed_form, solve_scattering)
from nldelta.model import (BoundCenter, DeltaCenter, Incidence, Parity,
                           validate_and_sort, validate_bound)
from nldelta.oracle import oracle_branches, symmetric_shooting
from nldelta.sweep import PRESETS, SweepSpec, branch_counts, run_sweep
from nldelta.validation import quadrature_norm, run_validation


@pytest.fixture
def verdict(capsys):
    def emit(label, ok, detail, elapsed):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} {label}: {detail} ({elapsed:.2f} s)")
        return ok
    return emit


def sweep(name, n=2000):
    return run_sweep(SweepSpec(0.1, 6.0, n, PRESETS[name].problem()))


def test_c1_linear_golden_values(verdict):
    t0 = time.perf_counter()
    (s,) = solve_scattering(validate_and_sort([DeltaCenter(0.0, 2.0, 0.0)], 1.0, 1.0))
    energy = solve_single_bound(2.0, 0.0).energy
    elapsed = time.perf_counter() - t0
    dev_t, dev_e = abs(s.t_intensity - 0.5), abs(energy + 1)
    ok = dev_t <= 1e-12 and dev_e <= 1e-12 and elapsed < 1
    assert verdict("c1 linear golden", ok,
                   f"|T|^2 - 0.5 = {dev_t:.1e}, E + 1 = {dev_e:.1e}", elapsed)


def test_c2_kerr_single_delta(verdict):
    t0 = time.perf_counter()
    y = bisect(lambda v: v ** 3 + v - 1, 0.0, 1.0, xtol=1e-16)
    expected = 1 / (1 + y * y)
    p = validate_and_sort([DeltaCenter(0.0, 2.0, 2.0)], 1.0, 1.0)
    cfg = default_scan_config(p)
    scan = solve_scattering(p, cfg)
    closed = single_delta_closed_form(p, cfg)
    oracle = oracle_branches(p, cfg)
    elapsed = time.perf_counter() - t0
    counts = (len(scan), len(closed), len(oracle))
    values = [b[0].t_intensity for b in (scan, closed, oracle) if b]
    dev = max(abs(v - expected) for v in values)
    ok = counts == (1, 1, 1) and dev <= 1e-8 and elapsed < 1
    assert verdict("c2 Kerr single delta", ok,
                   f"branches {counts}, |T|^2 = {values[0]:.12f}, max deviation {dev:.1e}",
                   elapsed)


def test_c3_oracle_equivalence_corpus(verdict):
    t0 = time.perf_counter()
    report = run_validation(50, seed=7)
    elapsed = time.perf_counter() - t0
    w = report.worst
    ok = report.passed and elapsed < 120
    detail = (f"{report.n_problems} problems, T2 {w['oracle_T2']:.1e}, unitarity "
              f"{w['unitarity']:.1e}, rows {w['phi_rows']:.1e}, T detPhi {w['T_detPhi']:.1e}, "
              f"jump {w['jump']:.1e}, failures {len(report.failures)}")
    assert verdict("c3 validate --corpus 50 --seed 7", ok, detail, elapsed)


def local_maxima(ks, values):
    i = np.where((values[1:-1] > values[:-2]) & (values[1:-1] >= values[2:]))[0] + 1
    return ks[i]


def test_c4_strong_kerr_bistability(verdict):
    t0 = time.perf_counter()
    counts = branch_counts(sweep("fig1-strong"))
    ks = np.linspace(0.1, 6.0, 2000)
    linear = np.array([solve_scattering(validate_and_sort(
        [DeltaCenter(c, 20.0, 0.0) for c in (0.0, 1.0, 2.0)], k, 1.0))[0].t_intensity for k in ks])
    elapsed = time.perf_counter() - t0
    peaks = local_maxima(ks, linear)
    multi = np.array([k for k, n in counts.items() if n >= 2])
    far = np.min(np.abs(multi[:, None] - peaks[None, :]), axis=1).max() if multi.size else np.inf
    most = max(counts.values())
    ok = most >= 3 and far <= 0.5 and elapsed < 60
    assert verdict("c4 fig1 strong Kerr", ok,
                   f"max branches {most}, {multi.size} multi-branch k, farthest from a "
                   f"linear resonance {far:.3f}", elapsed)


def test_c5_imaginary_coupling(verdict):
    t0 = time.perf_counter()
    kerr = sweep("fig2-alpha2")
    linear = branch_counts(sweep("fig2-alpha0"))
    elapsed = time.perf_counter() - t0
    t2_max = max(r.T2 for r in kerr)
    most = max(branch_counts(kerr).values())
    single = set(linear.values()) == {1} and len(linear) == 2000
    ok = t2_max > 1 and most >= 2 and single and elapsed < 60
    assert verdict("c5 fig2 imaginary coupling", ok,
                   f"max |T|^2 {t2_max:.3f}, max branches {most}, linear one branch per k: "
                   f"{single}", elapsed)


def test_c6_parity_symmetry(verdict):
    # the solver mirrors right incidence, so the oracle's direct right march
    # supplies the independent comparison
    t0 = time.perf_counter()
    worst, mismatched = 0.0, 0
    for k in np.linspace(0.2, 5.8, 20):
        left = PRESETS["fig2-alpha2"].problem(float(k))
        right = left.with_incidence(Incidence.RIGHT)
        cfg = default_scan_config(left)
        a = sorted(solve_scattering(left, cfg, extend=False), key=lambda s: s.t_intensity)
        for other in (solve_scattering(right, cfg, extend=False), oracle_branches(right, cfg)):
            b = sorted(other, key=lambda s: s.t_intensity)
            if len(a) != len(b):
                mismatched += 1
                continue
            for x, y in zip(a, b):
                worst = max(worst, abs(x.transmission - y.transmission),
                            abs(x.reflection - y.reflection))
    elapsed = time.perf_counter() - t0
    ok = mismatched == 0 and worst <= 1e-10
    assert verdict("c6 P symmetry", ok,
                   f"20 k values, count mismatches {mismatched}, max (R, T) deviation {worst:.1e}",
                   elapsed)


def test_c7_symmetric_double_well(verdict):
    t0 = time.perf_counter()
    route_dev, norm_dev = 0.0, 0.0
    extra_states, misordered = [], []
    for omega in (1.0, 2.0, 3.0):
        for alpha in (0.0, 0.5, 1.0):
            for d in (0.5, 1.0, 3.0, 10.0):
                states, _ = symmetric_double_report(omega, alpha, d)
                problem = validate_bound([BoundCenter(-d / 2, omega, alpha),
                                          BoundCenter(d / 2, omega, alpha)])
                newton = [s.nu for s in solve_general_bound(problem) if s.parity is not Parity.NONE]
                shot = [s.nu for s in symmetric_shooting(omega, alpha, d)]
                nus = [s.nu for s in states]
                for other in (newton, shot):
                    if len(other) != len(nus):
                        route_dev = np.inf
                    for a, b in zip(sorted(nus), sorted(other)):
                        route_dev = max(route_dev, abs(a - b))
                for s in states:
                    # explicit polynomial route; cross_check is relative, nu = x / 2
                    route_dev = max(route_dev, s.cross_check * s.nu)
                    norm_dev = max(norm_dev, abs(quadrature_norm(s, problem.centers) - 1))
                odd = [s for s in states if s.parity is Parity.ODD]
                even = [s for s in states if s.parity is Parity.EVEN]
                # one even state, plus one odd state once d > 2/beta at the odd solution
                if len(odd) > 1:
                    extra_states.append((omega, alpha, d, len(states)))
                if even and odd and max(o.nu for o in odd) >= even[0].nu:
                    misordered.append((omega, alpha, d))
    elapsed = time.perf_counter() - t0
    clauses = {
        "routes within 1e-6": route_dev <= 1e-6,
        "norm within 1e-8": norm_dev <= 1e-8,
        "count 2 -> 1 at d = 2/beta": not extra_states,
        "even nu > odd nu": not misordered,
    }
    ok = all(clauses.values()) and elapsed < 60
    failed = [name for name, good in clauses.items() if not good]
    detail = (f"route deviation {route_dev:.1e}, norm deviation {norm_dev:.1e}; "
              f"three-state points {extra_states}; odd above even at {misordered}; "
              f"failed clauses: {failed or 'none'}")
    assert verdict("c7 symmetric double well", ok, detail, elapsed), detail


def test_c8_singularity_guards(verdict):
    t0 = time.perf_counter()
    guards = []
    for call in (lambda: solve_single_bound(2.0, 2.0),
                 lambda: solve_bound(validate_bound([BoundCenter(0.0, 2.0, 2.0)]))):
        try:
            call()
            guards.append(False)
        except DomainError:
            guards.append(True)
    singular = PRESETS["fig2-alpha-0.7"]
    nan_at_zero = np.isnan(closure_residual(singular.problem(1.0), 0.0))
    records = sweep("fig2-alpha-0.7")
    finite = bool(records) and all(np.isfinite(r.T2) for r in records)
    covered = len(branch_counts(records))
    agree = True
    for k in np.linspace(0.3, 5.7, 8):
        p = singular.problem(float(k))
        cfg = default_scan_config(p)
        try:
            mine = sorted(s.t_intensity for s in solve_scattering(p, cfg, extend=False))
        except NoBranchError:
            mine = []
        ref = sorted(b.t_intensity for b in oracle_branches(p, cfg))
        agree &= len(mine) == len(ref) and all(abs(a - b) < 1e-8 for a, b in zip(mine, ref))
    elapsed = time.perf_counter() - t0
    ok = all(guards) and nan_at_zero and finite and agree
    assert verdict("c8 singularity guards", ok,
                   f"DomainError raised {guards}, NaN at zero modulus {nan_at_zero}, "
                   f"{len(records)} finite records at {covered} of 2000 k, branches match oracle {agree}", elapsed)
