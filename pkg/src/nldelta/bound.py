"""Bound states of attractive nonlinear delta centers.

A bound state is ``psi(x) = sum_j w_j e^{-nu |x - c_j|}`` with
``w_j = (Omega_j / 2 nu) |psi(c_j)|^alpha_j psi(c_j)``.  Evaluating it at the
centers gives a homogeneous system whose matrix must be singular; unlike the
linear problem the energy is only fixed once the state is normalised.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import gammainc

from .errors import ConvergenceError, DomainError, NoBoundStateError
from .model import (BoundProblem, BoundStateSolution, Parity,
                    validate_bound)
from .numerics import RootScanConfig, lambert_w, scan_roots


@dataclass(frozen=True)
class BoundPhiMatrix:
    entries: np.ndarray
    determinant: float


@dataclass(frozen=True)
class SymmetricDoubleSpec:
    """Equal-strength double well; ``beta = omega * amplitude**alpha``."""

    omega: float
    alpha: float
    separation: float
    amplitude: float | None = None

    @property
    def beta(self) -> float | None:
        if self.amplitude is None:
            return None
        return self.omega * self.amplitude ** self.alpha


def _centers(centers):
    if isinstance(centers, BoundProblem):
        return centers.centers
    return tuple(centers)


def _weights(centers, nu, psi):
    psi = np.asarray(psi)
    om = np.array([c.omega for c in centers])
    al = np.array([c.exponent for c in centers])
    return om / (2 * nu) * np.abs(psi) ** al * psi


def bound_phi(centers, nu: float, psi) -> BoundPhiMatrix:
    centers = _centers(centers)
    c = np.array([ce.position for ce in centers])
    coeff = np.array([ce.omega / (2 * nu) * abs(p) ** ce.exponent
                      for ce, p in zip(centers, psi)])
    mat = -coeff[None, :] * np.exp(-nu * np.abs(c[:, None] - c[None, :]))
    mat[np.diag_indices_from(mat)] += 1.0
    return BoundPhiMatrix(mat, float(np.linalg.det(mat)))


def bound_norm(centers, nu: float, psi) -> float:
    """``int |psi|^2 dx`` written through the center values (1 when normalised)."""
    if not nu > 0:
        raise DomainError(f"nu must be positive, got {nu}")
    centers = _centers(centers)
    psi = [complex(p) for p in psi]
    total = 0.0
    for i, (ci, pi) in enumerate(zip(centers, psi)):
        total += ci.omega ** 2 / (4 * nu ** 3) * abs(pi) ** (2 * ci.exponent + 2)
        for cj, pj in zip(centers[i + 1:], psi[i + 1:]):
            d = abs(cj.position - ci.position)
            cross = (pi * pj.conjugate() + pi.conjugate() * pj).real
            total += (ci.omega * cj.omega / (4 * nu ** 2) * abs(pi) ** ci.exponent
                      * abs(pj) ** cj.exponent * cross * math.exp(-nu * d) * (1 / nu + d))
    return total


def bound_wavefunction(solution: BoundStateSolution, centers, x):
    """``psi(x)`` of an accepted bound state; ``x`` may be an array."""
    centers = _centers(centers)
    x = np.asarray(x, dtype=float)
    w = _weights(centers, solution.nu, np.asarray(solution.psi_at_centers, dtype=complex))
    out = np.zeros(x.shape, dtype=complex)
    for ce, wj in zip(centers, w):
        out = out + wj * np.exp(-solution.nu * np.abs(x - ce.position))
    return out[()] if out.ndim == 0 else out


def solve_single_bound(omega: float, alpha: float, c: float = 0.0) -> BoundStateSolution:
    """Closed-form bound state of one attractive center (needs ``alpha < 2``)."""
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    if alpha >= 2:
        raise DomainError(f"no normalisable single-center state for alpha = {alpha} >= 2")
    amp = (omega / 2) ** (1 / (2 - alpha))
    nu = (omega / 2) ** (2 / (2 - alpha))
    resid = abs(omega ** 2 / (4 * nu ** 3) * amp ** (2 * alpha + 2) - 1)
    return BoundStateSolution(nu, (complex(amp),), Parity.EVEN, resid)


# symmetric double well -------------------------------------------------------

def lambert_x(beta: float, d: float, parity: Parity) -> float | None:
    """Nontrivial root of ``x - beta = +-beta e^{-d x / 2}`` (None if absent)."""
    half = 0.5 * d * beta
    if parity is Parity.EVEN:
        return beta + 2 / d * lambert_w(0, half * math.exp(-half))
    # the trivial root x = 0 is W = -d beta / 2; the other one is positive
    # exactly when d beta > 2, and then lies on the principal branch
    if not half > 1:
        return None
    return beta + 2 / d * lambert_w(0, -half * math.exp(-half))


def _odd_x(beta: float, d: float) -> float | None:
    """Odd-branch ``x`` solved from ``beta (1 - e^{-dx/2}) = x`` without cancellation."""
    if not 0.5 * d * beta > 1:
        return None
    g = lambda x: 1 - beta * -math.expm1(-0.5 * d * x) / x
    hi = beta
    lo = hi
    while g(lo) >= 0:
        lo *= 0.5
    return brentq(g, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps)


def explicit_x(omega: float, alpha: float, d: float, amp: float) -> tuple[float, float]:
    """Both roots of the polynomial obtained by eliminating the exponential.

    ``x = A (Omega d A^{alpha+1} +- sqrt(Omega^2 d^2 A^{2 alpha + 2}
    - 2 Omega A^alpha (Omega d A^alpha - 2)))``; NaN where the root is complex.
    """
    lead = omega * d * amp ** (alpha + 1)
    t1 = omega ** 2 * d ** 2 * amp ** (2 * alpha + 2)
    t2 = 2 * omega * amp ** alpha * (omega * d * amp ** alpha - 2)
    disc = t1 - t2
    if disc < 0:
        # a double root can come out slightly negative by rounding
        noise = 1e-10 * (t1 + 2 * omega * amp ** alpha * (omega * d * amp ** alpha + 2))
        if -disc > noise:
            return math.nan, math.nan
        disc = 0.0
    s = math.sqrt(disc)
    return amp * (lead + s), amp * (lead - s)


def _norm_bracket(d, x, parity):
    # 1 -+ (1 + y) e^{-y}, y = d x / 2; the odd case is P(2, y), exact for small y
    p2 = gammainc(2, 0.5 * d * x)
    return p2 if parity is Parity.ODD else 2 - p2


def _norm_residual(omega, alpha, d, amp, parity):
    beta = omega * amp ** alpha
    x = _odd_x(beta, d) if parity is Parity.ODD else lambert_x(beta, d, parity)
    if x is None:
        return math.nan
    bracket = _norm_bracket(d, x, parity)
    return 4 * omega ** 2 * amp ** (2 * alpha + 2) * bracket / x ** 3 - 1


def _odd_amplitudes(omega, alpha, d, scale):
    """Odd-state ``(A, x)`` pairs, found by scanning ``x`` rather than ``A``.

    Along the odd branch ``beta = x / (1 - e^{-dx/2})``, which stays accurate
    down to the threshold ``d beta = 2`` where the Lambert-W route loses
    digits to cancellation.
    """
    def residual(x):
        y = 0.5 * d * x
        beta = x / -math.expm1(-y)
        amp = (beta / omega) ** (1 / alpha)
        bracket = -math.expm1(-y) - y * math.exp(-y)
        return 4 * omega ** 2 * amp ** (2 * alpha + 2) * bracket / x ** 3 - 1

    def amplitude(x):
        return (x / -math.expm1(-0.5 * d * x) / omega) ** (1 / alpha)

    beta_top = omega * max((1e-4 * scale) ** alpha, (1e2 * scale) ** alpha)
    cfg = RootScanConfig(1e-10 / d, 2 * beta_top + 10 / d, n_scan=2048, refine_tol=1e-15)
    roots = scan_roots(residual, cfg)
    return [(amplitude(r.value), r.value) for r in roots]


def _cross_check(omega, alpha, d, amp, x, parity):
    """Relative disagreement of the Lambert-W and polynomial routes with ``x``.

    Both routes cancel digits near the branch point ``d beta = 2``; the
    allowed deviation grows with ``1 / |1 + W|`` there.
    """
    beta = omega * amp ** alpha
    lx = lambert_x(beta, d, parity)
    xs = [xe for xe in explicit_x(omega, alpha, d, amp) if math.isfinite(xe)]
    if lx is None or not xs:
        return math.inf, 0.0
    deviation = max(abs(lx - x), min(abs(xe - x) for xe in xs)) / x
    w = 0.5 * d * (x - beta)
    lead = omega * d * amp ** (alpha + 2)
    eps = np.finfo(float).eps
    allowed = 1e-8 + 1e3 * eps * (beta + lead) / x * (1 + 1 / max(abs(1 + w), eps))
    return deviation, allowed


def _symmetric_double(omega, alpha, separation, center=0.0, n_scan=2048):
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    if not separation > 0:
        raise DomainError(f"separation must be positive, got {separation}")
    d = float(separation)
    scale = (omega / 2) ** (1 / (2 - alpha)) if alpha < 2 else 1.0
    cfg = RootScanConfig(1e-4 * scale, 1e2 * scale, n_scan=n_scan, refine_tol=1e-14)
    states, diagnostics = [], {}
    for parity in (Parity.EVEN, Parity.ODD):
        if alpha == 0:
            # beta = Omega is amplitude independent, so A follows directly
            x = _odd_x(omega, d) if parity is Parity.ODD else lambert_x(omega, d, parity)
            pairs = [] if x is None else [
                (math.sqrt(x ** 3 / (4 * omega ** 2 * _norm_bracket(d, x, parity))), x)]
        elif parity is Parity.ODD:
            pairs = _odd_amplitudes(omega, alpha, d, scale)
        else:
            amps = [r.value for r in scan_roots(
                lambda a: _norm_residual(omega, alpha, d, a, parity), cfg)]
            pairs = [(a, lambert_x(omega * a ** alpha, d, parity)) for a in amps]
        if not pairs:
            if parity is Parity.ODD:
                diagnostics["odd"] = (
                    f"no odd state: requires d > 2/beta with beta = Omega A^alpha; "
                    f"d = {d:g} fails for every normalisable amplitude")
            else:
                diagnostics["even"] = "no even state in the amplitude scan range"
            continue
        for amp, x in pairs:
            deviation, allowed = _cross_check(omega, alpha, d, amp, x, parity)
            if not deviation <= allowed:
                raise ConvergenceError(
                    f"Lambert-W and polynomial routes disagree ({deviation:.2e}) "
                    f"for the {parity.value} state at A = {amp}")
            sign = 1.0 if parity is Parity.EVEN else -1.0
            psi = (complex(amp), complex(sign * amp))
            nu = x / 2
            # same integral as bound_norm, with the odd-pair cancellation removed
            resid = float(abs(4 * omega ** 2 * amp ** (2 * alpha + 2)
                        * _norm_bracket(d, x, parity) / x ** 3 - 1))
            states.append(BoundStateSolution(nu, psi, parity, resid, cross_check=deviation))
    states.sort(key=lambda s: -s.nu)
    states = [BoundStateSolution(s.nu, s.psi_at_centers, s.parity, s.norm_residual, i, s.cross_check)
              for i, s in enumerate(states)]
    return states, diagnostics


def symmetric_double_report(omega, alpha, separation, center=0.0):
    """States of the symmetric double well plus per-parity diagnostics."""
    return _symmetric_double(omega, alpha, separation, center)


def solve_symmetric_double(omega: float, alpha: float, separation: float,
                           center: float = 0.0) -> list[BoundStateSolution]:
    """Even and odd states of two equal centers at ``center -+ separation / 2``.

    The amplitude ``A = |psi(c_1)| = |psi(c_2)|`` is found by scanning the
    normalisation condition with ``x = 2 nu`` given in closed form by Lambert W;
    each state is checked against the explicit polynomial solution.
    """
    states, diagnostics = _symmetric_double(omega, alpha, separation, center)
    if not states:
        raise NoBoundStateError("no bound state for the symmetric double well", diagnostics)
    return states


# general N -------------------------------------------------------------------

class _System:
    """Precomputed geometry for the Newton solve of ``Phi psi = 0``, norm = 1."""

    def __init__(self, problem: BoundProblem):
        self.n = problem.n
        c = np.array(problem.positions)
        self.om = np.array([ce.omega for ce in problem.centers])
        self.al = np.array([ce.exponent for ce in problem.centers])
        self.dist = np.abs(c[:, None] - c[None, :])

    def residual(self, u):
        psi, nu = u[:-1], u[-1]
        kern = np.exp(-nu * self.dist)
        w = self.om / (2 * nu) * np.abs(psi) ** self.al * psi
        gram = kern * (1 / nu + self.dist)
        out = np.empty(self.n + 1)
        out[:-1] = psi - kern @ w
        out[-1] = w @ gram @ w - 1.0
        return out

    def jacobian(self, u):
        n = self.n
        psi, nu = u[:-1], u[-1]
        dist = self.dist
        kern = np.exp(-nu * dist)
        w = self.om / (2 * nu) * np.abs(psi) ** self.al * psi
        dw = self.om / (2 * nu) * (self.al + 1) * np.abs(psi) ** self.al
        gram = kern * (1 / nu + dist)
        jac = np.empty((n + 1, n + 1))
        jac[:n, :n] = np.eye(n) - kern * dw[None, :]
        # w scales as 1/nu, the kernel as e^{-nu D}
        jac[:n, n] = gram @ w
        jac[n, :n] = 2 * (gram @ w) * dw
        dgram = -dist * gram - kern / nu ** 2
        jac[n, n] = w @ dgram @ w - 2 * (w @ gram @ w) / nu
        return jac


def _newton(system, u, max_iter=60, tol=1e-13):
    """Damped Newton in ``(psi, log nu)``; shallow states have tiny ``nu``."""
    f = system.residual(u)
    fn = np.max(np.abs(f))
    for _ in range(max_iter):
        if not np.isfinite(fn):
            return None
        if fn < tol:
            return u
        jac = system.jacobian(u)
        jac[:, -1] *= u[-1]
        try:
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            return None
        lam = 1.0
        while lam > 1e-2:
            trial = u + lam * step
            trial[-1] = u[-1] * math.exp(min(lam * step[-1], 50.0))
            ft = system.residual(trial)
            ftn = np.max(np.abs(ft))
            if np.isfinite(ftn) and ftn < (1 - 1e-4 * lam) * fn:
                break
            lam *= 0.5
        else:
            return None
        u, f, fn = trial, ft, ftn
    return u if fn < tol else None


def _parity_of(problem, psi, tol=1e-6):
    c = np.array(problem.positions)
    om = [ce.omega for ce in problem.centers]
    al = [ce.exponent for ce in problem.centers]
    mirror = (np.allclose(c + c[::-1], c[0] + c[-1]) and np.allclose(om, om[::-1])
              and np.allclose(al, al[::-1]))
    if problem.n < 2 or not mirror:
        return Parity.EVEN if problem.n == 1 else Parity.NONE
    scale = np.max(np.abs(psi))
    if np.max(np.abs(psi - psi[::-1])) < tol * scale:
        return Parity.EVEN
    if np.max(np.abs(psi + psi[::-1])) < tol * scale:
        return Parity.ODD
    return Parity.NONE


def default_nu_scan(problem: BoundProblem):
    top = max((c.omega / 2) ** (2 / (2 - c.exponent)) if c.exponent < 2 else c.omega / 2
              for c in problem.centers)
    return 1e-6, 2 * top + 1, 80


def solve_general_bound(problem: BoundProblem, nu_scan=None) -> list[BoundStateSolution]:
    """Bound states of any chain by damped Newton on ``Phi psi = 0`` plus unit norm.

    Seeds combine every sign pattern (first center positive) with ``nu``
    values on a log grid; amplitudes start from the single-center closed form
    rescaled to unit norm.  Solutions are deduplicated by ``nu``.
    """
    if not isinstance(problem, BoundProblem):
        problem = validate_bound(problem)
    lo, hi, n_seeds = nu_scan or default_nu_scan(problem)
    base = np.array([(c.omega / 2) ** (1 / (2 - c.exponent)) if c.exponent < 2 else 1.0
                     for c in problem.centers])
    system = _System(problem)
    found: list[tuple[float, np.ndarray]] = []
    seeds = []
    for signs in itertools.product((1.0, -1.0), repeat=problem.n - 1):
        pattern = np.array((1.0,) + signs) * base
        for nu0 in np.geomspace(lo, hi, n_seeds):
            seeds.append((signs, nu0))
            amp = _unit_scale(problem, pattern, nu0)
            with np.errstate(all="ignore"):
                u = _newton(system, np.append(amp, nu0))
            if u is None:
                continue
            psi, nu = u[:-1], u[-1]
            phi = bound_phi(problem, nu, psi)
            resid = abs(bound_norm(problem, nu, psi) - 1)
            if abs(phi.determinant) > 1e-8 or resid > 1e-8 or nu <= 0:
                continue
            if any(abs(nu - other) < 1e-8 * nu for other, _ in found):
                continue
            found.append((float(nu), psi * np.sign(psi[0])))
    if not found:
        raise ConvergenceError(f"Newton iteration failed from all {len(seeds)} seeds", seeds)
    found.sort(key=lambda item: -item[0])
    return [BoundStateSolution(nu, tuple(complex(p) for p in psi), _parity_of(problem, psi),
                               abs(bound_norm(problem, nu, psi) - 1), i)
            for i, (nu, psi) in enumerate(found)]


def _unit_scale(problem, pattern, nu):
    """Rescale a seed pattern so its norm is one at the given ``nu``."""
    def g(log_s):
        return math.log(max(bound_norm(problem, nu, math.exp(log_s) * pattern), 1e-300))
    lo, hi = -30.0, 30.0
    glo, ghi = g(lo), g(hi)
    if not (glo < 0 < ghi):
        return pattern / math.sqrt(problem.n)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12:
            break
    return math.exp(0.5 * (lo + hi)) * pattern


def solve_bound(problem: BoundProblem) -> list[BoundStateSolution]:
    """Dispatch: closed form for one center, Lambert W for a symmetric pair, Newton otherwise."""
    if problem.n == 1:
        c = problem.centers[0]
        s = solve_single_bound(c.omega, c.exponent, c.position)
        return [s]
    if problem.is_symmetric_double():
        a, b = problem.centers
        return solve_symmetric_double(a.omega, a.exponent, b.position - a.position,
                                      0.5 * (a.position + b.position))
    return solve_general_bound(problem)
