"""Independent checks: transfer-matrix scattering and a shooting bound-state finder.

Nothing here touches the consistency matrix.  Scattering is parameterised by
the transmitted modulus: with ``psi = t e^{ikx}`` right of the chain, every
center value is known before its jump is applied, so the march from right to
left needs no iteration.  Bound states are shot from the left with a fixed
amplitude at the first center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import ConvergenceError, DomainError
from .model import BoundCenter, BoundProblem, Incidence, ScatteringProblem
from .numerics import RootScanConfig, find_all_positive_roots


@dataclass(frozen=True)
class PlaneWaveRegion:
    """``a e^{ikx} + b e^{-ikx}`` on ``[left_edge, right_edge]``."""

    a_coeff: complex
    b_coeff: complex
    left_edge: float
    right_edge: float


@dataclass(frozen=True)
class OracleBranch:
    t_modulus: float
    transmission: complex
    reflection: complex
    psi_at_centers: tuple[complex, ...]

    @property
    def t_intensity(self) -> float:
        return abs(self.transmission) ** 2

    @property
    def r_intensity(self) -> float:
        return abs(self.reflection) ** 2


def _opacity(center, modulus):
    """``z m**alpha`` evaluated independently of the model helpers."""
    z = complex(center.coupling)
    alpha = float(center.exponent)
    modulus = np.asarray(modulus, dtype=float)
    if alpha == 0:
        return np.full(modulus.shape, z, dtype=complex)
    with np.errstate(all="ignore"):
        out = z * modulus ** alpha
    if alpha < 0:
        out = np.where(modulus > 0, out, np.nan)
    return out


def _step(center, c, k, a, b, direction):
    """Carry ``a e^{ikx} + b e^{-ikx}`` across one center, rightward (+1) or leftward (-1)."""
    ep, em = np.exp(1j * k * c), np.exp(-1j * k * c)
    psi = a * ep + b * em
    slope = 1j * k * (a * ep - b * em) + direction * _opacity(center, np.abs(psi)) * psi
    return 0.5 * (psi + slope / (1j * k)) * em, 0.5 * (psi - slope / (1j * k)) * ep, psi


def _march(problem, t):
    """Start from the transmitted wave of modulus ``t`` and march to the incidence side.

    Returns ``(incident, reflected, psi_at_centers)`` as arrays over ``t``.
    Right incidence is marched left to right from ``t e^{-ikx}``, without
    mirroring the chain.
    """
    t = np.asarray(t, dtype=complex)
    zero = np.zeros_like(t)
    psis = []
    if problem.incidence is Incidence.LEFT:
        a, b = t.copy(), zero
        for center in reversed(problem.centers):
            a, b, psi = _step(center, center.position, problem.k, a, b, -1)
            psis.append(psi)
        return a, b, psis[::-1]
    a, b = zero, t.copy()
    for center in problem.centers:
        a, b, psi = _step(center, center.position, problem.k, a, b, +1)
        psis.append(psi)
    return b, a, psis


def transfer_scatter(problem: ScatteringProblem, t_modulus: float):
    """March a transmitted wave of modulus ``t_modulus`` back through the chain.

    Returns ``(incident, reflected, psi_at_centers)``: the coefficients of the
    incoming and reflected waves on the incidence side and the center values,
    ordered like ``problem.centers``.
    """
    if not t_modulus > 0:
        raise DomainError(f"t_modulus must be positive, got {t_modulus}")
    a, b, psis = _march(problem, np.array([t_modulus]))
    if not (np.isfinite(a[0]) and np.isfinite(b[0])):
        raise DomainError(f"opacity undefined along the march at t = {t_modulus}")
    return complex(a[0]), complex(b[0]), tuple(complex(p[0]) for p in psis)


def transfer_regions(problem: ScatteringProblem, t_modulus: float) -> list[PlaneWaveRegion]:
    """Plane-wave coefficients of every region, left to right (left incidence)."""
    if problem.incidence is not Incidence.LEFT:
        raise ValueError("regions are only reported for left incidence")
    positions = [c.position for c in problem.centers]
    a, b = complex(t_modulus), 0j
    regions = [PlaneWaveRegion(a, b, positions[-1], math.inf)]
    for i in range(len(problem.centers) - 1, -1, -1):
        center = problem.centers[i]
        a, b, _ = _step(center, center.position, problem.k, a, b, -1)
        left = positions[i - 1] if i > 0 else -math.inf
        regions.append(PlaneWaveRegion(complex(a), complex(b), left, center.position))
    return regions[::-1]


def oracle_branches(problem: ScatteringProblem, cfg: RootScanConfig) -> list[OracleBranch]:
    """All branches with ``|incident(t)| = |A|``, ordered by ``t``."""
    a_mod = abs(problem.amplitude)

    def mismatch(t):
        inc, _, _ = _march(problem, np.atleast_1d(t))
        return np.abs(inc) - a_mod

    roots = find_all_positive_roots(mismatch, cfg, vectorized=True)
    out = []
    for t in roots:
        inc, refl, psis = _march(problem, np.array([t]))
        inc, refl = complex(inc[0]), complex(refl[0])
        scale = problem.amplitude / inc
        psi = [complex(p[0]) * scale for p in psis]
        out.append(OracleBranch(float(t), t / inc, refl / inc, tuple(psi)))
    return out


# bound states ------------------------------------------------------------------

@dataclass(frozen=True)
class ShotState:
    nu: float
    gamma: float
    psi_at_centers: tuple[float, ...]


def _shoot(problem: BoundProblem, nu, gamma):
    """Growing right-tail coefficient, center values and norm for each nu."""
    nu = np.asarray(nu, dtype=float)
    c = problem.positions
    psi = np.zeros(nu.shape) + np.asarray(gamma, dtype=float)
    slope = nu * psi
    norm = psi ** 2 / (2 * nu)
    values = []
    for i, center in enumerate(problem.centers):
        if i > 0:
            d = c[i] - c[i - 1]
            p = 0.5 * (psi + slope / nu)
            q = 0.5 * (psi - slope / nu)
            with np.errstate(over="ignore", invalid="ignore"):
                grow, decay = np.exp(nu * d), np.exp(-nu * d)
                norm = norm + (p * p * (grow * grow - 1) + q * q * (1 - decay * decay)) / (2 * nu) \
                    + 2 * p * q * d
                psi, slope = p * grow + q * decay, nu * (p * grow - q * decay)
        values.append(psi)
        with np.errstate(invalid="ignore"):
            slope = slope - center.omega * np.abs(psi) ** center.exponent * psi
    grow_coeff = 0.5 * (psi + slope / nu)
    norm = norm + psi ** 2 / (2 * nu)
    return grow_coeff, values, norm


def _nu_roots(problem, gamma, nu_grid):
    """Zeros of the growing coefficient in ``nu`` at fixed ``gamma``.

    Besides sign changes, every interior local minimum of ``|v|`` is probed,
    so two roots sharing one grid cell (tunnelling pairs) are not lost.
    """
    grid = np.asarray(nu_grid, dtype=float)
    vals, _, _ = _shoot(problem, grid, gamma)
    vals = np.where(np.isfinite(vals), vals, np.nan)
    f = lambda nu: float(_shoot(problem, np.array([nu]), gamma)[0][0])
    roots = []
    for i in range(len(grid) - 1):
        v0, v1 = vals[i], vals[i + 1]
        if np.isnan(v0) or np.isnan(v1):
            continue
        if v0 == 0:
            roots.append(grid[i])
        elif v0 * v1 < 0:
            roots.append(brentq(f, grid[i], grid[i + 1], xtol=1e-15, rtol=1e-15))
    mags = np.abs(vals)
    for i in range(1, len(grid) - 1):
        v = vals[i - 1:i + 2]
        if np.any(np.isnan(v)) or not (mags[i] < mags[i - 1] and mags[i] < mags[i + 1]):
            continue
        if v[0] * v[1] <= 0 or v[1] * v[2] <= 0:
            continue
        sign = math.copysign(1.0, v[1])
        res = minimize_scalar(lambda nu: sign * f(nu), bounds=(grid[i - 1], grid[i + 1]),
                              method="bounded", options={"xatol": 1e-14 * grid[i]})
        if sign * f(res.x) < 0:
            roots.append(brentq(f, grid[i - 1], res.x, xtol=1e-15, rtol=1e-15))
            roots.append(brentq(f, res.x, grid[i + 1], xtol=1e-15, rtol=1e-15))
    return sorted(roots)


def _nearest(roots, nu):
    if not roots:
        return None
    j = int(np.argmin([abs(math.log(r / nu)) for r in roots]))
    return roots[j]


def default_nu_grid(problem: BoundProblem, n=600):
    top = max((c.omega / 2) ** (2 / (2 - c.exponent)) if c.exponent < 2 else c.omega
              for c in problem.centers)
    return np.geomspace(1e-3, 2 * top + 1, n)


def shooting_states(problem: BoundProblem, nu_grid=None, gamma_range=None, n_gamma=160
                    ) -> list[ShotState]:
    """Bound states found by joint (nu, gamma) shooting with unit norm.

    For each ``gamma`` on a log grid the decaying solutions give a set of
    ``nu`` roots; roots are linked across neighbouring ``gamma`` values by
    mutual nearest neighbour, and a sign change of ``norm - 1`` along a link
    is refined by bisection in ``log gamma`` with the root followed by
    continuation.
    """
    nu_grid = default_nu_grid(problem) if nu_grid is None else np.asarray(nu_grid, dtype=float)
    if np.any(nu_grid <= 0):
        raise ValueError("nu_grid must be positive")
    if gamma_range is None:
        scale = max((c.omega / 2) ** (1 / (2 - c.exponent)) if c.exponent < 2 else 1.0
                    for c in problem.centers)
        gamma_range = (1e-3 * scale, 1e2 * scale)
    gammas = np.geomspace(*gamma_range, n_gamma)
    norm_of = lambda nu, g: float(_shoot(problem, np.array([nu]), g)[2][0]) - 1.0
    per_gamma = [_nu_roots(problem, g, nu_grid) for g in gammas]

    states = []
    for i in range(n_gamma - 1):
        here, there = per_gamma[i], per_gamma[i + 1]
        for nu_a in here:
            nu_b = _nearest(there, nu_a)
            if nu_b is None or _nearest(here, nu_b) != nu_a:
                continue
            lo, hi = math.log(gammas[i]), math.log(gammas[i + 1])
            n_lo, n_hi = norm_of(nu_a, gammas[i]), norm_of(nu_b, gammas[i + 1])
            if n_lo * n_hi > 0:
                continue
            nu_lo, nu_hi = nu_a, nu_b
            for _ in range(200):
                if hi - lo < 1e-15 * max(1.0, abs(lo)):
                    break
                mid = 0.5 * (lo + hi)
                nu_mid = _nearest(_nu_roots(problem, math.exp(mid), nu_grid),
                                  math.sqrt(nu_lo * nu_hi))
                if nu_mid is None:
                    break
                n_mid = norm_of(nu_mid, math.exp(mid))
                if n_mid * n_lo <= 0:
                    hi, nu_hi, n_hi = mid, nu_mid, n_mid
                else:
                    lo, nu_lo, n_lo = mid, nu_mid, n_mid
            nu, g, resid = (nu_lo, lo, n_lo) if abs(n_lo) < abs(n_hi) else (nu_hi, hi, n_hi)
            if abs(resid) > 1e-8:
                continue
            gamma = math.exp(g)
            if any(abs(s.nu - nu) < 1e-9 * nu for s in states):
                continue
            _, values, _ = _shoot(problem, np.array([nu]), gamma)
            states.append(ShotState(nu, gamma, tuple(float(v[0]) for v in values)))
    if not states:
        raise ConvergenceError("shooting found no normalisable bound state")
    states.sort(key=lambda s: -s.nu)
    return states


def _half_shot(omega, alpha, d, nu, beta, parity):
    """Midpoint condition for a left-tail solution of unit amplitude.

    The solution ``e^{nu (x + d/2)}`` is carried across the left center with
    ``beta = Omega A^alpha`` and evaluated at the midpoint: ``psi'(0)`` for
    even states, ``psi(0)`` for odd ones.
    """
    slope = nu - beta
    p = 0.5 * (1 + slope / nu) * np.exp(nu * d / 2)
    q = 0.5 * (1 - slope / nu) * np.exp(-nu * d / 2)
    return p - q if parity == "even" else p + q


def symmetric_shooting(omega: float, alpha: float, d: float, nu_grid=None) -> list[ShotState]:
    """Even and odd states of the symmetric double well by half-line shooting.

    For each ``nu`` the midpoint condition is affine in ``beta``, so two shots
    fix ``beta`` and hence ``A``; the norm is integrated over the piecewise
    exponentials and ``norm(nu) = 1`` is solved by scanning ``nu``.  Asymmetric
    states are not seen.
    """
    if nu_grid is None:
        top = omega * max(1.0, (omega / 2) ** (alpha / (2 - alpha)) if alpha < 2 else 1.0)
        nu_grid = np.geomspace(1e-7, 4 * top + 1, 4000)
    nu_grid = np.asarray(nu_grid, dtype=float)
    problem = BoundProblem((BoundCenter(-d / 2, omega, alpha), BoundCenter(d / 2, omega, alpha)))
    states = []
    for parity in ("even", "odd"):
        def amplitude(nu):
            m0 = _half_shot(omega, alpha, d, nu, 0.0, parity)
            m1 = _half_shot(omega, alpha, d, nu, 1.0, parity) - m0
            with np.errstate(all="ignore"):
                beta = -m0 / m1
                if alpha == 0:
                    return np.where(np.abs(beta - omega) < 1e-9 * omega, 1.0, np.nan)
                return np.where(beta > 0, (beta / omega) ** (1 / alpha), np.nan)

        def excess(nu):
            nu = np.atleast_1d(np.asarray(nu, dtype=float))
            amp = amplitude(nu)
            return _shoot(problem, nu, amp)[2] - 1.0

        if alpha == 0:
            # beta is fixed, so nu is pinned by the midpoint condition alone
            f = lambda nu: float(_half_shot(omega, 0.0, d, nu, omega, parity) / nu)
            vals = np.array([f(v) for v in nu_grid])
            roots = [brentq(f, a, b, xtol=1e-15, rtol=1e-15)
                     for a, b, va, vb in zip(nu_grid, nu_grid[1:], vals, vals[1:]) if va * vb < 0]
            for nu in roots:
                norm = float(_shoot(problem, np.array([nu]), 1.0)[2][0])
                amp = 1 / math.sqrt(norm)
                sign = 1.0 if parity == "even" else -1.0
                states.append(ShotState(nu, amp, (amp, sign * amp)))
            continue
        vals = excess(nu_grid)
        for i in range(len(nu_grid) - 1):
            v0, v1 = vals[i], vals[i + 1]
            if not (np.isfinite(v0) and np.isfinite(v1)) or v0 * v1 > 0:
                continue
            nu = brentq(lambda v: float(excess(v)[0]), nu_grid[i], nu_grid[i + 1],
                        xtol=1e-15, rtol=1e-15)
            amp = float(amplitude(np.array([nu]))[0])
            sign = 1.0 if parity == "even" else -1.0
            states.append(ShotState(nu, amp, (amp, sign * amp)))
    states.sort(key=lambda s: -s.nu)
    return states


def shooting_bound(problem: BoundProblem, nu_grid=None, **kwargs) -> list[float]:
    """Bound-state ``nu`` values from shooting, deepest first."""
    return [s.nu for s in shooting_states(problem, nu_grid, **kwargs)]
