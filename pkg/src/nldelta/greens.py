"""Scattering from a chain of nonlinear delta centers via the consistency matrix.

Evaluating the Lippmann-Schwinger solution

    psi(x) = A e^{ikx} - sum_j g_j e^{ik|x - c_j|} psi(c_j),
    g_j = (i / 2k) f_j(|psi(c_j)|),

at every center gives ``Phi psi = A e^{ikc}``.  Subtracting the last row from
the others makes the system triangular, so every ``psi(c_i)`` follows from the
centers to its right.  Fixing the trial modulus ``r = |psi(c_N)|`` therefore
fixes every ``g_j``, and the self-consistent branches are the roots of

    r |det Phi(r)| - |A| = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, NoBranchError
from .model import (Incidence, Linear, PowerLaw, ScatteringProblem,
                    ScatteringSolution)
from .numerics import (RootScanConfig, find_all_positive_roots, scan_roots,
                       scan_roots_extending, solve_modulus_cubic)


@dataclass(frozen=True)
class PhiMatrix:
    entries: np.ndarray
    determinant: complex


@dataclass(frozen=True)
class CenterChain:
    """Center values implied by a trial modulus at the last center.

    ``ratios[i] = psi(c_i) / psi(c_N)`` in the gauge where ``psi(c_N)`` is
    real and positive.
    """

    ratios: np.ndarray
    moduli: np.ndarray
    g_values: np.ndarray


def default_scan_config(problem: ScatteringProblem, n_scan=4096, refine_tol=1e-12) -> RootScanConfig:
    a = abs(problem.amplitude)
    zmax = max(abs(complex(c.coupling)) for c in problem.centers)
    r_max = max(10.0 * a, a * (1.0 + zmax / problem.k))
    return RootScanConfig(1e-9 * a, r_max, n_scan=n_scan, refine_tol=refine_tol)


def _g_array(center, moduli, k):
    """g at an array of moduli; NaN where f is undefined."""
    moduli = np.asarray(moduli, dtype=float)
    nl = center.f
    if isinstance(nl, (PowerLaw, Linear)):
        z = complex(nl.coupling)
        alpha = nl.exponent
        if alpha == 0:
            f = np.full(moduli.shape, z, dtype=complex)
        else:
            with np.errstate(all="ignore"):
                f = z * moduli ** alpha
            if alpha < 0:
                f = np.where(moduli > 0, f, np.nan)
        f = np.where(np.isfinite(moduli), f, np.nan)
    else:
        f = np.empty(moduli.shape, dtype=complex)
        for idx, m in np.ndenumerate(moduli):
            try:
                f[idx] = nl.evaluate(float(m))
            except (DomainError, ValueError, ArithmeticError):
                f[idx] = np.nan
    return 0.5j / k * f


def _chain(problem: ScatteringProblem, r):
    """Vectorised back substitution; returns (psi_hat, g), shape (M, N)."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    k = problem.k
    c = np.asarray(problem.positions)
    n = problem.n
    psi = np.zeros((r.size, n), dtype=complex)
    g = np.zeros((r.size, n), dtype=complex)
    psi[:, -1] = r
    g[:, -1] = _g_array(problem.centers[-1], r, k)
    for i in range(n - 2, -1, -1):
        # row i minus row N, multiplied through by e^{ikc_i}
        acc = np.exp(-1j * k * (c[-1] - c[i])) * psi[:, -1]
        for j in range(i + 1, n):
            acc = acc - g[:, j] * (2j * np.sin(k * (c[j] - c[i]))) * psi[:, j]
        psi[:, i] = acc
        g[:, i] = _g_array(problem.centers[i], np.abs(acc), k)
    return psi, g


def _phi_stack(problem: ScatteringProblem, g):
    c = np.asarray(problem.positions)
    phase = np.exp(1j * problem.k * np.abs(c[:, None] - c[None, :]))
    phi = g[:, None, :] * phase[None, :, :]
    idx = np.arange(problem.n)
    phi[:, idx, idx] += 1.0
    return phi


def build_phi(problem: ScatteringProblem, moduli) -> PhiMatrix:
    """Consistency matrix ``Phi_ij = delta_ij + g_j e^{ik|c_i - c_j|}``."""
    moduli = np.asarray(moduli, dtype=float)
    if moduli.shape != (problem.n,):
        raise ValueError(f"expected {problem.n} moduli, got shape {moduli.shape}")
    if np.any(moduli < 0):
        raise DomainError("moduli must be non-negative")
    g = np.array([0.5j / problem.k * c.f.evaluate(float(m))
                  for c, m in zip(problem.centers, moduli)])
    phi = _phi_stack(problem, g[None, :])[0]
    return PhiMatrix(phi, complex(np.linalg.det(phi)))


def back_substitute(problem: ScatteringProblem, r_trial: float) -> CenterChain:
    """Center chain for a trial ``|psi(c_N)| = r_trial``."""
    if not r_trial > 0:
        raise DomainError(f"r_trial must be positive, got {r_trial}")
    psi, g = _chain(problem, r_trial)
    if not np.all(np.isfinite(g)):
        raise DomainError(f"nonlinearity undefined along the chain at r = {r_trial}")
    psi, g = psi[0], g[0]
    return CenterChain(psi / r_trial, np.abs(psi), g)


def closure_residuals(problem: ScatteringProblem, r) -> np.ndarray:
    """``r |det Phi| - |A|`` over an array of trial moduli (NaN where undefined)."""
    psi, g = _chain(problem, r)
    with np.errstate(all="ignore"):
        bad = ~np.all(np.isfinite(g), axis=1)
        g = np.where(bad[:, None], 0.0, g)
        det = np.linalg.det(_phi_stack(problem, g))
        out = np.asarray(r, dtype=float).reshape(-1) * np.abs(det) - abs(problem.amplitude)
    out[bad | ~np.isfinite(out)] = np.nan
    return out


def closure_residual(problem: ScatteringProblem, r_trial: float) -> float:
    """Closure residual at one trial modulus; NaN where the chain is undefined."""
    if not r_trial > 0:
        return math.nan
    return float(closure_residuals(problem, np.array([r_trial]))[0])


def _solution_at(problem: ScatteringProblem, r, index, residual) -> ScatteringSolution:
    psi_hat, g = _chain(problem, r)
    psi_hat, g = psi_hat[0], g[0]
    det = complex(np.linalg.det(_phi_stack(problem, g[None, :])[0]))
    k, a = problem.k, problem.amplitude
    c = np.asarray(problem.positions)
    psi_n = a * np.exp(1j * k * c[-1]) / det
    psi = psi_hat / r * psi_n
    t = 1.0 - np.sum(g * psi * np.exp(-1j * k * c)) / a
    refl = -np.sum(g * psi * np.exp(1j * k * c)) / a
    return ScatteringSolution(tuple(complex(v) for v in psi), complex(refl), complex(t),
                              index, float(residual), det, tuple(complex(v) for v in g))


def _mirror_solution(sol: ScatteringSolution) -> ScatteringSolution:
    return replace(sol, psi_at_centers=tuple(reversed(sol.psi_at_centers)),
                   g_values=tuple(reversed(sol.g_values)))


def solve_scattering(problem: ScatteringProblem, cfg: RootScanConfig | None = None,
                     extend=True) -> list[ScatteringSolution]:
    """Every self-consistent scattering branch, ordered by ``|psi(c_N)|``.

    Right incidence is handled by reflecting the chain through the origin.
    ``R`` and ``T`` are normalised by the incident amplitude.
    """
    if problem.incidence is Incidence.RIGHT:
        return [_mirror_solution(s) for s in solve_scattering(problem.mirrored(), cfg, extend)]
    if cfg is None:
        cfg = default_scan_config(problem)

    h = lambda r: closure_residuals(problem, r)
    if extend:
        roots, used = scan_roots_extending(h, cfg, vectorized=True)
    else:
        roots, used = scan_roots(h, cfg, vectorized=True), cfg
    if not roots:
        raise NoBranchError(
            f"no closure root for |psi(c_N)| in [{used.r_min:.3g}, {used.r_max:.3g}] "
            f"at k = {problem.k}; widen r_max")
    return [_solution_at(problem, root.value, i, root.residual) for i, root in enumerate(roots)]


def evaluate_wavefunction(problem: ScatteringProblem, solution: ScatteringSolution, x):
    """``psi(x)`` from the Lippmann-Schwinger sum; ``x`` may be an array."""
    x = np.asarray(x, dtype=float)
    k = problem.k
    sign = 1.0 if problem.incidence is Incidence.LEFT else -1.0
    out = problem.amplitude * np.exp(sign * 1j * k * x)
    for cj, gj, pj in zip(problem.positions, solution.g_values, solution.psi_at_centers):
        out = out - gj * np.exp(1j * k * np.abs(x - cj)) * pj
    return out[()] if out.ndim == 0 else out


def consistency_residual(problem: ScatteringProblem, solution: ScatteringSolution) -> float:
    """Max row error of ``Phi psi = A e^{+-ikc}`` for an accepted branch."""
    g = np.asarray(solution.g_values)
    phi = _phi_stack(problem, g[None, :])[0]
    psi = np.asarray(solution.psi_at_centers)
    sign = 1.0 if problem.incidence is Incidence.LEFT else -1.0
    rhs = problem.amplitude * np.exp(sign * 1j * problem.k * np.asarray(problem.positions))
    return float(np.max(np.abs(phi @ psi - rhs)))


def single_delta_closed_form(problem: ScatteringProblem, cfg: RootScanConfig | None = None
                             ) -> list[ScatteringSolution]:
    """Branches of a single power-law delta without the matrix machinery.

    Kerr centers use the closed-form cubic; other exponents scan the modulus
    equation ``x^2 |1 + i f(x)/2k|^2 = |A|^2`` directly.
    """
    if problem.n != 1:
        raise ValueError("single_delta_closed_form needs exactly one center")
    if problem.incidence is Incidence.RIGHT:
        return [_mirror_solution(s) for s in single_delta_closed_form(problem.mirrored(), cfg)]
    center = problem.centers[0]
    k, a = problem.k, problem.amplitude
    a_mod = abs(a)
    z = complex(center.coupling)
    alpha = center.exponent
    if center.nonlinearity is not None:
        raise ValueError("closed form only covers the power law")

    if alpha == 0:
        moduli = [a_mod / abs(1 + 0.5j * z / k)]
    elif alpha == 2:
        moduli = solve_modulus_cubic(z / (2 * k), a_mod)
    else:
        def h(x):
            fh = z * x ** alpha / (2 * k)
            return x * x * (abs(fh) ** 2 - 2 * fh.imag + 1) - a_mod * a_mod
        moduli = find_all_positive_roots(h, cfg or default_scan_config(problem))

    out = []
    c = center.position
    for i, x in enumerate(moduli):
        g = 0.5j / k * center.f.evaluate(x)
        psi = a * np.exp(1j * k * c) / (1 + g)
        t = 1 / (1 + g)
        refl = -g * np.exp(2j * k * c) / (1 + g)
        out.append(ScatteringSolution((complex(psi),), complex(refl), complex(t), i,
                                      abs(x * abs(1 + g) - a_mod), complex(1 + g), (complex(g),)))
    return out
