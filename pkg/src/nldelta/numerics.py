"""Scalar root finding: grid scans, the Kerr modulus cubic and real Lambert W."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .errors import BracketError, DomainError, ScanError

INV_E = math.exp(-1.0)


@dataclass(frozen=True)
class RootScanConfig:
    """Grid and refinement settings for :func:`find_all_positive_roots`.

    The grid is the union of ``n_scan`` uniform points and ``n_scan // 4``
    geometric points on ``[r_min, r_max]``, so roots near ``r_min`` are
    resolved as well as those in the bulk.
    """

    r_min: float
    r_max: float
    n_scan: int = 4096
    refine_tol: float = 1e-12
    max_refine_iters: int = 200

    def __post_init__(self):
        if not (0 < self.r_min < self.r_max):
            raise ValueError(f"need 0 < r_min < r_max, got {self.r_min}, {self.r_max}")
        if self.n_scan < 2:
            raise ValueError("n_scan must be >= 2")
        if not self.refine_tol > 0:
            raise ValueError("refine_tol must be > 0")

    def grid(self) -> np.ndarray:
        lin = np.linspace(self.r_min, self.r_max, self.n_scan)
        n_geo = max(self.n_scan // 4, 2)
        geo = np.geomspace(self.r_min, self.r_max, n_geo)
        return np.unique(np.concatenate([lin, geo]))


@dataclass(frozen=True)
class Root:
    value: float
    residual: float
    grazing: bool = False


def _evaluate(h, grid, vectorized):
    grid = np.asarray(grid, dtype=float)
    if vectorized:
        with np.errstate(all="ignore"):
            vals = np.asarray(h(grid), dtype=float)
    else:
        vals = np.empty_like(grid)
        for i, r in enumerate(grid):
            try:
                vals[i] = float(h(r))
            except (ArithmeticError, ValueError):
                vals[i] = np.nan
    vals[~np.isfinite(vals)] = np.nan
    return vals


def refine_root(h: Callable[[float], float], bracket, tol=1e-12, max_iters=200) -> float:
    """Refine a sign-change bracket to a root (Brent's bisection/secant hybrid)."""
    a, b = map(float, bracket)
    fa, fb = h(a), h(b)
    if fa == 0:
        return a
    if fb == 0:
        return b
    if not (np.isfinite(fa) and np.isfinite(fb)) or np.sign(fa) == np.sign(fb):
        raise BracketError(f"no sign change on [{a}, {b}]: h = {fa}, {fb}")
    # Brent converges superlinearly, so driving the bracket well below ``tol``
    # costs a few extra steps and pushes |h| down to rounding level
    return brentq(h, a, b, xtol=max(tol * 1e-4, 1e-300), rtol=4 * np.finfo(float).eps,
                  maxiter=max_iters)


def scan_roots(h, cfg: RootScanConfig, vectorized=False, scalar_h=None) -> list[Root]:
    """All roots of ``h`` isolated by the scan grid, with grazing flags.

    ``h`` may accept a whole array when ``vectorized`` is set; ``scalar_h``
    (default ``h``) is then used for refinement.
    """
    grid = cfg.grid()
    vals = _evaluate(h, grid, vectorized)
    if np.all(np.isnan(vals)):
        raise ScanError("target is undefined at every grid point")
    if scalar_h is None:
        scalar_h = (lambda r: float(h(np.array([r]))[0])) if vectorized else h

    def safe(r):
        try:
            v = float(scalar_h(r))
        except (ArithmeticError, ValueError):
            return np.nan
        return v

    found: list[Root] = []
    sign = np.sign(vals)
    n = len(grid)
    s0, s1 = sign[:-1], sign[1:]
    flips = np.flatnonzero((s0 * s1) < 0)
    zeros = np.flatnonzero(sign == 0)
    for i in zeros:
        before = sign[i - 1] if i > 0 else np.nan
        after = sign[i + 1] if i < n - 1 else np.nan
        found.append(Root(float(grid[i]), 0.0, grazing=bool(before == after and before != 0)))
    for i in flips:
        try:
            r = refine_root(safe, (grid[i], grid[i + 1]), cfg.refine_tol, cfg.max_refine_iters)
        except (BracketError, ValueError, RuntimeError):
            continue
        hr = safe(r)
        scale = max(abs(vals[i]), abs(vals[i + 1]))
        # a sign flip across a pole is not a root
        if not np.isfinite(hr) or abs(hr) > 10 * cfg.refine_tol * (1 + scale) + 1e-9 * scale:
            continue
        found.append(Root(float(r), abs(hr)))

    found.sort(key=lambda root: root.value)
    merged: list[Root] = []
    for root in found:
        if merged and root.value - merged[-1].value < cfg.refine_tol:
            continue
        merged.append(root)
    return merged


def find_all_positive_roots(h, cfg: RootScanConfig, vectorized=False) -> list[float]:
    """Sorted roots of ``h`` on ``[cfg.r_min, cfg.r_max]`` found by a sign-change scan."""
    return [root.value for root in scan_roots(h, cfg, vectorized=vectorized)]


def scan_roots_extending(h, cfg: RootScanConfig, vectorized=False, max_doublings=3):
    """Like :func:`scan_roots`, doubling ``r_max`` while roots may lie beyond it.

    The range is extended when the target is still negative at ``r_max`` or
    when a root was found in the top decile of the range.
    """
    for attempt in range(max_doublings + 1):
        roots = scan_roots(h, cfg, vectorized=vectorized)
        top = _evaluate(h, np.array([cfg.r_max]), vectorized)[0]
        near_edge = any(root.value > cfg.r_min + 0.9 * (cfg.r_max - cfg.r_min) for root in roots)
        if attempt == max_doublings or not (near_edge or (np.isfinite(top) and top < 0)):
            return roots, cfg
        cfg = replace(cfg, r_max=2 * cfg.r_max, n_scan=cfg.n_scan + cfg.n_scan // 2)
    return roots, cfg


# cubic -----------------------------------------------------------------------

def real_cubic_roots(a, b, c, d, zero_tol=1e-14) -> list[float]:
    """Real roots of ``a y^3 + b y^2 + c y + d`` in closed form, ascending.

    Uses the trigonometric form for three real roots and Cardano otherwise;
    each root gets two Newton polishing steps.
    """
    if a == 0:
        if b == 0:
            return [] if c == 0 else [-d / c]
        disc = c * c - 4 * b * d
        if disc < 0:
            return []
        s = math.sqrt(disc)
        q = -0.5 * (c + math.copysign(s, c))
        roots = [q / b] + ([d / q] if q != 0 else [])
        return sorted(set(roots))

    B, C, D = b / a, c / a, d / a
    shift = B / 3.0
    p = C - B * B / 3.0
    q = 2.0 * B ** 3 / 27.0 - B * C / 3.0 + D
    # rescale t = sc * tau so p^3 and q^2 neither underflow nor overflow
    sc = max(math.sqrt(abs(p)), abs(q) ** (1.0 / 3.0))
    if sc == 0:
        ts = [0.0]
    else:
        p, q = p / sc / sc, q / sc / sc / sc
        # discriminant of tau^3 + p tau + q, sign classifies the root structure
        t1, t2 = 4.0 * p ** 3, 27.0 * q * q
        disc = -(t1 + t2)
        if abs(disc) <= zero_tol * (abs(t1) + abs(t2)):
            ts = [0.0] if p == 0 else [3.0 * q / p, -1.5 * q / p]
        elif disc > 0:
            m = 2.0 * math.sqrt(-p / 3.0)
            arg = 3.0 * q / (p * m)
            theta = math.acos(max(-1.0, min(1.0, arg))) / 3.0
            ts = [m * math.cos(theta - 2.0 * math.pi * j / 3.0) for j in range(3)]
        else:
            root = math.sqrt(q * q / 4.0 + p ** 3 / 27.0)
            ts = [float(np.cbrt(-q / 2.0 + root) + np.cbrt(-q / 2.0 - root))]
        ts = [sc * t for t in ts]

    roots = []
    for t in ts:
        y = t - shift
        fy = ((a * y + b) * y + c) * y + d
        for _ in range(2):
            dfy = (3 * a * y + 2 * b) * y + c
            if dfy == 0:
                break
            trial = y - fy / dfy
            ft = ((a * trial + b) * trial + c) * trial + d
            # near a double root Newton can overshoot; keep only improvements
            if not (math.isfinite(ft) and abs(ft) < abs(fy)):
                break
            y, fy = trial, ft
        roots.append(y)
    return sorted(roots)


def solve_modulus_cubic(z_hat: complex, a_mod: float) -> list[float]:
    """Moduli ``x = |psi(c)|`` of a Kerr delta from the cubic in ``y = x^2``.

    Solves ``|z|^2 y^3 - 2 Im(z) y^2 + y - a^2 = 0`` with ``z = z_hat`` and
    returns ``sqrt(y)`` for every positive real root, ascending.  More than one
    root is possible when ``Im(z_hat) > 0``.
    """
    if not a_mod > 0:
        raise DomainError(f"|A| must be positive, got {a_mod}")
    z_hat = complex(z_hat)
    if z_hat == 0:
        return [float(a_mod)]
    ys = real_cubic_roots(abs(z_hat) ** 2, -2.0 * z_hat.imag, 1.0, -a_mod * a_mod)
    xs = sorted(math.sqrt(y) for y in ys if y > 0)
    out = []
    for x in xs:
        if not out or x - out[-1] > 1e-14 * max(1.0, x):
            out.append(x)
    return out


# Lambert W -------------------------------------------------------------------

def _halley(w, y, iters=60):
    for _ in range(iters):
        ew = math.exp(w)
        f = w * ew - y
        wp1 = w + 1.0
        if wp1 == 0:
            break
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        if denom == 0:
            break
        step = f / denom
        w_new = w - step
        if not math.isfinite(w_new):
            break
        if abs(step) <= 4e-16 * (1.0 + abs(w_new)):
            return w_new
        w = w_new
    return w


def lambert_w(branch: int, y: float) -> float:
    """Real Lambert W on branch 0 or -1, i.e. the ``w`` with ``w e^w = y``."""
    y = float(y)
    if math.isnan(y):
        raise DomainError("Lambert W of NaN")
    if branch not in (0, -1):
        raise DomainError(f"unsupported branch {branch}")
    if y < -INV_E:
        # tolerate rounding of arguments computed as -1/e
        if y > -INV_E * (1 + 1e-15):
            return -1.0
        raise DomainError(f"y = {y} < -1/e")
    if branch == -1 and y >= 0:
        raise DomainError(f"branch -1 needs -1/e <= y < 0, got {y}")
    if y == -INV_E:
        return -1.0
    if branch == 0 and y == 0:
        return 0.0
    if branch == 0 and math.isinf(y):
        return math.inf

    p2 = 2.0 * (math.e * y + 1.0)
    p = math.sqrt(max(p2, 0.0))
    if branch == 0:
        if p < 0.5:
            w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
        elif y < 3.0:
            w = math.log1p(y) if y > -0.3 else y
        else:
            ly = math.log(y)
            w = ly - math.log(ly)
        w = max(w, -1.0)
    else:
        if p < 0.5:
            w = -1.0 - p - p * p / 3.0 - 11.0 / 72.0 * p ** 3
        else:
            ly = math.log(-y)
            w = ly - math.log(-ly)
        w = min(w, -1.0)
    w = _halley(w, y)
    if branch == 0:
        return max(w, -1.0)
    return min(w, -1.0)
