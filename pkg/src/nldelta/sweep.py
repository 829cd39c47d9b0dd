"""Transmission sweeps over the wavenumber and the figure presets."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .errors import NoBranchError
from .greens import solve_scattering
from .model import DeltaCenter, ScatteringProblem, validate_and_sort
from .numerics import RootScanConfig

CSV_HEADER = ("k", "branch", "T2", "R2", "psi_cN", "residual")

#: sweep range used by every preset; the figures do not fix one
DEFAULT_K_RANGE = (0.1, 6.0)


@dataclass(frozen=True)
class Preset:
    name: str
    positions: tuple[float, ...]
    coupling: complex
    exponent: float
    description: str

    def problem(self, k=1.0) -> ScatteringProblem:
        return validate_and_sort([DeltaCenter(c, self.coupling, self.exponent)
                                  for c in self.positions], k, 1.0)


PRESETS = {p.name: p for p in [
    Preset("fig1-linear", (0.0, 1.0, 2.0), 2.0, 0.0, "three equal real centers, linear"),
    Preset("fig1-weak", (0.0, 1.0, 2.0), 2.0, 2.0, "three equal real centers, weak Kerr"),
    Preset("fig1-strong", (0.0, 1.0, 2.0), 20.0, 2.0, "three equal real centers, strong Kerr"),
    Preset("fig2-alpha-0.7", (-1.0, 0.0, 1.0), 1j, -0.7, "parity-symmetric imaginary centers"),
    Preset("fig2-alpha-0.5", (-1.0, 0.0, 1.0), 1j, -0.5, "parity-symmetric imaginary centers"),
    Preset("fig2-alpha0", (-1.0, 0.0, 1.0), 1j, 0.0, "parity-symmetric imaginary centers, linear"),
    Preset("fig2-alpha1", (-1.0, 0.0, 1.0), 1j, 1.0, "parity-symmetric imaginary centers"),
    Preset("fig2-alpha2", (-1.0, 0.0, 1.0), 1j, 2.0, "parity-symmetric imaginary centers, Kerr"),
]}


@dataclass(frozen=True)
class SweepSpec:
    k_min: float
    k_max: float
    n_points: int
    problem: ScatteringProblem
    scan: RootScanConfig | None = None
    log_spacing: bool = False

    def __post_init__(self):
        if not (0 < self.k_min < self.k_max):
            raise ValueError(f"need 0 < k_min < k_max, got {self.k_min}, {self.k_max}")
        if self.n_points < 2:
            raise ValueError("n_points must be >= 2")

    def k_values(self) -> np.ndarray:
        if self.log_spacing:
            return np.geomspace(self.k_min, self.k_max, self.n_points)
        return np.linspace(self.k_min, self.k_max, self.n_points)


@dataclass(frozen=True)
class SweepRecord:
    k: float
    branch: int
    T2: float
    R2: float
    psi_cN: float
    residual: float
    T_re: float = 0.0
    T_im: float = 0.0
    R_re: float = 0.0
    R_im: float = 0.0


def records_at(problem: ScatteringProblem, scan: RootScanConfig | None = None) -> list[SweepRecord]:
    """One record per branch at the problem's own wavenumber (empty if none)."""
    try:
        branches = solve_scattering(problem, scan)
    except NoBranchError:
        return []
    out = []
    for s in branches:
        out.append(SweepRecord(problem.k, s.branch_index, s.t_intensity, s.r_intensity,
                               abs(s.psi_at_centers[-1]), s.closure_residual,
                               s.transmission.real, s.transmission.imag,
                               s.reflection.real, s.reflection.imag))
    return out


def _point(args):
    problem, scan, k = args
    p = problem.with_k(k)
    return records_at(p, scan)


def run_sweep(spec: SweepSpec, workers: int | None = 1) -> list[SweepRecord]:
    """Records for every k in ascending order, branches ascending within each k.

    ``workers > 1`` evaluates k points in a process pool; ordering is
    unaffected.
    """
    jobs = [(spec.problem, spec.scan, float(k)) for k in spec.k_values()]
    if workers is None or workers <= 1:
        chunks = map(_point, jobs)
        return [r for chunk in chunks for r in chunk]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        chunks = list(pool.map(_point, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    return [r for chunk in chunks for r in chunk]


def _fmt(x):
    return format(x, ".17g")


def write_csv(records, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow([_fmt(r.k), r.branch, _fmt(r.T2), _fmt(r.R2), _fmt(r.psi_cN),
                         _fmt(r.residual)])


def records_to_csv(records) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


def records_to_json(records, **meta) -> str:
    return json.dumps({**meta, "records": [asdict(r) for r in records]}, indent=2)


def branch_counts(records) -> dict[float, int]:
    counts: dict[float, int] = {}
    for r in records:
        counts[r.k] = counts.get(r.k, 0) + 1
    return counts
