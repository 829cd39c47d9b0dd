"""Problem and solution types for nonlinear point-interaction chains.

Scattering problems use the convention

    -psi'' + sum_i delta(x - c_i) f_i(|psi|) psi = k^2 psi,

with ``f_i(m) = z_i m**alpha_i`` and a complex opacity ``z_i``.  Bound-state
problems use the attractive convention

    -psi'' - sum_i Omega_i delta(x - c_i) |psi|**alpha_i psi = -nu^2 psi,

with real ``Omega_i > 0``.  The two are kept in separate types on purpose.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Protocol, Sequence

from .errors import DomainError, ValidationError

#: positions closer than this are treated as one center
DUPLICATE_TOL = 1e-12


class Nonlinearity(Protocol):
    """Anything mapping a modulus ``|psi(c)| >= 0`` to a complex opacity."""

    def evaluate(self, modulus: float) -> complex: ...


@dataclass(frozen=True)
class PowerLaw:
    """``f(m) = coupling * m**exponent``."""

    coupling: complex
    exponent: float = 0.0

    def evaluate(self, modulus: float) -> complex:
        if modulus < 0 or math.isnan(modulus):
            raise DomainError(f"modulus must be >= 0, got {modulus}")
        if self.exponent == 0:
            return complex(self.coupling)
        if modulus == 0:
            if self.exponent < 0:
                raise DomainError(
                    f"f diverges at modulus 0 for exponent {self.exponent}")
            return 0j
        value = complex(self.coupling) * modulus ** self.exponent
        if not cmath.isfinite(value):
            raise DomainError(f"f({modulus}) overflowed")
        return value


@dataclass(frozen=True)
class Linear:
    """Constant opacity; identical to ``PowerLaw(coupling, 0)``."""

    coupling: complex

    @property
    def exponent(self) -> float:
        return 0.0

    def evaluate(self, modulus: float) -> complex:
        if modulus < 0 or math.isnan(modulus):
            raise DomainError(f"modulus must be >= 0, got {modulus}")
        return complex(self.coupling)


def evaluate_f(nl: Nonlinearity, modulus: float) -> complex:
    """Opacity ``f(|psi(c)|)`` of one center."""
    return nl.evaluate(modulus)


def effective_g(nl: Nonlinearity, modulus: float, k: float) -> complex:
    """Effective coupling ``g = (i / 2k) f(modulus)``."""
    if not k > 0:
        raise DomainError(f"wavenumber must be positive, got {k}")
    return 0.5j / k * nl.evaluate(modulus)


@dataclass(frozen=True)
class DeltaCenter:
    """One scattering site at ``position`` with opacity ``coupling * m**exponent``.

    ``nonlinearity`` overrides the power law when a custom modulus map is
    wanted; it must honour the :class:`Nonlinearity` contract.
    """

    position: float
    coupling: complex
    exponent: float = 0.0
    nonlinearity: Nonlinearity | None = field(default=None, compare=False)

    @property
    def f(self) -> Nonlinearity:
        if self.nonlinearity is not None:
            return self.nonlinearity
        return PowerLaw(complex(self.coupling), float(self.exponent))

    def mirrored(self) -> "DeltaCenter":
        return DeltaCenter(-self.position, self.coupling, self.exponent,
                           self.nonlinearity)


class Incidence(str, Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class ScatteringProblem:
    centers: tuple[DeltaCenter, ...]
    k: float
    amplitude: complex = 1.0 + 0j
    incidence: Incidence = Incidence.LEFT

    @property
    def n(self) -> int:
        return len(self.centers)

    @property
    def positions(self) -> tuple[float, ...]:
        return tuple(c.position for c in self.centers)

    def with_k(self, k: float) -> "ScatteringProblem":
        return validate_and_sort(self.centers, k, self.amplitude, self.incidence)

    def with_incidence(self, incidence) -> "ScatteringProblem":
        return validate_and_sort(self.centers, self.k, self.amplitude, incidence)

    def mirrored(self) -> "ScatteringProblem":
        """Reflect x -> -x; a right-incident problem becomes left-incident."""
        flipped = Incidence.LEFT if self.incidence is Incidence.RIGHT else Incidence.RIGHT
        centers = tuple(c.mirrored() for c in reversed(self.centers))
        return ScatteringProblem(centers, self.k, self.amplitude, flipped)


@dataclass(frozen=True)
class ScatteringSolution:
    """One self-consistent branch.

    ``reflection`` and ``transmission`` are the amplitudes relative to the
    incident amplitude, so ``|T|**2`` is the transmission intensity.
    """

    psi_at_centers: tuple[complex, ...]
    reflection: complex
    transmission: complex
    branch_index: int = 0
    closure_residual: float = 0.0
    det_phi: complex = 1.0 + 0j
    g_values: tuple[complex, ...] = ()

    @property
    def t_intensity(self) -> float:
        return abs(self.transmission) ** 2

    @property
    def r_intensity(self) -> float:
        return abs(self.reflection) ** 2


@dataclass(frozen=True)
class BoundCenter:
    position: float
    omega: float
    exponent: float = 0.0


@dataclass(frozen=True)
class BoundProblem:
    centers: tuple[BoundCenter, ...]

    @property
    def n(self) -> int:
        return len(self.centers)

    @property
    def positions(self) -> tuple[float, ...]:
        return tuple(c.position for c in self.centers)

    def is_symmetric_double(self, tol=1e-12) -> bool:
        if self.n != 2:
            return False
        a, b = self.centers
        return (abs(a.omega - b.omega) <= tol * max(1.0, a.omega)
                and abs(a.exponent - b.exponent) <= tol)


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"
    NONE = "none"


@dataclass(frozen=True)
class BoundStateSolution:
    nu: float
    psi_at_centers: tuple[complex, ...]
    parity: Parity = Parity.NONE
    norm_residual: float = 0.0
    branch_index: int = 0
    #: largest deviation seen by an internal cross-check route, if one ran
    cross_check: float | None = None

    @property
    def energy(self) -> float:
        return -self.nu * self.nu


def _finite(value, name):
    if not math.isfinite(value):
        raise ValidationError(name, f"must be finite, got {value!r}")


def validate_and_sort(centers: Sequence[DeltaCenter], k, amplitude=1.0,
                      incidence=Incidence.LEFT) -> ScatteringProblem:
    """Check a raw scattering setup and return it with centers in ascending order."""
    centers = list(centers)
    if not centers:
        raise ValidationError("centers", "at least one center is required")
    for i, c in enumerate(centers):
        _finite(c.position, f"centers[{i}].c")
        z = complex(c.coupling)
        _finite(z.real, f"centers[{i}].z")
        _finite(z.imag, f"centers[{i}].z")
        _finite(c.exponent, f"centers[{i}].alpha")
    try:
        k = float(k)
    except (TypeError, ValueError):
        raise ValidationError("k", f"not a number: {k!r}") from None
    _finite(k, "k")
    if k <= 0:
        raise ValidationError("k", f"wavenumber must be > 0, got {k}")
    amplitude = complex(amplitude)
    _finite(amplitude.real, "A")
    _finite(amplitude.imag, "A")
    if amplitude == 0:
        raise ValidationError("A", "incident amplitude must be nonzero")
    try:
        incidence = Incidence(incidence)
    except ValueError:
        raise ValidationError("incidence", f"expected 'left' or 'right', got {incidence!r}") from None

    centers.sort(key=lambda c: c.position)
    for a, b in zip(centers, centers[1:]):
        if b.position - a.position <= DUPLICATE_TOL:
            raise ValidationError("centers", f"duplicate position {b.position}")
    return ScatteringProblem(tuple(centers), k, amplitude, incidence)


def validate_bound(centers: Sequence[BoundCenter]) -> BoundProblem:
    centers = list(centers)
    if not centers:
        raise ValidationError("centers", "at least one center is required")
    for i, c in enumerate(centers):
        _finite(c.position, f"centers[{i}].c")
        _finite(c.omega, f"centers[{i}].omega")
        _finite(c.exponent, f"centers[{i}].alpha")
        if c.omega <= 0:
            raise ValidationError(f"centers[{i}].omega", "strength must be > 0")
    centers.sort(key=lambda c: c.position)
    for a, b in zip(centers, centers[1:]):
        if b.position - a.position <= DUPLICATE_TOL:
            raise ValidationError("centers", f"duplicate position {b.position}")
    return BoundProblem(tuple(centers))


# JSON ingestion -------------------------------------------------------------

def _complex_field(value, name):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        try:
            return complex(float(value[0]), float(value[1]))
        except (TypeError, ValueError):
            pass
    raise ValidationError(name, f"expected [re, im], got {value!r}")


def _real_field(entry, key, name, default=None):
    if key not in entry:
        if default is None:
            raise ValidationError(name, "missing")
        return default
    value = entry[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(name, f"expected a number, got {value!r}")
    return float(value)


def _center_list(data):
    if not isinstance(data, dict):
        raise ValidationError("<root>", "expected a JSON object")
    raw = data.get("centers")
    if not isinstance(raw, list):
        raise ValidationError("centers", "expected a list")
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise ValidationError(f"centers[{i}]", "expected an object")
    return raw


def problem_from_dict(data: dict, k=None) -> ScatteringProblem:
    """Build a scattering problem from the JSON config layout.

    ``{"centers": [{"c": .., "z": [re, im], "alpha": ..}], "k": ..,
    "A": [re, im], "incidence": "left" | "right"}``.  ``k`` overrides the file.
    """
    centers = []
    for i, entry in enumerate(_center_list(data)):
        centers.append(DeltaCenter(
            _real_field(entry, "c", f"centers[{i}].c"),
            _complex_field(entry.get("z"), f"centers[{i}].z"),
            _real_field(entry, "alpha", f"centers[{i}].alpha", 0.0),
        ))
    if k is None:
        if "k" not in data:
            raise ValidationError("k", "missing")
        k = _real_field(data, "k", "k")
    amplitude = _complex_field(data.get("A", [1.0, 0.0]), "A")
    return validate_and_sort(centers, k, amplitude, data.get("incidence", "left"))


def bound_problem_from_dict(data: dict) -> BoundProblem:
    centers = []
    for i, entry in enumerate(_center_list(data)):
        centers.append(BoundCenter(
            _real_field(entry, "c", f"centers[{i}].c"),
            _real_field(entry, "omega", f"centers[{i}].omega"),
            _real_field(entry, "alpha", f"centers[{i}].alpha", 0.0),
        ))
    return validate_bound(centers)


def problem_to_dict(problem: ScatteringProblem) -> dict:
    return {
        "centers": [{"c": c.position, "z": [complex(c.coupling).real, complex(c.coupling).imag],
                     "alpha": c.exponent} for c in problem.centers],
        "k": problem.k,
        "A": [problem.amplitude.real, problem.amplitude.imag],
        "incidence": problem.incidence.value,
    }
