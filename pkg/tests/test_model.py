import math

import pytest

from nldelta.errors import DomainError, ValidationError
from nldelta.model import (BoundCenter, DeltaCenter, Incidence, Linear, PowerLaw,
                           bound_problem_from_dict, effective_g, evaluate_f,
                           problem_from_dict, problem_to_dict, validate_and_sort,
                           validate_bound)


@pytest.mark.parametrize("nl, modulus, expected", [
    (PowerLaw(2, 2), 1.0, 2),
    (PowerLaw(1j, 0), 7.3, 1j),
    (PowerLaw(2, 2), 0.5, 0.5),
    (Linear(3 - 1j), 0.0, 3 - 1j),
])
def test_evaluate_f(nl, modulus, expected):
    assert evaluate_f(nl, modulus) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("nl, modulus, k, expected", [
    (Linear(2), 0.0, 1.0, 1j),
    (PowerLaw(2, 2), 1.0, 1.0, 1j),
    (PowerLaw(20, 2), 0.1, 2.0, 0.05j),
])
def test_effective_g(nl, modulus, k, expected):
    assert effective_g(nl, modulus, k) == pytest.approx(expected, abs=1e-15)


def test_negative_exponent_diverges_at_zero():
    with pytest.raises(DomainError):
        PowerLaw(1, -0.5).evaluate(0.0)
    assert PowerLaw(1, 0.5).evaluate(0.0) == 0


@pytest.mark.parametrize("bad", [-1.0, math.nan])
def test_bad_modulus(bad):
    with pytest.raises(DomainError):
        PowerLaw(1, 1).evaluate(bad)


def test_effective_g_needs_positive_k():
    with pytest.raises(DomainError):
        effective_g(Linear(1), 1.0, 0.0)


def test_sorting():
    p = validate_and_sort([DeltaCenter(2, 1), DeltaCenter(0, 1), DeltaCenter(1, 1)], 1.0)
    assert p.positions == (0, 1, 2)


@pytest.mark.parametrize("centers, k, amp, field", [
    ([DeltaCenter(0, 1)], 0.0, 1, "k"),
    ([DeltaCenter(1, 1), DeltaCenter(1, 2)], 1.0, 1, "centers"),
    ([], 1.0, 1, "centers"),
    ([DeltaCenter(0, 1)], 1.0, 0, "A"),
    ([DeltaCenter(math.inf, 1)], 1.0, 1, "centers[0].c"),
    ([DeltaCenter(0, complex(1, math.nan))], 1.0, 1, "centers[0].z"),
])
def test_validation_errors(centers, k, amp, field):
    with pytest.raises(ValidationError) as err:
        validate_and_sort(centers, k, amp)
    assert err.value.field == field


def test_bad_incidence():
    with pytest.raises(ValidationError):
        validate_and_sort([DeltaCenter(0, 1)], 1.0, 1, "up")


def test_mirror_round_trip():
    p = validate_and_sort([DeltaCenter(-1, 1j, 2), DeltaCenter(0.5, 2)], 1.3, 1, "right")
    m = p.mirrored()
    assert m.incidence is Incidence.LEFT
    assert m.positions == (-0.5, 1)
    assert m.mirrored() == p


def test_json_round_trip():
    data = {"centers": [{"c": 1, "z": [0, 1], "alpha": 2}, {"c": -1, "z": [2, 0]}],
            "k": 0.7, "A": [1, 0], "incidence": "right"}
    p = problem_from_dict(data)
    assert p.positions == (-1, 1)
    assert p.centers[1].coupling == 1j
    assert problem_from_dict(problem_to_dict(p)) == p


@pytest.mark.parametrize("data, field", [
    ({"centers": [{"c": 0, "z": "x"}], "k": 1}, "centers[0].z"),
    ({"centers": [{"z": [1, 0]}], "k": 1}, "centers[0].c"),
    ({"centers": [{"c": 0, "z": [1, 0]}]}, "k"),
    ({"centers": {}}, "centers"),
    ([], "<root>"),
])
def test_json_errors_name_the_field(data, field):
    with pytest.raises(ValidationError) as err:
        problem_from_dict(data)
    assert err.value.field == field


def test_bound_validation():
    p = bound_problem_from_dict({"centers": [{"c": 1, "omega": 2}, {"c": -1, "omega": 2}]})
    assert p.positions == (-1, 1) and p.is_symmetric_double()
    with pytest.raises(ValidationError):
        validate_bound([BoundCenter(0, -1)])
