import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import lambertw

from nldelta.errors import BracketError, ScanError
from nldelta.numerics import (RootScanConfig, find_all_positive_roots, lambert_w,
                              real_cubic_roots, refine_root, scan_roots,
                              scan_roots_extending, solve_modulus_cubic)

# frozen by plain bisection on y^3 + y - 1 = 0
KERR_Y = 0.6823278038280194
# frozen by a brute-force sign scan of y (1 - 0.14 y)^2 = 1 on (0, 10]
THREE_ROOTS = (1.3275589796495866, 1.7489052201033306, 3.0764641997529165)


@pytest.mark.parametrize("h, expected", [
    (lambda r: r - 1, [1.0]),
    (lambda r: (r - 1) * (r - 2) * (r - 3), [1.0, 2.0, 3.0]),
    (lambda r: r * r + 1, []),
])
def test_find_all_positive_roots(h, expected):
    roots = find_all_positive_roots(h, RootScanConfig(0.01, 10))
    assert roots == pytest.approx(expected, abs=1e-12)


def test_nan_points_are_skipped():
    h = lambda r: math.nan if 1.4 < r < 1.6 else r - 2
    assert find_all_positive_roots(h, RootScanConfig(0.01, 10)) == pytest.approx([2.0])


def test_all_nan_raises():
    with pytest.raises(ScanError):
        scan_roots(lambda r: math.nan, RootScanConfig(0.1, 1))


def test_pole_is_not_a_root():
    roots = find_all_positive_roots(lambda r: 1 / (r - math.pi), RootScanConfig(0.01, 10))
    assert roots == []


def test_vectorised_matches_scalar():
    h = lambda r: np.sin(3 * r) - 0.2
    a = find_all_positive_roots(h, RootScanConfig(0.01, 10), vectorized=True)
    b = find_all_positive_roots(lambda r: math.sin(3 * r) - 0.2, RootScanConfig(0.01, 10))
    assert a == pytest.approx(b, abs=1e-12) and len(a) == 10


def test_extension_finds_root_beyond_r_max():
    roots, used = scan_roots_extending(lambda r: r - 15, RootScanConfig(0.1, 10))
    assert [r.value for r in roots] == pytest.approx([15.0])
    assert used.r_max == 20


@pytest.mark.parametrize("h, bracket, expected", [
    (lambda r: r - 2, (1, 3), 2.0),
    (math.cos, (1, 2), math.pi / 2),
    (lambda r: r ** 3 - 2, (1, 2), 2 ** (1 / 3)),
])
def test_refine_root(h, bracket, expected):
    assert refine_root(h, bracket, 1e-14) == pytest.approx(expected, abs=1e-13)


def test_refine_root_needs_sign_change():
    with pytest.raises(BracketError):
        refine_root(lambda r: r * r + 1, (0, 1))


def test_config_invariants():
    with pytest.raises(ValueError):
        RootScanConfig(1, 0.5)
    with pytest.raises(ValueError):
        RootScanConfig(0.1, 1, n_scan=1)


def test_modulus_cubic_linear_limit():
    assert solve_modulus_cubic(0, 1) == [1.0]


def test_modulus_cubic_kerr():
    assert solve_modulus_cubic(1, 1) == pytest.approx([math.sqrt(KERR_Y)], abs=1e-14)


def test_modulus_cubic_three_roots():
    # three positive roots need Im(z_hat) > 0 and |z_hat| < 4 / (27 |A|^2)
    assert solve_modulus_cubic(0.14j, 1) == pytest.approx(THREE_ROOTS, rel=1e-13)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(0.1, 3))
@settings(max_examples=200, deadline=None)
def test_cubic_roots_are_roots(b, c, d, a):
    for y in real_cubic_roots(a, b, c, d):
        scale = max(abs(a), abs(b), abs(c), abs(d)) * max(1.0, abs(y)) ** 3
        assert abs(((a * y + b) * y + c) * y + d) <= 1e-12 * scale


@pytest.mark.parametrize("branch, y, expected", [
    (0, 0.0, 0.0), (0, math.e, 1.0), (0, -1 / math.e, -1.0), (-1, -1 / math.e, -1.0),
])
def test_lambert_special_values(branch, y, expected):
    assert lambert_w(branch, y) == pytest.approx(expected, abs=1e-12)


@given(st.floats(-1 / math.e, 1e6))
@settings(max_examples=300, deadline=None)
def test_lambert_principal_round_trip(y):
    w = lambert_w(0, y)
    assert w >= -1
    assert abs(w * math.exp(w) - y) <= 1e-13 * max(1.0, abs(y))


@given(st.floats(-1 / math.e, -1e-200))
@settings(max_examples=300, deadline=None)
def test_lambert_lower_round_trip(y):
    w = lambert_w(-1, y)
    assert w <= -1
    assert abs(w * math.exp(w) - y) <= 1e-12 * abs(y)


@pytest.mark.parametrize("branch, ys", [
    (0, np.concatenate([np.linspace(-0.35, 10, 60), np.geomspace(10, 1e200, 20)])),
    (-1, np.linspace(-0.35, -1e-6, 60)),
])
def test_lambert_matches_scipy_away_from_branch_point(branch, ys):
    for y in ys:
        assert lambert_w(branch, y) == pytest.approx(lambertw(y, branch).real, rel=1e-13, abs=1e-15)


@pytest.mark.parametrize("branch", [0, -1])
def test_lambert_residual_at_branch_point(branch):
    for gap in np.geomspace(1e-15, 1e-3, 40):
        y = -math.exp(-1) + gap
        w = lambert_w(branch, y)
        assert abs(w * math.exp(w) - y) <= 4e-16 * abs(y)


def test_lambert_domain():
    with pytest.raises(ValueError):
        lambert_w(0, -1)
    with pytest.raises(ValueError):
        lambert_w(-1, 0.5)
