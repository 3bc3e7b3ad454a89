"""Log-domain Vandermonde determinants against brute-force oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pluripot import vdm
from pluripot.basis import dimension_counts
from pluripot.domains import AdmissibleWeight
from pluripot.errors import InvalidInputError


def _pairwise_logdet(z: np.ndarray) -> float:
    """d=1 oracle: |VDM| = prod_{i<j} |z_j - z_i|."""
    total = 0.0
    for i in range(len(z)):
        for j in range(i + 1, len(z)):
            total += math.log(abs(z[j] - z[i]))
    return total


def test_monomial_values_shape_and_content():
    pts = np.array([[2.0 + 0j, 3.0 + 0j], [1.0 + 1j, 0.0 + 0j]])
    mat = vdm.monomial_values([(0, 0), (1, 0), (0, 1), (1, 1)], pts)
    assert mat.shape == (4, 2)
    assert np.allclose(mat[:, 0], [1.0, 2.0, 3.0, 6.0])
    assert np.allclose(mat[:, 1], [1.0, 1.0 + 1j, 0.0, 0.0])


def test_vdm_matches_pairwise_product_d1():
    rng = np.random.default_rng(7)
    for n in (2, 4, 7):
        z = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
        ld = vdm.log_abs_vdm(z, n)
        assert not ld.is_zero
        assert math.isclose(ld.log_abs, _pairwise_logdet(z), rel_tol=1e-10)


def test_vdm_large_degree_no_overflow():
    # 31 points on circle(2): |VDM| = 31^{31/2} * 2^{C(31,2)} ~ 10^163
    z = 2.0 * np.exp(2j * np.pi * np.arange(31) / 31)
    ld = vdm.log_abs_vdm(z, 30)
    oracle = 15.5 * math.log(31.0) + math.comb(31, 2) * math.log(2.0)
    assert math.isclose(ld.log_abs, oracle, rel_tol=1e-9)
    assert math.isclose(ld.log_abs, _pairwise_logdet(z), rel_tol=1e-9)


def test_vdm_zero_on_coincident_points():
    z = np.array([1.0, 2.0, 1.0 + 1e-16j])
    ld = vdm.log_abs_vdm(z, 2)
    assert ld.is_zero and ld.value == -math.inf


def test_vdm_point_count_checked():
    with pytest.raises(InvalidInputError):
        vdm.log_abs_vdm(np.array([1.0, 2.0]), 2)


def test_weighted_vdm_formula():
    rng = np.random.default_rng(3)
    z = rng.normal(size=4) + 1j * rng.normal(size=4)
    n = 3
    w = AdmissibleWeight.quadratic()
    ld = vdm.log_abs_weighted_vdm(z, n, w)
    expected = _pairwise_logdet(z) - n * float(np.sum(np.abs(z) ** 2))
    assert math.isclose(ld.log_abs, expected, rel_tol=1e-10)


def test_weighted_vdm_zero_weight_point():
    w = AdmissibleWeight.custom(
        lambda p: np.where(p[:, 0].real > 1.5, np.inf, 0.0)
    )
    ld = vdm.log_abs_weighted_vdm(np.array([0.0, 1.0, 2.0]), 2, w)
    assert ld.is_zero


def test_diameter_exponent_and_nth_order_diameter():
    assert vdm.diameter_exponent(2, 1) == pytest.approx(2.0 / (2 * 3))
    # three cube roots of unity: |VDM| = 3^{3/2}, delta = 3^{1/2}
    z = np.exp(2j * np.pi * np.arange(3) / 3)
    delta = vdm.nth_order_diameter(z, 2, AdmissibleWeight.zero())
    assert delta == pytest.approx(math.sqrt(3.0), rel=1e-12)


def test_homogeneous_basis_block():
    hb = vdm.homogeneous_basis(2, 2)
    assert hb.indices == ((2, 0), (1, 1), (0, 2))
    assert len(hb.indices) == dimension_counts(2, 2)[1]


def test_homogeneous_vdm_d2_oracle():
    # degree-1 block in d=2 is (z1, z2): det [[z1, w1], [z2, w2]]
    pts = np.array([[1.0 + 0j, 2.0 + 0j], [3.0 + 0j, 5.0 + 0j]])
    ld = vdm.log_abs_homogeneous_vdm(pts, 1)
    assert math.isclose(
        ld.log_abs, math.log(abs(1 * 5 - 2 * 3)), abs_tol=1e-12
    )


def test_homogeneous_vdm_point_count_checked():
    with pytest.raises(InvalidInputError):
        vdm.log_abs_homogeneous_vdm(np.array([[1.0 + 0j, 2.0 + 0j]]), 2)


@given(st.integers(2, 6), st.integers(0, 1000))
@settings(max_examples=40, deadline=None)
def test_vdm_permutation_invariant(n, seed):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    perm = rng.permutation(n + 1)
    a = vdm.log_abs_vdm(z, n)
    b = vdm.log_abs_vdm(z[perm], n)
    assert math.isclose(a.log_abs, b.log_abs, rel_tol=1e-9, abs_tol=1e-9)


@given(st.integers(2, 5), st.integers(0, 1000))
@settings(max_examples=40, deadline=None)
def test_weighted_vdm_never_above_unweighted_for_positive_q(n, seed):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    plain = vdm.log_abs_vdm(z, n)
    weighted = vdm.log_abs_weighted_vdm(z, n, AdmissibleWeight.quadratic())
    assert weighted.log_abs <= plain.log_abs + 1e-12
