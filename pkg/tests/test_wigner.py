import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from fockcap.bunching import merge_convolution
from fockcap.stats import PhotonNumberDistribution, apply_loss, fock, normalize, origin_negativity
from fockcap.wigner import (
    capability_test,
    fit_attenuated_fock,
    ideal_region_count,
    negative_regions,
    radial_wigner,
    wigner_cut,
)

SET7 = normalize([0.07, 0.91, 0.02])


@st.composite
def distributions(draw, max_cutoff=12):
    n = draw(st.integers(1, max_cutoff + 1))
    w = draw(st.lists(st.floats(0.0, 1.0), min_size=n, max_size=n))
    if sum(w) <= 1e-6:
        w[0] = 1.0
    return normalize(w)


def two_copies(p):
    return merge_convolution([PhotonNumberDistribution([1 - p, p])] * 2).output


def test_radial_examples():
    vac = radial_wigner([1.0])
    np.testing.assert_allclose(vac.coeffs, [1.0])
    one = radial_wigner(fock(1))
    np.testing.assert_allclose(one.coeffs, [-1.0, 1.0])
    assert one(1.0) == pytest.approx(0.0, abs=1e-15)
    w7 = radial_wigner(SET7)
    assert w7.origin == pytest.approx(-0.82, abs=1e-12)
    # -L_1 = u - 1, L_2 = 1 - 2u + u^2/2
    np.testing.assert_allclose(w7.coeffs, [0.07 - 0.91 + 0.02, 0.91 - 0.04, 0.01], atol=1e-14)


def test_laguerre_values_match_scipy():
    rng = np.random.default_rng(0)
    p = normalize(rng.random(25))
    w = radial_wigner(p)
    u = np.linspace(0, 60, 301)
    direct = sum(p.probs[m] * (-1) ** m * special.eval_laguerre(m, u) for m in range(25))
    np.testing.assert_allclose(w(u), direct, rtol=1e-9, atol=1e-9)


def test_wigner_matches_fock_formula():
    # 2 pi W_M(r) = (-1)^M exp(-r^2/2) L_M(r^2) in the vacuum-variance-1 convention
    r = np.linspace(0, 5, 11)
    np.testing.assert_allclose(wigner_cut(fock(3), r), -np.exp(-r**2 / 2) * special.eval_laguerre(3, r**2),
                               atol=1e-14)


@pytest.mark.parametrize("d", [fock(0), fock(1), fock(7), SET7, normalize([0.2, 0.5, 0.1, 0.2])])
def test_normalization_by_quadrature(d):
    w = radial_wigner(d)
    val, _ = integrate.quad(lambda u: math.exp(-u / 2) * w(u), 0, np.inf, epsabs=1e-13, limit=200)
    assert val == pytest.approx(2.0, abs=1e-9)
    assert w.normalization() == pytest.approx(1.0, abs=1e-12)


def test_fock2_region():
    s = negative_regions(radial_wigner(fock(2)))
    assert s.region_count == 1
    assert not s.origin_negative
    np.testing.assert_allclose(s.root_radii, [2 - math.sqrt(2), 2 + math.sqrt(2)], atol=1e-9)


def test_fock3_regions():
    s = negative_regions(radial_wigner(fock(3)))
    assert (s.region_count, s.origin_negative, s.annulus_count) == (2, True, 1)
    np.testing.assert_allclose(s.root_radii, special.roots_laguerre(3)[0], atol=1e-9)


def test_grazing_boundary_case():
    out = two_copies(2 / 3)
    w = radial_wigner(out)
    np.testing.assert_allclose(w.coeffs, [0.2, -0.4, 0.2], atol=1e-10)  # (u - 1)^2 / 5
    s = negative_regions(w)
    assert s.region_count == 0
    assert not capability_test(out, 2)


def test_point_three_point_seven_passes():
    out = two_copies(0.7)
    np.testing.assert_allclose(out.probs, np.array([0.09, 0.21, 0.245]) / 0.545, rtol=1e-12)
    s = negative_regions(radial_wigner(out))
    assert s.region_count == 1 and len(s.root_radii) == 2
    w = radial_wigner(out)
    assert w(np.mean(s.root_radii)) < 0
    assert capability_test(out, 2)


@pytest.mark.parametrize(
    "n, regions, origin, annuli",
    [(1, 1, True, 0), (2, 1, False, 1), (14, 7, False, 7)],
)
def test_ideal_region_count_examples(n, regions, origin, annuli):
    s = ideal_region_count(n)
    assert (s.region_count, s.origin_negative, s.annulus_count) == (regions, origin, annuli)


@pytest.mark.parametrize("n", range(0, 61))
def test_ideal_fock_states_match(n):
    s = negative_regions(radial_wigner(fock(n)))
    assert s.matches(ideal_region_count(n))
    assert capability_test(fock(n), n)


def test_fifty_copy_sign_structure_in_high_precision():
    out = merge_convolution([SET7] * 50).output
    s = negative_regions(radial_wigner(out))
    assert s.matches(ideal_region_count(50))
    mpmath.mp.dps = 40
    probs = [mpmath.mpf(float(x)) for x in out.probs]

    def f(u):
        u = mpmath.mpf(u)
        return sum(p * (-1) ** m * mpmath.laguerre(m, 0, u) for m, p in enumerate(probs) if p)

    edges = [0.0] + list(s.root_radii) + [s.root_radii[-1] + 50]
    signs = [mpmath.sign(f(0.5 * (a + b))) for a, b in zip(edges[:-1], edges[1:])]
    # strictly alternating, starting positive (even n), ending positive
    assert signs == [1 if k % 2 == 0 else -1 for k in range(len(signs))]
    assert sum(1 for x in signs if x < 0) == 25


def test_capability_examples():
    assert capability_test(fock(6), 6)
    assert not capability_test(two_copies(1 / 3 * 2), 2)
    assert capability_test(two_copies(0.7), 2)


@settings(max_examples=100, deadline=None)
@given(distributions())
def test_origin_matches_stats(d):
    assert radial_wigner(d).origin == origin_negativity(d)


@settings(max_examples=100, deadline=None)
@given(distributions())
def test_normalization_identity(d):
    assert radial_wigner(d).normalization() == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(distributions())
def test_root_count_bounded_by_degree(d):
    w = radial_wigner(d)
    assert len(negative_regions(w).root_radii) <= w.degree


@settings(max_examples=60, deadline=None)
@given(distributions(max_cutoff=6), st.integers(1, 6), st.integers(1, 8))
def test_trailing_zeros_do_not_change_test(d, n, pad):
    padded = PhotonNumberDistribution(np.concatenate([d.probs, np.zeros(pad)]))
    assert capability_test(padded, n) == capability_test(d, n)


def test_fit_self_consistency():
    eta, res = fit_attenuated_fock(apply_loss(fock(14), 0.9205), 14)
    assert eta == pytest.approx(0.9205, abs=1e-4)
    assert res < 1e-12
    eta, res = fit_attenuated_fock(fock(5), 5)
    assert eta == pytest.approx(1.0, abs=1e-6)


def test_fit_merged_set7():
    out = merge_convolution([SET7] * 14).output
    eta, _ = fit_attenuated_fock(out, 14)
    assert 0.89 <= eta <= 0.95
