import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate
from scipy.special import gammainc

from tfplunge import analytic as an
from tfplunge.analytic import AnnulusSpec, ErfcProfile, RadialSet, TwoErfcParams


def naive_disk(k, R):
    mu = math.pi * R * R
    return 1.0 - math.exp(-mu) * math.fsum(mu**j / math.factorial(j) for j in range(k + 1))


# -- erfc ------------------------------------------------------------------


def test_erfc_symmetry_point():
    assert an.erfc(0.0) == 1.0


def test_erfc_reflection():
    assert an.erfc(-1.3) == pytest.approx(2 - an.erfc(1.3), abs=1e-12)


@pytest.mark.parametrize("x", [0.25, 1.0, 2.5, 4.0])
def test_erfc_matches_quadrature(x):
    tail, _ = integrate.quad(lambda t: math.exp(-t * t), x, x + 40, epsabs=1e-15, epsrel=1e-13, limit=200)
    assert an.erfc(x) == pytest.approx(2 / math.sqrt(math.pi) * tail, abs=1e-12)


def test_erfc_inv_examples():
    assert an.erfc_inv(1.0) == 0.0
    assert an.erfc_inv(an.erfc(0.7)) == pytest.approx(0.7, abs=1e-10)
    quotient = math.sqrt(2 * math.pi) / (an.erfc_inv(0.2) - an.erfc_inv(1.8))
    assert quotient == pytest.approx(1.3831, abs=5e-5)


@pytest.mark.parametrize("y", [0.0, 2.0, -0.5, 3.0])
def test_erfc_inv_domain(y):
    with pytest.raises(ValueError):
        an.erfc_inv(y)


@given(st.floats(1e-12, 2 - 1e-12))
def test_erfc_inv_round_trip(y):
    assert an.erfc(an.erfc_inv(y)) == pytest.approx(y, abs=1e-10)


# -- disk eigenvalues --------------------------------------------------------


@pytest.mark.parametrize("R", [0.3, 1.0, 2.0, 7.5])
def test_disk_k0(R):
    assert an.disk_eigenvalue(0, R) == pytest.approx(1 - math.exp(-math.pi * R * R), abs=1e-15)


def test_disk_k5_R1_naive():
    assert an.disk_eigenvalue(5, 1.0) == pytest.approx(naive_disk(5, 1.0), abs=1e-14)


def test_disk_at_mean_near_half():
    R = 15.0
    k = math.floor(math.pi * R * R)
    assert abs(an.disk_eigenvalue(k, R) - 0.5) < 0.03


def test_vector_and_scalar_agree():
    lam = an.disk_eigenvalues(6.0, 400)
    scalar = [an.disk_eigenvalue(k, 6.0) for k in range(0, 401, 7)]
    np.testing.assert_allclose(lam[::7], scalar, atol=1e-15)


def test_disk_large_mean_does_not_overflow():
    R = math.sqrt(1e6 / math.pi)
    val = an.disk_eigenvalue(10**6, R)
    assert 0.49 < val < 0.5
    assert an.disk_eigenvalue(10**6, R) == pytest.approx(gammainc(1e6 + 1, 1e6), abs=1e-12)


def test_disk_monotone_grid():
    Rs = np.linspace(0.5, 30, 40)
    table = np.array([an.disk_eigenvalues(R, 2000) for R in Rs])
    assert np.all(np.diff(table, axis=1) <= 1e-15)  # non-increasing in k
    assert np.all(np.diff(table, axis=0) >= -1e-15)  # non-decreasing in R


def test_disk_matches_incomplete_gamma():
    k = np.arange(2001)
    for R in [0.2, 1, 3, 8, 15, 22, 30]:
        ref = gammainc(k + 1, math.pi * R * R)
        np.testing.assert_allclose(an.disk_eigenvalues(R, 2000), ref, rtol=0, atol=1e-12)


# -- profiles ----------------------------------------------------------------


def test_disk_profile_at_area():
    assert an.disk_profile(math.pi * 15**2, 15) == 0.5


def test_disk_profile_error_bounds():
    e15 = an.disk_profile_error(15)
    assert e15 < 1 / 15
    assert an.disk_profile_error(30) < e15
    assert e15 == pytest.approx(0.0100015, abs=1e-6)


def test_disk_error_decay():
    eps = {R: an.disk_profile_error(R) for R in (5, 10, 15, 20, 30, 40)}
    for R in (5, 10, 15):
        assert eps[2 * R] < eps[R]
    slope = np.polyfit(np.log([5, 10, 20, 40]), np.log([eps[R] for R in (5, 10, 20, 40)]), 1)[0]
    assert -1.5 <= slope <= -0.6


def test_erfc_profile_identities():
    p = ErfcProfile(123.0, 40.0)
    assert an.erfc_profile(p, 123.0) == 0.5
    k = np.linspace(0, 300, 301)
    vals = an.erfc_profile(p, k)
    assert np.all(np.diff(vals) <= 0)
    assert np.all(np.diff(vals[(vals > 1e-12) & (vals < 1 - 1e-12)]) < 0)
    R = 12.0
    np.testing.assert_allclose(an.DiskSpec(R).profile(k), an.disk_profile(k, R), atol=1e-15)


def test_annulus_profile_matches_closed_form():
    R, r = 15.0, 0.6
    k = np.arange(0, 900)
    direct = 0.5 * an.erfc((k - math.pi * R**2 * (1 - r**2)) / (math.sqrt(2 * math.pi) * R * (1 + r)))
    np.testing.assert_allclose(AnnulusSpec(R, r).profile(k), direct, atol=1e-14)


def test_counting_function():
    p = ErfcProfile(500.0, 80.0)
    assert an.counting_function(p, 0.5) == 500.0
    width = an.counting_function(p, 0.1) - an.counting_function(p, 0.9)
    assert width == pytest.approx(p.boundary / 1.3831, abs=1e-3 * p.boundary)
    for lam in (0.05, 0.5, 0.95):
        assert an.erfc_profile(p, an.counting_function(p, lam)) == pytest.approx(lam, abs=1e-9)
    with pytest.raises(ValueError):
        an.counting_function(p, 1.0)


# -- annuli and radial sets ----------------------------------------------------


def test_annulus_zero_ratio_is_disk():
    spec = AnnulusSpec(7.0, 0.0)
    for k in (0, 10, 150, 400):
        assert an.annulus_unordered(k, spec) == an.disk_eigenvalue(k, 7.0)


def test_annulus_vanishes_as_ratio_to_one():
    vals = [an.annulus_unordered(100, AnnulusSpec(10.0, r)) for r in (0.9, 0.99, 0.999, 0.9999)]
    assert vals == sorted(vals, reverse=True)
    assert vals[-1] < 1e-3


def test_annulus_values_in_unit_interval():
    mu = an.annulus_unordered(np.arange(2000), AnnulusSpec(15.0, 0.6))
    assert mu.min() >= 0 and mu.max() <= 1


def test_invalid_specs():
    with pytest.raises(ValueError):
        AnnulusSpec(5.0, 1.0)
    with pytest.raises(ValueError):
        RadialSet([(1, 3), (2, 4)])
    with pytest.raises(ValueError):
        TwoErfcParams(1.0, 2.0, 3.0, 1.0)
    with pytest.raises(ValueError):
        ErfcProfile(1.0, 0.0)


def test_annulus_sorted_matches_two_erfc_samples():
    # Sorted exact eigenvalues vs sorted samples of the limiting two-erfc function.
    R, r = 15.0, 0.6
    spec = AnnulusSpec(R, r)
    k = np.arange(an.radial_scan_length(RadialSet([(spec.inner, R)])))
    exact = an.decreasing_rearrangement(an.annulus_unordered(k, spec))
    limit = an.decreasing_rearrangement(0.5 * TwoErfcParams.from_annulus(spec).f(k))
    assert np.max(np.abs(exact - limit)) < 1 / R


def test_radial_single_and_pair():
    k = np.arange(3000)
    spec = AnnulusSpec(15.0, 0.6)
    np.testing.assert_array_equal(
        an.radial_unordered(k, RadialSet([(spec.inner, spec.radius)])), an.annulus_unordered(k, spec)
    )
    first, second = AnnulusSpec(10.0, 0.5), AnnulusSpec(30.0, 0.8)
    both = RadialSet([(5.0, 10.0), (24.0, 30.0)])
    np.testing.assert_allclose(
        an.radial_unordered(k, both),
        an.annulus_unordered(k, first) + an.annulus_unordered(k, second),
        atol=1e-15,
    )
    assert an.radial_unordered(40, both) == pytest.approx(
        an.annulus_unordered(40, first) + an.annulus_unordered(40, second), abs=1e-15
    )


def test_radial_error_decreases_under_dilation():
    base = RadialSet([(0.0, 0.3), (0.5, 0.8), (1.0, 1.4)])
    errs = []
    for R in (10, 20, 40):
        radial = base.scaled(R)
        k = np.arange(an.radial_scan_length(radial))
        errs.append(an.sorted_profile_error(an.radial_unordered(k, radial), radial.profile))
    assert errs[0] > errs[1] > errs[2]


@pytest.mark.parametrize("R", [10, 20, 40])
def test_annulus_sorted_vs_profile(R):
    spec = AnnulusSpec(R, 0.6)
    k = np.arange(an.radial_scan_length(RadialSet([(spec.inner, R)])))
    assert an.sorted_profile_error(an.annulus_unordered(k, spec), spec.profile) < 5 / R


# -- rearrangements ------------------------------------------------------------


def test_rearrangement_examples():
    np.testing.assert_array_equal(an.decreasing_rearrangement([0.1, 0.9, 0.5]), [0.9, 0.5, 0.1])
    s = np.array([5.0, 3.0, 3.0, -1.0])
    np.testing.assert_array_equal(an.decreasing_rearrangement(s), s)
    with pytest.raises(ValueError):
        an.decreasing_rearrangement([1.0, np.nan])


@settings(max_examples=200)
@given(
    st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=60).flatmap(
        lambda u: st.tuples(st.just(u), st.lists(st.floats(-1e6, 1e6), min_size=len(u), max_size=len(u)))
    )
)
def test_rearrangement_contraction(pair):
    u, v = map(np.array, pair)
    lhs = np.max(np.abs(an.decreasing_rearrangement(u) - an.decreasing_rearrangement(v)))
    assert lhs <= np.max(np.abs(u - v))


@given(st.lists(st.floats(-10, 10), max_size=40))
def test_rearrangement_is_sorted_permutation(xs):
    out = an.decreasing_rearrangement(xs)
    assert np.all(np.diff(out) <= 0)
    assert sorted(out.tolist()) == sorted(xs)


# -- two-erfc rearrangement ------------------------------------------------------


@pytest.fixture
def annulus_params():
    return TwoErfcParams.from_annulus(AnnulusSpec(15.0, 0.6))


def test_annulus_parameters(annulus_params):
    p = annulus_params
    assert p.a == pytest.approx(225 * math.pi)
    assert p.b == pytest.approx(81 * math.pi)
    assert p.A == pytest.approx(math.sqrt(2 * math.pi) * 15)
    assert p.B == pytest.approx(math.sqrt(2 * math.pi) * 9)


def test_two_erfc_at_gap(annulus_params):
    p = annulus_params
    assert an.two_erfc_rearranged(p, p.a - p.b) == pytest.approx(1 - an.erfc((p.a - p.b) / p.B), abs=1e-15)


def test_two_erfc_second_term_bound(annulus_params):
    p = annulus_params
    second = an.erfc((p.A * (-(p.a - p.b)) / (p.A + p.B) + (p.a - p.b)) / p.B)
    assert second == pytest.approx(an.erfc((p.a - p.b) / (p.A + p.B)), rel=1e-12)
    assert second <= p.bound


def test_two_erfc_monotone_and_close_to_single(annulus_params):
    p = annulus_params
    x = np.linspace(0, 2000, 20001)
    val = an.two_erfc_rearranged(p, x)
    assert np.all(np.diff(val) <= 1e-15)
    single = an.erfc((x - (p.a - p.b)) / (p.A + p.B))
    assert np.max(np.abs(val - single)) <= p.bound
    assert val.min() >= 0 and val.max() <= p.f(np.linspace(0, 2000, 200001)).max() + 1e-12


def test_two_erfc_matches_dense_sort(annulus_params):
    p = annulus_params
    hi = p.a + 10 * p.A
    n = 10**6
    h = hi / n
    samples = p.f((np.arange(n) + 0.5) * h)
    ordered = an.decreasing_rearrangement(samples)
    x = (np.arange(n) + 0.5) * h
    exact = an.two_erfc_rearranged(p, x)
    resolution = h * 2 / (math.sqrt(math.pi) * p.B)
    assert np.max(np.abs(ordered - exact)) <= p.bound + resolution
    assert np.max(np.abs(ordered - exact)) <= 2 * p.bound
