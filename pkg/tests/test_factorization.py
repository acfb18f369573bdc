"""Outer factor computation: boundary route, Herglotz route, root route."""

import math

import numpy as np
import pytest

from specfact import (
    DomainError,
    FourierSeries,
    GridFunction,
    ParameterError,
    SpectralFactor,
    factorize_boundary,
    factorize_herglotz,
    fejer_riesz,
    fourier_synthesize,
    grid_theta,
    outer_check,
)
from specfact.factorization import _angle_clusters


def _series_from_factor(a):
    """Autocorrelation: the series of |sum a_k e^{ik theta}|^2."""
    a = np.asarray(a, dtype=complex)
    deg = len(a) - 1
    coeffs = {}
    for k in range(-deg, deg + 1):
        lo = max(0, -k)
        hi = min(len(a), len(a) - k)
        coeffs[k] = sum(a[j + k] * np.conj(a[j]) for j in range(lo, hi))
    return FourierSeries(coeffs)


def _random_outer_factor(rng, degree):
    """Polynomial with all roots at radii in [1.1, 3], normalized a_0 > 0."""
    roots = (rng.uniform(1.1, 3.0, degree)
             * np.exp(1j * rng.uniform(-np.pi, np.pi, degree)))
    a = np.polynomial.polynomial.polyfromroots(roots)
    a = a * np.exp(-1j * np.angle(a[0])) * rng.uniform(0.5, 2.0)
    return a


def test_boundary_constant():
    f = GridFunction(64, np.full(64, 4.0))
    fac = factorize_boundary(f)
    assert fac.coeffs[0] == pytest.approx(2.0, abs=1e-13)
    assert np.max(np.abs(fac.coeffs[1:])) < 1e-13
    assert fac.neg_energy < 1e-30


def test_boundary_quarter_poly():
    f = GridFunction.from_callable(lambda t: 1.25 - np.cos(t), 512)
    fac = factorize_boundary(f)
    assert fac.coeffs[0] == pytest.approx(1.0, abs=1e-12)
    assert fac.coeffs[1] == pytest.approx(-0.5, abs=1e-12)
    assert np.max(np.abs(fac.coeffs[2:])) < 1e-12
    assert fac.value_at_zero.real > 0


def test_boundary_modulus_matches_density(rng):
    n = 1024
    th = grid_theta(n)
    f = GridFunction(n, np.exp(np.cos(th) - 0.4 * np.sin(3 * th)))
    fac = factorize_boundary(f)
    boundary = fac.boundary_values(n)
    assert np.max(np.abs(np.abs(boundary.values) ** 2 - f.values)) < 1e-10


def test_boundary_rejects_nonpositive_without_floor():
    vals = np.ones(64)
    vals[10] = 0.0
    with pytest.raises(DomainError):
        factorize_boundary(GridFunction(64, vals))
    fac = factorize_boundary(GridFunction(64, vals), floor=1e-8)
    assert fac.floor_applied == 1e-8


def test_boundary_scaling_equivariance(rng):
    n = 512
    f_vals = np.exp(rng.normal(size=1)[0] + np.cos(grid_theta(n)))
    f = GridFunction(n, f_vals)
    for c in (0.25, 7.0):
        fc = factorize_boundary(GridFunction(n, c * f_vals))
        base = factorize_boundary(f)
        assert np.max(np.abs(fc.coeffs - math.sqrt(c) * base.coeffs)) < 1e-10


def test_herglotz_values_quarter_poly():
    f = GridFunction.from_callable(lambda t: 1.25 - np.cos(t), 1024)
    assert factorize_herglotz(f, 0.0) == pytest.approx(1.0, abs=1e-10)
    assert factorize_herglotz(f, 0.5 + 0j) == pytest.approx(0.75, abs=1e-10)
    vals = factorize_herglotz(f, np.array([0.1j, -0.3]))
    assert vals[0] == pytest.approx(1 - 0.05j, abs=1e-10)
    assert vals[1] == pytest.approx(1.15, abs=1e-10)


def test_herglotz_radius_guard():
    f = GridFunction(64, np.ones(64))
    with pytest.raises(ParameterError):
        factorize_herglotz(f, 0.99)
    assert factorize_herglotz(f, 0.99, r_max=0.995) == pytest.approx(1.0)


def test_route_agreement(rng):
    """Boundary and Herglotz factors agree at interior points."""
    n = 2048
    th = grid_theta(n)
    pts = 0.9 * rng.uniform(0.0, 1.0, 20) * np.exp(1j * rng.uniform(-np.pi, np.pi, 20))
    for _ in range(10):
        w = np.zeros(n)
        for k in range(1, 13):
            w += rng.uniform(-1, 1) * np.cos(k * th) + rng.uniform(-1, 1) * np.sin(k * th)
        f = GridFunction(n, np.exp(w))
        fac = factorize_boundary(f)
        direct = factorize_herglotz(f, pts)
        series = np.array([fac(z) for z in pts])
        scale = np.max(np.abs(direct))
        assert np.max(np.abs(series - direct)) / scale < 1e-6


def test_fejer_riesz_frozen_examples():
    a = fejer_riesz(FourierSeries({-1: -0.5, 0: 1.25, 1: -0.5}))
    assert np.allclose(a, [1.0, -0.5], atol=1e-10)
    a = fejer_riesz(FourierSeries({0: 9.0}))
    assert np.allclose(a, [3.0], atol=1e-14)
    # boundary zero with the forced even multiplicity: 2 - 2 cos
    a = fejer_riesz(FourierSeries({-1: -1.0, 0: 2.0, 1: -1.0}))
    assert np.allclose(a, [1.0, -1.0], atol=1e-7)


def test_fejer_riesz_complex_factor():
    a_true = np.array([1.0, 0.5j])
    a = fejer_riesz(_series_from_factor(a_true))
    assert np.allclose(a, a_true, atol=1e-10)


def test_fejer_riesz_random_roundtrip(rng):
    for _ in range(10):
        degree = int(rng.integers(1, 17))
        a_true = _random_outer_factor(rng, degree)
        a = fejer_riesz(_series_from_factor(a_true))
        assert len(a) == len(a_true)
        rel = np.max(np.abs(a - a_true)) / np.max(np.abs(a_true))
        assert rel < 1e-8


def test_fejer_riesz_scaling(rng):
    a_true = _random_outer_factor(rng, 5)
    series = _series_from_factor(a_true)
    scaled = FourierSeries({k: 4.0 * c for k, c in series.coeffs.items()})
    a1 = fejer_riesz(series)
    a2 = fejer_riesz(scaled)
    assert np.allclose(a2, 2.0 * a1, atol=1e-9 * np.max(np.abs(a1)))


def test_fejer_riesz_validation():
    with pytest.raises(ParameterError):
        fejer_riesz(FourierSeries({0: 1.0, 1: 0.5}))  # not Hermitian
    with pytest.raises(DomainError):
        fejer_riesz(FourierSeries({-1: 0.5, 0: 0.25, 1: 0.5}))  # dips negative
    with pytest.raises(DomainError):
        fejer_riesz(FourierSeries({0: 0.0}))


def test_angle_clusters_grouping():
    # two pairs straddling the wrap at theta = pi plus an isolated root
    angles = np.array([np.pi - 2e-4, -np.pi + 2e-4, 0.5, 1.0, 1.0 + 5e-4])
    roots = np.exp(1j * angles)
    clusters = _angle_clusters(roots)
    sizes = sorted(len(c) for c in clusters)
    assert sizes == [1, 2, 2]


def test_outer_check_accepts_true_factor_and_rejects_imposters():
    f = GridFunction.from_callable(lambda t: 1.25 - np.cos(t), 512)
    good = factorize_boundary(f)
    assert outer_check(good, f).passed

    # same boundary modulus, a zero at the origin: z * (1 - z/2)
    shifted = SpectralFactor([0.0, 1.0, -0.5])
    rep = outer_check(shifted, f)
    assert not rep.passed

    # same boundary modulus, root reflected inside the disk: 0.5 - z
    reflected = SpectralFactor([0.5, -1.0])
    th = grid_theta(512)
    assert np.max(np.abs(np.abs(reflected.boundary_values(512).values) ** 2
                         - f.values)) < 1e-12
    assert not outer_check(reflected, f).passed


def test_three_routes_agree_on_polynomial_density(rng):
    a_true = _random_outer_factor(rng, 6)
    series = _series_from_factor(a_true)
    n = 1024
    f = fourier_synthesize(series, n)
    a_fr = fejer_riesz(series)
    fac_b = factorize_boundary(f)
    scale = np.max(np.abs(a_true))
    assert np.max(np.abs(a_fr - a_true)) / scale < 1e-8
    assert np.max(np.abs(fac_b.coeffs[:7] - a_true)) / scale < 1e-6
    assert np.max(np.abs(fac_b.coeffs[7:])) / scale < 1e-6
    z = 0.3 - 0.4j
    herg = factorize_herglotz(f, z)
    poly = sum(c * z ** k for k, c in enumerate(a_true))
    assert abs(herg - poly) / abs(poly) < 1e-6
