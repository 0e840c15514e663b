import json

import numpy as np
import pytest

from torus_transport.errors import AliasingError, SignedMeasureError, ValidationError
from torus_transport.measures import (
    AtomicMeasure,
    Cdf,
    FourierSeries,
    TorusDensity,
    cdf,
    circle_distance,
    evaluate_series,
    fourier_of_atoms,
    fourier_of_density,
    quantile_atoms,
    synthesize_grid,
)
from torus_transport.sequences import quadratic_residue_measure


def random_hermitian(rng, K):
    pos = rng.normal(size=K) + 1j * rng.normal(size=K)
    return FourierSeries.from_positive(rng.normal(), pos)


# --- circle metric -----------------------------------------------------------


def test_circle_distance_values():
    assert circle_distance(0.1, 0.9) == pytest.approx(0.2)
    assert circle_distance(0.0, 0.5) == 0.5
    assert circle_distance(0.3, 0.3) == 0.0
    assert circle_distance(0.25, 1.25) == 0.0


# --- densities ---------------------------------------------------------------


def test_density_rejects_negative_unless_signed():
    with pytest.raises(SignedMeasureError):
        TorusDensity(np.array([1.0, -0.1, 1.0, 1.0]))
    d = TorusDensity(np.array([1.0, -0.1, 1.0, 1.0]), signed=True)
    assert d.signed


def test_density_minimum_grid():
    with pytest.raises(ValidationError):
        TorusDensity(np.ones(3))


def test_density_mean_with_endpoint_is_trapezoid():
    d = TorusDensity.from_function(lambda x: 2 * x, 8, periodic=False)
    assert d.mean == pytest.approx(1.0, abs=1e-15)
    assert np.sum(d.cell_masses()) == pytest.approx(1.0, abs=1e-15)


def test_density_json_roundtrip():
    d = TorusDensity.from_function(lambda x: 1 + np.sin(2 * np.pi * x), 16)
    back = TorusDensity.from_dict(json.loads(json.dumps(d.to_dict())))
    np.testing.assert_array_equal(back.samples, d.samples)


# --- fourier_of_density ------------------------------------------------------


def test_constant_density_coefficients():
    s = fourier_of_density(TorusDensity.uniform(64), 8)
    assert s[0] == 1.0
    assert np.max(np.abs(np.delete(s.coeffs, s.K))) < 1e-15


def test_one_plus_cos_coefficients():
    d = TorusDensity.from_function(lambda x: 1 + np.cos(2 * np.pi * x), 64)
    s = fourier_of_density(d, 4)
    assert s[0] == pytest.approx(1.0, abs=1e-14)
    assert s[1] == pytest.approx(0.5, abs=1e-14)
    assert s[-1] == pytest.approx(0.5, abs=1e-14)
    for k in (2, 3, 4):
        assert abs(s[k]) < 1e-14


def test_linear_density_matches_closed_form_integral():
    # int_0^1 2x e^{-2 pi i k x} dx = i / (pi k)
    d = TorusDensity.from_function(lambda x: 2 * x, 4096, periodic=False)
    s = fourier_of_density(d, 16)
    for k in range(1, 17):
        assert s[k] == pytest.approx(1j / (np.pi * k), abs=1e-4)
        assert abs(s[k]) == pytest.approx(1 / (np.pi * k), abs=1e-4)
    assert s[0] == pytest.approx(1.0, abs=1e-14)


def test_c0_equals_mean_exactly():
    rng = np.random.default_rng(0)
    d = TorusDensity(rng.random(100) + 0.1)
    assert abs(fourier_of_density(d, 10)[0] - d.mean) < 1e-14


def test_aliasing_guard():
    with pytest.raises(AliasingError):
        fourier_of_density(TorusDensity.uniform(16), 9)
    fourier_of_density(TorusDensity.uniform(16), 8)


# --- fourier_of_atoms --------------------------------------------------------


def test_point_mass_at_origin():
    s = fourier_of_atoms(AtomicMeasure([0.0], [1.0]), 5)
    np.testing.assert_allclose(s.coeffs, np.ones(11), atol=1e-15)


def test_two_antipodal_atoms():
    s = fourier_of_atoms(AtomicMeasure([0.0, 0.5], [0.5, 0.5]), 3)
    assert abs(s[1]) < 1e-15
    assert s[2] == pytest.approx(1.0, abs=1e-15)
    assert abs(s[3]) < 1e-15


def test_quadratic_residue_first_coefficient_p29():
    s = fourier_of_atoms(quadratic_residue_measure(29), 1)
    assert abs(s[1]) == pytest.approx(0.1856953, abs=1e-7)
    assert abs(s[1]) == pytest.approx(29 ** -0.5, abs=1e-14)


def test_lattice_fast_path_agrees_with_direct_sum():
    mu = quadratic_residue_measure(31)
    plain = AtomicMeasure(mu.locations, mu.weights)
    a = fourier_of_atoms(mu, 100).coeffs
    b = fourier_of_atoms(plain, 100).coeffs
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_atoms_direct_definition():
    rng = np.random.default_rng(3)
    x, w = rng.random(7), rng.random(7)
    s = fourier_of_atoms(AtomicMeasure(x, w), 6)
    for j in range(-6, 7):
        assert s[j] == pytest.approx(np.sum(w * np.exp(-2j * np.pi * j * x)), abs=1e-13)


# --- synthesize_grid ---------------------------------------------------------


def test_synthesize_constant():
    d = synthesize_grid(FourierSeries.constant(1.0), 64)
    np.testing.assert_allclose(d.samples, 1.0, atol=1e-15)


def test_synthesize_cosine():
    s = FourierSeries.from_positive(0.0, [0.5])
    d = synthesize_grid(s, 128)
    np.testing.assert_allclose(d.samples, np.cos(2 * np.pi * np.arange(128) / 128), atol=1e-12)


def test_roundtrip_random_hermitian():
    rng = np.random.default_rng(7)
    s = random_hermitian(rng, 8)
    back = fourier_of_density(synthesize_grid(s, 64), 8)
    np.testing.assert_allclose(back.coeffs, s.coeffs, atol=1e-10)


def test_synthesize_grid_too_small():
    with pytest.raises(AliasingError):
        synthesize_grid(FourierSeries.sine(8), 17)


def test_nyquist_roundtrip():
    rng = np.random.default_rng(1)
    d = TorusDensity(rng.random(16), signed=False)
    s = fourier_of_density(d, 8)
    # synthesis at the same size is not allowed, but at 2M the samples interleave
    up = synthesize_grid(s, 32).samples[::2]
    np.testing.assert_allclose(up, d.samples, atol=1e-12)


def test_evaluate_series_matches_grid():
    rng = np.random.default_rng(2)
    s = random_hermitian(rng, 5)
    grid = synthesize_grid(s, 32)
    np.testing.assert_allclose(evaluate_series(s, grid.grid), grid.samples, atol=1e-12)


# --- FourierSeries -----------------------------------------------------------


def test_hermitian_check():
    with pytest.raises(ValidationError):
        FourierSeries(np.array([1.0, 0.0, 2.0 + 0j]))
    FourierSeries(np.array([1.0, 0.0, 2.0 + 0j]), real=False)


def test_hermitian_symmetry_exact():
    rng = np.random.default_rng(5)
    s = random_hermitian(rng, 6)
    for k in range(1, 7):
        assert s[-k] == np.conj(s[k])


def test_series_json_roundtrip():
    s = random_hermitian(np.random.default_rng(0), 4)
    back = FourierSeries.from_dict(json.loads(json.dumps(s.to_dict())))
    np.testing.assert_array_equal(back.coeffs, s.coeffs)


# --- cdf ---------------------------------------------------------------------


def test_uniform_cdf_is_identity():
    F = cdf(TorusDensity.uniform(64))
    x = np.linspace(0, 1, 101)
    np.testing.assert_allclose(F(x), x, atol=1e-14)


def test_point_mass_cdf():
    F = cdf(AtomicMeasure([0.5], [1.0]))
    assert F(0.49) == 0.0
    assert F(0.5) == 1.0
    assert F.left(0.5) == 0.0
    assert F(0.99) == 1.0


def test_linear_density_cdf_is_square():
    F = cdf(TorusDensity.from_function(lambda x: 2 * x, 4096, periodic=False))
    x = np.linspace(0, 1, 1001)
    np.testing.assert_allclose(F(x), x ** 2, atol=1e-6)


def test_cdf_rejects_signed():
    with pytest.raises(SignedMeasureError):
        cdf(TorusDensity(np.array([1.0, -1.0, 1.0, -1.0]), signed=True))


def test_quantile_left_continuous():
    F = cdf(AtomicMeasure([0.2, 0.7], [0.5, 0.5]))
    assert F.quantile(0.5) == 0.2
    assert F.quantile(0.50001) == 0.7


def test_quantile_atoms_of_uniform():
    q = quantile_atoms(Cdf.uniform(), 4)
    np.testing.assert_allclose(q.locations, [0.125, 0.375, 0.625, 0.875])


def test_atoms_from_csv(tmp_path):
    path = tmp_path / "atoms.csv"
    path.write_text("location,weight\n0.25,0.5\n0.75,0.5\n")
    a = AtomicMeasure.from_csv(path)
    np.testing.assert_allclose(a.locations, [0.25, 0.75])
    out = tmp_path / "again.csv"
    a.to_csv(out)
    b = AtomicMeasure.from_csv(out)
    np.testing.assert_array_equal(a.weights, b.weights)


def test_atoms_merge_and_sort():
    a = AtomicMeasure([0.75, 0.25, 1.25], [1.0, 1.0, 1.0])
    np.testing.assert_allclose(a.locations, [0.25, 0.75])
    np.testing.assert_allclose(a.weights, [2.0, 1.0])
    assert a.total_mass == 3.0


def test_atoms_total_mass_check():
    with pytest.raises(ValidationError):
        AtomicMeasure([0.1], [1.0], total_mass=2.0)
