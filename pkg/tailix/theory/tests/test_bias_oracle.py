import numpy as np
import pandas as pd
import pytest
from scipy import integrate
from tailix.theory import QuadratureSpec, exact_mean_dpr, bias_curve, dpr_chi, SecondOrderParams
from tailix.distributions import make_hall, make_pareto
from tailix.estimators import dpr
from tailix.utils._random import mix_seed
from tailix._errors import InvalidParametersError, QuadratureError


def _x_space_mean(distribution, m):
    # E[M^(2) / M^(1)] from the joint density m (m-1) F^(m-2)(y) f(y) f(x) of the two largest values, y < x
    def integrand(y, x):
        cdf_y = distribution.cdf(y)
        return y / x * cdf_y ** (m - 2) * distribution.density(y) * distribution.density(x)

    x0 = distribution.x0
    value, _ = integrate.dblquad(integrand, x0, np.inf, lambda x: x0, lambda x: x, epsabs=1e-13, epsrel=1e-11)
    return m * (m - 1) * value


"""
Tests regarding the QuadratureSpec object
"""


def test_quadrature_spec():
    quadrature = QuadratureSpec()
    assert quadrature.rel_tol == 1e-10
    assert quadrature.abs_tol == 1e-14
    assert quadrature.max_subdivisions == 100000
    assert "rel_tol=1e-10" in repr(quadrature)
    with pytest.raises(InvalidParametersError):
        QuadratureSpec(rel_tol=0)
    with pytest.raises(InvalidParametersError):
        QuadratureSpec(abs_tol=-1e-10)
    with pytest.raises(InvalidParametersError):
        QuadratureSpec(max_subdivisions=0)
    with pytest.raises(InvalidParametersError):
        QuadratureSpec(max_subdivisions=2.5)


"""
Tests regarding exact_mean_dpr
"""


def test_exact_mean_dpr_pareto():
    for alpha in [0.5, 1, 2]:
        for m in [2, 10, 100]:
            mean = exact_mean_dpr(make_pareto(1, alpha), m)
            assert abs(mean - alpha / (alpha + 1)) <= 1e-9
    mean, error = exact_mean_dpr(make_pareto(3, 1.5), 7, return_error=True)
    assert abs(mean - 0.6) <= 1e-9
    assert error >= 0


def test_exact_mean_dpr_against_x_space():
    distribution = make_hall(1, 1, 1, 2)
    x0 = distribution.x0
    # For m = 2 the inner integral int_{x0}^{x} y f(y) dy = log(x / x0) + 2 (1 / x0 - 1 / x) is explicit
    direct, _ = integrate.quad(
        lambda x: 2 * (x ** -3 + 2 * x ** -4) * (np.log(x / x0) + 2 / x0 - 2 / x), x0, np.inf, epsabs=1e-14,
        epsrel=1e-12)
    assert np.isclose(exact_mean_dpr(distribution, 2), direct, rtol=1e-9)
    assert np.isclose(exact_mean_dpr(distribution, 2), _x_space_mean(distribution, 2), rtol=1e-7)
    assert np.isclose(exact_mean_dpr(distribution, 5), _x_space_mean(distribution, 5), rtol=1e-7)


def test_exact_mean_dpr_normalized_bias():
    distribution = make_hall(1, 1, 1, 2)
    chi = dpr_chi(SecondOrderParams.from_distribution(distribution))
    assert np.isclose(chi, 1 / 3)
    deviations = []
    for m in [100, 1000, 10000]:
        # zeta = 1
        normalized = m * (exact_mean_dpr(distribution, m) - 0.5)
        deviations.append(abs(normalized - chi) / chi)
    assert deviations[0] > deviations[1] > deviations[2]
    assert deviations[2] <= 0.1


def test_exact_mean_dpr_sign():
    distribution = make_hall(1, -0.2, 1, 2)
    chi = dpr_chi(SecondOrderParams.from_distribution(distribution))
    assert chi < 0
    bias = exact_mean_dpr(distribution, 1000) - 0.5
    assert bias < 0
    assert np.isclose(1000 * bias, chi, rtol=0.05)
    assert exact_mean_dpr(make_hall(1, 1, 1, 2), 1000) - 0.5 > 0


def test_exact_mean_dpr_scale_invariance():
    distribution = make_hall(1, 1, 1, 2)
    for factor in [0.5, 3, 10]:
        for m in [2, 50]:
            assert np.isclose(exact_mean_dpr(distribution.scaled(factor), m), exact_mean_dpr(distribution, m),
                              rtol=1e-9)


def test_exact_mean_dpr_tolerance():
    distribution = make_hall(2, 0.5, 1.5, 2.2)
    mean_coarse, error_coarse = exact_mean_dpr(distribution, 20, QuadratureSpec(rel_tol=1e-8), return_error=True)
    mean_fine, error_fine = exact_mean_dpr(distribution, 20, QuadratureSpec(rel_tol=1e-10), return_error=True)
    assert abs(mean_coarse - mean_fine) <= error_coarse + error_fine + 1e-13


def test_exact_mean_dpr_errors():
    with pytest.raises(QuadratureError):
        exact_mean_dpr(make_hall(1, 1, 1, 2), 2, QuadratureSpec(rel_tol=1e-15, abs_tol=1e-300, max_subdivisions=1))
    with pytest.raises(InvalidParametersError):
        exact_mean_dpr(make_hall(1, 1, 1, 2), 1)
    with pytest.raises(InvalidParametersError):
        exact_mean_dpr(make_hall(1, 1, 1, 2), 2.5)


@pytest.mark.montecarlo
def test_exact_mean_dpr_monte_carlo():
    distribution = make_hall(1, 1, 1, 2)
    m = 10
    n_chunks, blocks_per_chunk = 10, 1000000
    kappa_sum, kappa_square_sum = 0., 0.
    for chunk in range(n_chunks):
        values = distribution.sample_values(mix_seed(2024, chunk), m * blocks_per_chunk)
        kappa = dpr(values, m).kappa
        kappa_sum += np.sum(kappa)
        kappa_square_sum += np.sum(kappa ** 2)
    n_blocks = n_chunks * blocks_per_chunk
    mean = kappa_sum / n_blocks
    standard_error = np.sqrt((kappa_square_sum / n_blocks - mean ** 2) / n_blocks)
    assert abs(mean - exact_mean_dpr(distribution, m)) <= 4 * standard_error


"""
Tests regarding bias_curve
"""


def test_bias_curve():
    distribution = make_hall(1, 1, 1, 2)
    curve = bias_curve(distribution, [2, 10, 100])
    assert isinstance(curve, pd.DataFrame)
    assert list(curve.columns) == ["m", "gamma_m", "normalized"]
    assert curve["m"].tolist() == [2, 10, 100]
    assert curve["gamma_m"].iloc[1] == exact_mean_dpr(distribution, 10) - 0.5
    assert np.allclose(curve["normalized"], curve["m"] * curve["gamma_m"])
    assert np.all(curve["gamma_m"] > 0)


def test_bias_curve_parallel():
    distribution = make_hall(1, -0.1, 0.7, 2.5)
    curve_serial = bias_curve(distribution, [5, 2, 40], n_jobs=1)
    curve_parallel = bias_curve(distribution, [5, 2, 40], n_jobs=2)
    assert curve_parallel["m"].tolist() == [5, 2, 40]
    assert np.array_equal(curve_serial["gamma_m"].to_numpy(), curve_parallel["gamma_m"].to_numpy())


def test_bias_curve_pareto():
    curve = bias_curve(make_pareto(1, 2), [2, 3])
    assert np.all(np.abs(curve["gamma_m"]) <= 1e-9)
    assert curve["normalized"].isna().all()
