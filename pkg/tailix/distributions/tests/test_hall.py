import numpy as np
import pytest
from tailix.distributions import HallDistribution, make_hall, make_pareto
from tailix.estimators._base import Sample
from tailix._errors import InvalidParametersError, InfeasibleTailError, DomainError, NumericError

GOLDEN_RATIO = (1 + np.sqrt(5)) / 2


def _test_distributions():
    return [make_pareto(1, 1), make_pareto(3, 0.5), make_hall(1, 1, 1, 2), make_hall(1, 1, 1, 3),
            make_hall(2, 0.5, 1.5, 2.2), make_hall(1, -0.2, 1, 2), make_hall(1, -0.1, 0.7, 2.5)]


def test_make_hall_support_start():
    assert make_pareto(1, 1).x0 == 1
    assert make_hall(1, 0, 1, np.inf).x0 == 1
    assert np.isclose(make_pareto(4, 2).x0, 2)
    d = make_hall(1, 1, 1, 2)
    assert np.isclose(d.x0, GOLDEN_RATIO, rtol=1e-14)
    assert abs(d.survival(d.x0) - 1) <= 1e-12
    # Negative c2: x0 on the monotone branch
    d = make_hall(1, -0.1, 1, 2)
    assert np.isclose(d.x0, (1 + np.sqrt(0.6)) / 2, rtol=1e-13)
    assert d.x0 >= d.x_mono
    assert d.density(d.x0) > 0


def test_make_hall_generic_support_start():
    for d in _test_distributions():
        assert abs(d.survival(d.x0) - 1) <= 1e-12
        assert d.density(d.x0 * (1 + 1e-9)) > 0


def test_make_hall_invalid_parameters():
    with pytest.raises(InvalidParametersError):
        make_hall(0, 1, 1, 2)
    with pytest.raises(InvalidParametersError):
        make_hall(-1, 1, 1, 2)
    with pytest.raises(InvalidParametersError):
        make_hall(1, 1, 0, 2)
    with pytest.raises(InvalidParametersError):
        make_hall(1, 1, 2, 2)
    with pytest.raises(InvalidParametersError):
        make_hall(1, 1, 2, 1)
    with pytest.raises(InvalidParametersError):
        make_hall(1, 1, 1, np.inf)
    # Invalid parameters are ValueErrors
    with pytest.raises(ValueError):
        make_pareto(1, -1)


def test_make_hall_infeasible():
    # x_mono = 2 and S(2) = 0.25 < 1
    with pytest.raises(InfeasibleTailError):
        make_hall(1, -1, 1, 2)
    with pytest.raises(InfeasibleTailError):
        make_hall(1, -5, 1, 1.5)


def test_survival_cdf_density():
    d = make_pareto(1, 1)
    assert d.survival(2) == 0.5
    assert d.cdf(2) == 0.5
    assert d.density(2) == 0.25
    d = make_hall(1, 1, 1, 2)
    assert d.survival(2) == 0.75
    assert d.cdf(2) == 0.25
    assert np.isclose(d.density(2), 0.25 + 0.25)
    x = np.array([2., 4., 8.])
    assert np.allclose(d.survival(x), 1 / x + 1 / x ** 2)
    assert np.allclose(d.cdf(x) + d.survival(x), 1)
    assert isinstance(d.survival(2), float)
    assert d.survival(x).shape == (3,)


def test_survival_outside_support():
    d = make_hall(1, 1, 1, 2)
    with pytest.raises(DomainError):
        d.survival(1.5)
    with pytest.raises(DomainError):
        d.density(np.array([2, 1]))
    with pytest.raises(DomainError):
        d.cdf(np.nan)


def test_survival_monotone_and_density_consistent():
    for d in _test_distributions():
        x = d.x0 * np.logspace(0.01, 4, 200)
        s = d.survival(x)
        assert np.all(np.diff(s) < 0)
        # Central difference of -S against the density
        h = x * 1e-6
        numerical = -(d.survival(x + h) - d.survival(x - h)) / (2 * h)
        assert np.allclose(numerical, d.density(x), rtol=1e-6)


def test_quantile_closed_forms():
    d = make_pareto(1, 1)
    assert d.quantile(0.5) == 2
    assert d.quantile(1) == 1
    d = make_hall(1, 1, 1, 2)
    u = np.array([1e-8, 0.01, 0.5, 0.9, 1.])
    expected = (1 + np.sqrt(1 + 4 * u)) / (2 * u)
    assert np.allclose(d.quantile(u), expected, rtol=1e-13)
    assert np.isclose(d.quantile(1), GOLDEN_RATIO, rtol=1e-14)


def test_quantile_closed_forms_match_root_finder():
    u = np.array([1e-12, 1e-8, 1e-3, 0.3, 0.5, 0.999, 1.])
    for d in [make_pareto(1, 1), make_pareto(2, 3), make_hall(1, 1, 1, 2), make_hall(1, -0.2, 1, 2),
              make_hall(2, 3, 0.5, 1)]:
        assert np.allclose(d.quantile(u, method="auto"), d.quantile(u, method="root"), rtol=1e-12)


def test_quantile_root_finder_relative_accuracy():
    # Deep in the tail the polished root has to meet the relative tolerance in x, not only in S(x)
    d = make_hall(2, 3, 0.5, 1)
    u = np.array([1e-14, 1e-12, 1e-10])
    closed_form = d.quantile(u)
    root = d.quantile(u, method="root")
    assert np.all(np.abs(root - closed_form) <= 1e-13 * closed_form)
    d = make_hall(1, 1, 1, 3)
    u = np.array([1e-12, 1e-6])
    x = d.quantile(u)
    assert np.allclose(d.survival(x), u, rtol=1e-14, atol=0)


def test_quantile_not_representable():
    d = make_pareto(1, 0.01)
    assert np.isclose(d.quantile(0.5), 2. ** 100)
    with pytest.raises(NumericError):
        d.quantile(1e-5)
    with pytest.raises(NumericError):
        d.quantile(np.array([0.5, 1e-5]), method="root")
    # About 8e-4 of the uniforms fall below 1.8e308^(-0.01)
    with pytest.raises(NumericError):
        d.sample_values(1, 100000)
    # Root finder path
    d = make_hall(1, 1, 0.01, 0.03)
    assert np.isfinite(d.x0)
    with pytest.raises(NumericError):
        d.quantile(1e-5)


def test_quantile_roundtrip():
    u = np.array([1e-8, 1e-4, 0.1, 0.5, 0.75, 1.])
    for d in _test_distributions():
        x = d.quantile(u)
        assert np.all(np.abs(d.survival(x) - u) <= 1e-10)
        # Strictly decreasing in u
        assert np.all(np.diff(x) < 0)
        assert np.all(x >= d.x0)


def test_quantile_invalid_u():
    d = make_hall(1, 1, 1, 3)
    for u in [0, -0.1, 1.5, np.nan]:
        with pytest.raises(DomainError):
            d.quantile(u)


def test_sample_determinism():
    d = make_hall(1, 1, 1, 3)
    s1 = d.sample(42, 1000)
    s2 = d.sample(42, 1000)
    s3 = d.sample(43, 1000)
    assert isinstance(s1, Sample)
    assert s1.seed == 42
    assert np.array_equal(s1.values, s2.values)
    assert not np.array_equal(s1.values, s3.values)
    with pytest.raises(InvalidParametersError):
        d.sample_values(1, 0)


def test_sample_pareto_tail_fraction():
    d = make_pareto(1, 1)
    values = d.sample_values(2024, 10 ** 6)
    fraction = np.mean(values > 10)
    assert abs(fraction - 0.1) <= 3 * np.sqrt(0.09 / 10 ** 6)


def test_sample_support():
    d = make_hall(1, 1, 1, 2)
    values = d.sample_values(7, 10 ** 6)
    assert np.min(values) >= d.x0
    assert np.all(np.isfinite(values))


def test_scaled_and_invariant_ratio():
    d = make_hall(1, 1, 1, 2)
    for factor in [0.5, 3, 10]:
        scaled = d.scaled(factor)
        assert isinstance(scaled, HallDistribution)
        assert np.isclose(scaled.c1, factor ** d.alpha)
        assert np.isclose(scaled.c2, factor ** d.beta)
        assert np.isclose(scaled.x0, factor * d.x0, rtol=1e-12)
        assert np.isclose(scaled.invariant_ratio(), d.invariant_ratio(), rtol=1e-12)
    negative = make_hall(1, -0.2, 1, 2)
    assert negative.invariant_ratio() < 0
    assert np.isclose(negative.scaled(3).invariant_ratio(), negative.invariant_ratio(), rtol=1e-12)
    assert make_pareto(1, 2).invariant_ratio() == np.inf
    assert make_pareto(1, 2).scaled(2).x0 == 2 * make_pareto(1, 2).x0


def test_equality():
    assert make_hall(1, 1, 1, 2) == make_hall(1., 1., 1., 2.)
    assert make_hall(1, 1, 1, 2) != make_hall(1, 1, 1, 3)
    assert make_pareto(1, 1) == make_hall(1, 0, 1, np.inf)
