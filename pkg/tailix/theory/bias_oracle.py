import numpy as np
import pandas as pd
from scipy import integrate
from joblib import Parallel, delayed
from tailix._errors import InvalidParametersError, QuadratureError
from tailix.distributions.hall import HallDistribution

"""
Break points (in multiples of 1/m) of the integration domain (0, 1). The weight (1 - v)^(m-1) concentrates on v ~ 1/m
"""
_BREAK_POINTS = (0.5, 2., 8., 32., 128.)


class QuadratureSpec():
    """
    Settings of the adaptive quadrature (scipy.integrate.quad, QUADPACK QAGS).

    Parameters
    ----------
    rel_tol : float
        Relative tolerance (default: 1e-10)
    abs_tol : float
        Absolute tolerance on the resulting expectation (default: 1e-14)
    max_subdivisions : int
        Maximum number of subintervals used by the adaptive algorithm on each piece of the domain (default: 100000)
    """

    def __init__(self, rel_tol: float = 1e-10, abs_tol: float = 1e-14, max_subdivisions: int = 100000):
        if not rel_tol > 0 or not abs_tol > 0:
            raise InvalidParametersError("Tolerances must be positive, got rel_tol={0}, abs_tol={1}".format(rel_tol,
                                                                                                          abs_tol))
        if int(max_subdivisions) != max_subdivisions or max_subdivisions < 1:
            raise InvalidParametersError("max_subdivisions must be a positive integer, got {0}".format(
                max_subdivisions))
        self.rel_tol = rel_tol
        self.abs_tol = abs_tol
        self.max_subdivisions = int(max_subdivisions)

    def __repr__(self) -> str:
        return "QuadratureSpec(rel_tol={0}, abs_tol={1}, max_subdivisions={2})".format(self.rel_tol, self.abs_tol,
                                                                                      self.max_subdivisions)


def _deviation_integrand(v: float, distribution: HallDistribution, m: int) -> float:
    """
    (1 - v)^(m-1) * (g(x) / f(x) - 1 / (alpha + 1)) with x = S^(-1)(v), where
    g(x) = c1 alpha/(alpha+1) x^(-alpha-1) + c2 beta/(beta+1) x^(-beta-1) is the integrated-by-parts inner integral of
    the block ratio expectation and f the density.
    With r = x^(alpha-beta) the bracket equals c2 beta (alpha - beta) r / ((alpha+1)(beta+1)(c1 alpha + c2 beta r)).

    Parameters
    ----------
    v : float
        The survival probability in (0, 1)
    distribution : HallDistribution
        The distribution
    m : int
        The block size

    Returns
    -------
    value : float
        The integrand
    """
    if distribution.is_pareto:
        return 0.
    alpha, beta, c1, c2 = distribution.alpha, distribution.beta, distribution.c1, distribution.c2
    x = distribution.quantile(v)
    r = x ** (alpha - beta)
    deviation = c2 * beta * (alpha - beta) * r / ((alpha + 1) * (beta + 1) * (c1 * alpha + c2 * beta * r))
    return np.exp((m - 1) * np.log1p(-v)) * deviation


def _integrate_pieces(distribution: HallDistribution, m: int, quadrature: QuadratureSpec) -> (float, float):
    """
    Integrate the deviation integrand over (0, 1), split at the break points c/m.

    Parameters
    ----------
    distribution : HallDistribution
        The distribution
    m : int
        The block size
    quadrature : QuadratureSpec
        The quadrature settings

    Returns
    -------
    tuple : (float, float)
        The integral,
        The summed absolute error estimate
    """
    edges = [0.] + [c / m for c in _BREAK_POINTS if c / m < 1] + [1.]
    n_pieces = len(edges) - 1
    total, total_error = 0., 0.
    for lower, upper in zip(edges[:-1], edges[1:]):
        output = integrate.quad(_deviation_integrand, lower, upper, args=(distribution, m), full_output=1,
                                epsabs=quadrature.abs_tol / (m * n_pieces), epsrel=quadrature.rel_tol,
                                limit=quadrature.max_subdivisions)
        if len(output) > 3:
            raise QuadratureError(
                "Quadrature for m={0} on ({1}, {2}) did not reach the tolerance: {3}".format(m, lower, upper,
                                                                                          output[3]))
        total += output[0]
        total_error += output[1]
    return total, total_error


def exact_mean_dpr(distribution: HallDistribution, m: int, quadrature: QuadratureSpec = None,
                   return_error: bool = False):
    """
    Exact expectation of the block ratio estimator with block size m,
    E p = 1 - m * int_{x0}^{inf} F^(m-1)(x) g(x) dx
    with g(x) = c1 alpha/(alpha+1) x^(-alpha-1) + c2 beta/(beta+1) x^(-beta-1),
    computed by adaptive quadrature after substituting v = S(x), which maps the domain to (0, 1).
    Because m * int_0^1 (1 - v)^(m-1) dv = 1, the result is evaluated as
    alpha/(alpha+1) - m * int_0^1 (1 - v)^(m-1) (g/f - 1/(alpha+1)) dv, so the pure Pareto case is exact.
    F^(m-1) = exp((m-1) log1p(-v)).

    Parameters
    ----------
    distribution : HallDistribution
        The distribution
    m : int
        The block size, at least 2
    quadrature : QuadratureSpec
        The quadrature settings. If None, the default settings are used (default: None)
    return_error : bool
        Additionally return the absolute error estimate (default: False)

    Returns
    -------
    mean : float
        E p. If return_error is True, a tuple (mean, error estimate) is returned
    """
    if int(m) != m or m < 2:
        raise InvalidParametersError("m must be an integer >= 2, got {0}".format(m))
    m = int(m)
    if quadrature is None:
        quadrature = QuadratureSpec()
    p = distribution.alpha / (distribution.alpha + 1)
    integral, integral_error = _integrate_pieces(distribution, m, quadrature)
    mean, error = p - m * integral, m * integral_error
    if return_error:
        return mean, error
    return mean


def bias_curve(distribution: HallDistribution, m_list: list, quadrature: QuadratureSpec = None,
               n_jobs: int = 1) -> pd.DataFrame:
    """
    The exact bias gamma_m = E p - p of the block ratio estimator for several block sizes together with the normalized
    bias m^zeta * gamma_m, which converges to the bias constant chi.

    Parameters
    ----------
    distribution : HallDistribution
        The distribution
    m_list : list
        The block sizes, each at least 2
    quadrature : QuadratureSpec
        The quadrature settings. If None, the default settings are used (default: None)
    n_jobs : int
        Number of parallel joblib workers. The row order always follows m_list (default: 1)

    Returns
    -------
    curve : pd.DataFrame
        Columns 'm', 'gamma_m' and 'normalized'. 'normalized' is NaN for the pure Pareto case (zeta is infinite)
    """
    m_list = [int(m) for m in m_list]
    assert len(m_list) > 0, "m_list must not be empty"
    means = Parallel(n_jobs=n_jobs)(delayed(exact_mean_dpr)(distribution, m, quadrature) for m in m_list)
    p = distribution.alpha / (distribution.alpha + 1)
    gamma_m = np.array(means) - p
    m_array = np.array(m_list)
    if distribution.is_pareto:
        normalized = np.full(len(m_list), np.nan)
    else:
        normalized = m_array ** ((distribution.beta - distribution.alpha) / distribution.alpha) * gamma_m
    return pd.DataFrame({"m": m_array, "gamma_m": gamma_m, "normalized": normalized})
