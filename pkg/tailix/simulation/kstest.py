import numpy as np
from scipy.special import ndtr
from tailix._errors import InsufficientDataError

"""
Constants
"""
_KOLMOGOROV_TERMS = 100
_MIN_KS_VALUES = 50


def kolmogorov_survival(statistic: float) -> float:
    """
    Survival function of the asymptotic Kolmogorov distribution, P(K > statistic) with K = sup_t |B(t)| for a Brownian
    bridge B. Both series are truncated after 100 terms:
    statistic >= 1: 2 * sum_{k>=1} (-1)^(k-1) exp(-2 k^2 statistic^2),
    statistic < 1: 1 - sqrt(2 pi) / statistic * sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 statistic^2)).

    Parameters
    ----------
    statistic : float
        The value sqrt(n) * D_n

    Returns
    -------
    pval : float
        The p-value in [0, 1]
    """
    if statistic <= 0:
        return 1.
    k = np.arange(1, _KOLMOGOROV_TERMS + 1)
    if statistic >= 1:
        signs = np.where(k % 2 == 1, 1., -1.)
        pval = 2 * np.sum(signs * np.exp(-2 * k ** 2 * statistic ** 2))
    else:
        cdf = np.sqrt(2 * np.pi) / statistic * np.sum(np.exp(-(2 * k - 1) ** 2 * np.pi ** 2 / (8 * statistic ** 2)))
        pval = 1 - cdf
    return float(np.clip(pval, 0, 1))


def ks_normal(z_values: np.ndarray, target_mean: float = 0., sigma: float = 1.) -> (float, float):
    """
    One-sample Kolmogorov-Smirnov test of z_values / sigma against the normal distribution N(target_mean, 1).
    The p-value is taken from the asymptotic Kolmogorov distribution of sqrt(n) * D_n.

    Parameters
    ----------
    z_values : np.ndarray
        The values, at least 50
    target_mean : float
        Mean of the normal reference distribution (default: 0.)
    sigma : float
        The values are divided by sigma before the comparison (default: 1.)

    Returns
    -------
    tuple : (float, float)
        The statistic D_n,
        The p-value
    """
    assert sigma > 0, "sigma must be positive"
    z_values = np.asarray(z_values, dtype=np.float64).ravel()
    if z_values.shape[0] < _MIN_KS_VALUES:
        raise InsufficientDataError(
            "The Kolmogorov-Smirnov test needs at least {0} values, got {1}".format(_MIN_KS_VALUES,
                                                                                   z_values.shape[0]))
    n_values = z_values.shape[0]
    reference_cdf = ndtr(np.sort(z_values / sigma) - target_mean)
    d_plus = np.max(np.arange(1, n_values + 1) / n_values - reference_cdf)
    d_minus = np.max(reference_cdf - np.arange(n_values) / n_values)
    statistic = float(max(d_plus, d_minus))
    return statistic, kolmogorov_survival(np.sqrt(n_values) * statistic)
