import numpy as np
from typing import NamedTuple
from scipy.special import gamma as gamma_function
from tailix._errors import InvalidParametersError, DomainError

CLASSICAL_METHODS = {1: "hill", 2: "pickands", 3: "moment", 4: "devries"}


class _Degenerate():
    """
    Marker for quantities that are undefined on a degenerate parameter locus (e.g. chi = 0 or D_2 = 0).
    """
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "degenerate"

    def __str__(self) -> str:
        return "degenerate"

    def __reduce__(self):
        return (_Degenerate, ())


DEGENERATE = _Degenerate()


def is_degenerate(value) -> bool:
    return value is DEGENERATE


class SecondOrderParams():
    """
    Parameters (alpha, beta, c1, c2) of a second order Pareto tail 1 - F(x) = c1 * x^(-alpha) + c2 * x^(-beta)
    together with the derived views gamma = 1/alpha, rho = alpha - beta, zeta = (beta - alpha) / alpha and
    p = alpha / (alpha + 1).

    Parameters
    ----------
    alpha : float
        The tail index alpha > 0
    beta : float
        The second-order exponent beta > alpha. np.inf is accepted but rejected by all zeta-dependent operations
    c1 : float
        The first tail constant C1 > 0 (default: 1.)
    c2 : float
        The second tail constant C2 (default: 1.)
    """

    def __init__(self, alpha: float, beta: float, c1: float = 1., c2: float = 1.):
        if not alpha > 0 or not np.isfinite(alpha):
            raise DomainError("alpha must be positive and finite, got {0}".format(alpha))
        if not beta > alpha:
            raise DomainError("beta must be larger than alpha, got alpha={0}, beta={1}".format(alpha, beta))
        if not c1 > 0:
            raise DomainError("c1 must be positive, got {0}".format(c1))
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.c1 = float(c1)
        self.c2 = float(c2)

    @property
    def gamma(self) -> float:
        return 1. / self.alpha

    @property
    def rho(self) -> float:
        return self.alpha - self.beta

    @property
    def zeta(self) -> float:
        return (self.beta - self.alpha) / self.alpha

    @property
    def p(self) -> float:
        return self.alpha / (self.alpha + 1)

    def __repr__(self) -> str:
        return "SecondOrderParams(alpha={0}, beta={1}, c1={2}, c2={3})".format(self.alpha, self.beta, self.c1,
                                                                             self.c2)

    def scaled(self, factor: float) -> 'SecondOrderParams':
        """
        Parameters of A * X: (c1, c2) -> (c1 * A^alpha, c2 * A^beta).

        Parameters
        ----------
        factor : float
            The scale factor A > 0

        Returns
        -------
        params : SecondOrderParams
            The transformed parameters
        """
        assert factor > 0, "factor must be positive"
        return SecondOrderParams(self.alpha, self.beta, self.c1 * factor ** self.alpha, self.c2 * factor ** self.beta)

    @classmethod
    def from_distribution(cls, distribution) -> 'SecondOrderParams':
        """
        Get the parameters of a HallDistribution.

        Parameters
        ----------
        distribution : HallDistribution
            The distribution

        Returns
        -------
        params : SecondOrderParams
            The parameters
        """
        return cls(distribution.alpha, distribution.beta, distribution.c1, distribution.c2)


class ParamViews(NamedTuple):
    gamma: float
    rho: float
    p: float
    zeta: float


def param_views(params: SecondOrderParams) -> ParamViews:
    """
    The derived parameters gamma = 1/alpha, rho = alpha - beta, p = alpha / (alpha + 1), zeta = (beta - alpha) / alpha.

    Parameters
    ----------
    params : SecondOrderParams
        The parameters

    Returns
    -------
    views : ParamViews
        (gamma, rho, p, zeta)
    """
    return ParamViews(params.gamma, params.rho, params.p, params.zeta)


def params_from_gamma_rho(gamma: float, rho: float, c1: float = 1., c2: float = 1.) -> SecondOrderParams:
    """
    Inverse of param_views: alpha = 1/gamma, beta = alpha - rho.

    Parameters
    ----------
    gamma : float
        The extreme-value index gamma > 0
    rho : float
        The second-order parameter rho < 0
    c1 : float
        The first tail constant (default: 1.)
    c2 : float
        The second tail constant (default: 1.)

    Returns
    -------
    params : SecondOrderParams
        The parameters
    """
    if not gamma > 0:
        raise DomainError("gamma must be positive, got {0}".format(gamma))
    if not rho < 0:
        raise DomainError("rho must be negative, got {0}".format(rho))
    alpha = 1. / gamma
    return SecondOrderParams(alpha, alpha - rho, c1, c2)


def gamma_rho_to_alpha_beta(gamma, rho) -> (np.ndarray, np.ndarray):
    gamma = np.asarray(gamma, dtype=np.float64)
    alpha = 1. / gamma
    return alpha, alpha - np.asarray(rho, dtype=np.float64)


def alpha_beta_to_gamma_rho(alpha, beta) -> (np.ndarray, np.ndarray):
    alpha = np.asarray(alpha, dtype=np.float64)
    return 1. / alpha, alpha - np.asarray(beta, dtype=np.float64)


def _check_finite_beta(params: SecondOrderParams) -> None:
    if not np.isfinite(params.beta):
        raise InvalidParametersError("This quantity depends on zeta and requires a finite beta")


def _check_n_total(n_total: float) -> None:
    if not n_total >= 4:
        raise InvalidParametersError("n_total must be at least 4, got {0}".format(n_total))


"""
Block ratio estimator
"""


def dpr_sigma2(alpha):
    """
    Asymptotic variance sigma^2 = alpha / ((alpha + 1)^2 (alpha + 2)) of the block ratio, i.e. the variance of
    W = min(X, Y) / max(X, Y) for independent Pareto(alpha) variables.

    Parameters
    ----------
    alpha : float / np.ndarray
        The tail index

    Returns
    -------
    sigma2 : float / np.ndarray
        The variance
    """
    return alpha / ((alpha + 1) ** 2 * (alpha + 2))


def dpr_chi(params: SecondOrderParams) -> float:
    """
    The bias constant chi = c2 * beta * zeta * Gamma(zeta + 1) / (c1^(zeta+1) (alpha + 1)(beta + 1)) of the block ratio
    estimator, E p - p ~ chi * m^(-zeta).

    Parameters
    ----------
    params : SecondOrderParams
        The parameters (finite beta)

    Returns
    -------
    chi : float
        The bias constant
    """
    _check_finite_beta(params)
    zeta = params.zeta
    return params.c2 * params.beta * zeta * gamma_function(zeta + 1) / (
            params.c1 ** (zeta + 1) * (params.alpha + 1) * (params.beta + 1))


def dpr_amse_curve(params: SecondOrderParams, m, n_total: float):
    """
    The asymptotic mean squared error chi^2 m^(-2 zeta) + sigma^2 m / N of the block ratio estimator with block size m.

    Parameters
    ----------
    params : SecondOrderParams
        The parameters (finite beta)
    m : float / np.ndarray
        The block size(s)
    n_total : float
        The sample size N

    Returns
    -------
    amse : float / np.ndarray
        The asymptotic mean squared error for each m
    """
    m = np.asarray(m, dtype=np.float64)
    amse = dpr_chi(params) ** 2 * m ** (-2 * params.zeta) + dpr_sigma2(params.alpha) * m / n_total
    return float(amse) if amse.ndim == 0 else amse


class DprAsymptotics(NamedTuple):
    """
    Asymptotic quantities of the block ratio estimator.
    On the degenerate locus chi = 0 the fields mu, m_opt_real, m_opt_int and amse are DEGENERATE.

    Attributes
    ----------
    zeta : float
        (beta - alpha) / alpha
    chi : float
        The bias constant
    sigma2 : float
        The asymptotic variance
    mu : float
        Mean of the normal limit of sqrt(n)(p - p) at the optimal block size, sigma (2 zeta)^(-1/2) sgn(chi)
    m_opt_real : float
        The optimal block size (2 zeta chi^2 / sigma^2)^(1/(1+2 zeta)) N^(1/(1+2 zeta))
    m_opt_int : int
        m_opt_real rounded to the nearest integer, at least 2
    amse : float
        The minimal asymptotic mean squared error
    """
    zeta: float
    chi: float
    sigma2: float
    mu: float
    m_opt_real: float
    m_opt_int: int
    amse: float


def dpr_asymptotics(params: SecondOrderParams, n_total: float) -> DprAsymptotics:
    """
    Bias constant, variance, optimal block size and minimal asymptotic mean squared error of the block ratio estimator
    for a sample of size N.

    Parameters
    ----------
    params : SecondOrderParams
        The parameters (finite beta)
    n_total : float
        The sample size N >= 4

    Returns
    -------
    asymptotics : DprAsymptotics
        The asymptotic quantities
    """
    _check_finite_beta(params)
    _check_n_total(n_total)
    zeta = params.zeta
    chi = dpr_chi(params)
    sigma2 = dpr_sigma2(params.alpha)
    if chi == 0:
        return DprAsymptotics(zeta, 0., sigma2, DEGENERATE, DEGENERATE, DEGENERATE, DEGENERATE)
    exponent = 1. / (1 + 2 * zeta)
    m_opt_real = (2 * zeta * chi ** 2 / sigma2) ** exponent * n_total ** exponent
    m_opt_int = max(2, int(np.floor(m_opt_real + 0.5)))
    amse = (1 + 2 * zeta) * (chi ** 2 * sigma2 ** (2 * zeta) / ((2 * zeta) ** (2 * zeta) * n_total ** (2 * zeta))) ** \
        exponent
    mu = np.sqrt(sigma2) / np.sqrt(2 * zeta) * np.sign(chi)
    return DprAsymptotics(zeta, chi, sigma2, mu, m_opt_real, m_opt_int, amse)


"""
Classical estimators (1: Hill, 2: Pickands, 3: moment, 4: de Vries)
"""


def _check_j(j: int) -> None:
    if j not in CLASSICAL_METHODS:
        raise InvalidParametersError("j must be in {1, 2, 3, 4}, got " + str(j))


def classical_bias_constant(j: int, alpha, zeta):
    """
    The constant D_j of the asymptotic bias of the classical estimator j.
    D_1 = 1/(1+zeta), D_2 = (1 - 2^-zeta)(2^(1/alpha - zeta) - 1) / ((2^(1/alpha) - 1) log(2) zeta),
    D_3 = (1 + zeta - alpha zeta) / (1 + zeta)^2, D_4 = 1 / (1 + zeta)^2.

    Parameters
    ----------
    j : int
        The estimator
    alpha : float / np.ndarray
        The tail index
    zeta : float / np.ndarray
        (beta - alpha) / alpha

    Returns
    -------
    d_j : float / np.ndarray
        The constant
    """
    _check_j(j)
    if j == 1:
        return 1. / (1 + zeta)
    if j == 2:
        # 2^x - 1 = expm1(x log 2) is exactly 0 for x = 0
        return -np.expm1(-zeta * np.log(2)) * np.expm1((1. / alpha - zeta) * np.log(2)) / (
                np.expm1(np.log(2) / alpha) * np.log(2) * zeta)
    if j == 3:
        return (1 + zeta - alpha * zeta) / (1 + zeta) ** 2
    return 1. / (1 + zeta) ** 2


def classical_sigma2(j: int, alpha):
    """
    The asymptotic variance sigma_j^2 of the classical estimator j on the gamma-scale.
    sigma_1^2 = 1/alpha^2, sigma_2^2 = (1 + 2^(2/alpha + 1)) / (alpha^2 (2^(1/alpha) - 1)^2 log(2)^2),
    sigma_3^2 = (1 + alpha^2) / alpha^2, sigma_4^2 = 2 / alpha^2.

    Parameters
    ----------
    j : int
        The estimator
    alpha : float / np.ndarray
        The tail index

    Returns
    -------
    sigma2_j : float / np.ndarray
        The variance
    """
    _check_j(j)
    if j == 1:
        return 1. / alpha ** 2
    if j == 2:
        return (1 + 2 ** (2. / alpha + 1)) / (alpha ** 2 * np.expm1(np.log(2) / alpha) ** 2 * np.log(2) ** 2)
    if j == 3:
        return (1 + alpha ** 2) / alpha ** 2
    return 2. / alpha ** 2


def second_order_function(params: SecondOrderParams, t):
    """
    Leading term of the second order auxiliary function, A(t) ~ -(zeta / alpha) * c2 / c1^(beta/alpha) * t^(-zeta).

    Parameters
    ----------
    params : SecondOrderParams
        The parameters (finite beta)
    t : float / np.ndarray
        The argument(s)

    Returns
    -------
    a_t : float / np.ndarray
        The value(s) of A(t)
    """
    _check_finite_beta(params)
    return _second_order_coefficient(params) * np.asarray(t, dtype=np.float64) ** -params.zeta


def _second_order_coefficient(params: SecondOrderParams) -> float:
    return -(params.zeta / params.alpha) * params.c2 / params.c1 ** (params.beta / params.alpha)


def to_p_scale(mean: float, variance: float, gamma: float) -> (float, float):
    """
    Transform the normal limit N(mean, variance) of sqrt(k)(gamma_hat - gamma) into the normal limit of
    sqrt(k)(p_hat - p) for p = 1 / (1 + gamma) (delta method with dp/dgamma = -1/(1+gamma)^2).

    Parameters
    ----------
    mean : float
        Mean of the limit on the gamma-scale
    variance : float
        Variance of the limit on the gamma-scale
    gamma : float
        The extreme-value index, > -1

    Returns
    -------
    tuple : (float, float)
        The mean and the variance of the limit on the p-scale
    """
    assert gamma > -1, "gamma must be larger than -1"
    return -mean / (1 + gamma) ** 2, variance / (1 + gamma) ** 4


class ClassicalAsymptotics(NamedTuple):
    """
    Asymptotic quantities of a classical estimator.
    On a degenerate locus (D_j = 0 or c2 = 0) the fields k_opt, amse_p and mu are DEGENERATE.

    Attributes
    ----------
    j : int
        The estimator (1: Hill, 2: Pickands, 3: moment, 4: de Vries)
    d_j : float
        The bias constant D_j
    sigma_j2 : float
        The asymptotic variance on the gamma-scale
    a_coefficient : float
        The coefficient a of A(t) ~ a * t^(-zeta)
    k_opt : float
        The optimal number of upper order statistics (real valued)
    amse_p : float
        The minimal asymptotic mean squared error on the p-scale
    mu : float
        Mean of the normal limit of sqrt(k_opt)(gamma_hat - gamma), sigma_j (2 zeta)^(-1/2) sgn(D_j a)
    """
    j: int
    d_j: float
    sigma_j2: float
    a_coefficient: float
    k_opt: float
    amse_p: float
    mu: float


def classical_asymptotics(j: int, params: SecondOrderParams, n_total: float) -> ClassicalAsymptotics:
    """
    Optimal number of upper order statistics
    k_opt = (sigma_j^2 / (2 zeta D_j^2 a^2))^(1/(1+2 zeta)) N^(2 zeta/(1+2 zeta))
    and the minimal asymptotic mean squared error on the p-scale
    (alpha / (alpha + 1))^4 (1 + 2 zeta) / (2 zeta) sigma_j^2 / k_opt of the classical estimator j.

    Parameters
    ----------
    j : int
        The estimator (1: Hill, 2: Pickands, 3: moment, 4: de Vries)
    params : SecondOrderParams
        The parameters (finite beta)
    n_total : float
        The sample size N >= 4

    Returns
    -------
    asymptotics : ClassicalAsymptotics
        The asymptotic quantities
    """
    _check_j(j)
    _check_finite_beta(params)
    _check_n_total(n_total)
    alpha, zeta = params.alpha, params.zeta
    d_j = float(classical_bias_constant(j, alpha, zeta))
    sigma_j2 = float(classical_sigma2(j, alpha))
    a_coefficient = _second_order_coefficient(params)
    if d_j == 0 or a_coefficient == 0:
        return ClassicalAsymptotics(j, d_j, sigma_j2, a_coefficient, DEGENERATE, DEGENERATE, DEGENERATE)
    k_opt = (sigma_j2 / (2 * zeta * d_j ** 2 * a_coefficient ** 2)) ** (1. / (1 + 2 * zeta)) * n_total ** (
            2 * zeta / (1 + 2 * zeta))
    amse_p = params.p ** 4 * (1 + 2 * zeta) / (2 * zeta) * sigma_j2 / k_opt
    mu = np.sqrt(sigma_j2) / np.sqrt(2 * zeta) * np.sign(d_j * a_coefficient)
    return ClassicalAsymptotics(j, d_j, sigma_j2, a_coefficient, k_opt, amse_p, mu)


"""
Comparison of minimal mean squared errors
"""


def eta(alpha, beta):
    """
    eta(alpha, beta) = (beta (alpha + 1) / (alpha (beta + 1)))^2 ((alpha + 1)^2 / (alpha (alpha + 2)))^(2 zeta).

    Parameters
    ----------
    alpha : float / np.ndarray
        The tail index
    beta : float / np.ndarray
        The second-order exponent

    Returns
    -------
    eta : float / np.ndarray
        The value(s)
    """
    zeta = (beta - alpha) / alpha
    return (beta * (alpha + 1) / (alpha * (beta + 1))) ** 2 * ((alpha + 1) ** 2 / (alpha * (alpha + 2))) ** (2 * zeta)


def rmmse(j: int, alpha, beta):
    """
    Limit of the ratio of the minimal mean squared errors of the block ratio estimator and the classical estimator j
    (on the p-scale), RMMSE(j) = (eta Gamma(zeta + 1)^2 / ((alpha sigma_j)^(4 zeta) D_j^2))^(1/(1+2 zeta)).
    Values below 1 mean that the block ratio estimator is better. The result does not depend on c1 and c2.
    For scalar input DEGENERATE is returned if D_j = 0. For array input such entries are np.inf.

    Parameters
    ----------
    j : int
        The estimator (1: Hill, 2: Pickands, 3: moment, 4: de Vries)
    alpha : float / np.ndarray
        The tail index
    beta : float / np.ndarray
        The second-order exponent, beta > alpha

    Returns
    -------
    rmmse : float / np.ndarray
        The ratio(s)
    """
    _check_j(j)
    is_scalar = np.ndim(alpha) == 0 and np.ndim(beta) == 0
    alpha, beta = np.broadcast_arrays(np.asarray(alpha, dtype=np.float64), np.asarray(beta, dtype=np.float64))
    if not np.all(alpha > 0) or not np.all(beta > alpha):
        raise DomainError("rmmse requires 0 < alpha < beta")
    if not np.all(np.isfinite(beta)):
        raise InvalidParametersError("rmmse requires a finite beta")
    zeta = (beta - alpha) / alpha
    d_j = classical_bias_constant(j, alpha, zeta)
    sigma_j = np.sqrt(classical_sigma2(j, alpha))
    with np.errstate(divide="ignore"):
        ratio = (eta(alpha, beta) * gamma_function(zeta + 1) ** 2 / ((alpha * sigma_j) ** (4 * zeta) * d_j ** 2)) ** (
                1. / (1 + 2 * zeta))
    ratio = np.where(d_j == 0, np.inf, ratio)
    if is_scalar:
        return DEGENERATE if d_j == 0 else float(ratio)
    return ratio
