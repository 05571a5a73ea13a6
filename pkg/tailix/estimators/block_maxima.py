import numpy as np
from tailix._errors import TuningError, InvalidParametersError, DomainError, InversionError, KernelError
from tailix.estimators._base import Sample, EstimateResult, _TailEstimator, _result_from_gamma, _result_from_p, \
    _result_from_alpha, to_sample

KERNELS = ("power", "log", "negpower")


class BlockView():
    """
    The sample divided into n = [N/m] consecutive, non-overlapping blocks V_i = {X_{(i-1)m+1}, ..., X_{im}}.
    The trailing N - n*m observations are discarded.

    Parameters
    ----------
    m : int
        The block size
    tops : np.ndarray
        Array of shape (n, s_top + 1) containing the largest s_top + 1 values of each block in descending order

    Attributes
    ----------
    n : int
        The number of blocks
    s_top : int
        The number of order statistics above the reference value M^(s_top+1)
    """

    def __init__(self, m: int, tops: np.ndarray):
        self.m = m
        self.tops = tops
        self.n = tops.shape[0]
        self.s_top = tops.shape[1] - 1

    @property
    def kappa(self) -> np.ndarray:
        """
        The block ratios kappa_i = M_i^(2) / M_i^(1) in (0, 1].

        Returns
        -------
        kappa : np.ndarray
            Array of shape (n,)
        """
        return self.tops[:, 1] / self.tops[:, 0]


def block_partition(sample: Sample, m: int, s_top: int = 1) -> BlockView:
    """
    Divide the sample into consecutive blocks of size m and select the s_top + 1 largest values of each block.
    The selection uses np.partition per block, a full sort is only applied to the selected values.

    Parameters
    ----------
    sample : Sample
        The sample (array-likes are converted)
    m : int
        The block size, at least 2
    s_top : int
        Number of top values per block above the reference value, 1 <= s_top <= m - 1 (default: 1)

    Returns
    -------
    block_view : BlockView
        The block view
    """
    sample = to_sample(sample)
    if int(m) != m or m < 2:
        raise TuningError("The block size m must be an integer >= 2, got {0}".format(m))
    m = int(m)
    if int(s_top) != s_top or s_top < 1 or s_top > m - 1:
        raise TuningError("s_top must be an integer in [1, {0}], got {1}".format(m - 1, s_top))
    s_top = int(s_top)
    n_blocks = sample.n_obs // m
    if n_blocks == 0:
        raise TuningError("The block size m={0} exceeds the sample size {1}".format(m, sample.n_obs))
    blocks = sample.values[:n_blocks * m].reshape(n_blocks, m)
    cut = m - s_top - 1
    selected = np.partition(blocks, cut, axis=1)[:, cut:]
    tops = np.sort(selected, axis=1)[:, ::-1]
    return BlockView(m, tops)


def kernel_mean(kernel: str, alpha: float, r: float = 1.) -> float:
    """
    The kernel mean h_f(alpha) = E f(W), where W = min(X, Y) / max(X, Y) for two independent Pareto(alpha) variables.
    'power': f(x) = x^r with h = alpha / (r + alpha).
    'log': f(x) = -log(x) with h = 1 / alpha.
    'negpower': f(x) = x^(-r) with h = alpha / (alpha - r), defined for alpha > r.

    Parameters
    ----------
    kernel : str
        The kernel, one of 'power', 'log' and 'negpower'
    alpha : float
        The tail index
    r : float
        The exponent of the power kernels (default: 1.)

    Returns
    -------
    kernel_mean : float
        h_f(alpha)
    """
    _check_kernel(kernel, r)
    if alpha <= 0:
        raise DomainError("alpha must be positive, got {0}".format(alpha))
    if kernel == "power":
        return alpha / (r + alpha)
    if kernel == "log":
        return 1. / alpha
    if alpha <= r:
        raise DomainError("The negative power kernel requires alpha > r, got alpha={0}, r={1}".format(alpha, r))
    return alpha / (alpha - r)


def kernel_variance(kernel: str, alpha: float, r: float = 1.) -> float:
    """
    The kernel variance Var f(W), the asymptotic variance of sqrt(n) times the kernel mean of the block ratios for a
    pure Pareto sample.
    'power': alpha / (2r + alpha) - (alpha / (r + alpha))^2.
    'log': 1 / alpha^2 (-log(W) is exponentially distributed with rate alpha).
    'negpower': alpha / (alpha - 2r) - (alpha / (alpha - r))^2, defined for alpha > 2r.
    With kernel 'power' and r = 1 this is sigma^2 = alpha / ((alpha + 1)^2 (alpha + 2)).

    Parameters
    ----------
    kernel : str
        The kernel, one of 'power', 'log' and 'negpower'
    alpha : float
        The tail index
    r : float
        The exponent of the power kernels (default: 1.)

    Returns
    -------
    kernel_variance : float
        Var f(W)
    """
    _check_kernel(kernel, r)
    if alpha <= 0:
        raise DomainError("alpha must be positive, got {0}".format(alpha))
    if kernel == "power":
        if r == 1:
            return alpha / ((alpha + 1) ** 2 * (alpha + 2))
        return alpha / (2 * r + alpha) - (alpha / (r + alpha)) ** 2
    if kernel == "log":
        return 1. / alpha ** 2
    if alpha <= 2 * r:
        raise DomainError("The variance of the negative power kernel requires alpha > 2r, got alpha={0}, r={1}".format(
            alpha, r))
    return alpha / (alpha - 2 * r) - (alpha / (alpha - r)) ** 2


def _check_kernel(kernel: str, r: float) -> None:
    if kernel not in KERNELS:
        raise InvalidParametersError("kernel must be one of {0}, got {1}".format(KERNELS, kernel))
    if kernel != "log" and not r > 0:
        raise InvalidParametersError("The exponent r of the {0} kernel must be positive, got {1}".format(kernel, r))


def kernel_values(kernel: str, kappa: np.ndarray, r: float = 1.) -> np.ndarray:
    """
    The kernel f applied to the block ratios: kappa^r ('power'), -log(kappa) ('log') or kappa^(-r) ('negpower').

    Parameters
    ----------
    kernel : str
        The kernel, one of 'power', 'log' and 'negpower'
    kappa : np.ndarray
        The block ratios in [0, 1]. 'log' and 'negpower' require kappa > 0
    r : float
        The exponent of the power kernels. Ignored for 'log' (default: 1.)

    Returns
    -------
    values : np.ndarray
        f(kappa)
    """
    _check_kernel(kernel, r)
    kappa = np.asarray(kappa, dtype=np.float64)
    if kernel != "power" and np.any(kappa == 0):
        raise KernelError("The {0} kernel is undefined for a block ratio of 0".format(kernel))
    if kernel == "power":
        return kappa if r == 1 else kappa ** r
    if kernel == "log":
        return -np.log(kappa)
    return kappa ** -r


def dpr(sample: Sample, m: int) -> EstimateResult:
    """
    The block ratio estimator p = 1/n * sum_i M_i^(2) / M_i^(1) of p = alpha / (alpha + 1).
    Tied block maxima give kappa = 1.

    Parameters
    ----------
    sample : Sample
        The sample (array-likes are converted)
    m : int
        The block size, at least 2

    Returns
    -------
    result : EstimateResult
        The estimate, native scale p. The per-block ratios are stored in result.kappa
    """
    kappa = block_partition(sample, m).kappa
    return _result_from_p("dpr", {"m": int(m)}, np.mean(kappa), kappa)


def gdpr(sample: Sample, m: int, kernel: str = "power", r: float = 1.) -> EstimateResult:
    """
    The generalized block ratio estimator v = 1/n * sum_i f(kappa_i) of h_f(alpha) (see kernel_mean).
    The tail index is obtained by inverting h_f:
    'power': alpha = r * v / (1 - v) for 0 < v < 1,
    'log': alpha = 1 / v for v > 0,
    'negpower': alpha = r * v / (v - 1) for v > 1 (which implies alpha > r).
    With kernel 'power' and r = 1 the result equals dpr.

    Parameters
    ----------
    sample : Sample
        The sample (array-likes are converted)
    m : int
        The block size, at least 2
    kernel : str
        The kernel f, one of 'power', 'log' and 'negpower' (default: 'power')
    r : float
        The exponent of the power kernels. Ignored for 'log' (default: 1.)

    Returns
    -------
    result : EstimateResult
        The estimate, native scale h_f(alpha). The per-block ratios are stored in result.kappa
    """
    _check_kernel(kernel, r)
    kappa = block_partition(sample, m).kappa
    tuning = {"m": int(m), "kernel": kernel} if kernel == "log" else {"m": int(m), "kernel": kernel, "r": float(r)}
    value = float(np.mean(kernel_values(kernel, kappa, r)))
    if kernel == "power":
        if not 0 < value < 1:
            raise InversionError("Power kernel mean {0} is outside of (0, 1)".format(value))
        alpha = r * value / (1 - value)
    elif kernel == "log":
        if not value > 0:
            raise InversionError("Log kernel mean {0} is not positive".format(value))
        alpha = 1. / value
    else:
        if not value > 1:
            raise InversionError("Negative power kernel mean {0} is not larger than 1".format(value))
        alpha = r * value / (value - 1)
    return _result_from_alpha("gdpr", tuning, value, alpha, kappa)


def qi(sample: Sample, m: int, s_top: int = 1) -> EstimateResult:
    """
    Qi's block estimator gamma = 1/(n*s) * sum_i sum_{j=1}^{s} (log M_i^(j) - log M_i^(s+1)).
    Each summand is computed as -log(M_i^(s+1) / M_i^(j)), so s_top = 1 reproduces gdpr with the log kernel exactly.

    Parameters
    ----------
    sample : Sample
        The sample (array-likes are converted)
    m : int
        The block size, at least 2
    s_top : int
        Number of top values per block, 1 <= s_top <= m - 1 (default: 1)

    Returns
    -------
    result : EstimateResult
        The estimate, native scale gamma

    References
    ----------
    Qi, Yongcheng. "On the tail index of a heavy tailed distribution."
    Annals of the Institute of Statistical Mathematics 62.2 (2010): 277-298.
    """
    view = block_partition(sample, m, s_top)
    reference = view.tops[:, view.s_top]
    terms = -np.log(reference[:, None] / view.tops[:, :view.s_top])
    gamma = np.mean(np.sum(terms, axis=1)) / view.s_top
    return _result_from_gamma("qi", {"m": int(m), "s": int(s_top)}, gamma)


class DPR(_TailEstimator):
    """
    Scikit-learn style wrapper of the block ratio estimator.

    Parameters
    ----------
    m : int
        The block size (default: 2)

    Attributes
    ----------
    result_ : EstimateResult
        The full result including the block ratios
    estimate_ : float
        The estimate of p = alpha / (alpha + 1)
    alpha_ : float
        The estimated tail index
    gamma_ : float
        The estimated extreme-value index
    p_ : float
        Same as estimate_
    """

    def __init__(self, m: int = 2):
        self.m = m

    def _estimate(self, sample: Sample) -> EstimateResult:
        return dpr(sample, self.m)


class GDPR(_TailEstimator):
    """
    Scikit-learn style wrapper of the generalized block ratio estimator.

    Parameters
    ----------
    m : int
        The block size (default: 2)
    kernel : str
        The kernel, one of 'power', 'log' and 'negpower' (default: 'power')
    r : float
        Exponent of the power kernels (default: 1.)
    """

    def __init__(self, m: int = 2, kernel: str = "power", r: float = 1.):
        self.m = m
        self.kernel = kernel
        self.r = r

    def _estimate(self, sample: Sample) -> EstimateResult:
        return gdpr(sample, self.m, self.kernel, self.r)


class Qi(_TailEstimator):
    """
    Scikit-learn style wrapper of Qi's block estimator.

    Parameters
    ----------
    m : int
        The block size (default: 2)
    s_top : int
        Number of top values per block (default: 1)
    """

    def __init__(self, m: int = 2, s_top: int = 1):
        self.m = m
        self.s_top = s_top

    def _estimate(self, sample: Sample) -> EstimateResult:
        return qi(sample, self.m, self.s_top)
