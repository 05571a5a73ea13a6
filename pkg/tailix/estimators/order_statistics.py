import numpy as np
from tailix._errors import TuningError, DegenerateEstimateError
from tailix.estimators._base import Sample, EstimateResult, _TailEstimator, _result_from_gamma, to_sample


def _check_k(sample: Sample, k: int, k_min: int) -> None:
    """
    Check that the number of upper order statistics k is within [k_min, N - 1].
    Raises a TuningError otherwise.

    Parameters
    ----------
    sample : Sample
        The sample
    k : int
        The number of upper order statistics
    k_min : int
        The smallest valid k of the estimator
    """
    if int(k) != k or k < k_min or k > sample.n_obs - 1:
        raise TuningError(
            "k must be an integer in [{0}, {1}], got {2}".format(k_min, sample.n_obs - 1, k))


def _log_excesses(sample: Sample, k: int) -> np.ndarray:
    """
    log(X_{N,N-i} / X_{N,N-k}) for i = 0, ..., k-1.
    Computed as logarithms of ratios so that scaling the sample by a power of two leaves the result bit-identical.

    Parameters
    ----------
    sample : Sample
        The sample
    k : int
        The number of upper order statistics

    Returns
    -------
    log_excesses : np.ndarray
        Array of shape (k,)
    """
    top = sample.top(k + 1)
    return np.log(top[:k] / top[k])


def _hill(sample: Sample, k: int) -> float:
    return float(np.mean(_log_excesses(sample, k)))


def _second_moment(sample: Sample, k: int) -> float:
    return float(np.mean(_log_excesses(sample, k) ** 2))


def hill(sample: Sample, k: int) -> EstimateResult:
    """
    The Hill estimator gamma = 1/k * sum_{i=0}^{k-1} log X_{N,N-i} - log X_{N,N-k}.

    Parameters
    ----------
    sample : Sample
        The sample (array-likes are converted)
    k : int
        Number of upper order statistics, 1 <= k <= N - 1

    Returns
    -------
    result : EstimateResult
        The estimate, native scale gamma

    References
    ----------
    Hill, Bruce M. "A simple general approach to inference about the tail of a distribution."
    The Annals of Statistics (1975): 1163-1174.
    """
    sample = to_sample(sample)
    _check_k(sample, k, 1)
    return _result_from_gamma("hill", {"k": int(k)}, _hill(sample, k))


def pickands(sample: Sample, k: int) -> EstimateResult:
    """
    The Pickands estimator
    gamma = 1/log(2) * log((X_{N,N-[k/4]} - X_{N,N-[k/2]}) / (X_{N,N-[k/2]} - X_{N,N-k})), where [.] is the floor.

    Parameters
    ----------
    sample : Sample
        The sample (array-likes are converted)
    k : int
        Number of upper order statistics, 4 <= k <= N - 1

    Returns
    -------
    result : EstimateResult
        The estimate, native scale gamma

    References
    ----------
    Pickands, James. "Statistical inference using extreme order statistics."
    The Annals of Statistics (1975): 119-131.
    """
    sample = to_sample(sample)
    _check_k(sample, k, 4)
    top = sample.top(k + 1)
    upper_gap = top[k // 4] - top[k // 2]
    lower_gap = top[k // 2] - top[k]
    if upper_gap <= 0 or lower_gap <= 0:
        raise DegenerateEstimateError(
            "Pickands estimator with k={0} is degenerate: order statistic gaps are {1} and {2} (ties)".format(
                k, upper_gap, lower_gap))
    gamma = np.log(upper_gap / lower_gap) / np.log(2)
    return _result_from_gamma("pickands", {"k": int(k)}, gamma)


def moment(sample: Sample, k: int) -> EstimateResult:
    """
    The moment estimator gamma = H + 1 - 1/2 * (1 - H^2 / M)^(-1), where H is the Hill estimator and
    M = 1/k * sum_{i=0}^{k-1} (log X_{N,N-i} - log X_{N,N-k})^2.

    Parameters
    ----------
    sample : Sample
        The sample (array-likes are converted)
    k : int
        Number of upper order statistics, 2 <= k <= N - 1

    Returns
    -------
    result : EstimateResult
        The estimate, native scale gamma

    References
    ----------
    Dekkers, Arnold LM, John HJ Einmahl, and Laurens De Haan. "A moment estimator for the index of an extreme-value
    distribution." The Annals of Statistics (1989): 1833-1855.
    """
    sample = to_sample(sample)
    _check_k(sample, k, 2)
    log_excesses = _log_excesses(sample, k)
    first = float(np.mean(log_excesses))
    second = float(np.mean(log_excesses ** 2))
    if second == 0:
        raise DegenerateEstimateError("Moment estimator with k={0} is degenerate: M_N = 0".format(k))
    denominator = 1 - first ** 2 / second
    if abs(denominator) <= 4 * np.finfo(np.float64).eps:
        raise DegenerateEstimateError("Moment estimator with k={0} is degenerate: H^2 = M_N (pole)".format(k))
    gamma = first + 1 - 0.5 / denominator
    return _result_from_gamma("moment", {"k": int(k)}, gamma)


def devries(sample: Sample, k: int) -> EstimateResult:
    """
    The estimator of de Vries gamma = M / (2 * H), with H the Hill estimator and M as in the moment estimator.

    Parameters
    ----------
    sample : Sample
        The sample (array-likes are converted)
    k : int
        Number of upper order statistics, 2 <= k <= N - 1

    Returns
    -------
    result : EstimateResult
        The estimate, native scale gamma
    """
    sample = to_sample(sample)
    _check_k(sample, k, 2)
    first = _hill(sample, k)
    if first == 0:
        raise DegenerateEstimateError("De Vries estimator with k={0} is degenerate: Hill estimate is 0".format(k))
    gamma = _second_moment(sample, k) / (2 * first)
    return _result_from_gamma("devries", {"k": int(k)}, gamma)


CLASSICAL_ESTIMATORS = {1: hill, 2: pickands, 3: moment, 4: devries}


class Hill(_TailEstimator):
    """
    Scikit-learn style wrapper of the Hill estimator.

    Parameters
    ----------
    k : int
        Number of upper order statistics (default: 100)

    Attributes
    ----------
    result_ : EstimateResult
        The full result
    estimate_ : float
        The estimated extreme-value index gamma
    alpha_ : float
        The estimated tail index
    gamma_ : float
        The estimated extreme-value index
    p_ : float
        The estimate on the p-scale 1 / (1 + gamma)
    """

    def __init__(self, k: int = 100):
        self.k = k

    def _estimate(self, sample: Sample) -> EstimateResult:
        return hill(sample, self.k)


class Pickands(_TailEstimator):
    """
    Scikit-learn style wrapper of the Pickands estimator.

    Parameters
    ----------
    k : int
        Number of upper order statistics, at least 4 (default: 100)
    """

    def __init__(self, k: int = 100):
        self.k = k

    def _estimate(self, sample: Sample) -> EstimateResult:
        return pickands(sample, self.k)


class Moment(_TailEstimator):
    """
    Scikit-learn style wrapper of the moment estimator.

    Parameters
    ----------
    k : int
        Number of upper order statistics (default: 100)
    """

    def __init__(self, k: int = 100):
        self.k = k

    def _estimate(self, sample: Sample) -> EstimateResult:
        return moment(sample, self.k)


class DeVries(_TailEstimator):
    """
    Scikit-learn style wrapper of the estimator of de Vries.

    Parameters
    ----------
    k : int
        Number of upper order statistics (default: 100)
    """

    def __init__(self, k: int = 100):
        self.k = k

    def _estimate(self, sample: Sample) -> EstimateResult:
        return devries(sample, self.k)
