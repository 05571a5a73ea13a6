import numpy as np
from typing import NamedTuple
from sklearn.base import BaseEstimator
from tailix._errors import DomainError, PositivityError


class Sample():
    """
    Container for a sample of positive observations X_1, ..., X_N.
    The values are stored as a read-only float64 array in their original order (block estimators depend on it).
    The descending order statistics are computed lazily on first access and cached.

    Parameters
    ----------
    values : np.ndarray
        The observations. Must be one-dimensional, finite and strictly positive with at least two entries
    seed : int
        The seed the sample was generated with. None if the sample was not simulated (default: None)
    source : str
        Description of the origin of the data, e.g. a file path (default: None)

    Attributes
    ----------
    values : np.ndarray
        The observations in their original order
    n_obs : int
        The number of observations N
    seed : int
        The seed used for simulation (provenance)
    source : str
        The origin of the data (provenance)
    """

    def __init__(self, values: np.ndarray, seed: int = None, source: str = None):
        values = np.array(values, dtype=np.float64)
        if values.ndim != 1:
            raise DomainError("A sample must be one-dimensional, got shape {0}".format(values.shape))
        if values.shape[0] < 2:
            raise DomainError("A sample must contain at least two observations, got {0}".format(values.shape[0]))
        not_finite = np.nonzero(~np.isfinite(values))[0]
        if not_finite.shape[0] > 0:
            raise DomainError("Observation {0} is not finite ({1})".format(not_finite[0], values[not_finite[0]]))
        not_positive = np.nonzero(values <= 0)[0]
        if not_positive.shape[0] > 0:
            raise PositivityError(
                "Observation {0} is not positive ({1})".format(not_positive[0], values[not_positive[0]]))
        values.setflags(write=False)
        self._values = values
        self._sorted_view = None
        self.seed = seed
        self.source = source

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def n_obs(self) -> int:
        return self._values.shape[0]

    def __len__(self) -> int:
        return self.n_obs

    def __repr__(self) -> str:
        return "Sample(n_obs={0}, seed={1}, source={2})".format(self.n_obs, self.seed, self.source)

    @property
    def sorted_view(self) -> np.ndarray:
        """
        The descending order statistics X_{N,N} >= X_{N,N-1} >= ... >= X_{N,1}.

        Returns
        -------
        sorted_view : np.ndarray
            Read-only array of the sorted values
        """
        if self._sorted_view is None:
            sorted_view = np.sort(self._values)[::-1].copy()
            sorted_view.setflags(write=False)
            self._sorted_view = sorted_view
        return self._sorted_view

    def top(self, n_top: int) -> np.ndarray:
        """
        Get the n_top largest observations in descending order.
        If the full sorted view has not been computed yet, only the required values are selected using np.partition.

        Parameters
        ----------
        n_top : int
            Number of order statistics to return. Must be in [1, N]

        Returns
        -------
        top : np.ndarray
            The n_top largest values, largest first
        """
        assert 1 <= n_top <= self.n_obs, "n_top must be in [1, {0}], got {1}".format(self.n_obs, n_top)
        if self._sorted_view is not None:
            return self._sorted_view[:n_top]
        cut = self.n_obs - n_top
        selected = np.partition(self._values, cut)[cut:]
        return np.sort(selected)[::-1]

    def scaled(self, factor: float) -> 'Sample':
        """
        Multiply every observation by a positive factor.
        All estimators in this package are invariant under this transformation.

        Parameters
        ----------
        factor : float
            The scale factor A > 0

        Returns
        -------
        sample : Sample
            The scaled sample (same provenance)
        """
        assert factor > 0, "factor must be positive"
        return Sample(self._values * factor, seed=self.seed, source=self.source)


def to_sample(X) -> Sample:
    """
    Convert an array-like input into a Sample. Samples are returned unchanged.
    Two-dimensional arrays with a single column (scikit-learn layout) are flattened.

    Parameters
    ----------
    X : np.ndarray / Sample
        The observations

    Returns
    -------
    sample : Sample
        The sample
    """
    if isinstance(X, Sample):
        return X
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 2 and X.shape[1] == 1:
        X = X[:, 0]
    return Sample(X)


"""
Conversions between the extreme-value index gamma, the tail index alpha and p = alpha / (alpha + 1).
Undefined values are returned as None.
"""


def gamma_to_p(gamma: float) -> float:
    """
    p = 1 / (1 + gamma). Undefined for gamma <= -1.

    Parameters
    ----------
    gamma : float
        The extreme-value index

    Returns
    -------
    p : float
        The p-scale value or None
    """
    if gamma is None or gamma <= -1:
        return None
    return 1. / (1. + gamma)


def gamma_to_alpha(gamma: float) -> float:
    if gamma is None or gamma == 0:
        return None
    return 1. / gamma


def p_to_alpha(p: float) -> float:
    """
    alpha = p / (1 - p). Undefined for p >= 1 and p <= 0.

    Parameters
    ----------
    p : float
        The p-scale value

    Returns
    -------
    alpha : float
        The tail index or None
    """
    if p is None or p >= 1 or p <= 0:
        return None
    return p / (1. - p)


def p_to_gamma(p: float) -> float:
    if p is None or p <= 0:
        return None
    return (1. - p) / p


class EstimateResult(NamedTuple):
    """
    Result of a tail estimator.

    Attributes
    ----------
    method : str
        Identifier of the estimator (hill, pickands, moment, devries, dpr, gdpr, qi)
    tuning : dict
        The tuning parameters, e.g. {"k": 100} or {"m": 50, "kernel": "log"}
    native : float
        The estimate on the native scale of the estimator (gamma for order statistic estimators and qi, p for dpr,
        the kernel mean h_f(alpha) for gdpr)
    alpha_hat : float
        Estimate of the tail index alpha. None if undefined
    gamma_hat : float
        Estimate of the extreme-value index gamma. None if undefined
    p_hat : float
        Estimate of p = alpha / (alpha + 1). None if undefined
    kappa : np.ndarray
        The per-block ratios M^(2) / M^(1). Only set by block estimators (default: None)
    """
    method: str
    tuning: dict
    native: float
    alpha_hat: float
    gamma_hat: float
    p_hat: float
    kappa: np.ndarray = None


def _result_from_gamma(method: str, tuning: dict, gamma: float) -> EstimateResult:
    gamma = float(gamma)
    return EstimateResult(method, tuning, gamma, gamma_to_alpha(gamma), gamma, gamma_to_p(gamma))


def _result_from_p(method: str, tuning: dict, p: float, kappa: np.ndarray = None) -> EstimateResult:
    p = float(p)
    return EstimateResult(method, tuning, p, p_to_alpha(p), p_to_gamma(p), p, kappa)


def _result_from_alpha(method: str, tuning: dict, native: float, alpha: float,
                       kappa: np.ndarray = None) -> EstimateResult:
    alpha = float(alpha)
    return EstimateResult(method, tuning, float(native), alpha, 1. / alpha, alpha / (alpha + 1.), kappa)


class _TailEstimator(BaseEstimator):
    """
    Shared fit logic of the scikit-learn style estimator classes.
    Subclasses implement _estimate(sample) -> EstimateResult.

    Attributes
    ----------
    result_ : EstimateResult
        The full result of the last fit
    estimate_ : float
        The estimate on the native scale of the estimator
    alpha_ : float
        Estimated tail index (None if undefined)
    gamma_ : float
        Estimated extreme-value index (None if undefined)
    p_ : float
        Estimated p = alpha / (alpha + 1) (None if undefined)
    """

    def _estimate(self, sample: Sample) -> EstimateResult:
        raise NotImplementedError

    def fit(self, X: np.ndarray, y: np.ndarray = None) -> '_TailEstimator':
        """
        Compute the estimate on the given observations.

        Parameters
        ----------
        X : np.ndarray
            the given observations, shape (N,) or (N, 1). Can also be a Sample
        y : np.ndarray
            the labels (can be ignored)

        Returns
        -------
        self : _TailEstimator
            this instance of the estimator
        """
        result = self._estimate(to_sample(X))
        self.result_ = result
        self.estimate_ = result.native
        self.alpha_ = result.alpha_hat
        self.gamma_ = result.gamma_hat
        self.p_ = result.p_hat
        return self
