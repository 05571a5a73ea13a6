import numpy as np
from tailix._errors import InvalidParametersError, InfeasibleTailError, DomainError, NumericError
from tailix.estimators._base import Sample
from tailix.utils._random import make_generator, open_uniforms

"""
Root finder settings of the quantile inversion
"""
_MAX_BRACKET_STEPS = 2100
_MAX_BISECTION_ITERATIONS = 200
_MAX_NEWTON_ITERATIONS = 50
_BISECTION_RELATIVE_WIDTH = 1e-3
_NEWTON_ULPS = 4


def _as_float_array(x) -> (np.ndarray, bool):
    x = np.asarray(x, dtype=np.float64)
    return np.atleast_1d(x), x.ndim == 0


def _unwrap(values: np.ndarray, is_scalar: bool):
    return float(values[0]) if is_scalar else values


class HallDistribution():
    """
    Heavy-tailed distribution of the Hall class with the exact two-term tail
    S(x) = 1 - F(x) = c1 * x^(-alpha) + c2 * x^(-beta) for x >= x0.
    The support start x0 is the unique solution of S(x0) = 1 on the region where S is strictly decreasing.
    The pure Pareto case is represented by c2 = 0 and beta = np.inf.
    Instances are immutable, use make_hall or make_pareto to create them.

    Parameters
    ----------
    c1 : float
        The first tail constant C1 > 0
    c2 : float
        The second tail constant C2 (may be negative)
    alpha : float
        The tail index alpha > 0
    beta : float
        The second-order exponent beta > alpha. np.inf is only allowed for c2 = 0

    Attributes
    ----------
    x0 : float
        The support start
    x_mono : float
        Start of the monotone region of S. 0 if c2 >= 0

    References
    ----------
    Hall, Peter. "On some simple estimates of an exponent of regular variation."
    Journal of the Royal Statistical Society: Series B 44.1 (1982): 37-42.
    """

    def __init__(self, c1: float, c2: float, alpha: float, beta: float):
        c1, c2, alpha, beta = float(c1), float(c2), float(alpha), float(beta)
        if not np.isfinite(c1) or c1 <= 0:
            raise InvalidParametersError("c1 must be positive and finite, got {0}".format(c1))
        if not np.isfinite(c2):
            raise InvalidParametersError("c2 must be finite, got {0}".format(c2))
        if not np.isfinite(alpha) or alpha <= 0:
            raise InvalidParametersError("alpha must be positive and finite, got {0}".format(alpha))
        if np.isnan(beta) or beta <= alpha:
            raise InvalidParametersError("beta must be larger than alpha, got alpha={0}, beta={1}".format(alpha, beta))
        if beta == np.inf and c2 != 0:
            raise InvalidParametersError("beta = inf is only allowed for the pure Pareto case c2 = 0")
        self._c1 = c1
        self._c2 = c2
        self._alpha = alpha
        self._beta = beta
        if c2 < 0:
            self._x_mono = (-c2 * beta / (c1 * alpha)) ** (1. / (beta - alpha))
            if self._survival(np.array([self._x_mono]))[0] < 1:
                raise InfeasibleTailError(
                    "No support start exists for c1={0}, c2={1}, alpha={2}, beta={3}: the survival function stays "
                    "below 1 on its monotone region".format(c1, c2, alpha, beta))
        else:
            self._x_mono = 0.
        self._x0 = float(self._invert(np.array([1.]), self._x_mono)[0])
        self._x0 = max(self._x0, self._x_mono)

    @property
    def c1(self) -> float:
        return self._c1

    @property
    def c2(self) -> float:
        return self._c2

    @property
    def alpha(self) -> float:
        return self._alpha

    @property
    def beta(self) -> float:
        return self._beta

    @property
    def x0(self) -> float:
        return self._x0

    @property
    def x_mono(self) -> float:
        return self._x_mono

    @property
    def is_pareto(self) -> bool:
        return self._c2 == 0

    def __repr__(self) -> str:
        return "HallDistribution(c1={0}, c2={1}, alpha={2}, beta={3}, x0={4})".format(self._c1, self._c2, self._alpha,
                                                                                      self._beta, self._x0)

    def __eq__(self, other) -> bool:
        return isinstance(other, HallDistribution) and (self._c1, self._c2, self._alpha, self._beta) == (
            other._c1, other._c2, other._alpha, other._beta)

    def __hash__(self) -> int:
        return hash((self._c1, self._c2, self._alpha, self._beta))

    def _survival(self, x: np.ndarray) -> np.ndarray:
        if self.is_pareto:
            return self._c1 * x ** -self._alpha
        return self._c1 * x ** -self._alpha + self._c2 * x ** -self._beta

    def _density(self, x: np.ndarray) -> np.ndarray:
        if self.is_pareto:
            return self._c1 * self._alpha * x ** (-self._alpha - 1)
        return self._c1 * self._alpha * x ** (-self._alpha - 1) + self._c2 * self._beta * x ** (-self._beta - 1)

    def _check_support(self, x: np.ndarray) -> None:
        outside = np.nonzero(~(x >= self._x0))[0]
        if outside.shape[0] > 0:
            raise DomainError("x = {0} is outside the support [{1}, inf)".format(x[outside[0]], self._x0))

    def survival(self, x):
        """
        The survival function S(x) = c1 * x^(-alpha) + c2 * x^(-beta).

        Parameters
        ----------
        x : float / np.ndarray
            Position(s) with x >= x0

        Returns
        -------
        survival : float / np.ndarray
            S(x) in [0, 1]
        """
        x, is_scalar = _as_float_array(x)
        self._check_support(x)
        return _unwrap(np.clip(self._survival(x), 0., 1.), is_scalar)

    def cdf(self, x):
        """
        The distribution function F(x) = 1 - S(x).

        Parameters
        ----------
        x : float / np.ndarray
            Position(s) with x >= x0

        Returns
        -------
        cdf : float / np.ndarray
            F(x) in [0, 1]
        """
        x, is_scalar = _as_float_array(x)
        self._check_support(x)
        return _unwrap(1. - np.clip(self._survival(x), 0., 1.), is_scalar)

    def density(self, x):
        """
        The density f(x) = c1 * alpha * x^(-alpha-1) + c2 * beta * x^(-beta-1).

        Parameters
        ----------
        x : float / np.ndarray
            Position(s) with x >= x0

        Returns
        -------
        density : float / np.ndarray
            f(x) >= 0
        """
        x, is_scalar = _as_float_array(x)
        self._check_support(x)
        return _unwrap(self._density(x), is_scalar)

    def quantile(self, u, method: str = "auto"):
        """
        Inverse of the survival function, i.e. x with S(x) = u.
        Closed forms are used for c2 = 0 (x = (c1/u)^(1/alpha)) and for beta = 2 * alpha (quadratic in x^(-alpha)).
        Otherwise, a bracket is grown geometrically starting at the Pareto guess, narrowed by bisection in log space and
        polished by a safeguarded Newton iteration.

        Parameters
        ----------
        u : float / np.ndarray
            Survival probabilities in (0, 1]
        method : str
            'auto' uses the closed forms where available, 'root' always uses the root finder (default: 'auto')

        Returns
        -------
        quantile : float / np.ndarray
            The positions x >= x0

        Raises
        ------
        NumericError
            If a quantile is not representable as float64, i.e. roughly (c1 / u)^(1/alpha) > 1.8e308.
            For the smallest uniform used by sample_values (about 1.1e-16) this happens for alpha below
            (36.7 + ln(c1)) / 709.8, e.g. alpha < 0.052 if c1 = 1
        """
        assert method in ["auto", "root"], "method must be 'auto' or 'root'"
        u, is_scalar = _as_float_array(u)
        invalid = np.nonzero(~((u > 0) & (u <= 1)))[0]
        if invalid.shape[0] > 0:
            raise DomainError("u = {0} is outside of (0, 1]".format(u[invalid[0]]))
        with np.errstate(over="ignore"):
            if method == "auto" and self.is_pareto:
                x = (self._c1 / u) ** (1. / self._alpha)
            elif method == "auto" and self._beta == 2 * self._alpha:
                y = 2 * u / (self._c1 + np.sqrt(self._c1 ** 2 + 4 * self._c2 * u))
                x = y ** (-1. / self._alpha)
            else:
                x = self._invert(u, self._x0)
        self._check_representable(u, x)
        x = np.maximum(x, self._x0)
        x[u == 1] = self._x0
        return _unwrap(x, is_scalar)

    def _check_representable(self, u: np.ndarray, x: np.ndarray) -> None:
        overflow = np.nonzero(~np.isfinite(x))[0]
        if overflow.shape[0] > 0:
            raise NumericError("The quantile at u = {0} exceeds the float64 range for alpha = {1}".format(
                u[overflow[0]], self._alpha))

    def _invert(self, u: np.ndarray, lower: float) -> np.ndarray:
        """
        Solve S(x) = u for x >= lower, where S is strictly decreasing on [lower, inf) and S(lower) >= u.

        Parameters
        ----------
        u : np.ndarray
            The target values
        lower : float
            Lower end of the monotone region

        Returns
        -------
        x : np.ndarray
            The solutions
        """
        if self.is_pareto:
            return (self._c1 / u) ** (1. / self._alpha)
        # Grow bracket [lo, hi] around the Pareto guess until S(lo) >= u >= S(hi)
        with np.errstate(over="ignore"):
            guess = np.maximum((self._c1 / u) ** (1. / self._alpha), lower)
        self._check_representable(u, guess)
        lo = guess.copy()
        hi = guess.copy()
        for _ in range(_MAX_BRACKET_STEPS):
            grow = self._survival(hi) > u
            shrink = (self._survival(lo) < u) & (lo > lower)
            if not np.any(grow) and not np.any(shrink):
                break
            hi[grow] *= 2
            self._check_representable(u, hi)
            lo[shrink] = np.maximum(lo[shrink] / 2, lower)
        else:
            raise NumericError("Could not bracket the quantile")
        # Bisection in log space
        for _ in range(_MAX_BISECTION_ITERATIONS):
            wide = hi > lo * (1 + _BISECTION_RELATIVE_WIDTH)
            if not np.any(wide):
                break
            mid = np.sqrt(lo[wide]) * np.sqrt(hi[wide])
            above = self._survival(mid) > u[wide]
            lo[wide] = np.where(above, mid, lo[wide])
            hi[wide] = np.where(above, hi[wide], mid)
        # Newton polish, S'(x) = -f(x)
        eps = np.finfo(np.float64).eps
        x = np.sqrt(lo) * np.sqrt(hi)
        for _ in range(_MAX_NEWTON_ITERATIONS):
            residual = self._survival(x) - u
            density = self._density(x)
            # Stop once the Newton step is a few ulp of x or S(x) matches u up to its own rounding
            done = (np.abs(residual) <= _NEWTON_ULPS * eps * np.abs(density) * x) | \
                   (np.abs(residual) <= _NEWTON_ULPS * eps * u) | (hi - lo <= _NEWTON_ULPS * eps * hi)
            if np.all(done):
                return x
            lo = np.where(residual > 0, np.maximum(lo, x), lo)
            hi = np.where(residual < 0, np.minimum(hi, x), hi)
            with np.errstate(divide="ignore", invalid="ignore"):
                step = x + residual / density
            outside = ~((step > lo) & (step < hi)) | ~np.isfinite(step)
            step[outside] = 0.5 * (lo[outside] + hi[outside])
            x = np.where(done, x, step)
        raise NumericError("Quantile inversion did not converge within {0} Newton iterations".format(
            _MAX_NEWTON_ITERATIONS))

    def sample_values(self, seed: int, n: int) -> np.ndarray:
        """
        Draw n i.i.d. observations by inverse transform sampling.
        The uniforms come from numpy's PCG64 generator seeded with seed and are mapped to the open interval (0, 1)
        (see tailix.utils._random.open_uniforms). Identical (seed, n, distribution) reproduce bit-identical values.

        Parameters
        ----------
        seed : int
            64-bit seed
        n : int
            Number of observations (>= 1)

        Returns
        -------
        values : np.ndarray
            Array of shape (n,)
        """
        if n < 1:
            raise InvalidParametersError("n must be at least 1, got {0}".format(n))
        u = open_uniforms(make_generator(seed), n)
        return self.quantile(u)

    def sample(self, seed: int, n: int) -> Sample:
        """
        Draw n i.i.d. observations (see sample_values) and wrap them into a Sample carrying the seed as provenance.

        Parameters
        ----------
        seed : int
            64-bit seed
        n : int
            Number of observations (>= 2, the minimal size of a Sample)

        Returns
        -------
        sample : Sample
            The simulated sample
        """
        return Sample(self.sample_values(seed, n), seed=seed, source=repr(self))

    def scaled(self, factor: float) -> 'HallDistribution':
        """
        Distribution of A * X: (c1, c2) -> (c1 * A^alpha, c2 * A^beta), x0 -> A * x0.

        Parameters
        ----------
        factor : float
            The scale factor A > 0

        Returns
        -------
        distribution : HallDistribution
            The scaled distribution
        """
        if factor <= 0:
            raise InvalidParametersError("factor must be positive, got {0}".format(factor))
        c2 = 0. if self.is_pareto else self._c2 * factor ** self._beta
        return HallDistribution(self._c1 * factor ** self._alpha, c2, self._alpha, self._beta)

    def invariant_ratio(self) -> float:
        """
        The ratio c1^beta / c2^alpha, which is unchanged by scaled().
        For negative c2 the sign is carried outside: -c1^beta / |c2|^alpha. np.inf for the pure Pareto case.

        Returns
        -------
        ratio : float
            The invariant ratio
        """
        if self.is_pareto:
            return np.inf
        return np.sign(self._c2) * self._c1 ** self._beta / np.abs(self._c2) ** self._alpha


def make_hall(c1: float, c2: float, alpha: float, beta: float) -> HallDistribution:
    """
    Create a Hall-class distribution with survival function S(x) = c1 * x^(-alpha) + c2 * x^(-beta).

    Parameters
    ----------
    c1 : float
        The first tail constant C1 > 0
    c2 : float
        The second tail constant C2
    alpha : float
        The tail index alpha > 0
    beta : float
        The second-order exponent beta > alpha. np.inf marks the pure Pareto case and requires c2 = 0

    Returns
    -------
    distribution : HallDistribution
        The distribution with computed support start x0
    """
    return HallDistribution(c1, c2, alpha, beta)


def make_pareto(c1: float, alpha: float) -> HallDistribution:
    """
    Create the pure Pareto distribution S(x) = c1 * x^(-alpha), x >= c1^(1/alpha).

    Parameters
    ----------
    c1 : float
        The tail constant C1 > 0
    alpha : float
        The tail index alpha > 0

    Returns
    -------
    distribution : HallDistribution
        The distribution with c2 = 0 and beta = np.inf
    """
    return HallDistribution(c1, 0., alpha, np.inf)
