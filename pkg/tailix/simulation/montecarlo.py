import json
import time
import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from tailix._errors import InvalidParametersError, TuningError, DegenerateTuningError, DegenerateEstimateError, \
    DomainError, InsufficientDataError
from tailix.distributions.hall import HallDistribution
from tailix.estimators import Sample, EstimateResult, hill, pickands, moment, devries, dpr, gdpr, qi, kernel_mean, \
    kernel_variance, kernel_values
from tailix.estimators.block_maxima import KERNELS
from tailix.theory import CLASSICAL_METHODS, SecondOrderParams, dpr_asymptotics, classical_asymptotics, rmmse, \
    is_degenerate
from tailix.simulation.kstest import ks_normal
from tailix.utils._random import mix_seed
from tailix.utils.io import to_json_text

"""
Constants
"""
REPORT_SCHEMA = "tailix-report-v1"
MOMENTS_CONVENTION = "valid-replicates-only"
_ESTIMATORS = {"hill": hill, "pickands": pickands, "moment": moment, "devries": devries, "dpr": dpr, "gdpr": gdpr,
               "qi": qi}
METHODS = tuple(_ESTIMATORS.keys())
_CLASSICAL_INDEX = {method: j for j, method in CLASSICAL_METHODS.items()}
_K_MIN = {"hill": 1, "pickands": 4, "moment": 2, "devries": 2}


class ExperimentConfig():
    """
    Configuration of a Monte Carlo experiment: the model, the sample size, the estimator with its tuning rule,
    the number of replicates and the base seed.

    Parameters
    ----------
    distribution : HallDistribution
        The distribution the samples are drawn from
    n_obs : int
        The sample size N of each replicate
    method : str
        The estimator, one of 'hill', 'pickands', 'moment', 'devries', 'dpr', 'gdpr' and 'qi'
    tuning : int / str
        The number of upper order statistics k (classical estimators) or the block size m (block estimators).
        'optimal' uses k = round(k_opt) or m = m_opt_int from the asymptotic theory. Only available for 'dpr' and the
        classical estimators (default: 'optimal')
    replicates : int
        The number of replicates R (default: 1)
    base_seed : int
        The base seed. Replicate r uses the seed mix_seed(base_seed, r) (default: 0)
    scale : str
        'native' compares the estimates with the truth on the native scale of the estimator,
        'p' transforms every estimate to p = alpha / (alpha + 1) first. Classical estimates gamma <= -1 have no
        p-value and count as degenerate (default: 'native')
    kernel : str
        The kernel of 'gdpr' (default: 'power')
    r : float
        The exponent of the power kernels of 'gdpr' (default: 1.)
    s_top : int
        The number of top values per block of 'qi' (default: 1)
    resolution : float
        If not None, simulated values are rounded up to multiples of resolution, which produces ties (default: None)
    clt_mean : float
        Mean of the normal reference distribution of the standardized block estimates. If None, mu / sigma from the
        asymptotic theory is used for 'dpr' with optimal tuning and 0 otherwise (default: None)
    n_jobs : int
        Number of parallel joblib workers. The result does not depend on it (default: 1)
    debug : bool
        If true, additional information will be printed to the console (default: False)
    """

    def __init__(self, distribution: HallDistribution, n_obs: int, method: str, tuning="optimal", replicates: int = 1,
                 base_seed: int = 0, scale: str = "native", kernel: str = "power", r: float = 1., s_top: int = 1,
                 resolution: float = None, clt_mean: float = None, n_jobs: int = 1, debug: bool = False):
        assert isinstance(distribution, HallDistribution), "distribution must be a HallDistribution"
        if method not in METHODS:
            raise InvalidParametersError("method must be one of {0}, got {1}".format(METHODS, method))
        if int(n_obs) != n_obs or n_obs < 2:
            raise InvalidParametersError("n_obs must be an integer >= 2, got {0}".format(n_obs))
        if int(replicates) != replicates or replicates < 1:
            raise InvalidParametersError("replicates must be a positive integer, got {0}".format(replicates))
        if tuning == "optimal":
            if method not in ("dpr",) + tuple(_K_MIN.keys()):
                raise InvalidParametersError("Optimal tuning is not available for {0}".format(method))
        elif isinstance(tuning, str) or int(tuning) != tuning:
            raise InvalidParametersError("tuning must be an integer or 'optimal', got {0}".format(tuning))
        if method == "gdpr" and (kernel not in KERNELS or (kernel != "log" and not r > 0)):
            raise InvalidParametersError("Invalid kernel {0} with exponent r={1}".format(kernel, r))
        if scale not in ("native", "p"):
            raise InvalidParametersError("scale must be 'native' or 'p', got {0}".format(scale))
        if resolution is not None and not resolution > 0:
            raise InvalidParametersError("resolution must be positive, got {0}".format(resolution))
        self.distribution = distribution
        self.n_obs = int(n_obs)
        self.method = method
        self.tuning = tuning if tuning == "optimal" else int(tuning)
        self.replicates = int(replicates)
        self.base_seed = int(base_seed)
        self.scale = scale
        self.kernel = kernel
        self.r = r
        self.s_top = s_top
        self.resolution = resolution
        self.clt_mean = clt_mean
        self.n_jobs = n_jobs
        self.debug = debug

    def to_dict(self, tuning: dict = None) -> dict:
        """
        The configuration as a dictionary (without n_jobs and debug, which do not change the result).

        Parameters
        ----------
        tuning : dict
            The resolved tuning parameters. If None, resolve_tuning is called (default: None)

        Returns
        -------
        config : dict
            The configuration. beta is None for the pure Pareto case
        """
        d = self.distribution
        return {"distribution": {"c1": d.c1, "c2": d.c2, "alpha": d.alpha,
                                 "beta": None if np.isinf(d.beta) else d.beta},
                "n_obs": self.n_obs,
                "method": self.method,
                "tuning_rule": "optimal" if self.tuning == "optimal" else "explicit",
                "tuning": resolve_tuning(self) if tuning is None else tuning,
                "replicates": self.replicates,
                "base_seed": self.base_seed,
                "scale": self.scale,
                "resolution": self.resolution}


def _second_order_params(cfg: ExperimentConfig) -> SecondOrderParams:
    if cfg.distribution.is_pareto:
        raise DegenerateTuningError("No optimal tuning exists for the pure Pareto case (no second order term)")
    return SecondOrderParams.from_distribution(cfg.distribution)


def resolve_tuning(cfg: ExperimentConfig) -> dict:
    """
    Get the keyword arguments of the estimator call, i.e. k for the classical estimators, m for 'dpr',
    m, kernel and r for 'gdpr' and m and s_top for 'qi'.
    For the 'optimal' rule m = m_opt_int (dpr_asymptotics) or k = round(k_opt) (classical_asymptotics).

    Parameters
    ----------
    cfg : ExperimentConfig
        The configuration

    Returns
    -------
    tuning : dict
        The tuning parameters
    """
    if cfg.tuning == "optimal":
        params = _second_order_params(cfg)
        if cfg.method == "dpr":
            value = dpr_asymptotics(params, cfg.n_obs).m_opt_int
        else:
            value = classical_asymptotics(_CLASSICAL_INDEX[cfg.method], params, cfg.n_obs).k_opt
            value = value if is_degenerate(value) else int(np.floor(value + 0.5))
        if is_degenerate(value):
            raise DegenerateTuningError("The optimal tuning of {0} is degenerate for {1}".format(cfg.method,
                                                                                                cfg.distribution))
    else:
        value = cfg.tuning
    if cfg.method in _K_MIN:
        if value < _K_MIN[cfg.method] or value > cfg.n_obs - 1:
            raise TuningError("k={0} is outside of [{1}, {2}]".format(value, _K_MIN[cfg.method], cfg.n_obs - 1))
        return {"k": value}
    if value < 2 or value > cfg.n_obs:
        raise TuningError("m={0} is outside of [2, {1}]".format(value, cfg.n_obs))
    if cfg.method == "gdpr":
        return {"m": value, "kernel": cfg.kernel, "r": float(cfg.r)}
    if cfg.method == "qi":
        return {"m": value, "s_top": int(cfg.s_top)}
    return {"m": value}


def _truth(cfg: ExperimentConfig) -> float:
    alpha = cfg.distribution.alpha
    if cfg.scale == "p" or cfg.method == "dpr":
        return alpha / (alpha + 1)
    if cfg.method == "gdpr":
        return kernel_mean(cfg.kernel, alpha, cfg.r)
    return 1. / alpha


def _simulate_values(cfg: ExperimentConfig, seed: int) -> np.ndarray:
    values = cfg.distribution.sample_values(seed, cfg.n_obs)
    if cfg.resolution is not None:
        values = np.ceil(values / cfg.resolution) * cfg.resolution
    return values


def _block_variance(cfg: ExperimentConfig, tuning: dict, result: EstimateResult) -> float:
    """
    Sample variance (ddof=1) of f(kappa_i) over the blocks of one replicate. Estimates sigma^2 for 'dpr' and Var f(W)
    for 'gdpr'. None for the other estimators and for a single block.
    """
    if cfg.method not in ("dpr", "gdpr") or result.kappa is None or result.kappa.shape[0] < 2:
        return None
    kernel, r = ("power", 1.) if cfg.method == "dpr" else (tuning["kernel"], tuning["r"])
    return float(np.var(kernel_values(kernel, result.kappa, r), ddof=1))


def _run_replicate(cfg: ExperimentConfig, tuning: dict, index: int) -> (float, float, float):
    """
    Simulate replicate number index and apply the estimator.

    Parameters
    ----------
    cfg : ExperimentConfig
        The configuration
    tuning : dict
        The resolved tuning parameters
    index : int
        The replicate index

    Returns
    -------
    tuple : (float, float, float)
        The estimate on the scale of the experiment (None if degenerate),
        The estimate on the native scale (None if degenerate),
        The variance of f(kappa_i) over the blocks (None if not a block ratio estimator)
    """
    seed = mix_seed(cfg.base_seed, index)
    sample = Sample(_simulate_values(cfg, seed), seed=seed)
    try:
        result = _ESTIMATORS[cfg.method](sample, **tuning)
    except DegenerateEstimateError as e:
        if cfg.debug:
            print("[run_experiment] replicate {0} is degenerate: {1}".format(index, e))
        return None, None, None
    value = result.p_hat if cfg.scale == "p" else result.native
    if value is None or not np.isfinite(value):
        if cfg.debug:
            print("[run_experiment] replicate {0} has no value on the p-scale (gamma = {1})".format(index,
                                                                                                 result.gamma_hat))
        return None, None, None
    return float(value), float(result.native), _block_variance(cfg, tuning, result)


class ExperimentReport():
    """
    Result of a Monte Carlo experiment.
    All moments are computed over the valid replicates only. Degenerate replicates are counted and excluded.
    The moments satisfy mse = bias^2 + variance * (R - 1) / R with R the number of valid replicates.

    Parameters
    ----------
    config : dict
        The configuration (see ExperimentConfig.to_dict)
    truth : float
        The true value of the estimated quantity
    estimates : np.ndarray
        The estimates of the valid replicates in replicate order
    replicate_indices : np.ndarray
        The replicate indices of the valid estimates
    degenerate_replicates : list
        The replicate indices of the degenerate replicates
    standardized : np.ndarray
        The standardized values sqrt(n)(estimate - h) / sigma of the block ratio estimators. None for other
        estimators (default: None)
    clt_mean : float
        The mean of the normal reference distribution of the standardized values (default: 0.)
    block_variances : np.ndarray
        The variances of f(kappa_i) over the blocks of the valid replicates. None for estimators other than the block
        ratio estimators (default: None)
    runtime_seconds : float
        The wall-clock duration of the run. Not part of the JSON document (default: None)

    Attributes
    ----------
    mean : float
        Mean of the estimates (None without valid replicate)
    bias : float
        mean - truth
    variance : float
        Sample variance (ddof=1) of the estimates (None for less than two valid replicates)
    block_variance : float
        Mean of the block_variances. Estimates sigma^2 = n * Var(estimate) already from a single replicate
    mse : float
        Mean of the squared errors
    ks_statistic : float
        Kolmogorov-Smirnov statistic of the standardized values against N(clt_mean, 1) (None if fewer than 50 values)
    ks_p_value : float
        The corresponding p-value
    """

    def __init__(self, config: dict, truth: float, estimates: np.ndarray, replicate_indices: np.ndarray,
                 degenerate_replicates: list, standardized: np.ndarray = None, clt_mean: float = 0.,
                 block_variances: np.ndarray = None, runtime_seconds: float = None):
        self.config = config
        self.truth = float(truth)
        self.estimates = np.asarray(estimates, dtype=np.float64)
        self.replicate_indices = np.asarray(replicate_indices, dtype=np.int64)
        self.degenerate_replicates = [int(i) for i in degenerate_replicates]
        self.standardized = None if standardized is None else np.asarray(standardized, dtype=np.float64)
        self.clt_mean = float(clt_mean)
        self.block_variances = None if block_variances is None else np.asarray(block_variances, dtype=np.float64)
        self.runtime_seconds = runtime_seconds
        n_valid = self.estimates.shape[0]
        self.mean = float(np.mean(self.estimates)) if n_valid > 0 else None
        self.bias = self.mean - self.truth if n_valid > 0 else None
        self.variance = float(np.var(self.estimates, ddof=1)) if n_valid > 1 else None
        self.mse = float(np.mean((self.estimates - self.truth) ** 2)) if n_valid > 0 else None
        self.block_variance = None
        if self.block_variances is not None and self.block_variances.shape[0] > 0:
            self.block_variance = float(np.mean(self.block_variances))
        self.ks_statistic, self.ks_p_value = None, None
        if self.standardized is not None:
            try:
                self.ks_statistic, self.ks_p_value = ks_normal(self.standardized, self.clt_mean)
            except InsufficientDataError:
                pass

    @property
    def n_valid(self) -> int:
        return self.estimates.shape[0]

    @property
    def n_degenerate(self) -> int:
        return len(self.degenerate_replicates)

    def to_dict(self) -> dict:
        return {"schema": REPORT_SCHEMA,
                "config": self.config,
                "truth": self.truth,
                "moments_convention": MOMENTS_CONVENTION,
                "n_valid": self.n_valid,
                "n_degenerate": self.n_degenerate,
                "mean": self.mean,
                "bias": self.bias,
                "variance": self.variance,
                "block_variance": self.block_variance,
                "mse": self.mse,
                "clt_mean": self.clt_mean,
                "ks_statistic": self.ks_statistic,
                "ks_p_value": self.ks_p_value,
                "degenerate_replicates": self.degenerate_replicates,
                "replicate_indices": self.replicate_indices,
                "estimates": self.estimates,
                "standardized": self.standardized,
                "block_variances": self.block_variances}

    def to_json(self) -> str:
        """
        The report as a JSON document (schema 'tailix-report-v1') with floats written with 17 significant digits.
        The wall-clock runtime is not included, identical runs produce identical documents.

        Returns
        -------
        text : str
            The JSON document
        """
        return to_json_text(self.to_dict()) + "\n"

    @classmethod
    def from_json(cls, text: str) -> 'ExperimentReport':
        """
        Restore a report from its JSON document. The summary statistics are recomputed from the stored estimates.

        Parameters
        ----------
        text : str
            The JSON document

        Returns
        -------
        report : ExperimentReport
            The report
        """
        document = json.loads(text)
        if document.get("schema") != REPORT_SCHEMA:
            raise InvalidParametersError("Unknown report schema {0}".format(document.get("schema")))
        return cls(document["config"], document["truth"], document["estimates"], document["replicate_indices"],
                   document["degenerate_replicates"], document["standardized"], document["clt_mean"],
                   document.get("block_variances"))

    def to_dataframe(self) -> pd.DataFrame:
        """
        The valid replicates as a table with columns 'replicate', 'estimate' and, for the block ratio estimators,
        'standardized'.

        Returns
        -------
        table : pd.DataFrame
            The table
        """
        table = pd.DataFrame({"replicate": self.replicate_indices, "estimate": self.estimates})
        if self.standardized is not None:
            table["standardized"] = self.standardized
        return table

    def summary(self) -> str:
        """
        One-line summary with the mean, the mean squared error, the variance across replicates, the mean variance of
        f(kappa_i) over the blocks and the Kolmogorov-Smirnov p-value.

        Returns
        -------
        text : str
            The summary
        """
        return "mean={0} mse={1} variance={2} block_variance={3} ks_p={4} valid={5} degenerate={6}".format(
            *["undefined" if value is None else "{0:.17g}".format(value) for value in
              (self.mean, self.mse, self.variance, self.block_variance, self.ks_p_value)], self.n_valid,
            self.n_degenerate)


def _standardize(cfg: ExperimentConfig, tuning: dict, natives: np.ndarray) -> np.ndarray:
    """
    sqrt(n)(v - h_f(alpha)) / sqrt(Var f(W)) with n = [N/m] blocks. For 'dpr' h = p and Var = sigma^2.
    None if the estimator is not a block ratio estimator or the kernel variance does not exist.
    """
    if cfg.method not in ("dpr", "gdpr"):
        return None
    kernel, r = ("power", 1.) if cfg.method == "dpr" else (tuning["kernel"], tuning["r"])
    try:
        center = kernel_mean(kernel, cfg.distribution.alpha, r)
        variance = kernel_variance(kernel, cfg.distribution.alpha, r)
    except DomainError:
        return None
    n_blocks = cfg.n_obs // tuning["m"]
    return np.sqrt(n_blocks) * (natives - center) / np.sqrt(variance)


def _clt_mean(cfg: ExperimentConfig) -> float:
    if cfg.clt_mean is not None:
        return cfg.clt_mean
    if cfg.method == "dpr" and cfg.tuning == "optimal":
        asymptotics = dpr_asymptotics(_second_order_params(cfg), cfg.n_obs)
        return asymptotics.mu / np.sqrt(asymptotics.sigma2)
    return 0.


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """
    Run a Monte Carlo experiment. Replicate r draws N values with the seed mix_seed(base_seed, r) and applies the
    estimator. Replicates are run in parallel with joblib, the results are assembled in replicate order, so the report
    does not depend on n_jobs.
    Since the seeds only depend on base_seed and r, experiments with equal base seeds and sample sizes use common
    random numbers.

    Parameters
    ----------
    cfg : ExperimentConfig
        The configuration

    Returns
    -------
    report : ExperimentReport
        The report
    """
    start_time = time.perf_counter()
    tuning = resolve_tuning(cfg)
    truth = _truth(cfg)
    if cfg.debug:
        print("[run_experiment] {0} with tuning {1}, N={2}, R={3}".format(cfg.method, tuning, cfg.n_obs,
                                                                          cfg.replicates))
    outputs = Parallel(n_jobs=cfg.n_jobs)(
        delayed(_run_replicate)(cfg, tuning, index) for index in range(cfg.replicates))
    valid = [index for index, (value, _, _) in enumerate(outputs) if value is not None]
    degenerate = [index for index, (value, _, _) in enumerate(outputs) if value is None]
    estimates = np.array([outputs[index][0] for index in valid], dtype=np.float64)
    natives = np.array([outputs[index][1] for index in valid], dtype=np.float64)
    block_variances = None
    if cfg.method in ("dpr", "gdpr") and all(outputs[index][2] is not None for index in valid):
        block_variances = np.array([outputs[index][2] for index in valid], dtype=np.float64)
    standardized = _standardize(cfg, tuning, natives)
    clt_mean = _clt_mean(cfg) if standardized is not None else 0.
    runtime = time.perf_counter() - start_time
    if cfg.debug:
        print("[run_experiment] {0} valid and {1} degenerate replicates in {2:.2f}s".format(len(valid),
                                                                                         len(degenerate), runtime))
    return ExperimentReport(cfg.to_dict(tuning), truth, estimates, valid, degenerate, standardized, clt_mean,
                            block_variances, runtime)


def mse_ratio_experiment(distribution: HallDistribution, n_obs: int, j: int, replicates: int, base_seed: int,
                         n_jobs: int = 1, debug: bool = False) -> (float, float):
    """
    Compare the empirical mean squared errors of the block ratio estimator at m_opt and of the classical estimator j at
    k_opt on the p-scale. Classical estimates are transformed by p = 1 / (1 + gamma). Both estimators are applied to
    the same replicate samples (common random numbers).

    Parameters
    ----------
    distribution : HallDistribution
        The distribution (finite beta)
    n_obs : int
        The sample size N
    j : int
        The classical estimator (1: Hill, 2: Pickands, 3: moment, 4: de Vries)
    replicates : int
        The number of replicates R
    base_seed : int
        The base seed
    n_jobs : int
        Number of parallel joblib workers (default: 1)
    debug : bool
        If true, additional information will be printed to the console (default: False)

    Returns
    -------
    tuple : (float, float)
        The empirical ratio MSE(dpr) / MSE(classical),
        The limit rmmse(j, alpha, beta)
    """
    if j not in CLASSICAL_METHODS:
        raise InvalidParametersError("j must be in {1, 2, 3, 4}, got " + str(j))
    if distribution.is_pareto:
        raise DegenerateTuningError("No optimal tuning exists for the pure Pareto case (no second order term)")
    theoretical = rmmse(j, distribution.alpha, distribution.beta)
    if is_degenerate(theoretical):
        raise DegenerateTuningError("rmmse({0}) is degenerate for alpha={1}, beta={2}".format(j, distribution.alpha,
                                                                                            distribution.beta))
    dpr_report = run_experiment(ExperimentConfig(distribution, n_obs, "dpr", "optimal", replicates, base_seed,
                                                 scale="p", n_jobs=n_jobs, debug=debug))
    classical_report = run_experiment(ExperimentConfig(distribution, n_obs, CLASSICAL_METHODS[j], "optimal",
                                                       replicates, base_seed, scale="p", n_jobs=n_jobs, debug=debug))
    if dpr_report.mse is None or classical_report.mse is None:
        raise DegenerateEstimateError("All replicates of one of the estimators are degenerate")
    if debug:
        print("[mse_ratio_experiment] mse dpr={0}, mse {1}={2}".format(dpr_report.mse, CLASSICAL_METHODS[j],
                                                                      classical_report.mse))
    return dpr_report.mse / classical_report.mse, theoretical
