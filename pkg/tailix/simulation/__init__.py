from .kstest import kolmogorov_survival, ks_normal
from .montecarlo import METHODS, REPORT_SCHEMA, ExperimentConfig, ExperimentReport, resolve_tuning, run_experiment, \
    mse_ratio_experiment

__all__ = ['kolmogorov_survival',
           'ks_normal',
           'METHODS',
           'REPORT_SCHEMA',
           'ExperimentConfig',
           'ExperimentReport',
           'resolve_tuning',
           'run_experiment',
           'mse_ratio_experiment']
