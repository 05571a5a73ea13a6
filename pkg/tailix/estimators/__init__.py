from ._base import Sample, EstimateResult, gamma_to_p, gamma_to_alpha, p_to_alpha, p_to_gamma
from .order_statistics import hill, pickands, moment, devries, Hill, Pickands, Moment, DeVries
from .block_maxima import BlockView, block_partition, kernel_mean, kernel_variance, kernel_values, dpr, gdpr, qi, DPR, \
    GDPR, Qi

__all__ = ['Sample',
           'EstimateResult',
           'gamma_to_p',
           'gamma_to_alpha',
           'p_to_alpha',
           'p_to_gamma',
           'hill',
           'pickands',
           'moment',
           'devries',
           'Hill',
           'Pickands',
           'Moment',
           'DeVries',
           'BlockView',
           'block_partition',
           'kernel_mean',
           'kernel_variance',
           'kernel_values',
           'dpr',
           'gdpr',
           'qi',
           'DPR',
           'GDPR',
           'Qi']
