from .asymptotics import CLASSICAL_METHODS, DEGENERATE, is_degenerate, SecondOrderParams, ParamViews, param_views, \
    params_from_gamma_rho, gamma_rho_to_alpha_beta, alpha_beta_to_gamma_rho, dpr_sigma2, dpr_chi, dpr_amse_curve, \
    DprAsymptotics, dpr_asymptotics, classical_bias_constant, classical_sigma2, second_order_function, to_p_scale, \
    ClassicalAsymptotics, classical_asymptotics, eta, rmmse
from .bias_oracle import QuadratureSpec, exact_mean_dpr, bias_curve

__all__ = ['CLASSICAL_METHODS',
           'DEGENERATE',
           'is_degenerate',
           'SecondOrderParams',
           'ParamViews',
           'param_views',
           'params_from_gamma_rho',
           'gamma_rho_to_alpha_beta',
           'alpha_beta_to_gamma_rho',
           'dpr_sigma2',
           'dpr_chi',
           'dpr_amse_curve',
           'DprAsymptotics',
           'dpr_asymptotics',
           'classical_bias_constant',
           'classical_sigma2',
           'second_order_function',
           'to_p_scale',
           'ClassicalAsymptotics',
           'classical_asymptotics',
           'eta',
           'rmmse',
           'QuadratureSpec',
           'exact_mean_dpr',
           'bias_curve']
