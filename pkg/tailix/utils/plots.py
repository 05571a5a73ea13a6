import matplotlib.pyplot as plt
import matplotlib.patches as mpatches
import numpy as np
import pandas as pd
from tailix._errors import DegenerateEstimateError
from tailix.estimators import Sample, hill, pickands, moment, devries, dpr, qi
from tailix.estimators._base import to_sample

"""
Constants
"""
_PATH_ESTIMATORS = {"hill": hill, "pickands": pickands, "moment": moment, "devries": devries, "dpr": dpr, "qi": qi}
_PATH_SCALES = ("gamma", "alpha", "p")


def plot_region_map(image: np.ndarray, x_range: tuple, y_range: tuple, x_name: str = "alpha", y_name: str = "beta",
                    legend: dict = None, show_plot: bool = True) -> None:
    """
    Plot a map of domination regions given as 8-bit grey-level raster (e.g. RegionGrid.to_image()).
    The first row of the image corresponds to the largest y value.

    Parameters
    ----------
    image : np.ndarray
        The grey levels, array of shape (n_y, n_x) with values in [0, 255]
    x_range : tuple
        (min, max) of the horizontal axis
    y_range : tuple
        (min, max) of the vertical axis
    x_name : str
        Label of the horizontal axis (default: 'alpha')
    y_name : str
        Label of the vertical axis (default: 'beta')
    legend : dict
        Maps region names to grey levels. If None, no legend is shown (default: None)
    show_plot : bool
        Defines whether the plot should directly be plotted (default: True)
    """
    assert image.ndim == 2, "image must be two-dimensional"
    plt.imshow(image, cmap="gray", vmin=0, vmax=255, interpolation="nearest", aspect="auto",
               extent=(x_range[0], x_range[1], y_range[0], y_range[1]))
    plt.xlabel(x_name)
    plt.ylabel(y_name)
    if legend is not None:
        handles = [mpatches.Patch(facecolor=str(level / 255), edgecolor="black", label=name) for name, level in
                   legend.items()]
        plt.legend(handles=handles, loc="upper left")
    if show_plot:
        plt.show()


def plot_bias_curve(curve: pd.DataFrame, chi: float = None, show_plot: bool = True) -> None:
    """
    Plot the normalized bias m^zeta * gamma_m of the block ratio estimator against the block size (log scale).

    Parameters
    ----------
    curve : pd.DataFrame
        The result of bias_curve (columns 'm', 'gamma_m' and 'normalized')
    chi : float
        The limit chi. Plotted as horizontal line if not None (default: None)
    show_plot : bool
        Defines whether the plot should directly be plotted (default: True)
    """
    plt.plot(curve["m"], curve["normalized"], marker="o", label="m^zeta * gamma_m")
    if chi is not None:
        plt.axhline(chi, color="red", linestyle="--", label="chi")
    plt.xscale("log")
    plt.xlabel("m")
    plt.legend()
    if show_plot:
        plt.show()


def plot_estimate_path(sample: Sample, method: str = "hill", tunings: np.ndarray = None, scale: str = "gamma",
                       show_plot: bool = True) -> (np.ndarray, np.ndarray):
    """
    Plot an estimator against its tuning parameter (k for the order statistic estimators, m for 'dpr' and 'qi'),
    e.g. the Hill plot. Degenerate estimates are left out.

    Parameters
    ----------
    sample : Sample
        The sample (array-likes are converted)
    method : str
        The estimator, one of 'hill', 'pickands', 'moment', 'devries', 'dpr' and 'qi' (default: 'hill')
    tunings : np.ndarray
        The tuning values. If None, k = 4, ..., N - 1 or m = 2, ..., N / 10 is used (default: None)
    scale : str
        The plotted quantity, 'gamma', 'alpha' or 'p' (default: 'gamma')
    show_plot : bool
        Defines whether the plot should directly be plotted (default: True)

    Returns
    -------
    tuple : (np.ndarray, np.ndarray)
        The tuning values,
        The estimates (NaN where undefined)
    """
    assert method in _PATH_ESTIMATORS, "method must be one of {0}".format(list(_PATH_ESTIMATORS.keys()))
    assert scale in _PATH_SCALES, "scale must be one of {0}".format(_PATH_SCALES)
    sample = to_sample(sample)
    is_block_method = method in ("dpr", "qi")
    if tunings is None:
        tunings = np.arange(2, max(3, sample.n_obs // 10 + 1)) if is_block_method else np.arange(4, sample.n_obs)
    estimates = np.full(len(tunings), np.nan)
    for i, tuning in enumerate(tunings):
        try:
            result = _PATH_ESTIMATORS[method](sample, int(tuning))
        except DegenerateEstimateError:
            continue
        value = {"gamma": result.gamma_hat, "alpha": result.alpha_hat, "p": result.p_hat}[scale]
        if value is not None:
            estimates[i] = value
    plt.plot(tunings, estimates)
    plt.xlabel("m" if is_block_method else "k")
    plt.ylabel(scale)
    plt.title(method)
    if show_plot:
        plt.show()
    return np.asarray(tunings), estimates
