import numpy as np
import pandas as pd
from PIL import Image
from joblib import Parallel, delayed
from tailix._errors import InvalidParametersError
from tailix.theory import rmmse, gamma_rho_to_alpha_beta
from tailix.utils.io import write_csv

"""
Constants
"""
PLANES = ("alpha-beta", "gamma-rho")
AXIS_NAMES = {"alpha-beta": ("alpha", "beta"), "gamma-rho": ("gamma", "rho")}
DEFAULT_RANGES = {"alpha-beta": ((0.05, 5.), (0.05, 20.)), "gamma-rho": ((0.05, 5.), (-5., -0.05))}
DEFAULT_STEPS = 400
# Default extent beta <= 4 alpha of the (alpha, beta) plane
DEFAULT_MAX_BETA_RATIO = 4.
COMPARISONS = ("both", "pickands", "moment")
LABELS = ("invalid", "dpr-dominates", "pickands-dominates", "moment-dominates", "undefined")
# 8-bit grey levels of the PGM export
GREY_LEVELS = {"invalid": 255, "dpr-dominates": 96, "pickands-dominates": 0, "moment-dominates": 192,
               "undefined": 160}


def _label_cells(rmmse_2: np.ndarray, rmmse_3: np.ndarray, valid: np.ndarray, versus: str = "both") -> np.ndarray:
    """
    Against a single competitor the block ratio estimator dominates if its ratio is below 1 and the competitor
    dominates if it is above 1.
    Against both, the block ratio estimator dominates if rmmse_2 < 1 and rmmse_3 < 1. Pickands dominates if
    rmmse_2 > 1 and rmmse_2 > rmmse_3, the moment estimator if rmmse_3 > 1 and rmmse_3 > rmmse_2.
    Cells with a non-finite ratio (degenerate locus) or an exact tie are undefined.
    """
    labels = np.full(rmmse_2.shape, "undefined", dtype=object)
    if versus == "pickands":
        finite = valid & np.isfinite(rmmse_2)
        labels[finite & (rmmse_2 < 1)] = "dpr-dominates"
        labels[finite & (rmmse_2 > 1)] = "pickands-dominates"
    elif versus == "moment":
        finite = valid & np.isfinite(rmmse_3)
        labels[finite & (rmmse_3 < 1)] = "dpr-dominates"
        labels[finite & (rmmse_3 > 1)] = "moment-dominates"
    else:
        finite = valid & np.isfinite(rmmse_2) & np.isfinite(rmmse_3)
        labels[finite & (rmmse_2 < 1) & (rmmse_3 < 1)] = "dpr-dominates"
        labels[finite & (rmmse_2 > 1) & (rmmse_2 > rmmse_3)] = "pickands-dominates"
        labels[finite & (rmmse_3 > 1) & (rmmse_3 > rmmse_2)] = "moment-dominates"
    labels[~valid] = "invalid"
    return labels


def _region_row(plane: str, x_axis: np.ndarray, y_value: float, versus: str,
                max_beta_ratio: float = np.inf) -> (np.ndarray, np.ndarray, np.ndarray):
    """
    Evaluate RMMSE(2) and RMMSE(3) for one row of the grid. Invalid cells get NaN.

    Parameters
    ----------
    plane : str
        'alpha-beta' or 'gamma-rho'
    x_axis : np.ndarray
        The values of the horizontal axis
    y_value : float
        The value of the vertical axis
    versus : str
        The competitors of the block ratio estimator, 'both', 'pickands' or 'moment'
    max_beta_ratio : float
        Cells of the (alpha, beta) plane with beta > max_beta_ratio * alpha are invalid (default: np.inf)

    Returns
    -------
    tuple : (np.ndarray, np.ndarray, np.ndarray)
        RMMSE(2) per cell,
        RMMSE(3) per cell,
        The labels
    """
    y_values = np.full(x_axis.shape, y_value)
    if plane == "alpha-beta":
        valid = (x_axis > 0) & (y_values > x_axis) & (y_values <= max_beta_ratio * x_axis)
        alpha, beta = x_axis, y_values
    else:
        valid = (x_axis > 0) & (y_values < 0)
        alpha, beta = gamma_rho_to_alpha_beta(np.where(valid, x_axis, 1.), np.where(valid, y_values, -1.))
    rmmse_2 = np.full(x_axis.shape, np.nan)
    rmmse_3 = np.full(x_axis.shape, np.nan)
    if np.any(valid):
        rmmse_2[valid] = rmmse(2, alpha[valid], beta[valid])
        rmmse_3[valid] = rmmse(3, alpha[valid], beta[valid])
    return rmmse_2, rmmse_3, _label_cells(rmmse_2, rmmse_3, valid, versus)


class RegionGrid():
    """
    Domination regions of the block ratio, Pickands and moment estimators on a regular grid, either in the
    (alpha, beta) plane or in the (gamma, rho) plane. Only cells with 0 < alpha < beta (gamma > 0, rho < 0) are
    evaluated, all others are 'invalid'. By default the (alpha, beta) plane is further cut to beta <= 4 alpha.
    The ratios only depend on (alpha, beta), not on c1 and c2.

    Parameters
    ----------
    plane : str
        'alpha-beta' or 'gamma-rho'
    x_axis : np.ndarray
        The values of the horizontal axis (alpha or gamma)
    y_axis : np.ndarray
        The values of the vertical axis (beta or rho)
    rmmse_2 : np.ndarray
        RMMSE(2), array of shape (n_y, n_x)
    rmmse_3 : np.ndarray
        RMMSE(3), array of shape (n_y, n_x)
    labels : np.ndarray
        The labels, array of shape (n_y, n_x)
    versus : str
        The competitors used for the labels, 'both', 'pickands' or 'moment' (default: 'both')
    """

    def __init__(self, plane: str, x_axis: np.ndarray, y_axis: np.ndarray, rmmse_2: np.ndarray, rmmse_3: np.ndarray,
                 labels: np.ndarray, versus: str = "both"):
        self.plane = plane
        self.x_axis = x_axis
        self.y_axis = y_axis
        self.rmmse_2 = rmmse_2
        self.rmmse_3 = rmmse_3
        self.labels = labels
        self.versus = versus

    def counts(self) -> dict:
        return {label: int(np.sum(self.labels == label)) for label in LABELS}

    def to_dataframe(self) -> pd.DataFrame:
        """
        One row per cell, ordered by the row index of the vertical axis and then by the horizontal axis.
        Non-finite ratios are NaN.

        Returns
        -------
        table : pd.DataFrame
            Columns: the two axis names, 'rmmse_2', 'rmmse_3' and 'label'
        """
        x_name, y_name = AXIS_NAMES[self.plane]
        x_values, y_values = np.meshgrid(self.x_axis, self.y_axis)
        with np.errstate(invalid="ignore"):
            rmmse_2 = np.where(np.isfinite(self.rmmse_2), self.rmmse_2, np.nan)
            rmmse_3 = np.where(np.isfinite(self.rmmse_3), self.rmmse_3, np.nan)
        return pd.DataFrame({x_name: x_values.ravel(), y_name: y_values.ravel(), "rmmse_2": rmmse_2.ravel(),
                             "rmmse_3": rmmse_3.ravel(), "label": self.labels.ravel()})

    def to_image(self) -> np.ndarray:
        """
        The labels as 8-bit grey levels (see GREY_LEVELS). The first row corresponds to the largest y value.

        Returns
        -------
        image : np.ndarray
            Array of shape (n_y, n_x) and type uint8
        """
        image = np.zeros(self.labels.shape, dtype=np.uint8)
        for label, level in GREY_LEVELS.items():
            image[self.labels == label] = level
        return image[::-1]

    def write_csv(self, path: str) -> None:
        write_csv(self.to_dataframe(), path)

    def write_pgm(self, path: str) -> None:
        """
        Write the label raster as binary PGM (P5, maxval 255).

        Parameters
        ----------
        path : str
            The target path
        """
        Image.fromarray(self.to_image()).save(path, format="PPM")


def make_axis(value_range: tuple, steps: int) -> np.ndarray:
    """
    Equally spaced axis values including both ends of the range.

    Parameters
    ----------
    value_range : tuple
        (min, max) with min < max
    steps : int
        The number of values, at least 2

    Returns
    -------
    axis : np.ndarray
        The axis values
    """
    lower, upper = value_range
    if not np.isfinite(lower) or not np.isfinite(upper) or not upper > lower:
        raise InvalidParametersError("An axis range must have positive width, got ({0}, {1})".format(lower, upper))
    if int(steps) != steps or steps < 2:
        raise InvalidParametersError("An axis needs at least 2 steps, got {0}".format(steps))
    return np.linspace(lower, upper, int(steps))


def compute_region_grid(plane: str = "alpha-beta", x_range: tuple = None, y_range: tuple = None,
                        x_steps: int = DEFAULT_STEPS, y_steps: int = DEFAULT_STEPS, versus: str = "both",
                        max_beta_ratio: float = DEFAULT_MAX_BETA_RATIO, n_jobs: int = 1,
                        debug: bool = False) -> RegionGrid:
    """
    Evaluate RMMSE(2) and RMMSE(3) on a grid and label each cell with the dominating estimator.
    Rows are evaluated in parallel with joblib and assembled in row order.

    Parameters
    ----------
    plane : str
        'alpha-beta' (alpha on the horizontal axis) or 'gamma-rho' (gamma on the horizontal axis)
        (default: 'alpha-beta')
    x_range : tuple
        Range of the horizontal axis. If None, the default range of the plane is used (default: None)
    y_range : tuple
        Range of the vertical axis. If None, the default range of the plane is used (default: None)
    x_steps : int
        Number of values on the horizontal axis (default: 400)
    y_steps : int
        Number of values on the vertical axis (default: 400)
    versus : str
        Label the cells against Pickands and the moment estimator ('both') or against a single competitor
        ('pickands' or 'moment') (default: 'both')
    max_beta_ratio : float
        Only used for the 'alpha-beta' plane. Cells with beta > max_beta_ratio * alpha are outside of the map and
        labeled 'invalid'. np.inf evaluates the whole rectangle (default: 4.)
    n_jobs : int
        Number of parallel joblib workers (default: 1)
    debug : bool
        If true, additional information will be printed to the console (default: False)

    Returns
    -------
    grid : RegionGrid
        The evaluated grid
    """
    if plane not in PLANES:
        raise InvalidParametersError("plane must be one of {0}, got {1}".format(PLANES, plane))
    if versus not in COMPARISONS:
        raise InvalidParametersError("versus must be one of {0}, got {1}".format(COMPARISONS, versus))
    if not max_beta_ratio > 1:
        raise InvalidParametersError("max_beta_ratio must be larger than 1, got {0}".format(max_beta_ratio))
    default_x_range, default_y_range = DEFAULT_RANGES[plane]
    x_axis = make_axis(default_x_range if x_range is None else x_range, x_steps)
    y_axis = make_axis(default_y_range if y_range is None else y_range, y_steps)
    rows = Parallel(n_jobs=n_jobs)(delayed(_region_row)(plane, x_axis, y_value, versus, max_beta_ratio)
                                    for y_value in y_axis)
    grid = RegionGrid(plane, x_axis, y_axis, np.array([row[0] for row in rows]), np.array([row[1] for row in rows]),
                      np.array([row[2] for row in rows], dtype=object), versus)
    counts = grid.counts()
    if counts["invalid"] == grid.labels.size:
        print("[WARNING] The region grid does not contain a valid cell")
    if debug:
        print("[compute_region_grid] {0} x {1} cells: {2}".format(x_steps, y_steps, counts))
    return grid
