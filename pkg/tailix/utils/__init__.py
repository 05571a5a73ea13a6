from .io import read_sample_file, write_csv, read_csv, format_tuning, to_json_text
from .plots import plot_region_map, plot_bias_curve, plot_estimate_path

__all__ = ['read_sample_file',
           'write_csv',
           'read_csv',
           'format_tuning',
           'to_json_text',
           'plot_region_map',
           'plot_bias_curve',
           'plot_estimate_path']
