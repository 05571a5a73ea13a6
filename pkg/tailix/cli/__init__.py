from .regions import RegionGrid, make_axis, compute_region_grid
from .main import build_parser, main

__all__ = ['RegionGrid',
           'make_axis',
           'compute_region_grid',
           'build_parser',
           'main']
