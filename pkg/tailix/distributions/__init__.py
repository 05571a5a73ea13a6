from .hall import HallDistribution, make_hall, make_pareto

__all__ = ['HallDistribution',
           'make_hall',
           'make_pareto']
