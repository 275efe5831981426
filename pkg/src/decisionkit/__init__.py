"""Decision problems as set partitioning: formulations, preference
primitives, aggregation and solvers for ranking, rating, clustering and
assignment."""

__version__ = "0.1.0"
