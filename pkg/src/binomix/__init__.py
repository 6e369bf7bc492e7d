"""Kernel density estimation for binomial mixing densities under
heterogeneous trial counts, with bound verification oracles."""

__version__ = "0.1.0"
