"""Invariant densities of bounded polynomial iterations.

Subpackages: poly (root finding substrate), bell (generating-chain
polynomials and the triangular coefficient system), saddle (steepest
descent zero/invariant densities), quadform (orthogonal splitting in
R^d), empirical (orbit and zero-set statistics), odeiter (differential
iteration), lorenz (case study), cli.
"""

from . import bell, empirical, errors, lorenz, odeiter, poly, quadform, saddle

__all__ = ["bell", "empirical", "errors", "lorenz", "odeiter", "poly",
           "quadform", "saddle"]
__version__ = "0.1.0"
