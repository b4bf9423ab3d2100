"""Exact Galois representations of elliptic curves with wild cyclic reduction.

Library layout:

- ``cyc24``     exact arithmetic in Z[zeta24] and the reduction to F9
- ``padic``     capped-precision local fields (towers over Q2 / Q3)
- ``curve``     Weierstrass models, twists, Tate's algorithm, point counting
- ``classify``  reduction-type routing and torsion-field data
- ``mod3``      the mod-3 representation computed from 3-torsion points
- ``galrep``    the representation data model and case-by-case synthesizers
- ``cli``       command-line front end and corpus harness
"""

from . import cyc24, padic, curve, classify, mod3, galrep

__all__ = ["cyc24", "padic", "curve", "classify", "mod3", "galrep"]
__version__ = "0.1.0"
