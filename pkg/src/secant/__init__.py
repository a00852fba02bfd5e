"""Exact-arithmetic toolkit for secant varieties of homogeneous spaces.

The package classifies irreducible representations of reductive groups by
whether all their secant varieties are orbit closures ("tame") or not
("wild"), produces machine-checkable wildness certificates, computes ranks
of concrete tensors in the tame families, and realizes the small wildness
witnesses (alternating 3-tensors on a 6-dimensional space, their symplectic
cousins, a 52-dimensional exceptional Lie algebra acting on traceless
octonion-Hermitian matrices, and nilpotent orbits of the largest
exceptional Lie algebra) in exact arithmetic.
"""

from __future__ import annotations

__version__ = "0.1.0"
