"""
logfrob - log de Rham hypercohomology of toric pairs over F_p

This package provides functionality to:
- Build Cech-de Rham complexes of smooth projective toric varieties with a
  torus-invariant normal crossing boundary, weight by weight
- Construct the Frobenius splitting of the log de Rham complex from a lift
  of Frobenius over Z/p^2 and compare it on hypercohomology
- Run weight and Hodge spectral sequences with Fontaine-Laffaille structure
- Check the resulting identities on a gallery of small examples
"""

__version__ = "1.0.0"
__author__ = "logfrob Project"
