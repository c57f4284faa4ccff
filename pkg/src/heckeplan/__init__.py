"""heckeplan: exact residual-coset enumeration and Plancherel densities
for affine Hecke algebras, with a low-rank numeric residue engine."""

__version__ = "0.1.0"
