"""PBW deformations of quadratic algebras over finite-dimensional base rings,
checked with exact linear algebra over Q and GF(p)."""

__version__ = "0.1.0"
