"""Exact-arithmetic toolkit for reflective automorphic form inputs on
even lattices of squarefree level.

Subpackages are deliberately kept import-light: pull in what you need
(`refmod.cyclo`, `refmod.discforms`, ...) rather than importing everything
through this namespace.
"""

__version__ = "0.1.0"
