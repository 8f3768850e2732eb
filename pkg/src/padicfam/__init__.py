"""Exact p-adic computations for anticyclotomic p-adic L-functions of families."""

from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
