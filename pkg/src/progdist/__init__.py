"""Desk-scale experiments on bounded multiplicative functions in
arithmetic progressions to large prime moduli."""

__version__ = "0.1.0"

from .multfn import BUILTIN_NAMES, MultiplicativeSpec, builtin
from .sieve import SpfTable, build_spf, factorize, primes_in

__all__ = [
    "BUILTIN_NAMES",
    "MultiplicativeSpec",
    "SpfTable",
    "builtin",
    "build_spf",
    "factorize",
    "primes_in",
    "__version__",
]
