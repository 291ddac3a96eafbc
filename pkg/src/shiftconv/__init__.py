"""Exact shifted convolutions of r(n) with main terms, identities and exponent envelopes."""

from ._backend import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
