"""Exact reflectionless soliton and breather solutions on a nonzero
background, with independent numerical verification."""

from .spectrum import (EigenEntry, PoleOrder, SpectralConfig,  # noqa: F401
                       derive_orbit)

__version__ = "0.1.0"
