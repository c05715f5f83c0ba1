"""Exact q-series, Heegner traces and Kaneko-type identities for genus-zero levels."""

from .etaq import SUPPORTED_LEVELS, HauptmodulId, hauptmodul_series
from .series import QExpansion

__version__ = "0.1.0"

__all__ = ["QExpansion", "HauptmodulId", "hauptmodul_series", "SUPPORTED_LEVELS", "__version__"]
