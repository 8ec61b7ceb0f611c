"""Classical-quantum correspondence toolkit: SUSY prepotentials, reduced ODEs, Lax pairs and spectral-problem solutions."""
from .errors import CqlaxError

__version__ = "0.1.0"
__all__ = ["CqlaxError", "__version__"]
