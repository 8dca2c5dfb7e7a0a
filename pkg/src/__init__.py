"""
Potential-algebra spectra

Exact bound-state spectra of the flat, spherical and hyperbolic Kepler
problems and the Rosen-Morse well from ladder operators, with a
finite-difference oracle that checks them.
"""

__version__ = "1.0.0"

from .errors import SpectralAlgebraError
from .models import Family, HalfInteger, Mode, ModelParams, OracleConfig
from .representation import classify, spectrum
from .oracle import verify

__all__ = ['SpectralAlgebraError', 'Family', 'HalfInteger', 'Mode', 'ModelParams',
           'OracleConfig', 'classify', 'spectrum', 'verify']
