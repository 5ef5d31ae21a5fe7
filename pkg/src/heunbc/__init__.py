"""Biconfluent Heun equation: Hautot polynomials, eigenvalue spectra, complex
orthogonality, Fredholm relations and the quasi-exactly solvable sextic layer."""
from . import bhe, cpoly, qes, quad, spectra, weight
from .bhe import BheParams, HautotSolution, PbheCoeffs, hautot
from .cpoly import CPoly, QSqrt2
from .errors import HeunError, PreconditionError, VerificationError
from .spectra import EigenPair, SpectrumProblem, k1_spectrum

__version__ = "0.1.0"

__all__ = [
    "bhe", "cpoly", "qes", "quad", "spectra", "weight",
    "BheParams", "HautotSolution", "PbheCoeffs", "hautot",
    "CPoly", "QSqrt2", "HeunError", "PreconditionError", "VerificationError",
    "EigenPair", "SpectrumProblem", "k1_spectrum",
]
