"""Open quantum walk on the integer line: simulation, spectra, phase analysis.

The walk's internal 2x2 state is updated by a two-angle Kraus pair while the
position shifts left or right depending on which operator acts.  The package
evolves the full state exactly (simulate), mirrors the dynamics in Fourier
space (spectral), and evaluates the closed-form moment formulas and the
ballistic/diffusive classification (phases).  A CLI (oqwalk) wraps the lot.
"""

from .kernels import BACKEND
from .phases import PhaseClass, PhaseKind, PhaseReport, Subcase
from .simulate import DensityState, Distribution, MomentReport
from .spectral import FourierState, ReducedSpectrum, SpectrumReport, TwistedGenerator
from .walk import KrausPair, WalkParameters

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DensityState",
    "Distribution",
    "FourierState",
    "KrausPair",
    "MomentReport",
    "PhaseClass",
    "PhaseKind",
    "PhaseReport",
    "ReducedSpectrum",
    "SpectrumReport",
    "Subcase",
    "TwistedGenerator",
    "WalkParameters",
    "__version__",
]
