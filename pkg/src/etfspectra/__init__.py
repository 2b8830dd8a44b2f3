"""Equiangular tight frames, MANOVA spectra of their random subsets,
erasure Welch bounds, and analog erasure coding performance."""

from . import coding, frames, frameio, functionals, harness, manova, moments, spectra
from .frames import FrameMatrix, construct
from .manova import ManovaParams

__all__ = [
    "coding", "frames", "frameio", "functionals", "harness", "manova",
    "moments", "spectra", "FrameMatrix", "construct", "ManovaParams",
]

__version__ = "0.1.0"
