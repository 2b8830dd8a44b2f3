"""Spectral functionals of subset Grams and their limiting values.

Each functional maps the eigenvalues of a subset Gram to a scalar:
restricted-isometry radius, its statistical indicator, the
arithmetic-to-harmonic means ratio driving analog-coding amplification,
the Shannon transform (bits), and the extreme/condition statistics.
``limiting_value`` evaluates the same functionals against the limiting
MANOVA or Marchenko-Pastur law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .manova import (ManovaParams, _integrate_against_density, manova_atoms,
                     mp_edges, mp_moment_numeric, support_edges)
from .spectra import ZERO_CLAMP, SubsetSpectrum

__all__ = ["FunctionalSpec", "evaluate", "limiting_value", "KINDS"]

KINDS = ("rip", "strip", "ac", "shannon", "max", "min", "cond")


@dataclass(frozen=True)
class FunctionalSpec:
    """A functional kind plus its parameter (delta for strip, alpha for
    shannon)."""

    kind: str
    delta: float | None = None
    alpha: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown functional {self.kind!r}")
        if self.kind == "strip" and not (self.delta is not None and self.delta > 0):
            raise ValueError("strip needs delta > 0")
        if self.kind == "shannon" and not (self.alpha is not None and self.alpha >= 0):
            raise ValueError("shannon needs alpha >= 0")


def evaluate(spec: FunctionalSpec, spectrum: SubsetSpectrum | np.ndarray) -> float:
    """Apply the functional to one spectrum.

    The AC ratio uses the r = min(k, m) nonzero eigenvalues; a (near-)zero
    eigenvalue makes it diverge, reported as math.inf.  The Shannon
    transform normalizes by k, so structurally zero eigenvalues of wide
    subsets contribute nothing.
    """
    if isinstance(spectrum, SubsetSpectrum):
        ev = spectrum.eigenvalues
        k = spectrum.k
    else:
        ev = np.asarray(spectrum, dtype=float)
        k = len(ev)
    if len(ev) == 0:
        raise ValueError("empty spectrum")
    kind = spec.kind
    if kind == "rip":
        return float(max(ev.max() - 1.0, 1.0 - ev.min()))
    if kind == "strip":
        return 1.0 if evaluate(FunctionalSpec("rip"), spectrum) <= spec.delta else 0.0
    if kind == "ac":
        if ev.min() < ZERO_CLAMP:
            return math.inf
        return float(np.mean(1.0 / ev) * np.mean(ev))
    if kind == "shannon":
        return float(np.sum(np.log2(1.0 + spec.alpha * ev)) / k)
    if kind == "max":
        return float(ev.max())
    if kind == "min":
        return float(ev.min())
    if kind == "cond":
        if ev.min() < ZERO_CLAMP:
            return math.inf
        return float(ev.max() / ev.min())
    raise AssertionError(kind)


def _manova_limit(spec: FunctionalSpec, params: ManovaParams) -> float:
    edges = support_edges(params)
    atoms = manova_atoms(params)
    mass0 = sum(a.mass for a in atoms if a.location == 0.0)
    top = [(a.location, a.mass) for a in atoms if a.location > 0.0]
    kind = spec.kind

    if kind in ("rip", "strip", "max", "min", "cond"):
        lo = 0.0 if mass0 > 0.0 else edges.r_minus
        hi = max([edges.r_plus] + [loc for loc, _ in top])
        if kind == "max":
            return hi
        if kind == "min":
            return lo
        if kind == "cond":
            if lo == 0.0:
                return math.inf
            return hi / lo
        rip = max(hi - 1.0, 1.0 - lo)
        return rip if kind == "rip" else (1.0 if rip <= spec.delta else 0.0)

    if kind == "ac":
        # mean of the law is 1 for beta <= 1 (unit-norm trace identity)
        if params.beta >= 1.0:
            raise ValueError("AC limit needs beta < 1 (mass at zero otherwise)")
        inv = _integrate_against_density(lambda x: 1.0 / x, params)
        inv += sum(mass / loc for loc, mass in top)
        mean = _integrate_against_density(lambda x: x, params)
        mean += sum(mass * loc for loc, mass in top)
        return inv * mean

    if kind == "shannon":
        val = _integrate_against_density(lambda x: np.log2(1.0 + spec.alpha * x), params)
        val += sum(mass * math.log2(1.0 + spec.alpha * loc) for loc, mass in top)
        return val

    raise AssertionError(kind)


def _mp_limit(spec: FunctionalSpec, beta: float) -> float:
    lo, hi = mp_edges(beta)
    kind = spec.kind
    if kind == "max":
        return hi
    if kind == "min":
        return lo
    if kind == "cond":
        return math.inf if lo == 0.0 else hi / lo
    if kind in ("rip", "strip"):
        rip = max(hi - 1.0, 1.0 - lo)
        return rip if kind == "rip" else (1.0 if rip <= spec.delta else 0.0)
    if kind == "ac":
        if beta >= 1.0:
            raise ValueError("AC limit needs beta < 1")
        return mp_moment_numeric(-1, beta) * mp_moment_numeric(1, beta)
    if kind == "shannon":
        from scipy import integrate as _si

        span = hi - lo

        def integrand(th):
            x = lo + span * np.sin(th) ** 2
            w = span ** 2 * np.sin(th) ** 2 * np.cos(th) ** 2 / (np.pi * beta * x)
            return np.log2(1.0 + spec.alpha * x) * w

        val, _ = _si.quad(integrand, 0.0, math.pi / 2.0, epsabs=1e-10, limit=200)
        return val
    raise AssertionError(kind)


def limiting_value(spec: FunctionalSpec, params, law: str = "manova") -> float:
    """Limit of the functional under the MANOVA(beta, gamma) law, or under
    Marchenko-Pastur(beta) when law="mp" (params may then be a float)."""
    if law == "manova":
        if not isinstance(params, ManovaParams):
            raise TypeError("manova law needs ManovaParams")
        return _manova_limit(spec, params)
    if law == "mp":
        beta = params.beta if isinstance(params, ManovaParams) else float(params)
        return _mp_limit(spec, beta)
    raise ValueError(f"unknown law {law!r}")
