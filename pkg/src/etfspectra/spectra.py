"""Subset spectra: sampling column subsets, Gram eigenvalues, empirical
CDFs, KS distances, and draws from the MANOVA(n, m, k) matrix ensemble.

The Gram of a selected m-by-k subframe is formed on the smaller side
(k-by-k when k <= m, else m-by-m); the two sides share their nonzero
spectrum, so the stored spectrum always has r = min(k, m) entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .frames import FrameMatrix
from .rng import derive_rng

__all__ = [
    "SubsetSelection",
    "SubsetSpectrum",
    "select",
    "subset_gram_spectrum",
    "StepCDF",
    "empirical_cdf",
    "ks_distance",
    "sample_manova_ensemble",
    "ZERO_CLAMP",
]

ZERO_CLAMP = 1e-10


@dataclass(frozen=True)
class SubsetSelection:
    """A sorted index subset of {0..n-1} plus how it was drawn."""

    indices: np.ndarray
    n: int
    mode: str  # "uniform_k" | "bernoulli"
    param: float
    seed: int | None = None

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)
        if idx.size and (idx.min() < 0 or idx.max() >= self.n):
            raise ValueError("indices out of range")
        if len(np.unique(idx)) != len(idx):
            raise ValueError("indices must be distinct")

    @property
    def k(self) -> int:
        return len(self.indices)


def select(n: int, mode: str, seed=None, k: int | None = None,
           p: float | None = None) -> SubsetSelection:
    """Draw a subset of {0..n-1}: a uniform k-subset or Bernoulli(p) marks.

    ``seed`` may be an integer or a numpy Generator.
    """
    n = int(n)
    rng = seed if isinstance(seed, np.random.Generator) else derive_rng(seed)
    if mode == "uniform_k":
        if k is None or not 0 <= k <= n:
            raise ValueError(f"uniform_k needs 0 <= k <= n; got k={k}")
        idx = np.sort(rng.permutation(n)[:k])
        return SubsetSelection(idx, n, mode, float(k),
                               seed if isinstance(seed, int) else None)
    if mode == "bernoulli":
        if p is None or not 0.0 <= p <= 1.0:
            raise ValueError(f"bernoulli needs 0 <= p <= 1; got p={p}")
        idx = np.nonzero(rng.random(n) < p)[0]
        return SubsetSelection(idx, n, mode, float(p),
                               seed if isinstance(seed, int) else None)
    raise ValueError(f"unknown selection mode {mode!r}")


@dataclass(frozen=True)
class SubsetSpectrum:
    """Ascending nonzero eigenvalues of a subset Gram with (n, m, k) context.

    r = min(k, m) values; eigenvalues below the clamp are stored as 0 and
    counted in ``clamped``.
    """

    eigenvalues: np.ndarray
    n: int
    m: int
    k: int
    clamped: int = 0

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        ev.setflags(write=False)
        object.__setattr__(self, "eigenvalues", ev)

    @property
    def r(self) -> int:
        return min(self.k, self.m)


def _clamp(ev: np.ndarray) -> tuple[np.ndarray, int]:
    if ev.size and ev.min() < -1e-8:
        raise linalg.LinAlgError(f"Gram eigenvalue {ev.min()} is significantly negative")
    n_clamped = int(np.count_nonzero(ev < ZERO_CLAMP))
    return np.where(ev < ZERO_CLAMP, 0.0, ev), n_clamped


def subset_gram_spectrum(F: FrameMatrix, sel: SubsetSelection | np.ndarray) -> SubsetSpectrum:
    """Eigenvalues of the Gram of the selected columns, ascending."""
    idx = sel.indices if isinstance(sel, SubsetSelection) else np.asarray(sel, dtype=np.int64)
    if len(idx) == 0:
        raise ValueError("empty subset")
    A = F.entries[:, idx]
    m, k = A.shape
    if k <= m:
        G = A.conj().T @ A
    else:
        G = A @ A.conj().T
    G = 0.5 * (G + G.conj().T)
    ev = np.linalg.eigvalsh(G)
    ev, n_clamped = _clamp(ev)
    return SubsetSpectrum(ev, F.n, m, k, clamped=n_clamped)


@dataclass(frozen=True)
class StepCDF:
    """Right-continuous empirical CDF of a finite sample."""

    points: np.ndarray = field(repr=False)

    def __post_init__(self):
        pts = np.sort(np.asarray(self.points, dtype=float))
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.searchsorted(self.points, x, side="right") / len(self.points)
        return float(out) if out.ndim == 0 else out


def empirical_cdf(spec: SubsetSpectrum | np.ndarray) -> StepCDF:
    vals = spec.eigenvalues if isinstance(spec, SubsetSpectrum) else np.asarray(spec)
    if len(vals) == 0:
        raise ValueError("empty spectrum")
    return StepCDF(vals)


def ks_distance(spec, reference_cdf, jump_points=()) -> float:
    """Sup distance between the sample's empirical CDF and a reference CDF.

    Exact at the sample jump points: both one-sided deviations are taken at
    every sorted eigenvalue, with the reference's left limit obtained at the
    previous representable float (so step references are handled exactly).
    ``reference_cdf`` is any callable accepting an array (e.g.
    ManovaDistribution.cdf); pass the reference's own jump locations in
    ``jump_points`` when it has point masses.
    """
    vals = spec.eigenvalues if isinstance(spec, SubsetSpectrum) else np.asarray(spec, dtype=float)
    vals = np.sort(vals)
    r = len(vals)
    if r == 0:
        raise ValueError("empty spectrum")
    ref = np.asarray(reference_cdf(vals), dtype=float)
    ref_left = np.asarray(reference_cdf(np.nextafter(vals, -np.inf)), dtype=float)
    hi = np.arange(1, r + 1) / r
    lo = np.arange(0, r) / r
    d = max(float(np.max(np.abs(ref - hi))), float(np.max(np.abs(ref_left - lo))))
    for x in jump_points:
        emp = float(np.searchsorted(vals, x, side="right")) / r
        emp_left = float(np.searchsorted(vals, np.nextafter(x, -np.inf), side="right")) / r
        d = max(d,
                abs(float(reference_cdf(x)) - emp),
                abs(float(reference_cdf(np.nextafter(x, -np.inf))) - emp_left))
    return d


def _gaussian(rng, shape, field: str) -> np.ndarray:
    if field == "complex":
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)
    if field == "real":
        return rng.standard_normal(shape)
    raise ValueError(f"field must be 'real' or 'complex'; got {field!r}")


def sample_manova_ensemble(n: int, m: int, k: int, field: str = "complex",
                           seed=None) -> SubsetSpectrum:
    """One spectrum draw from the MANOVA(n, m, k) matrix ensemble.

    For k <= m these are the eigenvalues of
    (n/m) (AA' + BB')^(-1/2) BB' (AA' + BB')^(-1/2) with A of shape
    k x (n-m) and B of shape k x m i.i.d. standard Gaussian, computed via
    the equivalent symmetric generalized eigenproblem.  For k > m the roles
    of k and m are swapped and the k/m nonzero-spectrum scaling applied, so
    values again live in [0, n/m].
    """
    n, m, k = int(n), int(m), int(k)
    if not (1 <= k <= n and 1 <= m <= n):
        raise ValueError(f"need 1 <= k, m <= n; got n={n}, m={m}, k={k}")
    rng = seed if isinstance(seed, np.random.Generator) else derive_rng(seed)
    r, c = (k, m) if k <= m else (m, k)
    # r x r problem with "dimension" c: A is r x (n-c), B is r x c
    A = _gaussian(rng, (r, n - c), field)
    B = _gaussian(rng, (r, c), field)
    BB = B @ B.conj().T
    SS = BB + A @ A.conj().T
    BB = 0.5 * (BB + BB.conj().T)
    SS = 0.5 * (SS + SS.conj().T)
    try:
        ev = linalg.eigh(BB, SS, eigvals_only=True, driver="gvd")
    except linalg.LinAlgError as exc:  # singular AA'+BB' has probability zero
        raise linalg.LinAlgError(f"ensemble draw failed: {exc}") from exc
    ev = np.clip(ev, 0.0, 1.0) * (n / c)
    if k > m:
        ev = ev * (k / m)
    ev, n_clamped = _clamp(np.sort(ev))
    return SubsetSpectrum(ev, n, m, k, clamped=n_clamped)
