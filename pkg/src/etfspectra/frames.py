"""Frame constructions and structural predicates.

Frame vectors are the COLUMNS of an ``m``-by-``n`` matrix (n >= m), unit
norm unless noted.  Deterministic families: difference-set spectrum (DSS),
low-pass and random-spectrum DFT, real/complex Paley, conference-matrix
Grassmannian, Alltop chirps, spikes+sines, spikes+Hadamard.  Random
families: Gaussian i.i.d., Haar, random Fourier/cosine.

A frame is *tight* when ``F F' = (n/m) I`` and *equiangular* when every
off-diagonal Gram magnitude equals the Welch value
``sqrt((n-m)/((n-1)m))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .rng import derive_rng

__all__ = [
    "FrameMatrix",
    "FrameParameterError",
    "CrossCorrelation",
    "cross_correlation",
    "construct",
    "construct_dss",
    "construct_lowpass_dft",
    "construct_random_spectrum_dft",
    "construct_real_paley",
    "construct_complex_paley",
    "construct_grassmannian",
    "construct_alltop",
    "construct_spikes_sines",
    "construct_spikes_hadamard",
    "construct_random",
    "is_tight",
    "is_equiangular",
    "coherence",
    "gram",
    "welch_rms_bound",
    "welch_max_bound",
    "welch_value",
    "is_prime",
    "RANDOM_FAMILIES",
    "DETERMINISTIC_FAMILIES",
]


class FrameParameterError(ValueError):
    """Raised when a construction is asked for parameters it does not support."""


class CrossCorrelation(NamedTuple):
    """One Gram entry <f_i, f_j> with its index pair (c_ii = 1 for
    unit-norm frames)."""

    value: complex
    pair: tuple


def cross_correlation(F, i: int, j: int) -> CrossCorrelation:
    E = F.entries if isinstance(F, FrameMatrix) else np.asarray(F)
    return CrossCorrelation(complex(np.vdot(E[:, i], E[:, j])), (i, j))


DETERMINISTIC_FAMILIES = (
    "dss",
    "lowpass_dft",
    "random_spectrum_dft",
    "real_paley",
    "complex_paley",
    "grassmannian",
    "alltop",
    "spikes_sines",
    "spikes_hadamard",
)

RANDOM_FAMILIES = (
    "gaussian_iid",
    "haar_real",
    "haar_complex",
    "random_fourier",
    "random_cosine",
)


@dataclass(frozen=True)
class FrameMatrix:
    """An m-by-n frame with construction metadata.

    ``entries`` is complex or real float64, columns are the frame vectors.
    Instances are immutable; the entry array is marked read-only.
    """

    entries: np.ndarray
    family: str
    seed: int | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        a = np.asarray(self.entries)
        if a.ndim != 2:
            raise FrameParameterError("frame entries must be a 2-d array")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.entries)

    def column_norms(self) -> np.ndarray:
        return np.linalg.norm(self.entries, axis=0)


# ---------------------------------------------------------------------------
# number-theory helpers

def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test (intended for n < 10^12)."""
    n = int(n)
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13):
        if n % q == 0:
            return n == q
    d = 17
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _quadratic_residues(n: int) -> np.ndarray:
    r = np.unique(np.mod(np.arange(1, n) ** 2, n))
    return np.sort(r)


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _jacobsthal(q: int) -> np.ndarray:
    """q-by-q matrix Q with Q[i, j] = legendre(i - j, q)."""
    chi = np.array([_legendre(a, q) for a in range(q)], dtype=float)
    idx = np.subtract.outer(np.arange(q), np.arange(q)) % q
    return chi[idx]


# ---------------------------------------------------------------------------
# harmonic (DFT-based) constructions

def _harmonic_frame(n: int, freqs: np.ndarray) -> np.ndarray:
    """Rows of the n-point IDFT at the given frequencies, unit-norm columns.

    Entry (j, i) is exp(2*pi*1j*freqs[j]*i/n)/sqrt(m), so every entry has
    magnitude 1/sqrt(m) and every column norm is exactly 1.
    """
    freqs = np.asarray(freqs, dtype=np.int64)
    m = len(freqs)
    i = np.arange(n)
    phase = 2.0 * np.pi * np.outer(freqs, i) / n
    return np.exp(1j * phase) / math.sqrt(m)


def construct_dss(n: int) -> FrameMatrix:
    """Difference-set spectrum ETF: IDFT rows at quadratic-residue frequencies.

    Requires a prime n with n % 4 == 3, n >= 7; gives m = (n-1)/2 and the
    distance multiplicity (n-3)/4.
    """
    n = int(n)
    if not is_prime(n) or n % 4 != 3 or n < 7:
        raise FrameParameterError(
            f"dss needs a prime n = 3 (mod 4), n >= 7; got {n}")
    freqs = _quadratic_residues(n)
    entries = _harmonic_frame(n, freqs)
    lam = (n - 3) // 4
    return FrameMatrix(entries, "dss", params={"n": n, "lambda": lam})


def construct_lowpass_dft(n: int, m: int) -> FrameMatrix:
    """Band-limited frame: the m lowest IDFT frequencies (tight, not ETF)."""
    n, m = int(n), int(m)
    if not 1 <= m <= n:
        raise FrameParameterError(f"need 1 <= m <= n; got m={m}, n={n}")
    entries = _harmonic_frame(n, np.arange(m))
    return FrameMatrix(entries, "lowpass_dft", params={"n": n, "m": m})


def construct_random_spectrum_dft(n: int, m: int, seed: int) -> FrameMatrix:
    """m distinct IDFT frequencies drawn uniformly without replacement."""
    n, m = int(n), int(m)
    if not 1 <= m <= n:
        raise FrameParameterError(f"need 1 <= m <= n; got m={m}, n={n}")
    rng = derive_rng(seed)
    freqs = np.sort(rng.permutation(n)[:m])
    entries = _harmonic_frame(n, freqs)
    return FrameMatrix(entries, "random_spectrum_dft", seed=seed,
                       params={"n": n, "m": m})


# ---------------------------------------------------------------------------
# conference-matrix constructions

def _projection_factor(P: np.ndarray, m: int) -> np.ndarray:
    """m-by-n factor F of a rank-m projection P = F'F / (n/m), unit columns.

    Takes the m top eigenvectors of the Hermitian projection, so FF' is
    exactly (n/m) I up to eigensolver roundoff.
    """
    n = P.shape[0]
    w, v = np.linalg.eigh(P)
    top = v[:, np.argsort(w)[-m:]]
    return math.sqrt(n / m) * top.conj().T


def construct_real_paley(q: int) -> FrameMatrix:
    """Real ETF with n = q+1, m = n/2 from the symmetric conference matrix.

    q must be a prime with q % 4 == 1.
    """
    q = int(q)
    if not is_prime(q) or q % 4 != 1:
        raise FrameParameterError(f"real_paley needs a prime q = 1 (mod 4); got {q}")
    n = q + 1
    C = np.zeros((n, n))
    C[0, 1:] = 1.0
    C[1:, 0] = 1.0
    C[1:, 1:] = _jacobsthal(q)
    P = 0.5 * (np.eye(n) + C / math.sqrt(q))
    entries = _projection_factor(P, n // 2)
    return FrameMatrix(entries, "real_paley", params={"q": q})


def construct_complex_paley(q: int) -> FrameMatrix:
    """Complex ETF on the Paley difference set QR(q) | {0}: m=(q+1)/2, n=q.

    q must be a prime with q % 4 == 3.
    """
    q = int(q)
    if not is_prime(q) or q % 4 != 3:
        raise FrameParameterError(f"complex_paley needs a prime q = 3 (mod 4); got {q}")
    freqs = np.sort(np.concatenate(([0], _quadratic_residues(q))))
    entries = _harmonic_frame(q, freqs)
    return FrameMatrix(entries, "complex_paley", params={"q": q})


def construct_grassmannian(n: int) -> FrameMatrix:
    """Complex ETF with m = n/2 from the skew conference matrix of order n.

    Supported whenever n = q+1 for a prime q = 3 (mod 4): i(skew C)/sqrt(q)
    is a Hermitian involution whose positive eigenspace gives the frame.
    """
    n = int(n)
    q = n - 1
    if n < 4 or not is_prime(q) or q % 4 != 3:
        raise FrameParameterError(
            f"grassmannian supports n = q+1 with q prime, q = 3 (mod 4); got n={n}")
    S = np.zeros((n, n))
    S[0, 1:] = 1.0
    S[1:, 0] = -1.0
    S[1:, 1:] = _jacobsthal(q)
    P = 0.5 * (np.eye(n) + 1j * S / math.sqrt(q))
    entries = _projection_factor(P, n // 2)
    return FrameMatrix(entries, "grassmannian", params={"q": q})


def construct_alltop(n: int, L: int) -> FrameMatrix:
    """Cubic-phase chirp frame: n*L unit vectors in C^n, gamma = 1/L.

    Columns are indexed by (shift, modulation); vectors within one shift
    class form an orthogonal basis, so the frame is tight but has both zero
    and 1/sqrt(n) cross correlations (never equiangular for L >= 2).
    n must be a prime >= 5 (cubic phase differences need gcd(6, n) = 1).
    """
    n, L = int(n), int(L)
    if not is_prime(n) or n < 5:
        raise FrameParameterError(f"alltop needs a prime n >= 5; got {n}")
    if not 1 <= L <= n:
        raise FrameParameterError(f"alltop needs 1 <= L <= n; got L={L}")
    t = np.arange(n)
    cols = []
    for shift in range(L):
        cubic = np.power(t + shift, 3, dtype=np.int64) % n
        for nu in range(n):
            cols.append(np.exp(2j * np.pi * ((cubic + nu * t) % n) / n))
    entries = np.stack(cols, axis=1) / math.sqrt(n)
    return FrameMatrix(entries, "alltop", params={"n": n, "L": L})


# ---------------------------------------------------------------------------
# two-basis concatenations

def construct_spikes_sines(m: int) -> FrameMatrix:
    """[identity | unitary DFT]: m-by-2m tight frame, coherence 1/sqrt(m)."""
    m = int(m)
    if m < 2:
        raise FrameParameterError(f"spikes_sines needs m >= 2; got {m}")
    W = _harmonic_frame(m, np.arange(m))  # unitary: all m frequencies
    entries = np.concatenate([np.eye(m, dtype=complex), W], axis=1)
    return FrameMatrix(entries, "spikes_sines", params={"m": m})


def _hadamard(m: int) -> np.ndarray:
    H = np.ones((1, 1))
    while H.shape[0] < m:
        H = np.block([[H, H], [H, -H]])
    return H


def construct_spikes_hadamard(m: int) -> FrameMatrix:
    """[identity | Hadamard/sqrt(m)]: real m-by-2m tight frame, m a power of 2."""
    m = int(m)
    if m < 2 or m & (m - 1) != 0:
        raise FrameParameterError(f"spikes_hadamard needs m a power of 2, m >= 2; got {m}")
    entries = np.concatenate([np.eye(m), _hadamard(m) / math.sqrt(m)], axis=1)
    return FrameMatrix(entries, "spikes_hadamard", params={"m": m})


# ---------------------------------------------------------------------------
# random families

def _haar_factor(n: int, rng, complex_field: bool) -> np.ndarray:
    """Haar orthogonal/unitary n-by-n matrix via QR with a positive-real
    diagonal correction on R (makes the factor exactly Haar)."""
    if complex_field:
        Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    else:
        Z = rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def construct_random(family: str, n: int, m: int, seed: int,
                     normalize_columns: bool = False) -> FrameMatrix:
    """Random frame families.

    gaussian_iid   : entries i.i.d. N(0, 1/m); columns have unit norm only
                     asymptotically unless ``normalize_columns`` is set.
    haar_real/complex : first m rows of a Haar orthogonal/unitary matrix,
                     scaled by sqrt(n/m) (exactly tight).
    random_fourier : m random DFT frequencies (same as random_spectrum_dft).
    random_cosine  : m random rows of the orthonormal DCT-II, scaled.
    """
    family = str(family)
    n, m = int(n), int(m)
    if family not in RANDOM_FAMILIES:
        raise FrameParameterError(f"unknown random family {family!r}")
    if not 1 <= m <= n:
        raise FrameParameterError(f"need 1 <= m <= n; got m={m}, n={n}")
    rng = derive_rng(seed)
    if family == "gaussian_iid":
        entries = rng.standard_normal((m, n)) / math.sqrt(m)
        if normalize_columns:
            entries = entries / np.linalg.norm(entries, axis=0, keepdims=True)
    elif family in ("haar_real", "haar_complex"):
        U = _haar_factor(n, rng, complex_field=(family == "haar_complex"))
        entries = math.sqrt(n / m) * U[:, :m].conj().T
    elif family == "random_fourier":
        freqs = np.sort(rng.permutation(n)[:m])
        entries = _harmonic_frame(n, freqs)
    else:  # random_cosine
        rows = np.sort(rng.permutation(n)[:m])
        i = np.arange(n)
        C = np.cos(np.pi * np.outer(rows, 2 * i + 1) / (2 * n))
        scale = np.where(rows == 0, math.sqrt(1.0 / n), math.sqrt(2.0 / n))
        entries = math.sqrt(n / m) * (scale[:, None] * C)
    return FrameMatrix(entries, family, seed=seed,
                       params={"n": n, "m": m, "normalize_columns": bool(normalize_columns)})


_DISPATCH = {
    "dss": lambda n=None, **kw: construct_dss(n),
    "lowpass_dft": lambda n=None, m=None, **kw: construct_lowpass_dft(n, m),
    "random_spectrum_dft": lambda n=None, m=None, seed=None, **kw: construct_random_spectrum_dft(n, m, seed),
    "real_paley": lambda q=None, **kw: construct_real_paley(q),
    "complex_paley": lambda q=None, **kw: construct_complex_paley(q),
    "grassmannian": lambda n=None, **kw: construct_grassmannian(n),
    "alltop": lambda n=None, L=2, **kw: construct_alltop(n, L),
    "spikes_sines": lambda m=None, **kw: construct_spikes_sines(m),
    "spikes_hadamard": lambda m=None, **kw: construct_spikes_hadamard(m),
}


def construct(family: str, **params) -> FrameMatrix:
    """Build any family by name; random families need n, m, seed."""
    if family in _DISPATCH:
        return _DISPATCH[family](**params)
    if family in RANDOM_FAMILIES:
        return construct_random(family, **params)
    raise FrameParameterError(f"unknown frame family {family!r}")


# ---------------------------------------------------------------------------
# predicates and Welch bounds

def gram(F: FrameMatrix | np.ndarray) -> np.ndarray:
    """n-by-n matrix of column cross correlations c[i, j] = <f_i, f_j>."""
    E = F.entries if isinstance(F, FrameMatrix) else np.asarray(F)
    return E.conj().T @ E


def is_tight(F: FrameMatrix | np.ndarray, tol: float = 1e-9) -> bool:
    """Max-entry test of F F' = (n/m) I."""
    E = F.entries if isinstance(F, FrameMatrix) else np.asarray(F)
    m, n = E.shape
    R = E @ E.conj().T - (n / m) * np.eye(m)
    return float(np.abs(R).max()) <= tol


def welch_rms_bound(n: int, m: int) -> float:
    """Lower bound on the mean off-diagonal squared correlation."""
    if n == m:
        return 0.0
    return (n - m) / ((n - 1) * m)


def welch_max_bound(n: int, m: int) -> float:
    """Lower bound on the max off-diagonal squared correlation (ETFs meet it)."""
    return welch_rms_bound(n, m)


def welch_value(n: int, m: int) -> float:
    """The equiangular magnitude sqrt((n-m)/((n-1)m))."""
    return math.sqrt(welch_rms_bound(n, m))


def is_equiangular(F: FrameMatrix | np.ndarray, tol: float = 1e-9) -> bool:
    """True when every off-diagonal |c_ij| equals the Welch value within tol."""
    G = gram(F)
    n = G.shape[0]
    if n < 2:
        return True
    m = (F.entries if isinstance(F, FrameMatrix) else np.asarray(F)).shape[0]
    off = np.abs(G[~np.eye(n, dtype=bool)])
    return float(np.abs(off - welch_value(n, m)).max()) <= tol


def coherence(F: FrameMatrix | np.ndarray) -> float:
    """Largest off-diagonal |c_ij|."""
    G = np.abs(gram(F))
    np.fill_diagonal(G, 0.0)
    return float(G.max())
