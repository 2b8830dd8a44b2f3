"""Limiting spectral laws: MANOVA(beta, gamma), Marchenko-Pastur, and the
eta-transform route to the inverse moment.

The MANOVA law describes eigenvalues of the Gram matrix of a random size-k
column subset of an m-by-n tight frame with beta = k/m and gamma = m/n.
Its continuous density on (r-, r+) is

    sqrt((x - r-)(r+ - x)) / (2 beta pi x (1 - gamma x)),
    r+- = (sqrt(beta (1 - gamma)) +- sqrt(1 - beta gamma))^2,

with a point mass max(0, 1 + 1/beta - 1/(beta gamma)) at 1/gamma and, when
beta > 1, a point mass 1 - 1/beta at zero.  The same law reparameterized by
(gamma, p = beta gamma) with the zero mass stripped appears in the erasure
moment bounds; both forms are exposed here.

Quadrature uses the substitution x = r- + (r+ - r-) sin^2(theta), which
removes both inverse-square-root edge singularities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate

__all__ = [
    "ManovaParams",
    "SupportEdges",
    "Atom",
    "ManovaAtomError",
    "support_edges",
    "manova_density",
    "manova_atoms",
    "manova_cdf",
    "ManovaDistribution",
    "mp_edges",
    "mp_density",
    "mp_moment_numeric",
    "manova_moment_numeric",
    "manova_moment_closed",
    "inverse_moment_amplification",
    "eta_tilde",
    "eta_normalized",
    "z_eta_limit",
    "eta_transform_chain",
]


class ManovaAtomError(ValueError):
    """Density requested exactly at a point mass; carries the Atom."""

    def __init__(self, atom):
        super().__init__(f"point mass {atom.mass} at x={atom.location}; "
                         "use manova_atoms for atoms")
        self.atom = atom


class Atom(NamedTuple):
    location: float
    mass: float


class SupportEdges(NamedTuple):
    r_minus: float
    r_plus: float


@dataclass(frozen=True)
class ManovaParams:
    """Aspect ratios beta = k/m, gamma = m/n (so p = k/n = beta*gamma)."""

    beta: float
    gamma: float
    field: str = "complex"

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive; got {self.beta}")
        if not 0 < self.gamma <= 1:
            raise ValueError(f"gamma must be in (0, 1]; got {self.gamma}")
        if self.field not in ("real", "complex"):
            raise ValueError(f"field must be 'real' or 'complex'; got {self.field!r}")
        if not self.p <= 1 + 1e-12:
            raise ValueError(f"p = beta*gamma = {self.p} exceeds 1")

    @property
    def p(self) -> float:
        return self.beta * self.gamma

    @classmethod
    def from_gamma_p(cls, gamma: float, p: float, field: str = "complex") -> "ManovaParams":
        return cls(beta=p / gamma, gamma=gamma, field=field)

    @classmethod
    def from_counts(cls, n: int, m: int, k: int, field: str = "complex") -> "ManovaParams":
        return cls(beta=k / m, gamma=m / n, field=field)


def support_edges(params: ManovaParams) -> SupportEdges:
    b, g = params.beta, params.gamma
    s = math.sqrt(b * (1.0 - g))
    t = math.sqrt(1.0 - b * g)
    return SupportEdges((s - t) ** 2, (s + t) ** 2)


def manova_atoms(params: ManovaParams) -> tuple[Atom, ...]:
    """Point masses of the beta-normalized law (total mass 1 with the
    continuous part)."""
    b, g = params.beta, params.gamma
    atoms = []
    if b > 1.0:
        atoms.append(Atom(0.0, 1.0 - 1.0 / b))
    top = 1.0 + 1.0 / b - 1.0 / (b * g)
    if top > 0.0:
        atoms.append(Atom(1.0 / g, top))
    return tuple(atoms)


def manova_density(x, params: ManovaParams):
    """Continuous part of the MANOVA(beta, gamma) law; zero off support.

    Raises ManovaAtomError when a scalar x sits exactly on a point mass.
    """
    edges = support_edges(params)
    b, g = params.beta, params.gamma
    if np.isscalar(x):
        for atom in manova_atoms(params):
            if x == atom.location:
                raise ManovaAtomError(atom)
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = (x > edges.r_minus) & (x < edges.r_plus)
    xi = x[inside]
    out[inside] = (np.sqrt((xi - edges.r_minus) * (edges.r_plus - xi))
                   / (2.0 * b * np.pi * xi * (1.0 - g * xi)))
    return float(out) if out.ndim == 0 else out


def _edge_substituted(params: ManovaParams):
    """Integrand factory: integral of g(x) f(x) dx over the support equals
    integral over theta in [0, pi/2] of g(x(th)) * w(th) dth."""
    edges = support_edges(params)
    b, g = params.beta, params.gamma
    span = edges.r_plus - edges.r_minus

    def x_of(th):
        return edges.r_minus + span * np.sin(th) ** 2

    def weight(th):
        x = x_of(th)
        s2 = np.sin(th) ** 2
        c2 = np.cos(th) ** 2
        return span ** 2 * s2 * c2 / (b * np.pi * x * (1.0 - g * x))

    return x_of, weight


def _integrate_against_density(fn, params: ManovaParams) -> float:
    """quad of fn(x) against the continuous density (edge substitution)."""
    x_of, weight = _edge_substituted(params)
    val, _ = integrate.quad(lambda th: fn(x_of(th)) * weight(th),
                            0.0, math.pi / 2.0, epsabs=1e-10, epsrel=1e-11,
                            limit=200)
    return val


def manova_cdf(x, params: ManovaParams):
    """CDF of the full law (continuous part plus point masses)."""
    return ManovaDistribution(params).cdf(x)


class ManovaDistribution:
    """MANOVA(beta, gamma) law with a cached cumulative grid.

    cdf() on arrays interpolates a fine trapezoid grid in the substituted
    variable (error ~1e-9); moment() and cdf_quad() use adaptive quadrature.
    """

    _GRID = 32769

    def __init__(self, params: ManovaParams):
        self.params = params
        self.edges = support_edges(params)
        self.atoms = manova_atoms(params)
        self._mass0 = sum(a.mass for a in self.atoms if a.location == 0.0)
        self._mass_top = sum(a.mass for a in self.atoms if a.location > 0.0)
        x_of, weight = _edge_substituted(params)
        th = np.linspace(0.0, math.pi / 2.0, self._GRID)
        self._th = th
        self._xgrid = x_of(th)
        self._cum = integrate.cumulative_trapezoid(weight(th), th, initial=0.0)

    def pdf(self, x):
        return manova_density(x, self.params)

    def _theta(self, x):
        span = self.edges.r_plus - self.edges.r_minus
        u = np.clip((np.asarray(x, dtype=float) - self.edges.r_minus) / span, 0.0, 1.0)
        return np.arcsin(np.sqrt(u))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        cont = np.interp(self._theta(x), self._th, self._cum)
        cont = np.where(x < self.edges.r_minus, 0.0, cont)
        cont = np.where(x >= self.edges.r_plus, self._cum[-1], cont)
        out = cont + np.where(x >= 0.0, self._mass0, 0.0)
        if self._mass_top:
            out = out + np.where(x >= 1.0 / self.params.gamma, self._mass_top, 0.0)
        return float(out) if out.ndim == 0 else out

    def cdf_quad(self, x: float) -> float:
        """Scalar CDF by adaptive quadrature (reference-quality)."""
        x = float(x)
        if x < self.edges.r_minus:
            cont = 0.0
        else:
            _, weight = _edge_substituted(self.params)
            hi = float(self._theta(min(x, self.edges.r_plus)))
            cont, _ = integrate.quad(weight, 0.0, hi, epsabs=1e-12, limit=200)
        out = cont + (self._mass0 if x >= 0.0 else 0.0)
        if self._mass_top and x >= 1.0 / self.params.gamma:
            out += self._mass_top
        return out

    def total_mass(self) -> float:
        return (_integrate_against_density(lambda x: np.ones_like(x), self.params)
                + self._mass0 + self._mass_top)

    def moment(self, d: int) -> float:
        """Integral of x^d against the full law (beta normalization)."""
        if d < 0 and self._mass0 > 0.0:
            raise ValueError("negative moment diverges: law has mass at zero")
        val = _integrate_against_density(lambda x: x ** d, self.params)
        if self._mass_top:
            val += self._mass_top * (1.0 / self.params.gamma) ** d
        if d >= 0:
            val += self._mass0 * (1.0 if d == 0 else 0.0)
        return val


# ---------------------------------------------------------------------------
# Marchenko-Pastur (the gamma -> 0 limit)

def mp_edges(beta: float) -> SupportEdges:
    return SupportEdges((1.0 - math.sqrt(beta)) ** 2, (1.0 + math.sqrt(beta)) ** 2)


def mp_density(x, beta: float):
    """Marchenko-Pastur density with ratio parameter beta in (0, 1]."""
    if not 0 < beta <= 1:
        raise ValueError(f"beta must be in (0, 1]; got {beta}")
    lo, hi = mp_edges(beta)
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = (x > lo) & (x < hi)
    xi = x[inside]
    out[inside] = np.sqrt((xi - lo) * (hi - xi)) / (2.0 * np.pi * beta * xi)
    return float(out) if out.ndim == 0 else out


def mp_moment_numeric(d: int, beta: float) -> float:
    """Integral of x^d against the MP(beta) density (edge substitution)."""
    lo, hi = mp_edges(beta)
    span = hi - lo
    if d < 0 and lo == 0.0:
        raise ValueError("negative moment diverges at the hard edge")

    def integrand(th):
        x = lo + span * np.sin(th) ** 2
        return x ** d * span ** 2 * np.sin(th) ** 2 * np.cos(th) ** 2 / (np.pi * beta * x)

    val, _ = integrate.quad(integrand, 0.0, math.pi / 2.0, epsabs=1e-10, limit=200)
    return val


# ---------------------------------------------------------------------------
# moments

def manova_moment_numeric(d: int, params: ManovaParams) -> float:
    """The n-normalized subset moment min(p, gamma) * E[t^d] of the
    stripped-zero (gamma, p) law; equals p * E_f[x^d] + atom term.

    d = -1 is the inverse moment and needs beta < 1.
    """
    d = int(d)
    if d < -1:
        raise ValueError("only d >= -1 is supported")
    if d == -1 and not params.beta < 1.0:
        raise ValueError("d = -1 requires beta < 1")
    p, g = params.p, params.gamma
    val = p * _integrate_against_density(lambda x: x ** d, params)
    top = max(0.0, p + g - 1.0)
    if top > 0.0:
        val += top * g ** (-d)
    return val


def manova_moment_closed(d: int, params: ManovaParams) -> float:
    """Exact polynomial value of the subset moment, d in 1..12."""
    from .moments import asymptotic_moment

    x = 1.0 / params.gamma - 1.0
    return asymptotic_moment(int(d)).evaluate(params.p, x)


def inverse_moment_amplification(beta: float, p: float) -> float:
    """Arithmetic-to-harmonic means ratio of the limiting subset spectrum:
    (1-p)/(1-beta) for beta < 1, (beta-p)/(beta-1) for beta > 1."""
    if beta == 1.0:
        raise ZeroDivisionError("amplification diverges at beta = 1")
    if not 0.0 <= p < 1.0:
        raise ValueError(f"p must be in [0, 1); got {p}")
    if beta < 1.0:
        return (1.0 - p) / (1.0 - beta)
    return (beta - p) / (beta - 1.0)


# ---------------------------------------------------------------------------
# eta transform of the erased-DFT Gram limit
#
# s and t are the row/column erasure fractions; the unit-norm frame picture
# has gamma = 1 - s and p = 1 - t.

class EtaChain(NamedTuple):
    eta_tilde: float
    eta_normalized: float
    z_eta_limit: float


def eta_tilde(s: float, t: float, z: float) -> float:
    """Eta transform of the erased Gram including its zero mass."""
    disc = 1.0 + (2.0 * (s + t) - 4.0 * s * t) * z + (s - t) ** 2 * z ** 2
    return (1.0 + (s + t) * z + math.sqrt(disc)) / (2.0 * (1.0 + z))


def eta_normalized(s: float, t: float, z: float) -> float:
    """Eta transform after stripping the zero mass (fraction max(s, t))."""
    mx = max(s, t)
    return (eta_tilde(s, t, z) - mx) / (1.0 - mx)


def z_eta_limit(s: float, t: float) -> float:
    """lim z->inf of z * eta_normalized = max(s, t)/|s - t|."""
    if s == t:
        raise ZeroDivisionError("limit diverges for s = t")
    return max(s, t) / abs(s - t)


def eta_transform_chain(s: float, t: float, z: float) -> EtaChain:
    """The three stages of the inverse-moment derivation at one (s, t, z)."""
    if not (0.0 <= s < 1.0 and 0.0 <= t < 1.0):
        raise ValueError("s and t must lie in [0, 1)")
    if z < 0.0:
        raise ValueError("z must be nonnegative")
    return EtaChain(eta_tilde(s, t, z), eta_normalized(s, t, z), z_eta_limit(s, t))
