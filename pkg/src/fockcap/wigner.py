"""Radial Wigner functions of Fock-diagonal states and their negative regions.

Convention: quadratures have vacuum variance 1, ``u = x^2 + p^2`` and

    2*pi*W(x, p) = exp(-u/2) * f(u),   f(u) = sum_M p_M (-1)^M L_M(u).

The Gaussian envelope never vanishes, so the sign of ``W`` is the sign of
the polynomial ``f``. ``f`` is stored in the Laguerre basis and evaluated with
the three-term recurrence; the monomial expansion is available but its
alternating coefficients are useless for sign analysis beyond degree ~30.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import laguerre as lag
from scipy.optimize import brentq, minimize_scalar

from .stats import PhotonNumberDistribution, apply_loss, fock, origin_negativity, pad_to

__all__ = [
    "RadialWignerPolynomial",
    "NegativeRegionStructure",
    "RootFindingError",
    "radial_wigner",
    "negative_regions",
    "ideal_region_count",
    "capability_test",
    "fit_attenuated_fock",
    "wigner_cut",
]

ROOT_TOL = 1e-10
# |f| below this multiple of its rounding scale counts as zero (grazing contact)
_NOISE_ULPS = 256


class RootFindingError(RuntimeError):
    pass


@dataclass(frozen=True)
class RadialWignerPolynomial:
    """``f(u)`` with ``2*pi*W = exp(-u/2) f(u)``.

    Attributes
    ----------
    laguerre_coeffs : np.ndarray
        ``c_M = (-1)^M p_M``, so ``f = sum_M c_M L_M``.
    origin : float
        ``f(0)``, identical to :func:`fockcap.stats.origin_negativity`.
    """

    laguerre_coeffs: np.ndarray
    origin: float

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(self.laguerre_coeffs)
        return int(nz[-1]) if nz.size else 0

    @property
    def coeffs(self) -> np.ndarray:
        """Monomial coefficients in ``u``, lowest order first."""
        return lag.lag2poly(self.laguerre_coeffs[: self.degree + 1])

    def __call__(self, u):
        return lag.lagval(u, self.laguerre_coeffs)

    def derivative(self, u):
        return lag.lagval(u, lag.lagder(self.laguerre_coeffs))

    def scale(self, u):
        """Rounding scale ``sum_M |c_M L_M(u)|`` used to decide when ``f`` is zero."""
        u = np.atleast_1d(np.asarray(u, dtype=float))
        L_prev = np.ones_like(u)
        acc = abs(self.laguerre_coeffs[0]) * L_prev
        if self.laguerre_coeffs.size > 1:
            L = 1.0 - u
            acc = acc + abs(self.laguerre_coeffs[1]) * np.abs(L)
            for k in range(1, self.laguerre_coeffs.size - 1):
                L_prev, L = L, ((2 * k + 1 - u) * L - k * L_prev) / (k + 1)
                acc = acc + abs(self.laguerre_coeffs[k + 1]) * np.abs(L)
        return acc

    def wigner(self, r):
        """``2*pi*W`` on a radial grid ``r`` (not ``u``)."""
        u = np.asarray(r, dtype=float) ** 2
        return np.exp(-u / 2) * self(u)

    def normalization(self) -> float:
        """``1/2 * int_0^inf exp(-u/2) f(u) du``, which is 1 for a normalized state.

        Uses ``int_0^inf exp(-u/2) L_M(u) du = 2 (-1)^M``.
        """
        c = self.laguerre_coeffs
        return float(np.sum(c * (-1.0) ** np.arange(c.size)))


@dataclass(frozen=True)
class NegativeRegionStructure:
    """Radial sign structure of a Wigner function.

    ``region_count`` counts maximal radial intervals with ``W < 0``; a negative
    disc around the origin counts as one region, the rest are annuli.
    """

    region_count: int
    origin_negative: bool
    root_radii: tuple = field(default=())

    @property
    def annulus_count(self) -> int:
        return self.region_count - int(self.origin_negative)

    def matches(self, other: NegativeRegionStructure) -> bool:
        return (
            self.region_count == other.region_count
            and self.origin_negative == other.origin_negative
        )


def radial_wigner(d) -> RadialWignerPolynomial:
    """Radial Wigner polynomial of a Fock-diagonal state."""
    if not isinstance(d, PhotonNumberDistribution):
        d = PhotonNumberDistribution(d)
    p = np.array(d.probs)
    c = p * (-1.0) ** np.arange(p.size)
    c.setflags(write=False)
    return RadialWignerPolynomial(c, origin_negativity(d))


def _grid(degree: int, u_max: float) -> np.ndarray:
    # Near the origin the nodes of L_M sit at u ~ j_{0,k}^2 / (4M + 2), evenly
    # spaced in r = sqrt(u), so the grid is uniform in r, not u.
    npts = max(16 * degree, 64) + 1
    return np.linspace(0.0, math.sqrt(u_max), npts) ** 2


def _is_zero(w: RadialWignerPolynomial, u: float, value: float) -> bool:
    return abs(value) <= _NOISE_ULPS * np.finfo(float).eps * float(w.scale(u)[0])


def _refine_root(w, a, b):
    try:
        return brentq(w, a, b, xtol=ROOT_TOL, rtol=4 * np.finfo(float).eps, maxiter=500)
    except (RuntimeError, ValueError) as exc:
        raise RootFindingError(f"no convergence on [{a:.6g}, {b:.6g}]: {exc}") from exc


def _polish_excursion(w, a, b, sign):
    """Look for an excursion through zero between ``a < b``.

    ``f`` has sign ``sign`` at both ends and ``sign * f`` was sampled with a
    local minimum inside. Returns the two roots bounding the excursion, or
    ``None`` if the polished extremum stays on the same side of zero (or only
    touches it, which is a grazing root).
    """
    res = minimize_scalar(lambda x: sign * float(w(x)), bounds=(a, b), method="bounded",
                          options={"xatol": ROOT_TOL})
    x = float(res.x)
    val = float(w(x))
    if sign * val >= 0 or _is_zero(w, x, val):
        return None
    return _refine_root(w, a, x), _refine_root(w, x, b)


def negative_regions(w: RadialWignerPolynomial) -> NegativeRegionStructure:
    """Count the maximal radial intervals on which ``f < 0``.

    Sign changes are bracketed on a grid and refined to ``1e-10`` in ``u``.
    Sampled local extrema that approach zero without a sign change are
    polished, catching narrow excursions that fall between grid points. An
    extremum that only touches zero (an even-multiplicity root) is grazing
    and opens no region.
    """
    deg = w.degree
    if deg == 0:
        neg = bool(w.origin < 0)
        return NegativeRegionStructure(int(neg), neg, ())

    u_max = 4.0 * deg + 20.0
    # The leading term of f is p_D u^D / D! > 0, so f is eventually positive;
    # widen the window until the sampled tail is.
    while w(u_max) <= 0:
        u_max *= 2
    u = _grid(deg, u_max)
    f = w(u)
    f[0] = w.origin
    noise = _NOISE_ULPS * np.finfo(float).eps * w.scale(u)
    sgn = np.where(np.abs(f) <= noise, 0.0, np.sign(f))

    roots = []
    nz = np.flatnonzero(sgn)
    for i, j in zip(nz[:-1], nz[1:]):
        if sgn[i] != sgn[j]:
            roots.append(_refine_root(w, u[i], u[j]))
    # unresolved excursions: three consecutive same-sign samples with the
    # middle one closest to zero
    s = sgn[1:-1]
    same = (s != 0) & (sgn[:-2] == s) & (sgn[2:] == s)
    a = s * f[1:-1]
    dip = same & (a <= s * f[:-2]) & (a <= s * f[2:])
    for k in np.flatnonzero(dip) + 1:
        pair = _polish_excursion(w, u[k - 1], u[k + 1], sgn[k])
        if pair is not None:
            roots.extend(pair)

    roots.sort()
    clean = []
    for r in roots:
        if not clean or r - clean[-1] > 10 * ROOT_TOL:
            clean.append(r)

    count = 0
    prev_negative = False
    lo = 0.0
    for hi in clean + [u_max]:
        mid = 0.5 * (lo + hi)
        val = float(w(mid))
        negative = val < 0 and not _is_zero(w, mid, val)
        if negative and not prev_negative:
            count += 1
        prev_negative = negative
        lo = hi
    return NegativeRegionStructure(count, bool(w.origin < 0), tuple(clean))


def ideal_region_count(n: int) -> NegativeRegionStructure:
    """Negative-region structure of the ideal Fock state ``|n>``.

    ``(-1)^n L_n`` has ``n`` simple positive roots, giving ``ceil(n/2)``
    negative regions, of which one is the central disc when ``n`` is odd.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    return NegativeRegionStructure((n + 1) // 2, n % 2 == 1, ())


def capability_test(output, n: int) -> bool:
    """Does the merged output reproduce the negative-region structure of ``|n>``?"""
    structure = negative_regions(radial_wigner(output))
    return structure.matches(ideal_region_count(n))


def _golden_section(fun, a, b, tol):
    invphi = (math.sqrt(5) - 1) / 2
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fun(d)
    # the endpoints are admissible too (eta = 1 for a pure Fock state)
    cands = [(fun(a), a), (fun(b), b), (fun(0.5 * (a + b)), 0.5 * (a + b))]
    return min(cands)[::-1]


def fit_attenuated_fock(output, n: int, tol: float = 1e-9) -> tuple[float, float]:
    """Least-squares fit of ``output`` by a lossy Fock state ``|n>``.

    Minimizes ``sum_{k=0..n} (output_k - apply_loss(|n>, eta)_k)^2`` over
    ``eta`` in ``[0, 1]`` by golden-section search.

    Returns
    -------
    eta : float
    residual : float
        Sum of squared differences at ``eta``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not isinstance(output, PhotonNumberDistribution):
        output = PhotonNumberDistribution(output)
    target = pad_to(output, max(output.cutoff, n))[: n + 1]
    ideal = fock(n)

    def residual(eta):
        return float(np.sum((target - apply_loss(ideal, eta).probs) ** 2))

    eta, res = _golden_section(residual, 0.0, 1.0, tol)
    return float(eta), float(res)


def wigner_cut(d, r) -> np.ndarray:
    """``2*pi*W(r)`` of a Fock-diagonal state along any radial line."""
    return radial_wigner(d).wigner(r)
