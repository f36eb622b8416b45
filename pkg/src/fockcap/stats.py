"""Photon-number distributions and the single-mode statistics derived from them.

Everything here is Fock-diagonal: a state is just a probability vector over
photon number ``m = 0..cutoff``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, xlog1py, xlogy

__all__ = [
    "PhotonNumberDistribution",
    "SourceSummary",
    "DistributionError",
    "fock",
    "normalize",
    "mean_photon_number",
    "g2_zero",
    "apply_loss",
    "truncate_multiphoton",
    "origin_negativity",
    "summarize",
    "pad_to",
]

NORM_TOL = 1e-9


class DistributionError(ValueError):
    """Raised for invalid or degenerate photon-number distributions."""


@dataclass(frozen=True)
class PhotonNumberDistribution:
    """Probability vector over photon number.

    Parameters
    ----------
    probs : array_like
        Non-negative probabilities, ``probs[m]`` for ``m = 0..cutoff``.
    normalized : bool
        If True (default) the entries must sum to one within ``1e-9``.
        Pass False to hold raw weights, e.g. before :func:`normalize`.
    """

    probs: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        p = np.array(self.probs, dtype=np.float64).reshape(-1)
        if p.size == 0:
            raise DistributionError("empty distribution")
        if not np.all(np.isfinite(p)):
            raise DistributionError("non-finite probability")
        if np.any(p < 0):
            raise DistributionError(f"negative probability at m={int(np.argmax(p < 0))}")
        if self.normalized and abs(p.sum() - 1.0) > NORM_TOL:
            raise DistributionError(f"probabilities sum to {p.sum():.12g}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def cutoff(self) -> int:
        return self.probs.size - 1

    def __len__(self):
        return self.probs.size

    # explicit: __getitem__ is zero past the cutoff, so the legacy
    # sequence protocol would never stop
    def __iter__(self):
        return iter(self.probs)

    def __getitem__(self, m):
        if isinstance(m, (int, np.integer)) and m > self.cutoff:
            return 0.0
        return self.probs[m]

    def __eq__(self, other):
        if not isinstance(other, PhotonNumberDistribution):
            return NotImplemented
        return self.normalized == other.normalized and np.array_equal(self.probs, other.probs)

    def __hash__(self):
        return hash((self.normalized, self.probs.tobytes()))

    @property
    def p0(self) -> float:
        return float(self[0])

    @property
    def p1(self) -> float:
        return float(self[1])

    @property
    def p2plus(self) -> float:
        return float(self.probs[2:].sum())

    def support_cutoff(self) -> int:
        """Index of the last strictly positive entry (0 for an all-zero tail)."""
        nz = np.flatnonzero(self.probs)
        return int(nz[-1]) if nz.size else 0

    def trimmed(self) -> PhotonNumberDistribution:
        """Copy without trailing exact zeros."""
        return PhotonNumberDistribution(self.probs[: self.support_cutoff() + 1], self.normalized)


@dataclass(frozen=True)
class SourceSummary:
    """Single-copy figures of merit of a source (one row of a characterization table)."""

    p1: float
    p2plus: float
    g2: float
    origin_negativity: float

    def __post_init__(self):
        if not (0.0 <= self.p1 <= 1.0 and 0.0 <= self.p2plus <= 1.0):
            raise DistributionError("p1 and p2plus must lie in [0, 1]")
        if self.p1 + self.p2plus > 1.0 + NORM_TOL:
            raise DistributionError("p1 + p2plus exceeds 1")
        if self.g2 < 0:
            raise DistributionError("g2 must be non-negative")


def _as_dist(d) -> PhotonNumberDistribution:
    if isinstance(d, PhotonNumberDistribution):
        return d
    return PhotonNumberDistribution(d)


def fock(n: int, cutoff: int | None = None) -> PhotonNumberDistribution:
    """Pure Fock state ``|n>`` as a distribution, optionally zero-padded to ``cutoff``."""
    cutoff = n if cutoff is None else cutoff
    if n < 0 or cutoff < n:
        raise ValueError("need 0 <= n <= cutoff")
    p = np.zeros(cutoff + 1)
    p[n] = 1.0
    return PhotonNumberDistribution(p)


def pad_to(d: PhotonNumberDistribution, cutoff: int) -> np.ndarray:
    """Probability array zero-padded (never truncated) to ``cutoff``."""
    if cutoff < d.cutoff:
        raise ValueError("pad_to cannot shrink a distribution")
    out = np.zeros(cutoff + 1)
    out[: d.probs.size] = d.probs
    return out


def normalize(d) -> PhotonNumberDistribution:
    """Rescale a distribution (or raw weights) to unit sum."""
    if isinstance(d, PhotonNumberDistribution):
        p = d.probs
    else:
        p = np.asarray(d, dtype=np.float64)
        PhotonNumberDistribution(p, normalized=False)  # validates
    total = p.sum()
    if not total > 0:
        raise DistributionError("degenerate distribution")
    if abs(total - 1.0) <= 4 * p.size * np.finfo(float).eps:
        # already normalized to rounding: leave the bits alone (idempotence)
        return PhotonNumberDistribution(p)
    q = p / total
    # a second pass absorbs the rounding of the first division
    return PhotonNumberDistribution(q / q.sum())


def mean_photon_number(d) -> float:
    d = _as_dist(d)
    return float(np.dot(np.arange(d.probs.size), d.probs))


def g2_zero(d) -> float:
    """Second-order autocorrelation at zero delay, ``<m(m-1)> / <m>^2``."""
    d = _as_dist(d)
    m = np.arange(d.probs.size, dtype=np.float64)
    mean = float(np.dot(m, d.probs))
    if mean <= 0:
        raise DistributionError("vacuum-only state")
    return float(np.dot(m * (m - 1), d.probs)) / mean**2


def loss_matrix(cutoff: int, eta: float) -> np.ndarray:
    """Binomial attenuation kernel ``K[k, m] = C(m, k) eta^k (1-eta)^(m-k)``."""
    m = np.arange(cutoff + 1)[None, :]
    k = np.arange(cutoff + 1)[:, None]
    valid = k <= m
    mk = np.where(valid, m - k, 0)
    # xlogy/xlog1py give 0 * log(0) = 0, so eta in {0, 1} needs no special case
    logk = (gammaln(m + 1) - gammaln(k + 1) - gammaln(mk + 1)
            + xlogy(k, eta) + xlog1py(mk, -eta))
    return np.where(valid, np.exp(logk), 0.0)


def apply_loss(d, eta: float) -> PhotonNumberDistribution:
    """Pass a distribution through a pure-loss channel of transmissivity ``eta``.

    The cutoff is kept; the channel never creates photons.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    d = _as_dist(d)
    if eta == 1.0:
        return d
    out = loss_matrix(d.cutoff, eta) @ d.probs
    return PhotonNumberDistribution(out / out.sum())


def truncate_multiphoton(d) -> PhotonNumberDistribution:
    """Drop every ``m >= 2`` component and renormalize over ``{p0, p1}``."""
    d = _as_dist(d)
    head = np.array([d[0], d[1]], dtype=np.float64)
    if not head.sum() > 0:
        raise DistributionError("no vacuum or single-photon weight to keep")
    return normalize(head)


def origin_negativity(d) -> float:
    """``2*pi*W(0,0) = sum_m (-1)^m p_m`` (vacuum quadrature variance 1)."""
    d = _as_dist(d)
    p = d.probs
    # even and odd parts summed separately: one subtraction, no alternating accumulation
    # clip absorbs a normalization rounded a few ulps above one
    return float(np.clip(p[0::2].sum() - p[1::2].sum(), -1.0, 1.0))


def summarize(runs) -> SourceSummary:
    """Average single-copy figures of merit over a collection of runs.

    A single distribution is treated as a one-run collection.
    """
    runs = [runs] if isinstance(runs, PhotonNumberDistribution) else list(runs)
    if not runs:
        raise DistributionError("no runs to summarize")
    p1 = float(np.mean([r.p1 for r in runs]))
    p2 = float(np.mean([r.p2plus for r in runs]))
    g2 = float(np.mean([g2_zero(r) for r in runs]))
    w0 = float(np.mean([origin_negativity(r) for r in runs]))
    return SourceSummary(p1=min(p1, 1.0), p2plus=min(p2, 1.0), g2=g2, origin_negativity=w0)
