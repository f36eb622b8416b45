"""Conditional bunching of independent photon-number statistics.

``n`` Fock-diagonal inputs enter a balanced ``n``-port (every first-row
intensity ``|U_1j|^2 = 1/n``) and we post-select on every photon leaving
through mode 1 with vacuum in the remaining modes. For input ``|m_1..m_n>``
that event has probability ``M!/prod(m_j!) * n^-M`` with ``M = sum m_j``;
phases of ``U`` drop out, so the unitary itself is never built.

Two backends compute the same joint probabilities ``Q_M``:

* :func:`merge_bruteforce` enumerates every input tuple (cost ``(c+1)^n``)
  and is kept as the reference.
* :func:`merge_convolution` multiplies exponential generating functions one
  input at a time, which is polynomial in ``n`` and the cutoff.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import gammaln

from .stats import DistributionError, PhotonNumberDistribution

__all__ = [
    "BunchingResult",
    "BudgetExceeded",
    "PrecisionWarning",
    "bunching_weight",
    "log_bunching_weight",
    "merge",
    "merge_bruteforce",
    "merge_convolution",
]

DEFAULT_TERM_BUDGET = 10**8
_CHUNK = 1 << 18


class BudgetExceeded(RuntimeError):
    """The brute-force enumeration would exceed its term budget."""


class PrecisionWarning(RuntimeWarning):
    """Accumulated rounding may exceed the advertised accuracy."""


@dataclass(frozen=True)
class BunchingResult:
    """Outcome of merging ``n`` inputs into one mode.

    Attributes
    ----------
    unnormalized : np.ndarray
        ``Q_M``, joint probability of total photon number ``M`` *and*
        successful bunching.
    success_probability : float
        ``sum_M Q_M``.
    output : PhotonNumberDistribution
        ``Q / sum(Q)``, the conditional output statistics.
    """

    unnormalized: np.ndarray
    success_probability: float
    output: PhotonNumberDistribution

    @classmethod
    def from_q(cls, q: np.ndarray) -> BunchingResult:
        q = np.asarray(q, dtype=np.float64)
        q.setflags(write=False)
        s = math.fsum(q)
        if not s > 0:
            raise DistributionError("bunching success probability underflowed to zero")
        out = q / s
        return cls(q, s, PhotonNumberDistribution(out / out.sum()))

    @property
    def n_photons_max(self) -> int:
        return self.unnormalized.size - 1


def log_bunching_weight(m: Sequence[int], n: int) -> float:
    """Natural log of :func:`bunching_weight`."""
    m = np.asarray(m, dtype=np.int64)
    if n < 1:
        raise ValueError("n must be >= 1")
    if m.size != n:
        raise ValueError(f"expected {n} occupation numbers, got {m.size}")
    if np.any(m < 0):
        raise ValueError("occupation numbers must be non-negative")
    total = int(m.sum())
    return float(gammaln(total + 1) - gammaln(m + 1).sum() - total * math.log(n))


def bunching_weight(m: Sequence[int], n: int) -> float:
    """Probability that ``|m_1..m_n>`` exits a balanced n-port entirely in mode 1.

    Evaluated in log space, so occupation totals in the hundreds are safe.

    >>> bunching_weight((1, 1), 2)
    0.5
    """
    return math.exp(log_bunching_weight(m, n))


def _canonical(inputs: Sequence[PhotonNumberDistribution]) -> list[np.ndarray]:
    # The merge is symmetric in its inputs. Sorting them first fixes the
    # floating-point reduction order, so permuted inputs give identical bits.
    if len(inputs) < 1:
        raise ValueError("need at least one input")
    arrays = []
    for d in inputs:
        if not isinstance(d, PhotonNumberDistribution):
            d = PhotonNumberDistribution(d)
        if not d.normalized:
            raise DistributionError("bunching inputs must be normalized")
        arrays.append(np.asarray(d.probs))
    return sorted(arrays, key=lambda a: (a.size, tuple(a)))


def merge_bruteforce(
    inputs: Sequence[PhotonNumberDistribution], budget: int = DEFAULT_TERM_BUDGET
) -> BunchingResult:
    """Merge by explicit enumeration of every input photon-number tuple.

    ``Q_M = sum_{m: sum m = M} prod_j p_j(m_j) * bunching_weight(m, n)``.

    Raises
    ------
    BudgetExceeded
        If ``prod_j (cutoff_j + 1)`` exceeds ``budget``.
    """
    arrays = _canonical(inputs)
    n = len(arrays)
    shape = tuple(a.size for a in arrays)
    terms = math.prod(shape)
    if terms > budget:
        raise BudgetExceeded(
            f"{terms} terms exceed the brute-force budget of {budget}; use merge_convolution"
        )
    max_total = sum(s - 1 for s in shape)
    with np.errstate(divide="ignore"):
        logp = [np.log(a) for a in arrays]
    lfact = gammaln(np.arange(max_total + 1) + 1)
    log_n = math.log(n)

    q = np.zeros(max_total + 1)
    for start in range(0, terms, _CHUNK):
        flat = np.arange(start, min(start + _CHUNK, terms))
        idx = np.unravel_index(flat, shape)
        total = np.zeros(flat.size, dtype=np.int64)
        logw = np.zeros(flat.size)
        for j, mj in enumerate(idx):
            total += mj
            logw += logp[j][mj] - lfact[mj]
        logw += lfact[total] - total * log_n
        q += np.bincount(total, weights=np.exp(logw), minlength=max_total + 1)
    return BunchingResult.from_q(q)


def _binomial_kernel(total_max: int, m_max: int, p_new: float) -> np.ndarray:
    """``B[M, m] = C(M, m) p_new^m (1 - p_new)^(M - m)`` for ``m <= min(M, m_max)``."""
    M = np.arange(total_max + 1)[:, None]
    m = np.arange(m_max + 1)[None, :]
    valid = m <= M
    Mv = np.where(valid, M, m)
    with np.errstate(divide="ignore", invalid="ignore"):
        logb = (
            gammaln(Mv + 1) - gammaln(m + 1) - gammaln(Mv - m + 1)
            + m * math.log(p_new)
            + np.where(Mv - m > 0, (Mv - m) * np.log1p(-p_new), 0.0)
        )
    return np.where(valid, np.exp(logb), 0.0)


def merge_convolution(inputs: Sequence[PhotonNumberDistribution]) -> BunchingResult:
    """Merge by multiplying exponential generating functions.

    With ``e_j(z) = sum_m p_j(m) z^m / m!`` the joint probabilities are
    ``Q_M = M! n^-M [z^M] prod_j e_j(z)``. The product is built one factor at
    a time on the rescaled sequence ``S_k(M) = M! k^-M [z^M] prod_{j<=k} e_j``,
    for which adding input ``k+1`` is a convolution with binomial weights
    ``C(M, m) (1/(k+1))^m (k/(k+1))^(M-m)``. Every term is non-negative and at
    most one, so nothing overflows and no cancellation occurs.
    """
    arrays = _canonical(inputs)
    s = arrays[0].copy()
    k = 1
    n_ops = 0
    for a in arrays[1:]:
        new_max = s.size - 1 + a.size - 1
        kern = _binomial_kernel(new_max, a.size - 1, 1.0 / (k + 1))
        nxt = np.zeros(new_max + 1)
        for m in range(a.size):
            if a[m] == 0.0:
                continue
            nxt[m:m + s.size] += a[m] * kern[m:m + s.size, m] * s
        n_ops += a.size
        s = nxt
        k += 1
    # Non-negative accumulation: relative error grows at most linearly in the
    # number of rounding steps per entry.
    rel_err = 4 * n_ops * np.finfo(float).eps
    if rel_err > 1e-8:
        warnings.warn(f"estimated relative error {rel_err:.1e} exceeds 1e-8", PrecisionWarning)
    return BunchingResult.from_q(s)


def merge(inputs: Sequence[PhotonNumberDistribution], backend: str = "fast") -> BunchingResult:
    """Dispatch to ``merge_convolution`` (``"fast"``) or ``merge_bruteforce`` (``"oracle"``)."""
    if backend == "fast":
        return merge_convolution(inputs)
    if backend == "oracle":
        return merge_bruteforce(inputs)
    raise ValueError(f"unknown backend {backend!r}")
