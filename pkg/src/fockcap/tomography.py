"""Photon-number statistics from phase-randomized homodyne data.

With the local-oscillator phase scrambled, a quadrature sample ``x`` drawn
from Fock state ``|m>`` has density ``|psi_m(x)|^2``; a Fock-diagonal state
gives the mixture ``sum_m p_m |psi_m(x)|^2`` and ``p`` is estimated by
expectation-maximization. Also hosts the synthetic data generators used to
close the loop in tests.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .stats import PhotonNumberDistribution, apply_loss, loss_matrix, normalize

__all__ = [
    "QuadratureDataset",
    "fock_quadrature_likelihood",
    "quadrature_response",
    "reconstruct_em",
    "synthesize_quadratures",
    "heralded_source_model",
    "CutoffWarning",
]

log = logging.getLogger(__name__)

GRID_POINTS = 4096
X_MAX = 12.0


class CutoffWarning(RuntimeWarning):
    """The reconstruction leaves significant weight on its highest Fock level."""


@dataclass(frozen=True)
class QuadratureDataset:
    """Homodyne samples (vacuum variance 1) and the detection efficiency to model."""

    samples: np.ndarray
    efficiency: float = 1.0
    label: str = ""

    def __post_init__(self):
        x = np.asarray(self.samples, dtype=np.float64).reshape(-1)
        if x.size == 0:
            raise ValueError("no quadrature samples")
        if not 0.0 < self.efficiency <= 1.0:
            raise ValueError("efficiency must lie in (0, 1]")
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)

    def __len__(self):
        return self.samples.size


def _oscillator_densities(cutoff: int, x: np.ndarray) -> np.ndarray:
    """``|psi_m(x)|^2`` for ``m = 0..cutoff``, shape ``(cutoff + 1, len(x))``."""
    x = np.asarray(x, dtype=np.float64)
    psi = np.empty((cutoff + 1,) + x.shape)
    psi[0] = (2 * np.pi) ** -0.25 * np.exp(-x**2 / 4)
    if cutoff >= 1:
        psi[1] = x * psi[0]
    for m in range(1, cutoff):
        psi[m + 1] = (x * psi[m] - math.sqrt(m) * psi[m - 1]) / math.sqrt(m + 1)
    return psi**2


def fock_quadrature_likelihood(m: int, x):
    """Phase-averaged quadrature density of ``|m>`` at ``x``.

    ``psi_0(x) = (2 pi)^(-1/4) exp(-x^2/4)`` and
    ``psi_{m+1} = (x psi_m - sqrt(m) psi_{m-1}) / sqrt(m+1)``.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    out = _oscillator_densities(m, np.atleast_1d(x))[m]
    return float(out[0]) if np.ndim(x) == 0 else out


def quadrature_response(cutoff: int, x, efficiency: float = 1.0) -> np.ndarray:
    """Loss-smeared response ``pi~_m(x) = sum_k C(m,k) eta^k (1-eta)^(m-k) pi_k(x)``.

    Shape ``(cutoff + 1, len(x))``. For ``efficiency == 1`` this is exactly the
    bare ``pi_m``.
    """
    pi = _oscillator_densities(cutoff, np.atleast_1d(x))
    if efficiency == 1.0:
        return pi
    return loss_matrix(cutoff, efficiency).T @ pi


def _loglik(resp: np.ndarray, p: np.ndarray) -> tuple[float, np.ndarray]:
    mix = p @ resp
    return float(np.sum(np.log(mix))), mix


def reconstruct_em(
    qd: QuadratureDataset,
    cutoff: int,
    iterations: int = 500,
    tol: float = 1e-10,
    return_loglik: bool = False,
):
    """Maximum-likelihood photon-number distribution by expectation-maximization.

    Starts from the uniform distribution over ``0..cutoff`` and iterates
    ``p_m <- p_m * mean_i[ pi~_m(x_i) / sum_k p_k pi~_k(x_i) ]`` until
    ``iterations`` is reached or the largest update drops below ``tol``.

    Parameters
    ----------
    qd : QuadratureDataset
    cutoff : int
        Highest Fock level in the model.
    iterations : int
    tol : float
    return_loglik : bool
        Also return the log-likelihood after every iteration (index 0 is the
        starting point).

    Returns
    -------
    PhotonNumberDistribution, or ``(distribution, loglik)``
    """
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    resp = quadrature_response(cutoff, qd.samples, qd.efficiency)
    p = np.full(cutoff + 1, 1.0 / (cutoff + 1))
    ll, mix = _loglik(resp, p)
    history = [ll]
    n = qd.samples.size
    for it in range(iterations):
        new = p * (resp @ (1.0 / mix)) / n
        new /= new.sum()
        ll_new, mix = _loglik(resp, new)
        # EM cannot decrease the likelihood; allow only summation rounding
        if ll_new < ll - 1e-12 * abs(ll):
            raise ArithmeticError(f"log-likelihood decreased at iteration {it}: {ll} -> {ll_new}")
        step = float(np.max(np.abs(new - p)))
        p, ll = new, ll_new
        history.append(ll)
        if step < tol:
            log.debug("EM converged after %d iterations", it + 1)
            break
    if p[-1] > 0.05:
        warnings.warn(
            f"{p[-1]:.3f} of the weight sits at the cutoff {cutoff}; raise the cutoff",
            CutoffWarning,
        )
    dist = normalize(p)
    if return_loglik:
        return dist, np.array(history)
    return dist


def _inverse_cdf_tables(cutoff: int):
    x = np.linspace(-X_MAX, X_MAX, GRID_POINTS)
    dens = _oscillator_densities(cutoff, x)
    dx = x[1] - x[0]
    cdf = np.concatenate(
        [np.zeros((cutoff + 1, 1)), np.cumsum(0.5 * (dens[:, 1:] + dens[:, :-1]) * dx, axis=1)],
        axis=1,
    )
    cdf /= cdf[:, -1:]
    return x, cdf


def synthesize_quadratures(
    d: PhotonNumberDistribution, count: int, eta_det: float = 1.0, seed: int = 0
) -> QuadratureDataset:
    """Draw phase-randomized homodyne samples from a Fock-diagonal state.

    Photon numbers are drawn from ``apply_loss(d, eta_det)``, then each
    quadrature from ``|psi_m|^2`` by inverse-CDF interpolation on a fixed grid.
    The returned data set records ``eta_det`` as its efficiency.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if not isinstance(d, PhotonNumberDistribution):
        d = PhotonNumberDistribution(d)
    lossy = apply_loss(d, eta_det)
    rng = np.random.Generator(np.random.PCG64(seed))
    m = rng.choice(lossy.probs.size, size=count, p=lossy.probs)
    u = rng.random(count)
    grid, cdf = _inverse_cdf_tables(lossy.cutoff)
    x = np.empty(count)
    for level in np.unique(m):
        sel = m == level
        x[sel] = np.interp(u[sel], cdf[level], grid)
    return QuadratureDataset(x, efficiency=eta_det)


def heralded_source_model(
    pump: float, escape: float = 1.0, herald_eff: float = 1.0, cutoff: int = 10
) -> PhotonNumberDistribution:
    """Heralded single photons from a two-mode squeezer.

    Pairs follow ``(1 - l) l^m`` with ``l = tanh(pump)^2``. A click on an
    on/off idler detector of efficiency ``herald_eff`` (probability
    ``1 - (1 - herald_eff)^m``) heralds the signal, which then suffers the
    escape efficiency as a pure loss.
    """
    if pump <= 0:
        raise ValueError("pump must be positive")
    if not (0.0 < escape <= 1.0 and 0.0 < herald_eff <= 1.0):
        raise ValueError("escape and herald_eff must lie in (0, 1]")
    lam = math.tanh(pump) ** 2
    m = np.arange(cutoff + 1)
    pairs = (1 - lam) * lam**m
    click = 1.0 - (1.0 - herald_eff) ** m
    return apply_loss(normalize(pairs * click), escape)
