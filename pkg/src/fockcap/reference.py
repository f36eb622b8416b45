"""Published heralded single-photon characterization data and synthetic run generators.

Only ``P1`` and ``P2+`` were reported per data set. To turn a row into a
distribution we take ``P0 = 1 - P1 - P2+`` and put all of ``P2+`` on ``m = 2``;
the real split over ``m >= 2`` is unknown, so any result built on these rows
inherits that assumption.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .stats import PhotonNumberDistribution, normalize

__all__ = ["TableRow", "TABLE_I", "row_distribution", "jittered_runs"]


@dataclass(frozen=True)
class TableRow:
    set_id: int
    p1: float
    p1_err: float
    p2plus: float
    p2plus_err: float
    g2: float
    g2_err: float
    origin_negativity: float
    origin_negativity_err: float
    capability: int  # reported; 14 means "at least 14"

    @property
    def p0(self) -> float:
        return 1.0 - self.p1 - self.p2plus


TABLE_I = {
    1: TableRow(1, 0.53, 0.01, 0.010, 0.006, 0.07, 0.05, -0.05, 0.02, 1),
    2: TableRow(2, 0.62, 0.02, 0.013, 0.008, 0.07, 0.04, -0.23, 0.03, 1),
    3: TableRow(3, 0.74, 0.01, 0.016, 0.008, 0.06, 0.03, -0.47, 0.02, 3),
    4: TableRow(4, 0.72, 0.01, 0.05, 0.01, 0.2, 0.04, -0.45, 0.02, 4),
    5: TableRow(5, 0.83, 0.01, 0.07, 0.01, 0.2, 0.03, -0.67, 0.02, 14),
    6: TableRow(6, 0.86, 0.01, 0.02, 0.01, 0.05, 0.03, -0.73, 0.02, 14),
    7: TableRow(7, 0.91, 0.01, 0.02, 0.01, 0.05, 0.02, -0.82, 0.02, 14),
}


def row_distribution(row: TableRow | int) -> PhotonNumberDistribution:
    """``{P0, P1, P2+}`` for a table row, multi-photon weight placed at ``m = 2``."""
    if isinstance(row, int):
        row = TABLE_I[row]
    return PhotonNumberDistribution([row.p0, row.p1, row.p2plus])


def jittered_runs(
    p1: float,
    p2: float,
    sigma_p1: float,
    sigma_p2: float,
    count: int,
    seed: int,
) -> list[PhotonNumberDistribution]:
    """Synthetic per-run statistics scattered around ``{1 - p1 - p2, p1, p2}``.

    ``p1`` and ``p2`` get independent Gaussian kicks of the given widths, the
    vacuum takes up the rest, negative entries are clipped to zero and the
    result renormalized.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    runs = []
    for _ in range(count):
        q1 = p1 + sigma_p1 * rng.standard_normal()
        q2 = p2 + sigma_p2 * rng.standard_normal()
        probs = np.clip([1.0 - q1 - q2, q1, q2], 0.0, None)
        runs.append(normalize(probs))
    return runs
