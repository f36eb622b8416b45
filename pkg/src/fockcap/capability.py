"""Fock-state capability of a single-photon source.

A source has the capability of ``|n>`` when ``n`` of its photon-number
statistics, bunched into one output mode, leave a Wigner function with the
same negative-region structure as the ideal ``|n>``.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .bunching import merge_convolution
from .stats import (
    PhotonNumberDistribution,
    SourceSummary,
    apply_loss,
    normalize,
    pad_to,
    summarize,
    truncate_multiphoton,
)
from .wigner import NegativeRegionStructure, ideal_region_count, negative_regions, radial_wigner

__all__ = [
    "DataSet",
    "CapabilityReport",
    "partition_dataset",
    "averaged_merge",
    "capability",
    "capability_simplified",
    "loss_depth_sweep",
    "default_threads",
]

THREADS_ENV = "FOCKCAP_THREADS"


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class DataSet:
    """Photon-number statistics from repeated runs under fixed conditions."""

    runs: tuple
    label: str = ""
    summary: SourceSummary = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        runs = tuple(r if isinstance(r, PhotonNumberDistribution) else PhotonNumberDistribution(r)
                     for r in self.runs)
        if not runs:
            raise ValueError("a data set needs at least one run")
        if not all(r.normalized for r in runs):
            raise ValueError("all runs must be normalized")
        object.__setattr__(self, "runs", runs)
        object.__setattr__(self, "summary", summarize(runs))

    def __len__(self):
        return len(self.runs)

    def map(self, fn) -> DataSet:
        return DataSet(tuple(fn(r) for r in self.runs), self.label)


@dataclass(frozen=True)
class CapabilityReport:
    """Per-``n`` outcome of the capability test.

    ``passes[n - 1]`` and ``region_counts[n - 1]`` refer to target ``|n>``.
    ``capability`` is the largest passing ``n`` (0 if none pass); passes need
    not form a prefix and are reported as computed.
    """

    capability: int
    passes: tuple
    region_counts: tuple
    n_max: int
    choices: int
    seed: int | None
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def monotone(self) -> bool:
        return all(self.passes[: self.capability])

    def as_dict(self) -> dict:
        return {
            "capability": self.capability,
            "n_max": self.n_max,
            "choices": self.choices,
            "seed": self.seed,
            "passes": list(self.passes),
            "region_counts": [
                {
                    "n": n,
                    "region_count": s.region_count,
                    "origin_negative": s.origin_negative,
                    "ideal_region_count": ideal_region_count(n).region_count,
                }
                for n, s in enumerate(self.region_counts, start=1)
            ],
            "diagnostics": self.diagnostics,
        }


def _mean(arrays: Sequence[np.ndarray]) -> np.ndarray:
    # mean about the first entry: identical inputs reproduce it bit for bit
    ref = arrays[0]
    if len(arrays) == 1:
        return ref.copy()
    return ref + np.sum([a - ref for a in arrays[1:]], axis=0) / len(arrays)


def average_distributions(dists: Sequence[PhotonNumberDistribution]) -> PhotonNumberDistribution:
    """Entrywise mean of distributions padded to a common cutoff, renormalized."""
    cutoff = max(d.cutoff for d in dists)
    return normalize(_mean([pad_to(d, cutoff) for d in dists]))


def _seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if seed is None:
        raise ValueError("a seed is required for randomized partitioning")
    return np.random.SeedSequence(int(seed))


def partition_dataset(ds: DataSet, n: int, seed) -> list[PhotonNumberDistribution]:
    """Shuffle runs and split them into ``n`` near-equal groups, averaged per group.

    The shuffle uses PCG64 seeded through ``numpy.random.SeedSequence``, which
    is portable across platforms and numpy versions.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if len(ds.runs) < n:
        raise ValueError(f"data set has {len(ds.runs)} runs, cannot form {n} groups")
    rng = np.random.Generator(np.random.PCG64(_seed_sequence(seed)))
    order = rng.permutation(len(ds.runs))
    groups = np.array_split(order, n)
    return [average_distributions([ds.runs[i] for i in g]) for g in groups]


def averaged_merge(ds: DataSet, n: int, choices: int, seed) -> PhotonNumberDistribution:
    """Bunched output averaged over ``choices`` random partitions of the runs.

    The Wigner function is linear in the photon-number distribution, so
    averaging the outputs is the same as averaging their Wigner functions.
    """
    if choices < 1:
        raise ValueError("choices must be >= 1")
    children = _seed_sequence(seed).spawn(choices)
    outputs = [merge_convolution(partition_dataset(ds, n, s)).output for s in children]
    return average_distributions(outputs)


def _structure(d: PhotonNumberDistribution) -> NegativeRegionStructure:
    return negative_regions(radial_wigner(d))


def _report(structures: list[NegativeRegionStructure], outputs, n_max, choices, seed):
    passes = tuple(s.matches(ideal_region_count(n)) for n, s in enumerate(structures, start=1))
    passing = [n for n, ok in enumerate(passes, start=1) if ok]
    over = [n for n, s in enumerate(structures, start=1)
            if s.region_count > ideal_region_count(n).region_count]
    diagnostics = {
        "regions_exceed_ideal": over,
        "tail_mass_above_n": [float(o.probs[n + 1:].sum()) for n, o in enumerate(outputs, start=1)],
    }
    return CapabilityReport(
        capability=max(passing) if passing else 0,
        passes=passes,
        region_counts=tuple(structures),
        n_max=n_max,
        choices=choices,
        seed=seed,
        diagnostics=diagnostics,
    )


def _run(fn, items: Iterable, threads: int | None):
    threads = default_threads() if threads is None else threads
    items = list(items)
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def capability(
    ds: DataSet, n_max: int = 14, choices: int = 30, seed: int = 0, threads: int | None = None
) -> CapabilityReport:
    """Full capability test on a data set for every ``n`` in ``1..n_max``."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")

    def one(n):
        out = averaged_merge(ds, n, choices, seed)
        return out, _structure(out)

    results = _run(one, range(1, n_max + 1), threads)
    outputs = [r[0] for r in results]
    return _report([r[1] for r in results], outputs, n_max, choices, seed)


def capability_simplified(
    d: PhotonNumberDistribution, n_max: int = 14, threads: int | None = None
) -> CapabilityReport:
    """Capability with ``n`` identical copies of one distribution, no partitioning."""
    if not isinstance(d, PhotonNumberDistribution):
        d = PhotonNumberDistribution(d)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")

    def one(n):
        out = merge_convolution([d] * n).output
        return out, _structure(out)

    results = _run(one, range(1, n_max + 1), threads)
    return _report([r[1] for r in results], [r[0] for r in results], n_max, 1, None)


def loss_depth_sweep(
    source,
    n_max: int,
    etas: Iterable[float],
    truncated: bool = False,
    choices: int = 1,
    seed: int | None = None,
    threads: int | None = None,
) -> list[tuple[float, int]]:
    """Capability versus attenuation.

    ``source`` is either a single distribution (identical-copy test) or a
    :class:`DataSet` (full test, needs ``seed``). With ``truncated`` the
    multi-photon part of every input is dropped before attenuation.
    """
    etas = [float(e) for e in etas]
    if any(not 0.0 <= e <= 1.0 for e in etas):
        raise ValueError("every eta must lie in [0, 1]")
    table = []
    for eta in etas:
        def prep(r, eta=eta):
            return apply_loss(truncate_multiphoton(r) if truncated else r, eta)

        if isinstance(source, DataSet):
            rep = capability(source.map(prep), n_max, choices, seed, threads)
        else:
            rep = capability_simplified(prep(source), n_max, threads)
        table.append((eta, rep.capability))
    return table
