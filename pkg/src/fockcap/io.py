"""Reading distributions, data sets and quadrature files; writing reports.

Formats
-------
Distribution, JSON : ``{"probs": [p0, p1, ...], "normalized": true}``
Distribution, CSV  : one probability per line, row index = photon number.
Data set           : a directory of distribution files (read in name order),
                     or a JSON manifest
                     ``{"label": "...", "runs": ["a.json", {"path": "b.csv"}]}``
                     with paths relative to the manifest.
Quadratures, CSV   : one sample per line, optionally preceded by a JSON
                     header line such as ``{"efficiency": 0.85}``.

All writers are byte-deterministic: sorted keys, floats at 12 significant
digits.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Sequence

import numpy as np

from .bunching import BunchingResult
from .capability import CapabilityReport, DataSet
from .stats import DistributionError, PhotonNumberDistribution, normalize
from .tomography import QuadratureDataset
from .wigner import NegativeRegionStructure

__all__ = [
    "DataFileError",
    "read_distribution",
    "write_distribution",
    "load_dataset",
    "read_quadratures",
    "write_quadratures",
    "emit_report",
    "emit_wigner_cut",
    "structure_dict",
]

RENORM_TOL = 1e-6
DIST_SUFFIXES = (".json", ".csv", ".txt")


class DataFileError(ValueError):
    """A data file could not be parsed or failed validation."""

    def __init__(self, path, message, line=None):
        self.path = str(path)
        self.line = line
        where = f"{path}:{line}" if line is not None else f"{path}"
        super().__init__(f"{where}: {message}")


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _round(obj):
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            return None
        return float(_fmt(obj))
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_round(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(_round(obj), sort_keys=True, indent=2) + "\n"


def _validate(path, probs, renormalize: bool, line_of=None) -> PhotonNumberDistribution:
    arr = np.asarray(probs, dtype=np.float64)
    if arr.size == 0:
        raise DataFileError(path, "no probabilities")
    bad = np.flatnonzero(~np.isfinite(arr) | (arr < 0))
    if bad.size:
        i = int(bad[0])
        line = line_of(i) if line_of else None
        raise DataFileError(path, f"invalid probability {arr[i]!r} at m={i}", line)
    total = arr.sum()
    if abs(total - 1.0) > RENORM_TOL:
        if not renormalize:
            raise DataFileError(path, f"probabilities sum to {total:.9g}; use renormalize to accept")
        if total <= 0:
            raise DataFileError(path, "degenerate distribution")
    try:
        return normalize(arr)
    except DistributionError as exc:
        raise DataFileError(path, str(exc)) from exc


def _read_csv_values(path: Path) -> tuple[list[float], list[int], dict]:
    values, lines, header = [], [], {}
    with open(path, newline="") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            if text.startswith("{"):
                if values:
                    raise DataFileError(path, "JSON header must precede the data", lineno)
                try:
                    header = json.loads(text)
                except json.JSONDecodeError as exc:
                    raise DataFileError(path, f"bad JSON header: {exc.msg}", lineno) from exc
                continue
            cell = next(csv.reader([text]))[0]
            try:
                values.append(float(cell))
            except ValueError:
                raise DataFileError(path, f"not a number: {cell!r}", lineno) from None
            lines.append(lineno)
    return values, lines, header


def read_distribution(path, renormalize: bool = False) -> PhotonNumberDistribution:
    """Load one distribution from JSON or CSV."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        try:
            payload = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise DataFileError(path, f"invalid JSON: {exc.msg}", exc.lineno) from exc
        probs = payload.get("probs") if isinstance(payload, dict) else payload
        if not isinstance(probs, list):
            raise DataFileError(path, "expected an object with a 'probs' list")
        declared = payload.get("normalized", True) if isinstance(payload, dict) else True
        return _validate(path, probs, renormalize or not declared)
    values, lines, _ = _read_csv_values(path)
    return _validate(path, values, renormalize, line_of=lambda i: lines[i])


def write_distribution(d: PhotonNumberDistribution, path=None) -> str:
    text = dumps({"probs": list(d.probs), "normalized": True})
    if path is not None:
        Path(path).write_text(text)
    return text


def _manifest_entries(path: Path, payload) -> tuple[list[Path], str]:
    if isinstance(payload, list):
        entries, label = payload, path.stem
    elif isinstance(payload, dict) and "runs" in payload:
        entries, label = payload["runs"], str(payload.get("label", path.stem))
    else:
        raise DataFileError(path, "manifest needs a 'runs' list")
    files = []
    for e in entries:
        rel = e.get("path") if isinstance(e, dict) else e
        if not isinstance(rel, str):
            raise DataFileError(path, f"bad manifest entry {e!r}")
        files.append((path.parent / rel).resolve())
    return files, label


def load_dataset(path, renormalize: bool = False, label: str | None = None) -> DataSet:
    """Load a data set from a directory, a manifest, or a list of files."""
    if isinstance(path, (list, tuple)):
        files = [Path(p) for p in path]
        default_label = ""
    else:
        path = Path(path)
        if not path.exists():
            raise DataFileError(path, "no such file or directory")
        if path.is_dir():
            files = sorted(p for p in path.iterdir() if p.suffix.lower() in DIST_SUFFIXES)
            default_label = path.name
        else:
            try:
                payload = json.loads(path.read_text())
            except json.JSONDecodeError as exc:
                raise DataFileError(path, f"invalid JSON: {exc.msg}", exc.lineno) from exc
            if isinstance(payload, dict) and "probs" in payload:
                files, default_label = [path], path.stem
            else:
                files, default_label = _manifest_entries(path, payload)
    if not files:
        raise DataFileError(path, "no distribution files found")
    runs = tuple(read_distribution(f, renormalize) for f in files)
    return DataSet(runs, label if label is not None else default_label)


def read_quadratures(path, efficiency: float | None = None) -> QuadratureDataset:
    path = Path(path)
    values, _, header = _read_csv_values(path)
    if not values:
        raise DataFileError(path, "no samples")
    eff = efficiency if efficiency is not None else float(header.get("efficiency", 1.0))
    return QuadratureDataset(np.array(values), efficiency=eff, label=path.stem)


def write_quadratures(qd: QuadratureDataset, path=None) -> str:
    buf = io.StringIO()
    buf.write(json.dumps({"efficiency": _round(qd.efficiency)}) + "\n")
    for x in qd.samples:
        buf.write(_fmt(x) + "\n")
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def structure_dict(s: NegativeRegionStructure) -> dict:
    return {
        "region_count": s.region_count,
        "annulus_count": s.annulus_count,
        "origin_negative": s.origin_negative,
        "root_u": list(s.root_radii),
        "root_r": [math.sqrt(u) for u in s.root_radii],
    }


def _capability_table(rep: CapabilityReport) -> str:
    out = [f"capability: {rep.capability}   (n_max={rep.n_max}, choices={rep.choices}, seed={rep.seed})",
           f"{'n':>4} {'pass':>5} {'regions':>8} {'ideal':>6} {'origin<0':>9}"]
    d = rep.as_dict()
    for row, ok in zip(d["region_counts"], rep.passes):
        out.append(f"{row['n']:>4} {'yes' if ok else 'no':>5} {row['region_count']:>8} "
                   f"{row['ideal_region_count']:>6} {str(row['origin_negative']):>9}")
    return "\n".join(out) + "\n"


def emit_report(report, fmt: str = "json") -> str:
    """Serialize a capability report, bunching result or sweep table.

    ``fmt`` is ``"json"``, ``"csv"`` or ``"table"``.
    """
    if fmt not in ("json", "csv", "table"):
        raise ValueError(f"unknown format {fmt!r}")
    if isinstance(report, CapabilityReport):
        if fmt == "json":
            return dumps(report.as_dict())
        if fmt == "table":
            return _capability_table(report)
        rows = ["n,pass,region_count,ideal_region_count,origin_negative"]
        for row, ok in zip(report.as_dict()["region_counts"], report.passes):
            rows.append(f"{row['n']},{int(ok)},{row['region_count']},"
                        f"{row['ideal_region_count']},{int(row['origin_negative'])}")
        return "\n".join(rows) + "\n"
    if isinstance(report, BunchingResult):
        if fmt == "json":
            return dumps({"Q": list(report.unnormalized), "success": report.success_probability,
                          "output": list(report.output.probs)})
        rows = ["M,Q,output"] if fmt == "csv" else [f"success probability: {_fmt(report.success_probability)}",
                                                     f"{'M':>4} {'Q':>20} {'output':>20}"]
        for M, (q, o) in enumerate(zip(report.unnormalized, report.output.probs)):
            rows.append(f"{M},{_fmt(q)},{_fmt(o)}" if fmt == "csv" else f"{M:>4} {_fmt(q):>20} {_fmt(o):>20}")
        return "\n".join(rows) + "\n"
    if isinstance(report, (list, tuple)):
        table: Sequence = [(float(e), int(c)) for e, c in report]
        if fmt == "json":
            return dumps([{"eta": e, "capability": c} for e, c in table])
        head = "eta,capability" if fmt == "csv" else f"{'eta':>8} {'capability':>10}"
        body = [f"{_fmt(e)},{c}" if fmt == "csv" else f"{_fmt(e):>8} {c:>10}" for e, c in table]
        return "\n".join([head] + body) + "\n"
    raise TypeError(f"cannot serialize {type(report).__name__}")


def emit_wigner_cut(r, w2pi) -> str:
    """CSV with header ``r,2piW``."""
    rows = ["r,2piW"] + [f"{_fmt(a)},{_fmt(b)}" for a, b in zip(r, w2pi)]
    return "\n".join(rows) + "\n"
