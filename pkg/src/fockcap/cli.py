"""``fockcap`` command-line interface.

Conventions shared by every subcommand: quadratures have vacuum variance 1,
Wigner values are reported as ``2*pi*W``, so the vacuum has ``2*pi*W(0) = 1``
and ``|1>`` has ``-1``.

Exit codes: 0 success, 1 validation error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io as fio
from .bunching import BudgetExceeded, merge
from .capability import (
    THREADS_ENV,
    DataSet,
    capability,
    capability_simplified,
    loss_depth_sweep,
)
from .stats import DistributionError, apply_loss, g2_zero, origin_negativity, summarize
from .tomography import heralded_source_model, reconstruct_em, synthesize_quadratures
from .wigner import RootFindingError, fit_attenuated_fock, negative_regions, radial_wigner

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2

CONVENTIONS = (
    "Units: quadratures with vacuum variance 1; Wigner values are 2*pi*W "
    "(vacuum 2*pi*W(0)=1, single photon -1)."
)

# Defaults for options that may also come from a --config JSON file.
# Precedence: command line > config file > these values.
DEFAULTS = {
    "n_max": 14,
    "choices": 30,
    "seed": None,
    "backend": "fast",
    "format": "json",
    "threads": None,
    "etas": "1:0.8:-0.02",
    "truncated": False,
    "renormalize": False,
    "r_max": 8.0,
    "points": 801,
    "cutoff": 10,
    "iterations": 500,
    "efficiency": None,
    "n": None,
    "eta": None,
    "pump": None,
    "escape": 1.0,
    "herald_eff": 1.0,
    "quadratures": None,
    "eta_det": 1.0,
}
# per-subcommand overrides of DEFAULTS
COMMAND_DEFAULTS = {"sweep-loss": {"format": "csv"}}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def parse_etas(text: str) -> list[float]:
    """``"a:b:step"`` inclusive range, or a comma-separated list."""
    if ":" in text:
        a, b, step = (float(t) for t in text.split(":"))
        if step == 0:
            raise ValueError("eta step must be non-zero")
        if (b - a) * step < 0:
            step = -step
        count = int(np.floor(round((b - a) / step, 9))) + 1
        return [round(a + i * step, 12) for i in range(count)]
    return [float(t) for t in text.split(",") if t.strip()]


def _out(text: str, path) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _add_common(p, *names):
    S = argparse.SUPPRESS
    for name in names:
        if name == "n_max":
            p.add_argument("--n-max", type=int, default=S, help="largest target Fock state n (default 14)")
        elif name == "choices":
            p.add_argument("--choices", type=int, default=S, help="random partitions averaged per n (default 30)")
        elif name == "seed":
            p.add_argument("--seed", type=int, default=S, help="PCG64 seed; required with a data set")
        elif name == "threads":
            p.add_argument("--threads", type=int, default=S,
                           help=f"worker threads (default from ${THREADS_ENV}, else 1)")
        elif name == "format":
            p.add_argument("--format", choices=["json", "csv", "table"], default=S)
        elif name == "renormalize":
            p.add_argument("--renormalize", action="store_true", default=S,
                           help="accept inputs whose sum deviates from 1 by more than 1e-6")
    p.add_argument("-o", "--output", help="output file (default stdout)")
    p.add_argument("--config", help="JSON file of option values (overridden by flags)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fockcap", description="Fock-state capability of imperfect single-photon sources. " + CONVENTIONS,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bunch", help="merge distributions into one output mode",
                       description="Bunch n input distributions (one per file) through a balanced n-port "
                                   "and post-select all photons in one mode. Writes {Q, success, output}. "
                                   + CONVENTIONS)
    p.add_argument("inputs", nargs="+")
    p.add_argument("--backend", choices=["oracle", "fast"], default=argparse.SUPPRESS,
                   help="oracle: brute-force enumeration; fast: generating-function convolution")
    _add_common(p, "format", "renormalize")

    p = sub.add_parser("wigner", help="radial Wigner cut and negative regions",
                       description="CSV of (r, 2*pi*W(r)) along a radial line plus the negative-region "
                                   "structure as JSON. " + CONVENTIONS)
    p.add_argument("input")
    p.add_argument("--r-max", type=float, default=argparse.SUPPRESS, help="largest radius (default 8)")
    p.add_argument("--points", type=int, default=argparse.SUPPRESS, help="grid points (default 801)")
    p.add_argument("--regions", help="write the region structure JSON here (default stderr)")
    _add_common(p, "renormalize")

    p = sub.add_parser("capability", help="full capability of a data set",
                       description="Random partitions of the runs into n groups, bunching, averaging "
                                   "over choices, and the negative-region test for n = 1..n_max. "
                                   + CONVENTIONS)
    p.add_argument("inputs", nargs="+", help="data set directory, manifest, or distribution files")
    _add_common(p, "n_max", "choices", "seed", "threads", "format", "renormalize")

    p = sub.add_parser("capability-simple", help="identical-copy capability of one distribution",
                       description="Bunch n identical copies for n = 1..n_max. " + CONVENTIONS)
    p.add_argument("input")
    _add_common(p, "n_max", "threads", "format", "renormalize")

    p = sub.add_parser("sweep-loss", help="capability versus attenuation",
                       description="Attenuate inputs by eta and recompute the capability. One file: "
                                   "identical copies; several files or a directory: full data-set test "
                                   "(needs --seed). " + CONVENTIONS)
    p.add_argument("inputs", nargs="+")
    p.add_argument("--etas", default=argparse.SUPPRESS, help="a:b:step (inclusive) or comma list")
    p.add_argument("--truncated", action="store_true", default=argparse.SUPPRESS,
                   help="drop multi-photon components before attenuating")
    _add_common(p, "n_max", "choices", "seed", "threads", "format", "renormalize")

    p = sub.add_parser("fit-fock", help="fit a lossy Fock state |n>",
                       description="Least-squares fit of photon-number probabilities by |n> after "
                                   "a loss channel of transmissivity eta. " + CONVENTIONS)
    p.add_argument("input")
    p.add_argument("--n", type=int, required=True)
    _add_common(p, "renormalize")

    p = sub.add_parser("g2", help="g2(0), P1, P2+ and 2*pi*W(0)",
                       description="Single-copy statistics of each file and their average. " + CONVENTIONS)
    p.add_argument("inputs", nargs="+")
    _add_common(p, "renormalize")

    p = sub.add_parser("attenuate", help="apply a pure-loss channel",
                       description="Binomial loss of transmissivity eta. " + CONVENTIONS)
    p.add_argument("input")
    p.add_argument("--eta", type=float, required=True)
    _add_common(p, "renormalize")

    p = sub.add_parser("reconstruct", help="EM reconstruction from homodyne samples",
                       description="Phase-randomized homodyne samples (CSV, vacuum variance 1) to a "
                                   "photon-number distribution by maximum likelihood. " + CONVENTIONS)
    p.add_argument("input")
    p.add_argument("--cutoff", type=int, default=argparse.SUPPRESS, help="highest Fock level (default 10)")
    p.add_argument("--iterations", type=int, default=argparse.SUPPRESS, help="EM iterations (default 500)")
    p.add_argument("--efficiency", type=float, default=argparse.SUPPRESS,
                   help="detection efficiency to correct for (default: file header, else 1)")
    _add_common(p)

    p = sub.add_parser("simulate-source", help="heralded-source statistics or homodyne samples",
                       description="Heralded photons from a two-mode squeezer with squeezing 'pump' "
                                   "(pair ratio tanh(pump)^2). With --quadratures COUNT, writes "
                                   "homodyne samples instead. " + CONVENTIONS)
    p.add_argument("--pump", type=float, required=True)
    p.add_argument("--escape", type=float, default=argparse.SUPPRESS)
    p.add_argument("--herald-eff", type=float, default=argparse.SUPPRESS)
    p.add_argument("--cutoff", type=int, default=argparse.SUPPRESS)
    p.add_argument("--quadratures", type=int, default=argparse.SUPPRESS, help="number of samples")
    p.add_argument("--eta-det", type=float, default=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    _add_common(p)
    return parser


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Fill options missing on the command line from the config file, then defaults."""
    config = {}
    if getattr(args, "config", None):
        config = json.loads(Path(args.config).read_text())
        config = {k.replace("-", "_"): v for k, v in config.items()}
    overrides = COMMAND_DEFAULTS.get(args.command, {})
    for key, default in DEFAULTS.items():
        default = overrides.get(key, default)
        if not hasattr(args, key):
            setattr(args, key, config.get(key, default))
    return args


def _dataset(args) -> DataSet:
    if len(args.inputs) == 1:
        return fio.load_dataset(args.inputs[0], args.renormalize)
    return fio.load_dataset(args.inputs, args.renormalize)


def _require_seed(args):
    if args.seed is None:
        raise ValueError("--seed is required when a data set is randomly partitioned")


def _single_source(args):
    if len(args.inputs) == 1:
        path = Path(args.inputs[0])
        if path.is_file():
            try:
                return fio.read_distribution(path, args.renormalize)
            except fio.DataFileError:
                pass
    return None


def _run(args) -> int:
    cmd = args.command
    if cmd == "bunch":
        inputs = [fio.read_distribution(f, args.renormalize) for f in args.inputs]
        res = merge(inputs, args.backend)
        _out(fio.emit_report(res, args.format), args.output)
    elif cmd == "wigner":
        d = fio.read_distribution(args.input, args.renormalize)
        w = radial_wigner(d)
        r = np.linspace(0.0, args.r_max, args.points)
        _out(fio.emit_wigner_cut(r, w.wigner(r)), args.output)
        text = fio.dumps(fio.structure_dict(negative_regions(w)))
        if args.regions:
            Path(args.regions).write_text(text)
        else:
            sys.stderr.write(text)
    elif cmd == "capability":
        _require_seed(args)
        rep = capability(_dataset(args), args.n_max, args.choices, args.seed, args.threads)
        _emit_capability(rep, args)
    elif cmd == "capability-simple":
        d = fio.read_distribution(args.input, args.renormalize)
        _emit_capability(capability_simplified(d, args.n_max, args.threads), args)
    elif cmd == "sweep-loss":
        etas = parse_etas(str(args.etas))
        single = _single_source(args)
        if single is not None:
            table = loss_depth_sweep(single, args.n_max, etas, bool(args.truncated), threads=args.threads)
        else:
            _require_seed(args)
            table = loss_depth_sweep(_dataset(args), args.n_max, etas, bool(args.truncated),
                                     args.choices, args.seed, args.threads)
        _out(fio.emit_report(table, args.format), args.output)
    elif cmd == "fit-fock":
        d = fio.read_distribution(args.input, args.renormalize)
        eta, res = fit_attenuated_fock(d, args.n)
        _out(fio.dumps({"n": args.n, "eta": eta, "residual": res}), args.output)
    elif cmd == "g2":
        dists = [fio.read_distribution(f, args.renormalize) for f in args.inputs]
        rows = [{"file": str(f), "g2": g2_zero(d), "p1": d.p1, "p2plus": d.p2plus,
                 "origin_negativity": origin_negativity(d)} for f, d in zip(args.inputs, dists)]
        s = summarize(dists)
        summary = {"p1": s.p1, "p2plus": s.p2plus, "g2": s.g2, "origin_negativity": s.origin_negativity}
        _out(fio.dumps({"runs": rows, "summary": summary}), args.output)
    elif cmd == "attenuate":
        d = fio.read_distribution(args.input, args.renormalize)
        _out(fio.write_distribution(apply_loss(d, args.eta)), args.output)
    elif cmd == "reconstruct":
        qd = fio.read_quadratures(args.input, args.efficiency)
        _out(fio.write_distribution(reconstruct_em(qd, args.cutoff, args.iterations)), args.output)
    elif cmd == "simulate-source":
        d = heralded_source_model(args.pump, args.escape, args.herald_eff, args.cutoff)
        if args.quadratures:
            qd = synthesize_quadratures(d, args.quadratures, args.eta_det,
                                        0 if args.seed is None else args.seed)
            _out(fio.write_quadratures(qd), args.output)
        else:
            _out(fio.write_distribution(d), args.output)
    return EXIT_OK


def _emit_capability(rep, args):
    if args.output:
        Path(args.output).write_text(fio.emit_report(rep, args.format))
        sys.stdout.write(fio.emit_report(rep, "table"))
    else:
        sys.stdout.write(fio.emit_report(rep, args.format))
        if args.format != "table":
            sys.stderr.write(fio.emit_report(rep, "table"))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        resolve(args)
        return _run(args)
    except (RootFindingError, ArithmeticError, FloatingPointError, BudgetExceeded) as exc:
        sys.stderr.write(f"fockcap: numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    except (DistributionError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"fockcap: {exc}\n")
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
