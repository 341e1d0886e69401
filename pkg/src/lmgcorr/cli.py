"""Command-line sweeps over the magnetic field, figure data and consistency checks.

Every subcommand writes CSV (header row, LF line endings, floats in
shortest round-trip form) to ``--out`` or stdout.  Values that cannot be
computed at a grid point are written as ``divergent`` and counted in the
summary printed to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
import tempfile
from typing import Iterable, Sequence

import numpy as np

from . import criticality, oracle
from .errors import DimensionTooLarge, InvalidParameter, InvalidPartition, LMGError, SingularPoint
from .gaussian import covariance, standard_form
from .measures import LN2, bipartite_closed_form, correlations, mutual_information
from .model import ModelPoint

MEASURE_COLUMNS = ("cc", "qd", "eof", "ln_neg", "mutual_information")
SWEEP_COLUMNS = ("h",) + MEASURE_COLUMNS + ("e_min", "branch")
DIVERGENT = "divergent"

FIG4_TAUS = tuple(sorted({round(0.01 * i, 2) for i in range(1, 50)} | {1.0 / 3.0, 0.495, 0.499, 0.4999}))


class SpecError(ValueError):
    """Invalid command-line sweep specification."""


class _Counter:
    def __init__(self):
        self.rows = 0
        self.divergent = 0
        self.violations = 0


def _fmt(value, counter: _Counter) -> str:
    if isinstance(value, str):
        return value
    if value is None or not math.isfinite(value):
        counter.divergent += 1
        return DIVERGENT
    return repr(float(value))


def _write_csv(path: str | None, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    data = buf.getvalue()
    if path is None or path == "-":
        sys.stdout.write(data)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".lmgcorr-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def h_grid(h_min: float, h_max: float, count: int, log_offset: bool = False) -> np.ndarray:
    """Field grid that never contains the critical point itself.

    With ``log_offset`` the distances ``|h - 1|`` are log-spaced; both ends
    must then lie on the same side of 1.  A linear grid simply drops an
    exact ``h = 1``.
    """
    if count < 2:
        raise SpecError(f"--h-count must be >= 2, got {count}")
    if not (math.isfinite(h_min) and math.isfinite(h_max) and 0.0 <= h_min < h_max):
        raise SpecError(f"need 0 <= h-min < h-max, got {h_min}, {h_max}")
    if log_offset:
        lo, hi = h_min - 1.0, h_max - 1.0
        if lo * hi <= 0.0:
            raise SpecError("a log-offset grid must stay on one side of h = 1")
        sign = 1.0 if lo > 0.0 else -1.0
        offsets = np.logspace(math.log10(abs(lo)), math.log10(abs(hi)), count)
        grid = np.sort(1.0 + sign * offsets)
    else:
        grid = np.linspace(h_min, h_max, count)
    grid = grid[grid != 1.0]
    if grid.size < 2:
        raise SpecError("grid has fewer than two points once h = 1 is removed")
    return grid


def _measure_row(point: ModelPoint, units: str) -> list:
    try:
        report = correlations(point)
    except SingularPoint:
        return [None] * len(MEASURE_COLUMNS) + [None, DIVERGENT]
    vals = report.converted(units)
    return [vals[c] for c in MEASURE_COLUMNS] + [report.e_min, report.branch]


def _point(gamma: float, h: float, tau: float, partition: str) -> ModelPoint:
    return ModelPoint(gamma, h, tau, partition)


def _sweep_rows(gammas, taus, partition, grid, units, counter, prefix: bool):
    rows = []
    for g in gammas:
        for t in taus:
            _point(g, float(grid[0]), t, partition)  # validate once before the loop
            for h in grid:
                row = [float(h)] + _measure_row(_point(g, float(h), t, partition), units)
                if prefix:
                    row = [g, t] + row
                rows.append([_fmt(v, counter) for v in row])
                counter.rows += 1
    return rows


def cmd_sweep(args, counter: _Counter) -> int:
    grid = h_grid(args.h_min, args.h_max, args.h_count, args.h_log_offset)
    tau = args.tau if args.tau is not None else (0.5 if args.partition == "bi" else 1.0 / 3.0)
    rows = _sweep_rows([args.gamma], [tau], args.partition, grid, args.units, counter, prefix=False)
    _write_csv(args.out, SWEEP_COLUMNS, rows)
    return 0


def _preset(args, counter, gammas, taus, partition) -> int:
    grid = h_grid(args.h_min, args.h_max, args.h_count, args.h_log_offset)
    rows = _sweep_rows(gammas, taus, partition, grid, args.units, counter, prefix=True)
    _write_csv(args.out, ("gamma", "tau") + SWEEP_COLUMNS, rows)
    return 0


def cmd_fig1(args, counter):
    gammas = [args.gamma] if args.gamma is not None else [0.0, 0.5]
    return _preset(args, counter, gammas, [args.tau or 1.0 / 3.0], "bi")


def cmd_fig2(args, counter):
    taus = [args.tau] if args.tau is not None else [0.5, 1.0 / 6.0, 0.01]
    return _preset(args, counter, [0.5 if args.gamma is None else args.gamma], taus, "bi")


def cmd_fig3(args, counter):
    gammas = [args.gamma] if args.gamma is not None else [0.0, 0.5]
    return _preset(args, counter, gammas, [args.tau or 1.0 / 3.0], "tri")


def cmd_fig4(args, counter: _Counter) -> int:
    h = 1.0 + args.offset
    if h == 1.0:
        raise SpecError("--offset must be nonzero")
    rows = []
    for t in FIG4_TAUS:
        report = correlations(ModelPoint(args.gamma, h, t, "tri"))
        vals = report.converted(args.units)
        rows.append([_fmt(t, counter), _fmt(vals["eof"], counter), _fmt(vals["qd"], counter)])
        counter.rows += 1
    _write_csv(args.out, ("tau", "eof", "qd"), rows)
    return 0


def _fit_measure(gamma, tau, partition, measure) -> criticality.SlopeFit:
    hs = [1.0 + e for e in criticality.FIT_WINDOW]
    values = []
    for h in hs:
        report = correlations(ModelPoint(gamma, h, tau, partition))
        value = getattr(report, measure)
        if measure == "eof":
            value *= LN2  # bits per log2(h - 1) equals nats per ln(h - 1)
        values.append(value)
    return criticality.divergence_slope_fit(hs, values)


def cmd_expand_check(args, counter: _Counter) -> int:
    tau = args.tau if args.tau is not None else (0.5 if args.partition == "bi" else 1.0 / 3.0)
    gamma = args.gamma
    out = sys.stdout
    tol = 1e-3
    if args.partition == "bi":
        targets = {"cc": -0.25, "qd": -0.25, "eof": -0.25, "ln_neg": -0.25}
    else:
        targets = {"cc": -0.25, "qd": 0.0}
    for measure, target in targets.items():
        fit = _fit_measure(gamma, tau, args.partition, measure)
        verdict = "PASS" if abs(fit.slope - target) <= tol else "FAIL"
        out.write(
            f"{verdict} slope measure={measure} partition={args.partition} gamma={gamma!r} tau={tau!r} "
            f"slope={fit.slope!r} target={target!r} tol={tol!r}\n"
        )
        counter.rows += 1
        if verdict == "FAIL":
            counter.violations += 1
    h = 1.0 + criticality.FIT_WINDOW[0]
    report = correlations(ModelPoint(gamma, h, tau, args.partition))
    if args.partition == "bi":
        pairs = [
            ("cc", report.cc, criticality.expansion_cc_qd_bipartite(gamma, tau, h)),
            ("eof", report.eof, criticality.expansion_eof_bipartite(gamma, tau, h)),
        ]
    else:
        pairs = [("cc", report.cc, criticality.expansion_cc_tripartite(gamma, tau, h))]
        crit = criticality.critical_qd_tripartite(tau)
        diff = abs(report.qd - crit)
        verdict = "PASS" if diff <= tol else "FAIL"
        out.write(f"{verdict} value measure=qd h={h!r} qd={report.qd!r} closed_form={crit!r} tol={tol!r}\n")
        counter.rows += 1
        if verdict == "FAIL":
            counter.violations += 1
    for name, value, approx in pairs:
        out.write(f"INFO offset measure={name} h={h!r} value={value!r} expansion={approx!r} diff={value - approx!r}\n")
    return 0


def _gaussian_reference(gamma, h, tau, partition) -> float:
    try:
        sf = standard_form(covariance(ModelPoint(gamma, h, tau, partition)))
    except SingularPoint:
        return math.inf
    if partition == "tri":
        return mutual_information(sf)
    return bipartite_closed_form(ModelPoint(gamma, h, tau, partition))


def cmd_oracle_compare(args, counter: _Counter) -> int:
    if args.h is None:
        raise SpecError("oracle-compare needs --h")
    tau = args.tau if args.tau is not None else (0.5 if args.partition == "bi" else 1.0 / 3.0)
    ModelPoint(args.gamma, args.h, tau, args.partition)
    n_list = sorted(set(args.n_list))
    reference = _gaussian_reference(args.gamma, args.h, tau, args.partition)
    rows, diffs = [], []
    for n in n_list:
        state = oracle.exact_ground_state(n, args.gamma, args.h)
        n1 = int(round(tau * n))
        if args.partition == "bi":
            exact = oracle.bipartite_entropy_exact(state, n1)
        else:
            exact = oracle.tripartite_reduced_exact(state, n1, n1).mutual_information
        diff = abs(exact - reference)
        diffs.append(diff)
        rows.append([str(n), _fmt(exact, counter), _fmt(reference, counter), _fmt(diff, counter)])
        counter.rows += 1
    for (n_a, d_a), (n_b, d_b) in zip(zip(n_list, diffs), zip(n_list[1:], diffs[1:])):
        if math.isfinite(d_b) and d_b > d_a:
            counter.violations += 1
            print(f"violation: abs_diff grew from N={n_a} ({d_a!r}) to N={n_b} ({d_b!r})", file=sys.stderr)
    _write_csv(args.out, ("N", "exact", "gaussian", "abs_diff"), rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lmgcorr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, gamma_default=0.5, grid=True):
        p.add_argument("--gamma", type=float, default=gamma_default)
        p.add_argument("--tau", type=float, default=None)
        p.add_argument("--units", choices=("paper", "nats", "bits"), default="paper")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        if grid:
            p.add_argument("--h-min", type=float, default=0.0)
            p.add_argument("--h-max", type=float, default=2.0)
            p.add_argument("--h-count", type=int, default=201)
            p.add_argument("--h-log-offset", action="store_true", help="log-space |h - 1| instead of h")

    p = sub.add_parser("sweep", help="measures over an h grid")
    common(p)
    p.add_argument("--partition", choices=("bi", "tri"), default="bi")
    p.set_defaults(func=cmd_sweep)

    for name, func, help_ in (
        ("fig1", cmd_fig1, "bipartition tau=1/3, gamma in {0, 0.5}"),
        ("fig2", cmd_fig2, "gamma=0.5, tau in {1/2, 1/6, 1/100}"),
        ("fig3", cmd_fig3, "equal tripartition tau=1/3, gamma in {0, 0.5}"),
    ):
        p = sub.add_parser(name, help=help_)
        common(p, gamma_default=None)
        p.set_defaults(func=func)

    p = sub.add_parser("fig4", help="EoF and QD against tau near h = 1")
    common(p, grid=False)
    p.add_argument("--offset", type=float, default=1e-8, help="h - 1 (may be negative)")
    p.set_defaults(func=cmd_fig4)

    p = sub.add_parser("expand-check", help="divergence slopes against the closed-form coefficients")
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--partition", choices=("bi", "tri"), default="bi")
    p.set_defaults(func=cmd_expand_check)

    p = sub.add_parser("oracle-compare", help="exact finite-N values against the Gaussian limit")
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--partition", choices=("bi", "tri"), default="bi")
    p.add_argument("--n-list", type=int, nargs="+", default=[64, 128, 256])
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_oracle_compare)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    counter = _Counter()
    try:
        code = args.func(args, counter)
    except (SpecError, InvalidParameter, InvalidPartition, DimensionTooLarge) as exc:
        print(f"lmgcorr: invalid specification: {exc}", file=sys.stderr)
        return 2
    except (LMGError, ArithmeticError, OSError) as exc:
        print(f"lmgcorr: internal error: {exc}", file=sys.stderr)
        return 1
    print(
        f"lmgcorr {args.command}: rows={counter.rows} divergent={counter.divergent} "
        f"violations={counter.violations}",
        file=sys.stderr,
    )
    return code
