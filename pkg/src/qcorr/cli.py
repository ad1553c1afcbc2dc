"""Command-line front end.

Three subcommands: ``compute`` reports every correlation measure for a
density matrix loaded from a JSON state file, ``sweep`` writes the
standard parameter-sweep CSVs, and ``verify`` runs the seeded invariant
suite. Exit codes: 0 success, 1 validation failure (malformed input,
unsupported request), 2 verification failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import families, oracle, verification
from .discord import (
    METHOD_ORACLE,
    CorrelationReport,
    discord,
    duality_residual,
)
from .states import (
    DensityMatrix,
    StateValidationError,
    density_matrix,
    entropy_of_spectrum,
    hermitian_eig,
    load_state,
    partial_trace,
    save_state,
)

_REPORT_FIELDS = (
    "S_A",
    "S_B",
    "S_AB",
    "mutual_information",
    "classical_J",
    "discord_I",
    "discord_II",
    "eof_AB",
    "eof_d_component",
    "duality_residual",
)


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with the validation code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


# --------------------------------------------------------------------------
# compute


def _parse_split(text: str) -> Tuple[int, ...]:
    try:
        dims = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise StateValidationError(f"split must be comma-separated integers, got {text!r}")
    if len(dims) != 2 or min(dims) < 2:
        raise StateValidationError(f"split must name two factors of at least 2, got {text!r}")
    return dims


def _load_bipartite(path: str, split: Optional[str]) -> DensityMatrix:
    rho = load_state(path)
    if split is not None:
        dims = _parse_split(split)
        if int(np.prod(dims)) != rho.dim:
            raise StateValidationError(
                f"split {dims} does not factor total dimension {rho.dim}"
            )
        return density_matrix(rho.matrix, dims)
    if len(rho.dims) != 2:
        raise StateValidationError(
            f"state has {len(rho.dims)} subsystems; pass --split to choose a bipartition"
        )
    return rho


def _oracle_report(rho: DensityMatrix, measured: int, cfg: oracle.SearchConfig) -> CorrelationReport:
    """Build a report with every optimized quantity from a brute-force search."""
    idx = oracle.measured_index(rho, measured)
    s_parts = [
        entropy_of_spectrum(hermitian_eig(partial_trace(rho, (k,)).matrix).eigenvalues)
        for k in (0, 1)
    ]
    s_ab = entropy_of_spectrum(hermitian_eig(rho.matrix).eigenvalues)
    rank = rho.rank()

    cond_proj = oracle.projective_search(rho, idx, cfg).value
    cond_povm = oracle.povm_search(rho, idx, replace(cfg, seed=cfg.seed + 1)).value
    cond_povm = min(cond_povm, cond_proj)
    m = max(4, rank + 2)
    eof = oracle.ensemble_eof_search(rho, m, replace(cfg, seed=cfg.seed + 2)).value
    d_eff = max(rank, rho.dims[idx])
    eof_d = oracle.ensemble_eof_search(rho, d_eff, replace(cfg, seed=cfg.seed + 3)).value

    residual = math.nan
    if rho.dims[1] == 2 and rank <= 2:
        residual = duality_residual(rho, cfg=cfg, method=METHOD_ORACLE)

    s_meas, s_unmeas = s_parts[idx], s_parts[1 - idx]
    return CorrelationReport(
        S_A=s_parts[0],
        S_B=s_parts[1],
        S_AB=s_ab,
        mutual_information=s_parts[0] + s_parts[1] - s_ab,
        classical_J=s_unmeas - cond_povm,
        discord_I=s_meas + cond_proj - s_ab,
        discord_II=s_meas + cond_povm - s_ab,
        eof_AB=min(eof, eof_d),
        eof_d_component=eof_d,
        duality_residual=residual,
        method=METHOD_ORACLE,
    )


def _analytic_tractable(rho: DensityMatrix, idx: int) -> bool:
    return rho.rank() <= 1 or (rho.rank() <= 2 and rho.dims[1 - idx] == 2)


def _render_report(rho: DensityMatrix, measured: int, report: CorrelationReport) -> str:
    dims = "x".join(str(d) for d in rho.dims)
    lines = [
        f"dims {dims}, rank {rho.rank()}, measured side {'AB'[measured]}",
    ]
    for name in _REPORT_FIELDS:
        value = getattr(report, name)
        rendered = "nan" if isinstance(value, float) and math.isnan(value) else f"{value:.9g}"
        lines.append(f"{name:20s} {rendered}")
    lines.append(f"{'method':20s} {report.method}")
    return "\n".join(lines)


def cmd_compute(args) -> int:
    try:
        rho = _load_bipartite(args.state, args.split)
        measured = oracle.measured_index(rho, args.measured)
        cfg = oracle.SearchConfig(seed=args.seed, restarts=args.restarts)
        if args.method == "oracle":
            report = _oracle_report(rho, measured, cfg)
        else:
            if args.method == "analytic" and not _analytic_tractable(rho, measured):
                print(
                    "error: unsupported shape for --method analytic "
                    f"(dims {rho.dims}, rank {rho.rank()}); use auto or oracle",
                    file=sys.stderr,
                )
                return 1
            report = discord(rho, measured=measured, variant="II", cfg=cfg)
    except (StateValidationError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = _render_report(rho, measured, report)
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text + "\n")
    return 0


# --------------------------------------------------------------------------
# sweep


@dataclass(frozen=True)
class SweepAxis:
    name: str
    start: float
    end: float
    points: int


@dataclass(frozen=True)
class SweepSpec:
    """Declarative description of a family sweep written to CSV."""

    family: str
    fixed: Dict[str, float]
    axes: Tuple[SweepAxis, ...]
    out: str

    def __post_init__(self):
        if self.family not in ("three-qubit", "rank2", "phase-damping"):
            raise ValueError(f"unknown family {self.family!r}")
        if not self.axes:
            raise ValueError("at least one sweep axis is required")
        for axis in self.axes:
            if axis.points < 2:
                raise ValueError(f"axis {axis.name!r} needs at least 2 points")


_RANK2_NAMES = {"p1", "phi", "sin2_phi", "theta1", "theta2"}
_PD_NAMES = {"alpha_sq", "p"}
_TQ_NAMES = {"lambda0", "lambda1", "lambda2", "lambda3", "lambda4", "phase"}


def _rank2_row(values: Dict[str, float]) -> Tuple[float, ...]:
    vals = dict(values)
    if "sin2_phi" in vals:
        u = vals.pop("sin2_phi")
        if not 0.0 <= u <= 1.0:
            raise ValueError(f"sin2_phi out of [0, 1]: {u!r}")
        vals["phi"] = math.asin(math.sqrt(u))
    p1 = vals.pop("p1", 0.5)
    params = families.Rank2Params(p1=p1, p2=1.0 - p1, **vals)
    return (families.rank2_discord(params), families.rank2_eof(params))


def _pd_row(values: Dict[str, float]) -> Tuple[float, ...]:
    params = families.PhaseDampingParams(**values)
    rep = families.phase_damping_report(params)
    return (rep.discord_II, rep.eof_AB, rep.eof_AB - rep.discord_II)


def _tq_row(values: Dict[str, float]) -> Tuple[float, ...]:
    phase = values.pop("phase", 0.0)
    missing = [f"lambda{k}" for k in range(5) if f"lambda{k}" not in values]
    if missing:
        raise ValueError(f"three-qubit sweep missing parameters: {missing}")
    lams = np.array([values[f"lambda{k}"] for k in range(5)])
    norm = np.linalg.norm(lams)
    if norm <= 0.0:
        raise ValueError("three-qubit sweep hit an all-zero amplitude vector")
    lams = lams / norm  # swept amplitudes are renormalized pointwise
    params = families.ThreeQubitParams(*lams, phase=phase)
    rep = families.three_qubit_report(params, "AB", "A")
    return (rep.discord_II, rep.eof_AB)


_FAMILY_TABLE = {
    "rank2": (_RANK2_NAMES, _rank2_row, ("Q_AB", "E_AB")),
    "phase-damping": (_PD_NAMES, _pd_row, ("Q_AB", "E_AB", "eta")),
    "three-qubit": (_TQ_NAMES, _tq_row, ("Q_AB", "E_AB")),
}


def sweep_rows(spec: SweepSpec) -> Tuple[Tuple[str, ...], List[Tuple[float, ...]]]:
    """Evaluate the sweep grid; rows come back in axis order.

    Grid points are evaluated concurrently and buffered, so the output
    order never depends on completion order.
    """
    names, evaluate, value_cols = _FAMILY_TABLE[spec.family]
    for key in list(spec.fixed) + [axis.name for axis in spec.axes]:
        if key not in names:
            raise ValueError(f"unknown parameter {key!r} for family {spec.family!r}")

    grids = [np.linspace(axis.start, axis.end, axis.points) for axis in spec.axes]
    points: List[Dict[str, float]] = []
    coords: List[Tuple[float, ...]] = []
    idx = np.ndindex(*(len(g) for g in grids))
    for multi in idx:
        values = dict(spec.fixed)
        coord = tuple(float(grids[k][i]) for k, i in enumerate(multi))
        for axis, x in zip(spec.axes, coord):
            values[axis.name] = x
        points.append(values)
        coords.append(coord)

    workers = min(8, os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        computed = list(pool.map(evaluate, points))

    header = tuple(axis.name for axis in spec.axes) + value_cols
    rows = [coord + row for coord, row in zip(coords, computed)]
    return header, rows


def write_csv(path: str, header: Sequence[str], rows: Sequence[Sequence[float]]) -> None:
    """Write rows with 9 significant digits, comma separator, LF endings."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(f"{value:.9g}" for value in row) + "\n")


def fig1_spec(out: str, points: Optional[int] = None) -> SweepSpec:
    return SweepSpec(
        family="rank2",
        fixed={"p1": 0.5, "theta1": families.FIG1_THETA1, "theta2": families.FIG1_THETA2},
        axes=(SweepAxis("sin2_phi", 0.0, 1.0, points or 400),),
        out=out,
    )


def fig2_spec(out: str, points: Optional[int] = None) -> SweepSpec:
    n = points or 101
    return SweepSpec(
        family="phase-damping",
        fixed={},
        axes=(SweepAxis("alpha_sq", 0.0, 1.0, n), SweepAxis("p", 0.0, 1.0, n)),
        out=out,
    )


def cmd_sweep(args) -> int:
    try:
        if args.preset == "fig1":
            spec = fig1_spec(args.out, args.points)
        else:
            spec = fig2_spec(args.out, args.points)
        header, rows = sweep_rows(spec)
        write_csv(spec.out, header, rows)
    except (ValueError, StateValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(rows)} rows to {spec.out}")
    return 0


# --------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    if args.samples < 1:
        print("error: samples must be at least 1", file=sys.stderr)
        return 1
    results = verification.run_all(seed=args.seed, samples=args.samples)
    failures = 0
    for res in results:
        flag = "PASS" if res.passed else "FAIL"
        detail = f"  [{res.detail}]" if res.detail else ""
        print(
            f"{flag}  {res.name:42s} max violation {res.violation:.3e} "
            f"(tol {res.tolerance:.0e}){detail}"
        )
        if not res.passed:
            failures += 1
            print(f"      offending seed: {res.witness_seed}")
            if res.witness is not None:
                dump = os.path.abspath(f"qcorr-violation-{res.name}.json")
                save_state(res.witness, dump)
                print(f"      state dump: {dump}")
    print(f"verification: {len(results) - failures}/{len(results)} checks passed")
    return 0 if failures == 0 else 2


# --------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="qcorr",
        description="Correlation measures for small mixed quantum states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("compute", help="report correlation measures for a state file")
    pc.add_argument("--state", required=True, help="JSON state file")
    pc.add_argument("--split", default=None, help="bipartition dims, e.g. 4,2")
    pc.add_argument("--measured", default="A", help="measured side: A|B|0|1")
    pc.add_argument(
        "--method",
        choices=("auto", "analytic", "oracle"),
        default="auto",
        help="auto routes per shape; analytic refuses search-only shapes; "
        "oracle forces brute-force searches",
    )
    pc.add_argument("--seed", type=int, default=0, help="search seed")
    pc.add_argument("--restarts", type=int, default=24, help="search restarts")
    pc.add_argument("--out", default=None, help="also write the report to this file")
    pc.set_defaults(func=cmd_compute)

    ps = sub.add_parser("sweep", help="write a parameter-sweep CSV")
    ps.add_argument("--preset", choices=("fig1", "fig2"), required=True)
    ps.add_argument("--points", type=int, default=None, help="grid points per axis")
    ps.add_argument("--out", required=True, help="CSV output path")
    ps.set_defaults(func=cmd_sweep)

    pv = sub.add_parser("verify", help="run the seeded invariant suite")
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--samples", type=int, default=50)
    pv.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
