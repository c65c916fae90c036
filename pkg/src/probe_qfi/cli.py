"""``probe-qfi`` command line: scenario sweeps, figure presets and point queries.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from . import __version__
from .bath import BathParams, EstimationTarget
from .coherence import ProbeParams, PulseSchedule, coherence_record
from .errors import DomainError, NoInformationError, ProbeQFIError
from .fisher import classical_fisher, optimal_phi_hat, qfi
from .optimize import OptimizationBudget, optimize_over_time, sweep
from .sensitivity import sensitivity

__all__ = [
    "Axis",
    "Scenario",
    "ConfigError",
    "Table",
    "compute",
    "load_scenario",
    "preset",
    "read_csv_scenario",
    "write_output",
    "main",
]

SCHEMA_VERSION = 1
BASE_COLUMNS = ["axis_value", "qfi_corr", "qfi_uncorr", "t_opt_corr", "t_opt_uncorr"]
PULSE_COLUMNS = [
    "qfi_corr_pulsed", "qfi_uncorr_pulsed", "t_opt_corr_pulsed",
    "t_opt_uncorr_pulsed", "n_opt_corr_pulsed", "n_opt_uncorr_pulsed",
]
MEASUREMENT_COLUMNS = ["cfi_corr", "phi_hat_corr"]
ANGLE_MAP_COLUMNS = ["axis_value", "phi_hat", "cfi_max", "t_opt"]
_BATH_FIELDS = ("G", "omega_c", "s", "T")


class ConfigError(ValueError):
    """Invalid scenario configuration or command-line usage."""


@dataclass(frozen=True)
class Axis:
    parameter: str
    start: float
    stop: float
    points: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.parameter not in _BATH_FIELDS:
            raise ConfigError(f"axis.parameter must be one of {_BATH_FIELDS}, got {self.parameter!r}")
        if int(self.points) < 1:
            raise ConfigError("axis.points must be >= 1")
        if self.spacing not in ("linear", "log"):
            raise ConfigError("axis.spacing must be 'linear' or 'log'")
        if self.spacing == "log" and not (self.start > 0 and self.stop > 0):
            raise ConfigError("log-spaced axis needs positive start and stop")
        object.__setattr__(self, "start", float(self.start))
        object.__setattr__(self, "stop", float(self.stop))
        object.__setattr__(self, "points", int(self.points))

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class Scenario:
    """Everything needed to regenerate one data file."""

    name: str
    bath: BathParams
    axis: Axis
    target: EstimationTarget
    probe: ProbeParams = ProbeParams()
    correlations: bool = True
    pulses_enabled: bool = False
    measurement: bool = False
    kind: str = "sweep"
    angles: int = 64
    budget: OptimizationBudget = OptimizationBudget()
    output_path: str = ""
    output_format: str = "csv"
    implementation_chosen: tuple = ()

    def __post_init__(self):
        if self.kind not in ("sweep", "angle_map"):
            raise ConfigError(f"kind must be 'sweep' or 'angle_map', got {self.kind!r}")
        if self.output_format not in ("csv", "json", "svg"):
            raise ConfigError(f"output format must be csv, json or svg, got {self.output_format!r}")
        if int(self.angles) < 1:
            raise ConfigError("angles must be >= 1")
        for bath in self.axis_baths():
            if self.target is EstimationTarget.TEMPERATURE and bath.T <= 0:
                raise ConfigError("temperature target needs T > 0 at every axis point")

    def axis_baths(self) -> List[BathParams]:
        try:
            return [self.bath.replace(**{self.axis.parameter: float(v)}) for v in self.axis.values()]
        except DomainError as exc:
            raise ConfigError(f"axis leaves the model domain: {exc}") from None

    def to_dict(self, include_path: bool = True) -> dict:
        out = {
            "name": self.name,
            "kind": self.kind,
            "bath": self.bath.to_dict(),
            "probe": dataclasses.asdict(self.probe),
            "target": self.target.value,
            "correlations": self.correlations,
            "pulses_enabled": self.pulses_enabled,
            "measurement": self.measurement,
            "axis": dataclasses.asdict(self.axis),
            "angles": self.angles,
            "budget": self.budget.to_dict(),
            "output": {"format": self.output_format},
            "implementation_chosen": list(self.implementation_chosen),
        }
        if include_path:
            out["output"]["path"] = self.output_path
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        if not isinstance(data, dict):
            raise ConfigError("scenario must be a JSON object")
        known = {
            "name", "kind", "bath", "probe", "target", "correlations", "pulses_enabled",
            "measurement", "axis", "angles", "budget", "output", "implementation_chosen",
        }
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown scenario keys: {', '.join(unknown)}")
        for key in ("bath", "axis", "target"):
            if key not in data:
                raise ConfigError(f"scenario is missing required key {key!r}")
        try:
            bath = BathParams(**data["bath"])
            probe = ProbeParams(**data.get("probe", {}))
            axis = Axis(**data["axis"])
            budget = OptimizationBudget(**data.get("budget", {}))
            target = EstimationTarget.parse(data["target"])
        except TypeError as exc:
            raise ConfigError(f"bad field in scenario: {exc}") from None
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
        output = data.get("output", {})
        return cls(
            name=str(data.get("name", "scenario")),
            bath=bath,
            axis=axis,
            target=target,
            probe=probe,
            correlations=bool(data.get("correlations", True)),
            pulses_enabled=bool(data.get("pulses_enabled", False)),
            measurement=bool(data.get("measurement", False)),
            kind=str(data.get("kind", "sweep")),
            angles=int(data.get("angles", 64)),
            budget=budget,
            output_path=str(output.get("path", "")),
            output_format=str(output.get("format", "csv")),
            implementation_chosen=tuple(data.get("implementation_chosen", ())),
        )


def load_scenario(path) -> Scenario:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return Scenario.from_dict(data)


# -- computation ---------------------------------------------------------------------------


@dataclass
class Table:
    columns: List[str]
    rows: List[List[float]]
    warnings: List[str] = field(default_factory=list)


def _value(report, attr="value"):
    return math.nan if report is None else float(getattr(report, attr))


def _compute_sweep(scenario: Scenario, workers: Optional[int]) -> Table:
    flags = (True, False) if scenario.correlations else (False,)
    rows_out = sweep(
        scenario.axis_baths(), scenario.probe, scenario.target, scenario.budget,
        correlations=flags, pulses_enabled=scenario.pulses_enabled, workers=workers,
    )
    columns = list(BASE_COLUMNS)
    if scenario.pulses_enabled:
        columns += PULSE_COLUMNS
    if scenario.measurement:
        columns += MEASUREMENT_COLUMNS
    table = Table(columns, [])
    if not scenario.correlations:
        table.warnings.append("correlated curves disabled; qfi_corr columns are nan")
    axis_values = scenario.axis.values()
    for row, x in zip(rows_out, axis_values):
        get = row.reports.get
        values = [
            float(x),
            _value(get("corr")), _value(get("uncorr")),
            _value(get("corr"), "t"), _value(get("uncorr"), "t"),
        ]
        if scenario.pulses_enabled:
            values += [
                _value(get("corr_pulsed")), _value(get("uncorr_pulsed")),
                _value(get("corr_pulsed"), "t"), _value(get("uncorr_pulsed"), "t"),
                _value(get("corr_pulsed"), "n"), _value(get("uncorr_pulsed"), "n"),
            ]
        if scenario.measurement:
            values += _measurement_cells(scenario, row.bath, get("corr"), table)
        for label, message in row.errors.items():
            table.warnings.append(f"row {row.index} ({label}): {message}")
        table.rows.append(values)
    return table


def _measurement_cells(scenario: Scenario, bath: BathParams, report, table: Table):
    if report is None or report.degenerate:
        return [math.nan, math.nan]
    try:
        setting = optimal_phi_hat(bath, scenario.probe, report.t, None, scenario.target, True)
        cfi = classical_fisher(bath, scenario.probe, report.t, None, scenario.target, setting, True)
    except (ProbeQFIError, ArithmeticError) as exc:
        table.warnings.append(f"measurement at {bath}: {type(exc).__name__}: {exc}")
        return [math.nan, math.nan]
    return [float(cfi), setting.phi_hat]


def _compute_angle_map(scenario: Scenario) -> Table:
    table = Table(list(ANGLE_MAP_COLUMNS), [])
    if scenario.pulses_enabled:
        table.warnings.append("pulses are not used by the angle map")
    angles = np.linspace(0.0, 2.0 * math.pi, scenario.angles, endpoint=False)
    for x, bath in zip(scenario.axis.values(), scenario.axis_baths()):
        for phi_hat in angles:
            def objective(t, phi_hat=phi_hat, bath=bath):
                return classical_fisher(bath, scenario.probe, t, None, scenario.target, float(phi_hat), scenario.correlations)
            try:
                opt = optimize_over_time(objective, scenario.budget)
                table.rows.append([float(x), float(phi_hat), opt.value, opt.t_opt])
            except (ProbeQFIError, ArithmeticError) as exc:
                table.rows.append([float(x), float(phi_hat), math.nan, math.nan])
                table.warnings.append(f"angle {phi_hat:.6g} at {x:.6g}: {type(exc).__name__}: {exc}")
    return table


def compute(scenario: Scenario, workers: Optional[int] = None) -> Table:
    if scenario.kind == "angle_map":
        return _compute_angle_map(scenario)
    return _compute_sweep(scenario, workers)


# -- output --------------------------------------------------------------------------------


def _format(v: float) -> str:
    return format(float(v), ".17g")


def _metadata_lines(scenario: Scenario, table: Table) -> List[str]:
    lines = [
        f"probe-qfi {__version__}",
        f"schema: {SCHEMA_VERSION}",
        "scenario: " + json.dumps(scenario.to_dict(include_path=False), sort_keys=True),
        "budget: " + json.dumps(scenario.budget.to_dict(), sort_keys=True),
    ]
    if scenario.implementation_chosen:
        lines.append("implementation-chosen: " + ", ".join(scenario.implementation_chosen))
    lines.append(f"warnings: {len(table.warnings)}")
    lines += [f"warning: {w}" for w in table.warnings]
    return lines


def render_csv(scenario: Scenario, table: Table) -> str:
    buf = io.StringIO()
    for line in _metadata_lines(scenario, table):
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_format(v) for v in row])
    return buf.getvalue()


def render_json(scenario: Scenario, table: Table) -> str:
    def clean(v):
        return None if not math.isfinite(v) else float(v)
    doc = {
        "tool": f"probe-qfi {__version__}",
        "schema": SCHEMA_VERSION,
        "scenario": scenario.to_dict(include_path=False),
        "columns": table.columns,
        "rows": [[clean(v) for v in row] for row in table.rows],
        "warnings": table.warnings,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


_SVG_COLORS = ("#000000", "#c0392b", "#2471a3", "#7d3c98", "#1e8449", "#b9770e")


def render_svg(scenario: Scenario, table: Table) -> str:
    """Line plot of every Fisher-information column against the axis, log y."""
    width, height, margin = 720, 460, 70
    x_index = 0
    y_names = [c for c in table.columns if c.startswith(("qfi", "cfi"))]
    if scenario.kind == "angle_map":
        x_index = table.columns.index("phi_hat")
        y_names = ["cfi_max"]
    data = np.array(table.rows, dtype=float).reshape(len(table.rows), len(table.columns))
    xs = data[:, x_index]
    ys = {name: data[:, table.columns.index(name)] for name in y_names}
    positive = np.concatenate([v[np.isfinite(v) & (v > 0)] for v in ys.values()] + [np.array([])])
    if positive.size == 0 or xs.size == 0:
        lo, hi = 0.0, 1.0
    else:
        lo, hi = math.log10(positive.min()), math.log10(positive.max())
    if hi - lo < 1e-12:
        lo, hi = lo - 0.5, hi + 0.5
    x_lo, x_hi = (float(xs.min()), float(xs.max())) if xs.size else (0.0, 1.0)
    if x_hi - x_lo < 1e-300:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5

    def px(x):
        return margin + (x - x_lo) / (x_hi - x_lo) * (width - 2 * margin)

    def py(y):
        return height - margin - (math.log10(y) - lo) / (hi - lo) * (height - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{margin / 2:.1f}" text-anchor="middle" font-size="14">{scenario.name}</text>',
        f'<text x="{width / 2:.1f}" y="{height - 20}" text-anchor="middle">'
        f'{"phi_hat" if scenario.kind == "angle_map" else scenario.axis.parameter}</text>',
    ]
    for decade in range(math.floor(lo), math.ceil(hi) + 1):
        if lo <= decade <= hi:
            y = py(10.0**decade)
            parts.append(f'<line x1="{margin - 5}" y1="{y:.2f}" x2="{margin}" y2="{y:.2f}" stroke="black"/>')
            parts.append(f'<text x="{margin - 8}" y="{y + 4:.2f}" text-anchor="end">1e{decade}</text>')
    for x in np.linspace(x_lo, x_hi, 5):
        parts.append(f'<text x="{px(x):.2f}" y="{height - margin + 18}" text-anchor="middle">{x:.3g}</text>')
    for k, (name, values) in enumerate(ys.items()):
        color = _SVG_COLORS[k % len(_SVG_COLORS)]
        points = [f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, values) if math.isfinite(y) and y > 0]
        if points:
            parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{" ".join(points)}"/>')
        ly = margin + 16 * k
        parts.append(f'<line x1="{width - margin - 150}" y1="{ly}" x2="{width - margin - 120}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{width - margin - 115}" y="{ly + 4}">{name}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_output(scenario: Scenario, table: Table, path) -> List[Path]:
    """Write the data file (and the SVG plot for ``svg``); returns written paths."""
    path = Path(path)
    fmt = scenario.output_format
    if fmt == "json":
        _atomic_write(path, render_json(scenario, table))
        return [path]
    if fmt == "svg":
        svg_path = path.with_suffix(".svg")
        csv_path = path.with_suffix(".csv")
        _atomic_write(csv_path, render_csv(scenario, table))
        _atomic_write(svg_path, render_svg(scenario, table))
        return [csv_path, svg_path]
    _atomic_write(path, render_csv(scenario, table))
    return [path]


def read_csv_scenario(path) -> Scenario:
    """Rebuild the scenario echoed in a CSV metadata header."""
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.startswith("#"):
            break
        body = line[1:].strip()
        if body.startswith("scenario: "):
            return Scenario.from_dict(json.loads(body[len("scenario: "):]))
    raise ConfigError(f"{path}: no scenario line in metadata header")


# -- figure presets ------------------------------------------------------------------------

_WC_AXIS = Axis("omega_c", 1.0, 10.0, 19)
_G_AXIS = Axis("G", 0.01, 10.0, 19, "log")
_T_AXIS = Axis("T", 0.1, 2.0, 20)
_CHOSEN = ("axis", "budget")


def _series(name, s_values, bath, **kw) -> List[Scenario]:
    multi = len(s_values) > 1
    return [
        Scenario(name=f"{name}_s{s:g}" if multi else name, bath=bath.replace(s=s), implementation_chosen=_CHOSEN, **kw)
        for s in s_values
    ]


def preset(name: str, with_pulses: bool = False, correlations: bool = True) -> List[Scenario]:
    """Built-in scenarios for the twelve figures, one Scenario per plotted Ohmicity.

    Only caption parameters are fixed by the figures; axis ranges and the
    time budget are implementation choices and flagged as such.
    """
    wc, g, temp = EstimationTarget.CUTOFF_FREQUENCY, EstimationTarget.COUPLING, EstimationTarget.TEMPERATURE
    common = dict(correlations=correlations, pulses_enabled=with_pulses)
    weak = OptimizationBudget(t_max=1e4)
    table = {
        "fig1": lambda: _series(name, [0.5], bath=BathParams(0.01, 1.0, 0.5), axis=_WC_AXIS, target=wc, budget=weak, **common),
        "fig2": lambda: _series(name, [0.5], bath=BathParams(1.0, 1.0, 0.5), axis=_WC_AXIS, target=wc, **common),
        "fig3": lambda: _series(name, [0.1, 1.0, 2.0], bath=BathParams(1.0, 1.0, 0.1), axis=_WC_AXIS, target=wc, **common),
        "fig4": lambda: _series(name, [0.1, 1.0, 3.0], bath=BathParams(1.0, 5.0, 0.1), axis=_G_AXIS, target=g, **common),
        "fig5": lambda: _series(name, [0.1, 1.0], bath=BathParams(1.0, 5.0, 0.1, 1.0), axis=_T_AXIS, target=temp, **common),
        "fig6": lambda: _series(name, [0.1], bath=BathParams(1.0, 1.0, 0.1), axis=Axis("omega_c", 1.0, 10.0, 10),
                                target=wc, kind="angle_map", angles=64, **common),
        "fig7": lambda: _series(name, [0.1], bath=BathParams(1.0, 1.0, 0.1), axis=_WC_AXIS, target=wc, measurement=True, **common),
        "fig8": lambda: _series(name, [0.1], bath=BathParams(1.0, 5.0, 0.1), axis=_G_AXIS, target=g, measurement=True, **common),
        "fig9": lambda: _series(name, [0.1], bath=BathParams(1.0, 5.0, 0.1, 1.0), axis=_T_AXIS, target=temp, measurement=True, **common),
        "fig10": lambda: _series(name, [0.1], bath=BathParams(1.0, 1.0, 0.1), axis=_WC_AXIS, target=wc,
                                 correlations=correlations, pulses_enabled=True),
        "fig11": lambda: _series(name, [0.1], bath=BathParams(1.0, 5.0, 0.1), axis=_G_AXIS, target=g,
                                 correlations=correlations, pulses_enabled=True),
        "fig12": lambda: _series(name, [0.1], bath=BathParams(1.0, 5.0, 0.1, 1.0), axis=_T_AXIS, target=temp,
                                 correlations=correlations, pulses_enabled=True),
    }
    if name not in table:
        raise ConfigError(f"unknown figure {name!r}; choose fig1..fig12")
    return table[name]()


# -- point query ---------------------------------------------------------------------------


def _finite_or_none(x):
    return x if not isinstance(x, float) or math.isfinite(x) else None


def point_query(bath: BathParams, probe: ProbeParams, t: float, n: int, target, correlations: bool = True) -> dict:
    target = EstimationTarget.parse(target)
    if target is EstimationTarget.TEMPERATURE and bath.T <= 0:
        raise DomainError("temperature target requires T > 0")
    pulses = PulseSchedule(n) if n else None
    record = coherence_record(bath, probe, t, pulses)
    sens = sensitivity(bath, probe, t, pulses, target)
    corr = qfi(bath, probe, t, pulses, target, True, with_measurement=True)
    uncorr = qfi(bath, probe, t, pulses, target, False, with_measurement=True)
    try:
        phi_hat = optimal_phi_hat(bath, probe, t, pulses, target, correlations).phi_hat
    except NoInformationError:
        phi_hat = None
    return {
        "bath": bath.to_dict(),
        "probe": dataclasses.asdict(probe),
        "t": t,
        "n": n,
        "target": target.value,
        "coherence": dataclasses.asdict(record),
        "sensitivity": {
            "dGamma_dx": sens.dGamma_dx, "dChi_dx": sens.dChi_dx,
            "method": sens.method.value,
        },
        "qfi_corr": corr.to_dict(),
        "qfi_uncorr": uncorr.to_dict(),
        "phi_hat_opt": phi_hat,
        "degenerate": corr.degenerate,
    }


# -- argument parsing ----------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="probe-qfi", description="Fisher information of a dephasing qubit probe.")
    parser.add_argument("--version", action="version", version=f"probe-qfi {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def shared(p):
        p.add_argument("--with-pulses", action="store_true", help="add pulse-optimised curves")
        p.add_argument("--no-correlations", action="store_true", help="omit the correlated curves")
        p.add_argument("--out", help="output file (run) or directory (figure)")
        p.add_argument("--format", choices=("csv", "json", "svg"), help="output format")
        p.add_argument("--workers", type=int, default=None, help="process-pool size for sweeps")

    run = sub.add_parser("run", help="execute a scenario JSON file")
    run.add_argument("config")
    shared(run)

    fig = sub.add_parser("figure", help="built-in figure preset")
    fig.add_argument("name", choices=[f"fig{i}" for i in range(1, 13)])
    shared(fig)

    point = sub.add_parser("point", help="single evaluation printed as JSON")
    point.add_argument("--s", type=float, required=True)
    point.add_argument("--G", type=float, required=True)
    point.add_argument("--wc", type=float, required=True)
    point.add_argument("--T", type=float, default=0.0)
    point.add_argument("--t", type=float, required=True)
    point.add_argument("--n", type=int, default=0)
    point.add_argument("--target", required=True)
    point.add_argument("--omega0", type=float, default=1.0)
    point.add_argument("--theta0", type=float, default=math.pi / 2)
    point.add_argument("--phi0", type=float, default=0.0)
    point.add_argument("--gamma0", type=float, default=0.0)
    point.add_argument("--no-correlations", action="store_true")
    return parser


def _apply_flags(scenario: Scenario, args) -> Scenario:
    changes = {}
    if args.with_pulses:
        changes["pulses_enabled"] = True
    if args.no_correlations:
        changes["correlations"] = False
    if args.format:
        changes["output_format"] = args.format
    return dataclasses.replace(scenario, **changes) if changes else scenario


def _default_suffix(fmt: str) -> str:
    return {"csv": ".csv", "json": ".json", "svg": ".svg"}[fmt]


def _execute(scenarios: Sequence[Scenario], out, directory: bool, workers) -> int:
    status = 0
    for scenario in scenarios:
        if directory:
            path = Path(out or ".") / (scenario.name + _default_suffix(scenario.output_format))
        else:
            path = Path(out or scenario.output_path or scenario.name + _default_suffix(scenario.output_format))
        table = compute(scenario, workers)
        data = np.array(table.rows, dtype=float)
        value_cols = [i for i, c in enumerate(table.columns) if c.startswith(("qfi", "cfi"))]
        if data.size and not np.any(np.isfinite(data[:, value_cols])):
            status = 2
        for written in write_output(scenario, table, path):
            print(written)
        for w in table.warnings:
            print(f"warning: {w}", file=sys.stderr)
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "point":
            bath = BathParams(args.G, args.wc, args.s, args.T)
            probe = ProbeParams(args.omega0, args.theta0, args.phi0, args.gamma0)
            result = point_query(bath, probe, args.t, args.n, args.target, not args.no_correlations)
            print(json.dumps(result, indent=2, default=_finite_or_none))
            return 0
        if args.command == "run":
            scenario = _apply_flags(load_scenario(args.config), args)
            return _execute([scenario], args.out, False, args.workers)
        scenarios = [_apply_flags(s, args) for s in preset(args.name, args.with_pulses, not args.no_correlations)]
        return _execute(scenarios, args.out, True, args.workers)
    except (ConfigError, DomainError, FileNotFoundError) as exc:
        print(f"probe-qfi: error: {exc}", file=sys.stderr)
        return 1
    except (ProbeQFIError, ArithmeticError) as exc:
        print(f"probe-qfi: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
