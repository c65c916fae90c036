"""Maximisation of the Fisher information over interaction time and pulse count."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from .bath import BathParams, EstimationTarget
from .coherence import ProbeParams, PulseSchedule
from .errors import DomainError, EvaluationError, NoInformationError, ProbeQFIError
from .fisher import FisherReport, qfi, qfi_terms

__all__ = [
    "OptimizationBudget",
    "TimeOptimum",
    "SweepRow",
    "optimize_over_time",
    "optimize_time",
    "optimize_pulses",
    "sweep",
]


@dataclass(frozen=True)
class OptimizationBudget:
    """Search interval and resolution of the time and pulse optimisers.

    The pulse sweep stops early once ``patience`` consecutive pulse counts
    fail to improve the best value by ``improvement_tol`` (relative).
    """

    t_min: float = 1e-3
    t_max: float = 50.0
    coarse_points: int = 2000
    refine_tol: float = 1e-8
    n_max: int = 64
    patience: int = 8
    improvement_tol: float = 1e-6

    def __post_init__(self):
        if not (0 < self.t_min < self.t_max and math.isfinite(self.t_max)):
            raise DomainError("budget needs 0 < t_min < t_max < inf")
        if int(self.coarse_points) < 10:
            raise DomainError("coarse_points must be >= 10")
        if not self.refine_tol > 0:
            raise DomainError("refine_tol must be > 0")
        if int(self.n_max) < 0:
            raise DomainError("n_max must be >= 0")
        if int(self.patience) < 1:
            raise DomainError("patience must be >= 1")
        object.__setattr__(self, "coarse_points", int(self.coarse_points))
        object.__setattr__(self, "n_max", int(self.n_max))
        object.__setattr__(self, "patience", int(self.patience))

    def to_dict(self) -> dict:
        return asdict(self)


class TimeOptimum(NamedTuple):
    t_opt: float
    value: float
    at_boundary: bool


def _evaluate(objective: Callable, t: np.ndarray, vectorised: bool = True) -> Tuple[np.ndarray, bool]:
    """Objective values on ``t`` and whether ``objective`` accepted the array."""
    values = None
    if vectorised:
        try:
            values = np.asarray(objective(t), dtype=float)
        except TypeError:
            values = None
        if values is not None and values.shape != t.shape:
            values = None
    if values is None:
        vectorised = False
        values = np.array([float(objective(float(x))) for x in t])
    if not np.all(np.isfinite(values)):
        raise EvaluationError("objective is not finite on the search interval")
    return values, vectorised


def optimize_over_time(objective: Callable, budget: Optional[OptimizationBudget] = None) -> TimeOptimum:
    """Global maximum of ``objective`` on [t_min, t_max].

    A log-spaced grid locates the best sample; bounded Brent refinement
    (golden section with parabolic steps) then polishes it inside the
    neighbouring grid cells.  ``objective`` should accept an array of times;
    scalar-only callables are evaluated point by point.
    """
    budget = budget or OptimizationBudget()
    grid = np.geomspace(budget.t_min, budget.t_max, budget.coarse_points)
    values, vectorised = _evaluate(objective, grid)
    if np.all(values == 0):
        raise NoInformationError("objective vanishes on the whole search interval")
    i = int(np.argmax(values))
    best_t, best_v = float(grid[i]), float(values[i])
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]

    def negated(x):
        return -float(_evaluate(objective, np.array([x]), vectorised)[0][0])

    res = minimize_scalar(
        negated, bounds=(float(lo), float(hi)), method="bounded",
        options={"xatol": budget.refine_tol * best_t, "maxiter": 500},
    )
    if math.isfinite(res.fun) and -res.fun > best_v:
        best_t, best_v = float(res.x), float(-res.fun)
    span = budget.refine_tol * budget.t_max
    at_boundary = best_t <= budget.t_min * (1 + budget.refine_tol) or best_t >= budget.t_max - span
    return TimeOptimum(best_t, best_v, bool(at_boundary))


def _time_objective(bath, probe, target, pulses, correlations):
    def objective(t):
        first, second = qfi_terms(bath, probe, t, pulses, target, correlations)
        return first + second
    return objective


def optimize_time(
    bath: BathParams,
    probe: ProbeParams,
    target,
    budget: Optional[OptimizationBudget] = None,
    correlations_included: bool = True,
    pulses=None,
) -> FisherReport:
    """QFI maximised over t at a fixed pulse schedule."""
    target = EstimationTarget.parse(target)
    budget = budget or OptimizationBudget()
    opt = optimize_over_time(_time_objective(bath, probe, target, pulses, correlations_included), budget)
    return qfi(bath, probe, opt.t_opt, pulses, target, correlations_included)


def optimize_pulses(
    bath: BathParams,
    probe: ProbeParams,
    target,
    budget: Optional[OptimizationBudget] = None,
    correlations_included: bool = True,
) -> FisherReport:
    """Joint maximum over t and n = 0..n_max (with the budget's early stop).

    n = 0 is free evolution, so the result is never below the unpulsed
    optimum.
    """
    target = EstimationTarget.parse(target)
    budget = budget or OptimizationBudget()
    best = optimize_time(bath, probe, target, budget, correlations_included, None)
    stale = 0
    for n in range(1, budget.n_max + 1):
        report = optimize_time(bath, probe, target, budget, correlations_included, PulseSchedule(n))
        if report.value > best.value * (1.0 + budget.improvement_tol):
            best, stale = report, 0
        else:
            if report.value > best.value:
                best = report
            stale += 1
            if stale >= budget.patience:
                break
    return best


@dataclass
class SweepRow:
    """Optimised reports for one axis point; failed curves are ``None``."""

    index: int
    bath: BathParams
    reports: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)


def _curve_names(correlations: Sequence[bool], pulses_enabled: bool) -> List[tuple]:
    names = []
    for pulsed in ((False, True) if pulses_enabled else (False,)):
        for corr in correlations:
            label = ("corr" if corr else "uncorr") + ("_pulsed" if pulsed else "")
            names.append((label, corr, pulsed))
    return names


def _sweep_point(args) -> SweepRow:
    index, bath, probe, target, budget, correlations, pulses_enabled = args
    row = SweepRow(index, bath)
    for label, corr, pulsed in _curve_names(correlations, pulses_enabled):
        try:
            if pulsed:
                row.reports[label] = optimize_pulses(bath, probe, target, budget, corr)
            else:
                row.reports[label] = optimize_time(bath, probe, target, budget, corr)
        except (ProbeQFIError, ArithmeticError, ValueError) as exc:
            row.reports[label] = None
            row.errors[label] = f"{type(exc).__name__}: {exc}"
    return row


def sweep(
    axis: Sequence[BathParams],
    probe: ProbeParams,
    target,
    budget: Optional[OptimizationBudget] = None,
    correlations: Sequence[bool] = (True, False),
    pulses_enabled: bool = False,
    workers: Optional[int] = None,
) -> List[SweepRow]:
    """Optimised Fisher information at every axis point, in axis order.

    Each row holds one report per curve (``corr``, ``uncorr`` and, with
    pulses, ``corr_pulsed`` / ``uncorr_pulsed``).  Errors are recorded per
    curve instead of aborting the sweep.  ``workers > 1`` evaluates rows in
    a process pool; results are identical to the serial run.
    """
    if len(axis) == 0:
        raise DomainError("sweep axis is empty")
    target = EstimationTarget.parse(target)
    budget = budget or OptimizationBudget()
    tasks = [(i, b, probe, target, budget, tuple(correlations), pulses_enabled) for i, b in enumerate(axis)]
    if workers and workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(task) for task in tasks]
    return sorted(rows, key=lambda r: r.index)
