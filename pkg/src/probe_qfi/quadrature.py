"""Semi-infinite quadrature for damped, oscillatory integrands and the
special functions used by the closed forms.

The integrator splits [0, W] into Gauss-Legendre panels no wider than a
quarter period of the fastest oscillation, grades the mesh geometrically
towards the origin and maps the innermost panel so that an algebraic
endpoint singularity omega**a (a > -1) becomes smooth.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import ConvergenceError, DomainError, EvaluationError

__all__ = [
    "QuadratureSpec",
    "QuadratureResult",
    "BinomialPower",
    "integrate_semi_infinite",
    "gamma_function",
    "complex_binomial_power",
]

_ORDER = 16
_NODES_HI, _WEIGHTS_HI = np.polynomial.legendre.leggauss(_ORDER)
_NODES_LO, _WEIGHTS_LO = np.polynomial.legendre.leggauss(_ORDER // 2)

# Geometric grading towards omega = 0: ratio 1/4 keeps the nearest
# singularity three half-widths away from every graded panel.
_GRADING_RATIO = 0.25
_GRADING_LEVELS = 12


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and hints for :func:`integrate_semi_infinite`.

    ``oscillation_frequency`` is the largest t for which the integrand
    contains sin(omega t) or cos(omega t). ``decay_scale`` is the e-folding
    scale of the exponential damping (omega_c for the kernels here).
    ``endpoint_exponent`` is the power a with f ~ omega**a near zero; when
    omitted it is estimated from two probe evaluations.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_panels: int = 10_000
    oscillation_frequency: Optional[float] = None
    decay_scale: float = 1.0
    endpoint_exponent: Optional[float] = None

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if int(self.max_panels) < 1:
            raise DomainError("max_panels must be >= 1")
        if not self.decay_scale > 0:
            raise DomainError("decay_scale must be positive")
        if self.oscillation_frequency is not None and self.oscillation_frequency < 0:
            raise DomainError("oscillation_frequency must be >= 0")


class QuadratureResult(NamedTuple):
    value: float
    error: float
    panels: int


def _evaluate(f, points):
    values = np.asarray(f(points), dtype=float)
    if values.shape != points.shape:
        values = np.broadcast_to(values, points.shape)
    if not np.all(np.isfinite(values)):
        raise EvaluationError("integrand returned a non-finite value")
    return values


def _panel_sums(f, a, b):
    """Gauss-Legendre sums (order 16 and 8) on the panels [a_i, b_i]."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    nodes = np.concatenate([_NODES_HI, _NODES_LO])
    pts = mid[:, None] + half[:, None] * nodes[None, :]
    vals = _evaluate(f, pts.ravel()).reshape(pts.shape)
    hi = half * (vals[:, :_ORDER] @ _WEIGHTS_HI)
    lo = half * (vals[:, _ORDER:] @ _WEIGHTS_LO)
    return hi, np.abs(hi - lo), np.max(np.abs(vals), axis=1)


def _estimate_exponent(f, width):
    probe = np.array([1e-2, 1e-3]) * width
    try:
        vals = np.asarray(f(probe), dtype=float)
    except (FloatingPointError, ZeroDivisionError):
        return None
    if vals.shape != (2,) or not np.all(np.isfinite(vals)):
        return None
    if vals[0] == 0 or vals[1] == 0 or np.sign(vals[0]) != np.sign(vals[1]):
        return None
    return math.log10(vals[0] / vals[1])


def _innermost_panel(f, width, exponent):
    """Integral over [0, width] after the map omega = width * v**k."""
    if exponent is None or exponent <= -1:
        k = 1.0
    else:
        nearest = round(exponent)
        k = 1.0 if (nearest >= 0 and abs(exponent - nearest) < 1e-3) else 1.0 / (exponent + 1.0)

    def mapped(v):
        v = np.asarray(v)
        return _evaluate(f, width * v**k) * width * k * v ** (k - 1.0)

    v_nodes = np.concatenate([_NODES_HI, _NODES_LO])
    pts = 0.5 * (v_nodes + 1.0)
    vals = mapped(pts)
    hi = 0.5 * vals[:_ORDER] @ _WEIGHTS_HI
    lo = 0.5 * vals[_ORDER:] @ _WEIGHTS_LO
    return float(hi), float(abs(hi - lo))


def integrate_semi_infinite(f: Callable, spec: Optional[QuadratureSpec] = None) -> QuadratureResult:
    """Integrate ``f`` over (0, inf).

    Parameters
    ----------
    f : callable
        Vectorised integrand; receives a 1-D array of frequencies > 0.
    spec : QuadratureSpec, optional
        Tolerances and structural hints.

    Returns
    -------
    QuadratureResult
        ``(value, error, panels)``. The error bound adds the Gauss-Legendre
        order-16/order-8 discrepancy of every panel and an exponential tail
        estimate beyond the truncation point.

    Raises
    ------
    ConvergenceError
        The panel budget was exhausted before the tolerance was met; the
        exception carries the best estimate and its error bound.
    EvaluationError
        The integrand produced NaN or inf, or the endpoint singularity is
        not integrable.
    """
    spec = spec or QuadratureSpec()
    t = spec.oscillation_frequency or 0.0
    scale = spec.decay_scale
    upper = 50.0 * scale
    width = 0.5 * scale
    if t > 0:
        upper = max(upper, 10.0 / t)
        width = min(width, math.pi / (2.0 * t))
    n_regular = int(math.ceil(upper / width))
    budget = int(spec.max_panels)
    starved = n_regular + _GRADING_LEVELS + 1 > budget
    if starved:
        n_regular = max(budget - _GRADING_LEVELS - 1, 1)
        width = upper / n_regular

    inner = width * _GRADING_RATIO ** np.arange(_GRADING_LEVELS, -1, -1, dtype=float)
    regular = width * np.arange(1, n_regular + 1, dtype=float)
    edges = np.concatenate([inner, regular[1:]])
    a, b = edges[:-1], edges[1:]

    exponent = spec.endpoint_exponent
    if exponent is None:
        exponent = _estimate_exponent(f, inner[0])
    if exponent is not None and exponent <= -1:
        raise EvaluationError(f"endpoint singularity omega**{exponent:.3g} is not integrable")
    inner_value, inner_error = _innermost_panel(f, inner[0], exponent)

    sums, errs, peaks = _panel_sums(f, a, b)
    while True:
        value = inner_value + float(np.sum(sums))
        tail = float(peaks[np.argmax(b)]) * scale
        error = inner_error + float(np.sum(errs)) + tail
        target = max(spec.abs_tol, spec.rel_tol * abs(value))
        panels = len(a) + 1
        if starved:
            raise ConvergenceError(
                f"{n_regular} panels cannot resolve oscillation t={t:g} on [0, {upper:g}]",
                estimate=value, error=error,
            )
        if error <= target:
            return QuadratureResult(value, error, panels)
        split = errs > target / (2.0 * len(errs))
        if not np.any(split):
            raise ConvergenceError(
                "tolerance unreachable: error is dominated by the tail estimate",
                estimate=value, error=error,
            )
        if panels + int(split.sum()) > budget:
            raise ConvergenceError(
                f"panel budget {budget} exhausted", estimate=value, error=error
            )
        mid = 0.5 * (a[split] + b[split])
        new_a = np.concatenate([a[split], mid])
        new_b = np.concatenate([mid, b[split]])
        s_new, e_new, p_new = _panel_sums(f, new_a, new_b)
        keep = ~split
        a = np.concatenate([a[keep], new_a])
        b = np.concatenate([b[keep], new_b])
        sums = np.concatenate([sums[keep], s_new])
        errs = np.concatenate([errs[keep], e_new])
        peaks = np.concatenate([peaks[keep], p_new])


def gamma_function(x: float) -> float:
    """Real Gamma function, including negative non-integer arguments."""
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise DomainError(f"Gamma function has a pole at {x:g}")
    return math.gamma(x)


@dataclass(frozen=True)
class BinomialPower:
    """The conjugate pair (1 + i w t)^(-p), (1 - i w t)^(-p)."""

    plus: complex
    minus: complex

    @property
    def u(self):
        """Half the sum of the pair: cos(p atan(w t)) / (1 + (w t)^2)^(p/2)."""
        return np.real(0.5 * (self.plus + self.minus))

    @property
    def v(self):
        """(minus - plus) / 2i: sin(p atan(w t)) / (1 + (w t)^2)^(p/2)."""
        return np.real((self.minus - self.plus) / 2j)


def complex_binomial_power(omega_c, t, p) -> BinomialPower:
    """Principal-branch powers (1 +/- i omega_c t)^(-p) via polar form."""
    x = np.asarray(omega_c, dtype=float) * np.asarray(t, dtype=float)
    modulus = np.hypot(1.0, x) ** (-np.asarray(p, dtype=float))
    angle = np.asarray(p, dtype=float) * np.arctan(x)
    plus = modulus * np.exp(-1j * angle)
    minus = modulus * np.exp(1j * angle)
    if np.ndim(plus) == 0:
        return BinomialPower(complex(plus), complex(minus))
    return BinomialPower(plus, minus)
