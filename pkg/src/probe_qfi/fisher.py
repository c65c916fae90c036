"""Quantum and classical Fisher information of the dephased probe.

For the probe Bloch vector of length sin(theta_0) e^-Gamma in the equatorial
plane, rotating with angle w0 t + phi_0 + chi, the quantum Fisher
information for a parameter x is

    H = sin^2(theta_0) (dGamma/dx)^2 / (e^(2 Gamma) - 1)
        + sin^2(theta_0) e^(-2 Gamma) (dchi/dx)^2 .

A mixed initial state enters only through Gamma_0 inside Gamma, with
theta_0 reinterpreted as the mixed-state angle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .bath import BathParams, EstimationTarget
from .coherence import ProbeParams, PulseSchedule, _as_schedule, _check_time
from .errors import DegeneracyError, NoInformationError
from .sensitivity import profile

__all__ = [
    "FisherReport",
    "MeasurementSetting",
    "ProbeState",
    "probe_state",
    "qfi",
    "qfi_terms",
    "classical_fisher",
    "optimal_phi_hat",
]

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class MeasurementSetting:
    """Equatorial projective measurement along azimuth ``phi_hat``."""

    phi_hat: float

    def __post_init__(self):
        value = float(self.phi_hat)
        if not math.isfinite(value):
            raise ValueError("measurement angle must be finite")
        value = math.fmod(value, _TWO_PI)
        if value < 0:
            value += _TWO_PI
        if value >= _TWO_PI:
            value = 0.0
        object.__setattr__(self, "phi_hat", value)


@dataclass(frozen=True)
class FisherReport:
    value: float
    target: EstimationTarget
    t: float
    n: int
    correlations_included: bool
    term_decoherence: float
    term_levelshift: float
    phi_hat_opt: Optional[float] = None
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "target": self.target.value,
            "t": self.t,
            "n": self.n,
            "correlations_included": self.correlations_included,
            "term_decoherence": self.term_decoherence,
            "term_levelshift": self.term_levelshift,
            "phi_hat_opt": self.phi_hat_opt,
            "degenerate": self.degenerate,
        }


class ProbeState(NamedTuple):
    """Gamma, the precession angle w0 t + phi_0 + chi, and their x-derivatives."""

    gamma: np.ndarray
    angle: np.ndarray
    dgamma: np.ndarray
    dchi: np.ndarray


def probe_state(bath: BathParams, probe: ProbeParams, t, pulses, target, correlations_included: bool = True) -> ProbeState:
    """Dephasing state entering the Fisher information, vectorised over t.

    Without initial correlations Gamma = Gamma_uc + Gamma_0 and the level
    shift is absent, so the precession angle is w0 t + phi_0.
    """
    p = profile(bath, probe, t, pulses, target)
    t = np.asarray(t, dtype=float)
    free = probe.omega_0 * t + probe.phi_0
    if correlations_included:
        return ProbeState(
            gamma=p.gamma_uc + p.gamma_corr + probe.gamma_0,
            angle=free + p.chi,
            dgamma=p.dgamma_uc + p.dgamma_corr,
            dchi=p.dchi,
        )
    return ProbeState(
        gamma=p.gamma_uc + probe.gamma_0,
        angle=free + np.zeros_like(p.chi),
        dgamma=p.dgamma_uc,
        dchi=np.zeros_like(p.dchi),
    )


def _terms(state: ProbeState, theta_0: float):
    sin2 = math.sin(theta_0) ** 2
    gamma = state.gamma
    with np.errstate(over="ignore"):
        denom = np.expm1(2.0 * gamma)
    positive = denom > 0
    safe = np.where(positive, denom, 1.0)
    first = np.where(positive, sin2 * state.dgamma**2 / safe, 0.0)
    second = sin2 * np.exp(-2.0 * gamma) * state.dchi**2
    return first, second


def qfi_terms(bath: BathParams, probe: ProbeParams, t, pulses=None, target="G", correlations_included: bool = True):
    """Vectorised ``(term_decoherence, term_levelshift)``; both 0 where Gamma = 0."""
    state = probe_state(bath, probe, t, pulses, target, correlations_included)
    first, second = _terms(state, probe.theta_0)
    if not correlations_included:
        second = np.zeros_like(second)
    return first, second


def _pulse_count(pulses) -> int:
    schedule = _as_schedule(pulses)
    return 0 if schedule is None else schedule.n


def qfi(
    bath: BathParams,
    probe: ProbeParams,
    t: float,
    pulses=None,
    target="G",
    correlations_included: bool = True,
    with_measurement: bool = False,
) -> FisherReport:
    """Quantum Fisher information for one target at one interaction time.

    At t = 0 the decoherence term is 0/0 and no information has been
    acquired; the report then carries ``value = 0`` and ``degenerate = True``.
    ``with_measurement`` attaches the optimal equatorial measurement angle.
    """
    target = EstimationTarget.parse(target)
    t = float(_check_time(t))
    n = _pulse_count(pulses)
    state = probe_state(bath, probe, t, pulses, target, correlations_included)
    degenerate = t == 0 or not float(state.gamma) > 0
    if degenerate:
        return FisherReport(0.0, target, t, n, correlations_included, 0.0, 0.0, None, True)
    first, second = (float(x) for x in _terms(state, probe.theta_0))
    if not correlations_included:
        second = 0.0
    phi_hat = None
    if with_measurement:
        try:
            phi_hat = _optimal_angle(state, probe.theta_0)
        except NoInformationError:
            phi_hat = None
    return FisherReport(first + second, target, t, n, correlations_included, first, second, phi_hat, False)


def _cfi(state: ProbeState, theta_0: float, phi_hat):
    sin2 = math.sin(theta_0) ** 2
    delta = state.angle - np.asarray(phi_hat, dtype=float)
    decay = np.exp(-2.0 * state.gamma)
    # 1 - sin^2(theta_0) e^(-2 Gamma) cos^2(Delta), arranged to avoid cancellation
    denom = math.cos(theta_0) ** 2 - sin2 * np.expm1(-2.0 * state.gamma) + sin2 * decay * np.sin(delta) ** 2
    if np.any(~(denom > 0)):
        raise DegeneracyError("classical Fisher information denominator vanishes (pure, undecayed state)")
    num = np.cos(delta) * state.dgamma + np.sin(delta) * state.dchi
    return sin2 * decay * num**2 / denom


def classical_fisher(
    bath: BathParams,
    probe: ProbeParams,
    t: float,
    pulses,
    target,
    m,
    correlations_included: bool = True,
):
    """Fisher information of the outcome distribution of an equatorial measurement.

    At theta_0 = pi/2 this is [cos D dGamma + sin D dchi]^2 / (e^(2 Gamma) - cos^2 D)
    with D = w0 t + phi_0 + chi - phi_hat.  ``m`` may be a
    :class:`MeasurementSetting`, an angle, or an array of angles; ``t`` may
    be an array when ``m`` is a single angle.
    """
    target = EstimationTarget.parse(target)
    t = _check_time(t)
    phi_hat = m.phi_hat if isinstance(m, MeasurementSetting) else m
    state = probe_state(bath, probe, t, pulses, target, correlations_included)
    out = _cfi(state, probe.theta_0, phi_hat)
    return float(out) if np.ndim(out) == 0 else out


def _optimal_angle(state: ProbeState, theta_0: float) -> float:
    a, b = float(state.dgamma), float(state.dchi)
    if a == 0 and b == 0:
        raise NoInformationError("both dGamma/dx and dchi/dx vanish; every angle is uninformative")
    # Cauchy-Schwarz optimum of (a cos D + b sin D)^2 / (1 - c cos^2 D):
    # tan D = b (1 - c) / a with c = sin^2(theta_0) e^(-2 Gamma).
    one_minus_c = math.cos(theta_0) ** 2 - math.sin(theta_0) ** 2 * math.expm1(-2.0 * float(state.gamma))
    if a == 0:
        offset = math.copysign(math.pi / 2, b)
    else:
        offset = math.atan(b * one_minus_c / a)
    return MeasurementSetting(float(state.angle) - offset).phi_hat


def optimal_phi_hat(
    bath: BathParams,
    probe: ProbeParams,
    t: float,
    pulses=None,
    target="G",
    correlations_included: bool = True,
) -> MeasurementSetting:
    """Measurement angle maximising the classical Fisher information.

    phi_hat = w0 t + phi_0 + chi - arctan[dchi (1 - e^(-2 Gamma)) / dGamma]
    at theta_0 = pi/2; for other theta_0 the factor becomes
    1 - sin^2(theta_0) e^(-2 Gamma).  With dGamma = 0 the arctan is +/- pi/2.
    """
    target = EstimationTarget.parse(target)
    t = float(_check_time(t))
    state = probe_state(bath, probe, t, pulses, target, correlations_included)
    return MeasurementSetting(_optimal_angle(state, probe.theta_0))
