"""Partial derivatives of the decoherence factor and level shift.

Three independent routes are available and recorded on every result:

* ``ANALYTIC``: Gamma-function closed forms (zero temperature, no pulses)
  and the exact series engine of :mod:`probe_qfi.response`, which also
  covers pulses and T > 0;
* ``UNDER_INTEGRAL``: quadrature of the kernel integrals with the
  derivative moved inside;
* ``FINITE_DIFFERENCE``: Richardson-refined central differences.

The temperature derivatives differ from the commonly quoted printed forms
in three places; the printed variants are kept in :func:`printed_temperature_sensitivity`
so the discrepancy can be demonstrated.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

from .bath import BathParams, EstimationTarget, spectral_density, spectral_density_partial
from .coherence import (
    ProbeParams,
    PulseSchedule,
    _as_schedule,
    _check_time,
    _quadrature_spec,
    _scalar,
    _sech,
    _series_gamma,
    _series_phi,
    chi_shift,
    gamma_corr,
    gamma_uc,
    phi_shift,
    pulse_kernel_F,
    pulse_kernel_M,
    thermal_factor,
)
from .errors import DomainError, UnsupportedConfigurationError
from .quadrature import QuadratureSpec, complex_binomial_power, gamma_function, integrate_semi_infinite

__all__ = [
    "Method",
    "SensitivityRecord",
    "DephasingProfile",
    "FiniteDifference",
    "dgamma_domega_c",
    "dphi_domega_c",
    "dgamma_dG",
    "dchi_dG",
    "dgamma_dT",
    "dchi_dT",
    "profile",
    "sensitivity",
    "sensitivity_under_integral",
    "finite_difference_oracle",
    "printed_dgamma_domega_c",
    "printed_temperature_sensitivity",
    "PrintedTemperatureTerms",
]


class Method(str, enum.Enum):
    ANALYTIC = "Analytic"
    UNDER_INTEGRAL = "UnderIntegral"
    FINITE_DIFFERENCE = "FiniteDifference"


@dataclass(frozen=True)
class SensitivityRecord:
    dGamma_dx: float
    dChi_dx: float
    t: float
    target: EstimationTarget
    method: Method


class DephasingProfile(NamedTuple):
    """Dephasing functions and their derivatives w.r.t. one target.

    ``dgamma_corr`` and ``dchi`` already include the explicit temperature
    dependence of the correlation terms when the target is T.
    """

    gamma_uc: np.ndarray
    gamma_corr: np.ndarray
    phi: np.ndarray
    chi: np.ndarray
    dgamma_uc: np.ndarray
    dgamma_corr: np.ndarray
    dphi: np.ndarray
    dchi: np.ndarray


class FiniteDifference(NamedTuple):
    estimate: float
    error_order: int
    step: float


def _require_closed_form(bath: BathParams):
    if bath.T != 0:
        raise UnsupportedConfigurationError(
            "closed-form sensitivities assume T = 0; use sensitivity() for other configurations"
        )


def _check_target_domain(bath: BathParams, target: EstimationTarget):
    if target is EstimationTarget.TEMPERATURE and bath.T <= 0:
        raise DomainError("temperature estimation requires T > 0")


# -- zero-temperature closed forms ---------------------------------------------------------


def dgamma_domega_c(bath: BathParams, t):
    """dGamma/d(omega_c) at T = 0 without pulses.

    s != 1: (G/wc){(1-s)G(s-1) + G(s)} - (G(1-s)/wc) u_{s-1} G(s-1) - (G/wc) u_s G(s),
    with u_p = Re (1 + i wc t)^(-p); s = 1: G wc t^2 / (1 + (wc t)^2).
    """
    _require_closed_form(bath)
    t = _check_time(t)
    G, wc, s = bath.G, bath.omega_c, bath.s
    if bath.is_ohmic:
        return _scalar(G * wc * t**2 / (1.0 + (wc * t) ** 2))
    g1, g0 = gamma_function(s - 1.0), gamma_function(s)
    u1 = complex_binomial_power(wc, t, s - 1.0).u
    u0 = complex_binomial_power(wc, t, s).u
    out = G / wc * ((1.0 - s) * g1 + g0) - G * (1.0 - s) / wc * u1 * g1 - G / wc * u0 * g0
    return _scalar(out)


def printed_dgamma_domega_c(bath: BathParams, t):
    """The s != 1 form with the exponent s + 1 in the first conjugate pair.

    Kept for comparison only: it does not match finite differences of
    Gamma_uc and its s -> 1 limit disagrees with the Ohmic result.
    """
    _require_closed_form(bath)
    t = _check_time(t)
    G, wc, s = bath.G, bath.omega_c, bath.s
    g1, g0 = gamma_function(s - 1.0), gamma_function(s)
    u_plus = complex_binomial_power(wc, t, s + 1.0).u
    u0 = complex_binomial_power(wc, t, s).u
    return _scalar(G / wc * ((1.0 - s) * g1 + g0) - G * (1.0 - s) / wc * u_plus * g1 - G / wc * u0 * g0)


def dphi_domega_c(bath: BathParams, t):
    """dphi/d(omega_c); equals dchi/d(omega_c) at T = 0."""
    _require_closed_form(bath)
    t = _check_time(t)
    G, wc, s = bath.G, bath.omega_c, bath.s
    if bath.is_ohmic:
        return _scalar(G * t / (1.0 + (wc * t) ** 2))
    v1 = complex_binomial_power(wc, t, s - 1.0).v
    v0 = complex_binomial_power(wc, t, s).v
    return _scalar(G / wc * ((1.0 - s) * gamma_function(s - 1.0) * v1 + gamma_function(s) * v0))


def dgamma_dG(bath: BathParams, t):
    _require_closed_form(bath)
    t = _check_time(t)
    if bath.is_ohmic:
        return _scalar(0.5 * np.log1p((bath.omega_c * t) ** 2))
    u = complex_binomial_power(bath.omega_c, t, bath.s - 1.0).u
    return _scalar((1.0 - u) * gamma_function(bath.s - 1.0))


def dchi_dG(bath: BathParams, t):
    _require_closed_form(bath)
    t = _check_time(t)
    if bath.is_ohmic:
        return _scalar(np.arctan(bath.omega_c * t))
    v = complex_binomial_power(bath.omega_c, t, bath.s - 1.0).v
    return _scalar(v * gamma_function(bath.s - 1.0))


# -- correlation-term chain rule -----------------------------------------------------------


def _corr_terms(bath: BathParams, probe: ProbeParams, phi):
    """Partials of Gamma_corr and chi w.r.t. phi and (explicitly) T."""
    phi = np.asarray(phi, dtype=float)
    if bath.T == 0:
        zeros = np.zeros_like(phi)
        return zeros, zeros, np.ones_like(phi), zeros
    x = probe.omega_0 / (2.0 * bath.T)
    k = np.tanh(x)
    sech2 = _sech(x) ** 2
    sp, cp = np.sin(phi), np.cos(phi)
    sp2 = sp * sp
    denom = 1.0 - sp2 * sech2
    dcorr_dphi = sp * cp * sech2 / denom
    dcorr_dT = probe.omega_0 / (2.0 * bath.T**2) * k * sp2 * sech2 / denom
    lift = cp * cp + k * k * sp2
    dchi_dphi = k / lift
    dchi_dT = -probe.omega_0 * (1.0 - k * k) * sp * cp / (2.0 * bath.T**2 * lift)
    return dcorr_dphi, dcorr_dT, dchi_dphi, dchi_dT


def profile(bath: BathParams, probe: ProbeParams, t, pulses, target) -> DephasingProfile:
    """Vectorised dephasing functions and their exact target derivatives."""
    target = EstimationTarget.parse(target)
    _check_target_domain(bath, target)
    schedule = _as_schedule(pulses)
    t = _check_time(t)
    g_uc = _series_gamma(bath, t, schedule)
    phi = _series_phi(bath, t, schedule)
    dg_uc = _series_gamma(bath, t, schedule, target)
    dphi = _series_phi(bath, t, schedule, target)
    dcorr_dphi, dcorr_dT, dchi_dphi, dchi_dT = _corr_terms(bath, probe, phi)
    explicit = target is EstimationTarget.TEMPERATURE
    return DephasingProfile(
        gamma_uc=g_uc,
        gamma_corr=np.asarray(gamma_corr(bath, probe, phi)),
        phi=phi,
        chi=np.asarray(chi_shift(bath, probe, phi)),
        dgamma_uc=dg_uc,
        dgamma_corr=dcorr_dphi * dphi + (dcorr_dT if explicit else 0.0),
        dphi=dphi,
        dchi=dchi_dphi * dphi + (dchi_dT if explicit else 0.0),
    )


def dgamma_dT(bath: BathParams, probe: ProbeParams, t, pulses=None, method: str = "series"):
    """dGamma/dT = dGamma_uc/dT + dGamma_corr/dT.

    The first part is int G (1 - cos w t) w^(s-1) wc^(1-s) e^(-w/wc)
    csch^2(w/2T) / (2 T^2) dw (``method="quadrature"`` integrates exactly
    that); the second is (w0/2) tanh(w0/2T) sin^2 phi / [T^2 (cosh^2(w0/2T) - sin^2 phi)].
    """
    if bath.T <= 0:
        raise DomainError("temperature derivative requires T > 0")
    schedule = _as_schedule(pulses)
    if method == "series":
        p = profile(bath, probe, t, schedule, EstimationTarget.TEMPERATURE)
        return _scalar(p.dgamma_uc + p.dgamma_corr)
    rec = sensitivity_under_integral(bath, probe, t, schedule, EstimationTarget.TEMPERATURE)
    return rec.dGamma_dx


def dchi_dT(bath: BathParams, probe: ProbeParams, t, pulses=None):
    """-w0 tan(phi) [1 - tanh^2(w0/2T)] / (2 T^2 [1 + tanh^2(w0/2T) tan^2(phi)]).

    Evaluated in the sin/cos form so it stays finite where |phi| crosses pi/2.
    """
    if bath.T <= 0:
        raise DomainError("temperature derivative requires T > 0")
    p = profile(bath, probe, t, _as_schedule(pulses), EstimationTarget.TEMPERATURE)
    return _scalar(p.dchi)


class PrintedTemperatureTerms(NamedTuple):
    dgamma_uc_dT: float
    dgamma_corr_dT: float
    dchi_dT: float

    @property
    def dgamma_dT(self) -> float:
        return self.dgamma_uc_dT + self.dgamma_corr_dT


def printed_temperature_sensitivity(bath: BathParams, probe: ProbeParams, t: float) -> PrintedTemperatureTerms:
    """Temperature derivatives in their commonly printed (inconsistent) form.

    Uses cosh^2 instead of csch^2 in the Gamma_uc integrand, w0^2 instead of
    w0 in both correlation terms, and {1 + tanh tan phi}^2 in the chi
    denominator.  The cosh^2 integral diverges for T <= omega_c and is
    then reported as ``inf``.
    """
    if bath.T <= 0:
        raise DomainError("temperature derivative requires T > 0")
    t = float(_check_time(t))
    T, w0 = bath.T, probe.omega_0
    phi = float(phi_shift(bath, t))
    if T <= bath.omega_c:
        d_uc = math.inf
    elif t == 0:
        d_uc = 0.0
    else:
        def integrand(w):
            return (
                bath.G * 2.0 * np.sin(0.5 * w * t) ** 2 / (2.0 * T**2)
                * w ** (bath.s - 1.0) * bath.omega_c ** (1.0 - bath.s)
                * np.exp(-w / bath.omega_c) * np.cosh(w / (2.0 * T)) ** 2
            )
        spec = QuadratureSpec(oscillation_frequency=t, decay_scale=1.0 / (1.0 / bath.omega_c - 1.0 / T))
        d_uc = integrate_semi_infinite(integrand, spec).value
    x = w0 / (2.0 * T)
    sp2 = math.sin(phi) ** 2
    d_corr = w0**2 / 2.0 * math.tanh(x) * sp2 / (T**2 * (math.cosh(x) ** 2 - sp2))
    d_chi = -(w0**2) * math.tan(phi) * (1.0 - math.tanh(x) ** 2) / (
        2.0 * (1.0 + math.tanh(x) * math.tan(phi)) ** 2 * T**2
    )
    return PrintedTemperatureTerms(d_uc, d_corr, d_chi)


# -- quadrature route ----------------------------------------------------------------------


def sensitivity_under_integral(
    bath: BathParams,
    probe: ProbeParams,
    t: float,
    pulses,
    target,
    spec: Optional[QuadratureSpec] = None,
) -> SensitivityRecord:
    """Derivatives by differentiating the kernel integrals under the integral sign."""
    target = EstimationTarget.parse(target)
    _check_target_domain(bath, target)
    schedule = _as_schedule(pulses)
    t = float(_check_time(t))
    qspec = _quadrature_spec(bath, t, spec)
    if t == 0:
        return SensitivityRecord(0.0, 0.0, t, target, Method.UNDER_INTEGRAL)

    if schedule is None:
        def gamma_kernel(w):
            return 2.0 * np.sin(0.5 * w * t) ** 2 / w**2

        def phi_kernel(w):
            return np.sin(w * t) / w**2
    else:
        def gamma_kernel(w):
            return pulse_kernel_F(schedule.n, w, t)

        def phi_kernel(w):
            return -pulse_kernel_M(schedule.n, w, t) / w**2

    if target is EstimationTarget.TEMPERATURE:
        T = bath.T

        def integrand(w):
            with np.errstate(over="ignore"):
                csch2 = 1.0 / np.sinh(w / (2.0 * T)) ** 2
            return spectral_density(bath, w) * gamma_kernel(w) * w / (2.0 * T**2) * csch2

        dg_uc = integrate_semi_infinite(integrand, qspec).value
        dphi = 0.0
    else:
        def integrand(w):
            return spectral_density_partial(bath, w, target) * gamma_kernel(w) * thermal_factor(bath, w)

        dg_uc = integrate_semi_infinite(integrand, qspec).value
        dphi = integrate_semi_infinite(lambda w: spectral_density_partial(bath, w, target) * phi_kernel(w), qspec).value

    phi = phi_shift(bath, t, schedule, method="quadrature", spec=spec)
    dcorr_dphi, dcorr_dT, dchi_dphi, dchi_dT = (float(x) for x in _corr_terms(bath, probe, phi))
    explicit = target is EstimationTarget.TEMPERATURE
    d_gamma = dg_uc + dcorr_dphi * dphi + (dcorr_dT if explicit else 0.0)
    d_chi = dchi_dphi * dphi + (dchi_dT if explicit else 0.0)
    return SensitivityRecord(d_gamma, d_chi, t, target, Method.UNDER_INTEGRAL)


def sensitivity(bath: BathParams, probe: ProbeParams, t: float, pulses, target, method: str = "auto") -> SensitivityRecord:
    """Total dGamma/dx and dchi/dx with the correlation terms included.

    ``method="auto"`` takes the first available route in the order
    Analytic, UnderIntegral, FiniteDifference.
    """
    target = EstimationTarget.parse(target)
    _check_target_domain(bath, target)
    t = float(_check_time(t))
    if method in ("auto", Method.ANALYTIC, "analytic"):
        p = profile(bath, probe, t, pulses, target)
        return SensitivityRecord(
            float(p.dgamma_uc + p.dgamma_corr), float(p.dchi), t, target, Method.ANALYTIC
        )
    if method in (Method.UNDER_INTEGRAL, "under_integral"):
        return sensitivity_under_integral(bath, probe, t, pulses, target)
    if method in (Method.FINITE_DIFFERENCE, "finite_difference"):
        return _finite_difference_record(bath, probe, t, pulses, target)
    raise ValueError(f"unknown method {method!r}")


def _shifted(bath: BathParams, target: EstimationTarget, value: float) -> BathParams:
    field = {"omega_c": "omega_c", "G": "G", "T": "T"}[target.value]
    return bath.replace(**{field: value})


def _finite_difference_record(bath, probe, t, pulses, target) -> SensitivityRecord:
    x0 = getattr(bath, target.value)
    schedule = _as_schedule(pulses)

    def total_gamma(x):
        b = _shifted(bath, target, x)
        phi = phi_shift(b, t, schedule)
        return gamma_uc(b, t, schedule) + gamma_corr(b, probe, phi)

    def chi(x):
        b = _shifted(bath, target, x)
        return chi_shift(b, probe, phi_shift(b, t, schedule))

    dg = finite_difference_oracle(total_gamma, x0).estimate
    dc = finite_difference_oracle(chi, x0).estimate
    return SensitivityRecord(dg, dc, t, target, Method.FINITE_DIFFERENCE)


def finite_difference_oracle(f: Callable[[float], float], x0: float, scale: float = 0.0) -> FiniteDifference:
    """Central difference with step h = 1e-5 max(|x0|, scale), one Richardson step.

    D(h) = [f(x0+h) - f(x0-h)] / 2h has O(h^2) error; (4 D(h/2) - D(h)) / 3
    cancels it, leaving O(h^4).
    """
    h = 1e-5 * max(abs(x0), scale)
    if h == 0:
        raise DomainError("finite-difference step is zero; pass a nonzero scale")

    def central(step):
        return (float(f(x0 + step)) - float(f(x0 - step))) / (2.0 * step)

    coarse = central(h)
    fine = central(0.5 * h)
    return FiniteDifference((4.0 * fine - coarse) / 3.0, 4, h)
