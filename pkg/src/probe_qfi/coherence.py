"""Dephasing functions of the probe: Gamma_uc, Gamma_corr, phi and chi.

Two evaluation routes are provided for every kernel integral:

``method="quadrature"``
    integrates the printed kernel (free, or filtered by F_n / M_n) with
    :func:`probe_qfi.quadrature.integrate_semi_infinite`;
``method="series"`` (the default)
    uses exact closed forms.  Equally spaced pi pulses make the filter
    kernels finite cosine/sine sums, so a pulsed integral is a weighted sum
    of free-evolution integrals at the lag times m t/(n+1).

The pulsed level shift is phi_n = -int J(w) w^-2 M_n(w, t) dw.  This is the
normalisation for which n = 0 reproduces the free-evolution phi exactly;
the form printed alongside M_n carries an extra factor -1/2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import response
from .bath import BathParams, spectral_density
from .errors import DomainError, UnsupportedConfigurationError
from .quadrature import QuadratureSpec, complex_binomial_power, gamma_function, integrate_semi_infinite

__all__ = [
    "ProbeParams",
    "PulseSchedule",
    "CoherenceRecord",
    "pulse_kernel_F",
    "pulse_kernel_M",
    "gamma_uc",
    "gamma_uc_closed_form",
    "phi_shift",
    "phi_closed_form",
    "gamma_corr",
    "chi_shift",
    "coherence_record",
]

# |cos| below this marks a removable tan^2 pole of F_n.
_POLE_GUARD = 1e-8


@dataclass(frozen=True)
class ProbeParams:
    """Two-level probe: splitting, initial Bloch angles and mixedness.

    ``gamma_0 > 0`` describes a mixed initial state whose coherence is
    already reduced by exp(-gamma_0); ``theta_0`` then plays the role of the
    effective polar angle of that state.
    """

    omega_0: float = 1.0
    theta_0: float = math.pi / 2
    phi_0: float = 0.0
    gamma_0: float = 0.0

    def __post_init__(self):
        for name in ("omega_0", "theta_0", "phi_0", "gamma_0"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite")
            object.__setattr__(self, name, value)
        if self.omega_0 <= 0:
            raise DomainError("omega_0 must be > 0")
        if not 0.0 <= self.theta_0 <= math.pi:
            raise DomainError("theta_0 must lie in [0, pi]")
        if self.gamma_0 < 0:
            raise DomainError("gamma_0 must be >= 0")
        object.__setattr__(self, "phi_0", self.phi_0 % (2 * math.pi))


@dataclass(frozen=True)
class PulseSchedule:
    """n equally spaced pi pulses over [0, t]; n = 0 is free evolution."""

    n: int = 0

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 0:
            raise DomainError(f"pulse count must be a non-negative integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))

    def times(self, t: float) -> np.ndarray:
        """Pulse instants t_j = j t / (n + 1), j = 1..n."""
        return np.arange(1, self.n + 1) * (float(t) / (self.n + 1))

    def edge_coefficients(self) -> np.ndarray:
        """c_k with (i w) int_0^t y(u) e^(i w u) du = sum_k c_k e^(i w t_k), k = 0..n+1."""
        n = self.n
        c = np.empty(n + 2)
        c[0] = -1.0
        c[1 : n + 1] = 2.0 * (-1.0) ** np.arange(0, n)
        c[n + 1] = (-1.0) ** n
        return c

    def lag_weights(self) -> np.ndarray:
        """w_m, m = 1..n+1, with F_n(w, t) = sum_m w_m (1 - cos(w m t/(n+1))) / w^2."""
        c = self.edge_coefficients()
        corr = np.correlate(c, c, mode="full")
        return -corr[len(c) :]


def _as_schedule(pulses) -> Optional[PulseSchedule]:
    if pulses is None or isinstance(pulses, PulseSchedule):
        return pulses
    return PulseSchedule(int(pulses))


@dataclass(frozen=True)
class CoherenceRecord:
    t: float
    gamma_uc: float
    gamma_corr: float
    phi: float
    chi: float
    gamma_total: float


def pulse_kernel_F(n: int, omega, t):
    """Filter kernel tan^2(w t/(2n+2)) (1 + (-1)^n cos w t) / w^2.

    Evaluated in half-angle form 2 [sin y * trig((n+1) y) / cos y]^2 / w^2
    with y = w t/(2n+2); at the removable poles (cos y -> 0) the limit
    2 (n+1)^2 / w^2 is used.
    """
    n = PulseSchedule(n).n
    w = np.asarray(omega, dtype=float)
    if np.any(~(w > 0)):
        raise DomainError("pulse kernels are defined for omega > 0")
    y = w * np.asarray(t, dtype=float) / (2 * n + 2)
    cy = np.cos(y)
    partner = np.cos((n + 1) * y) if n % 2 == 0 else np.sin((n + 1) * y)
    pole = np.abs(cy) < _POLE_GUARD
    safe = np.where(pole, 1.0, cy)
    ratio = np.where(pole, (n + 1.0), np.sin(y) * partner / safe)
    out = 2.0 * ratio**2 / w**2
    return float(out) if out.ndim == 0 else out


def pulse_kernel_M(n: int, omega, t):
    """(-1)^(n+1) sin(w t) + 2 sum_{j=1..n} (-1)^j sin(j w t/(n+1))."""
    n = PulseSchedule(n).n
    x = np.asarray(omega, dtype=float) * np.asarray(t, dtype=float)
    out = (-1.0) ** (n + 1) * np.sin(x)
    for j in range(1, n + 1):
        out = out + 2.0 * (-1.0) ** j * np.sin(j * x / (n + 1))
    return float(out) if np.ndim(out) == 0 else out


def _quadrature_spec(bath: BathParams, t: float, spec: Optional[QuadratureSpec]) -> QuadratureSpec:
    base = spec or QuadratureSpec()
    return QuadratureSpec(
        rel_tol=base.rel_tol,
        abs_tol=base.abs_tol,
        max_panels=base.max_panels,
        oscillation_frequency=float(t),
        decay_scale=bath.omega_c,
        endpoint_exponent=base.endpoint_exponent,
    )


def thermal_factor(bath: BathParams, omega):
    """coth(w / 2T), exactly 1 at T = 0."""
    if bath.T == 0:
        return np.ones_like(np.asarray(omega, dtype=float))
    return 1.0 / np.tanh(np.asarray(omega) / (2.0 * bath.T))


def _check_time(t):
    t_arr = np.asarray(t, dtype=float)
    if np.any(~(t_arr >= 0)) or not np.all(np.isfinite(t_arr)):
        raise DomainError("interaction time must be finite and >= 0")
    return t_arr


def _lag_grid(t, n):
    m = np.arange(1, n + 2, dtype=float).reshape((-1,) + (1,) * np.ndim(t))
    return m * (t / (n + 1))


def _series_gamma(bath, t, schedule, partial_target=None):
    free = response.decoherence if partial_target is None else (
        lambda b, tau: response.decoherence_partial(b, tau, partial_target)
    )
    if schedule is None or schedule.n == 0:
        return free(bath, t)
    w = schedule.lag_weights().reshape((-1,) + (1,) * np.ndim(t))
    return np.sum(w * free(bath, _lag_grid(t, schedule.n)), axis=0)


def _series_phi(bath, t, schedule, partial_target=None):
    free = response.phase if partial_target is None else (
        lambda b, tau: response.phase_partial(b, tau, partial_target)
    )
    if schedule is None or schedule.n == 0:
        return free(bath, t)
    c = schedule.edge_coefficients()[1:].reshape((-1,) + (1,) * np.ndim(t))
    return np.sum(c * free(bath, _lag_grid(t, schedule.n)), axis=0)


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def gamma_uc(bath: BathParams, t, pulses=None, method: str = "series", spec: Optional[QuadratureSpec] = None):
    """Decoherence factor without initial correlations.

    Parameters
    ----------
    bath : BathParams
    t : float or array_like
        Interaction time(s), >= 0.  ``method="quadrature"`` needs a scalar.
    pulses : PulseSchedule or int, optional
        ``None`` integrates the free kernel (1 - cos w t)/w^2; a schedule
        (including n = 0) integrates the filter kernel F_n.  The thermal
        factor coth(w/2T) multiplies both.
    method : {"series", "quadrature"}
    """
    schedule = _as_schedule(pulses)
    t_arr = _check_time(t)
    if method == "series":
        return _scalar(_series_gamma(bath, t_arr, schedule))
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    t0 = float(t_arr)
    if t0 == 0:
        return 0.0
    if schedule is None:
        def integrand(w):
            return spectral_density(bath, w) * 2.0 * np.sin(0.5 * w * t0) ** 2 / w**2 * thermal_factor(bath, w)
    else:
        def integrand(w):
            return spectral_density(bath, w) * pulse_kernel_F(schedule.n, w, t0) * thermal_factor(bath, w)
    return integrate_semi_infinite(integrand, _quadrature_spec(bath, t0, spec)).value


def gamma_uc_closed_form(bath: BathParams, t):
    """Zero-temperature, pulse-free Gamma_uc in Gamma-function form.

    G [1 - u] Gamma(s-1) with u = Re (1 + i wc t)^(1-s), or G/2 ln(1 + (wc t)^2)
    in the Ohmic window.
    """
    if bath.T != 0:
        raise UnsupportedConfigurationError("closed-form Gamma_uc is available at T = 0 only")
    t_arr = _check_time(t)
    if bath.is_ohmic:
        return _scalar(0.5 * bath.G * np.log1p((bath.omega_c * t_arr) ** 2))
    u = complex_binomial_power(bath.omega_c, t_arr, bath.s - 1.0).u
    return _scalar(bath.G * (1.0 - u) * gamma_function(bath.s - 1.0))


def phi_closed_form(bath: BathParams, t):
    """phi(t) in Gamma-function form: G v Gamma(s-1), or G atan(wc t) if Ohmic."""
    t_arr = _check_time(t)
    if bath.is_ohmic:
        return _scalar(bath.G * np.arctan(bath.omega_c * t_arr))
    v = complex_binomial_power(bath.omega_c, t_arr, bath.s - 1.0).v
    return _scalar(bath.G * v * gamma_function(bath.s - 1.0))


def phi_shift(bath: BathParams, t, pulses=None, method: str = "series", spec: Optional[QuadratureSpec] = None):
    """Level-shift angle phi(t); independent of temperature.

    ``pulses=None`` integrates J(w) w^-2 sin(w t); a schedule integrates
    -J(w) w^-2 M_n(w, t).
    """
    schedule = _as_schedule(pulses)
    t_arr = _check_time(t)
    if method == "series":
        return _scalar(_series_phi(bath, t_arr, schedule))
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    t0 = float(t_arr)
    if t0 == 0:
        return 0.0
    if schedule is None:
        def integrand(w):
            return spectral_density(bath, w) * np.sin(w * t0) / w**2
    else:
        def integrand(w):
            return -spectral_density(bath, w) * pulse_kernel_M(schedule.n, w, t0) / w**2
    return integrate_semi_infinite(integrand, _quadrature_spec(bath, t0, spec)).value


def _sech(x):
    e = np.exp(-np.abs(x))
    return 2.0 * e / (1.0 + e * e)


def gamma_corr(bath: BathParams, probe: ProbeParams, phi):
    """-1/2 ln[1 - sin^2(phi) / cosh^2(w0 / 2T)]; exactly 0 at T = 0."""
    phi = np.asarray(phi, dtype=float)
    if bath.T == 0:
        return _scalar(np.zeros_like(phi))
    sech2 = _sech(probe.omega_0 / (2.0 * bath.T)) ** 2
    return _scalar(-0.5 * np.log1p(-np.sin(phi) ** 2 * sech2))


def chi_shift(bath: BathParams, probe: ProbeParams, phi):
    """Continuous solution of tan(chi) = tanh(w0 / 2T) tan(phi).

    chi - phi is pi-periodic in phi and vanishes at multiples of pi/2, so
    chi = phi - atan2((1-k) sin phi cos phi, cos^2 phi + k sin^2 phi) with
    k = tanh(w0/2T) is continuous and stays on the branch of phi.
    """
    phi = np.asarray(phi, dtype=float)
    if bath.T == 0:
        return _scalar(phi.copy())
    k = np.tanh(probe.omega_0 / (2.0 * bath.T))
    sp, cp = np.sin(phi), np.cos(phi)
    return _scalar(phi - np.arctan2((1.0 - k) * sp * cp, cp * cp + k * sp * sp))


def coherence_record(bath: BathParams, probe: ProbeParams, t: float, pulses=None, method: str = "series") -> CoherenceRecord:
    t = float(_check_time(t))
    schedule = _as_schedule(pulses)
    g_uc = float(gamma_uc(bath, t, schedule, method=method))
    phi = float(phi_shift(bath, t, schedule, method=method))
    g_corr = float(gamma_corr(bath, probe, phi))
    chi = float(chi_shift(bath, probe, phi))
    return CoherenceRecord(
        t=t,
        gamma_uc=g_uc,
        gamma_corr=g_corr,
        phi=phi,
        chi=chi,
        gamma_total=g_uc + g_corr + probe.gamma_0,
    )
