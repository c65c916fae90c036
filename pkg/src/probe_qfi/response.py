r"""Closed-form dephasing response of a single free-evolution window.

For the spectral density J(w) = G w^s wc^(1-s) exp(-w/wc) every kernel
integral reduces to Laplace transforms of w^(s-2) evaluated at complex
arguments.  With alpha = 1/wc,

    int_0^inf w^(s-2) e^(-A w) (1 - cos w tau) dw = Re[p(A) - p(A + i tau)]
    int_0^inf w^(s-2) e^(-A w) sin(w tau) dw      = -Im p(A + i tau)

where p(z) = Gamma(s-1) z^(1-s) (and -log z at s = 1).  Writing
coth(w/2T) = 1 + 2 sum_k exp(-k w / T) turns the thermal decoherence into
a sum over A_k = alpha + k/T.  The sum decays only like k^-(1+s), so the
first few terms are added explicitly and the remainder is taken from the
Euler-Maclaurin formula, whose integral and derivative terms are again
values of p and its derivatives.

All functions broadcast over ``tau``.
"""
from __future__ import annotations

import math

import numpy as np

from .bath import OHMIC_TOLERANCE, BathParams, EstimationTarget

__all__ = ["decoherence", "decoherence_partial", "phase", "phase_partial"]

_EXPLICIT_MODES = 24
# B_2, B_4, ..., B_12 divided by (2r)!
_EM_COEFFS = tuple(
    b / math.factorial(2 * r)
    for r, b in enumerate((1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730), start=1)
)


def _order(s: float, j: int) -> float:
    """Gamma-function argument of the j-th derivative of p; snaps to integers."""
    nu = s - 1.0 + j
    nearest = round(nu)
    return float(nearest) if abs(nu - nearest) < OHMIC_TOLERANCE else nu


def _coefficient(s: float, j: int) -> float:
    # p^(j)(z) = (-1)^j Gamma(s-1+j) z^(1-s-j) on the power branch.
    return (-1.0) ** j * math.gamma(_order(s, j))


def _power_difference(A, tau, s: float, j: int):
    """Re[p^(j)(A) - p^(j)(A + i tau)] for real A > 0, without cancellation."""
    x = tau / A
    a = 0.5 * np.log1p(x * x)  # Re log(1 + i x)
    b = np.arctan(x)  # Im log(1 + i x)
    nu = _order(s, j)
    sign = (-1.0) ** j
    if nu == 0.0:
        # p^(j) = (-1)^(j+1) log z
        return sign * a
    if nu == -1.0:
        # p^(j) = (-1)^j z log z up to terms that cancel under Re[.]
        return -sign * (A * a - tau * b)
    q = 1.0 - s - j
    qa, qb = q * a, q * b
    re_expm1 = np.expm1(qa) * np.cos(qb) - 2.0 * np.sin(0.5 * qb) ** 2
    return -_coefficient(s, j) * A**q * re_expm1


def _power_imag(A, tau, s: float, j: int):
    """Im p^(j)(A + i tau)."""
    nu = _order(s, j)
    angle = np.arctan2(tau, A)
    if nu == 0.0:
        return (-1.0) ** (j + 1) * angle
    q = 1.0 - s - j
    return _coefficient(s, j) * np.hypot(A, tau) ** q * np.sin(q * angle)


def _mode_sum(bath: BathParams, tau, j: int, weighted: bool = False):
    """sum_{k>=1} w_k Re[p^(j)(A_k) - p^(j)(A_k + i tau)], w_k = k or 1."""
    T = bath.T
    alpha = 1.0 / bath.omega_c
    s = bath.s
    K = _EXPLICIT_MODES
    k = np.arange(1, K, dtype=float).reshape((-1,) + (1,) * np.ndim(tau))
    terms = _power_difference(alpha + k / T, tau, s, j)
    total = np.sum(terms * k if weighted else terms, axis=0)

    A_K = alpha + K / T

    def D(m):
        return _power_difference(A_K, tau, s, j + m)

    if not weighted:
        total = total - T * D(-1) + 0.5 * D(0)
        for r, c in enumerate(_EM_COEFFS, start=1):
            m = 2 * r - 1
            total = total - c * T ** (-m) * D(m)
    else:
        total = total - K * T * D(-1) + T * T * D(-2) + 0.5 * K * D(0)
        for r, c in enumerate(_EM_COEFFS, start=1):
            m = 2 * r - 1
            deriv = K * T ** (-m) * D(m) + m * T ** (-(m - 1)) * D(m - 1)
            total = total - c * deriv
    return total


def _prefactor(bath: BathParams) -> float:
    return bath.G * bath.omega_c ** (1.0 - bath.s)


def decoherence(bath: BathParams, tau):
    """Free-evolution decoherence factor Gamma_uc(tau) at temperature bath.T."""
    tau = np.asarray(tau, dtype=float)
    alpha = 1.0 / bath.omega_c
    inner = _power_difference(alpha, tau, bath.s, 0)
    if bath.T > 0:
        inner = inner + 2.0 * _mode_sum(bath, tau, 0)
    return _prefactor(bath) * inner


def decoherence_partial(bath: BathParams, tau, target):
    """Exact partial derivative of :func:`decoherence` w.r.t. G, omega_c or T."""
    target = EstimationTarget.parse(target)
    tau = np.asarray(tau, dtype=float)
    if target is EstimationTarget.COUPLING:
        return decoherence(bath, tau) / bath.G
    if target is EstimationTarget.CUTOFF_FREQUENCY:
        alpha = 1.0 / bath.omega_c
        inner = _power_difference(alpha, tau, bath.s, 1)
        if bath.T > 0:
            inner = inner + 2.0 * _mode_sum(bath, tau, 1)
        return (1.0 - bath.s) / bath.omega_c * decoherence(bath, tau) - _prefactor(bath) * alpha**2 * inner
    if bath.T == 0:
        raise ValueError("temperature derivative requires T > 0")
    weighted = _mode_sum(bath, tau, 1, weighted=True)
    return -2.0 * _prefactor(bath) / bath.T**2 * weighted


def phase(bath: BathParams, tau):
    """Free-evolution level-shift angle phi(tau) = int J(w) w^-2 sin(w tau) dw."""
    tau = np.asarray(tau, dtype=float)
    return -_prefactor(bath) * _power_imag(1.0 / bath.omega_c, tau, bath.s, 0)


def phase_partial(bath: BathParams, tau, target):
    target = EstimationTarget.parse(target)
    tau = np.asarray(tau, dtype=float)
    if target is EstimationTarget.COUPLING:
        return phase(bath, tau) / bath.G
    if target is EstimationTarget.TEMPERATURE:
        return np.zeros_like(tau)
    s, wc = bath.s, bath.omega_c
    shift = bath.G * wc ** (-1.0 - s) * _power_imag(1.0 / wc, tau, s, 1)
    return (1.0 - s) / wc * phase(bath, tau) + shift
