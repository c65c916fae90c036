"""Harmonic-oscillator environment with an exponentially cut-off power-law
spectral density.

All quantities are in units where hbar = k_B = 1 and the probe splitting
sets the frequency scale.
"""
from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "OHMIC_TOLERANCE",
    "BathParams",
    "EstimationTarget",
    "spectral_density",
    "spectral_density_partial",
]

# |s - 1| below this is treated as Ohmic by the closed-form dispatch.
OHMIC_TOLERANCE = 1e-12


class EstimationTarget(str, enum.Enum):
    """Environment parameter being estimated."""

    CUTOFF_FREQUENCY = "omega_c"
    COUPLING = "G"
    TEMPERATURE = "T"

    @classmethod
    def parse(cls, value: "str | EstimationTarget") -> "EstimationTarget":
        if isinstance(value, cls):
            return value
        aliases = {
            "omega_c": cls.CUTOFF_FREQUENCY,
            "wc": cls.CUTOFF_FREQUENCY,
            "cutoff": cls.CUTOFF_FREQUENCY,
            "cutofffrequency": cls.CUTOFF_FREQUENCY,
            "cutoff_frequency": cls.CUTOFF_FREQUENCY,
            "g": cls.COUPLING,
            "coupling": cls.COUPLING,
            "t": cls.TEMPERATURE,
            "temperature": cls.TEMPERATURE,
        }
        try:
            return aliases[str(value).strip().lower()]
        except KeyError:
            raise DomainError(f"unknown estimation target {value!r}") from None


@dataclass(frozen=True)
class BathParams:
    """Environment description.

    Attributes
    ----------
    G : float
        Dimensionless system-environment coupling strength, > 0.
    omega_c : float
        Cutoff frequency, > 0.
    s : float
        Ohmicity exponent, > 0.
    T : float
        Temperature, >= 0. ``T = 0`` is handled exactly, never as a limit.
    """

    G: float
    omega_c: float
    s: float
    T: float = 0.0

    def __post_init__(self):
        for name in ("G", "omega_c", "s", "T"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float, np.floating, np.integer)):
                raise DomainError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.G <= 0:
            raise DomainError(f"coupling G must be > 0, got {self.G}")
        if self.omega_c <= 0:
            raise DomainError(f"cutoff omega_c must be > 0, got {self.omega_c}")
        if self.s <= 0:
            raise DomainError(f"Ohmicity s must be > 0, got {self.s}")
        if self.T < 0:
            raise DomainError(f"temperature T must be >= 0, got {self.T}")

    @property
    def beta(self) -> float:
        """Inverse temperature; ``inf`` at T = 0."""
        return math.inf if self.T == 0 else 1.0 / self.T

    @property
    def classification(self) -> str:
        if self.s < 1:
            return "sub-Ohmic"
        if self.s > 1:
            return "super-Ohmic"
        return "Ohmic"

    @property
    def is_ohmic(self) -> bool:
        """True inside the dispatch window used by the closed forms."""
        return abs(self.s - 1.0) < OHMIC_TOLERANCE

    def replace(self, **changes) -> "BathParams":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _check_omega(omega):
    omega = np.asarray(omega, dtype=float)
    if np.any(~(omega > 0)):
        raise DomainError("spectral density is defined for omega > 0 only")
    return omega


def _scalar_or_array(values, like):
    return float(values) if np.ndim(like) == 0 else values


def spectral_density(bath: BathParams, omega):
    """J(omega) = G omega^s omega_c^(1-s) exp(-omega/omega_c).

    Accepts a scalar or an array of frequencies, all strictly positive.
    """
    w = _check_omega(omega)
    # Evaluated in log form so large omega underflows cleanly to 0.
    log_j = math.log(bath.G) + bath.s * np.log(w) + (1.0 - bath.s) * math.log(bath.omega_c) - w / bath.omega_c
    return _scalar_or_array(np.exp(log_j), omega)


def spectral_density_partial(bath: BathParams, omega, target):
    """Exact partial derivative of J(omega) with respect to G or omega_c."""
    target = EstimationTarget.parse(target)
    w = _check_omega(omega)
    j = np.asarray(spectral_density(bath, w))
    if target is EstimationTarget.COUPLING:
        out = j / bath.G
    elif target is EstimationTarget.CUTOFF_FREQUENCY:
        out = j * ((1.0 - bath.s) / bath.omega_c + w / bath.omega_c**2)
    else:
        raise DomainError("the spectral density does not depend on temperature")
    return _scalar_or_array(out, omega)
