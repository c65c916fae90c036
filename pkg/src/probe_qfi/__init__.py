"""Fisher information of a qubit probe dephased by a harmonic-oscillator bath,
with initial probe-bath correlations and periodic pi pulses."""

__version__ = "0.1.0"

from .bath import BathParams, EstimationTarget, spectral_density, spectral_density_partial
from .coherence import (
    CoherenceRecord,
    ProbeParams,
    PulseSchedule,
    chi_shift,
    coherence_record,
    gamma_corr,
    gamma_uc,
    phi_shift,
)
from .errors import (
    ConvergenceError,
    DegeneracyError,
    DomainError,
    EvaluationError,
    NoInformationError,
    ProbeQFIError,
    UnsupportedConfigurationError,
)
from .fisher import FisherReport, MeasurementSetting, classical_fisher, optimal_phi_hat, qfi
from .optimize import OptimizationBudget, optimize_over_time, optimize_pulses, optimize_time, sweep
from .sensitivity import SensitivityRecord, sensitivity

__all__ = [
    "BathParams", "EstimationTarget", "spectral_density", "spectral_density_partial",
    "CoherenceRecord", "ProbeParams", "PulseSchedule", "chi_shift", "coherence_record",
    "gamma_corr", "gamma_uc", "phi_shift",
    "ConvergenceError", "DegeneracyError", "DomainError", "EvaluationError",
    "NoInformationError", "ProbeQFIError", "UnsupportedConfigurationError",
    "FisherReport", "MeasurementSetting", "classical_fisher", "optimal_phi_hat", "qfi",
    "OptimizationBudget", "optimize_over_time", "optimize_pulses", "optimize_time", "sweep",
    "SensitivityRecord", "sensitivity",
]
