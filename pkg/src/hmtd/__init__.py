"""Closed-form edge offloading for hierarchical DNN inference on UAV fleets."""

__version__ = "0.1.0"

from .model import (  # noqa: E402
    EffectiveRates,
    InfeasibleConfigurationError,
    InfeasibleThresholdError,
    LinkModel,
    MesProfile,
    QualityErrorModel,
    TaskSpec,
    UavProfile,
    channel_gain,
    data_rate,
    effective_error_rates,
    error_threshold_default,
)
from .binary import optimal_mu  # noqa: E402
from .partial import optimal_beta, optimal_beta_special  # noqa: E402
from .fleet import Scenario, StrategyReport, run_strategy  # noqa: E402

__all__ = [
    "EffectiveRates", "InfeasibleConfigurationError", "InfeasibleThresholdError",
    "LinkModel", "MesProfile", "QualityErrorModel", "TaskSpec", "UavProfile",
    "channel_gain", "data_rate", "effective_error_rates", "error_threshold_default",
    "optimal_mu", "optimal_beta", "optimal_beta_special",
    "Scenario", "StrategyReport", "run_strategy",
]
