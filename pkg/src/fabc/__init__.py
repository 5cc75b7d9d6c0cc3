"""fabc: performance analysis of a fluid-antenna backscatter link.

Closed-form outage probability and delay outage rate for a best-port
receiver over copula-correlated cascaded Rayleigh channels, cross-checked
by a built-in Monte-Carlo oracle, plus a reproducible sweep CLI.
"""

__version__ = "0.1.0"

from . import _backend
from .channel import (
    PortCorrelationProfile,
    SystemConfig,
    correlation_profile,
    db_to_linear,
    jake_correlation,
    product_channel_cdf,
    product_channel_quantile,
    spearman_rho_approx,
    theta_from_mu,
)
from .copula import (
    CopulaSpec,
    copula_cdf,
    copula_upper_bound_check,
    sample_clayton,
    spearman_rho_numeric,
    spec_from_profile,
)
from .metrics import (
    DorThresholdMode,
    MetricResult,
    delay_outage_rate,
    delay_outage_rate_asymptotic,
    dor_threshold,
    equivalent_channel_cdf,
    high_snr_marginal_cdf,
    outage_probability,
    outage_probability_asymptotic,
)
from .montecarlo import (
    McEstimate,
    QuantileTable,
    estimate_dor,
    estimate_outage,
    sample_equivalent_gain,
    wilson_interval,
)
from .specfun import (
    AccuracyBudget,
    EULER_MASCHERONI,
    bessel_j0,
    bessel_k1,
    euler_mascheroni,
    k1_small_arg,
)
from .sweep import SweepResult, SweepSpec, emit, run_sweep

__all__ = [
    "__version__",
    "backend_name",
    "AccuracyBudget",
    "EULER_MASCHERONI",
    "bessel_j0",
    "bessel_k1",
    "euler_mascheroni",
    "k1_small_arg",
    "SystemConfig",
    "PortCorrelationProfile",
    "jake_correlation",
    "theta_from_mu",
    "spearman_rho_approx",
    "correlation_profile",
    "product_channel_cdf",
    "product_channel_quantile",
    "db_to_linear",
    "CopulaSpec",
    "copula_cdf",
    "copula_upper_bound_check",
    "sample_clayton",
    "spearman_rho_numeric",
    "spec_from_profile",
    "DorThresholdMode",
    "MetricResult",
    "dor_threshold",
    "equivalent_channel_cdf",
    "high_snr_marginal_cdf",
    "outage_probability",
    "delay_outage_rate",
    "outage_probability_asymptotic",
    "delay_outage_rate_asymptotic",
    "McEstimate",
    "QuantileTable",
    "sample_equivalent_gain",
    "estimate_outage",
    "estimate_dor",
    "wilson_interval",
    "SweepSpec",
    "SweepResult",
    "run_sweep",
    "emit",
]


def backend_name() -> str:
    """Name of the active numeric backend ('compiled' or 'python')."""
    return _backend.name()
