"""Headline link metrics: best-port channel CDF, outage probability, delay
outage rate, and their high-SNR approximations.

All metrics are evaluations of the same object -- the CDF of the best
port's cascaded gain -- at a metric-specific abscissa:

* outage probability: r = gamma_th / gamma_bar (both linear);
* delay outage rate: r = T_hat / gamma_bar, where T_hat is the
  delay-equivalent SNR threshold 2**(R/(B*T_th)) (see DorThresholdMode
  for the off-by-one variant).

High-SNR forms replace the margin with r*(1 - 2*gamma - ln r), obtained
from the small-argument expansion of K1, inside the same copula shell.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from .channel import (
    PortCorrelationProfile,
    SystemConfig,
    correlation_profile,
    db_to_linear,
    product_channel_cdf,
)
from .copula import CopulaSpec, equal_margin_cdf, spec_from_profile
from .specfun import EULER_MASCHERONI

__all__ = [
    "DorThresholdMode",
    "MetricResult",
    "dor_threshold",
    "high_snr_marginal_cdf",
    "equivalent_channel_cdf",
    "outage_probability",
    "delay_outage_rate",
    "outage_probability_asymptotic",
    "delay_outage_rate_asymptotic",
]


class DorThresholdMode(enum.Enum):
    """Delay-threshold algebra for the delay outage rate.

    PAPER uses T_hat = 2**(R/(B*T_th)) as printed in the source closed
    form; CORRECTED subtracts 1, which is what the delay definition
    Pr(R/(B*log2(1 + snr)) > T_th) actually implies. PAPER is the default
    for fidelity; the Monte-Carlo oracle always follows the definition and
    therefore agrees with CORRECTED.
    """

    PAPER = "paper"
    CORRECTED = "corrected"


@dataclass(frozen=True)
class MetricResult:
    """A metric value with full provenance.

    `mode` is "exact", "asymptotic", or "paper_literal" (exact shell with
    the diagnostic per-port-exponent copula). Exact-mode values always lie
    in [0, 1]; asymptotic and paper-literal values may not, in which case
    a warning is attached.
    """

    value: float
    mode: str
    config_snapshot: SystemConfig
    copula_mode: str
    warnings: tuple[str, ...] = field(default=())


_PAPER_LITERAL_WARNING = (
    "paper-literal copula mode is diagnostic only: per-port exponents do "
    "not define a valid joint distribution"
)


def dor_threshold(config: SystemConfig, mode: DorThresholdMode = DorThresholdMode.PAPER) -> float:
    """Delay-equivalent SNR threshold T_hat.

    PAPER: 2**(R/(B*T_th)); CORRECTED: 2**(R/(B*T_th)) - 1.
    """
    exponent = config.payload_bits / (config.bandwidth_hz * config.delay_threshold_s)
    if mode is DorThresholdMode.CORRECTED:
        return float(np.expm1(exponent * np.log(2.0)))
    return float(2.0 ** exponent)


def high_snr_marginal_cdf(r):
    """Small-argument approximation of the cascade CDF: r*(1 - 2g - ln r).

    Valid as r -> 0; turns negative past r ~ 0.857 and is then flagged by
    the asymptotic metrics. r = 0 maps to 0 exactly.
    """
    r = np.asarray(r, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(
            r > 0.0, r * (1.0 - 2.0 * EULER_MASCHERONI - np.log(r)), 0.0
        )
    if r.ndim == 0:
        return float(out)
    return out


def equivalent_channel_cdf(r, profile: PortCorrelationProfile, spec: CopulaSpec):
    """CDF of the best-port cascaded gain at threshold r.

    Couples K identical margins F(r) through the copula; a single-port
    receiver bypasses the copula entirely.
    """
    if spec.dim != profile.num_ports:
        raise ValueError("copula dimension does not match the port count")
    f = product_channel_cdf(r)
    if profile.num_ports == 1:
        return f
    return equal_margin_cdf(f, spec)


def _prepare(config, spec, profile=None):
    if profile is None:
        profile = correlation_profile(config)
    if spec is None:
        spec = spec_from_profile(profile, "homogeneous")
    warnings = list(profile.clamp_policy)
    mode = "exact"
    if spec.kind == "clayton_paper_literal":
        mode = "paper_literal"
        warnings.append(_PAPER_LITERAL_WARNING)
    return profile, spec, warnings, mode


def _finish_exact(value, mode, config, spec, warnings) -> MetricResult:
    value = float(value)
    if np.isfinite(value) and -1e-9 <= value <= 1.0 + 1e-9:
        value = min(max(value, 0.0), 1.0)
    else:
        warnings = warnings + [
            f"{mode} metric value {value!r} outside [0, 1]"
        ]
    return MetricResult(
        value=value,
        mode=mode,
        config_snapshot=config,
        copula_mode=spec.kind,
        warnings=tuple(warnings),
    )


def outage_probability(config: SystemConfig, spec: CopulaSpec | None = None) -> MetricResult:
    """Probability that the received SNR falls below the threshold.

    Evaluates the best-port CDF at r = gamma_th/gamma_bar. With spec=None
    the homogeneous copula derived from the port profile is used.
    """
    profile, spec, warnings, mode = _prepare(config, spec)
    r = db_to_linear(config.snr_threshold_db) / db_to_linear(config.avg_snr_db)
    value = equivalent_channel_cdf(r, profile, spec)
    return _finish_exact(value, mode, config, spec, warnings)


def delay_outage_rate(
    config: SystemConfig,
    spec: CopulaSpec | None = None,
    mode: DorThresholdMode = DorThresholdMode.PAPER,
) -> MetricResult:
    """Probability that delivering the payload takes longer than the budget.

    Evaluates the best-port CDF at r = T_hat/gamma_bar with T_hat chosen
    by the threshold mode.
    """
    profile, spec, warnings, result_mode = _prepare(config, spec)
    r = dor_threshold(config, mode) / db_to_linear(config.avg_snr_db)
    value = equivalent_channel_cdf(r, profile, spec)
    return _finish_exact(value, result_mode, config, spec, warnings)


def _asymptotic(config, profile, spec, r) -> MetricResult:
    profile, spec, warnings, _ = _prepare(config, spec, profile)
    if spec.dim != profile.num_ports:
        raise ValueError("copula dimension does not match the port count")
    margin = high_snr_marginal_cdf(r)
    if not (0.0 <= margin <= 1.0):
        warnings.append(
            f"high-SNR marginal approximation {margin:.6g} outside [0, 1] "
            f"at r={float(r):.6g}; asymptote unreliable at this SNR"
        )
    if profile.num_ports == 1:
        value = margin
    else:
        value = equal_margin_cdf(margin, spec)
    value = float(value)
    if not (np.isfinite(value) and 0.0 <= value <= 1.0):
        warnings.append(f"asymptotic value {value!r} outside [0, 1]")
    return MetricResult(
        value=value,
        mode="asymptotic",
        config_snapshot=config,
        copula_mode=spec.kind,
        warnings=tuple(warnings),
    )


def outage_probability_asymptotic(
    config: SystemConfig,
    profile: PortCorrelationProfile | None = None,
    spec: CopulaSpec | None = None,
) -> MetricResult:
    """High-SNR outage probability (approximate margin in the same shell)."""
    r = db_to_linear(config.snr_threshold_db) / db_to_linear(config.avg_snr_db)
    return _asymptotic(config, profile, spec, r)


def delay_outage_rate_asymptotic(
    config: SystemConfig,
    profile: PortCorrelationProfile | None = None,
    spec: CopulaSpec | None = None,
    mode: DorThresholdMode = DorThresholdMode.PAPER,
) -> MetricResult:
    """High-SNR delay outage rate (approximate margin in the same shell)."""
    r = dor_threshold(config, mode) / db_to_linear(config.avg_snr_db)
    return _asymptotic(config, profile, spec, r)
