"""Physical-layer model: system configuration, inter-port correlation, and
the distribution of the cascaded forward x backscatter channel gain.

Both hops are unit-mean exponential (squared-Rayleigh) gains, so the
cascade g = g_f * g_b has CDF F(r) = 1 - 2*sqrt(r)*K1(2*sqrt(r)). Port
correlation follows the classical isotropic-scattering model
mu_k = omega * J0(2*pi*(k-1)*W/(K-1)), and is mapped to a nonnegative
dependence parameter theta = 4*mu/(3 - 2*mu) via rank-correlation matching
(theta = 0 encodes independence).
"""

from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .specfun import _dispatch, bessel_j0

__all__ = [
    "SystemConfig",
    "PortCorrelationProfile",
    "THETA_MAX",
    "jake_correlation",
    "theta_from_mu",
    "spearman_rho_approx",
    "correlation_profile",
    "product_channel_cdf",
    "product_channel_quantile",
    "db_to_linear",
]

#: theta at full correlation (mu = 1); the mapping never exceeds this.
THETA_MAX = 4.0


@dataclass(frozen=True)
class SystemConfig:
    """All physical and protocol parameters of the link.

    Defaults reproduce the baseline numerical setup: 0 dB SNR threshold,
    5 kbit payload, 2 GHz bandwidth, 3 ms delay budget, 20 dB average SNR,
    a 4-port receiver on a one-wavelength aperture.
    """

    num_ports: int = 4            # K, selectable antenna positions
    fa_size: float = 1.0          # W, aperture length in wavelengths
    large_scale: float = 1.0      # omega, large-scale correlation factor
    avg_snr_db: float = 20.0      # mean received SNR [dB]
    snr_threshold_db: float = 0.0  # outage SNR threshold [dB]
    payload_bits: float = 5000.0  # R, data volume per delivery [bits]
    bandwidth_hz: float = 2e9     # B [Hz]
    delay_threshold_s: float = 3e-3  # T_th, delay budget [s]

    def __post_init__(self):
        if not (isinstance(self.num_ports, (int, np.integer)) and self.num_ports >= 1):
            raise ValueError("num_ports must be an integer >= 1")
        if not self.fa_size > 0.0:
            raise ValueError("fa_size must be positive")
        if not 0.0 < self.large_scale <= 1.0:
            raise ValueError("large_scale must lie in (0, 1]")
        if not self.bandwidth_hz > 0.0:
            raise ValueError("bandwidth_hz must be positive")
        if not self.payload_bits > 0.0:
            raise ValueError("payload_bits must be positive")
        if not self.delay_threshold_s > 0.0:
            raise ValueError("delay_threshold_s must be positive")
        for name in ("avg_snr_db", "snr_threshold_db"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class PortCorrelationProfile:
    """Per-port correlation values and derived dependence parameters.

    `theta_scalar` is the single dependence parameter used in homogeneous
    mode. It is derived from the aperture-mean port correlation: the
    last-port value oscillates with the aperture size (its Bessel factor
    changes sign), which would make a wider aperture look more correlated
    than a narrow one; averaging over ports preserves the monotone
    correlation-vs-aperture behavior that port selection relies on.
    `clamp_policy` records every port whose correlation fell outside the
    valid mapping domain and was snapped to independence.
    """

    mu: tuple[float, ...]
    theta: tuple[float, ...]
    theta_scalar: float
    clamp_policy: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if len(self.mu) != len(self.theta):
            raise ValueError("mu and theta must have equal length")
        if any(t < 0.0 for t in self.theta):
            raise ValueError("theta values must be nonnegative")

    @property
    def num_ports(self) -> int:
        return len(self.mu)


def jake_correlation(k: int, config: SystemConfig) -> float:
    """Spatial correlation of port k (1-based) under isotropic scattering.

    mu_k = omega * J0(2*pi*(k-1)*W/(K-1)); for a single-port receiver the
    spacing degenerates and mu_1 = omega by definition.
    """
    if not (isinstance(k, (int, np.integer)) and 1 <= k <= config.num_ports):
        raise ValueError(f"port index k={k} outside 1..{config.num_ports}")
    if k == 1 or config.num_ports == 1:
        return config.large_scale
    arg = 2.0 * np.pi * (k - 1) * config.fa_size / (config.num_ports - 1)
    return config.large_scale * bessel_j0(arg)


def theta_from_mu(mu: float, clamp_floor: float = 1e-6) -> float:
    """Dependence parameter from a linear correlation value.

    theta = 4*mu/(3 - 2*mu) on mu in (0, 1]; nonpositive (or negligibly
    small) correlations map to 0, i.e. independence, and values above 1
    are capped at theta(1) = 4. The mapping has a pole at mu = 1.5, which
    cannot be reached from physical correlations (|mu| <= omega <= 1).
    """
    if not np.isfinite(mu):
        raise ValueError("mu must be finite")
    if mu >= 1.5:
        raise ValueError("theta mapping undefined for mu >= 1.5")
    if mu <= clamp_floor:
        return 0.0
    return min(4.0 * mu / (3.0 - 2.0 * mu), THETA_MAX)


def spearman_rho_approx(theta: float) -> float:
    """Rank-correlation approximation 3*theta/(2*(theta+2)).

    Exact inverse of theta_from_mu on mu in (0, 1]; increasingly crude as
    theta grows (it exceeds 1 past theta = 4).
    """
    if theta < 0.0:
        raise ValueError("theta must be nonnegative")
    return 3.0 * theta / (2.0 * (theta + 2.0))


def correlation_profile(
    config: SystemConfig, clamp_floor: float = 1e-6
) -> PortCorrelationProfile:
    """Build the per-port correlation/dependence profile for a configuration."""
    mu = tuple(jake_correlation(k, config) for k in range(1, config.num_ports + 1))
    theta = []
    clamps = []
    for k, m in enumerate(mu, start=1):
        t = theta_from_mu(m, clamp_floor=clamp_floor)
        theta.append(t)
        if m <= clamp_floor:
            clamps.append(
                f"port {k}: mu={m:.6g} <= {clamp_floor:g}; "
                "theta clamped to 0 (independence)"
            )
    mu_mean = float(np.mean(mu))
    theta_scalar = theta_from_mu(mu_mean, clamp_floor=clamp_floor)
    if mu_mean <= clamp_floor:
        clamps.append(
            f"aperture-mean mu={mu_mean:.6g} <= {clamp_floor:g}; "
            "homogeneous theta clamped to 0 (independence)"
        )
    return PortCorrelationProfile(
        mu=mu,
        theta=tuple(theta),
        theta_scalar=theta_scalar,
        clamp_policy=tuple(clamps),
    )


def product_channel_cdf(r):
    """CDF of the cascaded channel gain: F(r) = 1 - 2*sqrt(r)*K1(2*sqrt(r)).

    Accepts scalars or arrays; F(0) = 0 and F is nondecreasing to 1.
    """

    def check(arr):
        if not np.all(np.isfinite(arr)):
            raise ValueError("product_channel_cdf requires finite input")
        if np.any(arr < 0.0):
            raise ValueError("product_channel_cdf requires r >= 0")

    return _dispatch("product_cdf", r, check)


def product_channel_quantile(u, tol: float = 1e-12):
    """Inverse of product_channel_cdf: r with |F(r) - u| <= tol.

    Bracketing Newton solve on the survival side; u = 0 maps to exactly 0.
    """
    arr = np.asarray(u, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError("product_channel_quantile requires finite input")
    if np.any((arr < 0.0) | (arr >= 1.0)):
        raise ValueError("product_channel_quantile requires u in [0, 1)")
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    flat = np.atleast_1d(arr).ravel()
    out = np.zeros_like(flat)
    pos = flat > 0.0
    if pos.any():
        x = _backend.active().solve_xk1(1.0 - flat[pos], tol)
        out[pos] = 0.25 * x * x
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def db_to_linear(x_db):
    """Power ratio from decibels: 10**(x/10)."""
    x = np.asarray(x_db, dtype=np.float64)
    out = np.power(10.0, x / 10.0)
    if x.ndim == 0:
        return float(out)
    return out
