"""Parameter sweeps over the link metrics with CSV/JSON emission.

A sweep evaluates one metric (outage probability or delay outage rate)
over an x-axis (average SNR in dB, or payload size in bits), optionally
once per curve for a list of aperture sizes or port counts, using any
subset of the three engines: exact closed form, high-SNR asymptote, and
the Monte-Carlo oracle.

Output is a pure function of (spec, seed): re-running an identical spec
reproduces the emitted bytes exactly.
"""

import dataclasses
import json
from dataclasses import dataclass, field

import numpy as np
import yaml

from . import __version__ as _version
from . import _backend
from .channel import SystemConfig, correlation_profile, db_to_linear
from .copula import CopulaSpec, spec_from_profile
from .metrics import (
    DorThresholdMode,
    delay_outage_rate,
    delay_outage_rate_asymptotic,
    outage_probability,
    outage_probability_asymptotic,
)
from .montecarlo import MIN_SAMPLES, estimate_dor, estimate_outage

__all__ = [
    "UsageError",
    "SweepSpec",
    "SweepRow",
    "SweepResult",
    "run_sweep",
    "emit",
    "to_csv_text",
    "to_json_text",
    "load_sweep_spec",
    "sweep_spec_from_mapping",
    "result_from_json_text",
]

_METRICS = ("op", "dor")
_X_AXES = ("avg_snr_db", "payload_bits")
_ENGINES = ("exact", "asymptotic", "mc")
_VARY_PARAMS = ("fa_size", "num_ports")
_COPULA_MODES = ("homogeneous", "paper-literal", "independence")
_DOR_MODES = ("paper", "corrected")

CSV_HEADER = "curve_id,x,exact,asymptotic,mc,mc_lo,mc_hi"


class UsageError(ValueError):
    """Invalid sweep specification or CLI usage; exits with status 2."""


@dataclass(frozen=True)
class SweepSpec:
    """Full description of one sweep. Defaults reproduce the baseline
    outage-vs-SNR experiment (K = 4, aperture curves W in {0.5,1,2,4,6})."""

    metric: str = "op"
    x_axis: str = "avg_snr_db"
    x_values: tuple[float, ...] = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0)
    fixed: SystemConfig = field(default_factory=SystemConfig)
    vary_param: str | None = "fa_size"
    vary_values: tuple[float, ...] = (0.5, 1.0, 2.0, 4.0, 6.0)
    engines: tuple[str, ...] = ("exact", "asymptotic")
    mc_samples: int = 1_000_000
    seed: int = 42
    copula_mode: str = "homogeneous"
    copula_theta: float | None = None
    outer_index_rule: str = "last"
    dor_mode: str = "paper"

    def validate(self):
        if self.metric not in _METRICS:
            raise UsageError(f"metric: must be one of {_METRICS}, got {self.metric!r}")
        if self.x_axis not in _X_AXES:
            raise UsageError(f"x_axis: must be one of {_X_AXES}, got {self.x_axis!r}")
        if len(self.x_values) == 0:
            raise UsageError("x_values: must be nonempty")
        if not all(np.isfinite(self.x_values)):
            raise UsageError("x_values: entries must be finite")
        if any(b <= a for a, b in zip(self.x_values, self.x_values[1:])):
            raise UsageError("x_values: must be strictly increasing")
        if self.vary_param is not None:
            if self.vary_param not in _VARY_PARAMS:
                raise UsageError(
                    f"vary.param: must be one of {_VARY_PARAMS}, got {self.vary_param!r}"
                )
            if len(self.vary_values) == 0:
                raise UsageError("vary.values: must be nonempty")
        if not self.engines:
            raise UsageError("engines: must be nonempty")
        for eng in self.engines:
            if eng not in _ENGINES:
                raise UsageError(f"engines: unknown engine {eng!r}")
        if self.copula_mode not in _COPULA_MODES:
            raise UsageError(
                f"copula.mode: must be one of {_COPULA_MODES}, got {self.copula_mode!r}"
            )
        if self.copula_theta is not None and not self.copula_theta > 0.0:
            raise UsageError(
                f"copula.theta: must be positive, got {self.copula_theta!r}"
            )
        if self.dor_mode not in _DOR_MODES:
            raise UsageError(f"dor_mode: must be one of {_DOR_MODES}")
        if "mc" in self.engines:
            if self.copula_mode == "paper-literal":
                raise UsageError(
                    "engines: the mc engine cannot sample the paper-literal "
                    "copula (diagnostic only)"
                )
            if self.mc_samples < MIN_SAMPLES:
                raise UsageError(f"mc_samples: must be >= {MIN_SAMPLES}")
        if not (isinstance(self.seed, int) and self.seed >= 0):
            raise UsageError("seed: must be a nonnegative integer")


@dataclass(frozen=True)
class SweepRow:
    curve_id: str
    x: float
    exact: float | None = None
    asymptotic: float | None = None
    mc: float | None = None
    mc_lo: float | None = None
    mc_hi: float | None = None


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    metadata: dict


def _curves(spec: SweepSpec):
    if spec.vary_param is None:
        return [("base", {})]
    key = "W" if spec.vary_param == "fa_size" else "K"
    out = []
    for v in spec.vary_values:
        value = int(v) if spec.vary_param == "num_ports" else float(v)
        out.append((f"{key}={v:g}", {spec.vary_param: value}))
    return out


def _point_config(spec: SweepSpec, overrides: dict, x: float) -> SystemConfig:
    updates = dict(overrides)
    if spec.x_axis == "avg_snr_db":
        updates["avg_snr_db"] = float(x)
    else:
        updates["payload_bits"] = float(x)
    return dataclasses.replace(spec.fixed, **updates)


def _copula_for(spec: SweepSpec, config: SystemConfig) -> CopulaSpec:
    profile = correlation_profile(config)
    if spec.copula_theta is not None and spec.copula_mode == "homogeneous":
        return CopulaSpec.clayton(spec.copula_theta, config.num_ports)
    return spec_from_profile(profile, spec.copula_mode, spec.outer_index_rule)


def _point_seed(seed: int, curve_i: int, x_i: int) -> int:
    ss = np.random.SeedSequence((seed, curve_i, x_i))
    return int(ss.generate_state(1, dtype=np.uint32)[0])


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate every requested engine at every (curve, x) point."""
    spec.validate()
    dor_mode = DorThresholdMode(spec.dor_mode)
    rows = []
    warnings: list[str] = []
    conversions: dict[tuple[str, float], float] = {}

    for curve_i, (curve_id, overrides) in enumerate(_curves(spec)):
        for x_i, x in enumerate(spec.x_values):
            config = _point_config(spec, overrides, x)
            conversions[("avg_snr_db", config.avg_snr_db)] = db_to_linear(
                config.avg_snr_db
            )
            conversions[("snr_threshold_db", config.snr_threshold_db)] = db_to_linear(
                config.snr_threshold_db
            )
            try:
                row = _evaluate_point(
                    spec, config, curve_id, float(x), curve_i, x_i, dor_mode, warnings
                )
            except UsageError:
                raise
            except Exception as exc:
                raise RuntimeError(
                    f"engine failure at curve={curve_id} x={x:g}: {exc}; "
                    f"config={config}"
                ) from exc
            rows.append(row)
    rows.sort(key=lambda r: (r.curve_id, r.x))

    metadata = {
        "tool": "fabc",
        "version": _version,
        "backend": _backend.name(),
        "metric": spec.metric,
        "x_axis": spec.x_axis,
        "engines": list(spec.engines),
        "seed": spec.seed,
        "mc_samples": spec.mc_samples if "mc" in spec.engines else None,
        "copula_mode": spec.copula_mode,
        "copula_theta": spec.copula_theta,
        "outer_index_rule": spec.outer_index_rule,
        "dor_mode": spec.dor_mode,
        "config": dataclasses.asdict(spec.fixed),
        "vary": (
            None
            if spec.vary_param is None
            else {"param": spec.vary_param, "values": list(spec.vary_values)}
        ),
        "db_to_linear": [
            {"quantity": q, "db": db, "linear": lin}
            for (q, db), lin in sorted(conversions.items())
        ],
        "warnings": sorted(set(warnings)),
    }
    return SweepResult(rows=tuple(rows), metadata=metadata)


def _evaluate_point(spec, config, curve_id, x, curve_i, x_i, dor_mode, warnings):
    cop = _copula_for(spec, config)
    exact = asym = mc = mc_lo = mc_hi = None
    if "exact" in spec.engines:
        res = (
            outage_probability(config, cop)
            if spec.metric == "op"
            else delay_outage_rate(config, cop, dor_mode)
        )
        exact = res.value
        warnings.extend(res.warnings)
    if "asymptotic" in spec.engines:
        res = (
            outage_probability_asymptotic(config, spec=cop)
            if spec.metric == "op"
            else delay_outage_rate_asymptotic(config, spec=cop, mode=dor_mode)
        )
        asym = res.value
        warnings.extend(res.warnings)
    if "mc" in spec.engines:
        pseed = _point_seed(spec.seed, curve_i, x_i)
        est = (
            estimate_outage(config, cop, n=spec.mc_samples, seed=pseed)
            if spec.metric == "op"
            else estimate_dor(config, cop, dor_mode, n=spec.mc_samples, seed=pseed)
        )
        mc, (mc_lo, mc_hi) = est.estimate, est.confidence_95
    return SweepRow(
        curve_id=curve_id, x=x, exact=exact, asymptotic=asym,
        mc=mc, mc_lo=mc_lo, mc_hi=mc_hi,
    )


def _cell(value) -> str:
    return "" if value is None else repr(float(value))


def to_csv_text(result: SweepResult) -> str:
    lines = [CSV_HEADER]
    for row in result.rows:
        lines.append(
            ",".join(
                [
                    row.curve_id,
                    repr(float(row.x)),
                    _cell(row.exact),
                    _cell(row.asymptotic),
                    _cell(row.mc),
                    _cell(row.mc_lo),
                    _cell(row.mc_hi),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def to_json_text(result: SweepResult) -> str:
    payload = {
        "metadata": result.metadata,
        "rows": [dataclasses.asdict(r) for r in result.rows],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def result_from_json_text(text: str) -> SweepResult:
    payload = json.loads(text)
    rows = tuple(SweepRow(**r) for r in payload["rows"])
    return SweepResult(rows=rows, metadata=payload["metadata"])


def emit(result: SweepResult, format: str = "csv", path=None) -> str:
    """Serialize a sweep result; write to `path` when given.

    CSV uses the fixed header, '.' decimal points, LF line endings and
    shortest-roundtrip float formatting, so identical results emit
    identical bytes.
    """
    if format == "csv":
        text = to_csv_text(result)
    elif format == "json":
        text = to_json_text(result)
    else:
        raise UsageError(f"format: must be csv or json, got {format!r}")
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text


# -- configuration files ----------------------------------------------------

_TOP_KEYS = {
    "metric", "x_axis", "x_values", "vary", "fixed", "engines",
    "mc_samples", "seed", "copula", "dor_mode",
}
_COPULA_KEYS = {"mode", "theta", "outer_index_rule"}
_CONFIG_KEYS = {f.name for f in dataclasses.fields(SystemConfig)}


def sweep_spec_from_mapping(data: dict | None) -> SweepSpec:
    """Build a SweepSpec from a parsed configuration mapping.

    Every key is optional; an empty mapping (or file) yields the default
    baseline sweep. Unknown keys are usage errors.
    """
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise UsageError("config: top level must be a mapping")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise UsageError(f"config: unknown keys {sorted(unknown)}")

    kwargs = {}
    for key in ("metric", "x_axis", "dor_mode"):
        if key in data:
            kwargs[key] = str(data[key])
    if "x_values" in data:
        try:
            kwargs["x_values"] = tuple(float(v) for v in data["x_values"])
        except (TypeError, ValueError):
            raise UsageError("x_values: must be a list of numbers") from None
    if "engines" in data:
        engines = data["engines"]
        if isinstance(engines, str):
            engines = [e.strip() for e in engines.split(",") if e.strip()]
        kwargs["engines"] = tuple(str(e) for e in engines)
    for key in ("mc_samples", "seed"):
        if key in data:
            try:
                kwargs[key] = int(data[key])
            except (TypeError, ValueError):
                raise UsageError(f"{key}: must be an integer") from None
    if "vary" in data:
        vary = data["vary"]
        if vary is None:
            kwargs["vary_param"] = None
        else:
            if not isinstance(vary, dict) or set(vary) - {"param", "values"}:
                raise UsageError("vary: must be a mapping with keys param, values")
            kwargs["vary_param"] = str(vary.get("param", "fa_size"))
            try:
                kwargs["vary_values"] = tuple(float(v) for v in vary.get("values", ()))
            except (TypeError, ValueError):
                raise UsageError("vary.values: must be a list of numbers") from None
    if "copula" in data:
        cop = data["copula"]
        if isinstance(cop, str):
            cop = {"mode": cop}
        if not isinstance(cop, dict) or set(cop) - _COPULA_KEYS:
            raise UsageError(
                f"copula: must be a mode string or mapping with keys {sorted(_COPULA_KEYS)}"
            )
        if "mode" in cop:
            kwargs["copula_mode"] = str(cop["mode"])
        if cop.get("theta") is not None:
            try:
                kwargs["copula_theta"] = float(cop["theta"])
            except (TypeError, ValueError):
                raise UsageError("copula.theta: must be a number") from None
        if "outer_index_rule" in cop:
            kwargs["outer_index_rule"] = str(cop["outer_index_rule"])
    if "fixed" in data and data["fixed"] is not None:
        fx = data["fixed"]
        if not isinstance(fx, dict):
            raise UsageError("fixed: must be a mapping of SystemConfig fields")
        unknown = set(fx) - _CONFIG_KEYS
        if unknown:
            raise UsageError(f"fixed: unknown fields {sorted(unknown)}")
        merged = dataclasses.asdict(SystemConfig())
        merged.update(fx)
        if "num_ports" in merged:
            try:
                merged["num_ports"] = int(merged["num_ports"])
            except (TypeError, ValueError):
                raise UsageError("fixed.num_ports: must be an integer") from None
        try:
            kwargs["fixed"] = SystemConfig(**merged)
        except (TypeError, ValueError) as exc:
            raise UsageError(f"fixed: {exc}") from None

    spec = SweepSpec(**kwargs)
    spec.validate()
    return spec


def load_sweep_spec(path) -> SweepSpec:
    """Parse a YAML sweep configuration file (empty file = defaults)."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise UsageError(f"config: invalid YAML in {path}: {exc}") from None
    return sweep_spec_from_mapping(data)
