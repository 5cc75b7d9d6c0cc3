"""Command-line interface.

Subcommands:

* ``sweep``     -- run a metric sweep, emit CSV/JSON (stdout or --out)
* ``emit``      -- re-emit a stored JSON sweep result as CSV/JSON
* ``validate``  -- closed-form vs Monte-Carlo agreement suite
* ``quantile``  -- debug access to the cascade quantile function
* ``constants`` -- numeric constants and the per-port dependence table

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O error.
"""

import argparse
import dataclasses
import sys

from .channel import (
    SystemConfig,
    correlation_profile,
    db_to_linear,
    product_channel_cdf,
    product_channel_quantile,
    spearman_rho_approx,
)
from .metrics import DorThresholdMode, dor_threshold
from .specfun import EULER_MASCHERONI
from .sweep import (
    SweepSpec,
    UsageError,
    emit,
    load_sweep_spec,
    result_from_json_text,
    run_sweep,
    sweep_spec_from_mapping,
)
from .validate import build_validation_report

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fabc",
        description="Outage and delay-outage analysis of a fluid-antenna "
        "backscatter link, with Monte-Carlo cross-checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a parameter sweep")
    sweep.add_argument("--config", help="YAML sweep configuration file")
    sweep.add_argument("--metric", choices=["op", "dor"])
    sweep.add_argument("--x-axis", choices=["avg_snr_db", "payload_bits"])
    sweep.add_argument("--x-values", help="comma-separated, strictly increasing")
    sweep.add_argument("--vary", help="curve parameter, e.g. fa_size=0.5,1,2")
    sweep.add_argument("--engines", help="comma-separated subset of exact,asymptotic,mc")
    sweep.add_argument("--samples", type=int, help="Monte-Carlo sample count")
    sweep.add_argument("--seed", type=int)
    sweep.add_argument(
        "--copula", choices=["homogeneous", "paper-literal", "independence"]
    )
    sweep.add_argument("--dor-mode", choices=["paper", "corrected"])
    sweep.add_argument("--format", choices=["csv", "json"], default="csv")
    sweep.add_argument("--out", help="output path (default: stdout)")

    emit_p = sub.add_parser("emit", help="re-emit a stored JSON sweep result")
    emit_p.add_argument("--in", dest="infile", required=True, help="JSON result file")
    emit_p.add_argument("--format", choices=["csv", "json"], default="csv")
    emit_p.add_argument("--out", help="output path (default: stdout)")

    val = sub.add_parser("validate", help="closed-form vs Monte-Carlo agreement")
    val.add_argument("--config", help="YAML configuration file (fixed section used)")
    val.add_argument("--samples", type=int, default=1_000_000)
    val.add_argument("--seed", type=int, default=42)
    val.add_argument(
        "--copula", choices=["homogeneous", "paper-literal", "independence"]
    )

    quant = sub.add_parser("quantile", help="invert the cascade CDF")
    quant.add_argument("--u", type=float, required=True, help="probability in [0, 1)")
    quant.add_argument("--tol", type=float, default=1e-12)

    const = sub.add_parser("constants", help="constants and dependence table")
    const.add_argument("--config", help="YAML configuration file (fixed section used)")

    return parser


def _apply_sweep_flags(spec: SweepSpec, args) -> SweepSpec:
    updates = {}
    if args.metric:
        updates["metric"] = args.metric
    if args.x_axis:
        updates["x_axis"] = args.x_axis
    if args.x_values:
        try:
            updates["x_values"] = tuple(
                float(v) for v in args.x_values.split(",") if v.strip()
            )
        except ValueError:
            raise UsageError(f"--x-values: not a number list: {args.x_values!r}") from None
    if args.vary:
        if args.vary.lower() in ("none", "off"):
            updates["vary_param"] = None
        else:
            param, _, values = args.vary.partition("=")
            if not values:
                raise UsageError("--vary: expected param=v1,v2,...")
            updates["vary_param"] = param.strip()
            try:
                updates["vary_values"] = tuple(
                    float(v) for v in values.split(",") if v.strip()
                )
            except ValueError:
                raise UsageError(f"--vary: not a number list: {values!r}") from None
    if args.engines:
        updates["engines"] = tuple(
            e.strip() for e in args.engines.split(",") if e.strip()
        )
    if args.samples is not None:
        updates["mc_samples"] = args.samples
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.copula:
        updates["copula_mode"] = args.copula
    if args.dor_mode:
        updates["dor_mode"] = args.dor_mode
    if updates:
        spec = dataclasses.replace(spec, **updates)
    spec.validate()
    return spec


def _load_fixed_config(path) -> SystemConfig:
    if path is None:
        return SystemConfig()
    return load_sweep_spec(path).fixed


def _write_or_print(text: str, out_path) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _cmd_sweep(args) -> int:
    spec = load_sweep_spec(args.config) if args.config else sweep_spec_from_mapping({})
    spec = _apply_sweep_flags(spec, args)
    result = run_sweep(spec)
    text = emit(result, format=args.format)
    _write_or_print(text, args.out)
    return EXIT_OK


def _cmd_emit(args) -> int:
    with open(args.infile, "r", encoding="utf-8") as fh:
        result = result_from_json_text(fh.read())
    text = emit(result, format=args.format)
    _write_or_print(text, args.out)
    return EXIT_OK


def _cmd_validate(args) -> int:
    config = _load_fixed_config(args.config)
    if args.samples < 10_000:
        raise UsageError("--samples: at least 10000 required")
    report, passed = build_validation_report(
        config,
        n=args.samples,
        seed=args.seed,
        copula_mode=args.copula or "homogeneous",
    )
    sys.stdout.write(report)
    return EXIT_OK if passed else EXIT_VALIDATION


def _cmd_quantile(args) -> int:
    r = product_channel_quantile(args.u, tol=args.tol)
    roundtrip = product_channel_cdf(r)
    sys.stdout.write(
        f"u={args.u!r}\nr={r!r}\ncdf(r)={roundtrip!r}\nresidual={roundtrip - args.u!r}\n"
    )
    return EXIT_OK


def _cmd_constants(args) -> int:
    config = _load_fixed_config(args.config)
    profile = correlation_profile(config)
    out = [
        f"euler_mascheroni = {EULER_MASCHERONI!r}",
        f"avg_snr_linear = {db_to_linear(config.avg_snr_db)!r}",
        f"snr_threshold_linear = {db_to_linear(config.snr_threshold_db)!r}",
        f"dor_threshold_paper = {dor_threshold(config, DorThresholdMode.PAPER)!r}",
        f"dor_threshold_corrected = {dor_threshold(config, DorThresholdMode.CORRECTED)!r}",
        "",
        "port  mu            theta         spearman_rho_approx",
    ]
    for k, (m, t) in enumerate(zip(profile.mu, profile.theta), start=1):
        out.append(f"{k:<5d} {m:<13.6g} {t:<13.6g} {spearman_rho_approx(t):.6g}")
    for note in profile.clamp_policy:
        out.append(f"note: {note}")
    sys.stdout.write("\n".join(out) + "\n")
    return EXIT_OK


_COMMANDS = {
    "sweep": _cmd_sweep,
    "emit": _cmd_emit,
    "validate": _cmd_validate,
    "quantile": _cmd_quantile,
    "constants": _cmd_constants,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
