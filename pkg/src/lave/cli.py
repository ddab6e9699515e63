"""Command-line interface: CSV ingestion, config echo, subcommand dispatch.

Subcommands: constants, calibrate, estimate, simulate, backtest, stats, acf.
Every output CSV starts with '#' comment lines that echo the parsed
configuration as a flag string; parsing that string reproduces the same
RunConfig, so a run is fully described by its own output header. Exit codes:
0 success, 2 usage, 3 input data, 4 domain or numeric, 5 nonconvergence.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
import time
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .calibration import CalibrationSpec, calibrate_lambda
from .errors import CalibrationBracketError, GarchConvergenceError, InputDataError, LaveError
from .estimator import EstimatorConfig, estimate_path
from .evaluation import acf, compare_forecasters, standardized_returns, summary_stats
from .garch import rolling_forecast
from .series import ReturnSeries, log_returns
from .simulation import ChangePointSpec, generate_change_point_series, run_change_point_experiment
from .transform import power_constants

__all__ = ["RunConfig", "DEFAULT_LAMBDA_TABLE", "DESIGN_PRESETS", "ingest_csv", "dispatch", "main"]

log = logging.getLogger("lave.cli")

# Shipped default thresholds, indexed by (gamma, reference window length M).
DEFAULT_LAMBDA_TABLE = {
    (0.5, 80): 2.74,
    (0.5, 40): 2.40,
    (1.0, 80): 2.58,
    (1.0, 40): 2.24,
    (2.0, 80): 2.18,
    (2.0, 40): 1.86,
}

# Named change-point designs: tuples of (segment length, sigma).
DESIGN_PRESETS = {
    "two-jump-3x": ((80, 1.0), (80, 3.0), (80, 1.0)),
    "two-jump-5x": ((80, 1.0), (80, 5.0), (80, 1.0)),
    "two-jump-3x-long": ((200, 1.0), (200, 3.0), (200, 1.0)),
    "two-jump-5x-long": ((200, 1.0), (200, 5.0), (200, 1.0)),
    "alternating-3x": tuple((60, 1.0) if i % 2 == 0 else (60, 3.0) for i in range(10)),
}

_RETURN_HEADERS = {"return", "returns", "ret", "log_return", "log_returns"}
_PRICE_HEADERS = {"price", "prices", "close", "level"}
_DATE_HEADERS = {"date", "time", "timestamp", "day"}


@dataclass(frozen=True)
class RunConfig:
    """Parsed flags for one CLI invocation; echoed into output headers."""

    command: str
    gamma: float = 0.5
    m0: int = 10
    lam: str = "auto:80"
    t0: int | None = None
    max_len: int | None = None
    seed: int = 0
    out_dir: str = "."
    deterministic: bool = False
    workers: int = 1
    input_path: str | None = None
    input_kind: str = "auto"
    design: str | None = None
    gamma_grid: str = "default"
    lambdas: str = "table"
    replications: int | None = None
    t_start: int = 20
    m_ref: int = 80
    alpha: float = 0.05
    garch_window: int = 350
    p: float = 0.5
    max_lag: int = 50
    standardize: bool = False
    curves_for: str = "0.5,80"

    def to_argv(self) -> list[str]:
        """Flag list that parses back to this exact config."""
        argv = [self.command]
        for f in fields(self):
            if f.name == "command":
                continue
            value = getattr(self, f.name)
            if value == f.default:
                continue
            flag = "--" + f.name.replace("_", "-")
            if f.name == "m_ref":
                flag = "--M"
            elif f.name == "input_path":
                flag = "--input"
            if isinstance(value, bool):
                argv.append(flag)
            else:
                argv.extend([flag, str(value)])
        return argv


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--gamma", type=float, default=0.5, help="power transform exponent")
    common.add_argument("--m0", type=int, default=10, help="grid step and minimal window")
    common.add_argument(
        "--lam",
        "--lambda",
        default="auto:80",
        help="threshold: a number, auto:M (calibrate), or table:M (shipped default)",
    )
    common.add_argument(
        "--auto-M",
        dest="auto_M",
        type=int,
        default=None,
        help="shorthand for --lam auto:M (calibrate the threshold for length M)",
    )
    common.add_argument("--t0", type=int, default=None, help="first estimation time (default 2*m0)")
    common.add_argument("--max-len", type=int, default=None, help="cap on the candidate window length")
    common.add_argument(
        "--seed",
        type=int,
        default=int(os.environ.get("LAVE_SEED", "0")),
        help="RNG seed (default: $LAVE_SEED or 0)",
    )
    common.add_argument("--out-dir", "--out", default=".", help="directory for output CSVs")
    common.add_argument(
        "--deterministic", action="store_true", help="suppress the timestamp header line"
    )
    common.add_argument(
        "--workers", type=int, default=1,
        help="worker pool size; outputs are identical for any value",
    )
    common.add_argument("--input", dest="input_path", default=None, help="input CSV path")
    common.add_argument(
        "--input-kind", choices=["auto", "returns", "prices"], default="auto",
        help="how to read a column with no recognized header",
    )
    common.add_argument(
        "--design", default=None,
        help="change-point design: preset name or LENxSIGMA,LENxSIGMA,...",
    )
    common.add_argument(
        "--gamma-grid", default="default",
        help="comma list of gammas, or 'default' for 0.5,1.0,2.0",
    )
    common.add_argument(
        "--lambdas", default="table",
        help="'table', 'auto', or explicit GAMMA:M:VALUE;... entries",
    )
    common.add_argument(
        "--replications", "--reps", type=int, default=None, help="Monte Carlo replications"
    )
    common.add_argument("--t-start", type=int, default=20, help="first scored time for simulate")
    common.add_argument("--M", dest="m_ref", type=int, default=80, help="reference window length")
    common.add_argument("--alpha", type=float, default=0.05, help="calibration target rate")
    common.add_argument(
        "--garch-window", "--window", type=int, default=350, help="rolling fit window"
    )
    common.add_argument(
        "--p", type=float, default=0.5, help="forecast criterion exponent"
    )
    common.add_argument("--max-lag", type=int, default=50, help="largest autocorrelation lag")
    common.add_argument(
        "--standardize", action="store_true",
        help="also emit the ACF of returns standardized by the adaptive estimate",
    )
    common.add_argument(
        "--curves-for", default="0.5,80",
        help="GAMMA,M combination written to curves.csv",
    )

    parser = argparse.ArgumentParser(
        prog="lave", description="Adaptive local-window volatility estimation toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, short in [
        ("constants", "emit the power-transform constant table"),
        ("calibrate", "Monte Carlo calibration of the scan threshold"),
        ("estimate", "per-time adaptive volatility estimates for a series"),
        ("simulate", "change-point Monte Carlo study: errors and curves"),
        ("backtest", "adaptive vs rolling-GARCH forecast comparison"),
        ("stats", "summary statistics of a series"),
        ("acf", "autocorrelations of absolute returns"),
    ]:
        sub.add_parser(name, parents=[common], help=short)
    return parser


def parse_config(argv) -> RunConfig:
    ns = _build_parser().parse_args(argv)
    if ns.auto_M is not None:
        ns.lam = f"auto:{ns.auto_M}"
    kwargs = {f.name: getattr(ns, f.name) for f in fields(RunConfig)}
    return RunConfig(**kwargs)


def ingest_csv(path, kind: str = "auto") -> ReturnSeries:
    """Read a return or price series from a CSV file.

    A header row naming a price-like or return-like column selects that
    column; a leading date column is ignored. Headerless single-column data
    is treated as returns unless a '# prices' comment or kind='prices' says
    otherwise. Rows whose selected cell is empty or non-numeric are dropped
    and counted in a log line. Prices are converted to log returns.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputDataError(f"cannot read {path}: {exc}") from exc

    comment_kind = None
    rows = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            directive = stripped.lstrip("#").strip().lower()
            if directive in ("returns", "prices"):
                comment_kind = directive
            continue
        rows.append(next(csv.reader([line])))
    if not rows:
        raise InputDataError(f"{path} has no data rows")

    header = [cell.strip().lower() for cell in rows[0]]
    col = None
    header_kind = None
    has_header = False
    for i, name in enumerate(header):
        if name in _RETURN_HEADERS:
            col, header_kind, has_header = i, "returns", True
            break
        if name in _PRICE_HEADERS:
            col, header_kind, has_header = i, "prices", True
            break
    if col is None and any(name in _DATE_HEADERS for name in header):
        raise InputDataError(f"{path}: no recognizable price or return column")
    if col is None:
        # headerless: last column is the value, any leading column is a date
        def numeric(cell):
            try:
                float(cell)
                return True
            except ValueError:
                return False

        col = len(rows[0]) - 1
        has_header = not numeric(rows[0][col])
        if has_header:
            raise InputDataError(f"{path}: no recognizable price or return column")

    data_rows = rows[1:] if has_header else rows
    values = []
    dropped = 0
    for row in data_rows:
        cell = row[col].strip() if col < len(row) else ""
        try:
            values.append(float(cell))
        except ValueError:
            dropped += 1
    if dropped:
        log.info("dropped %d non-numeric rows from %s", dropped, path)
    # explicit kind wins, then a comment directive, then the header
    resolved = kind if kind != "auto" else (comment_kind or header_kind or "returns")
    if resolved == "prices":
        if len(values) < 2:
            raise InputDataError(f"{path}: need at least 2 usable price rows")
        return log_returns(values, origin_label=path.name)
    if len(values) < 2:
        raise InputDataError(f"{path}: need at least 2 usable rows")
    return ReturnSeries(values, origin_label=path.name)


def _parse_design(text: str, seed: int) -> ChangePointSpec:
    if text in DESIGN_PRESETS:
        return ChangePointSpec(segments=DESIGN_PRESETS[text], seed=seed)
    segments = []
    for part in text.split(","):
        try:
            n, s = part.lower().split("x")
            segments.append((int(n), float(s)))
        except ValueError as exc:
            raise ValueError(
                f"design {text!r} is neither a preset nor LENxSIGMA,... syntax"
            ) from exc
    return ChangePointSpec(segments=tuple(segments), seed=seed)


def _parse_gamma_grid(text: str) -> list[float]:
    if text == "default":
        return [0.5, 1.0, 2.0]
    return [float(part) for part in text.split(",")]


def _resolve_lambda(cfg: RunConfig) -> tuple[float, int]:
    """Turn the --lam text into a number plus the M label it came from."""
    text = cfg.lam
    if text.startswith("auto:"):
        m = int(text.split(":", 1)[1])
        spec = CalibrationSpec(
            gamma=cfg.gamma, M=m, m0=cfg.m0, target_alpha=cfg.alpha, seed=cfg.seed
        )
        return calibrate_lambda(spec).lam, m
    if text.startswith("table:"):
        m = int(text.split(":", 1)[1])
        key = (cfg.gamma, m)
        if key not in DEFAULT_LAMBDA_TABLE:
            raise ValueError(
                f"no shipped threshold for gamma={cfg.gamma}, M={m}; use auto:{m}"
            )
        return DEFAULT_LAMBDA_TABLE[key], m
    return float(text), 0


def _resolve_lambda_table(cfg: RunConfig, gammas) -> dict:
    """Threshold per (gamma, M label) for the simulate experiment grid."""
    if cfg.lambdas == "table":
        table = {k: v for k, v in DEFAULT_LAMBDA_TABLE.items() if k[0] in gammas}
        missing = [g for g in gammas if not any(k[0] == g for k in table)]
        if missing:
            raise ValueError(f"no shipped thresholds for gammas {missing}; use --lambdas auto")
        return table
    if cfg.lambdas == "auto":
        reps = 2000
        table = {}
        for g in gammas:
            for m in (40, 80):
                spec = CalibrationSpec(
                    gamma=g, M=m, m0=cfg.m0, target_alpha=cfg.alpha,
                    replications=reps, seed=cfg.seed,
                )
                table[(g, m)] = calibrate_lambda(spec).lam
        return table
    table = {}
    for entry in cfg.lambdas.split(";"):
        g, m, value = entry.split(":")
        table[(float(g), int(m))] = float(value)
    return table


def _header_lines(cfg: RunConfig) -> list[str]:
    lines = ["config: " + " ".join(cfg.to_argv())]
    if not cfg.deterministic:
        lines.append("generated: " + time.strftime("%Y-%m-%dT%H:%M:%S"))
    return lines


def _write_csv(cfg: RunConfig, name: str, columns, rows) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    with open(path, "w", newline="", encoding="utf-8") as fh:
        for line in _header_lines(cfg):
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(columns)
        writer.writerows(rows)
    return path


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(round(float(x), 12))
    return str(x)


def _require_input(cfg: RunConfig) -> ReturnSeries:
    if cfg.input_path:
        return ingest_csv(cfg.input_path, kind=cfg.input_kind)
    if cfg.design:
        r, _ = generate_change_point_series(_parse_design(cfg.design, cfg.seed))
        return r
    raise InputDataError(f"{cfg.command} needs --input or --design")


def _cmd_constants(cfg: RunConfig) -> Path:
    rows = []
    for g in _parse_gamma_grid(cfg.gamma_grid):
        p = power_constants(g)
        a = _fmt(p.a_gamma) if p.a_gamma is not None else ""
        rows.append([_fmt(g), _fmt(p.c_gamma), _fmt(p.d_gamma**2), _fmt(p.s_gamma), a])
    return _write_csv(cfg, "constants.csv", ["gamma", "c", "d_squared", "s", "a"], rows)


def _cmd_calibrate(cfg: RunConfig) -> Path:
    spec = CalibrationSpec(
        gamma=cfg.gamma,
        M=cfg.m_ref,
        m0=cfg.m0,
        target_alpha=cfg.alpha,
        replications=cfg.replications or 2000,
        seed=cfg.seed,
    )
    res = calibrate_lambda(spec)
    row = [
        _fmt(cfg.gamma), cfg.m_ref, cfg.m0, _fmt(cfg.alpha),
        _fmt(res.lam), _fmt(res.achieved_rate), res.replications, _fmt(res.ci_halfwidth),
    ]
    return _write_csv(
        cfg,
        "calibrate.csv",
        ["gamma", "M", "m0", "alpha", "lam", "achieved_rate", "replications", "ci_halfwidth"],
        [row],
    )


def _cmd_estimate(cfg: RunConfig) -> Path:
    r = _require_input(cfg)
    lam, _ = _resolve_lambda(cfg)
    config = EstimatorConfig(
        gamma=cfg.gamma, m0=cfg.m0, lam=lam, t0=cfg.t0, max_len=cfg.max_len
    )
    path = estimate_path(r, config)
    rows = [
        [int(t), _fmt(float(s)), int(m)]
        for t, s, m in zip(path.taus, path.sigma_hat, path.interval_len)
    ]
    return _write_csv(cfg, "estimate.csv", ["t", "sigma_hat", "interval_len"], rows)


def _cmd_simulate(cfg: RunConfig) -> Path:
    if not cfg.design:
        raise InputDataError("simulate needs --design")
    design = _parse_design(cfg.design, cfg.seed)
    gammas = _parse_gamma_grid(cfg.gamma_grid)
    lambdas = _resolve_lambda_table(cfg, gammas)
    result = run_change_point_experiment(
        design,
        gammas,
        lambdas,
        replications=cfg.replications or 500,
        seed=cfg.seed,
        t_start=cfg.t_start,
        m0=cfg.m0,
    )
    err_rows = [
        [_fmt(c.gamma), _fmt(c.lam), c.m_label, _fmt(c.error)] for c in result.cells
    ]
    errors_path = _write_csv(
        cfg, "errors.csv", ["gamma", "lambda", "M_label", "error"], err_rows
    )

    g_text, m_text = cfg.curves_for.split(",")
    key = (float(g_text), int(m_text))
    if key not in result.curves:
        key = next(iter(sorted(result.curves)))
    curve = result.curves[key]
    curve_rows = [
        [int(t), _fmt(float(st)), _fmt(float(med)), _fmt(float(q25)), _fmt(float(q75)),
         _fmt(float(lm)), _fmt(float(l25)), _fmt(float(l75))]
        for t, st, med, q25, q75, lm, l25, l75 in zip(
            curve.taus, curve.sigma_true, curve.sigma_median, curve.sigma_q25,
            curve.sigma_q75, curve.len_median, curve.len_q25, curve.len_q75,
        )
    ]
    _write_csv(
        cfg,
        "curves.csv",
        ["t", "sigma_true", "sigma_hat_median", "q25", "q75",
         "len_median", "len_q25", "len_q75"],
        curve_rows,
    )
    return errors_path


def _cmd_backtest(cfg: RunConfig) -> Path:
    r = _require_input(cfg)
    lam, m_label = _resolve_lambda(cfg)
    config = EstimatorConfig(
        gamma=cfg.gamma, m0=cfg.m0, lam=lam, t0=cfg.t0, max_len=cfg.max_len
    )
    comparison = compare_forecasters(r, config, garch_window=cfg.garch_window, p=cfg.p)
    label = r.origin_label or "series"
    _write_csv(
        cfg,
        "comparison.csv",
        ["label", "gamma", "M_label", "ratio", "lave_score", "garch_score", "t0", "p"],
        [[label, _fmt(cfg.gamma), m_label, _fmt(comparison.ratio),
          _fmt(comparison.lave_score), _fmt(comparison.garch_score),
          comparison.t0, _fmt(comparison.p)]],
    )
    path = estimate_path(r, config)
    lave_by_t = dict(path.forecasts())
    garch_by_t = dict(rolling_forecast(r, window=cfg.garch_window).forecasts)
    common = sorted(t for t in set(lave_by_t) & set(garch_by_t) if t <= len(r) - 1)
    rows = [
        [t, _fmt(lave_by_t[t]), _fmt(garch_by_t[t]), _fmt(float(r.values[t] ** 2))]
        for t in common
    ]
    return _write_csv(
        cfg, "forecasts.csv", ["t", "lave_sigma_sq", "garch_sigma_sq", "r_sq_next"], rows
    )


def _cmd_stats(cfg: RunConfig) -> Path:
    r = _require_input(cfg)
    s = summary_stats(r)
    label = r.origin_label or "series"
    return _write_csv(
        cfg,
        "stats.csv",
        ["label", "n", "mean", "variance", "skewness", "kurtosis"],
        [[label, s.n, _fmt(s.mean), _fmt(s.variance), _fmt(s.skewness), _fmt(s.kurtosis)]],
    )


def _cmd_acf(cfg: RunConfig) -> Path:
    r = _require_input(cfg)
    values = acf(np.abs(r.values), cfg.max_lag)
    path = _write_csv(
        cfg, "acf.csv", ["lag", "value"],
        [[k, _fmt(float(v))] for k, v in enumerate(values)],
    )
    if cfg.standardize:
        lam, _ = _resolve_lambda(cfg)
        config = EstimatorConfig(
            gamma=cfg.gamma, m0=cfg.m0, lam=lam, t0=cfg.t0, max_len=cfg.max_len
        )
        est = estimate_path(r, config)
        full = np.full(len(r), np.nan)
        full[est.taus - 1] = est.sigma_hat
        z = standardized_returns(r, full)
        std_values = acf(np.abs(z), min(cfg.max_lag, z.size - 1))
        _write_csv(
            cfg, "acf_standardized.csv", ["lag", "value"],
            [[k, _fmt(float(v))] for k, v in enumerate(std_values)],
        )
    return path


_COMMANDS = {
    "constants": _cmd_constants,
    "calibrate": _cmd_calibrate,
    "estimate": _cmd_estimate,
    "simulate": _cmd_simulate,
    "backtest": _cmd_backtest,
    "stats": _cmd_stats,
    "acf": _cmd_acf,
}


def dispatch(cfg: RunConfig) -> int:
    """Run one subcommand; returns the process exit code."""
    try:
        out = _COMMANDS[cfg.command](cfg)
    except InputDataError as exc:
        print(f"lave-error code=3 kind=input message={exc}", file=sys.stderr)
        return 3
    except (CalibrationBracketError, GarchConvergenceError) as exc:
        print(f"lave-error code=5 kind=convergence message={exc}", file=sys.stderr)
        return 5
    except (LaveError, ValueError, KeyError, FloatingPointError) as exc:
        print(f"lave-error code=4 kind=domain message={exc}", file=sys.stderr)
        return 4
    print(out)
    return 0


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv if argv is not None else sys.argv[1:])
    except SystemExit as exc:
        return int(exc.code or 0)
    return dispatch(cfg)


if __name__ == "__main__":
    sys.exit(main())
