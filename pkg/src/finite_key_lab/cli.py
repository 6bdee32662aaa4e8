"""Command-line front end: JSON configs in, CSV (and optional SVG) out.

Modes
-----
qrng-sweep     random-bit rates (ours / l1 / l2) over an N schedule
qkd-sweep      HD-BB84 key rates (ours / prior / asymptotic / lossy)
jq-bound       word-set log-size bounds for one (counts, n, delta) instance
sample-verify  analytic vs exact vs Monte Carlo failure probability
mu-demo        entropy-sum lower bound over random states
convergence    per-symbol bound behaviour along an n schedule

Every run writes ``<out>/<mode>.csv`` with a commented metadata header (the
fully resolved configuration, seed, version and mode), a matching
``.meta.json`` record, and optionally an SVG chart.  Identical config plus
seed gives byte-identical artifacts.  Exit codes: 1 for configuration
errors (the message names the violated constraint), 2 for I/O failures.
"""

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .channels import Depolarizing, ExplicitCounts, LossyDepolarizing
from .jq_bounds import (
    CountVector,
    convergence_table,
    count_exact,
    log2_count_bound,
    maassen_uffink_demo,
)
from .qkd import sweep_qkd
from .qrng import sweep_qrng
from .sampling import (
    SamplingSpec,
    Strategy,
    empirical_failure_probability,
    exact_failure_probability,
    pair_from_cells,
    word_from_counts,
)
from .svg import line_chart

MODES = (
    "qrng-sweep",
    "qkd-sweep",
    "jq-bound",
    "sample-verify",
    "mu-demo",
    "convergence",
)


class ConfigError(ValueError):
    """Configuration rejected before any computation."""


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _load_config(path):
    if path is None:
        return {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    return cfg


def _require(cfg, key, kind=None):
    if key not in cfg:
        raise ConfigError(f"missing required config field {key!r}")
    value = cfg[key]
    if kind is not None:
        try:
            value = kind(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"config field {key!r}: {exc}") from exc
    return value


def _channel_from_config(cfg, d):
    spec = cfg.get("channel")
    if spec is None:
        raise ConfigError("missing required config field 'channel'")
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("channel must be an object with a 'kind' field")
    kind = spec["kind"]
    try:
        if kind == "depolarizing":
            return Depolarizing(q=float(spec["Q"]))
        if kind == "lossy-depolarizing":
            return LossyDepolarizing(
                q=float(spec["Q"]), p_vac=float(spec["p_vac"])
            )
        if kind == "explicit-counts":
            fractions = tuple(float(v) for v in spec["counts"])
            return ExplicitCounts(CountVector(d=d, fractions=fractions))
    except KeyError as exc:
        raise ConfigError(f"channel spec missing field {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"invalid channel: {exc}") from exc
    raise ConfigError(f"unknown channel kind {kind!r}")


def _n_values(cfg):
    values = _require(cfg, "N_values")
    if not isinstance(values, list) or not values:
        raise ConfigError("N_values must be a non-empty list")
    out = [int(v) for v in values]
    if out != sorted(out):
        raise ConfigError("N_values must be ascending")
    return out


# ---------------------------------------------------------------------------
# per-mode runners: return (columns, rows, series-for-svg)


def _run_qrng_sweep(cfg, seed):
    d = _require(cfg, "d", int)
    channel = _channel_from_config(cfg, d)
    try:
        rows = sweep_qrng(
            channel,
            _n_values(cfg),
            d,
            m_fraction=float(cfg.get("m", 0.07)),
            epsilon_ours=float(cfg.get("epsilon", 1e-36)),
            beta=float(cfg.get("beta", 1.0 / 3.0)),
            epsilon_l2=float(cfg.get("epsilon_l2", 1e-12)),
            d0_model=cfg.get("d0_model", "uniform-mismatch"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    columns = ["N", "n", "m", "delta", "rate_ours", "rate_l1", "rate_l2"]
    series = [(name, [r[name] for r in rows]) for name in columns[4:]]
    return columns, rows, ([r["N"] for r in rows], series)


def _run_qkd_sweep(cfg, seed):
    d = _require(cfg, "d", int)
    channel = _channel_from_config(cfg, d)
    try:
        rows = sweep_qkd(
            channel,
            _n_values(cfg),
            d,
            m_fraction=float(cfg.get("m", 0.07)),
            epsilon=float(cfg.get("epsilon", 1e-36)),
            beta=float(cfg.get("beta", 1.0 / 3.0)),
            ec_efficiency=float(cfg.get("ec_efficiency", 1.2)),
            p_vac=(float(cfg["p_vac"]) if "p_vac" in cfg else None),
            epsilon_prior=float(cfg.get("epsilon_prior", 1e-12)),
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    columns = [
        "N",
        "n",
        "m",
        "delta",
        "rate_ours",
        "rate_prior",
        "rate_asym",
        "rate_ours_lossy",
    ]
    series = [(name, [r[name] for r in rows]) for name in columns[4:]]
    return columns, rows, ([r["N"] for r in rows], series)


def _run_jq_bound(cfg, seed):
    d = _require(cfg, "d", int)
    n = _require(cfg, "n", int)
    delta = _require(cfg, "delta", float)
    counts = _require(cfg, "counts")
    try:
        c = CountVector(d=d, fractions=tuple(float(v) for v in counts))
        report = log2_count_bound(c, n, delta)
        log_exact = None
        if cfg.get("exact", False):
            exact = count_exact(c, n, delta)
            log_exact = math.log2(exact) if exact > 0 else float("-inf")
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    columns = ["n", "d", "delta", "log_stirling", "log_ball", "log_min", "log_exact"]
    row = {
        "n": n,
        "d": d,
        "delta": delta,
        "log_stirling": report.log_stirling,
        "log_ball": report.log_ball,
        "log_min": report.log_min,
        "log_exact": log_exact,
    }
    return columns, [row], None


def _run_sample_verify(cfg, seed):
    try:
        strategy = Strategy(_require(cfg, "strategy"))
    except ValueError as exc:
        raise ConfigError(
            f"strategy must be one of {[s.value for s in Strategy]}"
        ) from exc
    try:
        spec = SamplingSpec(
            strategy=strategy,
            n=_require(cfg, "n", int),
            m=_require(cfg, "m", int),
            d=_require(cfg, "d", int),
            delta=_require(cfg, "delta", float),
        )
        counts = _require(cfg, "counts")
        trials = int(cfg.get("trials", 100_000))
        b_star = int(cfg.get("b_star", 0))
        if strategy in (Strategy.PSI2, Strategy.PSI2PLUS0):
            # pair strategies take the four position-class counts:
            # (mismatch & a==b*, mismatch & a!=b*, match & a==b*, match & a!=b*)
            if len(counts) != 4:
                raise ConfigError(
                    "pair strategies need 4 position-class counts "
                    "(mismatch/b* cells)"
                )
            word = pair_from_cells(counts, spec.d, b_star)
        else:
            word = word_from_counts(counts)
        exact = exact_failure_probability(word, spec, b_star=b_star)
        estimate = empirical_failure_probability(
            word, spec, trials, seed, b_star=b_star
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    columns = [
        "strategy",
        "n",
        "m",
        "d",
        "delta",
        "analytic_bound",
        "exact",
        "empirical",
        "std_error",
        "trials",
    ]
    row = {
        "strategy": strategy.value,
        "n": spec.n,
        "m": spec.m,
        "d": spec.d,
        "delta": spec.delta,
        "analytic_bound": min(estimate.analytic_bound, 1.0),
        "exact": exact,
        "empirical": estimate.empirical,
        "std_error": estimate.std_error,
        "trials": trials,
    }
    return columns, [row], None


def _run_mu_demo(cfg, seed):
    d = _require(cfg, "d", int)
    num_states = int(cfg.get("states", 1000))
    if d < 2:
        raise ConfigError(f"d must be >= 2, got {d}")
    if num_states < 1:
        raise ConfigError(f"states must be >= 1, got {num_states}")
    rng = np.random.default_rng(seed)
    rows = []
    for index in range(num_states):
        raw = rng.normal(size=d) + 1j * rng.normal(size=d)
        amplitudes = raw / np.linalg.norm(raw)
        h_z, h_x, gamma = maassen_uffink_demo(amplitudes)
        rows.append(
            {
                "state": index,
                "h_z": h_z,
                "h_x": h_x,
                "entropy_sum": h_z + h_x,
                "gamma": gamma,
            }
        )
    columns = ["state", "h_z", "h_x", "entropy_sum", "gamma"]
    return columns, rows, None


def _run_convergence(cfg, seed):
    p = _require(cfg, "p")
    n_values = _require(cfg, "n_values")
    try:
        rows = convergence_table(
            [float(v) for v in p],
            [int(v) for v in n_values],
            epsilon=float(cfg.get("epsilon", 1e-36)),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    columns = [
        "n",
        "delta",
        "stirling_per_symbol",
        "ball_per_symbol",
        "shannon_bits",
        "ratio",
    ]
    return columns, rows, None


_RUNNERS = {
    "qrng-sweep": _run_qrng_sweep,
    "qkd-sweep": _run_qkd_sweep,
    "jq-bound": _run_jq_bound,
    "sample-verify": _run_sample_verify,
    "mu-demo": _run_mu_demo,
    "convergence": _run_convergence,
}


def _write_outputs(out_dir, mode, columns, rows, chart, cfg, seed, emit_svg):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    metadata = {
        "mode": mode,
        "seed": seed,
        "version": __version__,
        "config": cfg,
    }
    meta_json = json.dumps(metadata, sort_keys=True, indent=2)

    lines = [f"# finite-key-lab {__version__} mode={mode} seed={seed}"]
    for line in json.dumps(metadata, sort_keys=True).splitlines():
        lines.append(f"# {line}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in columns))
    csv_path = out / f"{mode}.csv"
    csv_path.write_text("\n".join(lines) + "\n")

    (out / f"{mode}.meta.json").write_text(meta_json + "\n")

    if emit_svg and chart is not None:
        x_values, series = chart
        svg = line_chart(
            x_values,
            series,
            title=mode,
            x_label="total signals N",
            y_label="bits per signal",
        )
        (out / f"{mode}.svg").write_text(svg)
    return csv_path


def build_parser():
    parser = argparse.ArgumentParser(
        prog="finite-key-lab",
        description="finite-key rate calculators with verification oracles",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        p = sub.add_parser(mode)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seed", type=int, default=1)
        p.add_argument("--svg", action="store_true", help="also emit an SVG chart")
        p.add_argument(
            "--set",
            action="append",
            default=[],
            metavar="KEY=JSON",
            help="override a config field, e.g. --set d=4 or "
            '--set channel=\'{"kind":"depolarizing","Q":0.2}\'',
        )
        if mode == "jq-bound":
            p.add_argument(
                "--exact",
                action="store_true",
                help="also enumerate the exact word-set size",
            )
    return parser


def _apply_overrides(cfg, overrides):
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not KEY=VALUE")
        key, _, raw = item.partition("=")
        try:
            cfg[key] = json.loads(raw)
        except json.JSONDecodeError:
            cfg[key] = raw
    return cfg


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args.config)
        cfg = _apply_overrides(cfg, args.set)
        if getattr(args, "exact", False):
            cfg["exact"] = True
        runner = _RUNNERS[args.mode]
        columns, rows, chart = runner(cfg, args.seed)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        csv_path = _write_outputs(
            args.out, args.mode, columns, rows, chart, cfg, args.seed, args.svg
        )
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(csv_path)
    return 0


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
