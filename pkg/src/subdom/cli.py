"""Command-line front end: figure-data emitters and simulation runners.

Every command writes one CSV or JSON table (data only, no plotting), is
deterministic under a fixed seed, and records its fully resolved
configuration in a leading comment line.  Monte-Carlo commands accept
--workers; output bytes do not depend on the worker count.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import asdict, dataclass, replace

import numpy as np

from .channel import (
    flat_transmittance,
    path_matrix,
    sample_input,
    statistical_model,
    subcarrier_domain,
    subcarrier_encode,
    transmit,
)
from .fourier import (
    QUARTER_TURN,
    basis_kernel_plot,
    bin_contains,
    f_tau,
    f_tau_sinc_limit,
    kernel_plot,
)
from .multiuser import f_kout
from .output import write_csv, write_json
from .stats import (
    SweepSpec,
    diversity_vs_l,
    omega_sweep,
    random_offgrid_paths,
    rank_approximation,
    rank_report,
    random_offgrid_paths as _offgrid,
)

COMMANDS = ("fig1", "fig2", "fig3", "fig4", "fig5",
            "simulate", "rank", "diversity", "sweep")

SEED_ENV_VAR = "SUBDOM_SEED"

DEFAULTS = {
    "l": 2,
    "k_in": None,
    "k_out": None,
    "theta_star": None,   # per-command default, see resolve_config
    "sigma_sq": 1.0,
    "sigma_n_sq": 0.01,
    "epsilon": 1e-6,
    "trials": 1000,
    "grid": 1000,
    "seed": 42,
    "output_path": None,
    "format": "csv",
    "workers": 1,
    "channel": "gaussian",
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    l: int = 2
    k_in: int | None = None
    k_out: int | None = None
    theta_star: float | None = None
    sigma_sq: float = 1.0
    sigma_n_sq: float = 0.01
    epsilon: float = 1e-6
    trials: int = 1000
    grid: int = 1000
    seed: int = 42
    output_path: str | None = None
    format: str = "csv"
    workers: int = 1
    channel: str = "gaussian"


def validate(config: RunConfig) -> list:
    """Violations that would stop run(); empty list means run() will pass
    validation.  Never raises."""
    v = []
    if config.command not in COMMANDS:
        v.append(f"command must be one of {COMMANDS} (got {config.command!r})")
        return v
    if config.l < 1:
        v.append(f"l must be >= 1 (got {config.l})")
    if config.command in ("fig4", "sweep") and config.l < 2:
        v.append(f"{config.command} requires l >= 2 (got l={config.l})")
    if config.command == "diversity" and config.l < 4:
        v.append(f"diversity requires l >= 4 (got l={config.l})")
    if config.trials < 1:
        v.append(f"trials must be >= 1 (got {config.trials})")
    if config.grid < 2:
        v.append(f"grid must be >= 2 (got {config.grid})")
    if config.epsilon <= 0:
        v.append(f"epsilon must be > 0 (got {config.epsilon})")
    if config.sigma_sq <= 0:
        v.append(f"sigma_sq must be > 0 (got {config.sigma_sq})")
    if config.sigma_n_sq < 0:
        v.append(f"sigma_n_sq must be >= 0 (got {config.sigma_n_sq})")
    if config.workers < 1:
        v.append(f"workers must be >= 1 (got {config.workers})")
    if config.format not in ("csv", "json"):
        v.append(f"format must be 'csv' or 'json' (got {config.format!r})")
    if config.channel not in ("gaussian", "paths"):
        v.append(f"channel must be 'gaussian' or 'paths' (got {config.channel!r})")
    if config.k_in is not None and config.k_in < 1:
        v.append(f"k_in must be >= 1 (got {config.k_in})")
    if config.k_out is not None and config.k_out < 1:
        v.append(f"k_out must be >= 1 (got {config.k_out})")
    if config.command == "fig5" and config.k_out is not None and config.k_out <= config.l:
        v.append(f"fig5 requires k_out > l (got k_out={config.k_out}, l={config.l})")
    if config.theta_star is not None and not np.isfinite(config.theta_star):
        v.append(f"theta_star must be finite (got {config.theta_star})")
    return v


def resolve_config(config: RunConfig) -> RunConfig:
    """Fill per-command defaults: theta_star and the output path."""
    theta = config.theta_star
    if theta is None:
        if config.command in ("fig4", "sweep"):
            # the sweep fixes column C = l//2; the aligned peak sits at
            # k = C when cos(theta*) = C/l
            theta = float(np.arccos((config.l // 2) / config.l))
        else:
            theta = QUARTER_TURN
    path = config.output_path
    if path is None:
        path = f"{config.command}.{config.format}"
    return replace(config, theta_star=theta, output_path=path)


def _odd(n: int) -> int:
    # odd point count so that cos(theta) = 0 lies on the grid
    return n if n % 2 == 1 else n + 1


def _integer_covering(n: int) -> int:
    # smallest N >= n with (N-1) % 4 == 0 so integer tau in [-2, 2] lies on
    # the grid and the emitted curve shows the exact |f| = 1 maxima
    while (n - 1) % 4 != 0:
        n += 1
    return n


def _emit_fig1(cfg):
    n = _integer_covering(cfg.grid)
    tau = np.linspace(-2.0, 2.0, n)
    abs_f = np.abs(f_tau(tau, cfg.l))
    abs_sinc = np.abs(f_tau_sinc_limit(tau, cfg.l))
    rows = [(float(t), float(a), float(s)) for t, a, s in zip(tau, abs_f, abs_sinc)]
    return ["tau", "abs_f", "abs_sinc"], rows, None, {"grid": n}


def _emit_fig2(cfg):
    n = _odd(cfg.grid)
    table = kernel_plot(cfg.theta_star, cfg.l, n)
    rows = [(float(c), float(v)) for c, v in table]
    return ["cos_theta", "abs_f"], rows, None, {"grid": n}


def _emit_fig3(cfg):
    n = _odd(cfg.grid)
    rows = []
    for k in range(cfg.l):
        table = basis_kernel_plot(k, cfg.l, n)
        member = bin_contains(table[:, 0], k, cfg.l)
        rows.extend((k, float(c), float(v), int(b))
                    for (c, v), b in zip(table, member))
    return ["k", "cos_theta", "abs_f", "in_bin"], rows, None, {"grid": n}


def _emit_fig4(cfg):
    spec = SweepSpec(l=cfg.l, fixed_index=cfg.l // 2, theta_star=cfg.theta_star,
                     omega_schedule=(0.0, np.pi), trials=cfg.trials,
                     seed=cfg.seed, epsilon=cfg.epsilon)
    result = omega_sweep(spec, workers=cfg.workers)
    means = result.series_means
    rows = []
    for i, omega in enumerate(result.omegas):
        for j, k in enumerate(result.k_values):
            rows.append((float(omega), int(k),
                         float(result.mean_magnitudes[i, j]), float(means[i])))
    return ["omega", "k", "mean_magnitude", "series_mean"], rows, None, {}


def _emit_fig5(cfg):
    k_outs = [cfg.k_out] if cfg.k_out is not None else [2 * cfg.l, 4 * cfg.l]
    n = _odd(cfg.grid)
    cos_theta = np.linspace(-1.0, 1.0, n)
    tau = cos_theta - np.cos(cfg.theta_star)
    rows = []
    for k_out in k_outs:
        values = np.abs(f_kout(tau, cfg.l, k_out))
        rows.extend((int(k_out), float(c), float(v))
                    for c, v in zip(cos_theta, values))
    return ["k_out", "cos_theta", "abs_f_kout"], rows, None, {
        "grid": n, "k_out": ",".join(str(k) for k in k_outs)}


def _emit_simulate(cfg):
    z = sample_input(cfg.l, cfg.sigma_sq, cfg.seed)
    d = subcarrier_encode(z)
    rng = np.random.default_rng(cfg.seed + 1)
    quad = rng.uniform(0.0, 1.0 / np.sqrt(2.0), cfg.l)
    gains = flat_transmittance(quad + 1j * quad, strict=True)
    record = transmit(d, gains, noise_seed=cfg.seed + 2, sigma_n_sq=cfg.sigma_n_sq)
    rows = []
    for name, vec in (("input_singles", record.input_singles),
                      ("subcarriers", record.subcarriers),
                      ("transmittance_fft", record.transmittance_fft),
                      ("noise_fft", record.noise_fft),
                      ("output", record.output),
                      ("domain_output", record.domain_output)):
        rows.extend((name, i, float(v.real), float(v.imag))
                    for i, v in enumerate(vec))
    return ["field", "index", "re", "im"], rows, {"record": record.to_dict()}, {}


def _emit_rank(cfg):
    from .stats import run_trials

    if cfg.channel == "gaussian":
        def one_trial(t, rng):
            M = statistical_model(cfg.l, cfg.l, cfg.sigma_sq, cfg.seed + t)
            report = rank_report(M, cfg.epsilon)
            return (t, report.rank, report.diversity)
        columns = ["trial", "rank", "diversity"]
    else:
        def one_trial(t, rng):
            paths = _offgrid(cfg.l, rng)
            R = subcarrier_domain(path_matrix(paths, cfg.l), cfg.l)
            report = rank_report(R, cfg.epsilon)
            return (t, report.rank, report.diversity, rank_approximation(paths))
        columns = ["trial", "rank", "diversity", "rank_approx"]
    rows = run_trials(cfg.trials, cfg.seed, one_trial, cfg.workers)
    return columns, rows, None, {}


def _emit_diversity(cfg):
    ladder = []
    l = 4
    while l <= cfg.l:
        ladder.append(l)
        l *= 2
    table = diversity_vs_l(ladder, random_offgrid_paths, cfg.trials,
                           cfg.seed, cfg.epsilon, cfg.workers)
    rows = [(int(l), float(mean)) for l, mean in table]
    return ["l", "mean_diversity"], rows, None, {}


def _emit_sweep(cfg):
    spec = SweepSpec(l=cfg.l, fixed_index=cfg.l // 2, theta_star=cfg.theta_star,
                     omega_schedule=tuple(np.linspace(0.0, np.pi, cfg.grid)),
                     trials=cfg.trials, seed=cfg.seed, epsilon=cfg.epsilon)
    result = omega_sweep(spec, workers=cfg.workers)
    return ["omega", "k", "mean_magnitude"], result.rows(), None, {}


EMITTERS = {
    "fig1": _emit_fig1,
    "fig2": _emit_fig2,
    "fig3": _emit_fig3,
    "fig4": _emit_fig4,
    "fig5": _emit_fig5,
    "simulate": _emit_simulate,
    "rank": _emit_rank,
    "diversity": _emit_diversity,
    "sweep": _emit_sweep,
}


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    violations = validate(config)
    if violations:
        for item in violations:
            print(f"invalid config: {item}", file=sys.stderr)
        return 2
    config = resolve_config(config)
    started = time.perf_counter()
    try:
        columns, rows, extra, overrides = EMITTERS[config.command](config)
        comment = asdict(config)
        # execution knobs that cannot influence the table; dropping them
        # keeps output bytes identical across runs and worker counts
        del comment["workers"], comment["output_path"]
        comment.update(overrides)
        if config.format == "csv":
            count = write_csv(config.output_path, columns, rows, comment)
        else:
            count = write_json(config.output_path, columns, rows, comment, extra)
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return 1
    elapsed_ms = int(round((time.perf_counter() - started) * 1000))
    print(f"{config.command}: wrote {count} rows to {config.output_path} "
          f"(seed={config.seed}, {elapsed_ms} ms)")
    return 0


def _load_config_file(path: str) -> dict:
    try:
        import tomllib
    except ModuleNotFoundError:
        import tomli as tomllib
    with open(path, "rb") as handle:
        return tomllib.load(handle)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="TOML file with defaults")
    common.add_argument("--l", type=int, default=None)
    common.add_argument("--k-in", type=int, default=None, dest="k_in")
    common.add_argument("--k-out", type=int, default=None, dest="k_out")
    common.add_argument("--theta-star", type=float, default=None, dest="theta_star",
                        help="transmitted phase-space angle in radians")
    common.add_argument("--theta-star-deg", type=float, default=None,
                        dest="theta_star_deg", help="same, in degrees")
    common.add_argument("--sigma-sq", type=float, default=None, dest="sigma_sq")
    common.add_argument("--sigma-n-sq", type=float, default=None, dest="sigma_n_sq")
    common.add_argument("--epsilon", type=float, default=None)
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--grid", type=int, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--output", default=None, dest="output_path")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--workers", type=int, default=None)
    common.add_argument("--channel", choices=("gaussian", "paths"), default=None)

    parser = argparse.ArgumentParser(
        prog="subdom",
        description="Subcarrier-domain figure data and simulation tables")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def build_config(argv=None) -> RunConfig | None:
    """Merge flags > config file > SUBDOM_SEED env > defaults.

    Returns None (after printing the problem) when the sources themselves
    are malformed; field-level validation happens later in run().
    """
    args = _build_parser().parse_args(argv)
    resolved = dict(DEFAULTS)

    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None:
        try:
            resolved["seed"] = int(env_seed)
        except ValueError:
            print(f"invalid config: seed from {SEED_ENV_VAR} must be an "
                  f"integer (got {env_seed!r})", file=sys.stderr)
            return None

    if args.config is not None:
        try:
            file_values = _load_config_file(args.config)
        except OSError as err:
            print(f"i/o error: {err}", file=sys.stderr)
            sys.exit(1)
        unknown = sorted(set(file_values) - set(DEFAULTS))
        if unknown:
            print(f"invalid config: unknown key(s) in {args.config}: "
                  f"{', '.join(unknown)}", file=sys.stderr)
            return None
        resolved.update(file_values)

    for key in DEFAULTS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            resolved[key] = flag_value
    if args.theta_star_deg is not None and args.theta_star is None:
        resolved["theta_star"] = float(np.radians(args.theta_star_deg))

    return RunConfig(command=args.command, **resolved)


def main(argv=None) -> None:
    config = build_config(argv)
    if config is None:
        sys.exit(2)
    sys.exit(run(config))
