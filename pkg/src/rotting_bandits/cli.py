"""Benchmark command line: single runs and the protocol sweeps.

Subcommands
-----------
run            one (algorithm, T, rho) cell; writes runs.csv + curves.csv
sweep-rho      regret vs rotting rate at fixed T; writes summary.csv
sweep-horizon  regret vs T with rho = T^(-gamma); writes summary.csv

Every option can also be supplied via ``--config FILE`` holding ``key=value``
lines (same keys as the long flags, without the leading dashes); explicit
flags override file values.  The fully-resolved configuration is echoed into
each output file's comment header, so an artifact identifies the run that
produced it.

Exit codes: 0 success, 1 I/O failure, 2 invalid flags or configuration.

Determinism: re-running any command with the same seed produces byte
identical files for any ``--threads`` value.  Wall-clock timing is the one
inherently nondeterministic measurement, so the ``wall_ms`` column is 0
unless ``--timing`` is passed.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import __version__, csvio
from .engine import ALGORITHMS, make_run_spec, run_many
from .env import ConfigurationError
from .experiments import RhoRule, SweepSpec, run_sweep

DEFAULT_GAMMAS = (1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3)
DEFAULT_HORIZONS = (1,) + tuple(100_000 * i for i in range(1, 11))


def _int(s: str) -> int:
    return int(float(s))


def _float(s: str) -> float:
    return float(s)


def _bool(s: str) -> bool:
    if s.lower() in ("1", "true", "yes", "on"):
        return True
    if s.lower() in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {s!r}")


def _int_list(s: str) -> tuple[int, ...]:
    return tuple(_int(p) for p in s.split(",") if p.strip())


def _float_list(s: str) -> tuple[float, ...]:
    return tuple(float(p) for p in s.split(",") if p.strip())


def _algs(s: str) -> tuple[str, ...]:
    algs = tuple(p.strip() for p in s.split(",") if p.strip())
    for a in algs:
        if a not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {a!r}; expected one of {ALGORITHMS}")
    return algs


@dataclass(frozen=True)
class _Opt:
    name: str  # flag --<name>; config key <name>
    conv: Callable[[str], object]
    default: object
    help: str


_COMMON = [
    _Opt("reps", _int, 10, "repetitions per cell"),
    _Opt("seed", _int, 0, "base seed; repetition k uses mix_seed(seed, k)"),
    _Opt("out", str, "out", "output directory"),
    _Opt("threads", _int, None, "worker processes (default: SIM_THREADS or all cores)"),
    _Opt("noise-std", _float, 1.0, "reward noise standard deviation"),
    _Opt("delta", _float, None, "ucbtp threshold parameter (default max{rho^(1/3), 1/sqrt(T)})"),
    _Opt("radius-scale", _float, 10.0, "ucbtp confidence radius scale"),
    _Opt("block-len", _int, None, "aucbtp block length H (default ceil(sqrt(T)))"),
    _Opt("aucb-c", _float, 93.0, "aucbtp reward normalization constant C"),
    _Opt("ssucb-k", _int, None, "ssucb subsampled arm count (default ceil(sqrt(T)))"),
    _Opt("ssucb-radius", str, "classic",
         "ssucb radius rule: 'classic' sqrt(2 log t / n) or 'fixed' sqrt(10 log T / n)"),
    _Opt("quiet", _bool, False, "suppress the stderr progress counter"),
]

_OPTS: dict[str, list[_Opt]] = {
    "run": [
        _Opt("alg", str, None, "algorithm: ucbtp | aucbtp | ssucb"),
        _Opt("T", _int, None, "horizon"),
        _Opt("rho", _float, None, "constant rotting rate"),
        _Opt("timing", _bool, False, "record wall-clock ms in runs.csv (nondeterministic)"),
    ] + _COMMON,
    "sweep-rho": [
        _Opt("T", _int, None, "horizon"),
        _Opt("gammas", _float_list, DEFAULT_GAMMAS, "rho exponents; rho = T^(-gamma)"),
        _Opt("algs", _algs, ALGORITHMS, "comma-separated algorithms"),
    ] + _COMMON,
    "sweep-horizon": [
        _Opt("gamma", _float, None, "rho exponent; rho = T^(-gamma) per T"),
        _Opt("Ts", _int_list, DEFAULT_HORIZONS, "comma-separated horizons"),
        _Opt("algs", _algs, ALGORITHMS, "comma-separated algorithms"),
    ] + _COMMON,
}

_REQUIRED = {
    "run": ("alg", "T", "rho"),
    "sweep-rho": ("T",),
    "sweep-horizon": ("gamma",),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotting-bandits",
        description="Rested rotting bandit benchmark with infinitely many arms.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)
    for command, opts in _OPTS.items():
        sub = subs.add_parser(command)
        sub.add_argument("--config", type=str, default=None,
                         help="key=value file; flags override file values")
        for opt in opts:
            sub.add_argument(f"--{opt.name}", type=str, default=None, help=opt.help)
    return parser


def _load_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def _resolve(command: str, args: argparse.Namespace) -> dict:
    file_values = _load_config_file(args.config) if args.config else {}
    known = {opt.name for opt in _OPTS[command]}
    for key in file_values:
        if key not in known:
            raise ConfigurationError(f"unknown config key {key!r} for {command}")
    resolved: dict = {}
    for opt in _OPTS[command]:
        raw = getattr(args, opt.name.replace("-", "_"))
        if raw is None:
            raw = file_values.get(opt.name)
        if raw is None:
            resolved[opt.name] = opt.default
        else:
            try:
                resolved[opt.name] = opt.conv(raw)
            except ValueError as exc:
                raise ConfigurationError(f"--{opt.name}: {exc}") from exc
    for name in _REQUIRED[command]:
        if resolved[name] is None:
            raise ConfigurationError(f"--{name} is required for {command}")
    if resolved["threads"] is None and os.environ.get("SIM_THREADS"):
        resolved["threads"] = _int(os.environ["SIM_THREADS"])
    return resolved


# Keys that steer execution but cannot affect any computed value; excluded
# from the header echo so identical experiments yield identical bytes.
_NON_SCIENTIFIC = {"out", "quiet", "threads"}


def _meta(command: str, cfg: dict) -> dict:
    meta = {"library": "rotting-bandits", "version": __version__, "command": command}
    for key, value in cfg.items():
        if key in _NON_SCIENTIFIC:
            continue
        if isinstance(value, tuple):
            value = ",".join(csvio.format_value(v) for v in value)
        meta[key] = value if value is not None else ""
    return meta


def _policy_kwargs(cfg: dict) -> dict[str, dict]:
    ucbtp: dict = {"radius_scale": cfg["radius-scale"]}
    if cfg["delta"] is not None:
        ucbtp["delta"] = cfg["delta"]
    aucbtp: dict = {"reward_norm_C": cfg["aucb-c"]}
    if cfg["block-len"] is not None:
        aucbtp["block_len"] = cfg["block-len"]
    ssucb: dict = {"radius_rule": cfg["ssucb-radius"]}
    if cfg["ssucb-k"] is not None:
        ssucb["subsample_count"] = cfg["ssucb-k"]
    return {"ucbtp": ucbtp, "aucbtp": aucbtp, "ssucb": ssucb}


def _progress(cfg: dict) -> Callable[[str], None] | None:
    if cfg["quiet"]:
        return None
    counter = {"done": 0}

    def report(label: str) -> None:
        counter["done"] += 1
        print(f"[{counter['done']}] {label}", file=sys.stderr)

    return report


def cmd_run(cfg: dict) -> None:
    spec = make_run_spec(
        cfg["alg"],
        cfg["T"],
        cfg["rho"],
        noise_std=cfg["noise-std"],
        **_policy_kwargs(cfg).get(cfg["alg"], {}),
    )
    results = run_many(spec, cfg["reps"], cfg["seed"], threads=cfg["threads"])
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    meta = _meta("run", cfg)
    run_rows = []
    curve_rows = []
    for rep, result in enumerate(results):
        wall = result.wall_time_ms if cfg["timing"] else 0
        run_rows.append(
            (cfg["alg"], cfg["T"], cfg["rho"], rep, result.seed,
             result.final_regret, result.arms_sampled, wall)
        )
        for t, cum in result.regret_curve:
            curve_rows.append((cfg["alg"], cfg["T"], cfg["rho"], rep, t, cum))
    csvio.write_table(out / "runs.csv", meta, csvio.RUNS_COLUMNS, run_rows)
    csvio.write_table(out / "curves.csv", meta, csvio.CURVES_COLUMNS, curve_rows)
    if not cfg["quiet"]:
        print(f"wrote {out / 'runs.csv'} and {out / 'curves.csv'}", file=sys.stderr)


def _write_summary(points, cfg: dict, command: str, sort_key) -> None:
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    rows = [
        (p.algorithm, p.horizon, p.rho, p.mean_regret, p.ci_half_width)
        for p in sorted(points, key=sort_key)
    ]
    csvio.write_table(out / "summary.csv", _meta(command, cfg), csvio.SUMMARY_COLUMNS, rows)
    if not cfg["quiet"]:
        print(f"wrote {out / 'summary.csv'}", file=sys.stderr)


def cmd_sweep_rho(cfg: dict) -> None:
    spec = SweepSpec(
        kind="rho",
        horizons=(cfg["T"],),
        rho_rules=tuple(RhoRule(gamma=g) for g in cfg["gammas"]),
        algorithms=cfg["algs"],
        repetitions=cfg["reps"],
        base_seed=cfg["seed"],
        noise_std=cfg["noise-std"],
        threads=cfg["threads"],
    )
    points = run_sweep(spec, progress=_progress(cfg), **_policy_kwargs(cfg))
    _write_summary(points, cfg, "sweep-rho", lambda p: (p.algorithm, p.rho))


def cmd_sweep_horizon(cfg: dict) -> None:
    spec = SweepSpec(
        kind="horizon",
        horizons=cfg["Ts"],
        rho_rules=(RhoRule(gamma=cfg["gamma"]),),
        algorithms=cfg["algs"],
        repetitions=cfg["reps"],
        base_seed=cfg["seed"],
        noise_std=cfg["noise-std"],
        threads=cfg["threads"],
    )
    points = run_sweep(spec, progress=_progress(cfg), **_policy_kwargs(cfg))
    _write_summary(points, cfg, "sweep-horizon", lambda p: (p.algorithm, p.horizon))


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _resolve(args.command, args)
        if args.command == "run":
            cmd_run(cfg)
        elif args.command == "sweep-rho":
            cmd_sweep_rho(cfg)
        else:
            cmd_sweep_horizon(cfg)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
