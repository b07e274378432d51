"""Benchmark sweeps with confidence intervals and theory-trend helpers.

A sweep is a grid over (algorithm, horizon, rotting-rate rule); each cell
runs ``repetitions`` independent simulations and is summarized by the mean
final pseudo-regret with a 95% Student-t confidence interval.  Cells that
cannot be configured (e.g. the adaptive policy below its minimum block
length) are skipped with a warning so protocol grids that include the
degenerate T=1 point still complete.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import stats as sps

from .engine import RunResult, make_run_spec, run_many
from .env import ConfigurationError


@dataclass(frozen=True)
class RhoRule:
    """Rotting rate for a cell: either a fixed value or rho = T^(-gamma)."""

    fixed: float | None = None
    gamma: float | None = None

    def __post_init__(self) -> None:
        if (self.fixed is None) == (self.gamma is None):
            raise ConfigurationError("set exactly one of fixed= or gamma=")
        if self.fixed is not None and self.fixed < 0:
            raise ConfigurationError(f"rho must be >= 0, got {self.fixed}")

    def value(self, horizon: int) -> float:
        if self.fixed is not None:
            return self.fixed
        return float(horizon) ** -self.gamma


@dataclass(frozen=True)
class SweepSpec:
    """Grid over (algorithm, T, rho rule) with repetitions per cell."""

    kind: str  # "rho" | "horizon" | "compare"
    horizons: tuple[int, ...]
    rho_rules: tuple[RhoRule, ...]
    algorithms: tuple[str, ...]
    repetitions: int = 10
    base_seed: int = 0
    noise_std: float = 1.0
    threads: int | None = None

    def __post_init__(self) -> None:
        if not self.horizons or not self.rho_rules or not self.algorithms:
            raise ConfigurationError("sweep grids must be non-empty")
        if self.repetitions < 1:
            raise ConfigurationError("repetitions must be >= 1")


@dataclass(frozen=True)
class SummaryPoint:
    algorithm: str
    horizon: int
    rho: float
    mean_regret: float
    ci_half_width: float
    repetitions: int

    @property
    def degenerate(self) -> bool:
        """True when the CI is vacuous (fewer than 2 repetitions)."""
        return self.repetitions < 2


def mean_ci(values: list[float], confidence: float = 0.95) -> tuple[float, float]:
    """Sample mean and Student-t CI half-width (n-1 degrees of freedom).

    One sample yields half-width 0 by convention (caller flags degeneracy).
    """
    n = len(values)
    mean = float(np.mean(values))
    if n < 2:
        return mean, 0.0
    sd = float(np.std(values, ddof=1))
    t_crit = float(sps.t.ppf(0.5 + confidence / 2.0, n - 1))
    return mean, t_crit * sd / math.sqrt(n)


def summarize_cell(
    algorithm: str, horizon: int, rho: float, results: list[RunResult]
) -> SummaryPoint:
    mean, half = mean_ci([r.final_regret for r in results])
    return SummaryPoint(
        algorithm=algorithm,
        horizon=horizon,
        rho=rho,
        mean_regret=mean,
        ci_half_width=half,
        repetitions=len(results),
    )


def run_sweep(
    spec: SweepSpec,
    progress: Callable[[str], None] | None = None,
    **policy_kwargs,
) -> list[SummaryPoint]:
    """One SummaryPoint per feasible (algorithm, T, rho) cell.

    ``policy_kwargs`` may carry per-algorithm overrides keyed by algorithm
    name, e.g. ``aucbtp={"reward_norm_C": 5.0}``.
    """
    points: list[SummaryPoint] = []
    for algorithm in spec.algorithms:
        for horizon in spec.horizons:
            for rule in spec.rho_rules:
                rho = rule.value(horizon)
                try:
                    run_spec = make_run_spec(
                        algorithm,
                        horizon,
                        rho,
                        noise_std=spec.noise_std,
                        **policy_kwargs.get(algorithm, {}),
                    )
                except ConfigurationError as exc:
                    print(
                        f"warning: skipping cell ({algorithm}, T={horizon}, "
                        f"rho={rho:g}): {exc}",
                        file=sys.stderr,
                    )
                    continue
                results = run_many(
                    run_spec, spec.repetitions, spec.base_seed, threads=spec.threads
                )
                points.append(summarize_cell(algorithm, horizon, rho, results))
                if progress is not None:
                    progress(f"{algorithm} T={horizon} rho={rho:g}")
    return points


def theory_bound(rho: float, horizon: int) -> float:
    """Minimax rate max{rho^(1/3) T, sqrt(T)} without constants or polylogs.

    The two branches cross at rho = T^(-3/2), the transition point between
    the near-stationary and rotting-dominated regimes.
    """
    if rho < 0:
        raise ValueError(f"rho must be >= 0, got {rho}")
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    return max(rho ** (1.0 / 3.0) * horizon, math.sqrt(horizon))


def fit_scaling(points: list[tuple[float, float]]) -> tuple[float, float, float]:
    """Least-squares fit of log(y) = slope*log(x) + intercept.

    Returns (slope, intercept, r_squared).  Requires >= 3 strictly positive
    points.
    """
    if len(points) < 3:
        raise ValueError(f"need >= 3 points, got {len(points)}")
    xs = np.array([p[0] for p in points], dtype=float)
    ys = np.array([p[1] for p in points], dtype=float)
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise ValueError("log-log fit requires strictly positive values")
    lx, ly = np.log(xs), np.log(ys)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), r2
