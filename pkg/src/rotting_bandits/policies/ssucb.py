"""Subsampled UCB baseline: sample ceil(sqrt(T)) arms up-front, run UCB.

Designed for stationary rewards; used here as the baseline the threshold
policies are compared against.  After one initialization pull per arm (in
arm-id order), each step plays the arm maximizing empirical mean plus a
confidence radius, ties broken by lowest arm id.

The confidence radius is configurable because the baseline's source does
not pin one: the default is the classical sqrt(2 log(t) / n); a
fixed-horizon variant sqrt(scale * log(T) / n) allows like-for-like
constant comparisons with the threshold policies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..env import ArmId, ConfigurationError, Environment, Observation

# Radius rules take (1-indexed time step, pull counts) and must broadcast
# over a numpy array of counts.
RadiusRule = Callable[[int, np.ndarray], np.ndarray]


def classic_radius(t: int, n: np.ndarray) -> np.ndarray:
    """sqrt(2 log(t) / n), the classical UCB radius."""
    return np.sqrt(2.0 * math.log(t) / n)


@dataclass(frozen=True)
class FixedHorizonRadius:
    """sqrt(scale * log(T) / n), matching the threshold policies' radius."""

    horizon: int
    scale: float = 10.0

    def __call__(self, t: int, n: np.ndarray) -> np.ndarray:
        return np.sqrt(self.scale * math.log(self.horizon) / n)


def default_subsample_count(horizon: int) -> int:
    """ceil(sqrt(T)), computed exactly in integers."""
    return math.isqrt(horizon - 1) + 1 if horizon > 1 else 1


@dataclass(frozen=True)
class SsucbConfig:
    horizon: int
    subsample_count: int | None = None
    radius_rule: RadiusRule = classic_radius

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ConfigurationError(f"horizon must be >= 1, got {self.horizon}")
        if self.subsample_count is None:
            object.__setattr__(
                self, "subsample_count", default_subsample_count(self.horizon)
            )
        if self.subsample_count < 1:
            raise ConfigurationError(
                f"subsample_count must be >= 1, got {self.subsample_count}"
            )


def ssucb_choose(
    counts: np.ndarray, means: np.ndarray, t: int, cfg: SsucbConfig
) -> int:
    """Index of the arm played at 1-indexed step ``t`` after initialization.

    First occurrence wins the argmax, so exact ties go to the lowest arm id.
    """
    return int(np.argmax(means + cfg.radius_rule(t, counts)))


class SsucbPolicy:
    """Engine-facing wrapper; holds per-arm counts and reward sums."""

    def __init__(self, cfg: SsucbConfig):
        self.cfg = cfg
        self._env: Environment | None = None

    def reset(self, env: Environment, rng: np.random.Generator) -> None:
        self._env = env
        k = min(self.cfg.subsample_count, self.cfg.horizon)
        self.arms: list[ArmId] = [env.sample_new_arm() for _ in range(k)]
        self._counts = np.zeros(k, dtype=np.int64)
        self._sums = np.zeros(k)
        self._means = np.zeros(k)
        self._t = 0
        self._last: int | None = None

    def choose(self) -> ArmId:
        if self._t < len(self.arms):
            self._last = self._t  # initialization round, one pull per arm
        else:
            self._last = ssucb_choose(self._counts, self._means, self._t + 1, self.cfg)
        return self.arms[self._last]

    def observe(self, obs: Observation) -> None:
        i = self._last
        self._counts[i] += 1
        self._sums[i] += obs.reward
        self._means[i] = self._sums[i] / self._counts[i]
        self._t += 1
