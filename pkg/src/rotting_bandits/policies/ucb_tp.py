"""UCB-threshold policy for a known maximum rotting rate.

The policy holds one arm at a time.  Each reward is corrected for the
worst-case rotting accumulated before it (the k-th pull contributes
``r_k + rho * (k-1)``), giving an unbiased estimate of the arm's initial
mean under constant rotting.  The arm is kept while

    estimate - rho * n + sqrt(radius_scale * log(T) / n)  >=  1 - delta

and discarded forever on the first failure; the replacement arm is fresh
and is pulled unconditionally once (no index exists before the first pull).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..env import ArmId, ConfigurationError, Environment, Observation
from .base import PULL_CURRENT, PULL_FRESH, PolicyAction


def default_threshold_gap(rho: float, horizon: int) -> float:
    """Threshold parameter max{rho^(1/3), 1/sqrt(T)} used when none is given."""
    return max(rho ** (1.0 / 3.0), 1.0 / math.sqrt(horizon))


@dataclass(frozen=True)
class UcbTpConfig:
    """Parameters of the known-rate threshold policy.

    ``rho_known`` is the maximum rotting rate given to the policy (not
    necessarily the environment's true rate).  ``delta`` defaults to
    max{rho^(1/3), 1/sqrt(T)}; the value 1 is only reachable at T = 1,
    where the threshold test never runs.
    """

    horizon: int
    rho_known: float
    delta: float | None = None
    radius_scale: float = 10.0

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ConfigurationError(f"horizon must be >= 1, got {self.horizon}")
        if self.rho_known < 0:
            raise ConfigurationError(f"rho_known must be >= 0, got {self.rho_known}")
        if self.radius_scale <= 0:
            raise ConfigurationError(
                f"radius_scale must be > 0, got {self.radius_scale}"
            )
        if self.delta is None:
            object.__setattr__(
                self, "delta", default_threshold_gap(self.rho_known, self.horizon)
            )
        if not 0.0 < self.delta <= 1.0:
            raise ConfigurationError(f"delta must be in (0, 1], got {self.delta}")


@dataclass
class UcbTpState:
    """Sufficient statistics for the currently held arm.

    ``corrected_sum`` is sum_{k=1..n} (r_k + rho * (k-1)); the initial-mean
    estimate is ``corrected_sum / n``.
    """

    current_arm: ArmId
    n: int = 0
    corrected_sum: float = 0.0

    def add_reward(self, reward: float, rho: float) -> None:
        self.corrected_sum += reward + rho * self.n
        self.n += 1


def ucbtp_index(state: UcbTpState, cfg: UcbTpConfig) -> float:
    """Upper confidence bound on the arm's current mean (natural log)."""
    if state.n < 1:
        raise ValueError("index undefined before the first pull")
    n = state.n
    radius_num = cfg.radius_scale * math.log(cfg.horizon)
    return (
        state.corrected_sum / n
        - cfg.rho_known * n
        + math.sqrt(radius_num / n)
    )


def ucbtp_step(state: UcbTpState, cfg: UcbTpConfig, last_obs: Observation) -> PolicyAction:
    """Absorb the latest reward and decide keep (index >= 1 - delta) or discard."""
    state.add_reward(last_obs.reward, cfg.rho_known)
    if ucbtp_index(state, cfg) >= 1.0 - cfg.delta:
        return PULL_CURRENT
    return PULL_FRESH


class UcbTpPolicy:
    """Engine-facing wrapper around the threshold rule."""

    def __init__(self, cfg: UcbTpConfig):
        self.cfg = cfg
        self._env: Environment | None = None
        self._state: UcbTpState | None = None

    def reset(self, env: Environment, rng: np.random.Generator) -> None:
        self._env = env
        self._state = None

    def choose(self) -> ArmId:
        if self._state is None:
            self._state = UcbTpState(current_arm=self._env.sample_new_arm())
        return self._state.current_arm

    def observe(self, obs: Observation) -> None:
        if ucbtp_step(self._state, self.cfg, obs) is PULL_FRESH:
            self._state = None
