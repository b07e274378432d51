"""Rested rotting environment with an infinite arm reservoir.

Arms are materialized lazily: each call to :meth:`Environment.sample_new_arm`
draws a fresh initial mean from Uniform[0,1] and assigns the next dense arm
id.  Pulling an arm returns the noisy reward computed from the arm's current
mean, then applies that pull's rotting decrement.  Means are allowed to go
negative; nothing is clamped.

Decay is tracked as a running sum of the per-pull rotting rates (never
recomputed as ``pulls * rho``), so arbitrary rate rules replay exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import seeding

ArmId = int

# A rate rule maps (pulls of the arm so far, 1-indexed global time of the
# current pull) to that pull's rotting decrement.
RateRule = Callable[[int, int], float]


class ConfigurationError(ValueError):
    """Invalid configuration value or combination."""


@dataclass(frozen=True)
class RottingSchedule:
    """Rule producing the per-pull rotting rate, bounded by ``rho_max``.

    With ``rule is None`` every pull decays the arm by exactly ``rho_max``
    (the constant-rotting worst case; ``rho_max = 0`` is the stationary
    case).  A custom rule must be a pure function of (arm pull count,
    global time); every emitted value must lie in ``[0, rho_max]``.
    """

    rho_max: float
    rule: RateRule | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.rho_max <= 1.0:
            raise ConfigurationError(
                f"rho_max must be in [0, 1], got {self.rho_max}"
            )

    @classmethod
    def zero(cls) -> "RottingSchedule":
        """Stationary rewards: no decay ever."""
        return cls(0.0)

    @classmethod
    def constant(cls, rho: float) -> "RottingSchedule":
        """Every pull decays the pulled arm by exactly ``rho``."""
        return cls(rho)

    @classmethod
    def custom(cls, rho_max: float, rule: RateRule) -> "RottingSchedule":
        return cls(rho_max, rule)

    @property
    def is_constant(self) -> bool:
        return self.rule is None

    def rate(self, pulls: int, time: int) -> float:
        """Rotting decrement for a pull by an arm with ``pulls`` prior pulls
        at 1-indexed global time ``time``."""
        if self.rule is None:
            return self.rho_max
        value = self.rule(pulls, time)
        if not 0.0 <= value <= self.rho_max:
            raise ValueError(
                f"schedule rule emitted {value}, outside [0, {self.rho_max}]"
            )
        return value


@dataclass(frozen=True)
class EnvConfig:
    horizon: int
    schedule: RottingSchedule
    noise_std: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ConfigurationError(f"horizon must be >= 1, got {self.horizon}")
        if self.noise_std < 0:
            raise ConfigurationError(
                f"noise_std must be >= 0, got {self.noise_std}"
            )


@dataclass
class ArmState:
    """One arm's ground truth: current mean = initial_mean - decay_accum."""

    initial_mean: float
    pulls: int = 0
    decay_accum: float = 0.0

    @property
    def mean(self) -> float:
        return self.initial_mean - self.decay_accum


@dataclass(frozen=True)
class Observation:
    """Result of one pull.

    ``true_mean_before_pull`` is the mean used for both the reward and the
    regret increment; ``rot_applied`` is the decay applied after the reward
    was generated.
    """

    reward: float
    true_mean_before_pull: float
    rot_applied: float


def regret_increment(obs: Observation) -> float:
    """Pseudo-regret of one pull against the benchmark mean 1.

    May exceed 1 when rotting has driven the arm's mean negative.
    """
    return 1.0 - obs.true_mean_before_pull


class Environment:
    """Single-run environment instance; not shared across runs or threads."""

    def __init__(self, config: EnvConfig):
        self.config = config
        self._root = seeding.run_root(config.seed)
        self._mean_rng = seeding.mean_stream(self._root)
        self._arms: list[ArmState] = []
        self._noise_rngs: list[np.random.Generator | None] = []
        self._time = 0

    @property
    def time(self) -> int:
        """Number of pulls made so far (completed time steps)."""
        return self._time

    @property
    def horizon(self) -> int:
        return self.config.horizon

    @property
    def arms_sampled(self) -> int:
        return len(self._arms)

    def policy_rng(self) -> np.random.Generator:
        """The run's policy stream (independent of mean/noise streams)."""
        return seeding.policy_stream(self._root)

    def arm_state(self, arm: ArmId) -> ArmState:
        self._check_arm(arm)
        return self._arms[arm]

    def sample_new_arm(self) -> ArmId:
        """Materialize a fresh arm with initial mean ~ Uniform[0,1]."""
        arm = len(self._arms)
        self._arms.append(ArmState(initial_mean=self._draw_initial_mean()))
        self._noise_rngs.append(None)
        return arm

    def pull(self, arm: ArmId) -> Observation:
        """Pull ``arm``: reward from the current mean, then apply decay."""
        self._check_arm(arm)
        if self._time >= self.config.horizon:
            raise RuntimeError(
                f"pull at time {self._time} past horizon {self.config.horizon}"
            )
        state = self._arms[arm]
        mean = state.initial_mean - state.decay_accum
        if self.config.noise_std > 0.0:
            eta = self._noise_rng(arm).standard_normal()
            reward = mean + self.config.noise_std * eta
        else:
            reward = mean
        rot = self.config.schedule.rate(state.pulls, self._time + 1)
        state.decay_accum += rot
        state.pulls += 1
        self._time += 1
        return Observation(reward=reward, true_mean_before_pull=mean, rot_applied=rot)

    # -- internals shared with the engine's vectorized runners ---------------

    def _draw_initial_mean(self) -> float:
        return float(self._mean_rng.random())

    def _noise_rng(self, arm: ArmId) -> np.random.Generator:
        rng = self._noise_rngs[arm]
        if rng is None:
            rng = seeding.arm_noise_stream(self._root, arm)
            self._noise_rngs[arm] = rng
        return rng

    def _noise_chunk(self, arm: ArmId, count: int) -> np.ndarray:
        """Next ``count`` standard-normal draws from the arm's noise stream.

        Chunked draws equal the same number of scalar draws, so batched and
        per-pull simulation see identical noise.  Over-drawing is only safe
        for arms that will never be pulled again.
        """
        return self._noise_rng(arm).standard_normal(count)

    def _commit_pulls(self, arm: ArmId, count: int, decay_accum: float) -> None:
        """Record ``count`` pulls of ``arm`` simulated outside :meth:`pull`.

        ``decay_accum`` is the arm's new running decay total, accumulated by
        the caller in per-pull order so replay stays bit-exact.
        """
        state = self._arms[arm]
        if self._time + count > self.config.horizon:
            raise RuntimeError("committed pulls would exceed the horizon")
        state.pulls += count
        state.decay_accum = decay_accum
        self._time += count

    def _check_arm(self, arm: ArmId) -> None:
        if not isinstance(arm, (int, np.integer)) or not 0 <= arm < len(self._arms):
            raise KeyError(f"unknown arm id {arm!r}")
