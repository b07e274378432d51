"""Adaptive UCB-threshold policy for an unknown maximum rotting rate.

Bandit-over-bandit construction: the horizon is split into blocks of ``H``
steps.  An EXP3 master picks a candidate rate ``beta`` from a geometric grid
before each block; the block then runs the UCB-threshold rule with rotting
correction ``beta``, threshold ``1 - beta**(1/3)``, confidence radius
``sqrt(10 log(H) / n)``, and per-block statistics.  Block reward sums are
rescaled into [0,1] (with high probability) to feed the EXP3 weight update.

Each block starts on a freshly sampled arm: per-block statistics reset at
the block boundary anyway, so carrying over the previous arm without its
statistics would be strictly dominated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..env import ArmId, ConfigurationError, Environment, Observation
from .base import PULL_CURRENT, PULL_FRESH, PolicyAction
from .ucb_tp import UcbTpState

# The block index always uses this radius scale (with log H), mirroring the
# known-rate policy's default of sqrt(10 log T / n).
BLOCK_RADIUS_SCALE = 10.0


def default_block_len(horizon: int) -> int:
    """ceil(sqrt(T)), computed exactly in integers."""
    return math.isqrt(horizon - 1) + 1 if horizon > 1 else 1


def aucbtp_candidate_set(block_len: int) -> tuple[float, ...]:
    """Candidate rates {2^-3, 2^-4, ..., 2^-ceil(1.5*log2(H))}, descending.

    The largest exponent is the smallest integer e with 4^e >= H^3 (an
    integer-exact form of ceil(1.5*log2(H))).
    """
    if block_len < 4:
        raise ConfigurationError(
            f"block length must be >= 4 for a non-empty candidate set, got {block_len}"
        )
    cube = block_len**3
    top = max(3, math.ceil(1.5 * math.log2(block_len)))
    while 4**top < cube:
        top += 1
    while top > 3 and 4 ** (top - 1) >= cube:
        top -= 1
    return tuple(2.0**-e for e in range(3, top + 1))


def exp3_exploration_rate(num_bases: int, num_blocks: int) -> float:
    """min{1, sqrt(B log B / ((e-1) ceil(T/H)))}; 1 for the single-base case."""
    if num_bases == 1:
        # The formula degenerates to 0 (log 1 = 0); with one base the mixture
        # is the point mass either way, so pin the rate to 1.
        return 1.0
    raw = math.sqrt(
        num_bases * math.log(num_bases) / ((math.e - 1.0) * num_blocks)
    )
    return min(1.0, raw)


@dataclass(frozen=True)
class AucbTpConfig:
    """Parameters of the adaptive threshold policy.

    Derived fields (block length, candidate set, exploration rate) are
    filled from the horizon when not supplied.  ``reward_norm_C`` scales the
    EXP3 reward normalizer ``2*C*H*log T + 4*sqrt(H*log T)``; the default 93
    matches the high-probability bound on a block's absolute reward sum.
    """

    horizon: int
    block_len: int | None = None
    candidate_set: tuple[float, ...] | None = None
    alpha: float | None = None
    reward_norm_C: float = 93.0

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ConfigurationError(f"horizon must be >= 1, got {self.horizon}")
        if self.reward_norm_C <= 0:
            raise ConfigurationError(
                f"reward_norm_C must be > 0, got {self.reward_norm_C}"
            )
        if self.block_len is None:
            object.__setattr__(self, "block_len", default_block_len(self.horizon))
        if self.block_len < 4:
            raise ConfigurationError(
                f"block length must be >= 4 (horizon {self.horizon} gives "
                f"{self.block_len}); pass block_len explicitly for tiny horizons"
            )
        if self.candidate_set is None:
            object.__setattr__(
                self, "candidate_set", aucbtp_candidate_set(self.block_len)
            )
        if len(self.candidate_set) < 1:
            raise ConfigurationError("candidate set must be non-empty")
        if self.alpha is None:
            object.__setattr__(
                self,
                "alpha",
                exp3_exploration_rate(len(self.candidate_set), self.num_blocks),
            )
        if not 0.0 < self.alpha <= 1.0:
            raise ConfigurationError(f"alpha must be in (0, 1], got {self.alpha}")

    @property
    def num_blocks(self) -> int:
        return -(-self.horizon // self.block_len)


@dataclass
class Exp3State:
    """EXP3 master state over the candidate bases.

    ``weights[i]`` corresponds to ``candidate_set[i]``; probabilities mix the
    weight distribution with uniform exploration ``alpha / B``.
    """

    weights: np.ndarray
    last_selected: int | None = None
    last_probabilities: np.ndarray | None = None

    @classmethod
    def fresh(cls, num_bases: int) -> "Exp3State":
        return cls(weights=np.ones(num_bases))

    def probabilities(self, alpha: float) -> np.ndarray:
        if not np.all(np.isfinite(self.weights)):
            raise RuntimeError(f"non-finite EXP3 weight: {self.weights}")
        num_bases = len(self.weights)
        return (1.0 - alpha) * self.weights / self.weights.sum() + alpha / num_bases


def exp3_select(
    exp3: Exp3State, cfg: AucbTpConfig, rng: np.random.Generator
) -> float:
    """Sample the block's base rate from the mixture distribution."""
    probs = exp3.probabilities(cfg.alpha)
    idx = int(rng.choice(len(probs), p=probs))
    exp3.last_selected = idx
    exp3.last_probabilities = probs
    return cfg.candidate_set[idx]


def exp3_update(
    exp3: Exp3State, beta: float, block_reward_sum: float, cfg: AucbTpConfig
) -> Exp3State:
    """Importance-weighted weight update for the block's selected base.

    The normalized reward ``1/2 + sum(r) / (2*C*H*log T + 4*sqrt(H*log T))``
    is clamped to [0,1] (the containment only holds with high probability).
    Weights are then divided by their maximum, which preserves the argmax
    and every probability ratio while preventing overflow.
    """
    idx = cfg.candidate_set.index(beta)
    if exp3.last_selected != idx or exp3.last_probabilities is None:
        raise ValueError("exp3_update must target the base recorded at selection")
    log_t = math.log(cfg.horizon)
    denom = 2.0 * cfg.reward_norm_C * cfg.block_len * log_t + 4.0 * math.sqrt(
        cfg.block_len * log_t
    )
    if denom > 0.0:
        gain = 0.5 + block_reward_sum / denom
    else:
        gain = 0.5  # horizon 1: log T = 0, the update is vacuous
    gain = min(1.0, max(0.0, gain))
    num_bases = len(cfg.candidate_set)
    p_sel = exp3.last_probabilities[idx]
    exp3.weights[idx] *= math.exp(cfg.alpha * gain / (num_bases * p_sel))
    exp3.weights /= exp3.weights.max()
    # Guard against underflow of long-unselected bases; inactive in normal
    # magnitudes, so argmax and ratios are untouched.
    np.maximum(exp3.weights, 1e-300, out=exp3.weights)
    return exp3


def aucbtp_index(state: UcbTpState, beta: float, cfg: AucbTpConfig) -> float:
    """Per-block UCB index: estimate - beta * n + sqrt(10 log(H) / n)."""
    if state.n < 1:
        raise ValueError("index undefined before the first pull")
    n = state.n
    radius_num = BLOCK_RADIUS_SCALE * math.log(cfg.block_len)
    return state.corrected_sum / n - beta * n + math.sqrt(radius_num / n)


def aucbtp_block_step(
    state: UcbTpState, beta: float, cfg: AucbTpConfig, last_obs: Observation
) -> PolicyAction:
    """Keep/discard under the block's base rate and threshold 1 - beta^(1/3)."""
    state.add_reward(last_obs.reward, beta)
    if aucbtp_index(state, beta, cfg) >= 1.0 - beta ** (1.0 / 3.0):
        return PULL_CURRENT
    return PULL_FRESH


class AucbTpPolicy:
    """Engine-facing block orchestrator: EXP3 master over threshold bases."""

    def __init__(self, cfg: AucbTpConfig):
        self.cfg = cfg
        self._env: Environment | None = None
        self._rng: np.random.Generator | None = None

    def reset(self, env: Environment, rng: np.random.Generator) -> None:
        self._env = env
        self._rng = rng
        self.exp3 = Exp3State.fresh(len(self.cfg.candidate_set))
        self._state: UcbTpState | None = None
        self._beta: float | None = None
        self._t = 0
        self._block_pos = 0
        self._block_reward = 0.0
        # One entry per block, recorded at selection time; used by the
        # simplex diagnostics and cheap relative to the run itself.
        self.prob_history: list[np.ndarray] = []
        self.beta_history: list[float] = []

    def choose(self) -> ArmId:
        if self._state is None:
            self._state = UcbTpState(current_arm=self._env.sample_new_arm())
        return self._state.current_arm

    def observe(self, obs: Observation) -> None:
        self._t += 1
        self._block_pos += 1
        self._block_reward += obs.reward
        if self._block_pos == 1:
            # The block's first pull is unconditional and precedes the base
            # selection; its correction term is beta * 0 either way.
            self._beta = exp3_select(self.exp3, self.cfg, self._rng)
            self.prob_history.append(self.exp3.last_probabilities)
            self.beta_history.append(self._beta)
        if aucbtp_block_step(self._state, self._beta, self.cfg, obs) is PULL_FRESH:
            self._state = None
        if self._block_pos == self.cfg.block_len or self._t == self.cfg.horizon:
            exp3_update(self.exp3, self._beta, self._block_reward, self.cfg)
            self._block_pos = 0
            self._block_reward = 0.0
            self._state = None
