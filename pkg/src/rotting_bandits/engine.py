"""Drive (policy x environment) for T steps and collect pseudo-regret.

Two execution paths produce bit-identical results:

* a step-by-step reference path that works for any schedule, and
* vectorized runners for the threshold policies under built-in constant
  schedules, which simulate one arm's retention run per numpy batch.

The vectorized runners draw per-arm noise in chunks (chunked draws equal
scalar draws for PCG64 streams) and accumulate every running sum with
``np.add.accumulate``, which matches scalar left-to-right float addition, so
switching paths never changes a single bit of any observation or regret
value.  Repetitions are embarrassingly parallel; repetition ``k`` of a sweep
uses seed ``mix_seed(base_seed, k)`` and results are ordered by ``k``
regardless of the pool's completion order.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .env import ConfigurationError, EnvConfig, Environment, RottingSchedule
from .policies import (
    AucbTpConfig,
    AucbTpPolicy,
    Exp3State,
    FixedHorizonRadius,
    PolicyConfig,
    SsucbConfig,
    SsucbPolicy,
    UcbTpConfig,
    UcbTpPolicy,
    classic_radius,
    exp3_select,
    exp3_update,
)
from .policies.aucb_tp import BLOCK_RADIUS_SCALE
from .seeding import mix_seed

ALGORITHMS = ("ucbtp", "aucbtp", "ssucb")

_CHUNK_START = 64
_CHUNK_MAX = 16384


@dataclass(frozen=True)
class RunSpec:
    algorithm: str
    env: EnvConfig
    policy: PolicyConfig
    checkpoints: tuple[int, ...] | None = None  # None -> default_checkpoints


@dataclass(frozen=True)
class RunResult:
    final_regret: float
    regret_curve: tuple[tuple[int, float], ...]
    arms_sampled: int
    seed: int
    wall_time_ms: int


def default_checkpoints(horizon: int, count: int = 100) -> tuple[int, ...]:
    """~``count`` log-spaced recording times in [1, T], always ending at T."""
    pts = np.unique(
        np.round(np.logspace(0.0, math.log10(horizon), count)).astype(np.int64)
    )
    pts = pts[(pts >= 1) & (pts <= horizon)]
    out = [int(p) for p in pts]
    if not out or out[-1] != horizon:
        out.append(horizon)
    return tuple(out)


def make_run_spec(
    algorithm: str,
    horizon: int,
    rho: float,
    *,
    noise_std: float = 1.0,
    seed: int = 0,
    checkpoints: tuple[int, ...] | None = None,
    schedule: RottingSchedule | None = None,
    **policy_kwargs,
) -> RunSpec:
    """Assemble env + policy configs for one benchmark cell.

    ``rho`` is both the environment's constant rotting rate and the maximum
    rate disclosed to the known-rate policy; the adaptive policy and the
    baseline never see it.
    """
    if algorithm not in ALGORITHMS:
        raise ConfigurationError(
            f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}"
        )
    if schedule is None:
        schedule = RottingSchedule.constant(rho)
    env = EnvConfig(horizon=horizon, schedule=schedule, noise_std=noise_std, seed=seed)
    if algorithm == "ucbtp":
        policy: PolicyConfig = UcbTpConfig(
            horizon=horizon, rho_known=rho, **policy_kwargs
        )
    elif algorithm == "aucbtp":
        policy = AucbTpConfig(horizon=horizon, **policy_kwargs)
    else:
        kwargs = dict(policy_kwargs)
        rule = kwargs.get("radius_rule")
        if isinstance(rule, str):  # CLI names for the built-in rules
            if rule == "classic":
                kwargs["radius_rule"] = classic_radius
            elif rule == "fixed":
                kwargs["radius_rule"] = FixedHorizonRadius(horizon)
            else:
                raise ConfigurationError(
                    f"unknown ssucb radius rule {rule!r}; use 'classic' or 'fixed'"
                )
        policy = SsucbConfig(horizon=horizon, **kwargs)
    return RunSpec(algorithm=algorithm, env=env, policy=policy, checkpoints=checkpoints)


def build_policy(spec: RunSpec):
    pairs = {
        "ucbtp": (UcbTpConfig, UcbTpPolicy),
        "aucbtp": (AucbTpConfig, AucbTpPolicy),
        "ssucb": (SsucbConfig, SsucbPolicy),
    }
    if spec.algorithm not in pairs:
        raise ConfigurationError(f"unknown algorithm {spec.algorithm!r}")
    cfg_type, policy_type = pairs[spec.algorithm]
    if not isinstance(spec.policy, cfg_type):
        raise ConfigurationError(
            f"algorithm {spec.algorithm!r} needs a {cfg_type.__name__}, "
            f"got {type(spec.policy).__name__}"
        )
    if spec.policy.horizon != spec.env.horizon:
        raise ConfigurationError(
            f"policy horizon {spec.policy.horizon} != env horizon {spec.env.horizon}"
        )
    return policy_type(spec.policy)


def _resolve_checkpoints(spec: RunSpec) -> tuple[int, ...]:
    horizon = spec.env.horizon
    if spec.checkpoints is None:
        return default_checkpoints(horizon)
    cps = tuple(int(c) for c in spec.checkpoints)
    if not cps or list(cps) != sorted(set(cps)) or cps[0] < 1 or cps[-1] != horizon:
        raise ConfigurationError(
            "checkpoints must be strictly increasing, within [1, T], ending at T"
        )
    return cps


def run_one(spec: RunSpec) -> RunResult:
    """Execute one repetition; deterministic given ``spec`` (incl. its seed)."""
    env = Environment(spec.env)
    return _execute(spec, env)


def _execute(spec: RunSpec, env: Environment) -> RunResult:
    checkpoints = _resolve_checkpoints(spec)
    policy = build_policy(spec)
    started = time.perf_counter()
    fast = spec.env.schedule.is_constant
    if spec.algorithm == "ucbtp" and fast:
        curve = _run_ucbtp_fast(spec.policy, env, checkpoints)
    elif spec.algorithm == "aucbtp" and fast:
        curve = _run_aucbtp_fast(spec.policy, env, checkpoints)
    else:
        curve = _run_stepwise(spec, env, policy, checkpoints)
    wall_ms = int((time.perf_counter() - started) * 1000)
    return RunResult(
        final_regret=curve[-1][1],
        regret_curve=tuple(curve),
        arms_sampled=env.arms_sampled,
        seed=spec.env.seed,
        wall_time_ms=wall_ms,
    )


def _run_stepwise(
    spec: RunSpec, env: Environment, policy, checkpoints: tuple[int, ...]
) -> list[tuple[int, float]]:
    """Reference path: one env.pull per step, any schedule, any policy."""
    policy.reset(env, env.policy_rng())
    cum = 0.0
    curve: list[tuple[int, float]] = []
    cp_iter = iter(checkpoints)
    next_cp = next(cp_iter)
    for t in range(1, env.horizon + 1):
        obs = env.pull(policy.choose())
        policy.observe(obs)
        cum += 1.0 - obs.true_mean_before_pull
        if t == next_cp:
            curve.append((t, cum))
            next_cp = next(cp_iter, 0)
    return curve


class _ArmRunKernel:
    """Vectorized retention run of one fresh arm under a threshold rule.

    Reproduces the scalar path bit-for-bit: per-pull decay, corrected sums,
    global regret, and block reward sums are all left-to-right float
    accumulations with carries across chunks and arms.
    """

    def __init__(self, env: Environment, checkpoints: tuple[int, ...]):
        self.env = env
        self.sigma = env.config.noise_std
        self.rho_true = env.config.schedule.rho_max
        self.cps = checkpoints
        self.cp_i = 0
        self.curve: list[tuple[int, float]] = []
        self.t = 0
        self.cum = 0.0
        self.reward_carry = 0.0  # per-block reward sum (adaptive policy only)

    def run_arm(
        self, arm: int, rho_corr: float, radius_num: float, thresh: float, max_pulls: int
    ) -> bool:
        """Pull ``arm`` until the index test fails or ``max_pulls`` is hit.

        Returns True if the arm was discarded by the test.  Commits the
        pulls to the environment and records any checkpoints crossed.
        """
        env = self.env
        mu1 = env.arm_state(arm).initial_mean
        sigma = self.sigma
        rho_true = self.rho_true
        n0 = 0
        corr_carry = 0.0
        decay_carry = 0.0
        chunk = _CHUNK_START
        discarded = False
        while n0 < max_pulls:
            length = min(chunk, max_pulls - n0)
            chunk = min(chunk * 2, _CHUNK_MAX)
            # Decay before each pull, then mean/reward, sequentially carried.
            dec = np.add.accumulate(
                np.concatenate(([decay_carry], np.full(length - 1, rho_true)))
            )
            mean = mu1 - dec
            if sigma > 0.0:
                reward = mean + sigma * env._noise_chunk(arm, length)
            else:
                reward = mean
            pulls_before = np.arange(n0, n0 + length)
            corrected = np.add.accumulate(
                np.concatenate(([corr_carry], reward + rho_corr * pulls_before))
            )[1:]
            n = pulls_before + 1
            index = corrected / n - rho_corr * n + np.sqrt(radius_num / n)
            fail = index < thresh
            j = int(np.argmax(fail))
            if fail[j]:
                committed = j + 1
                discarded = True
            else:
                committed = length
            regs = np.add.accumulate(
                np.concatenate(([self.cum], 1.0 - mean[:committed]))
            )[1:]
            rews = np.add.accumulate(
                np.concatenate(([self.reward_carry], reward[:committed]))
            )[1:]
            while self.cp_i < len(self.cps) and self.cps[self.cp_i] <= self.t + committed:
                cp = self.cps[self.cp_i]
                self.curve.append((cp, float(regs[cp - self.t - 1])))
                self.cp_i += 1
            self.cum = float(regs[-1])
            self.reward_carry = float(rews[-1])
            decay_after = float(dec[committed - 1]) + rho_true
            corr_carry = float(corrected[committed - 1])
            env._commit_pulls(arm, committed, decay_after)
            self.t += committed
            n0 += committed
            if discarded:
                break
            decay_carry = decay_after
        return discarded


def _run_ucbtp_fast(
    cfg: UcbTpConfig, env: Environment, checkpoints: tuple[int, ...]
) -> list[tuple[int, float]]:
    kernel = _ArmRunKernel(env, checkpoints)
    horizon = env.horizon
    radius_num = cfg.radius_scale * math.log(horizon)
    thresh = 1.0 - cfg.delta
    while kernel.t < horizon:
        arm = env.sample_new_arm()
        kernel.run_arm(arm, cfg.rho_known, radius_num, thresh, horizon - kernel.t)
    return kernel.curve


def _run_aucbtp_fast(
    cfg: AucbTpConfig, env: Environment, checkpoints: tuple[int, ...]
) -> list[tuple[int, float]]:
    kernel = _ArmRunKernel(env, checkpoints)
    rng = env.policy_rng()
    exp3 = Exp3State.fresh(len(cfg.candidate_set))
    horizon = env.horizon
    radius_num = BLOCK_RADIUS_SCALE * math.log(cfg.block_len)
    while kernel.t < horizon:
        block_end = min(kernel.t + cfg.block_len, horizon)
        # One policy-stream draw per block; the block's first pull cannot
        # depend on it, so drawing before the pull matches the scalar path.
        beta = exp3_select(exp3, cfg, rng)
        thresh = 1.0 - beta ** (1.0 / 3.0)
        kernel.reward_carry = 0.0
        while kernel.t < block_end:
            arm = env.sample_new_arm()
            kernel.run_arm(arm, beta, radius_num, thresh, block_end - kernel.t)
        exp3_update(exp3, beta, kernel.reward_carry, cfg)
    return kernel.curve


def run_many(
    spec: RunSpec,
    repetitions: int,
    base_seed: int,
    threads: int | None = None,
) -> list[RunResult]:
    """Independent repetitions with seeds ``mix_seed(base_seed, k)``.

    Results are ordered by repetition index and are byte-identical for any
    ``threads`` value (each repetition is self-contained).
    """
    if repetitions < 1:
        raise ConfigurationError(f"repetitions must be >= 1, got {repetitions}")
    specs = [
        replace(spec, env=replace(spec.env, seed=mix_seed(base_seed, k)))
        for k in range(repetitions)
    ]
    if threads is None:
        threads = os.cpu_count() or 1
    if threads <= 1 or repetitions == 1:
        return [run_one(s) for s in specs]
    with ProcessPoolExecutor(max_workers=min(threads, repetitions)) as pool:
        return list(pool.map(run_one, specs))
