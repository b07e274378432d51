"""Seed derivation for reproducible runs.

One 64-bit run seed deterministically yields three independent streams:

* arm-mean stream   -- Uniform[0,1] initial means, drawn in arm-id order
* noise stream      -- root for one substream per arm (noise for arm ``a``
                       depends only on (seed, a, pull index), so two policies
                       that pull the same arm see the same rewards)
* policy stream     -- randomness consumed by the policy itself (EXP3 draws)

Repetition seeds are derived from a base seed with the SplitMix64 finalizer,
a standard 64-bit mixing function, so consecutive repetition indices map to
decorrelated seeds.  All derivations are pure functions of their inputs; no
global RNG state is touched anywhere in the package.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

# Child indices under the per-run SeedSequence root.
_MEANS_KEY = 0
_NOISE_KEY = 1
_POLICY_KEY = 2


def mix_seed(base_seed: int, k: int) -> int:
    """Derive the seed for repetition ``k`` from ``base_seed``.

    SplitMix64 finalizer applied to ``base_seed + k * golden_gamma``;
    see Steele et al., "Fast Splittable Pseudorandom Number Generators".
    """
    x = (base_seed + k * 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def run_root(seed: int) -> np.random.SeedSequence:
    """SeedSequence root for one run (seed is masked to 64 bits)."""
    return np.random.SeedSequence(seed & _MASK64)


def mean_stream(root: np.random.SeedSequence) -> np.random.Generator:
    """Generator for the arm-mean stream."""
    return _child(root, (_MEANS_KEY,))


def policy_stream(root: np.random.SeedSequence) -> np.random.Generator:
    """Generator for the policy stream."""
    return _child(root, (_POLICY_KEY,))


def arm_noise_stream(root: np.random.SeedSequence, arm_id: int) -> np.random.Generator:
    """Generator for one arm's reward-noise substream."""
    return _child(root, (_NOISE_KEY, arm_id))


def _child(root: np.random.SeedSequence, key: tuple[int, ...]) -> np.random.Generator:
    # Identical to root.spawn() children but addressable by key, so streams
    # can be re-derived without replaying the spawn order.
    ss = np.random.SeedSequence(entropy=root.entropy, spawn_key=key)
    return np.random.Generator(np.random.PCG64(ss))
