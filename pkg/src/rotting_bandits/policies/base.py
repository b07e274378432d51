"""Shared policy surface driven by the simulation engine.

Every policy plays exactly one arm per time step.  The engine calls
``reset`` once, then alternates ``choose`` / ``observe`` for each step.
``choose`` may sample fresh arms from the environment; a policy that
requests a fresh arm has permanently discarded its previous one.
"""

from __future__ import annotations

import enum
from typing import Protocol

import numpy as np

from ..env import ArmId, Environment, Observation


class PolicyAction(enum.Enum):
    """Keep-or-discard decision for the currently held arm."""

    PULL_CURRENT = "pull_current"
    PULL_FRESH = "pull_fresh"


PULL_CURRENT = PolicyAction.PULL_CURRENT
PULL_FRESH = PolicyAction.PULL_FRESH


class Policy(Protocol):
    def reset(self, env: Environment, rng: np.random.Generator) -> None:
        """Bind to a fresh environment; may sample arms up-front."""
        ...

    def choose(self) -> ArmId:
        """Arm to pull this step (may call ``env.sample_new_arm``)."""
        ...

    def observe(self, obs: Observation) -> None:
        """Consume the observation from the pull just made."""
        ...
