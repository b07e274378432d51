"""Policies: the two threshold algorithms and the subsampled-UCB baseline."""

from .base import PULL_CURRENT, PULL_FRESH, Policy, PolicyAction
from .ucb_tp import UcbTpConfig, UcbTpPolicy, UcbTpState, ucbtp_index, ucbtp_step
from .aucb_tp import (
    AucbTpConfig,
    AucbTpPolicy,
    Exp3State,
    aucbtp_block_step,
    aucbtp_candidate_set,
    aucbtp_index,
    exp3_exploration_rate,
    exp3_select,
    exp3_update,
)
from .ssucb import (
    FixedHorizonRadius,
    SsucbConfig,
    SsucbPolicy,
    classic_radius,
    default_subsample_count,
    ssucb_choose,
)

PolicyConfig = UcbTpConfig | AucbTpConfig | SsucbConfig

__all__ = [
    "PULL_CURRENT",
    "PULL_FRESH",
    "Policy",
    "PolicyAction",
    "PolicyConfig",
    "UcbTpConfig",
    "UcbTpPolicy",
    "UcbTpState",
    "ucbtp_index",
    "ucbtp_step",
    "AucbTpConfig",
    "AucbTpPolicy",
    "Exp3State",
    "aucbtp_block_step",
    "aucbtp_candidate_set",
    "aucbtp_index",
    "exp3_exploration_rate",
    "exp3_select",
    "exp3_update",
    "FixedHorizonRadius",
    "SsucbConfig",
    "SsucbPolicy",
    "classic_radius",
    "default_subsample_count",
    "ssucb_choose",
]
