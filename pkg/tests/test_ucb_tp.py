import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rotting_bandits.env import ConfigurationError, Observation
from rotting_bandits.policies import (
    PULL_CURRENT,
    PULL_FRESH,
    UcbTpConfig,
    UcbTpState,
    ucbtp_index,
    ucbtp_step,
)
from rotting_bandits.policies.ucb_tp import default_threshold_gap


def obs(reward):
    return Observation(reward=reward, true_mean_before_pull=reward, rot_applied=0.0)


def feed_noiseless(cfg, mu1, rho_true, max_pulls):
    """Replay the keep/discard recurrence without noise; returns pull count."""
    state = UcbTpState(current_arm=0)
    for k in range(1, max_pulls + 1):
        reward = mu1 - (k - 1) * rho_true
        if ucbtp_step(state, cfg, obs(reward)) is PULL_FRESH:
            return k
    return max_pulls


class TestIndex:
    def test_single_pull_hand_value(self):
        cfg = UcbTpConfig(horizon=10**6, rho_known=0.01)
        state = UcbTpState(current_arm=0)
        state.add_reward(0.5, cfg.rho_known)
        idx = ucbtp_index(state, cfg)
        # First pull contributes reward + rho*0, so the estimate is 0.5.
        oracle = 0.5 - 0.01 + math.sqrt(10 * math.log(10**6))
        assert idx == oracle
        assert idx == pytest.approx(12.2440, abs=1e-4)

    def test_hundred_pull_hand_value(self):
        cfg = UcbTpConfig(horizon=10**6, rho_known=0.0, delta=0.1)
        state = UcbTpState(current_arm=0, n=100, corrected_sum=100 * 0.9)
        idx = ucbtp_index(state, cfg)
        oracle = 0.9 + math.sqrt(10 * math.log(10**6) / 100)
        assert idx == pytest.approx(oracle, rel=1e-15)
        assert idx == pytest.approx(2.07540, abs=1e-4)

    def test_index_converges_to_mean_from_above(self):
        cfg = UcbTpConfig(horizon=10**6, rho_known=0.0, delta=0.1)
        mu = 0.42
        last = math.inf
        for n in (10**3, 10**6, 10**9):
            state = UcbTpState(current_arm=0, n=n, corrected_sum=mu * n)
            idx = ucbtp_index(state, cfg)
            assert mu < idx < last
            last = idx
        assert last == pytest.approx(mu, abs=1e-3)

    def test_undefined_before_first_pull(self):
        cfg = UcbTpConfig(horizon=100, rho_known=0.0)
        with pytest.raises(ValueError):
            ucbtp_index(UcbTpState(current_arm=0), cfg)


class TestStep:
    def test_equality_with_threshold_keeps_the_arm(self):
        # Build a bit-exact index == threshold case: find a horizon whose
        # radius_scale * log(T) lands exactly on 4.0, so the n=1 radius is
        # exactly 2.0; reward -1.5 then gives index exactly 0.5 = 1 - delta.
        for horizon in range(2, 200):
            scale = 4.0 / math.log(horizon)
            if scale * math.log(horizon) == 4.0:
                break
        else:
            pytest.fail("no horizon with an exactly representable radius")
        cfg = UcbTpConfig(horizon=horizon, rho_known=0.0, delta=0.5,
                          radius_scale=scale)
        state = UcbTpState(current_arm=0)
        assert ucbtp_step(state, cfg, obs(-1.5)) is PULL_CURRENT  # 0.5 >= 0.5

        state = UcbTpState(current_arm=0)
        state.add_reward(-1.5, 0.0)
        assert ucbtp_index(state, cfg) == 0.5  # exact equality, kept above

        nudged = UcbTpConfig(horizon=horizon, rho_known=0.0,
                             delta=0.5 - 1e-12, radius_scale=scale)
        state = UcbTpState(current_arm=0)
        assert ucbtp_step(state, nudged, obs(-1.5)) is PULL_FRESH

    def test_noiseless_good_arm_retained_at_least_delta_over_two_rho(self):
        # Lemma specialization: a kept arm needs at least delta/(2 rho) pulls
        # before the rotting correction can push the index below 1 - delta.
        rho = 1e-3
        cfg = UcbTpConfig(horizon=10**6, rho_known=rho, delta=0.1)
        bound = int(cfg.delta / (2 * rho))  # 50
        assert bound == 50
        for mu1 in (0.95, 0.97, 1.0):
            pulls = feed_noiseless(cfg, mu1, rho, max_pulls=10**5)
            assert pulls >= bound

    def test_zero_rot_good_arm_never_discarded(self):
        cfg = UcbTpConfig(horizon=10**4, rho_known=0.0, delta=0.1)
        for mu1 in (0.9, 0.95, 1.0):
            pulls = feed_noiseless(cfg, mu1, 0.0, max_pulls=5000)
            assert pulls == 5000  # never discarded within budget


class TestEstimatorConsistency:
    @given(
        st.floats(0.0, 1.0),
        st.floats(0.0, 0.1),
        st.integers(1, 300),
    )
    def test_unbiased_under_known_constant_rotting(self, mu1, rho, n):
        # Zero noise + true rate == known rate: estimate recovers mu1 exactly.
        state = UcbTpState(current_arm=0)
        for k in range(1, n + 1):
            state.add_reward(mu1 - (k - 1) * rho, rho)
        estimate = state.corrected_sum / state.n
        assert abs(estimate - mu1) < 1e-12


class TestConfig:
    def test_default_delta(self):
        assert UcbTpConfig(10**6, 1e-3).delta == pytest.approx(0.1, rel=1e-12)
        # Stationary: 1/sqrt(T) branch dominates.
        assert UcbTpConfig(10**4, 0.0).delta == pytest.approx(0.01, rel=1e-12)
        assert default_threshold_gap(0.0, 1) == 1.0  # degenerate single step

    def test_validation(self):
        with pytest.raises(ConfigurationError):
            UcbTpConfig(horizon=0, rho_known=0.0)
        with pytest.raises(ConfigurationError):
            UcbTpConfig(horizon=10, rho_known=-0.1)
        with pytest.raises(ConfigurationError):
            UcbTpConfig(horizon=10, rho_known=0.0, delta=0.0)
        with pytest.raises(ConfigurationError):
            UcbTpConfig(horizon=10, rho_known=0.0, delta=1.5)
        with pytest.raises(ConfigurationError):
            UcbTpConfig(horizon=10, rho_known=0.0, radius_scale=0.0)
