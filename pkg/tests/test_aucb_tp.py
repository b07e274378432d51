import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rotting_bandits.env import ConfigurationError, Observation
from rotting_bandits.policies import (
    PULL_CURRENT,
    PULL_FRESH,
    AucbTpConfig,
    Exp3State,
    UcbTpConfig,
    UcbTpState,
    aucbtp_block_step,
    aucbtp_candidate_set,
    aucbtp_index,
    exp3_exploration_rate,
    exp3_select,
    exp3_update,
    ucbtp_index,
)


def obs(reward):
    return Observation(reward=reward, true_mean_before_pull=reward, rot_applied=0.0)


class TestCandidateSet:
    def test_boundary_h4(self):
        assert aucbtp_candidate_set(4) == (2.0**-3,)

    def test_h8(self):
        assert aucbtp_candidate_set(8) == (2.0**-3, 2.0**-4, 2.0**-5)

    def test_h1000(self):
        cs = aucbtp_candidate_set(1000)
        assert len(cs) == 13
        assert cs[0] == 2.0**-3
        assert cs[-1] == 2.0**-15

    def test_below_minimum_rejected(self):
        for h in (1, 2, 3):
            with pytest.raises(ConfigurationError):
                aucbtp_candidate_set(h)

    @given(st.integers(4, 10**6))
    def test_exponent_law(self, h):
        cs = aucbtp_candidate_set(h)
        # Descending powers of two from 2^-3 down to 2^-ceil(1.5*log2 H).
        exponents = [-math.log2(v) for v in cs]
        assert exponents[0] == 3
        assert exponents == sorted(exponents)
        assert all(e == int(e) for e in exponents)
        top = int(exponents[-1])
        assert 4**top >= h**3 > 4 ** (top - 1)


class TestExplorationRate:
    def test_single_base_pins_to_one(self):
        assert exp3_exploration_rate(1, 100) == 1.0

    def test_formula(self):
        b, blocks = 5, 100
        expected = math.sqrt(b * math.log(b) / ((math.e - 1) * blocks))
        assert exp3_exploration_rate(b, blocks) == pytest.approx(expected, rel=1e-15)

    def test_capped_at_one(self):
        assert exp3_exploration_rate(50, 2) == 1.0


class TestExp3Select:
    def cfg(self, horizon=10**4, block_len=100):
        return AucbTpConfig(horizon=horizon, block_len=block_len)

    def test_initial_probabilities_are_uniform(self):
        cfg = self.cfg()
        exp3 = Exp3State.fresh(len(cfg.candidate_set))
        probs = exp3.probabilities(cfg.alpha)
        np.testing.assert_allclose(probs, 1.0 / len(probs), rtol=1e-14)

    def test_hand_computed_mixture(self):
        cfg = AucbTpConfig(horizon=10**4, block_len=100,
                           candidate_set=(0.125, 0.0625, 0.03125), alpha=0.5)
        exp3 = Exp3State(weights=np.array([2.0, 1.0, 1.0]))
        probs = exp3.probabilities(cfg.alpha)
        np.testing.assert_allclose(probs, [0.41667, 0.29167, 0.29167], atol=5e-6)
        assert probs.sum() == pytest.approx(1.0, abs=1e-12)

    def test_alpha_one_ignores_weights(self):
        cfg = AucbTpConfig(horizon=10**4, block_len=100,
                           candidate_set=(0.125, 0.0625), alpha=1.0)
        exp3 = Exp3State(weights=np.array([100.0, 1.0]))
        np.testing.assert_allclose(exp3.probabilities(cfg.alpha), 0.5, rtol=1e-14)

    def test_select_records_probabilities(self):
        cfg = self.cfg()
        exp3 = Exp3State.fresh(len(cfg.candidate_set))
        rng = np.random.default_rng(0)
        beta = exp3_select(exp3, cfg, rng)
        assert beta in cfg.candidate_set
        assert exp3.last_selected == cfg.candidate_set.index(beta)
        assert exp3.last_probabilities.sum() == pytest.approx(1.0, abs=1e-12)

    def test_non_finite_weight_is_internal_error(self):
        exp3 = Exp3State(weights=np.array([1.0, math.inf]))
        with pytest.raises(RuntimeError):
            exp3.probabilities(0.5)


class TestExp3Update:
    def test_zero_block_reward_gives_half_gain(self):
        cfg = AucbTpConfig(horizon=10**4, block_len=100)
        exp3 = Exp3State.fresh(len(cfg.candidate_set))
        rng = np.random.default_rng(1)
        beta = exp3_select(exp3, cfg, rng)
        idx = exp3.last_selected
        p = exp3.last_probabilities[idx]
        exp3_update(exp3, beta, 0.0, cfg)
        # g = 1/2 exactly; weights renormalized by the (single) max.
        expected = math.exp(cfg.alpha * 0.5 / (len(cfg.candidate_set) * p))
        others = np.delete(exp3.weights, idx)
        np.testing.assert_allclose(others * expected, 1.0, rtol=1e-14)
        assert exp3.weights[idx] == 1.0  # updated weight is the max

    def test_clamped_gain_multiplier_hand_value(self):
        cfg = AucbTpConfig(horizon=10**4, block_len=100,
                           candidate_set=(0.125, 0.0625, 0.03125), alpha=0.5)
        exp3 = Exp3State(weights=np.ones(3),
                         last_selected=0,
                         last_probabilities=np.array([1 / 3, 1 / 3, 1 / 3]))
        exp3_update(exp3, 0.125, 1e12, cfg)  # forces g to clamp at 1
        # multiplier exp(0.5 * 1 / (3 * 1/3)) = exp(0.5)
        ratio = exp3.weights[0] / exp3.weights[1]
        assert ratio == pytest.approx(math.exp(0.5), rel=1e-12)
        assert ratio == pytest.approx(1.64872, abs=1e-5)

    def test_gain_normalizer_hand_value(self):
        cfg = AucbTpConfig(horizon=10**4, block_len=100, reward_norm_C=93.0)
        log_t = math.log(10**4)
        denom = 2 * 93 * 100 * log_t + 4 * math.sqrt(100 * log_t)
        assert denom == pytest.approx(171_312.2 + 121.39, abs=0.5)
        gain_shift = 100.0 / denom
        assert gain_shift == pytest.approx(5.833e-4, abs=5e-7)
        exp3 = Exp3State.fresh(len(cfg.candidate_set))
        beta = exp3_select(exp3, cfg, np.random.default_rng(2))
        idx = exp3.last_selected
        p = exp3.last_probabilities[idx]
        exp3_update(exp3, beta, 100.0, cfg)
        implied = (0.5 + gain_shift) * cfg.alpha / (len(cfg.candidate_set) * p)
        others = np.delete(exp3.weights, idx)
        np.testing.assert_allclose(others * math.exp(implied), 1.0, rtol=1e-12)

    def test_update_requires_selected_base(self):
        cfg = AucbTpConfig(horizon=10**4, block_len=100)
        exp3 = Exp3State.fresh(len(cfg.candidate_set))
        exp3_select(exp3, cfg, np.random.default_rng(3))
        wrong = cfg.candidate_set[(exp3.last_selected + 1) % len(cfg.candidate_set)]
        with pytest.raises(ValueError):
            exp3_update(exp3, wrong, 0.0, cfg)

    @given(st.lists(st.floats(1e-6, 1e6), min_size=2, max_size=12),
           st.floats(0.01, 1.0))
    def test_renormalization_preserves_argmax_and_ratios(self, weights, alpha):
        w = np.array(weights)
        exp3_a = Exp3State(weights=w.copy())
        exp3_b = Exp3State(weights=w / w.max())
        pa = exp3_a.probabilities(alpha)
        pb = exp3_b.probabilities(alpha)
        assert int(np.argmax(pa)) == int(np.argmax(pb))
        np.testing.assert_allclose(pa, pb, rtol=1e-12)

    @given(st.integers(0, 2**31), st.integers(1, 30))
    def test_simplex_and_floor_across_updates(self, seed, blocks):
        cfg = AucbTpConfig(horizon=10**4, block_len=100, reward_norm_C=0.01)
        rng = np.random.default_rng(seed)
        exp3 = Exp3State.fresh(len(cfg.candidate_set))
        floor = cfg.alpha / len(cfg.candidate_set)
        for _ in range(blocks):
            beta = exp3_select(exp3, cfg, rng)
            probs = exp3.last_probabilities
            assert probs.sum() == pytest.approx(1.0, abs=1e-12)
            assert np.all(probs >= floor)
            exp3_update(exp3, beta, float(rng.normal(0, 100)), cfg)
            assert np.all(exp3.weights > 0)
            assert exp3.weights.max() == 1.0


class TestBlockStep:
    def test_index_matches_known_rate_policy_when_h_equals_t(self):
        horizon = 4096
        acfg = AucbTpConfig(horizon=horizon, block_len=horizon)
        beta = 2.0**-4
        ucfg = UcbTpConfig(horizon=horizon, rho_known=beta)
        a_state = UcbTpState(current_arm=0)
        u_state = UcbTpState(current_arm=0)
        rng = np.random.default_rng(9)
        for _ in range(10):
            r = float(rng.normal(0.5, 1.0))
            a_state.add_reward(r, beta)
            u_state.add_reward(r, beta)
            assert aucbtp_index(a_state, beta, acfg) == ucbtp_index(u_state, ucfg)

    def test_threshold_is_cube_root(self):
        # beta = 1/8 gives threshold 1 - (1/8)^(1/3) = 0.5 exactly.
        cfg = AucbTpConfig(horizon=10**4, block_len=64)
        beta = 2.0**-3
        radius = math.sqrt(10 * math.log(64))
        # After one pull, index = r - beta + radius; straddle 0.5 with r.
        state = UcbTpState(current_arm=0)
        assert aucbtp_block_step(state, beta, cfg, obs(0.51 + beta - radius)) \
            is PULL_CURRENT
        state = UcbTpState(current_arm=0)
        assert aucbtp_block_step(state, beta, cfg, obs(0.49 + beta - radius)) \
            is PULL_FRESH


class TestConfig:
    def test_default_block_len_is_sqrt_t(self):
        assert AucbTpConfig(horizon=10**6).block_len == 1000
        assert AucbTpConfig(horizon=10**4).block_len == 100
        assert AucbTpConfig(horizon=17).block_len == 5

    def test_tiny_horizon_rejected_with_default_block(self):
        with pytest.raises(ConfigurationError):
            AucbTpConfig(horizon=9)  # H = 3 < 4

    def test_tiny_horizon_allowed_with_explicit_block(self):
        cfg = AucbTpConfig(horizon=1, block_len=4)
        assert cfg.num_blocks == 1

    def test_alpha_default_formula(self):
        cfg = AucbTpConfig(horizon=10**4, block_len=100)
        b = len(cfg.candidate_set)
        expected = min(1.0, math.sqrt(b * math.log(b) / ((math.e - 1) * 100)))
        assert cfg.alpha == pytest.approx(expected, rel=1e-15)

    def test_invalid_values(self):
        with pytest.raises(ConfigurationError):
            AucbTpConfig(horizon=100, block_len=3)
        with pytest.raises(ConfigurationError):
            AucbTpConfig(horizon=100, block_len=16, alpha=0.0)
        with pytest.raises(ConfigurationError):
            AucbTpConfig(horizon=100, block_len=16, reward_norm_C=0.0)
