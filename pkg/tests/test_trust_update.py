import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iotrust.trust_update import (
    AwmaParams,
    TrustState,
    awma_step,
    cwma_step,
    ewma_step,
    weighted_score,
)

scores = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)


class _UncheckedAwmaParams(AwmaParams):
    """Test fixture: bypasses the production range checks so the algebraic
    identity with the exponential average can be exercised at any weight."""

    def __post_init__(self) -> None:
        pass


class TestWeightedScore:
    def test_zero(self):
        assert weighted_score(0.0) == 0.0

    def test_hand_value(self):
        assert weighted_score(-1.0) == pytest.approx(-(1 - math.exp(-1)), abs=1e-12)

    def test_bounded_and_monotone(self):
        us = np.linspace(-50, 50, 1001)
        ws = [weighted_score(float(u)) for u in us]
        assert all(-1.0 <= w <= 1.0 for w in ws)
        assert all(b >= a for a, b in zip(ws, ws[1:]))
        # strictly increasing wherever the exponential has not saturated
        us = np.linspace(-30, 30, 601)
        ws = [weighted_score(float(u)) for u in us]
        assert all(b > a for a, b in zip(ws, ws[1:]))

    def test_limit_toward_one(self):
        assert weighted_score(40.0) == pytest.approx(1.0, abs=1e-12)

    @given(st.floats(min_value=-100, max_value=100, allow_nan=False))
    def test_odd_function(self, u):
        assert weighted_score(-u) == -weighted_score(u)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            weighted_score(float("nan"))


class TestCwma:
    def test_first_observation(self):
        state = cwma_step(TrustState(), 0.5)
        assert state.cwma_mean == 0.5 and state.cwma_count == 1

    def test_symmetric_pair_cancels(self):
        state = cwma_step(cwma_step(TrustState(), 1.0), -1.0)
        assert state.cwma_mean == pytest.approx(0.0)

    def test_constant_stream(self):
        state = TrustState()
        for _ in range(100):
            state = cwma_step(state, 0.3)
        assert state.cwma_mean == pytest.approx(0.3, abs=1e-12)
        assert state.cwma_count == 100

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            cwma_step(TrustState(), 1.5)


class TestEwma:
    def test_first_observation_initialises(self):
        assert ewma_step(TrustState(), 0.8, 0.3).ewma == 0.8

    def test_hand_value(self):
        state = ewma_step(TrustState(), 0.8, 0.5)
        assert ewma_step(state, -0.8, 0.5).ewma == pytest.approx(0.0)

    def test_geometric_convergence(self):
        alpha, target = 0.3, 0.6
        state = ewma_step(TrustState(), -1.0, alpha)
        steps = math.ceil(math.log(1e-6) / math.log(1 - alpha))
        for _ in range(steps + 5):
            state = ewma_step(state, target, alpha)
        assert state.ewma == pytest.approx(target, abs=1e-6)

    def test_rejects_bad_alpha(self):
        with pytest.raises(ValueError):
            ewma_step(TrustState(), 0.0, 1.0)


class TestAwmaParams:
    def test_defaults(self):
        p = AwmaParams()
        assert (p.reward, p.punish, p.redeem, p.retrogress) == (0.99, 0.999, 0.001, 0.001)
        assert p.threshold == 0.0

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"reward": 0.0},
            {"punish": 0.5},  # punishment must stay close to 1
            {"redeem": 0.5},  # redemption must stay close to 0
            {"retrogress": 1.0},
            {"threshold": 1.5},
        ],
    )
    def test_rejects_out_of_range(self, kwargs):
        with pytest.raises(ValueError):
            AwmaParams(**kwargs)


class TestAwma:
    def test_punishment_case_hand_value(self):
        state = TrustState(awma=0.8)
        got = awma_step(state, -0.5, AwmaParams()).awma
        assert got == pytest.approx(0.001 * 0.8 + 0.999 * -0.5, abs=1e-12)
        assert got == pytest.approx(-0.4987, abs=1e-4)

    def test_redemption_case_hand_value(self):
        state = TrustState(awma=-0.4)
        got = awma_step(state, 0.7, AwmaParams()).awma
        assert got == pytest.approx(-0.3989, abs=1e-4)

    def test_fixed_point(self):
        for prev in (-0.9, -0.1, 0.0, 0.4, 1.0):
            state = TrustState(awma=prev)
            assert awma_step(state, prev, AwmaParams()).awma == pytest.approx(prev, abs=1e-15)

    def test_first_observation_initialises(self):
        assert awma_step(TrustState(), -0.3, AwmaParams()).awma == -0.3

    def test_case_selection_exhaustive(self):
        # every (prev, score) pair lands in exactly one case; the boundary
        # score == threshold counts as anomalous
        params = AwmaParams(reward=0.9, punish=0.99, redeem=0.01, retrogress=0.05)
        for prev in (-0.5, 0.0, 0.5):
            for w in (-0.5, 0.0, 0.5):
                got = awma_step(TrustState(awma=prev), w, params).awma
                if prev > 0 and w > 0:
                    chi = params.reward
                elif prev > 0:
                    chi = params.punish
                elif w > 0:
                    chi = params.redeem
                else:
                    chi = params.retrogress
                assert got == pytest.approx((1 - chi) * prev + chi * w, abs=1e-15)

    def test_fast_punishment_slow_redemption(self):
        params = AwmaParams()
        punished = awma_step(TrustState(awma=0.9), -0.6, params).awma
        assert abs(punished - (-0.6)) <= (1 - params.punish) * abs(0.9 - (-0.6)) + 1e-12
        redeemed = awma_step(TrustState(awma=-0.6), 0.9, params).awma
        assert abs(redeemed - (-0.6)) <= params.redeem * abs(0.9 - (-0.6)) + 1e-12

    @given(scores, scores)
    @settings(max_examples=200)
    def test_stays_bounded(self, prev, w):
        got = awma_step(TrustState(awma=prev), w, AwmaParams()).awma
        assert -1.0 <= got <= 1.0

    def test_degenerates_to_ewma_when_weights_equal(self):
        # algebraic identity, checked bitwise over random streams; the
        # production parameter ranges forbid equal weights, hence the
        # unchecked fixture
        rng = np.random.default_rng(202)
        for alpha in (0.1, 0.3, 0.7):
            params = _UncheckedAwmaParams(alpha, alpha, alpha, alpha, 0.0)
            ewma_state = TrustState()
            awma_state = TrustState()
            for w in rng.uniform(-1, 1, size=2000):
                w = float(w)
                ewma_state = ewma_step(ewma_state, w, alpha)
                awma_state = awma_step(awma_state, w, params)
                assert awma_state.awma == ewma_state.ewma


class TestTrustState:
    def test_rejects_out_of_range_scores(self):
        with pytest.raises(ValueError):
            TrustState(cwma_mean=1.2)
        with pytest.raises(ValueError):
            TrustState(awma=-1.0001)
