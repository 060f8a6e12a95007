import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvep_speller.dsp import AveragedResponse, average_repetitions, circular_shift_samples
from cvep_speller.exceptions import (
    EmptyInputError,
    LagCollisionError,
    PositionOutOfRangeError,
    ShapeMismatchError,
    ZeroVarianceError,
)
from cvep_speller.lagdec import (
    AbsoluteTemplate,
    build_calibration_template,
    decode_absolute,
    estimate_relative_lag,
    lag_scores,
    promote_to_absolute,
)
from cvep_speller.synth import SynthConfig, render_template, synth_epoch
from oracles import naive_lag_scores

L, S = 32, 8


@pytest.fixture(scope="module")
def templates():
    cfg = SynthConfig()
    return [render_template(cfg, p) for p in range(L)]


def test_identity(templates):
    est = estimate_relative_lag(templates[3], templates[3], L, S)
    assert est.lag == 0
    assert est.best_score == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("l", [0, 1, 7, 31])
def test_forced_by_sign_convention(templates, l):
    est = estimate_relative_lag(templates[0], circular_shift_samples(templates[0], l * S), L, S)
    assert est.lag == l
    assert est.best_score == pytest.approx(1.0, abs=1e-12)


def test_positions_4_and_11(templates):
    est = estimate_relative_lag(templates[4], templates[11], L, S)
    oracle = naive_lag_scores(templates[4].data.tolist(), templates[11].data.tolist(), L, S)
    assert est.lag == int(np.argmax(oracle)) == 7


def test_round_trip_all_pairs(templates):
    for p1 in range(L):
        for p2 in range(L):
            est = estimate_relative_lag(templates[p1], templates[p2], L, S)
            assert est.lag == (p2 - p1) % L
            assert abs(est.best_score - 1.0) <= 1e-9


def test_wrapped_pair_needs_signed_offset(templates):
    # position 31 sits one code bit before position 0, not two
    unsigned = lag_scores(templates[31], templates[0], L, S, signed=False)
    assert unsigned.max() < 0.99
    assert estimate_relative_lag(templates[31], templates[0], L, S).lag == 1


def test_scores_match_naive_oracle(rng):
    cfg = SynthConfig(noise_sigma=3.0, rng_seed=11, channels=2)
    for trial in range(10):
        p1, p2 = rng.integers(0, L, 2)
        a = average_repetitions(synth_epoch(cfg, int(p1), 2, trial))
        b = average_repetitions(synth_epoch(cfg, int(p2), 2, trial + 1000))
        got = estimate_relative_lag(a, b, L, S).scores
        want = naive_lag_scores(a.data.tolist(), b.data.tolist(), L, S)
        assert np.max(np.abs(got - np.array(want))) < 1e-12
        got_abs = lag_scores(a, b, L, S, signed=False)
        want_abs = naive_lag_scores(a.data.tolist(), b.data.tolist(), L, S, signed=False)
        assert np.max(np.abs(got_abs - np.array(want_abs))) < 1e-12


def test_estimate_invariants(rng):
    a, b = (AveragedResponse(rng.standard_normal((1, 252))) for _ in range(2))
    est = estimate_relative_lag(a, b, L, S)
    assert est.scores.shape == (L,)
    assert est.best_score == est.scores[est.lag] == est.scores.max()
    assert np.all(np.abs(est.scores) <= 1)


def test_tie_breaks_to_smallest_lag():
    # 16-sample period, period-8 content: lags 1 and 5 align equally well
    base = np.array([0.0, 3.0, 1.0, -2.0, 5.0, 0.5, -1.0, 2.0])
    ref = AveragedResponse(np.tile(base, 2))
    new = circular_shift_samples(ref, 2)
    est = estimate_relative_lag(ref, new, 8, 2)
    assert est.scores[1] == est.scores[5] == est.best_score
    assert est.lag == 1


@settings(max_examples=30, deadline=None)
@given(
    st.integers(0, L - 1),
    st.integers(0, L - 1),
    st.floats(0.01, 100),
    st.floats(-50, 50),
    st.floats(0.01, 100),
    st.floats(-50, 50),
)
def test_gain_offset_invariance(p1, p2, a, b, c, d):
    cfg = SynthConfig(noise_sigma=0.5, rng_seed=1)
    x1 = average_repetitions(synth_epoch(cfg, p1, 1, 1)).data
    x2 = average_repetitions(synth_epoch(cfg, p2, 1, 2)).data
    base = estimate_relative_lag(AveragedResponse(x1), AveragedResponse(x2), L, S).lag
    moved = estimate_relative_lag(AveragedResponse(a * x1 + b), AveragedResponse(c * x2 + d), L, S).lag
    assert base == moved


def test_errors(templates):
    with pytest.raises(ShapeMismatchError):
        estimate_relative_lag(templates[0], AveragedResponse(np.ones((1, 10))), L, S)
    with pytest.raises(ZeroVarianceError):
        estimate_relative_lag(templates[0], AveragedResponse(np.ones((1, 252))), L, S)
    with pytest.raises(LagCollisionError):
        estimate_relative_lag(templates[0], templates[1], 64, 4)


class TestCalibration:
    def test_single_response_at_zero(self, templates):
        t = build_calibration_template([(templates[5], 0)], S)
        assert t.data == templates[5]
        assert t.source_count == 1

    def test_three_noiseless_positions(self, templates):
        t = build_calibration_template([(templates[p], p) for p in (2, 5, 9)], S)
        assert t.data == templates[0]
        assert t.source_count == 3

    def test_noisy_residual_law(self, templates):
        sigma, n = 2.0, 4
        cfg = SynthConfig(noise_sigma=sigma, rng_seed=21)
        resid = []
        for trial in range(300):
            pairs = [(average_repetitions(synth_epoch(cfg, p, n, trial)), p) for p in (2, 5, 9)]
            resid.append(build_calibration_template(pairs, S).data.data - templates[0].data)
        assert np.std(resid) == pytest.approx(sigma / np.sqrt(3 * n), rel=0.15)

    def test_errors(self, templates):
        with pytest.raises(EmptyInputError):
            build_calibration_template([], S)
        with pytest.raises(ShapeMismatchError):
            build_calibration_template([(templates[0], 0), (AveragedResponse(np.ones((1, 5))), 1)], S)


class TestAbsolute:
    def test_template_itself(self, templates):
        t = AbsoluteTemplate(templates[0])
        assert decode_absolute(t, t.data, L, S).lag == 0

    def test_position_13(self, templates):
        assert decode_absolute(AbsoluteTemplate(templates[0]), templates[13], L, S).lag == 13

    def test_all_positions(self, templates):
        t = AbsoluteTemplate(templates[0])
        assert [decode_absolute(t, x, L, S).lag for x in templates] == list(range(L))

    @pytest.mark.slow
    def test_accuracy_increases_with_repetitions(self, templates):
        # sigma = 24 puts single-repetition accuracy near 0.7
        cfg = SynthConfig(noise_sigma=24.0, rng_seed=7)
        t = AbsoluteTemplate(templates[0])
        acc = []
        for n in (1, 2, 4, 8):
            hits = sum(
                decode_absolute(t, average_repetitions(synth_epoch(cfg, k % L, n, k)), L, S).lag == k % L
                for k in range(500)
            )
            acc.append(hits / 500)
        assert 0.6 <= acc[0] <= 0.8
        assert acc[0] < acc[1] < acc[2] <= acc[3]


class TestPromote:
    def test_position_zero(self, templates):
        assert promote_to_absolute(templates[7], 0, S).data == templates[7]

    @pytest.mark.parametrize("p", [0, 9, 20, 31])
    def test_promote_rebases_exactly(self, templates, p):
        assert promote_to_absolute(templates[p], p, S, L).data == templates[0]

    def test_promote_then_decode_grid(self, templates):
        for p in (0, 7, 19, 31):
            t = promote_to_absolute(templates[p], p, S, L)
            for q in (0, 3, 16, 30):
                assert decode_absolute(t, templates[q], L, S).lag == q

    def test_out_of_range(self, templates):
        with pytest.raises(PositionOutOfRangeError):
            promote_to_absolute(templates[0], 32, S, L)
        with pytest.raises(PositionOutOfRangeError):
            promote_to_absolute(templates[0], -1, S)
