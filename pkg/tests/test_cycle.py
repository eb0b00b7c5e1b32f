import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geikit.cycle import (
    GaitCycle,
    PeriodEstimate,
    autocorrelation,
    estimate_period,
    gait_signal,
    segment_cycles,
)
from geikit.dataset import SynthWalkerSpec, generate_walker
from geikit.errors import NoPeriodDetected, SequenceTooShort, SignalTooShort
from geikit.gei import NoiseParams, inject_noise_sequence
from geikit.pipeline import normalize_sequence


def brute_force_acf(signal, lag):
    x = [float(v) for v in signal]
    mean = sum(x) / len(x)
    x = [v - mean for v in x]
    energy = sum(v * v for v in x)
    return sum(x[t] * x[t + lag] for t in range(len(x) - lag)) / energy


def brute_force_period(signal, lo, hi):
    scores = {lag: brute_force_acf(signal, lag) for lag in range(lo, hi + 1)}
    best = max(scores.values())
    return min(lag for lag, v in scores.items() if v == best), best


def test_autocorrelation_matches_brute_force(rng):
    signal = rng.normal(size=97)
    acf = autocorrelation(signal, 30)
    expected = [brute_force_acf(signal, k) for k in range(31)]
    np.testing.assert_allclose(acf, expected, rtol=0, atol=1e-12)
    assert acf[0] == pytest.approx(1.0)


def test_cosine_period_20():
    signal = np.cos(2 * np.pi * np.arange(120) / 20)
    est = estimate_period(signal, 5, 40)
    oracle_period, oracle_peak = brute_force_period(signal, 5, 40)
    assert est.period == oracle_period == 20
    assert est.confidence == pytest.approx(oracle_peak, abs=1e-12)


def test_square_wave_period_10():
    signal = np.where(np.arange(100) % 10 < 5, 1.0, -1.0)
    est = estimate_period(signal, 5, 40)
    assert est.period == brute_force_period(signal, 5, 40)[0] == 10


def test_constant_signal_has_no_period():
    with pytest.raises(NoPeriodDetected):
        estimate_period(np.full(100, 7.0), 5, 40)
    with pytest.raises(NoPeriodDetected):
        estimate_period(np.full(100, 0.1), 5, 40)


def test_white_noise_has_no_period(rng):
    with pytest.raises(NoPeriodDetected):
        estimate_period(rng.normal(size=400), 5, 40)


def test_short_signal_raises():
    with pytest.raises(SignalTooShort):
        estimate_period(np.arange(79.0), 5, 40)


@pytest.mark.parametrize("lo, hi", [(1, 10), (10, 10), (8, 5)])
def test_bad_lag_window(lo, hi):
    with pytest.raises(ValueError):
        estimate_period(np.arange(100.0), lo, hi)


def test_period_estimate_invariants():
    with pytest.raises(ValueError):
        PeriodEstimate(1, 0.5)
    with pytest.raises(ValueError):
        PeriodEstimate(5, 1.5)


def _frames_with_lower_counts(counts, h=8, w=10):
    frames = np.zeros((len(counts), h, w), dtype=np.uint8)
    for t, c in enumerate(counts):
        frames[t, 0, :] = 1  # upper half content is ignored
        frames[t, h // 2 :, :].flat[:c] = 1
    return frames


def test_gait_signal_identical_frames_is_zero():
    frames = _frames_with_lower_counts([13] * 6)
    np.testing.assert_array_equal(gait_signal(frames), np.zeros(6))


def test_gait_signal_alternating():
    frames = _frames_with_lower_counts([10, 20, 10, 20])
    np.testing.assert_array_equal(gait_signal(frames), [-5, 5, -5, 5])


def test_gait_signal_of_walker_has_stride_period():
    seq = generate_walker(SynthWalkerSpec(stride_period=20, frame_count=60))
    signal = gait_signal(normalize_sequence(seq).frames)
    assert brute_force_period(signal, 5, 30)[0] == 20
    assert estimate_period(signal, 5, 30).period == 20


@settings(max_examples=50, deadline=None)
@given(
    pattern=st.lists(st.integers(0, 50), min_size=6, max_size=15).filter(lambda p: len(set(p)) > 2),
    shift=st.integers(-1000, 1000),
)
def test_period_invariant_to_constant_offset(pattern, shift):
    signal = np.array(pattern * 6, dtype=np.float64)
    lo, hi = 3, len(pattern) * 3
    try:
        base = estimate_period(signal, lo, hi)
    except NoPeriodDetected:
        with pytest.raises(NoPeriodDetected):
            estimate_period(signal + shift, lo, hi)
        return
    assert estimate_period(signal + shift, lo, hi).period == base.period


@pytest.mark.parametrize("period", [8, 12, 20, 30])
def test_walker_period_exact_and_under_noise(period):
    for seed in range(3):
        spec = SynthWalkerSpec(stride_period=period, frame_count=90, seed=seed)
        frames = normalize_sequence(generate_walker(spec).frames)
        assert estimate_period(gait_signal(frames), 4, 40).period == period
        noisy = inject_noise_sequence(frames, NoiseParams(0.05, seed))
        assert abs(estimate_period(gait_signal(noisy), 4, 40).period - period) <= 1


def test_segment_counts():
    frames = np.zeros((45, 4, 4), dtype=np.uint8)
    cycles = segment_cycles(frames, 20)
    assert len(cycles) == 2
    assert sum(c.length for c in cycles) == 40
    assert len(segment_cycles(frames[:20], PeriodEstimate(20, 0.9))) == 1
    with pytest.raises(SequenceTooShort):
        segment_cycles(frames[:19], 20)


def test_segment_starts_at_signal_minimum_within_slack():
    counts = [5, 4, 1, 3, 6, 7] * 4 + [0, 0]  # 26 frames, period 6, slack 2
    frames = _frames_with_lower_counts(counts)
    cycles = segment_cycles(frames, 6)
    assert len(cycles) == 4
    assert cycles[0].start_frame == 2
    assert [c.start_frame for c in cycles] == [2, 8, 14, 20]


@settings(max_examples=50, deadline=None)
@given(total=st.integers(2, 80), period=st.integers(2, 20), seed=st.integers(0, 2**16))
def test_segments_are_disjoint_ordered_and_full(total, period, seed):
    frames = np.random.default_rng(seed).integers(0, 2, size=(total, 4, 3), dtype=np.uint8)
    if total < period:
        with pytest.raises(SequenceTooShort):
            segment_cycles(frames, period)
        return
    cycles = segment_cycles(frames, period)
    assert len(cycles) == total // period
    for prev, cur in zip(cycles, cycles[1:]):
        assert cur.start_frame == prev.start_frame + period
    for c in cycles:
        assert c.length == period
        np.testing.assert_array_equal(c.frames, frames[c.start_frame : c.start_frame + period])
    assert cycles[-1].start_frame + period <= total


def test_gait_cycle_requires_two_frames():
    with pytest.raises(ValueError):
        GaitCycle(0, np.zeros((1, 3, 3), dtype=np.uint8))
