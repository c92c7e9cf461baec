"""Onset detection, boundary partitioning, and grid snapping."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evoscribe import ChordSpec, SynthParams, detect_onsets, segment, snap_to_grid
from evoscribe.segmentation import InvalidBoundaries
from evoscribe.synthesis import synthesize_sequence

from conftest import SAMPLE_RATE, sine_buffer

PROGRESSION = [
    ChordSpec(pitches=(60, 64, 67), duration=1.0),
    ChordSpec(pitches=(55, 59, 62), duration=0.5),
    ChordSpec(pitches=(69, 76, 72), duration=0.5),
    ChordSpec(pitches=(64, 67, 71), duration=1.5),
    ChordSpec(pitches=(60, 64, 67), duration=1.0),
]


@pytest.fixture(scope="module")
def progression_buffer():
    return synthesize_sequence(PROGRESSION, SynthParams(), SAMPLE_RATE)


def test_stationary_tone_has_single_boundary(spectral_config):
    onsets = detect_onsets(sine_buffer(440.0, duration=1.0), spectral_config)
    assert onsets == [0.0]


def test_silence_has_single_boundary(spectral_config):
    from evoscribe import AudioBuffer

    buf = AudioBuffer(samples=np.zeros(SAMPLE_RATE), sample_rate=SAMPLE_RATE)
    assert detect_onsets(buf, spectral_config) == [0.0]


def test_progression_onsets_snap_to_truth(progression_buffer, spectral_config):
    onsets = detect_onsets(progression_buffer, spectral_config)
    snapped = snap_to_grid(onsets, 0.5)
    assert snapped == [0.0, 1.0, 1.5, 2.0, 3.5]


def test_onsets_land_on_frame_grid(progression_buffer, spectral_config):
    slice_dur = spectral_config.slice_duration
    for t in detect_onsets(progression_buffer, spectral_config):
        frames = t / slice_dur
        assert abs(frames - round(frames)) < 1e-6


def test_onset_times_within_one_slice_of_truth(progression_buffer, spectral_config):
    onsets = detect_onsets(progression_buffer, spectral_config)
    truth = [0.0, 1.0, 1.5, 2.0, 3.5]
    assert len(onsets) == len(truth)
    for got, want in zip(onsets, truth):
        assert abs(got - want) <= spectral_config.slice_duration


def test_segment_partitions_exactly(progression_buffer):
    segments = segment(progression_buffer, [0.0, 1.0, 1.5, 2.0, 3.5])
    assert len(segments) == 5
    assert [round(s.duration, 6) for s in segments] == [1.0, 0.5, 0.5, 1.5, 1.0]
    total = sum(len(s.samples) for s in segments)
    assert total == len(progression_buffer)
    rebuilt = np.concatenate([s.samples for s in segments])
    np.testing.assert_array_equal(rebuilt, progression_buffer.samples)
    assert [s.start for s in segments] == [0.0, 1.0, 1.5, 2.0, 3.5]


def test_segment_single_boundary_is_whole_signal(progression_buffer):
    (only,) = segment(progression_buffer, [0.0])
    assert len(only.samples) == len(progression_buffer)
    assert only.duration == pytest.approx(progression_buffer.duration_seconds)


def test_segment_rejects_bad_boundaries(progression_buffer):
    with pytest.raises(InvalidBoundaries):
        segment(progression_buffer, [])
    with pytest.raises(InvalidBoundaries):
        segment(progression_buffer, [0.5, 1.0])  # must start at zero
    with pytest.raises(InvalidBoundaries):
        segment(progression_buffer, [0.0, 2.0, 1.0])  # not increasing
    with pytest.raises(InvalidBoundaries):
        segment(progression_buffer, [0.0, 99.0])  # beyond the signal
    with pytest.raises(InvalidBoundaries):
        segment(progression_buffer, [0.0, 1.0, 1.0])  # duplicate


def test_snap_to_grid_rounds_half_up():
    assert snap_to_grid([0.0, 0.9287, 1.4929, 2.0432], 0.5) == [0.0, 1.0, 1.5, 2.0]
    assert snap_to_grid([0.0, 0.75], 0.5) == [0.0, 1.0]
    assert snap_to_grid([0.0, 0.7499], 0.5) == [0.0, 0.5]


def test_snap_to_grid_collapses_duplicates():
    assert snap_to_grid([0.0, 0.25, 0.26], 0.5) == [0.0, 0.5]
    assert snap_to_grid([0.0, 0.2], 0.5) == [0.0]


def test_snap_to_grid_validates():
    with pytest.raises(ValueError):
        snap_to_grid([0.0, 1.0], 0.0)


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.floats(min_value=0.0, max_value=30.0), min_size=1, max_size=8).map(sorted),
    st.sampled_from([0.25, 0.5, 1.0]),
)
def test_snap_to_grid_idempotent(times, grid):
    once = snap_to_grid(times, grid)
    assert snap_to_grid(once, grid) == once
    assert all(b >= a for a, b in zip(once, once[1:]))
    for t in once:
        assert (t / grid) == pytest.approx(round(t / grid), abs=1e-9)
