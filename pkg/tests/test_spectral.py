"""Windowing, FFT magnitudes, framing, and band arithmetic."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evoscribe import AudioBuffer, SpectralConfig, fft_magnitude, hann_window, spectrogram
from evoscribe.spectral import ConfigMismatch, InvalidSize, LengthMismatch

from conftest import SAMPLE_RATE, sine_buffer


def test_hann_endpoints_and_small_case():
    w = hann_window(4)
    np.testing.assert_allclose(w, [0.0, 0.75, 0.75, 0.0], atol=1e-15)
    assert hann_window(64)[0] == 0.0
    assert hann_window(64)[-1] == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("n", [2, 5, 64, 4096])
def test_hann_symmetry(n):
    w = hann_window(n)
    np.testing.assert_allclose(w, w[::-1], atol=1e-12)
    assert np.max(w) <= 1.0
    assert np.argmax(w) in ((n - 1) // 2, n // 2)


def test_hann_needs_two_points():
    with pytest.raises(InvalidSize):
        hann_window(1)


def test_fft_bin_center_sine_peaks_at_its_bin():
    n, sr = 4096, SAMPLE_RATE
    bin_index = 200
    freq = bin_index * sr / n
    frame = np.sin(2 * np.pi * freq * np.arange(n) / sr)
    mags = fft_magnitude(frame)
    assert len(mags) == n // 2 + 1
    assert np.argmax(mags) == bin_index


def test_fft_zero_input_zero_output():
    mags = fft_magnitude(np.zeros(4096))
    assert mags.shape == (2049,)
    assert np.all(mags == 0.0)


def test_parseval_with_rectangular_window():
    rng = np.random.default_rng(11)
    frame = rng.standard_normal(4096)
    mags = fft_magnitude(frame, window=np.ones(4096))
    # rfft halves: double the shared bins (all but DC and Nyquist)
    spectrum_energy = mags[0] ** 2 + mags[-1] ** 2 + 2 * np.sum(mags[1:-1] ** 2)
    time_energy = np.sum(frame**2) * len(frame)
    assert spectrum_energy == pytest.approx(time_energy, rel=1e-6)


def test_fft_rejects_length_mismatch():
    with pytest.raises(LengthMismatch):
        fft_magnitude(np.zeros(128), window=np.ones(64))


def test_band_bins_canonical():
    cfg = SpectralConfig()
    assert cfg.band_bins() == (3, 2048)
    assert cfg.slice_duration == pytest.approx(4096 / 44100)


def test_band_bins_edges():
    # f_max at exactly Nyquist keeps the last rfft bin
    assert SpectralConfig(f_max=22050.0).band_bins()[1] == 2048
    assert SpectralConfig(f_min=27.5).band_bins()[0] == 3
    # one full bin higher
    cfg = SpectralConfig(f_min=2 * 44100 / 4096 + 0.01)
    assert cfg.band_bins()[0] == 3


def test_config_validation():
    with pytest.raises(InvalidSize):
        SpectralConfig(window_size=1000)  # not a power of two
    with pytest.raises(ValueError):
        SpectralConfig(f_min=0.0)
    with pytest.raises(ValueError):
        SpectralConfig(f_min=300.0, f_max=200.0)
    with pytest.raises(ValueError):
        SpectralConfig(f_max=44100.0)  # beyond Nyquist


def test_one_second_gives_eleven_frames(c_major_buffer, spectral_config):
    gram = spectrogram(c_major_buffer, spectral_config)
    assert gram.n_frames == 11
    assert gram.frames.shape == (11, 2049)
    assert gram.n_band_bins == 2046
    assert gram.band_frames().shape == (11, 2046)


def test_frame_count_formula(spectral_config):
    for n_samples, expected in [(1, 1), (4096, 1), (4097, 2), (44100, 11)]:
        buf = AudioBuffer(samples=np.zeros(n_samples), sample_rate=SAMPLE_RATE)
        assert spectrogram(buf, spectral_config).n_frames == expected


def test_final_slice_zero_padded(spectral_config):
    rng = np.random.default_rng(3)
    samples = rng.standard_normal(5000)
    buf = AudioBuffer(samples=samples, sample_rate=SAMPLE_RATE)
    gram = spectrogram(buf, spectral_config)
    padded = np.zeros(8192)
    padded[:5000] = samples
    expected_last = fft_magnitude(padded[4096:])
    np.testing.assert_allclose(gram.frames[1], expected_last, atol=1e-12)


def test_first_frame_matches_direct_fft(spectral_config):
    buf = sine_buffer(440.0, duration=0.2)
    gram = spectrogram(buf, spectral_config)
    np.testing.assert_allclose(gram.frames[0], fft_magnitude(buf.samples[:4096]), atol=1e-12)


def test_spectrogram_rejects_rate_mismatch(spectral_config):
    buf = AudioBuffer(samples=np.zeros(100), sample_rate=48000)
    with pytest.raises(ConfigMismatch):
        spectrogram(buf, spectral_config)


def test_spectrogram_rejects_empty(spectral_config):
    with pytest.raises(ConfigMismatch):
        spectrogram(AudioBuffer(samples=np.zeros(0), sample_rate=SAMPLE_RATE), spectral_config)


def test_bin_frequencies(spectral_config):
    buf = sine_buffer(440.0, duration=0.1)
    gram = spectrogram(buf, spectral_config)
    np.testing.assert_allclose(gram.bin_frequencies, np.arange(2049) * 44100 / 4096)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=3 * 4096))
def test_frame_count_ceiling_property(n_samples):
    buf = AudioBuffer(samples=np.zeros(n_samples), sample_rate=SAMPLE_RATE)
    gram = spectrogram(buf, SpectralConfig())
    assert gram.n_frames == -(-n_samples // 4096)
