"""Magnitude spectrograms over non-overlapping ~93 ms slices.

Signals are cut into consecutive window_size-sample slices (the last one
zero-padded), each slice is Hann-windowed and transformed with a real
FFT, and only the magnitudes are kept. Comparisons elsewhere are
restricted to the band [f_min, f_max], canonically 27.5 Hz up to the
Nyquist frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .audio_io import AudioBuffer

__all__ = [
    "ConfigMismatch",
    "InvalidSize",
    "LengthMismatch",
    "SpectralConfig",
    "Spectrogram",
    "fft_magnitude",
    "hann_window",
    "spectrogram",
]


class InvalidSize(ValueError):
    """Window size too small to define a Hann window."""


class LengthMismatch(ValueError):
    """Frame and window lengths disagree."""


class ConfigMismatch(ValueError):
    """Buffer does not match the spectral configuration."""


@dataclass(frozen=True)
class SpectralConfig:
    """FFT slicing parameters; defaults give 4096/44100 = 92.9 ms slices."""

    window_size: int = 4096
    sample_rate: int = 44100
    f_min: float = 27.5
    f_max: float = 22050.0

    def __post_init__(self):
        n = self.window_size
        if n < 2 or n & (n - 1):
            raise InvalidSize(f"window_size must be a power of two >= 2, got {n}")
        if not (0.0 < self.f_min < self.f_max <= self.sample_rate / 2.0):
            raise ValueError(
                f"need 0 < f_min < f_max <= Nyquist, got "
                f"[{self.f_min}, {self.f_max}] at {self.sample_rate} Hz"
            )

    @property
    def slice_duration(self) -> float:
        return self.window_size / self.sample_rate

    def band_bins(self) -> tuple[int, int]:
        """Inclusive bin index range covering [f_min, f_max]."""
        first = math.ceil(self.f_min * self.window_size / self.sample_rate)
        last = math.floor(self.f_max * self.window_size / self.sample_rate)
        return first, min(last, self.window_size // 2)


@dataclass(frozen=True)
class Spectrogram:
    """Per-slice one-sided magnitude spectra.

    frames has shape (n_frames, window_size // 2 + 1); band is the
    inclusive (first_bin, last_bin) range used for comparisons.
    """

    frames: np.ndarray
    bin_frequencies: np.ndarray
    band: tuple[int, int]

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def n_band_bins(self) -> int:
        return self.band[1] - self.band[0] + 1

    def band_frames(self) -> np.ndarray:
        """View of the frames restricted to the comparison band."""
        return self.frames[:, self.band[0] : self.band[1] + 1]


def hann_window(n: int) -> np.ndarray:
    """Symmetric Hann weights w(i) = 0.5 * (1 - cos(2*pi*i / (n-1)))."""
    if n < 2:
        raise InvalidSize(f"window size must be >= 2, got {n}")
    i = np.arange(n)
    return 0.5 * (1.0 - np.cos(2.0 * np.pi * i / (n - 1)))


def fft_magnitude(frame: np.ndarray, window: np.ndarray | None = None) -> np.ndarray:
    """One-sided FFT magnitudes of a windowed frame (len(frame)//2 + 1 bins).

    window defaults to the Hann window of the frame's length; passing an
    explicit window (e.g. all ones) bypasses it for kernel validation.
    """
    frame = np.asarray(frame)
    if window is None:
        window = hann_window(len(frame))
    elif len(window) != len(frame):
        raise LengthMismatch(f"frame length {len(frame)} != window length {len(window)}")
    return np.abs(np.fft.rfft(frame * window))


def spectrogram(buffer: AudioBuffer, config: SpectralConfig) -> Spectrogram:
    """Slice a buffer into ceil(len/N) non-overlapping frames and transform each.

    The final partial slice is zero-padded to the window size so tail
    energy still contributes.
    """
    if buffer.sample_rate != config.sample_rate:
        raise ConfigMismatch(
            f"buffer at {buffer.sample_rate} Hz, config expects {config.sample_rate} Hz"
        )
    if len(buffer) == 0:
        raise ConfigMismatch("cannot analyze an empty buffer")

    n = config.window_size
    n_frames = -(-len(buffer) // n)
    padded = np.zeros(n_frames * n)
    padded[: len(buffer)] = buffer.samples
    frames = padded.reshape(n_frames, n) * hann_window(n)
    magnitudes = np.abs(np.fft.rfft(frames, axis=1))

    return Spectrogram(
        frames=magnitudes,
        bin_frequencies=np.arange(n // 2 + 1) * (config.sample_rate / n),
        band=config.band_bins(),
    )
