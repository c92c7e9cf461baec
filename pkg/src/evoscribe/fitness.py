"""Spectral-ratio cost between a candidate pitch set and a target segment.

A candidate chromosome is synthesized with the segment's duration, turned
into a magnitude spectrogram, and compared to the target spectrogram bin
by bin: each in-band (time, frequency) cell contributes the ratio of the
louder magnitude to the quieter one, so every cell costs at least 1 and
the total is minimized (at exactly n_frames * n_band_bins) when the two
spectrograms agree everywhere. Magnitudes are floored at a small epsilon
before dividing; otherwise silent bins would produce infinities.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np

from .audio_io import AudioBuffer, quantize16
from .spectral import SpectralConfig, Spectrogram, spectrogram
from .synthesis import ChordSpec, SynthParams, synthesize_chord

__all__ = [
    "FitnessContext",
    "ShapeMismatch",
    "chromosome_cost",
    "cost_floor",
    "exhaustive_best",
    "make_context",
    "spectral_cost",
]


class ShapeMismatch(ValueError):
    """Spectrograms do not share frame count, bin count, and band."""


@dataclass(frozen=True)
class FitnessContext:
    """Everything needed to score a chromosome against one segment.

    quantize makes every candidate pass through the 16-bit capture grid
    before analysis. Required when the target was loaded from a WAV file:
    its quantization noise floor sits orders of magnitude above synthesis
    leakage, and comparing it against unquantized candidates lets the
    noise-floor mismatch in thousands of silent bins outvote the pitch
    content. Leave it off for targets synthesized in memory.
    """

    target: Spectrogram
    spectral_config: SpectralConfig
    synth_params: SynthParams
    segment_duration: float
    epsilon: float = 1e-9
    quantize: bool = False

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.segment_duration <= 0:
            raise ValueError(f"segment_duration must be positive, got {self.segment_duration}")


def make_context(
    segment: AudioBuffer,
    spectral_config: SpectralConfig,
    synth_params: SynthParams,
    epsilon: float = 1e-9,
    quantize: bool = False,
) -> FitnessContext:
    """Build a FitnessContext from a target segment's audio."""
    return FitnessContext(
        target=spectrogram(segment, spectral_config),
        spectral_config=spectral_config,
        synth_params=synth_params,
        segment_duration=segment.duration_seconds,
        epsilon=epsilon,
        quantize=quantize,
    )


def cost_floor(ctx: FitnessContext) -> float:
    """Lower bound of the cost: one per in-band cell, reached only at equality."""
    return float(ctx.target.n_frames * ctx.target.n_band_bins)


def spectral_cost(candidate: Spectrogram, target: Spectrogram, epsilon: float = 1e-9) -> float:
    """Sum over in-band cells of max(X', O') / min(X', O').

    X' and O' are the candidate and target magnitudes floored at epsilon.
    Symmetric in its arguments, and >= n_frames * n_band_bins.
    """
    if candidate.frames.shape != target.frames.shape or candidate.band != target.band:
        raise ShapeMismatch(
            f"candidate {candidate.frames.shape} band {candidate.band} vs "
            f"target {target.frames.shape} band {target.band}"
        )
    x = np.maximum(candidate.band_frames(), epsilon)
    o = np.maximum(target.band_frames(), epsilon)
    return float((np.maximum(x, o) / np.minimum(x, o)).sum())


def chromosome_cost(genes, ctx: FitnessContext) -> float:
    """Synthesize the pitch genes over the segment duration and score them."""
    spec = ChordSpec(pitches=genes, duration=ctx.segment_duration)
    rendered = synthesize_chord(spec, ctx.synth_params, ctx.spectral_config.sample_rate)
    if ctx.quantize:
        rendered = AudioBuffer(
            samples=quantize16(rendered.samples), sample_rate=rendered.sample_rate
        )
    return spectral_cost(spectrogram(rendered, ctx.spectral_config), ctx.target, ctx.epsilon)


def exhaustive_best(
    ctx: FitnessContext, low: int, high: int, n_notes: int
) -> tuple[tuple[int, ...], float, float]:
    """Brute-force the cost over all non-decreasing integer pitch tuples.

    Enumerates every non-decreasing n_notes-tuple in [low, high] (order
    is irrelevant to the cost, so one representative per pitch multiset)
    and returns (best_tuple, best_cost, runner_up_cost). A strict gap
    between the two costs certifies a unique optimum. This is the
    independent check that the cost landscape actually bottoms out at the
    pitches a target was built from.
    """
    if not (low <= high):
        raise ValueError(f"empty pitch range [{low}, {high}]")
    best: tuple[int, ...] | None = None
    best_cost = np.inf
    runner_up = np.inf
    for candidate in combinations_with_replacement(range(low, high + 1), n_notes):
        cost = chromosome_cost(candidate, ctx)
        if cost < best_cost:
            best, best_cost, runner_up = candidate, cost, best_cost
        elif cost < runner_up:
            runner_up = cost
    assert best is not None
    return best, float(best_cost), float(runner_up)
