"""Additive synthesis of MIDI-like pitch sets into audio.

The same synthesizer manufactures target signals and realizes candidate
chromosomes during search, so a candidate that names the right pitches
reproduces the target spectrum exactly. Each note is a stack of sine
partials with 1/k amplitude rolloff; there is no envelope and no timbre
model. Pitches are real-valued MIDI numbers mapped to frequency by

    frequency(p) = 6.875 * 2 ** ((3 + p) / 12)

which puts pitch 69 at 440 Hz and pitch 21 (lowest piano key) at 27.5 Hz.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .audio_io import AudioBuffer

__all__ = [
    "ChordSpec",
    "InvalidSpec",
    "SynthParams",
    "parse_chord_spec",
    "pitch_to_frequency",
    "synthesize_chord",
    "synthesize_sequence",
]

PITCH_MIN = 21.0
PITCH_MAX = 108.0


class InvalidSpec(ValueError):
    """Chord specification violates its constraints."""


@dataclass(frozen=True)
class ChordSpec:
    """A set of simultaneous pitches held for a fixed duration.

    An empty pitch list is legal and synthesizes silence.
    """

    pitches: tuple
    duration: float

    def __init__(self, pitches: Sequence[float], duration: float):
        object.__setattr__(self, "pitches", tuple(float(p) for p in pitches))
        object.__setattr__(self, "duration", float(duration))
        if self.duration <= 0:
            raise InvalidSpec(f"duration must be positive, got {duration}")
        for p in self.pitches:
            if not (PITCH_MIN <= p <= PITCH_MAX):
                raise InvalidSpec(f"pitch {p} outside [{PITCH_MIN}, {PITCH_MAX}]")


@dataclass(frozen=True)
class SynthParams:
    """Synthesizer settings shared by target manufacture and candidate scoring.

    harmonic_count partials per note, partial k at amplitude 1/k; the mixed
    chord is peak-normalized to master_gain so per-segment level does not
    depend on how many notes sound at once.
    """

    harmonic_count: int = 4
    master_gain: float = 0.9

    def __post_init__(self):
        if self.harmonic_count < 1:
            raise InvalidSpec(f"harmonic_count must be >= 1, got {self.harmonic_count}")
        if not (0.0 < self.master_gain <= 1.0):
            raise InvalidSpec(f"master_gain must be in (0, 1], got {self.master_gain}")

    def partial_amplitudes(self) -> np.ndarray:
        return 1.0 / np.arange(1, self.harmonic_count + 1)


def pitch_to_frequency(pitch: float) -> float:
    """Frequency in Hz of a real-valued MIDI pitch number."""
    return 6.875 * 2.0 ** ((3.0 + pitch) / 12.0)


def synthesize_chord(spec: ChordSpec, params: SynthParams, sample_rate: int) -> AudioBuffer:
    """Render one chord to round(duration * sample_rate) samples.

    Notes are summed in sorted pitch order so permutations of the same
    pitch set produce bit-identical audio. Partials at or above the
    Nyquist frequency are dropped rather than aliased. The mix is scaled
    so its peak magnitude equals master_gain (silence stays silent).
    """
    n_samples = round(spec.duration * sample_rate)
    out = np.zeros(n_samples)
    nyquist = sample_rate / 2.0
    amplitudes = params.partial_amplitudes()

    for pitch in sorted(spec.pitches):
        f0 = pitch_to_frequency(pitch)
        base_phase = (2.0 * np.pi * f0 / sample_rate) * np.arange(n_samples)
        for k in range(1, params.harmonic_count + 1):
            if k * f0 >= nyquist:
                break
            out += amplitudes[k - 1] * np.sin(k * base_phase)

    peak = np.max(np.abs(out)) if n_samples else 0.0
    if peak > 0.0:
        out *= params.master_gain / peak
    return AudioBuffer(samples=out, sample_rate=sample_rate)


def synthesize_sequence(
    specs: Sequence[ChordSpec], params: SynthParams, sample_rate: int
) -> AudioBuffer:
    """Concatenate per-chord renders in order."""
    if not specs:
        raise InvalidSpec("empty chord sequence")
    parts = [synthesize_chord(spec, params, sample_rate).samples for spec in specs]
    return AudioBuffer(samples=np.concatenate(parts), sample_rate=sample_rate)


def parse_chord_spec(text: str) -> list[ChordSpec]:
    """Parse the chord-spec text format.

    One chord per line: duration in seconds followed by zero or more
    pitches, whitespace separated. Lines starting with '#' and blank
    lines are skipped.

        # C major then G major
        1.0 60 64 67
        0.5 67 71 74
    """
    chords = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split()
        try:
            duration = float(fields[0])
            pitches = [float(f) for f in fields[1:]]
        except ValueError as exc:
            raise InvalidSpec(f"line {lineno}: {exc}") from None
        try:
            chords.append(ChordSpec(pitches=pitches, duration=duration))
        except InvalidSpec as exc:
            raise InvalidSpec(f"line {lineno}: {exc}") from None
    if not chords:
        raise InvalidSpec("no chords found")
    return chords
