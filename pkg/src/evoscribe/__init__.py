"""Polyphonic chord transcription from WAV audio via self-adaptive evolution strategies.

The pipeline: split the signal at note onsets, then for each segment run
a (mu/rho + lambda) evolution strategy over real-valued pitch vectors,
scoring candidates by how closely their additively synthesized
magnitude spectrogram matches the segment's. Rounding the converged
genes yields integer MIDI pitches.
"""

from .audio_io import AudioBuffer, MalformedWav, UnsupportedFormat, quantize16, read_wav, write_wav
from .es_core import EsConfig, EvolutionTrace, GenerationRecord, Individual, evolve
from .fitness import FitnessContext, chromosome_cost, exhaustive_best, make_context, spectral_cost
from .segmentation import Segment, detect_onsets, segment, snap_to_grid
from .spectral import SpectralConfig, Spectrogram, fft_magnitude, hann_window, spectrogram
from .synthesis import (
    ChordSpec,
    SynthParams,
    parse_chord_spec,
    pitch_to_frequency,
    synthesize_chord,
    synthesize_sequence,
)
from .transcriber import (
    NoteEvent,
    TranscriptionResult,
    round_genes,
    transcribe,
    write_midi,
    write_report,
)

__version__ = "0.1.0"

__all__ = [
    "AudioBuffer",
    "ChordSpec",
    "EsConfig",
    "EvolutionTrace",
    "FitnessContext",
    "GenerationRecord",
    "Individual",
    "MalformedWav",
    "NoteEvent",
    "Segment",
    "SpectralConfig",
    "Spectrogram",
    "SynthParams",
    "TranscriptionResult",
    "UnsupportedFormat",
    "chromosome_cost",
    "detect_onsets",
    "evolve",
    "exhaustive_best",
    "fft_magnitude",
    "hann_window",
    "make_context",
    "parse_chord_spec",
    "pitch_to_frequency",
    "quantize16",
    "read_wav",
    "round_genes",
    "segment",
    "snap_to_grid",
    "spectral_cost",
    "spectrogram",
    "synthesize_chord",
    "synthesize_sequence",
    "transcribe",
    "write_midi",
    "write_report",
    "write_wav",
]
