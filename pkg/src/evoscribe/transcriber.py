"""End-to-end transcription: segment, search per segment, round, emit.

Each segment gets its own evolution-strategy run against a fitness
context built from that segment's spectrogram. Runs are independent and
deterministically seeded from (master seed, segment index), so results do
not depend on how many worker processes execute them or in what order
they finish. Converged real-valued genes are rounded half-up to integer
MIDI pitches for the note events; the raw reals are kept alongside, since
manual inspection of near-misses needs them.
"""

from __future__ import annotations

import csv
import json
import struct
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .audio_io import AudioBuffer
from .es_core import EsConfig, EvolutionTrace, evolve
from .fitness import chromosome_cost, make_context
from .segmentation import Segment, detect_onsets, segment
from .spectral import SpectralConfig
from .synthesis import SynthParams

__all__ = [
    "EmptySignal",
    "NoteEvent",
    "TranscriptionResult",
    "round_genes",
    "transcribe",
    "write_midi",
    "write_report",
]

MIDI_MIN = 21
MIDI_MAX = 108

_PPQ = 480  # ticks per quarter note
_TEMPO_US = 500_000  # 120 BPM, so one second is 960 ticks
_TICKS_PER_SECOND = _PPQ * 1_000_000 // _TEMPO_US
_VELOCITY = 96


class EmptySignal(ValueError):
    """Input signal has no samples."""


@dataclass(frozen=True)
class NoteEvent:
    """Simultaneous integer pitches sounding over [start, start + duration)."""

    pitches: frozenset[int]
    start: float
    duration: float

    def __post_init__(self):
        if not self.pitches:
            raise ValueError("a note event needs at least one pitch")
        if any(not (MIDI_MIN <= p <= MIDI_MAX) for p in self.pitches):
            raise ValueError(f"pitches outside [{MIDI_MIN}, {MIDI_MAX}]: {sorted(self.pitches)}")
        if self.duration <= 0:
            raise ValueError(f"duration must be positive, got {self.duration}")


@dataclass
class TranscriptionResult:
    """Everything one transcription run produced."""

    events: list[NoteEvent]
    raw_genes: list[list[float]]
    traces: list[EvolutionTrace]
    best_costs: list[float]
    runtimes: list[float]
    config: dict
    total_runtime: float


def round_genes(genes) -> list[int]:
    """Round each real gene half-up to its nearest MIDI integer, clamped to the piano range."""
    rounded = np.floor(np.asarray(genes, dtype=np.float64) + 0.5)
    return [int(p) for p in np.clip(rounded, MIDI_MIN, MIDI_MAX)]


def _segment_seed(master_seed: int, index: int) -> np.random.SeedSequence:
    # Seeds depend only on (master seed, own index): adding or removing
    # later segments never perturbs earlier runs.
    return np.random.SeedSequence(entropy=(master_seed, index))


def _run_segment(args) -> tuple[int, np.ndarray, float, float, EvolutionTrace, float]:
    (index, seg, sample_rate, es_config, spectral_config, synth_params,
     notes_per_chord, master_seed, quantize, timer) = args
    started = timer()
    ctx = make_context(
        AudioBuffer(samples=seg.samples, sample_rate=sample_rate),
        spectral_config,
        synth_params,
        quantize=quantize,
    )
    rng = np.random.default_rng(_segment_seed(master_seed, index))
    best, trace = evolve(es_config, notes_per_chord, lambda genes: chromosome_cost(genes, ctx), rng)
    return index, best.genes, best.sigma, float(best.fitness), trace, timer() - started


def _config_snapshot(es, spectral, synth, notes_per_chord, jobs, seed, quantize) -> dict:
    return {
        "es": asdict(es),
        "spectral": asdict(spectral),
        "synth": asdict(synth),
        "notes_per_chord": notes_per_chord,
        "jobs": jobs,
        "seed": seed,
        "quantize_candidates": quantize,
    }


def transcribe(
    buffer: AudioBuffer,
    boundaries: Sequence[float] | None = None,
    es_config: EsConfig | None = None,
    spectral_config: SpectralConfig | None = None,
    synth_params: SynthParams | None = None,
    notes_per_chord: int = 3,
    jobs: int = 1,
    seed: int | None = None,
    onset_threshold: float = 3.0,
    quantize_candidates: bool = False,
    timer: Callable[[], float] = time.perf_counter,
) -> TranscriptionResult:
    """Transcribe a signal into integer-pitch note events.

    boundaries gives explicit segment start times (must begin at 0); None
    runs the onset detector instead. One evolution per segment searches
    notes_per_chord pitch genes; segments run on up to `jobs` worker
    processes. seed defaults to es_config.seed. Set quantize_candidates
    when the buffer came from a 16-bit file so candidates are compared on
    the same capture grid.
    """
    if len(buffer) == 0:
        raise EmptySignal("cannot transcribe an empty signal")
    if notes_per_chord < 1:
        raise ValueError(f"notes_per_chord must be >= 1, got {notes_per_chord}")
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")

    es_config = es_config or EsConfig()
    spectral_config = spectral_config or SpectralConfig()
    synth_params = synth_params or SynthParams()
    master_seed = es_config.seed if seed is None else seed

    started = timer()
    if boundaries is None:
        boundaries = detect_onsets(buffer, spectral_config, onset_threshold)
    segments = segment(buffer, list(boundaries))

    tasks = [
        (i, seg, buffer.sample_rate, es_config, spectral_config, synth_params,
         notes_per_chord, master_seed, quantize_candidates, timer)
        for i, seg in enumerate(segments)
    ]
    outcomes: list = [None] * len(segments)
    if jobs == 1 or len(segments) == 1:
        for task in tasks:
            out = _run_segment(task)
            outcomes[out[0]] = out
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for out in pool.map(_run_segment, tasks):
                outcomes[out[0]] = out

    events, raw_genes, traces, best_costs, runtimes = [], [], [], [], []
    for (index, genes, _sigma, cost, trace, elapsed), seg in zip(outcomes, segments):
        events.append(
            NoteEvent(
                pitches=frozenset(round_genes(genes)),
                start=seg.start,
                duration=seg.duration,
            )
        )
        raw_genes.append([float(g) for g in genes])
        traces.append(trace)
        best_costs.append(cost)
        runtimes.append(elapsed)

    return TranscriptionResult(
        events=events,
        raw_genes=raw_genes,
        traces=traces,
        best_costs=best_costs,
        runtimes=runtimes,
        config=_config_snapshot(
            es_config, spectral_config, synth_params, notes_per_chord, jobs, master_seed,
            quantize_candidates,
        ),
        total_runtime=timer() - started,
    )


def _vlq(value: int) -> bytes:
    """Variable-length quantity: 7 bits per byte, high bit = continuation."""
    if value < 0:
        raise ValueError(f"negative delta time {value}")
    chunks = [value & 0x7F]
    value >>= 7
    while value:
        chunks.append((value & 0x7F) | 0x80)
        value >>= 7
    return bytes(reversed(chunks))


def write_midi(result: TranscriptionResult, path) -> None:
    """Emit a format 0 Standard MIDI File of the transcribed events.

    480 ticks per quarter at 120 BPM (tempo meta 500000 us), so one
    second is 960 ticks. All pitches of an event start together at
    velocity 96 and stop together at the event's end; note-offs sort
    before note-ons that share a tick.
    """
    if not result.events:
        raise ValueError("refusing to write a MIDI file with no events")

    timeline = [(0, 0, bytes((0xFF, 0x51, 0x03)) + _TEMPO_US.to_bytes(3, "big"))]
    for event in result.events:
        on_tick = round(event.start * _TICKS_PER_SECOND)
        off_tick = round((event.start + event.duration) * _TICKS_PER_SECOND)
        for pitch in sorted(event.pitches):
            timeline.append((on_tick, 2, bytes((0x90, pitch, _VELOCITY))))
            timeline.append((off_tick, 1, bytes((0x80, pitch, 0))))
    timeline.sort(key=lambda item: item[:2])

    track = bytearray()
    previous_tick = 0
    for tick, _, message in timeline:
        track += _vlq(tick - previous_tick) + message
        previous_tick = tick
    track += _vlq(0) + bytes((0xFF, 0x2F, 0x00))  # end of track

    header = struct.pack(">4sIHHH", b"MThd", 6, 0, 1, _PPQ)
    Path(path).write_bytes(header + struct.pack(">4sI", b"MTrk", len(track)) + bytes(track))


def write_report(result: TranscriptionResult, path, csv_path=None) -> None:
    """Write the JSON run report plus a sibling CSV of per-generation best costs.

    The CSV (default: the report path with a .csv suffix) holds one row
    per completed generation per segment, for convergence plots.
    """
    path = Path(path)
    csv_path = Path(csv_path) if csv_path is not None else path.with_suffix(".csv")

    report = {
        "config": result.config,
        "segments": [
            {
                "start": event.start,
                "duration": event.duration,
                "raw_genes": result.raw_genes[i],
                "rounded_pitches": round_genes(result.raw_genes[i]),
                "generations_run": result.traces[i].generations_run,
                "best_cost": result.best_costs[i],
                "runtime_seconds": result.runtimes[i],
            }
            for i, event in enumerate(result.events)
        ],
        "total_runtime": result.total_runtime,
    }
    path.write_text(json.dumps(report, indent=2) + "\n")

    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["segment", "generation", "best_cost"])
        for i, trace in enumerate(result.traces):
            for record in trace.records[1:]:
                writer.writerow([i, record.generation, record.best_cost])
