"""Command-line front end.

Three subcommands: `synth` renders a chord-spec text file to WAV,
`transcribe` recovers integer pitches from a WAV into MIDI plus a JSON
report, `oracle` brute-forces the best integer chord for a WAV so
search results can be checked against ground truth.

Exit codes: 0 success, 1 usage error, 2 input format error, 3 internal
failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .audio_io import MalformedWav, UnsupportedFormat, read_wav, write_wav
from .es_core import EsConfig
from .fitness import exhaustive_best, make_context
from .segmentation import InvalidBoundaries, detect_onsets, snap_to_grid
from .spectral import SpectralConfig
from .synthesis import InvalidSpec, SynthParams, parse_chord_spec, synthesize_sequence
from .transcriber import EmptySignal, transcribe, write_midi, write_report

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; this tool reserves 2 for input files."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _pair_of_floats(text: str) -> tuple[float, float]:
    low, sep, high = text.partition(":")
    if not sep:
        raise ValueError(f"expected low:high, got {text!r}")
    return float(low), float(high)


def _pair_of_ints(text: str) -> tuple[int, int]:
    low, sep, high = text.partition(":")
    if not sep:
        raise ValueError(f"expected low:high, got {text!r}")
    return int(low), int(high)


def _float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part != ""]


def _build_parser() -> _Parser:
    parser = _Parser(prog="evoscribe", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)

    synth = commands.add_parser("synth", help="render a chord-spec file to WAV")
    synth.add_argument("--spec", required=True, help="chord-spec text file")
    synth.add_argument("--out", required=True, help="output WAV path")
    synth.add_argument("--harmonics", type=int, default=4)
    synth.add_argument("--sample-rate", type=int, default=44100)
    synth.set_defaults(handler=_cmd_synth)

    trans = commands.add_parser("transcribe", help="transcribe a WAV to MIDI")
    trans.add_argument("--in", dest="infile", required=True, help="input WAV path")
    trans.add_argument("--out", required=True, help="output MIDI path")
    trans.add_argument("--report", required=True, help="output JSON report path")
    bounds = trans.add_mutually_exclusive_group()
    bounds.add_argument("--segments", type=_float_list,
                        help="comma-separated segment start times in seconds")
    bounds.add_argument("--auto-onsets", action="store_true",
                        help="detect segment boundaries from spectral flux (the default)")
    trans.add_argument("--snap", type=float,
                       help="snap detected boundaries to this grid in seconds")
    trans.add_argument("--notes-per-chord", type=int, default=3)
    trans.add_argument("--mu", type=int, default=100)
    trans.add_argument("--lambda", dest="lambda_", type=int, default=80)
    trans.add_argument("--rho", type=int, default=2)
    trans.add_argument("--alpha", type=float, default=1.1)
    trans.add_argument("--sigma-init", type=_pair_of_floats, default=(0.005, 0.05),
                       metavar="LOW:HIGH")
    trans.add_argument("--generations", type=int, default=300)
    trans.add_argument("--selection", choices=["plus", "comma"], default="plus")
    trans.add_argument("--seed", type=int, default=0)
    trans.add_argument("--jobs", type=int, default=1)
    trans.add_argument("--fitness-csv", help="per-generation best-cost CSV path")
    trans.set_defaults(handler=_cmd_transcribe)

    oracle = commands.add_parser("oracle", help="brute-force the best integer chord")
    oracle.add_argument("--in", dest="infile", required=True, help="input WAV path")
    oracle.add_argument("--range", dest="pitch_range", type=_pair_of_ints,
                        default=(55, 79), metavar="LOW:HIGH")
    oracle.add_argument("--notes-per-chord", type=int, default=3)
    oracle.set_defaults(handler=_cmd_oracle)

    return parser


def _cmd_synth(args) -> int:
    specs = parse_chord_spec(Path(args.spec).read_text())
    params = SynthParams(harmonic_count=args.harmonics)
    write_wav(synthesize_sequence(specs, params, args.sample_rate), args.out)
    return 0


def _cmd_transcribe(args) -> int:
    buffer = read_wav(args.infile)
    boundaries = args.segments
    if boundaries is None:
        boundaries = detect_onsets(buffer, SpectralConfig())
        if args.snap is not None:
            snapped = snap_to_grid(boundaries, args.snap)
            # snapping can push a late onset onto the signal end; such a
            # boundary would delimit an empty segment, so drop it
            boundaries = [b for b in snapped if b < buffer.duration_seconds]

    config = EsConfig(
        mu=args.mu,
        lambda_=args.lambda_,
        rho=args.rho,
        alpha=args.alpha,
        sigma_init=args.sigma_init,
        max_generations=args.generations,
        selection=args.selection,
        seed=args.seed,
    )
    result = transcribe(
        buffer,
        boundaries=boundaries,
        es_config=config,
        notes_per_chord=args.notes_per_chord,
        jobs=args.jobs,
        quantize_candidates=True,  # the input is always a 16-bit file
    )
    write_midi(result, args.out)
    write_report(result, args.report, csv_path=args.fitness_csv)
    for event, genes in zip(result.events, result.raw_genes):
        pitches = " ".join(str(p) for p in sorted(event.pitches))
        raw = " ".join(f"{g:.4f}" for g in genes)
        print(f"t={event.start:g}s dur={event.duration:g}s pitches=[{pitches}] raw=[{raw}]")
    print(f"total runtime {result.total_runtime:.2f}s over {len(result.events)} segments")
    return 0


def _cmd_oracle(args) -> int:
    buffer = read_wav(args.infile)
    ctx = make_context(buffer, SpectralConfig(), SynthParams(), quantize=True)
    low, high = args.pitch_range
    best, best_cost, runner_up = exhaustive_best(ctx, low, high, args.notes_per_chord)
    print(f"argmin {' '.join(str(p) for p in best)}")
    print(f"cost {best_cost!r}")
    print(f"runner_up_cost {runner_up!r}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (MalformedWav, UnsupportedFormat, InvalidSpec, EmptySignal, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InvalidBoundaries, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - safety net
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
