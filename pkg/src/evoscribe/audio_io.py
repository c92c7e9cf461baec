"""Reading and writing 16-bit mono PCM WAV files.

Only the flavour the rest of the pipeline produces and consumes is
supported: RIFF/WAVE, format tag 1 (integer PCM), one channel, 16 bits
per sample.  Anything else is rejected loudly instead of being downmixed
or converted.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "AudioBuffer",
    "MalformedWav",
    "UnsupportedFormat",
    "quantize16",
    "read_wav",
    "write_wav",
]

# Dequantization divisor on read; write quantizes with the same full-scale
# factor (and clamps +1.0 to 32767) so a round trip is accurate to one
# quantization step, 1/32768, per sample.
_SCALE = 32768.0


class MalformedWav(ValueError):
    """File is not a structurally valid RIFF/WAVE container."""


class UnsupportedFormat(ValueError):
    """WAV is valid but not 16-bit mono integer PCM."""


@dataclass(frozen=True)
class AudioBuffer:
    """A mono signal: float64 samples in [-1, 1] plus a sample rate in Hz."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=np.float64))
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration_seconds(self) -> float:
        return len(self.samples) / self.sample_rate


def _read_exact(fh, n: int, what: str) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise MalformedWav(f"truncated file while reading {what}")
    return data


def read_wav(path) -> AudioBuffer:
    """Decode a 16-bit mono PCM WAV file.

    Samples are dequantized by dividing the raw int16 values by 32768, so
    -32768 maps to exactly -1.0.

    Raises MalformedWav for structural problems and UnsupportedFormat for
    valid WAVs that are not 16-bit mono integer PCM.
    """
    with open(path, "rb") as fh:
        riff, _, wave_id = struct.unpack("<4sI4s", _read_exact(fh, 12, "RIFF header"))
        if riff != b"RIFF" or wave_id != b"WAVE":
            raise MalformedWav(f"{path}: not a RIFF/WAVE file")

        fmt = None
        data = None
        while data is None:
            header = fh.read(8)
            if len(header) == 0:
                break
            if len(header) != 8:
                raise MalformedWav("truncated chunk header")
            chunk_id, size = struct.unpack("<4sI", header)
            body = _read_exact(fh, size, f"chunk {chunk_id!r}")
            if size % 2:  # chunks are word-aligned
                fh.read(1)
            if chunk_id == b"fmt ":
                if size < 16:
                    raise MalformedWav("fmt chunk too short")
                fmt = struct.unpack("<HHIIHH", body[:16])
            elif chunk_id == b"data":
                data = body

    if fmt is None:
        raise MalformedWav("missing fmt chunk")
    if data is None:
        raise MalformedWav("missing data chunk")

    audio_format, channels, sample_rate, _, _, bits = fmt
    if audio_format != 1:
        raise UnsupportedFormat(f"audio format {audio_format}, only PCM (1) supported")
    if channels != 1:
        raise UnsupportedFormat(f"{channels} channels, only mono supported")
    if bits != 16:
        raise UnsupportedFormat(f"{bits} bits per sample, only 16 supported")

    raw = np.frombuffer(data[: len(data) - len(data) % 2], dtype="<i2")
    return AudioBuffer(samples=raw.astype(np.float64) / _SCALE, sample_rate=sample_rate)


def _to_int16(samples: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(samples * _SCALE), -32768, 32767).astype("<i2")


def quantize16(samples: np.ndarray) -> np.ndarray:
    """Project samples onto the 16-bit capture grid, as a write/read trip would.

    Comparing signals of different provenance is only fair when both have
    passed through the same quantizer: a signal loaded from a 16-bit file
    carries a noise floor that a freshly synthesized float signal lacks.
    """
    return _to_int16(samples).astype(np.float64) / _SCALE


def write_wav(buffer: AudioBuffer, path) -> None:
    """Encode an AudioBuffer as a 16-bit mono PCM WAV file.

    Quantizes with round(sample * 32768) clamped to the int16 range, the
    inverse of read_wav's scaling, so read_wav(write_wav(b)) reproduces b
    within 1/32768 per sample.
    """
    payload = _to_int16(buffer.samples).tobytes()

    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF",
        36 + len(payload),
        b"WAVE",
        b"fmt ",
        16,
        1,  # PCM
        1,  # mono
        buffer.sample_rate,
        buffer.sample_rate * 2,  # byte rate
        2,  # block align
        16,  # bits per sample
        b"data",
        len(payload),
    )
    Path(path).write_bytes(header + payload)
