"""Shared fixtures: canonical signals and cheap search configs."""

import numpy as np
import pytest

from evoscribe import (
    AudioBuffer,
    ChordSpec,
    EsConfig,
    SpectralConfig,
    SynthParams,
    make_context,
    synthesize_chord,
)

SAMPLE_RATE = 44100
C_MAJOR = (60, 64, 67)


@pytest.fixture(scope="session")
def synth_params():
    return SynthParams()


@pytest.fixture(scope="session")
def spectral_config():
    return SpectralConfig()


@pytest.fixture(scope="session")
def c_major_buffer(synth_params):
    """One second of the additive-synth C-major triad."""
    return synthesize_chord(ChordSpec(pitches=C_MAJOR, duration=1.0), synth_params, SAMPLE_RATE)


@pytest.fixture(scope="session")
def c_major_context(c_major_buffer, spectral_config, synth_params):
    return make_context(c_major_buffer, spectral_config, synth_params)


@pytest.fixture()
def tiny_es_config():
    """Small population and budget: exercises the machinery, not convergence."""
    return EsConfig(mu=8, lambda_=6, rho=2, max_generations=4, seed=7)


@pytest.fixture()
def short_buffer(synth_params):
    """0.2 s single note: cheap fitness target for end-to-end plumbing tests."""
    return synthesize_chord(ChordSpec(pitches=(60,), duration=0.2), synth_params, SAMPLE_RATE)


def sine_buffer(frequency, duration=0.5, sample_rate=SAMPLE_RATE, amplitude=0.5):
    t = np.arange(round(duration * sample_rate)) / sample_rate
    return AudioBuffer(samples=amplitude * np.sin(2 * np.pi * frequency * t), sample_rate=sample_rate)
