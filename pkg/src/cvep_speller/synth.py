"""Synthetic c-VEP epochs with known ground-truth character positions.

Noise is drawn from numpy's PCG64 bit generator, seeded through
``numpy.random.SeedSequence([rng_seed, trial_seed, char_position])``. Both
PCG64 and SeedSequence have published, version-stable specifications, so a
given seed triple yields the same epoch on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .code import Codebook, default_codebook
from .dsp import AveragedResponse, Epoch
from .exceptions import PositionOutOfRangeError

DEFAULT_BIT_RATE = 60.0
DEFAULT_SAMPLES_PER_BIT = 4


@dataclass(frozen=True, eq=False)
class VepKernel:
    impulse_response: np.ndarray
    sampling_rate: float

    def __post_init__(self):
        h = np.asarray(self.impulse_response, dtype=np.float64).ravel()
        if h.size == 0 or not np.all(np.isfinite(h)) or not np.any(h):
            raise ValueError("kernel must be finite with non-zero energy")
        object.__setattr__(self, "impulse_response", h)

    @property
    def duration(self) -> float:
        return self.impulse_response.size / self.sampling_rate

    @classmethod
    def damped_sine(
        cls,
        sampling_rate: float,
        frequency: float = 7.0,
        time_constant: float = 0.08,
        length: float = 0.25,
    ) -> "VepKernel":
        """``exp(-t / time_constant) * sin(2 pi f t)`` sampled on ``[0, length)``."""
        t = np.arange(int(round(length * sampling_rate))) / sampling_rate
        return cls(np.exp(-t / time_constant) * np.sin(2 * np.pi * frequency * t), sampling_rate)

    @classmethod
    def impulse(cls, sampling_rate: float) -> "VepKernel":
        return cls(np.array([1.0]), sampling_rate)


@dataclass(frozen=True)
class SynthConfig:
    codebook: Codebook = field(default_factory=default_codebook)
    samples_per_bit: int = DEFAULT_SAMPLES_PER_BIT
    channels: int = 1
    kernel: VepKernel | None = None
    noise_sigma: float = 0.0
    rng_seed: int = 0
    bit_rate: float = DEFAULT_BIT_RATE

    def __post_init__(self):
        if self.samples_per_bit < 1:
            raise ValueError("samples_per_bit must be >= 1")
        if self.channels < 1:
            raise ValueError("channels must be >= 1")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")
        if self.kernel is None:
            object.__setattr__(self, "kernel", VepKernel.damped_sine(self.sampling_rate))
        if self.kernel.sampling_rate != self.sampling_rate:
            raise ValueError(
                f"kernel sampled at {self.kernel.sampling_rate} Hz, epochs at {self.sampling_rate} Hz"
            )
        if self.kernel.impulse_response.size > self.period_samples:
            raise ValueError("kernel is longer than one code period")

    @property
    def sampling_rate(self) -> float:
        return self.bit_rate * self.samples_per_bit

    @property
    def period_samples(self) -> int:
        return self.codebook.base.length * self.samples_per_bit

    @property
    def shift_samples(self) -> int:
        """Samples between adjacent keyboard positions (``s``)."""
        return self.codebook.bits_per_shift * self.samples_per_bit

    @property
    def num_chars(self) -> int:
        return self.codebook.num_chars


def _check_position(config: SynthConfig, char_position: int) -> None:
    if not 0 <= char_position < config.num_chars:
        raise PositionOutOfRangeError(f"position {char_position} outside 0..{config.num_chars - 1}")


def circular_convolve(x: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Direct circular convolution; bit-exact under circular shifts of ``x``."""
    out = np.zeros_like(x, dtype=np.float64)
    for j, hj in enumerate(h):
        out += hj * np.roll(x, j)
    return out


def render_template(config: SynthConfig, char_position: int) -> AveragedResponse:
    """Noise-free one-period response to the code of ``char_position``."""
    _check_position(config, char_position)
    code = 2.0 * config.codebook.codes[char_position].astype(np.float64) - 1.0
    stimulus = np.repeat(code, config.samples_per_bit)
    response = circular_convolve(stimulus, config.kernel.impulse_response)
    return AveragedResponse(np.tile(response, (config.channels, 1)))


def noise_generator(config: SynthConfig, char_position: int, trial_seed: int) -> np.random.Generator:
    seq = np.random.SeedSequence([int(config.rng_seed), int(trial_seed), int(char_position)])
    return np.random.Generator(np.random.PCG64(seq))


def synth_epoch(
    config: SynthConfig, char_position: int, repetitions: int, trial_seed: int
) -> Epoch:
    """Template tiled ``repetitions`` times plus white Gaussian noise."""
    _check_position(config, char_position)
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    data = np.tile(render_template(config, char_position).data, (1, repetitions))
    if config.noise_sigma > 0:
        rng = noise_generator(config, char_position, trial_seed)
        data = data + config.noise_sigma * rng.standard_normal(data.shape)
    return Epoch(data, config.sampling_rate, config.period_samples, repetitions)
