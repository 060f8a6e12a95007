"""Signal primitives: band-pass preprocessing, averaging, circular shifts, correlation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal

from .exceptions import (
    InvalidBandError,
    ShapeMismatchError,
    SignalTooShortError,
    ZeroVarianceError,
)

DEFAULT_LOW_CUT = 1.0
DEFAULT_HIGH_CUT = 15.0
DEFAULT_FILTER_ORDER = 4


def _as_2d(data) -> np.ndarray:
    a = np.asarray(data, dtype=np.float64)
    if a.ndim == 1:
        a = a[np.newaxis, :]
    if a.ndim != 2:
        raise ShapeMismatchError(f"expected (channels, samples) data, got shape {a.shape}")
    return a


@dataclass(frozen=True, eq=False)
class Epoch:
    """Multi-repetition recording while the user gazes at one character.

    ``data`` has shape ``(channels, repetitions * period_samples)``.
    """

    data: np.ndarray
    sampling_rate: float
    period_samples: int
    repetitions: int

    def __post_init__(self):
        data = _as_2d(self.data)
        object.__setattr__(self, "data", data)
        if self.period_samples < 1 or self.repetitions < 1:
            raise ValueError("period_samples and repetitions must be >= 1")
        if data.shape[1] != self.repetitions * self.period_samples:
            raise ShapeMismatchError(
                f"{data.shape[1]} samples != {self.repetitions} repetitions x "
                f"{self.period_samples} samples"
            )
        if not np.all(np.isfinite(data)):
            raise ValueError("epoch contains non-finite values")
        if self.sampling_rate <= 0:
            raise ValueError("sampling_rate must be positive")

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]

    def with_data(self, data) -> "Epoch":
        return Epoch(data, self.sampling_rate, self.period_samples, self.repetitions)

    def __eq__(self, other):
        if not isinstance(other, Epoch):
            return NotImplemented
        return (
            self.sampling_rate == other.sampling_rate
            and self.period_samples == other.period_samples
            and self.repetitions == other.repetitions
            and np.array_equal(self.data, other.data)
        )


@dataclass(frozen=True, eq=False)
class AveragedResponse:
    """One code period of (averaged) response, shape ``(channels, period_samples)``."""

    data: np.ndarray

    def __post_init__(self):
        data = _as_2d(self.data)
        if not np.all(np.isfinite(data)):
            raise ValueError("response contains non-finite values")
        object.__setattr__(self, "data", data)

    @property
    def period_samples(self) -> int:
        return self.data.shape[1]

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def __eq__(self, other):
        if not isinstance(other, AveragedResponse):
            return NotImplemented
        return np.array_equal(self.data, other.data)


@dataclass(frozen=True)
class FilterSpec:
    """Butterworth band-pass design. ``order`` is the total band-pass order."""

    low_cut: float = DEFAULT_LOW_CUT
    high_cut: float = DEFAULT_HIGH_CUT
    order: int = DEFAULT_FILTER_ORDER
    sampling_rate: float = 240.0

    def __post_init__(self):
        if not 0 < self.low_cut < self.high_cut < self.sampling_rate / 2:
            raise InvalidBandError(
                f"need 0 < low_cut < high_cut < fs/2, got {self.low_cut}, "
                f"{self.high_cut}, fs={self.sampling_rate}"
            )
        if self.order < 2 or self.order % 2:
            raise InvalidBandError(f"band-pass order must be even and >= 2, got {self.order}")

    @property
    def n_sections(self) -> int:
        return self.order // 2

    @property
    def warmup_samples(self) -> int:
        """Shortest signal the forward-backward filter accepts."""
        return 3 * (2 * self.n_sections + 1)

    def sos(self) -> np.ndarray:
        return signal.butter(
            self.n_sections,
            [self.low_cut, self.high_cut],
            btype="bandpass",
            output="sos",
            fs=self.sampling_rate,
        )


def _sos_pass(sos: np.ndarray, x: np.ndarray) -> np.ndarray:
    # initial state = steady state for a step at the first sample's value
    zi = signal.sosfilt_zi(sos)[:, np.newaxis, :] * x[np.newaxis, :, :1]
    y, _ = signal.sosfilt(sos, x, axis=-1, zi=zi)
    return y


def filter_array(data, spec: FilterSpec) -> np.ndarray:
    """Zero-phase band-pass of a ``(channels, samples)`` array along the last axis."""
    x = _as_2d(data)
    if x.shape[1] < spec.warmup_samples:
        raise SignalTooShortError(
            f"{x.shape[1]} samples is shorter than the {spec.warmup_samples}-sample filter warm-up"
        )
    sos = spec.sos()
    y = _sos_pass(sos, x)
    y = _sos_pass(sos, y[:, ::-1])[:, ::-1]
    return np.ascontiguousarray(y)


def bandpass_filter(epoch: Epoch, spec: FilterSpec) -> Epoch:
    """Filter every channel of ``epoch`` forward then backward.

    Edges are not trimmed; each pass starts from the steady-state response to
    the first sample it sees, which keeps DC offsets from ringing.
    """
    if spec.sampling_rate != epoch.sampling_rate:
        raise InvalidBandError(
            f"filter designed for {spec.sampling_rate} Hz but epoch is {epoch.sampling_rate} Hz"
        )
    return epoch.with_data(filter_array(epoch.data, spec))


def average_repetitions(epoch: Epoch) -> AveragedResponse:
    """Mean over repetitions, one period long.

    Computed as the first period plus the mean deviation from it, so identical
    repetitions average back to themselves bit-for-bit.
    """
    data = epoch.data.reshape(epoch.n_channels, epoch.repetitions, epoch.period_samples)
    first = data[:, 0, :]
    return AveragedResponse(first + (data - first[:, np.newaxis, :]).mean(axis=1))


def circular_shift_samples(resp: AveragedResponse, k: int) -> AveragedResponse:
    """Delay every channel by ``k`` samples, wrapping at the period boundary."""
    return AveragedResponse(np.roll(resp.data, int(k) % resp.period_samples, axis=1))


def _pearson_vectors(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    yc = y - y.mean()
    sxx = np.dot(xc, xc)
    syy = np.dot(yc, yc)
    if sxx == 0.0 or syy == 0.0:
        raise ZeroVarianceError("correlation input has zero variance")
    r = np.dot(xc, yc) / np.sqrt(sxx * syy)
    return float(np.clip(r, -1.0, 1.0))


def pearson_correlation(x: AveragedResponse, y: AveragedResponse) -> float:
    """Pearson's r between the channel-concatenated responses."""
    if x.shape != y.shape:
        raise ShapeMismatchError(f"shapes differ: {x.shape} vs {y.shape}")
    if x.data.size < 2:
        raise ShapeMismatchError("need at least 2 samples to correlate")
    return _pearson_vectors(x.data.ravel(), y.data.ravel())
