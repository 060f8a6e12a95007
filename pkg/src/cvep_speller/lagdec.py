"""Lag estimation by circular-shift correlation.

Zero-calibration mode compares a new letter's averaged response against the
first letter's; calibrated mode compares against a template aligned to
keyboard position 0. Both reduce to the same scan over ``num_chars`` circular
shifts of ``shift_samples`` each.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .dsp import AveragedResponse, circular_shift_samples
from .exceptions import (
    EmptyInputError,
    LagCollisionError,
    PositionOutOfRangeError,
    ShapeMismatchError,
    ZeroVarianceError,
)


@dataclass(frozen=True, eq=False)
class LagEstimate:
    """Outcome of a lag scan.

    ``scores[l]`` is the correlation between the reference and the new
    response advanced by ``l`` positions; ``lag`` is its first maximiser.
    """

    lag: int
    best_score: float
    scores: np.ndarray


@dataclass(frozen=True, eq=False)
class AbsoluteTemplate:
    data: AveragedResponse
    source_count: int = 1


def _check_shift_grid(period: int, num_chars: int, shift_samples: int) -> None:
    if num_chars < 1 or shift_samples < 1:
        raise ValueError("num_chars and shift_samples must be >= 1")
    offsets = (np.arange(num_chars) * shift_samples) % period
    if np.unique(offsets).size != num_chars:
        raise LagCollisionError(
            f"{num_chars} positions x {shift_samples} samples do not give distinct "
            f"circular lags in a {period}-sample period"
        )


def shift_offsets(num_chars: int, shift_samples: int, signed: bool) -> np.ndarray:
    """Sample advances to try for each lag class ``l``.

    Returns shape ``(num_chars, 2)``. Column 0 is ``l * s``. With ``signed``,
    column 1 is ``(l - num_chars) * s``: the advance for the negative position
    difference ``l - num_chars`` that lands in the same class. Class 0 has no
    such difference, and the two columns coincide whenever ``num_chars * s``
    tiles the period.
    """
    l = np.arange(num_chars)
    fwd = l * shift_samples
    back = np.where(l > 0, (l - num_chars) * shift_samples, 0) if signed else fwd
    return np.stack([fwd, back], axis=1)


def lag_scores(
    x_ref: AveragedResponse,
    x_new: AveragedResponse,
    num_chars: int,
    shift_samples: int,
    signed: bool = True,
) -> np.ndarray:
    """Correlation of ``x_ref`` with ``x_new`` advanced by each candidate lag.

    ``scores[l]`` is the best correlation over the advances returned by
    ``shift_offsets`` for class ``l``.
    """
    if x_ref.shape != x_new.shape:
        raise ShapeMismatchError(f"shapes differ: {x_ref.shape} vs {x_new.shape}")
    period = x_ref.period_samples
    _check_shift_grid(period, num_chars, shift_samples)

    ref = x_ref.data - x_ref.data.mean()
    new = x_new.data - x_new.data.mean()
    norm = np.sqrt(np.sum(ref * ref) * np.sum(new * new))
    if norm == 0.0:
        raise ZeroVarianceError("reference or new response is constant")
    offsets = shift_offsets(num_chars, shift_samples, signed)
    # advancing by k samples reads new[:, (t + k) % period]
    idx = (np.arange(period)[np.newaxis, np.newaxis, :] + offsets[:, :, np.newaxis]) % period
    shifted = new[:, idx]  # (channels, L, 2, period)
    scores = np.einsum("ct,clkt->lk", ref, shifted) / norm
    return np.clip(scores.max(axis=1), -1.0, 1.0)


def _estimate(scores: np.ndarray) -> LagEstimate:
    lag = int(np.argmax(scores))
    scores.flags.writeable = False
    return LagEstimate(lag=lag, best_score=float(scores[lag]), scores=scores)


def estimate_relative_lag(
    x_ref: AveragedResponse, x_new: AveragedResponse, num_chars: int, shift_samples: int
) -> LagEstimate:
    """Position difference ``(p_new - p_ref) mod num_chars`` maximising correlation.

    Both signed differences in a lag class are scored, since the reference
    letter may sit after the new one on the keyboard. Ties go to the smallest lag.
    """
    return _estimate(lag_scores(x_ref, x_new, num_chars, shift_samples, signed=True))


def build_calibration_template(
    responses: Iterable[tuple[AveragedResponse, int]], shift_samples: int
) -> AbsoluteTemplate:
    """Align labelled responses to position 0 and average them."""
    responses = list(responses)
    if not responses:
        raise EmptyInputError("need at least one labelled response")
    shape = responses[0][0].shape
    aligned = []
    for resp, position in responses:
        if resp.shape != shape:
            raise ShapeMismatchError(f"shapes differ: {shape} vs {resp.shape}")
        aligned.append(circular_shift_samples(resp, -int(position) * shift_samples).data)
    aligned = np.stack(aligned)
    # first + mean deviation: exact when every aligned response is identical
    mean = aligned[0] + (aligned - aligned[0]).mean(axis=0)
    return AbsoluteTemplate(AveragedResponse(mean), source_count=len(aligned))


def decode_absolute(
    template: AbsoluteTemplate, x: AveragedResponse, num_chars: int, shift_samples: int
) -> LagEstimate:
    """Keyboard position of ``x``; the returned ``lag`` is the absolute position."""
    return _estimate(lag_scores(template.data, x, num_chars, shift_samples, signed=False))


def promote_to_absolute(
    x_ref: AveragedResponse,
    resolved_first_position: int,
    shift_samples: int,
    num_chars: int | None = None,
) -> AbsoluteTemplate:
    """Re-base a zero-calibration reference to position 0 once its letter is known."""
    if resolved_first_position < 0 or (num_chars is not None and resolved_first_position >= num_chars):
        raise PositionOutOfRangeError(f"position {resolved_first_position} outside keyboard")
    return AbsoluteTemplate(circular_shift_samples(x_ref, -resolved_first_position * shift_samples))
