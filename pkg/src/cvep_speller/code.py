"""Maximal-length binary sequences and the per-character circular codebook."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exceptions import (
    LagCollisionError,
    LagOutOfRangeError,
    NonMaximalPeriodError,
    ZeroSeedError,
)

# Fibonacci-LFSR tap sets (1-based register positions) for primitive
# polynomials, e.g. (6, 5) is x^6 + x^5 + 1.
PRIMITIVE_TAPS: dict[int, tuple[int, ...]] = {
    2: (2, 1),
    3: (3, 2),
    4: (4, 3),
    5: (5, 3),
    6: (6, 5),
    7: (7, 6),
    8: (8, 6, 5, 4),
    9: (9, 5),
    10: (10, 7),
}

DEFAULT_ORDER = 6
DEFAULT_NUM_CHARS = 32
DEFAULT_BITS_PER_SHIFT = 2


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class MSequence:
    """Output of a maximal-length LFSR.

    Attributes
    ----------
    bits : ndarray of uint8
        One period of the sequence, values in {0, 1}.
    order : int
        Register length.
    taps : tuple of int
        Feedback taps as 1-based register positions.
    seed : tuple of int
        Initial register contents, position 1 first.
    """

    bits: np.ndarray
    order: int
    taps: tuple[int, ...]
    seed: tuple[int, ...]

    @property
    def length(self) -> int:
        return int(self.bits.shape[0])

    def bipolar(self) -> np.ndarray:
        """Return the sequence mapped 0 -> -1, 1 -> +1."""
        return 2.0 * self.bits.astype(np.float64) - 1.0

    def __str__(self) -> str:
        return "".join(str(int(b)) for b in self.bits)


@dataclass(frozen=True)
class Codebook:
    base: MSequence
    num_chars: int
    bits_per_shift: int
    codes: np.ndarray = field(repr=False)

    @property
    def lags(self) -> np.ndarray:
        """Circular lag (in code bits) of every character position."""
        return (np.arange(self.num_chars) * self.bits_per_shift) % self.base.length

    def __len__(self) -> int:
        return self.num_chars

    def __getitem__(self, position: int) -> np.ndarray:
        return self.codes[position]


def _normalize_seed(seed, order: int) -> tuple[int, ...]:
    if seed is None:
        return (1,) * order
    if isinstance(seed, (int, np.integer)):
        if seed < 0 or seed >= 2**order:
            raise ValueError(f"integer seed {seed} does not fit in {order} bits")
        # most significant bit is register position 1
        return tuple((int(seed) >> (order - 1 - i)) & 1 for i in range(order))
    seed = tuple(int(b) for b in seed)
    if len(seed) != order or any(b not in (0, 1) for b in seed):
        raise ValueError(f"seed must be {order} binary values, got {seed!r}")
    return seed


def generate_msequence(
    order: int = DEFAULT_ORDER,
    taps: Sequence[int] | None = None,
    seed: Sequence[int] | int | None = None,
) -> MSequence:
    """Run a Fibonacci LFSR for one full period.

    The register shifts towards higher positions each clock; the bit leaving
    position ``order`` is emitted and the XOR of the tapped positions enters
    position 1.

    Parameters
    ----------
    order : int
        Register length, >= 2.
    taps : sequence of int, optional
        1-based tap positions. Defaults to the entry of ``PRIMITIVE_TAPS``.
    seed : sequence of {0, 1} or int, optional
        Initial register state. Defaults to all ones.

    Raises
    ------
    ZeroSeedError
        If the seed is all zeros.
    NonMaximalPeriodError
        If the register state repeats before ``2**order - 1`` clocks.
    """
    if order < 2:
        raise ValueError("order must be >= 2")
    if taps is None:
        if order not in PRIMITIVE_TAPS:
            raise ValueError(f"no default taps for order {order}; pass taps explicitly")
        taps = PRIMITIVE_TAPS[order]
    taps = tuple(int(t) for t in taps)
    if not taps or any(t < 1 or t > order for t in taps):
        raise ValueError(f"taps must lie in 1..{order}, got {taps}")
    seed_t = _normalize_seed(seed, order)
    if not any(seed_t):
        raise ZeroSeedError("LFSR seed must be nonzero")

    period = 2**order - 1
    state = list(seed_t)
    out = np.empty(period, dtype=np.uint8)
    for i in range(period):
        out[i] = state[-1]
        fb = 0
        for t in taps:
            fb ^= state[t - 1]
        state = [fb] + state[:-1]
        if i < period - 1 and tuple(state) == seed_t:
            raise NonMaximalPeriodError(
                f"taps {taps} give period {i + 1} < {period}; polynomial is not primitive"
            )
    if tuple(state) != seed_t:
        raise NonMaximalPeriodError(f"taps {taps} do not return to the seed after {period} clocks")
    return MSequence(bits=_readonly(out), order=order, taps=taps, seed=seed_t)


def circular_shift_bits(seq, k: int) -> np.ndarray:
    """Circularly delay ``seq`` by ``k`` positions: ``out[i] = seq[(i - k) % n]``."""
    a = np.asarray(seq)
    if a.shape[0] == 0:
        return a.copy()
    return np.roll(a, int(k) % a.shape[0])


def circular_autocorrelation(seq: MSequence, lag: int) -> int:
    """Periodic autocorrelation of the +/-1 mapped sequence at ``lag``."""
    n = seq.length
    if not 0 <= lag < n:
        raise LagOutOfRangeError(f"lag {lag} outside 0..{n - 1}")
    m = 2 * seq.bits.astype(np.int64) - 1
    return int(np.dot(m, np.roll(m, -lag)))


def build_codebook(
    mseq: MSequence,
    num_chars: int = DEFAULT_NUM_CHARS,
    bits_per_shift: int = DEFAULT_BITS_PER_SHIFT,
) -> Codebook:
    """Assign each keyboard position ``p`` the base code delayed by ``p * bits_per_shift``.

    Raises
    ------
    LagCollisionError
        When two positions land on the same lag modulo the code length.
    """
    if num_chars < 1:
        raise ValueError("num_chars must be >= 1")
    if bits_per_shift < 1:
        raise ValueError("bits_per_shift must be >= 1")
    n = mseq.length
    lags = (np.arange(num_chars) * bits_per_shift) % n
    seen: dict[int, int] = {}
    for p, lag in enumerate(lags):
        if int(lag) in seen:
            raise LagCollisionError(
                f"positions {seen[int(lag)]} and {p} share lag {int(lag)} (mod {n})"
            )
        seen[int(lag)] = p
    codes = np.stack([circular_shift_bits(mseq.bits, int(lag)) for lag in lags])
    return Codebook(base=mseq, num_chars=num_chars, bits_per_shift=bits_per_shift, codes=_readonly(codes))


def default_codebook() -> Codebook:
    return build_codebook(generate_msequence())
