"""The four FIPS 140-1/2 power-up tests on a single bit block.

Statistics that the pass bands are compared against are computed exactly
(``fractions.Fraction``) and exposed as floats alongside.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

BLOCK_BITS = 20000

# FIPS 140-2 intervals, inclusive, for runs of each bit value; 6 means ">= 6".
FIPS_140_2_RUN_BANDS: Mapping[int, tuple[int, int]] = {
    1: (2315, 2685),
    2: (1114, 1386),
    3: (527, 723),
    4: (240, 384),
    5: (103, 209),
    6: (103, 209),
}
FIPS_140_1_RUN_BANDS: Mapping[int, tuple[int, int]] = {
    1: (2267, 2733),
    2: (1079, 1421),
    3: (502, 748),
    4: (223, 402),
    5: (90, 223),
    6: (90, 223),
}


@dataclass(frozen=True)
class FipsParameters:
    """Thresholds. The monobit band and run bands only apply to ``block_bits``-sized blocks."""

    block_bits: int = BLOCK_BITS
    monobit_band: tuple[int, int] = (9725, 10275)  # exclusive
    monobit_chi_critical: Fraction = Fraction("3.84")
    poker_band: tuple[Fraction, Fraction] = (Fraction("2.16"), Fraction("46.17"))  # exclusive
    run_bands: Mapping[int, tuple[int, int]] | None = field(
        default_factory=lambda: dict(FIPS_140_2_RUN_BANDS)
    )
    long_run_threshold: int = 26


DEFAULT_PARAMETERS = FipsParameters()


class BlockSizeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class BitBlock:
    bits: np.ndarray
    label: str = ""
    size: int = BLOCK_BITS

    def __post_init__(self) -> None:
        bits = np.asarray(self.bits, dtype=np.uint8)
        if bits.ndim != 1 or len(bits) != self.size:
            raise BlockSizeError(f"block {self.label!r} has {bits.size} bits, expected {self.size}")
        if bits.size and bits.max() > 1:
            raise ValueError("bits must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    def __len__(self) -> int:
        return self.size


def as_block(block, params: FipsParameters = DEFAULT_PARAMETERS) -> BitBlock:
    if isinstance(block, BitBlock):
        return block
    return BitBlock(np.asarray(block), size=params.block_bits)


@dataclass(frozen=True)
class MonobitResult:
    n0: int
    n1: int
    chi_square_exact: Fraction
    fips_pass: bool | None
    chi_pass: bool

    @property
    def chi_square(self) -> float:
        return float(self.chi_square_exact)


@dataclass(frozen=True)
class PokerResult:
    counts: tuple[int, ...]
    chi_square_exact: Fraction
    passed: bool

    @property
    def chi_square(self) -> float:
        return float(self.chi_square_exact)


@dataclass(frozen=True)
class RunsResult:
    """``histogram`` maps ``(bit, length)`` to the number of such runs.

    ``closed_runs`` counts only runs ended by a bit change inside the block,
    i.e. ``total_runs - 1``; published tables sometimes list this figure.
    """

    total_runs: int
    histogram: Mapping[tuple[int, int], int]
    per_length_pass: bool | None
    expected_runs: float

    @property
    def closed_runs(self) -> int:
        return self.total_runs - 1

    def length_counts(self) -> dict[int, int]:
        """Run counts per length, both bit values combined."""
        out: dict[int, int] = {}
        for (_, length), n in self.histogram.items():
            out[length] = out.get(length, 0) + n
        return dict(sorted(out.items()))


@dataclass(frozen=True)
class LongRunResult:
    longest_run: int
    passed: bool


def _bits(bits: Sequence[int] | str | np.ndarray) -> np.ndarray:
    if isinstance(bits, str):
        return np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
    return np.asarray(bits, dtype=np.uint8)


def run_lengths(bits) -> tuple[np.ndarray, np.ndarray]:
    """Bit value and length of every maximal run, in order."""
    b = _bits(bits)
    if b.size == 0:
        return np.empty(0, dtype=np.uint8), np.empty(0, dtype=np.int64)
    starts = np.concatenate(([0], np.flatnonzero(b[1:] != b[:-1]) + 1))
    lengths = np.diff(np.concatenate((starts, [b.size])))
    return b[starts], lengths


def count_runs(bits) -> int:
    """Total number of maximal runs; accepts a '0'/'1' string or a bit array."""
    b = _bits(bits)
    if b.size == 0:
        return 0
    return 1 + int(np.count_nonzero(b[1:] != b[:-1]))


def monobit_test(block, params: FipsParameters = DEFAULT_PARAMETERS) -> MonobitResult:
    block = as_block(block, params)
    n = block.size
    n1 = int(np.count_nonzero(block.bits))
    n0 = n - n1
    chi = Fraction((n0 - n1) ** 2, n)
    if n == params.block_bits:
        lo, hi = params.monobit_band
        fips_pass = lo < n1 < hi
    else:
        fips_pass = None
    return MonobitResult(n0, n1, chi, fips_pass, chi < params.monobit_chi_critical)


def poker_test(block, params: FipsParameters = DEFAULT_PARAMETERS) -> PokerResult:
    """Non-overlapping nibbles, most significant bit first."""
    block = as_block(block, params)
    if block.size % 4:
        raise BlockSizeError(f"poker test needs a multiple of 4 bits, got {block.size}")
    m = block.size // 4
    nibbles = block.bits.reshape(m, 4) @ np.array([8, 4, 2, 1], dtype=np.int64)
    counts = np.bincount(nibbles, minlength=16)
    sum_sq = int((counts.astype(np.int64) ** 2).sum())
    chi = Fraction(16 * sum_sq, m) - m
    lo, hi = params.poker_band
    return PokerResult(tuple(int(c) for c in counts), chi, lo < chi < hi)


def _run_bands_pass(histogram: Mapping[tuple[int, int], int], bands: Mapping[int, tuple[int, int]]) -> bool:
    top = max(bands)
    for bit in (0, 1):
        bucketed = dict.fromkeys(bands, 0)
        for (b, length), n in histogram.items():
            if b == bit:
                bucketed[min(length, top)] += n
        if any(not bands[k][0] <= bucketed[k] <= bands[k][1] for k in bands):
            return False
    return True


def runs_test(block, params: FipsParameters = DEFAULT_PARAMETERS) -> RunsResult:
    block = as_block(block, params)
    values, lengths = run_lengths(block.bits)
    keys, n = np.unique(np.stack([values.astype(np.int64), lengths]), axis=1, return_counts=True)
    histogram = {(int(b), int(length)): int(c) for (b, length), c in zip(keys.T, n)}
    per_length = None
    if params.run_bands and block.size == params.block_bits:
        per_length = _run_bands_pass(histogram, params.run_bands)
    return RunsResult(len(lengths), histogram, per_length, block.size / 2)


def long_run_test(block, params: FipsParameters = DEFAULT_PARAMETERS) -> LongRunResult:
    block = as_block(block, params)
    _, lengths = run_lengths(block.bits)
    longest = int(lengths.max()) if lengths.size else 0
    return LongRunResult(longest, longest < params.long_run_threshold)
