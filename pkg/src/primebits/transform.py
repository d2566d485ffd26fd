"""Prime gaps, second differences and the sign encoding to bits.

Every derived sequence keeps ``origin_index``, the position in the source
:class:`~primebits.prime_source.PrimeStream` of the first prime it depends
on. Entry ``i`` of a gap sequence uses primes ``i, i+1``; entry ``i`` of a
second-difference sequence uses primes ``i, i+1, i+2`` (all relative to
``origin_index``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from primebits.prime_source import PrimeStream

DEFAULT_BIN_WIDTH = 2


class InsufficientInputError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GapSequence:
    gaps: np.ndarray
    origin_index: int = 0

    def __len__(self) -> int:
        return len(self.gaps)


@dataclass(frozen=True, eq=False)
class SecondDiffSequence:
    diffs: np.ndarray
    origin_index: int = 0

    def __len__(self) -> int:
        return len(self.diffs)


@dataclass(frozen=True, eq=False)
class BitSequence:
    """Sign-encoded second differences with zeros dropped.

    ``source_index[j]`` is the index into the second-difference sequence
    that produced bit ``j``.
    """

    bits: np.ndarray
    discarded_zero_count: int
    source_index: np.ndarray
    origin_index: int = 0

    def __len__(self) -> int:
        return len(self.bits)

    def prime_indices(self, j: int) -> tuple[int, int]:
        """Stream indices of the first and last prime feeding bit ``j``."""
        first = self.origin_index + int(self.source_index[j])
        return first, first + 2

    def zeros_before(self, j: int) -> int:
        """Zero differences discarded up to and including bit ``j``'s source."""
        return int(self.source_index[j]) - j


@dataclass(frozen=True, eq=False)
class Histogram:
    bin_edges: np.ndarray
    counts: np.ndarray
    bin_width: int = DEFAULT_BIN_WIDTH
    default_width: bool = field(default=True)

    def rows(self) -> list[tuple[int, int]]:
        return [(int(e), int(c)) for e, c in zip(self.bin_edges[:-1], self.counts)]

    def to_delimited(self, delimiter: str = ",") -> str:
        lines = [
            f"# bin_width={self.bin_width}",
            "# bin_width_source=" + ("default" if self.default_width else "user"),
            f"bin_lower{delimiter}count",
        ]
        lines += [f"{e}{delimiter}{c}" for e, c in self.rows()]
        return "\n".join(lines) + "\n"


def first_difference(stream: PrimeStream) -> GapSequence:
    primes = np.asarray(stream.primes if isinstance(stream, PrimeStream) else stream)
    if len(primes) < 2:
        raise InsufficientInputError("need at least 2 primes to form a gap")
    return GapSequence(np.diff(primes).astype(np.int64), 0)


def second_difference(gaps: GapSequence) -> SecondDiffSequence:
    if isinstance(gaps, GapSequence):
        values, origin = gaps.gaps, gaps.origin_index
    else:
        values, origin = np.asarray(gaps, dtype=np.int64), 0
    if len(values) < 2:
        raise InsufficientInputError("need at least 2 gaps to form a second difference")
    return SecondDiffSequence(np.diff(values), origin)


def encode_bits(diffs: SecondDiffSequence) -> BitSequence:
    """Map d > 0 to 1 and d < 0 to 0, dropping d == 0."""
    if isinstance(diffs, SecondDiffSequence):
        values, origin = diffs.diffs, diffs.origin_index
    else:
        values, origin = np.asarray(diffs, dtype=np.int64), 0
    keep = np.flatnonzero(values != 0)
    bits = (values[keep] > 0).astype(np.uint8)
    return BitSequence(bits, int(len(values) - len(keep)), keep, origin)


def encode_stream(stream: PrimeStream) -> BitSequence:
    return encode_bits(second_difference(first_difference(stream)))


def histogram_of(
    diffs: SecondDiffSequence, bin_width: int | None = None
) -> Histogram:
    """Counts of d values in width-``bin_width`` bins with 0 on a bin edge.

    Bins cover the full observed range, including empty interior bins.
    """
    default = bin_width is None
    width = DEFAULT_BIN_WIDTH if default else int(bin_width)
    if width < 1:
        raise ValueError("bin_width must be >= 1")
    values = diffs.diffs if isinstance(diffs, SecondDiffSequence) else np.asarray(diffs, dtype=np.int64)
    if len(values) == 0:
        return Histogram(np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64), width, default)
    slot = np.floor_divide(values, width)
    lo = int(slot.min())
    counts = np.bincount(slot - lo)
    edges = (np.arange(len(counts) + 1) + lo) * width
    return Histogram(edges.astype(np.int64), counts.astype(np.int64), width, default)
