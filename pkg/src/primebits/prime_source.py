"""Consecutive prime generation with an odd-only segmented sieve.

Primes are held as ``uint64`` arrays. Base primes (those up to the square
root of the highest segment seen so far) are cached for the life of the
process, so repeated calls near the same magnitude only pay for the
segments themselves.
"""

from __future__ import annotations

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import IO, Iterator

import numpy as np

DEFAULT_SEGMENT_CANDIDATES = 1 << 20
UINT64_MAX = (1 << 64) - 1
# Largest limit primes_up_to will materialise in memory by default.
DEFAULT_MAX_LIMIT = 10**11


class PrimeSourceError(Exception):
    pass


class CapacityError(PrimeSourceError):
    """Request exceeds the configured resource bound."""


class IntegerWidthError(PrimeSourceError, OverflowError):
    """Request would leave the unsigned 64-bit range."""


@dataclass(frozen=True, eq=False)
class PrimeStream:
    """Ordered run of consecutive primes.

    ``start_bound`` is the inclusive lower bound that was asked for; the
    first element is the smallest prime at or above it.
    """

    start_bound: int
    primes: np.ndarray

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self) -> Iterator[int]:
        return (int(p) for p in self.primes)

    def __getitem__(self, i):
        return self.primes[i]

    def tolist(self) -> list[int]:
        return [int(p) for p in self.primes]

    @property
    def first(self) -> int | None:
        return int(self.primes[0]) if len(self.primes) else None

    @property
    def last(self) -> int | None:
        return int(self.primes[-1]) if len(self.primes) else None


def _simple_sieve(n: int) -> np.ndarray:
    """All primes <= n."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


class _BasePrimeCache:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._limit = 1
        self._primes = np.empty(0, dtype=np.int64)

    def upto(self, n: int) -> np.ndarray:
        with self._lock:
            if n > self._limit:
                new_limit = max(n, 2 * self._limit, 1 << 12)
                self._primes = _simple_sieve(new_limit)
                self._limit = new_limit
            primes = self._primes
        return primes[: np.searchsorted(primes, n, side="right")]


_base_primes = _BasePrimeCache()


def _sieve_segment(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Primes in ``[lo, hi)``; ``base`` must cover sqrt(hi)."""
    found = [np.array([2], dtype=np.uint64)] if lo <= 2 < hi else []
    start = max(lo, 3) | 1
    if start >= hi:
        return found[0] if found else np.empty(0, dtype=np.uint64)

    n = (hi - start + 1) // 2  # odd candidates start, start+2, ... < hi
    alive = np.ones(n, dtype=bool)
    for p in base[1:].tolist():
        sq = p * p
        if sq >= hi:
            break
        m = max(sq, -(-start // p) * p)
        if not m & 1:
            m += p
        if m < hi:
            alive[(m - start) // 2 :: p] = False
    odd = np.uint64(start) + np.uint64(2) * np.flatnonzero(alive).astype(np.uint64)
    found.append(odd)
    return np.concatenate(found) if len(found) > 1 else odd


def _check_width(hi: int) -> None:
    if hi - 1 > UINT64_MAX:
        raise IntegerWidthError(f"range end {hi - 1} exceeds the unsigned 64-bit range")


def _segments(lo: int, hi: int, span: int) -> list[tuple[int, int]]:
    return [(a, min(a + span, hi)) for a in range(lo, hi, span)]


def _sieve_range(
    lo: int,
    hi: int,
    segment_candidates: int = DEFAULT_SEGMENT_CANDIDATES,
    workers: int | None = None,
) -> list[np.ndarray]:
    """Per-segment prime arrays covering ``[lo, hi)``, in order."""
    if hi <= lo:
        return []
    _check_width(hi)
    base = _base_primes.upto(math.isqrt(hi - 1) + 1)
    spans = _segments(lo, hi, 2 * segment_candidates)
    if workers and workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda s: _sieve_segment(s[0], s[1], base), spans))
    return [_sieve_segment(a, b, base) for a, b in spans]


def primes_in_range(
    lo: int,
    hi: int,
    segment_candidates: int = DEFAULT_SEGMENT_CANDIDATES,
    workers: int | None = None,
) -> np.ndarray:
    """All primes p with ``lo <= p < hi``."""
    parts = _sieve_range(max(lo, 0), hi, segment_candidates, workers)
    if not parts:
        return np.empty(0, dtype=np.uint64)
    return np.concatenate(parts)


def primes_up_to(
    limit: int,
    *,
    segment_candidates: int = DEFAULT_SEGMENT_CANDIDATES,
    workers: int | None = None,
    max_limit: int = DEFAULT_MAX_LIMIT,
) -> PrimeStream:
    """All primes strictly below ``limit``.

    A limit below 2 gives an empty stream. Limits above ``max_limit`` raise
    :class:`CapacityError` rather than trying to hold the result in memory.
    """
    limit = int(limit)
    if limit > max_limit:
        raise CapacityError(f"limit {limit} exceeds max_limit {max_limit}")
    if limit < 2:
        return PrimeStream(2, np.empty(0, dtype=np.uint64))
    return PrimeStream(2, primes_in_range(2, limit, segment_candidates, workers))


def _estimate_span(lower: int, count: int) -> int:
    # average gap near x is about ln x
    return int(count * math.log(max(lower, 3)) * 1.05) + 64


def primes_starting_at(
    lower: int,
    min_count: int,
    *,
    segment_candidates: int = DEFAULT_SEGMENT_CANDIDATES,
    workers: int | None = None,
) -> PrimeStream:
    """The ``min_count`` consecutive primes beginning at the smallest prime >= ``lower``.

    The sieve advances in whole segments until enough primes are found; the
    surplus from the final segment is trimmed.
    """
    lower, min_count = int(lower), int(min_count)
    if lower < 2:
        raise ValueError("lower must be >= 2")
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    if lower > UINT64_MAX:
        raise IntegerWidthError(f"lower bound {lower} exceeds the unsigned 64-bit range")

    span = 2 * segment_candidates
    parts: list[np.ndarray] = []
    found = 0
    lo = lower
    while found < min_count:
        # whole segments, sized from the prime number theorem
        want = _estimate_span(lo, min_count - found)
        hi = lo + span * max(1, -(-want // span))
        hi = min(hi, UINT64_MAX + 1)
        if hi <= lo:
            raise IntegerWidthError("ran out of 64-bit integers before finding enough primes")
        for seg in _sieve_range(lo, hi, segment_candidates, workers):
            parts.append(seg)
            found += len(seg)
        lo = hi
    primes = np.concatenate(parts)[:min_count]
    return PrimeStream(lower, primes)


def count_primes(
    limit: int,
    *,
    segment_candidates: int = DEFAULT_SEGMENT_CANDIDATES,
    workers: int | None = None,
) -> int:
    """Number of primes below ``limit`` (pi(limit - 1)), counted segment by segment."""
    limit = int(limit)
    if limit < 3:
        return 0
    total = 0
    span = 2 * segment_candidates
    for a in range(2, limit, span * 8):
        parts = _sieve_range(a, min(a + span * 8, limit), segment_candidates, workers)
        total += sum(len(p) for p in parts)
    return total


def write_primes(stream: PrimeStream, fp: IO[str]) -> None:
    """Debug dump: one decimal prime per line."""
    for p in stream:
        fp.write(f"{p}\n")
