"""Two-group experiment: build bit blocks from the primes, test them, compare.

A group starts either at the first prime (2) or at the first prime above a
bound. Its bit blocks are the leading ``block_count * block_bits`` bits of
the encoded sequence from that start, cut into consecutive blocks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from primebits.fips import (
    BLOCK_BITS,
    DEFAULT_PARAMETERS,
    BitBlock,
    FipsParameters,
    LongRunResult,
    MonobitResult,
    PokerResult,
    RunsResult,
    long_run_test,
    monobit_test,
    poker_test,
    runs_test,
)
from primebits.prime_source import primes_starting_at
from primebits.transform import encode_stream

PAPER_GROUP2_BOUND = 10**8
GROWTH = 1.05


@dataclass(frozen=True)
class GroupSpec:
    start_bound: int | None = None  # None: from the first prime
    block_count: int = 5
    block_bits: int = BLOCK_BITS
    name: str = ""

    def __post_init__(self) -> None:
        if self.block_count < 1:
            raise ValueError("block_count must be >= 1")
        if self.block_bits < 4 or self.block_bits % 4:
            raise ValueError("block_bits must be a positive multiple of 4")
        if self.start_bound is not None and self.start_bound < 2:
            raise ValueError("start_bound must be >= 2")

    @classmethod
    def from_first_prime(cls, **kw) -> GroupSpec:
        return cls(None, **kw)

    @classmethod
    def from_bound(cls, lower: int, **kw) -> GroupSpec:
        return cls(int(lower), **kw)

    @property
    def start_mode(self) -> str:
        return "from_first_prime" if self.start_bound is None else "from_bound"

    @property
    def lower(self) -> int:
        return 2 if self.start_bound is None else self.start_bound

    @property
    def total_bits(self) -> int:
        return self.block_count * self.block_bits


@dataclass(frozen=True)
class BlockProvenance:
    """Indices into the group's second-difference sequence (inclusive)."""

    first_diff_index: int
    last_diff_index: int
    first_prime: int
    last_prime: int


@dataclass(frozen=True, eq=False)
class BuiltGroup:
    spec: GroupSpec
    blocks: list[BitBlock]
    provenance: list[BlockProvenance]
    first_prime: int
    primes_consumed: int
    last_prime: int
    discarded_zeros: int


@dataclass(frozen=True)
class BlockResult:
    label: str
    monobit: MonobitResult
    poker: PokerResult
    runs: RunsResult
    long_run: LongRunResult


@dataclass(frozen=True, eq=False)
class GroupReport:
    spec: GroupSpec
    per_block: list[BlockResult]
    provenance: list[BlockProvenance]
    first_prime: int
    primes_consumed: int
    last_prime: int
    discarded_zeros: int

    def poker_profile(self) -> np.ndarray:
        """f(i) summed over blocks, i = 0..15."""
        return np.sum([r.poker.counts for r in self.per_block], axis=0)

    def run_length_profile(self) -> dict[int, int]:
        """Runs per length, both bit values, summed over blocks."""
        out: dict[int, int] = {}
        for r in self.per_block:
            for length, n in r.runs.length_counts().items():
                out[length] = out.get(length, 0) + n
        return dict(sorted(out.items()))


@dataclass(frozen=True)
class SimilarityReport:
    poker_profile_correlation: float | None
    run_histogram_correlation: float | None
    per_length_run_deltas: dict[int, int] = field(default_factory=dict)


def build_group(spec: GroupSpec, *, workers: int | None = None) -> BuiltGroup:
    """Generate primes until the spec's bits exist, then slice them into blocks."""
    need = spec.total_bits
    count = math.ceil((need + 2) * GROWTH)
    while True:
        stream = primes_starting_at(spec.lower, count, workers=workers)
        seq = encode_stream(stream)
        if len(seq) >= need:
            break
        count = math.ceil((count + need - len(seq)) * GROWTH)

    blocks, provenance = [], []
    for k in range(spec.block_count):
        lo, hi = k * spec.block_bits, (k + 1) * spec.block_bits
        label = f"{spec.name or 'group'}[{k + 1}]"
        blocks.append(BitBlock(seq.bits[lo:hi], label=label, size=spec.block_bits))
        first_d, last_d = int(seq.source_index[lo]), int(seq.source_index[hi - 1])
        provenance.append(
            BlockProvenance(first_d, last_d, int(stream.primes[first_d]), int(stream.primes[last_d + 2]))
        )

    last_d = provenance[-1].last_diff_index
    return BuiltGroup(
        spec=spec,
        blocks=blocks,
        provenance=provenance,
        first_prime=int(stream.primes[0]),
        primes_consumed=last_d + 3,
        last_prime=int(stream.primes[last_d + 2]),
        discarded_zeros=seq.zeros_before(need - 1),
    )


def evaluate_block(block: BitBlock, params: FipsParameters = DEFAULT_PARAMETERS) -> BlockResult:
    return BlockResult(
        block.label,
        monobit_test(block, params),
        poker_test(block, params),
        runs_test(block, params),
        long_run_test(block, params),
    )


def run_battery(
    group: BuiltGroup,
    params: FipsParameters = DEFAULT_PARAMETERS,
    *,
    workers: int | None = None,
) -> GroupReport:
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda b: evaluate_block(b, params), group.blocks))
    else:
        results = [evaluate_block(b, params) for b in group.blocks]
    return GroupReport(
        spec=group.spec,
        per_block=results,
        provenance=group.provenance,
        first_prime=group.first_prime,
        primes_consumed=group.primes_consumed,
        last_prime=group.last_prime,
        discarded_zeros=group.discarded_zeros,
    )


def pearson(a, b) -> float | None:
    """Pearson correlation, or None when either vector has zero variance."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    da, db = a - a.mean(), b - b.mean()
    denom = math.sqrt(float(da @ da) * float(db @ db))
    if denom == 0.0:
        return None
    return float(np.clip((da @ db) / denom, -1.0, 1.0))


def aligned_run_profiles(a: GroupReport, b: GroupReport) -> tuple[list[int], np.ndarray, np.ndarray]:
    pa, pb = a.run_length_profile(), b.run_length_profile()
    longest = max([*pa, *pb, 1])
    lengths = list(range(1, longest + 1))
    return (
        lengths,
        np.array([pa.get(n, 0) for n in lengths]),
        np.array([pb.get(n, 0) for n in lengths]),
    )


def compare_groups(a: GroupReport, b: GroupReport) -> SimilarityReport:
    if (a.spec.block_count, a.spec.block_bits) != (b.spec.block_count, b.spec.block_bits):
        raise ValueError("groups differ in block count or block size")
    lengths, ra, rb = aligned_run_profiles(a, b)
    return SimilarityReport(
        poker_profile_correlation=pearson(a.poker_profile(), b.poker_profile()),
        run_histogram_correlation=pearson(ra, rb),
        per_length_run_deltas={n: int(x - y) for n, x, y in zip(lengths, ra, rb)},
    )


def paper_groups(
    group2_bound: int = PAPER_GROUP2_BOUND, block_count: int = 5, block_bits: int = BLOCK_BITS
) -> tuple[GroupSpec, GroupSpec]:
    return (
        GroupSpec.from_first_prime(block_count=block_count, block_bits=block_bits, name="G1"),
        GroupSpec.from_bound(group2_bound, block_count=block_count, block_bits=block_bits, name="G2"),
    )
