"""Randomness testing of the sign-encoded second differences of the primes."""

from primebits.battery import (
    GroupReport,
    GroupSpec,
    SimilarityReport,
    build_group,
    compare_groups,
    run_battery,
)
from primebits.fips import (
    BLOCK_BITS,
    BitBlock,
    long_run_test,
    monobit_test,
    poker_test,
    runs_test,
)
from primebits.prime_source import (
    PrimeStream,
    count_primes,
    primes_starting_at,
    primes_up_to,
)
from primebits.transform import (
    encode_bits,
    first_difference,
    histogram_of,
    second_difference,
)

__version__ = "0.1.0"

__all__ = [
    "BLOCK_BITS",
    "BitBlock",
    "GroupReport",
    "GroupSpec",
    "PrimeStream",
    "SimilarityReport",
    "build_group",
    "compare_groups",
    "count_primes",
    "encode_bits",
    "first_difference",
    "histogram_of",
    "long_run_test",
    "monobit_test",
    "poker_test",
    "primes_starting_at",
    "primes_up_to",
    "run_battery",
    "runs_test",
    "second_difference",
]
