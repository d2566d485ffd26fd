import numpy as np
import pytest

from primebits.battery import (
    BuiltGroup,
    GroupSpec,
    build_group,
    compare_groups,
    evaluate_block,
    paper_groups,
    pearson,
    run_battery,
)
from primebits.fips import BitBlock
from primebits.prime_source import primes_starting_at
from primebits.transform import encode_stream


@pytest.fixture(scope="module")
def small_group():
    return build_group(GroupSpec.from_bound(10**6, block_count=3, block_bits=400, name="S"))


def test_spec_validation():
    with pytest.raises(ValueError):
        GroupSpec(block_count=0)
    with pytest.raises(ValueError):
        GroupSpec(block_bits=10)
    with pytest.raises(ValueError):
        GroupSpec(start_bound=1)
    assert GroupSpec.from_first_prime().start_mode == "from_first_prime"
    assert GroupSpec.from_bound(10**8).start_mode == "from_bound"


def test_first_eight_bits_from_first_prime():
    g = build_group(GroupSpec.from_first_prime(block_count=1, block_bits=8))
    assert g.blocks[0].bits.tolist()[:7] == [1, 1, 0, 1, 0, 1, 1]
    assert g.first_prime == 2


def test_group2_first_prime():
    g = build_group(GroupSpec.from_bound(10**8, block_count=1))
    assert g.first_prime == 100000007
    assert g.provenance[0].first_prime == 100000007


def test_group1_ends_below_two_million():
    g = build_group(paper_groups()[0])
    assert g.last_prime < 2 * 10**6


def test_blocks_are_leading_bits_of_b(small_group):
    spec = small_group.spec
    seq = encode_stream(primes_starting_at(spec.lower, small_group.primes_consumed))
    joined = np.concatenate([b.bits for b in small_group.blocks])
    assert np.array_equal(joined, seq.bits[: spec.total_bits])
    assert len(seq) == spec.total_bits  # the last consumed prime completes the last bit
    assert small_group.discarded_zeros == seq.discarded_zero_count


def test_contiguity(small_group):
    seq = encode_stream(primes_starting_at(small_group.spec.lower, small_group.primes_consumed + 50))
    prov = small_group.provenance
    for prev, cur in zip(prov, prov[1:]):
        # zero differences between blocks are skipped, never bits
        skipped = cur.first_diff_index - prev.last_diff_index - 1
        assert skipped >= 0
        assert skipped == seq.zeros_before(
            int(np.searchsorted(seq.source_index, cur.first_diff_index))
        ) - seq.zeros_before(int(np.searchsorted(seq.source_index, prev.last_diff_index)))


def test_determinism(small_group):
    again = build_group(small_group.spec)
    for a, b in zip(small_group.blocks, again.blocks):
        assert np.array_equal(a.bits, b.bits)
    ra, rb = run_battery(small_group), run_battery(again, workers=3)
    assert ra.per_block == rb.per_block


def test_run_battery_fills_every_block(small_group):
    report = run_battery(small_group)
    assert len(report.per_block) == 3
    assert [r.label for r in report.per_block] == ["S[1]", "S[2]", "S[3]"]
    assert report.primes_consumed == small_group.primes_consumed
    assert sum(report.poker_profile()) == 3 * 100


def test_all_zero_block_fails_all_but_nothing_else():
    r = evaluate_block(BitBlock(np.zeros(20000)))
    assert not r.monobit.chi_pass and not r.monobit.fips_pass
    assert not r.poker.passed
    assert r.runs.total_runs == 1
    assert not r.long_run.passed


def test_pearson():
    v = np.array([3, 1, 4, 1, 5, 9, 2, 6])
    assert pearson(v, v) == pytest.approx(1.0)
    assert pearson(v, 2 * v) == pytest.approx(1.0)
    assert pearson(v, -v) == pytest.approx(-1.0)
    assert pearson(v, np.ones(8)) is None


def test_compare_with_self_and_symmetry(small_group):
    a = run_battery(small_group)
    s = compare_groups(a, a)
    assert s.poker_profile_correlation == pytest.approx(1.0)
    assert s.run_histogram_correlation == pytest.approx(1.0)
    assert set(s.per_length_run_deltas.values()) == {0}

    b = run_battery(build_group(GroupSpec.from_bound(10**7, block_count=3, block_bits=400)))
    ab, ba = compare_groups(a, b), compare_groups(b, a)
    assert ab.poker_profile_correlation == ba.poker_profile_correlation
    assert ab.run_histogram_correlation == ba.run_histogram_correlation
    assert ab.per_length_run_deltas == {k: -v for k, v in ba.per_length_run_deltas.items()}


def test_compare_degenerate_profile():
    spec = GroupSpec(block_count=1, block_bits=64)
    every_nibble = ((np.arange(16)[:, None] >> np.array([3, 2, 1, 0])) & 1).ravel()
    flat = BuiltGroup(spec, [BitBlock(every_nibble, size=64)], [None], 2, 3, 5, 0)
    other = BuiltGroup(spec, [BitBlock(np.tile([0, 0, 1, 1], 16), size=64)], [None], 2, 3, 5, 0)
    s = compare_groups(run_battery(flat), run_battery(other))
    # each nibble once: a constant poker profile has no variance
    assert s.poker_profile_correlation is None
    assert s.run_histogram_correlation is not None


def test_compare_requires_same_shape(small_group):
    a = run_battery(small_group)
    b = run_battery(build_group(GroupSpec.from_bound(10**6, block_count=2, block_bits=400)))
    with pytest.raises(ValueError):
        compare_groups(a, b)
