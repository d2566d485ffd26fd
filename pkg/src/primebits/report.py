"""Serialisation of group reports: JSON tree, CSV figure data, text tables."""

from __future__ import annotations

import json
from typing import Any, Sequence

from primebits.battery import BlockResult, GroupReport, SimilarityReport, aligned_run_profiles


def _verdict(v: bool | None) -> str:
    return "n/a" if v is None else ("pass" if v else "fail")


def block_to_dict(r: BlockResult) -> dict[str, Any]:
    m, p, runs, lr = r.monobit, r.poker, r.runs, r.long_run
    return {
        "label": r.label,
        "monobit": {
            "n0": m.n0,
            "n1": m.n1,
            "chi_square": m.chi_square,
            "chi_square_exact": str(m.chi_square_exact),
            "fips_pass": m.fips_pass,
            "chi_pass": m.chi_pass,
        },
        "poker": {
            "counts": list(p.counts),
            "chi_square": p.chi_square,
            "chi_square_exact": str(p.chi_square_exact),
            "pass": p.passed,
        },
        "runs": {
            "total_runs": runs.total_runs,
            "closed_runs": runs.closed_runs,
            "expected_runs": runs.expected_runs,
            "per_length_pass": runs.per_length_pass,
            "histogram": [
                {"bit": b, "length": n, "count": c} for (b, n), c in sorted(runs.histogram.items())
            ],
        },
        "long_run": {"longest_run": lr.longest_run, "pass": lr.passed},
    }


def group_to_dict(g: GroupReport) -> dict[str, Any]:
    return {
        "name": g.spec.name,
        "spec": {
            "start_mode": g.spec.start_mode,
            "start_bound": g.spec.start_bound,
            "block_count": g.spec.block_count,
            "block_bits": g.spec.block_bits,
        },
        "first_prime": g.first_prime,
        "last_prime": g.last_prime,
        "primes_consumed": g.primes_consumed,
        "discarded_zeros": g.discarded_zeros,
        "blocks": [
            {**block_to_dict(r), "provenance": vars(prov)}
            for r, prov in zip(g.per_block, g.provenance)
        ],
    }


def similarity_to_dict(s: SimilarityReport) -> dict[str, Any]:
    return {
        "poker_profile_correlation": s.poker_profile_correlation,
        "run_histogram_correlation": s.run_histogram_correlation,
        "per_length_run_deltas": {str(k): v for k, v in s.per_length_run_deltas.items()},
    }


def report_json(groups: Sequence[GroupReport], similarity: SimilarityReport | None = None) -> str:
    doc: dict[str, Any] = {"groups": [group_to_dict(g) for g in groups]}
    if similarity is not None:
        doc["similarity"] = similarity_to_dict(similarity)
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def _names(groups: Sequence[GroupReport]) -> list[str]:
    return [g.spec.name or f"group{i + 1}" for i, g in enumerate(groups)]


def poker_csv(groups: Sequence[GroupReport]) -> str:
    """Summed f(i) per nibble value, one column per group."""
    profiles = [g.poker_profile() for g in groups]
    lines = [",".join(["nibble", *_names(groups)])]
    for i in range(16):
        lines.append(",".join([str(i), *(str(int(p[i])) for p in profiles)]))
    return "\n".join(lines) + "\n"


def runs_csv(groups: Sequence[GroupReport]) -> str:
    """Summed run counts per length (both bit values), one column per group."""
    profiles = [g.run_length_profile() for g in groups]
    if len(groups) == 2:
        lengths, _, _ = aligned_run_profiles(*groups)
    else:
        lengths = list(range(1, max([n for p in profiles for n in p] + [1]) + 1))
    lines = [",".join(["length", *_names(groups)])]
    for n in lengths:
        lines.append(",".join([str(n), *(str(p.get(n, 0)) for p in profiles)]))
    return "\n".join(lines) + "\n"


def summary_table(groups: Sequence[GroupReport], similarity: SimilarityReport | None = None) -> str:
    head = (
        f"{'group':<6}{'block':>6}{'n0':>8}{'n1':>8}{'chi2':>10}{'band':>6}{'chi':>6}"
        f"{'poker chi2':>12}{'poker':>7}{'runs':>7}{'closed':>8}{'long':>6}{'lr':>6}"
    )
    lines = [head, "-" * len(head)]
    for name, g in zip(_names(groups), groups):
        for k, r in enumerate(g.per_block, 1):
            m = r.monobit
            lines.append(
                f"{name:<6}{k:>6}{m.n0:>8}{m.n1:>8}{m.chi_square:>10.4f}{_verdict(m.fips_pass):>6}{_verdict(m.chi_pass):>6}"
                f"{r.poker.chi_square:>12.4f}{_verdict(r.poker.passed):>7}"
                f"{r.runs.total_runs:>7}{r.runs.closed_runs:>8}"
                f"{r.long_run.longest_run:>6}{_verdict(r.long_run.passed):>6}"
            )
    lines.append("")
    for name, g in zip(_names(groups), groups):
        lines.append(
            f"{name}: first_prime={g.first_prime} last_prime={g.last_prime} "
            f"primes_consumed={g.primes_consumed} discarded_zeros={g.discarded_zeros}"
        )
    if similarity is not None:
        def fmt(x):
            return "undefined" if x is None else f"{x:.6f}"
        lines.append(
            f"similarity: poker_profile_correlation={fmt(similarity.poker_profile_correlation)} "
            f"run_histogram_correlation={fmt(similarity.run_histogram_correlation)}"
        )
    return "\n".join(lines) + "\n"
