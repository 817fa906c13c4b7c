"""Helpers for rendering tree sets and sweeps as structured reports."""

from collections import Counter
from collections.abc import Iterable, Sequence
from typing import Any

from godan_idst.dto.models import (
    SUSPECT_MARK,
    CaseTag,
    RunConfig,
    SteinerTreeSet,
    SteinerTreeSetSchema,
    SweepRow,
    VerificationReport,
    VerificationReportSchema,
)


def build_tree_set_report(
    tree_set: SteinerTreeSet,
    report: VerificationReport,
    *,
    config: RunConfig | None = None,
) -> dict[str, Any]:
    """Build a stable machine-readable report for one `idst` run."""
    return {
        "tree_set": SteinerTreeSetSchema().dump(tree_set),
        "verification": VerificationReportSchema().dump(report),
        "run": _dump_config(config),
    }


def case_family(case_tag: str) -> str:
    """The lemma and first branch segment of a tag: ``S22/Case2/Subcase2.1`` -> ``S22/Case2``."""
    try:
        tag = CaseTag.parse(case_tag)
    except ValueError:
        return case_tag
    head = tag.branch.split("/", 1)[0].split(">", 1)[0]
    return f"{tag.lemma}/{head}" if head else str(tag.lemma)


def coverage_histogram(rows: Iterable[SweepRow], *, depth: str = "full") -> dict[str, int]:
    """
    Count rows per case tag.

    Args:
        rows: Sweep rows.
        depth: ``full`` keys by the whole tag, ``family`` by `case_family`.
    """
    keys = (row.case_tag if depth == "full" else case_family(row.case_tag) for row in rows)
    return dict(sorted(Counter(keys).items()))


def summarize_sweep(rows: Sequence[SweepRow], *, config: RunConfig | None = None) -> dict[str, Any]:
    """Min/max tree counts, failures and the case histogram of a sweep."""
    counts = [row.trees for row in rows]
    failures = [";".join(row.terminals) for row in rows if not row.verify]
    expected = rows[0].n - 1 if rows else None
    return {
        "rows": len(rows),
        "min_trees": min(counts, default=None),
        "max_trees": max(counts, default=None),
        "expected_trees": expected,
        "failures": failures,
        "suspect": sum(1 for row in rows if row.case_tag.endswith(SUSPECT_MARK)),
        "histogram": coverage_histogram(rows),
        "run": _dump_config(config),
    }


def _dump_config(config: RunConfig | None) -> dict[str, Any] | None:
    if config is None:
        return None
    return {
        "n": config.n,
        "command": config.command,
        "subsets": config.subsets,
        "sample": config.sample,
        "seed": config.seed,
        "format": str(config.fmt),
        "fallback_search": config.fallback_search,
        "position": config.position,
    }
