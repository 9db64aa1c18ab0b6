"""Accuracy aggregation and report rendering.

Percentages are rounded half-up to one decimal; the exact (correct, total)
fractions ride along in every report so rounding never loses information.
Abstentions count as incorrect.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal

from .items import MissingItem, QAItem
from .scoring import JUDGE_PROMPT_VERSION


@dataclass
class RunRecord:
    item_id: str
    predicted: str
    correct: bool
    confidence: float = 1.0
    abstained: bool = False
    judge_justification: str | None = None
    latency_ms: float = 0.0
    flags: list[str] = field(default_factory=list)

    def to_doc(self) -> dict:
        return {
            "item_id": self.item_id,
            "predicted": self.predicted,
            "correct": self.correct,
            "confidence": self.confidence,
            "abstained": self.abstained,
            "judge_justification": self.judge_justification,
            "latency_ms": self.latency_ms,
            "flags": list(self.flags),
        }


@dataclass(frozen=True)
class CategoryReport:
    task_type: str
    correct: int
    total: int

    @property
    def accuracy_pct(self) -> Decimal:
        return round_pct(self.correct, self.total)


@dataclass
class BenchmarkReport:
    categories: list[CategoryReport]
    domains: list[CategoryReport] = field(default_factory=list)
    comparisons: dict[str, float] = field(default_factory=dict)
    judge_prompt_version: str = JUDGE_PROMPT_VERSION

    @property
    def overall_correct(self) -> int:
        return sum(c.correct for c in self.categories)

    @property
    def overall_total(self) -> int:
        return sum(c.total for c in self.categories)

    @property
    def overall_pct(self) -> Decimal | None:
        if self.overall_total == 0:
            return None
        return round_pct(self.overall_correct, self.overall_total)


def round_pct(correct: int, total: int) -> Decimal:
    """Half-up percentage with one decimal, computed exactly."""
    if total <= 0:
        raise ValueError("total must be positive")
    return (Decimal(100 * correct) / Decimal(total)).quantize(
        Decimal("0.1"), rounding=ROUND_HALF_UP
    )


def aggregate(records: list[RunRecord], items: list[QAItem]) -> BenchmarkReport:
    by_id = {item.item_id: item for item in items}
    task_counts: dict[str, list[int]] = {}
    domain_counts: dict[str, list[int]] = {}
    for record in records:
        item = by_id.get(record.item_id)
        if item is None:
            raise MissingItem(f"record references unknown item {record.item_id!r}")
        correct = record.correct and not record.abstained
        bucket = task_counts.setdefault(item.task_type, [0, 0])
        bucket[0] += int(correct)
        bucket[1] += 1
        if item.domain:
            dbucket = domain_counts.setdefault(item.domain, [0, 0])
            dbucket[0] += int(correct)
            dbucket[1] += 1
    categories = [
        CategoryReport(task_type=name, correct=c, total=t)
        for name, (c, t) in sorted(task_counts.items())
    ]
    domains = [
        CategoryReport(task_type=name, correct=c, total=t)
        for name, (c, t) in sorted(domain_counts.items())
    ]
    return BenchmarkReport(categories=categories, domains=domains)


def report_from_counts(pairs: dict[str, tuple[int, int]]) -> BenchmarkReport:
    """Build a report straight from (correct, total) pairs per task type."""
    categories = []
    for name, (correct, total) in sorted(pairs.items()):
        if not 0 <= correct <= total:
            raise ValueError(f"bad counts for {name!r}: {correct}/{total}")
        categories.append(CategoryReport(task_type=name, correct=correct, total=total))
    return BenchmarkReport(categories=categories)


def check_accounting(
    report: BenchmarkReport, claimed_correct: int, claimed_total: int
) -> list[str]:
    """Compare summed per-category counts against an externally claimed overall."""
    problems = []
    if report.overall_correct != claimed_correct:
        problems.append(
            f"per-category corrects sum to {report.overall_correct}, "
            f"claimed overall is {claimed_correct}"
        )
    if report.overall_total != claimed_total:
        problems.append(
            f"per-category totals sum to {report.overall_total}, "
            f"claimed overall is {claimed_total}"
        )
    return problems


def report_to_doc(report: BenchmarkReport) -> dict:
    def rows(entries: list[CategoryReport]) -> list[dict]:
        return [
            {
                "task_type": e.task_type,
                "correct": e.correct,
                "total": e.total,
                "accuracy_pct": float(e.accuracy_pct),
            }
            for e in entries
        ]

    return {
        "categories": rows(report.categories),
        "domains": rows(report.domains),
        "overall": {
            "correct": report.overall_correct,
            "total": report.overall_total,
            "accuracy_pct": float(report.overall_pct) if report.overall_pct is not None else None,
        },
        "comparisons": dict(report.comparisons),
        "judge_prompt_version": report.judge_prompt_version,
    }


def report_from_doc(doc: dict) -> BenchmarkReport:
    report = BenchmarkReport(
        categories=[
            CategoryReport(task_type=r["task_type"], correct=r["correct"], total=r["total"])
            for r in doc.get("categories", [])
        ],
        domains=[
            CategoryReport(task_type=r["task_type"], correct=r["correct"], total=r["total"])
            for r in doc.get("domains", [])
        ],
        comparisons=dict(doc.get("comparisons", {})),
    )
    if "judge_prompt_version" in doc:
        report.judge_prompt_version = doc["judge_prompt_version"]
    return report


def format_report(report: BenchmarkReport, style: str = "text-table") -> bytes:
    """"text-table" rows sorted by task_type; comparison rows by score descending."""
    if style == "json":
        return (json.dumps(report_to_doc(report), sort_keys=True, indent=2) + "\n").encode()
    if style != "text-table":
        raise ValueError(f"unknown style {style!r}")
    lines = []
    for entry in sorted(report.categories, key=lambda e: e.task_type):
        lines.append(f"{entry.task_type} {entry.correct}/{entry.total} {entry.accuracy_pct}")
    if report.domains:
        lines.append("")
        lines.append("domains:")
        for entry in sorted(report.domains, key=lambda e: e.task_type):
            lines.append(f"{entry.task_type} {entry.correct}/{entry.total} {entry.accuracy_pct}")
    if report.overall_total > 0:
        lines.append(f"overall {report.overall_correct}/{report.overall_total} {report.overall_pct}")
    else:
        lines.append("overall n/a")
    if report.comparisons:
        lines.append("")
        lines.append("comparison:")
        ordered = sorted(report.comparisons.items(), key=lambda kv: (-kv[1], kv[0]))
        for label, score in ordered:
            lines.append(f"{label} {score:.1f}")
    return ("\n".join(lines) + "\n").encode()
