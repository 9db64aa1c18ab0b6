from .items import (
    DuplicateId,
    EvalError,
    MissingItem,
    QAItem,
    SchemaError,
    load_qa,
    render_mcq_question,
)
from .report import (
    BenchmarkReport,
    CategoryReport,
    RunRecord,
    aggregate,
    check_accounting,
    format_report,
    report_from_counts,
    report_from_doc,
    report_to_doc,
    round_pct,
)
from .run import EvalOutcome, evaluate_items
from .scoring import JUDGE_PROMPT_VERSION, extract_option_letter, judge_open, score_mcq

__all__ = [
    "BenchmarkReport",
    "CategoryReport",
    "DuplicateId",
    "EvalError",
    "EvalOutcome",
    "JUDGE_PROMPT_VERSION",
    "MissingItem",
    "QAItem",
    "RunRecord",
    "SchemaError",
    "aggregate",
    "check_accounting",
    "evaluate_items",
    "extract_option_letter",
    "format_report",
    "judge_open",
    "load_qa",
    "render_mcq_question",
    "report_from_counts",
    "report_from_doc",
    "report_to_doc",
    "round_pct",
]
