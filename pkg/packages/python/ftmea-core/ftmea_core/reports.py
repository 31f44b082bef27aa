"""
RPN Report Emitters

Deterministic CSV, Markdown and JSON renderings of ranked RPN results, and the
readers used to diff two reports.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence
import csv
import io
import json

from .correlation import CdcfBundle
from .errors import FtmeaError, InvalidReportError
from .models import ItemKind, Worksheet
from .rpn import RpnResult, rank, rank_changes

REPORT_COLUMNS = [
    "item_id",
    "kind",
    "S",
    "O",
    "D",
    "O_corr",
    "D_corr",
    "RPN_base",
    "RPN_corr",
    "improvement_pct",
]
COMPARISON_COLUMNS = ["item_id", "rank_base", "rank_corr", "rank_delta", "rpn_delta"]
DIFF_COLUMNS = [
    "item_id",
    "rank_before",
    "rank_after",
    "rank_delta",
    "rpn_before",
    "rpn_after",
    "rpn_delta",
]


def _pct(value: float) -> str:
    return f"{value + 0.0:.2f}"


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _report_row(r: RpnResult) -> list:
    return [
        r.item_id,
        r.kind.value,
        r.severity,
        r.o_base,
        r.d_base,
        r.o_corr,
        r.d_corr,
        r.rpn_base,
        r.rpn_corr,
        _pct(r.improvement_pct),
    ]


def render_csv(results: Sequence[RpnResult]) -> str:
    """Ranked report, one row per item"""
    return _csv(REPORT_COLUMNS, [_report_row(r) for r in rank(results)])


def render_comparison_csv(results: Sequence[RpnResult]) -> str:
    changes = rank_changes(results)
    return _csv(
        COMPARISON_COLUMNS,
        [[c.item_id, c.rank_base, c.rank_corr, c.rank_delta, c.rpn_delta] for c in changes],
    )


def render_json(results: Sequence[RpnResult]) -> str:
    data = {
        "results": [r.to_dict() for r in rank(results)],
        "comparison": [c.to_dict() for c in rank_changes(results)],
    }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _md_table(header: Sequence[str], rows: Sequence[Sequence]) -> List[str]:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(str(cell) for cell in row) + " |" for row in rows]
    return lines


def render_markdown(
    results: Sequence[RpnResult],
    bundle: Optional[CdcfBundle] = None,
    worksheet: Optional[Worksheet] = None,
) -> str:
    """Recalculated RPN table, rank changes and common-effect evidence"""
    lines = ["# FTMEA corrected RPN", ""]
    lines += _md_table(
        ["Rank", "Item", "Kind", "S", "O", "D", "RPN", "O_corr", "D_corr", "RPN_corr", "Improvement %"],
        [
            [
                pos,
                r.item_id,
                r.kind.value,
                r.severity,
                r.o_base,
                r.d_base,
                r.rpn_base,
                r.o_corr,
                r.d_corr,
                r.rpn_corr,
                _pct(r.improvement_pct),
            ]
            for pos, r in enumerate(rank(results), start=1)
        ],
    )

    changed = [c for c in rank_changes(results) if c.rank_delta != 0]
    lines += ["", "## Rank changes vs classical FMEA", ""]
    if changed:
        lines += _md_table(
            ["Item", "Baseline rank", "Corrected rank", "Rank delta", "RPN delta"],
            [[c.item_id, c.rank_base, c.rank_corr, f"{c.rank_delta:+d}", c.rpn_delta] for c in changed],
        )
    else:
        lines.append("No rank changes.")

    if bundle is not None and worksheet is not None and bundle.common_effect.entries:
        groups = {item.id: item.effect_group for item in worksheet.items}
        lines += ["", "## Common effects", ""]
        lines += _md_table(
            ["Effect group", "Failure mode", "Threat mode", "CDCF"],
            [
                [groups.get(fm, ""), fm, tm, f"{value:.4f}"]
                for (fm, tm), value in sorted(
                    bundle.common_effect.entries.items(),
                    key=lambda kv: (groups.get(kv[0][0], ""), kv[0]),
                )
            ],
        )
    return "\n".join(lines) + "\n"


def read_report(text: str, source: str = "<report>") -> List[RpnResult]:
    """Read a CSV or JSON report back into ranked RpnResults"""
    try:
        if text.lstrip().startswith("{"):
            rows = [
                {
                    "item_id": d["item_id"],
                    "kind": d["kind"],
                    "S": d["severity"],
                    "O": d["o_base"],
                    "D": d["d_base"],
                    "O_corr": d["o_corr"],
                    "D_corr": d["d_corr"],
                    "RPN_base": d["rpn_base"],
                    "RPN_corr": d["rpn_corr"],
                    "improvement_pct": d["improvement_pct"],
                }
                for d in json.loads(text)["results"]
            ]
        else:
            reader = csv.DictReader(io.StringIO(text))
            if reader.fieldnames != REPORT_COLUMNS:
                raise InvalidReportError(f"unexpected header {reader.fieldnames}")
            rows = list(reader)
        results = [
            RpnResult(
                item_id=row["item_id"],
                kind=ItemKind(row["kind"]),
                severity=int(row["S"]),
                o_base=int(row["O"]),
                d_base=int(row["D"]),
                o_corr=int(row["O_corr"]),
                d_corr=int(row["D_corr"]),
                rpn_base=int(row["RPN_base"]),
                rpn_corr=int(row["RPN_corr"]),
                improvement_pct=float(row["improvement_pct"]),
            )
            for row in rows
        ]
        seen = set()
        for result in results:
            if result.item_id in seen:
                raise InvalidReportError(f"duplicate item id {result.item_id}")
            seen.add(result.item_id)
        return results
    except FtmeaError as e:
        raise e.with_context(source)
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidReportError(str(e), source=source)


@dataclass(frozen=True)
class ReportDiff:
    item_id: str
    rank_before: Optional[int]
    rank_after: Optional[int]
    rpn_before: Optional[int]
    rpn_after: Optional[int]

    @property
    def rank_delta(self) -> Optional[int]:
        if self.rank_before is None or self.rank_after is None:
            return None
        return self.rank_before - self.rank_after

    @property
    def rpn_delta(self) -> Optional[int]:
        if self.rpn_before is None or self.rpn_after is None:
            return None
        return self.rpn_after - self.rpn_before


def compare_reports(before: Sequence[RpnResult], after: Sequence[RpnResult]) -> List[ReportDiff]:
    """
    Per-item rank and corrected-RPN deltas between two reports.

    Items present in only one report get empty deltas.
    """
    old = {r.item_id: r for r in before}
    new = {r.item_id: r for r in after}
    old_rank = {r.item_id: pos for pos, r in enumerate(rank(before), start=1)}
    new_rank = {r.item_id: pos for pos, r in enumerate(rank(after), start=1)}
    diffs = []
    for item_id in sorted(set(old) | set(new)):
        diffs.append(
            ReportDiff(
                item_id,
                old_rank.get(item_id),
                new_rank.get(item_id),
                old[item_id].rpn_corr if item_id in old else None,
                new[item_id].rpn_corr if item_id in new else None,
            )
        )
    return diffs


def render_diff_csv(diffs: Sequence[ReportDiff]) -> str:
    def cell(value: Optional[int]) -> str:
        return "" if value is None else str(value)

    return _csv(
        DIFF_COLUMNS,
        [
            [
                d.item_id,
                cell(d.rank_before),
                cell(d.rank_after),
                cell(d.rank_delta),
                cell(d.rpn_before),
                cell(d.rpn_after),
                cell(d.rpn_delta),
            ]
            for d in diffs
        ],
    )
