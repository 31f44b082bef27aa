"""
Corrected RPN Engine

Occurrence/Detection correction from CDCF row sums, floor-and-clamp rescaling to
the 1-10 scale, corrected RPN and ranking.
"""

from dataclasses import asdict, dataclass
from decimal import Decimal
from typing import Dict, Iterable, List
import logging
import math

from .correlation import CdcfBundle, row_sum
from .models import ItemKind, RATING_MAX, RATING_MIN, Worksheet, check_rating

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RpnResult:
    """Baseline vs corrected risk figures for one item"""

    item_id: str
    kind: ItemKind
    severity: int
    o_base: int
    d_base: int
    o_corr: int
    d_corr: int
    rpn_base: int
    rpn_corr: int
    improvement_pct: float  # 100 * (rpn_base - rpn_corr) / rpn_base

    def to_dict(self) -> dict:
        data = asdict(self)
        data["kind"] = self.kind.value
        data["improvement_pct"] = round(self.improvement_pct, 2) + 0.0
        return data


def _rescale(name: str, base: int, total: float) -> int:
    check_rating(name, base)
    if math.isnan(total):
        raise ValueError(f"{name}: row sum is NaN")
    if math.isinf(total):
        return RATING_MIN if total > 0 else RATING_MAX
    v = Decimal(base) - Decimal(base) * Decimal(repr(total))
    if v >= RATING_MAX:
        return RATING_MAX
    if v < RATING_MIN:
        return RATING_MIN
    return math.floor(v)


def corrected_occurrence(o_base: int, row_sum: float) -> int:
    """O_corr = clamp(floor(O - O * sum C_ij)) over the prevention row"""
    return _rescale("O", o_base, row_sum)


def corrected_detection(d_base: int, row_sum: float) -> int:
    """D_corr = clamp(floor(D - D * sum C_ij)) over the detection row"""
    return _rescale("D", d_base, row_sum)


def compute_rpn(worksheet: Worksheet, bundle: CdcfBundle) -> List[RpnResult]:
    """One result per item, in worksheet order"""
    results = []
    for item in worksheet.items:
        o_corr = corrected_occurrence(item.occurrence, row_sum(bundle.prevention, item.id))
        d_corr = corrected_detection(item.detection, row_sum(bundle.detection, item.id))
        rpn_base = item.rpn
        rpn_corr = item.severity * o_corr * d_corr
        results.append(
            RpnResult(
                item_id=item.id,
                kind=item.kind,
                severity=item.severity,
                o_base=item.occurrence,
                d_base=item.detection,
                o_corr=o_corr,
                d_corr=d_corr,
                rpn_base=rpn_base,
                rpn_corr=rpn_corr,
                improvement_pct=100.0 * (rpn_base - rpn_corr) / rpn_base,
            )
        )
    logger.info("computed corrected RPN for %d items", len(results))
    return results


def rank(results: Iterable[RpnResult]) -> List[RpnResult]:
    """Descending corrected RPN; ties by severity, O_corr, then id"""
    return sorted(results, key=lambda r: (-r.rpn_corr, -r.severity, -r.o_corr, r.item_id))


def rank_baseline(results: Iterable[RpnResult]) -> List[RpnResult]:
    """Classical FMEA order (baseline RPN, same tie-breaks on baseline O)"""
    return sorted(results, key=lambda r: (-r.rpn_base, -r.severity, -r.o_base, r.item_id))


@dataclass(frozen=True)
class RankChange:
    item_id: str
    rank_base: int
    rank_corr: int
    rpn_delta: int

    @property
    def rank_delta(self) -> int:
        """Positive when the item moved up in priority"""
        return self.rank_base - self.rank_corr

    def to_dict(self) -> dict:
        return {**asdict(self), "rank_delta": self.rank_delta}


def rank_changes(results: Iterable[RpnResult]) -> List[RankChange]:
    """Baseline vs corrected positions (1-based), in corrected rank order"""
    results = list(results)
    base_pos: Dict[str, int] = {
        r.item_id: pos for pos, r in enumerate(rank_baseline(results), start=1)
    }
    return [
        RankChange(r.item_id, base_pos[r.item_id], pos, r.rpn_corr - r.rpn_base)
        for pos, r in enumerate(rank(results), start=1)
    ]
