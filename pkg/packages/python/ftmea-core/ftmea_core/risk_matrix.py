"""
Unified Risk Matrix

Maps a failure-probability class and an attack-feasibility class onto a single
1-10 occurrence rating.
"""

from typing import Dict, List
import json
import logging

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from .errors import InvalidRiskMatrixError, UnknownClassLabelError
from .models import RATING_MAX, RATING_MIN

logger = logging.getLogger(__name__)

DEFAULT_OCCURRENCE_CLASSES = ["VERY_LOW", "LOW", "MEDIUM", "HIGH", "VERY_HIGH"]
DEFAULT_FEASIBILITY_CLASSES = ["VERY_LOW", "LOW", "MEDIUM", "HIGH"]


class RiskMatrixConfig(BaseModel):
    """Occurrence class x feasibility class -> unified occurrence rating"""

    model_config = ConfigDict(frozen=True)

    occurrence_classes: List[str]
    feasibility_classes: List[str]
    cell_map: Dict[str, Dict[str, int]]

    @model_validator(mode="after")
    def check_matrix(self) -> "RiskMatrixConfig":
        for axis, labels in (
            ("occurrence", self.occurrence_classes),
            ("feasibility", self.feasibility_classes),
        ):
            if not labels:
                raise ValueError(f"no {axis} classes")
            if len(set(labels)) != len(labels):
                raise ValueError(f"duplicate {axis} class label")

        if set(self.cell_map) != set(self.occurrence_classes):
            raise ValueError("cell_map rows must match occurrence_classes")
        for occ in self.occurrence_classes:
            row = self.cell_map[occ]
            if set(row) != set(self.feasibility_classes):
                raise ValueError(f"cell_map row {occ} must cover every feasibility class")
            for feas, value in row.items():
                if not RATING_MIN <= value <= RATING_MAX:
                    raise ValueError(f"cell {occ}/{feas}={value} outside [1, 10]")

        # non-decreasing along both axes
        for i, occ in enumerate(self.occurrence_classes):
            for j, feas in enumerate(self.feasibility_classes):
                value = self.cell_map[occ][feas]
                if i and value < self.cell_map[self.occurrence_classes[i - 1]][feas]:
                    raise ValueError(f"not monotone along occurrence at {occ}/{feas}")
                if j and value < self.cell_map[occ][self.feasibility_classes[j - 1]]:
                    raise ValueError(f"not monotone along feasibility at {occ}/{feas}")
        return self

    def to_dict(self) -> dict:
        return self.model_dump()


def _default_cell(i: int, j: int, rows: int, cols: int) -> int:
    # 1 at the lowest corner, 10 at the highest, spread by the summed class index
    return RATING_MIN + round((RATING_MAX - RATING_MIN) * (i + j) / (rows + cols - 2))


def default_risk_matrix() -> RiskMatrixConfig:
    """
    Shipped 5 x 4 matrix.

    This is a convention of the tool, not calibrated data. Pass a config file
    to use project-specific cell values.
    """
    rows, cols = DEFAULT_OCCURRENCE_CLASSES, DEFAULT_FEASIBILITY_CLASSES
    cell_map = {
        occ: {
            feas: _default_cell(i, j, len(rows), len(cols))
            for j, feas in enumerate(cols)
        }
        for i, occ in enumerate(rows)
    }
    return RiskMatrixConfig(
        occurrence_classes=list(rows), feasibility_classes=list(cols), cell_map=cell_map
    )


def load_risk_matrix(json_text: str, source: str = "<risk-matrix>") -> RiskMatrixConfig:
    """Parse and validate a risk matrix JSON document"""
    try:
        data = json.loads(json_text)
    except json.JSONDecodeError as e:
        raise InvalidRiskMatrixError(str(e), source=source, line=e.lineno)
    try:
        return RiskMatrixConfig.model_validate(data)
    except ValidationError as e:
        reason = "; ".join(err["msg"] for err in e.errors())
        raise InvalidRiskMatrixError(reason, source=source)


def unified_occurrence(
    failure_class: str, feasibility_class: str, cfg: RiskMatrixConfig
) -> int:
    """Look up the unified occurrence rating for a class pair"""
    if failure_class not in cfg.cell_map:
        raise UnknownClassLabelError(failure_class, "occurrence")
    row = cfg.cell_map[failure_class]
    if feasibility_class not in row:
        raise UnknownClassLabelError(feasibility_class, "feasibility")
    return row[feasibility_class]
