"""
Cross-Domain Correlation Factors

Sparse CDCF matrices (mode x mode common effect, mode x measure influence),
their provenance, and the JSON codec.
"""

from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterable, Mapping, Optional, Tuple
import hashlib
import json
import logging

from .errors import (
    CoefficientOutOfRangeError,
    InconsistentWorksheetError,
    InvalidCdcfError,
    UnknownIdError,
    WrongKindError,
)
from .models import ItemKind, MeasureKind, Worksheet
from .worksheet import render_worksheet

logger = logging.getLogger(__name__)

Key = Tuple[str, str]

COEFFICIENT_PLACES = 4

COMMON_EFFECT = "common_effect"
PREVENTION = "prevention"
DETECTION = "detection"
SECTIONS = (COMMON_EFFECT, PREVENTION, DETECTION)


class InfluenceKind(str, Enum):
    PREVENTION_INFLUENCE = "PreventionInfluence"
    DETECTION_INFLUENCE = "DetectionInfluence"

    @property
    def measure_kind(self) -> MeasureKind:
        if self is InfluenceKind.PREVENTION_INFLUENCE:
            return MeasureKind.PREVENTION
        return MeasureKind.DETECTION


class Provenance(str, Enum):
    CONFIGURED = "Configured"
    DERIVED = "Derived"


@dataclass(frozen=True)
class ProvenanceRecord:
    source: Provenance
    rationale: str = ""

    def to_dict(self) -> dict:
        return {"source": self.source.value, "rationale": self.rationale}


def _copy_entries(entries: Optional[Mapping[Key, float]]) -> Mapping[Key, float]:
    return {key: float(value) for key, value in (entries or {}).items()}


def _check_range(key: Key, value: float, low: float, high: float) -> None:
    if not (low <= value <= high):
        raise CoefficientOutOfRangeError(f"{key[0]}/{key[1]}", value, low, high)


@dataclass(frozen=True)
class CommonEffectMatrix:
    """(fm_id, tm_id) -> correlation in [0, 1]"""

    entries: Mapping[Key, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "entries", _copy_entries(self.entries))
        for key, value in self.entries.items():
            _check_range(key, value, 0.0, 1.0)

    def get(self, fm_id: str, tm_id: str) -> float:
        return self.entries.get((fm_id, tm_id), 0.0)


@dataclass(frozen=True)
class InfluenceMatrix:
    """(item_id, measure_id) -> signed influence C_ij in [-1, 1]"""

    kind: InfluenceKind
    entries: Mapping[Key, float] = field(default_factory=dict)
    known_rows: Optional[FrozenSet[str]] = None  # item ids of the source worksheet

    def __post_init__(self):
        object.__setattr__(self, "entries", _copy_entries(self.entries))
        for key, value in self.entries.items():
            _check_range(key, value, -1.0, 1.0)

    def row(self, item_id: str) -> Dict[str, float]:
        return {
            measure_id: value
            for (owner, measure_id), value in sorted(self.entries.items())
            if owner == item_id
        }


def row_sum(matrix: InfluenceMatrix, item_id: str) -> float:
    """Sum of C_ij over the measures with an entry in the item's row"""
    if matrix.known_rows is not None and item_id not in matrix.known_rows:
        raise UnknownIdError(item_id, f"not a row of the {matrix.kind.value} matrix")
    # decimal coefficients are summed exactly (0.1 + 0.2 == 0.3)
    total = sum((Decimal(repr(value)) for value in matrix.row(item_id).values()), Decimal(0))
    return float(total)


def worksheet_digest(worksheet: Worksheet) -> str:
    """Stable fingerprint used to tie bundles to one worksheet"""
    digest = hashlib.sha256()
    for part in render_worksheet(worksheet):
        digest.update(part.encode("utf-8"))
        digest.update(b"\x00")
    return digest.hexdigest()


@dataclass(frozen=True)
class CdcfBundle:
    """Common-effect, prevention and detection matrices with provenance"""

    common_effect: CommonEffectMatrix
    prevention: InfluenceMatrix
    detection: InfluenceMatrix
    provenance: Mapping[Tuple[str, str, str], ProvenanceRecord] = field(
        default_factory=dict
    )
    worksheet_digest: str = ""

    def __post_init__(self):
        if self.prevention.kind is not InfluenceKind.PREVENTION_INFLUENCE:
            raise WrongKindError("prevention", "PreventionInfluence", self.prevention.kind.value)
        if self.detection.kind is not InfluenceKind.DETECTION_INFLUENCE:
            raise WrongKindError("detection", "DetectionInfluence", self.detection.kind.value)
        object.__setattr__(self, "provenance", dict(self.provenance))

    @classmethod
    def empty(cls, worksheet: Worksheet) -> "CdcfBundle":
        """Identity configuration: every row sum is 0"""
        rows = frozenset(item.id for item in worksheet.items)
        return cls(
            CommonEffectMatrix(),
            InfluenceMatrix(InfluenceKind.PREVENTION_INFLUENCE, known_rows=rows),
            InfluenceMatrix(InfluenceKind.DETECTION_INFLUENCE, known_rows=rows),
            worksheet_digest=worksheet_digest(worksheet),
        )

    def matrix(self, section: str):
        return {
            COMMON_EFFECT: self.common_effect,
            PREVENTION: self.prevention,
            DETECTION: self.detection,
        }[section]

    def entry_count(self) -> int:
        return sum(len(self.matrix(section).entries) for section in SECTIONS)

    def to_dict(self) -> dict:
        """CDCF JSON layout, sorted keys, coefficients rounded to 4 places"""
        return {section: _nest(self.matrix(section).entries) for section in SECTIONS}

    def provenance_dict(self) -> dict:
        out: Dict[str, Dict[str, Dict[str, dict]]] = {section: {} for section in SECTIONS}
        for (section, row, col), record in sorted(self.provenance.items()):
            out[section].setdefault(row, {})[col] = record.to_dict()
        return out


def _nest(entries: Mapping[Key, float]) -> Dict[str, Dict[str, float]]:
    nested: Dict[str, Dict[str, float]] = {}
    for (row, col), value in sorted(entries.items()):
        nested.setdefault(row, {})[col] = round(value, COEFFICIENT_PLACES) + 0.0
    return nested


def dump_cdcf(bundle: CdcfBundle, with_provenance: bool = False) -> str:
    """Serialize a bundle deterministically"""
    data: Dict[str, Any] = bundle.to_dict()
    if with_provenance:
        data["provenance"] = bundle.provenance_dict()
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _parse_decimal(literal: str) -> float:
    if "e" in literal or "E" in literal:
        raise InvalidCdcfError(f"scientific notation is not allowed ({literal})")
    return float(literal)


def _reject_constant(name: str):
    raise InvalidCdcfError(f"non-finite number {name}")


def _entries(section: str, payload: Any) -> Iterable[Tuple[Key, float]]:
    if not isinstance(payload, dict):
        raise InvalidCdcfError(f"section {section} must be an object")
    for row, cols in payload.items():
        if not isinstance(cols, dict):
            raise InvalidCdcfError(f"{section}.{row} must be an object")
        for col, value in cols.items():
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise InvalidCdcfError(f"{section}.{row}.{col} must be a number")
            yield (row, col), float(value)


def load_cdcf(json_text: str, worksheet: Worksheet, source: str = "<cdcf>") -> CdcfBundle:
    """
    Parse and validate a CDCF JSON document against a worksheet.

    Every loaded entry is recorded with Configured provenance.
    """
    try:
        data = json.loads(
            json_text, parse_float=_parse_decimal, parse_constant=_reject_constant
        )
    except json.JSONDecodeError as e:
        raise InvalidCdcfError(e.msg, source=source, line=e.lineno)
    except InvalidCdcfError as e:
        raise e.with_context(source)
    if not isinstance(data, dict):
        raise InvalidCdcfError("top level must be an object", source=source)

    try:
        for section in data:
            if section not in SECTIONS:
                raise InvalidCdcfError(f"unknown section {section!r}")

        items = worksheet.items_by_id
        measures = worksheet.measures_by_id
        provenance = {}

        common = {}
        for (fm_id, tm_id), value in _entries(COMMON_EFFECT, data.get(COMMON_EFFECT, {})):
            for identifier, kind in ((fm_id, ItemKind.FAILURE_MODE), (tm_id, ItemKind.THREAT_MODE)):
                if identifier not in items:
                    raise UnknownIdError(identifier, "not a worksheet item")
                if items[identifier].kind is not kind:
                    raise WrongKindError(identifier, kind.value, items[identifier].kind.value)
            _check_range((fm_id, tm_id), value, 0.0, 1.0)
            common[(fm_id, tm_id)] = value
            provenance[(COMMON_EFFECT, fm_id, tm_id)] = ProvenanceRecord(
                Provenance.CONFIGURED, "configured"
            )

        influence = {}
        for section, kind in (
            (PREVENTION, InfluenceKind.PREVENTION_INFLUENCE),
            (DETECTION, InfluenceKind.DETECTION_INFLUENCE),
        ):
            entries = {}
            for (item_id, measure_id), value in _entries(section, data.get(section, {})):
                if item_id not in items:
                    raise UnknownIdError(item_id, "not a worksheet item")
                if measure_id not in measures:
                    raise UnknownIdError(measure_id, "not a worksheet measure")
                measure_kind = measures[measure_id].kind
                if measure_kind is not kind.measure_kind:
                    raise WrongKindError(measure_id, kind.measure_kind.value, measure_kind.value)
                if (item_id, measure_id) not in worksheet.applicable_pairs:
                    raise UnknownIdError(
                        f"{item_id}/{measure_id}", "pair not declared applicable"
                    )
                _check_range((item_id, measure_id), value, -1.0, 1.0)
                entries[(item_id, measure_id)] = value
                provenance[(section, item_id, measure_id)] = ProvenanceRecord(
                    Provenance.CONFIGURED, "configured"
                )
            influence[section] = entries
    except (InvalidCdcfError, UnknownIdError, WrongKindError, CoefficientOutOfRangeError) as e:
        raise e.with_context(source)

    rows = frozenset(items)
    bundle = CdcfBundle(
        CommonEffectMatrix(common),
        InfluenceMatrix(InfluenceKind.PREVENTION_INFLUENCE, influence[PREVENTION], rows),
        InfluenceMatrix(InfluenceKind.DETECTION_INFLUENCE, influence[DETECTION], rows),
        provenance,
        worksheet_digest(worksheet),
    )
    logger.info("loaded %d configured CDCF entries from %s", bundle.entry_count(), source)
    return bundle


def merge_bundles(configured: CdcfBundle, derived: CdcfBundle) -> CdcfBundle:
    """
    Union of two bundles built on the same worksheet.

    On key collision the configured entry wins and the derived value is noted
    in the provenance rationale.
    """
    if configured.worksheet_digest != derived.worksheet_digest:
        raise InconsistentWorksheetError(configured.worksheet_digest, derived.worksheet_digest)

    merged: Dict[str, Dict[Key, float]] = {}
    provenance = dict(derived.provenance)
    for section in SECTIONS:
        ours = configured.matrix(section).entries
        theirs = derived.matrix(section).entries
        combined = dict(theirs)
        for key, value in ours.items():
            record = configured.provenance.get(
                (section, *key), ProvenanceRecord(Provenance.CONFIGURED, "configured")
            )
            if key in theirs:
                logger.warning(
                    "%s %s/%s: configured %.4f overrides derived %.4f",
                    section,
                    key[0],
                    key[1],
                    value,
                    theirs[key],
                )
                record = ProvenanceRecord(
                    record.source,
                    f"{record.rationale}; derived {theirs[key]:.4f} overridden",
                )
            combined[key] = value
            provenance[(section, *key)] = record
        merged[section] = combined

    rows = configured.prevention.known_rows or derived.prevention.known_rows
    return CdcfBundle(
        CommonEffectMatrix(merged[COMMON_EFFECT]),
        InfluenceMatrix(InfluenceKind.PREVENTION_INFLUENCE, merged[PREVENTION], rows),
        InfluenceMatrix(InfluenceKind.DETECTION_INFLUENCE, merged[DETECTION], rows),
        provenance,
        configured.worksheet_digest,
    )
