"""
FTMEA Worksheet Models

Defines the failure/threat modes, countermeasures and worksheet container.
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Tuple
import re

from .errors import (
    DanglingReferenceError,
    DuplicateIdError,
    MalformedCsvError,
    RatingOutOfRangeError,
)

NET_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*")

RATING_MIN = 1
RATING_MAX = 10


class ItemKind(str, Enum):
    FAILURE_MODE = "FailureMode"
    THREAT_MODE = "ThreatMode"


class MeasureKind(str, Enum):
    PREVENTION = "Prevention"
    DETECTION = "Detection"


class Domain(str, Enum):
    SAFETY = "Safety"
    SECURITY = "Security"


def check_rating(name: str, value) -> int:
    """Validate a single S/O/D rating (integral, 1-10)"""
    if isinstance(value, bool) or not isinstance(value, int):
        raise RatingOutOfRangeError(name, value)
    if not RATING_MIN <= value <= RATING_MAX:
        raise RatingOutOfRangeError(name, value)
    return value


def is_net_name(name: str) -> bool:
    return NET_NAME_RE.fullmatch(name) is not None


def check_label(what: str, value: str) -> str:
    """Ids and group/class labels: non-empty, no surrounding whitespace"""
    if not value:
        raise MalformedCsvError(f"empty {what}")
    if value != value.strip():
        raise MalformedCsvError(f"{what} {value!r} has surrounding whitespace")
    return value


@dataclass(frozen=True)
class NetAnchors:
    """Netlist locations a mode or measure is attached to"""

    effect_nets: Tuple[str, ...] = ()  # where the failure/threat effect appears
    alarm_nets: Tuple[str, ...] = ()  # detection/alarm outputs
    attack_input_nets: Tuple[str, ...] = ()  # attacker-controllable entry points

    def __post_init__(self):
        for name in self.all_nets():
            if not is_net_name(name):
                raise MalformedCsvError(f"invalid net identifier {name!r}")

    def all_nets(self) -> List[str]:
        return [*self.effect_nets, *self.alarm_nets, *self.attack_input_nets]

    def is_empty(self) -> bool:
        return not (self.effect_nets or self.alarm_nets or self.attack_input_nets)


@dataclass(frozen=True)
class RiskItem:
    """One failure mode (FM) or threat mode (TM) row"""

    id: str
    kind: ItemKind
    description: str
    effect_group: str  # label of the shared adverse effect
    severity: int  # S
    occurrence: int  # O
    detection: int  # D
    failure_class: Optional[str] = None  # unified risk matrix row label
    feasibility_class: Optional[str] = None  # unified risk matrix column label

    def __post_init__(self):
        check_label("item id", self.id)
        check_label(f"effect_group of item {self.id}", self.effect_group)
        for what, label in (
            ("failure_class", self.failure_class),
            ("feasibility_class", self.feasibility_class),
        ):
            if label is not None:
                check_label(what, label)
        check_rating("S", self.severity)
        check_rating("O", self.occurrence)
        check_rating("D", self.detection)

    @property
    def is_failure(self) -> bool:
        return self.kind is ItemKind.FAILURE_MODE

    @property
    def rpn(self) -> int:
        """Classical S x O x D"""
        return self.severity * self.occurrence * self.detection


@dataclass(frozen=True)
class Countermeasure:
    """Prevention or detection measure of either domain"""

    id: str
    kind: MeasureKind
    domain: Domain
    description: str
    anchors: Optional[NetAnchors] = None

    def __post_init__(self):
        check_label("measure id", self.id)


@dataclass(frozen=True)
class AnchorError:
    """Anchored net missing from the analysed netlist"""

    measure_id: str
    missing_net: str


@dataclass(frozen=True)
class Worksheet:
    """Items, measures and the declared applicability between them"""

    items: Tuple[RiskItem, ...] = ()
    measures: Tuple[Countermeasure, ...] = ()
    applicability: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self):
        _check_unique((item.id for item in self.items), "item id")
        _check_unique((m.id for m in self.measures), "measure id")
        item_ids = {item.id for item in self.items}
        measure_ids = {m.id for m in self.measures}
        seen = set()
        for item_id, measure_id in self.applicability:
            if item_id not in item_ids:
                raise DanglingReferenceError(item_id, "item")
            if measure_id not in measure_ids:
                raise DanglingReferenceError(measure_id, "measure")
            if (item_id, measure_id) in seen:
                raise DuplicateIdError(f"{item_id},{measure_id}", "applicability pair")
            seen.add((item_id, measure_id))

    @cached_property
    def items_by_id(self) -> Dict[str, RiskItem]:
        return {item.id: item for item in self.items}

    @cached_property
    def measures_by_id(self) -> Dict[str, Countermeasure]:
        return {m.id: m for m in self.measures}

    @cached_property
    def applicable_pairs(self) -> frozenset:
        return frozenset(self.applicability)

    def measures_for(self, item_id: str) -> List[Countermeasure]:
        """Measures declared applicable to an item, in declaration order"""
        return [
            self.measures_by_id[measure_id]
            for owner, measure_id in self.applicability
            if owner == item_id
        ]


def _check_unique(ids: Iterable[str], what: str) -> None:
    seen = set()
    for identifier in ids:
        if identifier in seen:
            raise DuplicateIdError(identifier, what)
        seen.add(identifier)
