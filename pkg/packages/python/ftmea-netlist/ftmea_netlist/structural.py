"""
Structural CDCF Derivation

Derives correlation factors from netlist structure:

- common effect: share of an effect cone that attack inputs can reach
- prevention influence: controllability change a measure causes on the effect
  cone, measured against a variant of the design
- detection influence: share of an effect cone an alarm observes
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Optional, Tuple
import json
import logging

from ftmea_core.correlation import (
    COMMON_EFFECT,
    DETECTION,
    PREVENTION,
    CdcfBundle,
    CommonEffectMatrix,
    InfluenceKind,
    InfluenceMatrix,
    Provenance,
    ProvenanceRecord,
    worksheet_digest,
)
from ftmea_core.errors import EmptyNetSetError, FtmeaError, UnknownNetError
from ftmea_core.models import Countermeasure, ItemKind, MeasureKind, NetAnchors, Worksheet
from ftmea_core.worksheet import validate_anchors

from .bench import Netlist
from .cones import fanin_cone, fanout_cone
from .scoap import ScoapReport, compute_scoap, mean_controllability

logger = logging.getLogger(__name__)

EVIDENCE_PLACES = 4


class CdcfKind(str, Enum):
    COMMON_EFFECT = "CommonEffect"
    PREVENTION_INFLUENCE = "PreventionInfluence"
    DETECTION_INFLUENCE = "DetectionInfluence"


class VariantRole(str, Enum):
    """What the variant netlist is relative to the analysed design"""

    WITHOUT_MEASURE = "WithoutMeasure"
    WITH_MEASURE = "WithMeasure"


@dataclass(frozen=True)
class DerivedCdcf:
    value: float
    kind: CdcfKind
    evidence: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        low = -1.0 if self.kind is CdcfKind.PREVENTION_INFLUENCE else 0.0
        if not low <= self.value <= 1.0:
            raise ValueError(f"{self.kind.value} value {self.value} out of range")


@lru_cache(maxsize=16)
def _scoap(netlist: Netlist) -> ScoapReport:
    return compute_scoap(netlist)


def _effect_cone(netlist: Netlist, effect_nets: Iterable[str]) -> frozenset:
    effect = netlist.resolve(effect_nets)
    if not effect:
        raise EmptyNetSetError("effect_nets")
    return fanin_cone(netlist, effect)


def common_effect_cdcf(
    netlist: Netlist, effect_nets: Iterable[str], attack_inputs: Iterable[str]
) -> DerivedCdcf:
    """|fanin(effect) & fanout(attack)| / |fanin(effect)|"""
    coi = _effect_cone(netlist, effect_nets)
    reachable = fanout_cone(netlist, attack_inputs)
    overlap = coi & reachable
    return DerivedCdcf(
        len(overlap) / len(coi),
        CdcfKind.COMMON_EFFECT,
        {"coi_size": len(coi), "overlap_size": len(overlap)},
    )


def prevention_cdcf(
    baseline: Netlist, with_measure: Netlist, effect_nets: Iterable[str]
) -> DerivedCdcf:
    """
    Relative change of mean controllability (cc0 + cc1) over the effect cone.

    Each cone is taken in its own netlist. Positive when the measure makes the
    effect logic harder to control.
    """
    effect = list(effect_nets)
    cone_with = _effect_cone(with_measure, effect)
    mean_with = mean_controllability(_scoap(with_measure), cone_with)
    mean_without = mean_controllability(_scoap(baseline), _effect_cone(baseline, effect))
    value = (mean_with - mean_without) / max(mean_with, mean_without)
    return DerivedCdcf(
        min(1.0, max(-1.0, value)),
        CdcfKind.PREVENTION_INFLUENCE,
        {
            "coi_size": len(cone_with),
            "mean_cc_with": round(mean_with, EVIDENCE_PLACES),
            "mean_cc_without": round(mean_without, EVIDENCE_PLACES),
        },
    )


def detection_cdcf(
    netlist: Netlist, alarm_nets: Iterable[str], effect_nets: Iterable[str]
) -> DerivedCdcf:
    """|fanin(alarm) & fanin(effect)| / |fanin(effect)|"""
    coi = _effect_cone(netlist, effect_nets)
    observed = fanin_cone(netlist, alarm_nets)
    overlap = coi & observed
    return DerivedCdcf(
        len(overlap) / len(coi),
        CdcfKind.DETECTION_INFLUENCE,
        {"coi_size": len(coi), "overlap_size": len(overlap)},
    )


@dataclass(frozen=True)
class DerivationRequest:
    """
    Inputs of a structural derivation run.

    `measure_anchors` defaults to the anchors declared on the worksheet
    measures. `measure_variants` overrides `variant_netlist` per measure id.
    """

    netlist: Netlist
    variant_netlist: Optional[Netlist] = None
    item_anchors: Mapping[str, NetAnchors] = field(default_factory=dict)
    measure_anchors: Optional[Mapping[str, NetAnchors]] = None
    variant_role: VariantRole = VariantRole.WITHOUT_MEASURE
    measure_variants: Mapping[str, Netlist] = field(default_factory=dict)

    def anchors_for(self, measure: Countermeasure) -> NetAnchors:
        if self.measure_anchors is not None:
            return self.measure_anchors.get(measure.id) or NetAnchors()
        return measure.anchors or NetAnchors()

    def variant_for(self, measure_id: str) -> Optional[Netlist]:
        return self.measure_variants.get(measure_id, self.variant_netlist)

    def validate(self, worksheet: Worksheet) -> None:
        """Every anchored net must exist in the analysed netlist"""
        if self.measure_anchors is not None:
            measures = tuple(
                Countermeasure(m.id, m.kind, m.domain, m.description, self.anchors_for(m))
                for m in worksheet.measures
            )
            worksheet = Worksheet(worksheet.items, measures, worksheet.applicability)
        errors = validate_anchors(worksheet, self.netlist, dict(self.item_anchors))
        if errors:
            first = errors[0]
            error = UnknownNetError(first.missing_net)
            error.details["owner"] = first.measure_id
            raise error


@dataclass
class Derivation:
    """Derived bundle plus the per-entry evidence written next to it"""

    bundle: CdcfBundle
    evidence: Dict[str, Dict[str, Dict[str, dict]]]

    def evidence_json(self) -> str:
        return json.dumps(self.evidence, indent=2, sort_keys=True) + "\n"


def _with_pair(error: FtmeaError, row: str, col: str) -> FtmeaError:
    error.details.setdefault("item_id", row)
    error.details.setdefault("measure_id", col)
    return error


def _union(anchor_sets: Iterable[Tuple[str, ...]]) -> Tuple[str, ...]:
    return tuple(sorted({net for nets in anchor_sets for net in nets}))


def derive(request: DerivationRequest, worksheet: Worksheet) -> Derivation:
    """
    Derive every coefficient the anchors support.

    Pairs are visited sorted by ids; a pair without the anchors its kind needs
    is skipped, never guessed.
    """
    request.validate(worksheet)
    entries: Dict[str, Dict[Tuple[str, str], float]] = {
        COMMON_EFFECT: {},
        PREVENTION: {},
        DETECTION: {},
    }
    provenance: Dict[Tuple[str, str, str], ProvenanceRecord] = {}
    evidence: Dict[str, Dict[str, Dict[str, dict]]] = {
        COMMON_EFFECT: {},
        PREVENTION: {},
        DETECTION: {},
    }

    def record(section: str, row: str, col: str, derived: DerivedCdcf, rationale: str):
        entries[section][(row, col)] = derived.value
        provenance[(section, row, col)] = ProvenanceRecord(Provenance.DERIVED, rationale)
        evidence[section].setdefault(row, {})[col] = dict(derived.evidence)

    def effect_nets_of(item_id: str) -> Tuple[str, ...]:
        anchors = request.item_anchors.get(item_id)
        if anchors and anchors.effect_nets:
            return anchors.effect_nets
        return _union(
            request.anchors_for(m).effect_nets for m in worksheet.measures_for(item_id)
        )

    for item_id, measure_id in sorted(worksheet.applicability):
        measure = worksheet.measures_by_id[measure_id]
        anchors = request.anchors_for(measure)
        item = request.item_anchors.get(item_id)
        effect = item.effect_nets if item and item.effect_nets else anchors.effect_nets
        try:
            if measure.kind is MeasureKind.DETECTION:
                if not (effect and anchors.alarm_nets):
                    logger.debug("%s/%s: no effect or alarm anchors, skipped", item_id, measure_id)
                    continue
                derived = detection_cdcf(request.netlist, anchors.alarm_nets, effect)
                record(
                    DETECTION,
                    item_id,
                    measure_id,
                    derived,
                    "alarm cone covers {overlap_size} of {coi_size} effect-cone nets".format(
                        **derived.evidence
                    ),
                )
            else:
                variant = request.variant_for(measure_id)
                if not effect or variant is None:
                    logger.debug("%s/%s: no effect anchors or variant, skipped", item_id, measure_id)
                    continue
                if request.variant_role is VariantRole.WITHOUT_MEASURE:
                    baseline, with_measure = variant, request.netlist
                else:
                    baseline, with_measure = request.netlist, variant
                derived = prevention_cdcf(baseline, with_measure, effect)
                record(
                    PREVENTION,
                    item_id,
                    measure_id,
                    derived,
                    "mean controllability {mean_cc_without} -> {mean_cc_with}".format(
                        **derived.evidence
                    ),
                )
        except FtmeaError as e:
            raise _with_pair(e, item_id, measure_id)

    by_id = sorted(worksheet.items, key=lambda i: i.id)
    failures = [i for i in by_id if i.kind is ItemKind.FAILURE_MODE]
    threats = [i for i in by_id if i.kind is ItemKind.THREAT_MODE]
    for fm in failures:
        for tm in threats:
            if fm.effect_group != tm.effect_group:
                continue
            effect = effect_nets_of(fm.id)
            own = request.item_anchors.get(tm.id)
            attack = (
                own.attack_input_nets
                if own and own.attack_input_nets
                else _union(
                    request.anchors_for(m).attack_input_nets
                    for m in worksheet.measures_for(tm.id)
                )
            )
            if not (effect and attack):
                continue
            try:
                derived = common_effect_cdcf(request.netlist, effect, attack)
            except FtmeaError as e:
                raise _with_pair(e, fm.id, tm.id)
            record(
                COMMON_EFFECT,
                fm.id,
                tm.id,
                derived,
                "attack reaches {overlap_size} of {coi_size} effect-cone nets".format(
                    **derived.evidence
                ),
            )

    rows = frozenset(worksheet.items_by_id)
    bundle = CdcfBundle(
        CommonEffectMatrix(entries[COMMON_EFFECT]),
        InfluenceMatrix(InfluenceKind.PREVENTION_INFLUENCE, entries[PREVENTION], rows),
        InfluenceMatrix(InfluenceKind.DETECTION_INFLUENCE, entries[DETECTION], rows),
        provenance,
        worksheet_digest(worksheet),
    )
    logger.info("derived %d structural CDCF entries", bundle.entry_count())
    return Derivation(bundle, evidence)


def derive_bundle(request: DerivationRequest, worksheet: Worksheet) -> CdcfBundle:
    """Derived CdcfBundle with Derived provenance on every entry"""
    return derive(request, worksheet).bundle

