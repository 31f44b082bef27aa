"""
Testing Utilities for FTMEA

Worksheet builders, a seeded random worksheet/bundle generator and the
configuration-register scenario used by the acceptance tests.
"""

from typing import Dict, Optional
import random

from .correlation import (
    CdcfBundle,
    CommonEffectMatrix,
    InfluenceKind,
    InfluenceMatrix,
    Provenance,
    ProvenanceRecord,
    worksheet_digest,
)
from .models import (
    Countermeasure,
    Domain,
    ItemKind,
    MeasureKind,
    NetAnchors,
    RiskItem,
    Worksheet,
)


def create_item(
    item_id: str = "FM1",
    kind: ItemKind = ItemKind.FAILURE_MODE,
    severity: int = 9,
    occurrence: int = 4,
    detection: int = 6,
    effect_group: str = "SensorWrong",
    description: str = "bit flip",
) -> RiskItem:
    """Helper to create a risk item"""
    return RiskItem(
        id=item_id,
        kind=kind,
        description=description,
        effect_group=effect_group,
        severity=severity,
        occurrence=occurrence,
        detection=detection,
    )


def create_measure(
    measure_id: str = "M1",
    kind: MeasureKind = MeasureKind.DETECTION,
    domain: Domain = Domain.SAFETY,
    anchors: Optional[NetAnchors] = None,
    description: str = "mock measure",
) -> Countermeasure:
    """Helper to create a countermeasure"""
    return Countermeasure(measure_id, kind, domain, description, anchors)


def create_bundle(
    worksheet: Worksheet,
    prevention: Optional[Dict] = None,
    detection: Optional[Dict] = None,
    common_effect: Optional[Dict] = None,
    source: Provenance = Provenance.CONFIGURED,
) -> CdcfBundle:
    """Build a bundle directly from {(row, col): value} maps"""
    rows = frozenset(item.id for item in worksheet.items)
    provenance = {}
    for section, entries in (
        ("common_effect", common_effect),
        ("prevention", prevention),
        ("detection", detection),
    ):
        for (row, col) in entries or {}:
            provenance[(section, row, col)] = ProvenanceRecord(source, source.value.lower())
    return CdcfBundle(
        CommonEffectMatrix(common_effect or {}),
        InfluenceMatrix(InfluenceKind.PREVENTION_INFLUENCE, prevention or {}, rows),
        InfluenceMatrix(InfluenceKind.DETECTION_INFLUENCE, detection or {}, rows),
        provenance,
        worksheet_digest(worksheet),
    )


def _padded(rng: random.Random, text: str) -> str:
    """Descriptions are free text; surrounding whitespace must survive I/O"""
    return rng.choice(["", " ", "  ", "\t"]) + text + rng.choice(["", " ", "\t "])


def random_worksheet(rng: random.Random, max_items: int = 8, max_measures: int = 5) -> Worksheet:
    """Random valid worksheet with random applicability"""
    items = [
        RiskItem(
            id=f"I{i}",
            kind=rng.choice(list(ItemKind)),
            description=_padded(rng, f"mode {i}"),
            effect_group=rng.choice(["EG_A", "EG_B", "EG_C"]),
            severity=rng.randint(1, 10),
            occurrence=rng.randint(1, 10),
            detection=rng.randint(1, 10),
        )
        for i in range(rng.randint(1, max_items))
    ]
    measures = [
        Countermeasure(
            id=f"M{j}",
            kind=rng.choice(list(MeasureKind)),
            domain=rng.choice(list(Domain)),
            description=_padded(rng, f"measure {j}"),
        )
        for j in range(rng.randint(0, max_measures))
    ]
    pairs = [
        (item.id, m.id) for item in items for m in measures if rng.random() < 0.5
    ]
    return Worksheet(tuple(items), tuple(measures), tuple(pairs))


def random_bundle(
    rng: random.Random, worksheet: Worksheet, nonnegative: bool = False
) -> CdcfBundle:
    """Random coefficients on every applicable pair (kind-matched)"""
    low = 0.0 if nonnegative else -1.0
    prevention, detection = {}, {}
    for item_id, measure_id in worksheet.applicability:
        value = round(rng.uniform(low, 1.0), 4)
        if worksheet.measures_by_id[measure_id].kind is MeasureKind.PREVENTION:
            prevention[(item_id, measure_id)] = value
        else:
            detection[(item_id, measure_id)] = value
    return create_bundle(worksheet, prevention, detection)


# Configuration register scenario: one effect group, three failure modes and
# one threat mode sharing the "wrong sensor data" effect.
CASE_STUDY_ITEMS_CSV = """\
id,kind,description,effect_group,S,O,D
FM1,FailureMode,Bit flip in configuration register,WrongSensorData,9,4,6
FM2,FailureMode,Unintended write operation,WrongSensorData,9,3,7
FM3,FailureMode,Fault in write handling logic,WrongSensorData,9,3,5
TM1,ThreatMode,Malicious overwrite of calibration,WrongSensorData,9,6,4
"""

CASE_STUDY_MEASURES_CSV = """\
id,kind,domain,description,effect_nets,alarm_nets,attack_input_nets
M_SAF_PARITY,Detection,Safety,Register parity check,q0;q1,par_err,
M_SEC_LOCK,Detection,Security,Lock violation alarm,q0;q1,lock_alarm,wr_req
M_SEC_KEY,Prevention,Security,Secret key lock on register writes,q0;q1,,key_in
"""

CASE_STUDY_APPLICABILITY_CSV = """\
item_id,measure_id
FM1,M_SAF_PARITY
FM2,M_SAF_PARITY
FM2,M_SEC_LOCK
FM3,M_SEC_LOCK
TM1,M_SEC_KEY
"""

CASE_STUDY_CDCF_JSON = """\
{
  "common_effect": {"FM2": {"TM1": 1.0}, "FM3": {"TM1": 0.5}},
  "prevention": {"TM1": {"M_SEC_KEY": 1.0}},
  "detection": {"FM2": {"M_SEC_LOCK": 1.0}, "FM3": {"M_SEC_LOCK": 0.5}}
}
"""

# Hand evaluation of the corrected ratings:
#   TM1: O = 6 - 6 * 1.0 = 0 -> clamped to 1;   RPN 9*6*4 = 216 -> 9*1*4 = 36  (83.33 %)
#   FM2: D = 7 - 7 * 1.0 = 0 -> clamped to 1;   RPN 9*3*7 = 189 -> 9*3*1 = 27  (85.71 %)
#   FM3: D = 5 - 5 * 0.5 = 2.5 -> floor 2;      RPN 9*3*5 = 135 -> 9*3*2 = 54  (60.00 %)
#   FM1: no cross-domain coefficient;           RPN 216 -> 216                 (0.00 %)
CASE_STUDY_EXPECTED: Dict[str, Dict[str, float]] = {
    "TM1": {"o_corr": 1, "d_corr": 4, "rpn_base": 216, "rpn_corr": 36, "improvement_pct": 83.33},
    "FM2": {"o_corr": 3, "d_corr": 1, "rpn_base": 189, "rpn_corr": 27, "improvement_pct": 85.71},
    "FM3": {"o_corr": 3, "d_corr": 2, "rpn_base": 135, "rpn_corr": 54, "improvement_pct": 60.00},
    "FM1": {"o_corr": 4, "d_corr": 6, "rpn_base": 216, "rpn_corr": 216, "improvement_pct": 0.00},
}