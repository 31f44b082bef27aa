"""
Worksheet Ingestion

CSV readers and writers for FMEA/TARA worksheets, countermeasure registries and
applicability tables.
"""

from typing import Dict, Iterable, Iterator, List, Optional, Protocol, Sequence, Tuple
import csv
import io
import logging
import re

from .errors import FtmeaError, MalformedCsvError, RatingOutOfRangeError
from .models import (
    AnchorError,
    Countermeasure,
    Domain,
    ItemKind,
    MeasureKind,
    NetAnchors,
    RiskItem,
    Worksheet,
)
from .risk_matrix import RiskMatrixConfig, default_risk_matrix, unified_occurrence

logger = logging.getLogger(__name__)

ITEM_COLUMNS = ["id", "kind", "description", "effect_group", "S", "O", "D"]
ITEM_CLASS_COLUMNS = ["failure_class", "feasibility_class"]
MEASURE_COLUMNS = [
    "id",
    "kind",
    "domain",
    "description",
    "effect_nets",
    "alarm_nets",
    "attack_input_nets",
]
APPLICABILITY_COLUMNS = ["item_id", "measure_id"]
ITEM_ANCHOR_COLUMNS = ["item_id", "effect_nets", "alarm_nets", "attack_input_nets"]

NET_LIST_SEPARATOR = ";"
# free text, kept exactly as written
VERBATIM_COLUMNS = ("description",)

_INT_RE = re.compile(r"[+-]?\d+")


class NetLookup(Protocol):
    """Anything that can answer whether a net name exists (e.g. a Netlist)"""

    def __contains__(self, name: object) -> bool: ...


def _rows(
    csv_text: str,
    columns: Sequence[str],
    source: str,
    optional: Sequence[str] = (),
    verbatim: Sequence[str] = (),
) -> Iterator[Tuple[int, Dict[str, str]]]:
    """
    Yield (line, row) pairs after checking header and column counts.

    Cells are stripped except those of the `verbatim` columns.
    """
    reader = csv.reader(io.StringIO(csv_text))
    header = None
    for record in reader:
        if not record or all(not cell.strip() for cell in record):
            continue
        cells = [cell.strip() for cell in record]
        if header is None:
            allowed = (list(columns), list(columns) + list(optional))
            if cells not in allowed:
                raise MalformedCsvError(
                    f"expected header {','.join(columns)}, got {','.join(cells)}",
                    source=source,
                    line=reader.line_num,
                )
            header = cells
            continue
        if len(cells) != len(header):
            raise MalformedCsvError(
                f"expected {len(header)} columns, got {len(cells)}",
                source=source,
                line=reader.line_num,
            )
        yield reader.line_num, {
            name: raw if name in verbatim else cell
            for name, raw, cell in zip(header, record, cells)
        }
    if header is None:
        raise MalformedCsvError("missing header", source=source, line=1)


def _enum(enum_cls, value: str, field: str):
    try:
        return enum_cls(value)
    except ValueError:
        allowed = ", ".join(member.value for member in enum_cls)
        raise MalformedCsvError(f"{field} must be one of {allowed}, got {value!r}")


def _rating(field: str, text: str) -> int:
    if _INT_RE.fullmatch(text):
        return int(text)
    try:
        value = float(text)
    except ValueError:
        raise MalformedCsvError(f"{field} is not a number: {text!r}")
    # fractional ratings are rejected, never rounded
    raise RatingOutOfRangeError(field, value)


def _net_list(text: str) -> Tuple[str, ...]:
    return tuple(part.strip() for part in text.split(NET_LIST_SEPARATOR) if part.strip())


def _anchors(row: Dict[str, str]) -> Optional[NetAnchors]:
    anchors = NetAnchors(
        effect_nets=_net_list(row["effect_nets"]),
        alarm_nets=_net_list(row["alarm_nets"]),
        attack_input_nets=_net_list(row["attack_input_nets"]),
    )
    return None if anchors.is_empty() else anchors


def parse_items(
    csv_text: str,
    risk_matrix: Optional[RiskMatrixConfig] = None,
    source: str = "<worksheet>",
) -> List[RiskItem]:
    """Parse the FM/TM worksheet rows"""
    items = []
    for line, row in _rows(
        csv_text, ITEM_COLUMNS, source, ITEM_CLASS_COLUMNS, verbatim=VERBATIM_COLUMNS
    ):
        try:
            failure_class = row.get("failure_class") or None
            feasibility_class = row.get("feasibility_class") or None
            if row["O"] == "" and failure_class and feasibility_class:
                occurrence = unified_occurrence(
                    failure_class, feasibility_class, risk_matrix or default_risk_matrix()
                )
            else:
                occurrence = _rating("O", row["O"])
                if failure_class and feasibility_class:
                    logger.warning(
                        "%s: explicit O=%d overrides risk matrix classes %s/%s",
                        row["id"],
                        occurrence,
                        failure_class,
                        feasibility_class,
                    )
            items.append(
                RiskItem(
                    id=row["id"],
                    kind=_enum(ItemKind, row["kind"], "kind"),
                    description=row["description"],
                    effect_group=row["effect_group"],
                    severity=_rating("S", row["S"]),
                    occurrence=occurrence,
                    detection=_rating("D", row["D"]),
                    failure_class=failure_class,
                    feasibility_class=feasibility_class,
                )
            )
        except FtmeaError as e:
            raise e.with_context(source, line)
    logger.debug("parsed %d risk items from %s", len(items), source)
    return items


def parse_measures(csv_text: str, source: str = "<measures>") -> List[Countermeasure]:
    """Parse the countermeasure registry"""
    measures = []
    for line, row in _rows(csv_text, MEASURE_COLUMNS, source, verbatim=VERBATIM_COLUMNS):
        try:
            measures.append(
                Countermeasure(
                    id=row["id"],
                    kind=_enum(MeasureKind, row["kind"], "kind"),
                    domain=_enum(Domain, row["domain"], "domain"),
                    description=row["description"],
                    anchors=_anchors(row),
                )
            )
        except FtmeaError as e:
            raise e.with_context(source, line)
    return measures


def parse_applicability(
    csv_text: str, source: str = "<applicability>"
) -> List[Tuple[str, str]]:
    return [
        (row["item_id"], row["measure_id"])
        for _, row in _rows(csv_text, APPLICABILITY_COLUMNS, source)
    ]


def parse_item_anchors(
    csv_text: str, source: str = "<item-anchors>"
) -> Dict[str, NetAnchors]:
    """Parse per-item effect/alarm/attack anchors"""
    anchors: Dict[str, NetAnchors] = {}
    for line, row in _rows(csv_text, ITEM_ANCHOR_COLUMNS, source):
        try:
            if row["item_id"] in anchors:
                raise MalformedCsvError(f"item {row['item_id']} anchored twice")
            anchors[row["item_id"]] = _anchors(row) or NetAnchors()
        except FtmeaError as e:
            raise e.with_context(source, line)
    return anchors


def parse_worksheet(
    csv_text: str,
    measures_text: Optional[str] = None,
    applicability_text: Optional[str] = None,
    risk_matrix: Optional[RiskMatrixConfig] = None,
    sources: Tuple[str, str, str] = ("<worksheet>", "<measures>", "<applicability>"),
) -> Worksheet:
    """
    Build a validated Worksheet from its three CSV documents.

    Only the item CSV is required; missing measures/applicability mean none.
    """
    items = parse_items(csv_text, risk_matrix, sources[0])
    measures = parse_measures(measures_text, sources[1]) if measures_text else []
    pairs = parse_applicability(applicability_text, sources[2]) if applicability_text else []
    try:
        worksheet = Worksheet(tuple(items), tuple(measures), tuple(pairs))
    except FtmeaError as e:
        what = e.details.get("what")
        if what == "item id":
            raise e.with_context(sources[0])
        if what == "measure id":
            raise e.with_context(sources[1])
        raise e.with_context(sources[2])
    logger.info(
        "worksheet: %d items, %d measures, %d applicability pairs",
        len(items),
        len(measures),
        len(pairs),
    )
    return worksheet


def _write(header: List[str], rows: Iterable[List[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def render_items(items: Sequence[RiskItem]) -> str:
    with_classes = any(item.failure_class or item.feasibility_class for item in items)
    header = ITEM_COLUMNS + (ITEM_CLASS_COLUMNS if with_classes else [])
    rows = []
    for item in items:
        row = [
            item.id,
            item.kind.value,
            item.description,
            item.effect_group,
            str(item.severity),
            str(item.occurrence),
            str(item.detection),
        ]
        if with_classes:
            row += [item.failure_class or "", item.feasibility_class or ""]
        rows.append(row)
    return _write(header, rows)


def render_measures(measures: Sequence[Countermeasure]) -> str:
    rows = []
    for m in measures:
        anchors = m.anchors or NetAnchors()
        rows.append(
            [
                m.id,
                m.kind.value,
                m.domain.value,
                m.description,
                NET_LIST_SEPARATOR.join(anchors.effect_nets),
                NET_LIST_SEPARATOR.join(anchors.alarm_nets),
                NET_LIST_SEPARATOR.join(anchors.attack_input_nets),
            ]
        )
    return _write(MEASURE_COLUMNS, rows)


def render_applicability(pairs: Sequence[Tuple[str, str]]) -> str:
    return _write(APPLICABILITY_COLUMNS, [list(pair) for pair in pairs])


def render_worksheet(worksheet: Worksheet) -> Tuple[str, str, str]:
    """Inverse of parse_worksheet: (items, measures, applicability) CSV texts"""
    return (
        render_items(worksheet.items),
        render_measures(worksheet.measures),
        render_applicability(worksheet.applicability),
    )


def validate_anchors(
    worksheet: Worksheet,
    netlist: NetLookup,
    item_anchors: Optional[Dict[str, NetAnchors]] = None,
) -> List[AnchorError]:
    """
    Check every anchored net name against a netlist.

    Returns one AnchorError per missing (owner, net); item anchors report the
    item id in the measure_id slot.
    """
    errors: List[AnchorError] = []
    owners = [(m.id, m.anchors) for m in worksheet.measures]
    owners += sorted((item_anchors or {}).items())
    for owner, anchors in owners:
        if anchors is None:
            continue
        reported = set()
        for net in anchors.all_nets():
            if net not in netlist and net not in reported:
                reported.add(net)
                errors.append(AnchorError(owner, net))
    return errors
