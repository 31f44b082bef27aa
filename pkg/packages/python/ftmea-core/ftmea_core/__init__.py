"""
FTMEA Core Package

Integrated failure/threat mode analysis: worksheets, cross-domain correlation
factors and the corrected risk priority number.
"""

__version__ = "0.1.0"

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
from .errors import (
    FtmeaError,
    MalformedCsvError,
    RatingOutOfRangeError,
    DuplicateIdError,
    DanglingReferenceError,
    CoefficientOutOfRangeError,
    UnknownIdError,
    WrongKindError,
    InconsistentWorksheetError,
    InvalidCdcfError,
    UnknownClassLabelError,
    InvalidRiskMatrixError,
    InvalidEncodingError,
    ERROR_CODES,
)
from .worksheet import (
    parse_worksheet,
    parse_item_anchors,
    render_worksheet,
    validate_anchors,
)
from .correlation import (
    CdcfBundle,
    CommonEffectMatrix,
    InfluenceKind,
    InfluenceMatrix,
    Provenance,
    ProvenanceRecord,
    dump_cdcf,
    load_cdcf,
    merge_bundles,
    row_sum,
)
from .risk_matrix import (
    RiskMatrixConfig,
    default_risk_matrix,
    load_risk_matrix,
    unified_occurrence,
)
from .rpn import (
    RpnResult,
    compute_rpn,
    corrected_detection,
    corrected_occurrence,
    rank,
    rank_changes,
)

__all__ = [
    # Models
    "AnchorError",
    "Countermeasure",
    "Domain",
    "ItemKind",
    "MeasureKind",
    "NetAnchors",
    "RiskItem",
    "Worksheet",
    # Errors
    "FtmeaError",
    "MalformedCsvError",
    "RatingOutOfRangeError",
    "DuplicateIdError",
    "DanglingReferenceError",
    "CoefficientOutOfRangeError",
    "UnknownIdError",
    "WrongKindError",
    "InconsistentWorksheetError",
    "InvalidCdcfError",
    "UnknownClassLabelError",
    "InvalidRiskMatrixError",
    "InvalidEncodingError",
    "ERROR_CODES",
    # Worksheet I/O
    "parse_worksheet",
    "parse_item_anchors",
    "render_worksheet",
    "validate_anchors",
    # Correlation
    "CdcfBundle",
    "CommonEffectMatrix",
    "InfluenceKind",
    "InfluenceMatrix",
    "Provenance",
    "ProvenanceRecord",
    "dump_cdcf",
    "load_cdcf",
    "merge_bundles",
    "row_sum",
    # Risk matrix
    "RiskMatrixConfig",
    "default_risk_matrix",
    "load_risk_matrix",
    "unified_occurrence",
    # RPN
    "RpnResult",
    "compute_rpn",
    "corrected_detection",
    "corrected_occurrence",
    "rank",
    "rank_changes",
]
