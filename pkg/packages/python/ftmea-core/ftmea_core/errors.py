"""
FTMEA Error Classes

Defines all exception types raised by the FTMEA packages.
"""

from typing import Any, Dict, Optional


class FtmeaError(Exception):
    """Base exception for FTMEA analysis errors"""

    def __init__(
        self,
        message: str,
        code: str,
        details: Optional[Dict[str, Any]] = None,
        source: Optional[str] = None,
        line: Optional[int] = None,
    ):
        self.message = message
        self.code = code
        self.details = dict(details or {})
        if source is not None:
            self.details["source"] = source
        if line is not None:
            self.details["line"] = line
        super().__init__(message)

    @property
    def source(self) -> Optional[str]:
        return self.details.get("source")

    @property
    def line(self) -> Optional[int]:
        return self.details.get("line")

    def with_context(
        self, source: Optional[str] = None, line: Optional[int] = None
    ) -> "FtmeaError":
        """Attach file/line context (keeps existing values)"""
        if source is not None and "source" not in self.details:
            self.details["source"] = source
        if line is not None and "line" not in self.details:
            self.details["line"] = line
        return self

    def __str__(self) -> str:
        return f"[{self.code}] {self.message}"


# --- risk-model ---


class MalformedCsvError(FtmeaError):
    """CSV text does not follow the expected schema"""

    def __init__(self, reason: str, **context):
        super().__init__(
            f"Malformed CSV: {reason}", "MALFORMED_CSV", {"reason": reason}, **context
        )


class RatingOutOfRangeError(FtmeaError):
    """S/O/D rating outside 1-10 or not integral"""

    def __init__(self, field: str, value: Any, **context):
        self.field = field
        self.value = value
        super().__init__(
            f"Rating {field}={value!r} must be an integer in [1, 10]",
            "RATING_OUT_OF_RANGE",
            {"field": field, "value": value},
            **context,
        )


class DuplicateIdError(FtmeaError):
    """Identifier declared twice"""

    def __init__(self, identifier: str, what: str = "id", **context):
        self.identifier = identifier
        super().__init__(
            f"Duplicate {what}: {identifier}",
            "DUPLICATE_ID",
            {"id": identifier, "what": what},
            **context,
        )


class DanglingReferenceError(FtmeaError):
    """Applicability pair references an unknown id"""

    def __init__(self, identifier: str, what: str, **context):
        self.identifier = identifier
        super().__init__(
            f"Reference to unknown {what}: {identifier}",
            "DANGLING_REFERENCE",
            {"id": identifier, "what": what},
            **context,
        )


# --- correlation ---


class CoefficientOutOfRangeError(FtmeaError):
    """CDCF coefficient outside its allowed interval"""

    def __init__(self, key: str, value: Any, low: float, high: float, **context):
        super().__init__(
            f"Coefficient {key}={value!r} outside [{low:g}, {high:g}]",
            "COEFFICIENT_OUT_OF_RANGE",
            {"key": key, "value": value, "low": low, "high": high},
            **context,
        )


class UnknownIdError(FtmeaError):
    """Identifier not present in the worksheet"""

    def __init__(self, identifier: str, reason: Optional[str] = None, **context):
        self.identifier = identifier
        super().__init__(
            f"Unknown id {identifier}" + (f": {reason}" if reason else ""),
            "UNKNOWN_ID",
            {"id": identifier, "reason": reason},
            **context,
        )


class WrongKindError(FtmeaError):
    """Coefficient attached to an entity of the wrong kind"""

    def __init__(self, identifier: str, expected: str, actual: str, **context):
        super().__init__(
            f"{identifier} is {actual}, expected {expected}",
            "WRONG_KIND",
            {"id": identifier, "expected": expected, "actual": actual},
            **context,
        )


class InconsistentWorksheetError(FtmeaError):
    """Bundles built against different worksheets"""

    def __init__(self, left: str, right: str):
        super().__init__(
            f"Bundles reference different worksheets ({left[:12]} != {right[:12]})",
            "INCONSISTENT_WORKSHEET",
            {"left": left, "right": right},
        )


class InvalidCdcfError(FtmeaError):
    """CDCF document is not valid JSON of the expected shape"""

    def __init__(self, reason: str, **context):
        super().__init__(
            f"Invalid CDCF document: {reason}", "INVALID_CDCF", {"reason": reason}, **context
        )


# --- rpn-engine ---


class UnknownClassLabelError(FtmeaError):
    """Risk matrix class label not configured"""

    def __init__(self, label: str, axis: str):
        super().__init__(
            f"Unknown {axis} class label: {label}",
            "UNKNOWN_CLASS_LABEL",
            {"label": label, "axis": axis},
        )


class InvalidRiskMatrixError(FtmeaError):
    """Risk matrix configuration violates its invariants"""

    def __init__(self, reason: str, **context):
        super().__init__(
            f"Invalid risk matrix: {reason}",
            "INVALID_RISK_MATRIX",
            {"reason": reason},
            **context,
        )


# --- netlist-ir ---


class BenchSyntaxError(FtmeaError):
    """Bench line does not match the grammar"""

    def __init__(self, text: str, line: Optional[int] = None, **context):
        super().__init__(
            f"Syntax error: {text!r}", "BENCH_SYNTAX", {"text": text}, line=line, **context
        )


class UndrivenNetError(FtmeaError):
    """Net used but never driven"""

    def __init__(self, net: str, **context):
        super().__init__(
            f"Net {net} is used but never driven", "UNDRIVEN_NET", {"net": net}, **context
        )


class MultiplyDrivenNetError(FtmeaError):
    """Net driven by more than one source"""

    def __init__(self, net: str, **context):
        super().__init__(
            f"Net {net} has more than one driver",
            "MULTIPLY_DRIVEN_NET",
            {"net": net},
            **context,
        )


class CombinationalLoopError(FtmeaError):
    """Cycle not broken by a flip-flop"""

    def __init__(self, nets):
        cycle = list(nets)
        super().__init__(
            f"Combinational loop through {' -> '.join(cycle)}",
            "COMBINATIONAL_LOOP",
            {"nets": cycle},
        )


class UnknownGateKindError(FtmeaError):
    """Gate keyword not supported"""

    def __init__(self, kind: str, **context):
        super().__init__(
            f"Unknown gate kind: {kind}", "UNKNOWN_GATE_KIND", {"kind": kind}, **context
        )


class UnknownNetError(FtmeaError):
    """Net name not present in the netlist"""

    def __init__(self, net: str, **context):
        self.net = net
        super().__init__(f"Unknown net: {net}", "UNKNOWN_NET", {"net": net}, **context)


# --- scoap / structural-cdcf ---


class EmptyNetSetError(FtmeaError):
    """Operation requires a non-empty net set"""

    def __init__(self, what: str):
        super().__init__(f"Empty net set: {what}", "EMPTY_NET_SET", {"what": what})


class ScoapOverflowError(FtmeaError):
    """SCOAP score exceeded the representable bound"""

    def __init__(self, net: str, value: int):
        super().__init__(
            f"SCOAP score for {net} overflows ({value})",
            "SCOAP_OVERFLOW",
            {"net": net, "value": value},
        )


# --- fault-sim ---


class IncompleteVectorError(FtmeaError):
    """Simulation vector does not assign every pseudo-primary input"""

    def __init__(self, missing):
        missing = sorted(missing)
        super().__init__(
            f"Vector misses inputs: {', '.join(missing)}",
            "INCOMPLETE_VECTOR",
            {"missing": missing},
        )


class ExhaustiveLimitExceededError(FtmeaError):
    """Exhaustive enumeration requested above the input limit"""

    def __init__(self, inputs: int, limit: int):
        super().__init__(
            f"Exhaustive mode over {inputs} inputs exceeds the limit of {limit}",
            "EXHAUSTIVE_LIMIT_EXCEEDED",
            {"inputs": inputs, "limit": limit},
        )


class InvalidAttackInputsError(FtmeaError):
    """Attack inputs must be pseudo-primary inputs"""

    def __init__(self, nets):
        nets = sorted(nets)
        super().__init__(
            f"Attack inputs are not pseudo-primary inputs: {', '.join(nets)}",
            "INVALID_ATTACK_INPUTS",
            {"nets": nets},
        )


# --- cli ---


class InvalidReportError(FtmeaError):
    """RPN report file cannot be read back"""

    def __init__(self, reason: str, **context):
        super().__init__(
            f"Invalid report: {reason}", "INVALID_REPORT", {"reason": reason}, **context
        )


class InvalidEncodingError(FtmeaError):
    """Input file is not UTF-8 text"""

    def __init__(self, reason: str, **context):
        super().__init__(
            f"Input is not valid UTF-8: {reason}",
            "INVALID_ENCODING",
            {"reason": reason},
            **context,
        )


# Error code reference for documentation and tooling
ERROR_CODES = {
    "MALFORMED_CSV": {
        "code": "MALFORMED_CSV",
        "message": "CSV row or header does not follow the schema",
        "exit_code": 1,
        "user_action": "Fix the column count or header of the reported line",
    },
    "RATING_OUT_OF_RANGE": {
        "code": "RATING_OUT_OF_RANGE",
        "message": "Severity/Occurrence/Detection outside 1-10 or fractional",
        "exit_code": 1,
        "user_action": "Use integral ratings between 1 and 10",
    },
    "DUPLICATE_ID": {
        "code": "DUPLICATE_ID",
        "message": "Identifier or applicability pair declared twice",
        "exit_code": 1,
        "user_action": "Rename or remove the duplicate row",
    },
    "DANGLING_REFERENCE": {
        "code": "DANGLING_REFERENCE",
        "message": "Applicability references an unknown item or measure",
        "exit_code": 1,
        "user_action": "Declare the item/measure or drop the pair",
    },
    "COEFFICIENT_OUT_OF_RANGE": {
        "code": "COEFFICIENT_OUT_OF_RANGE",
        "message": "CDCF outside [0,1] (common effect) or [-1,1] (influence)",
        "exit_code": 1,
        "user_action": "Correct the coefficient in the CDCF file",
    },
    "UNKNOWN_ID": {
        "code": "UNKNOWN_ID",
        "message": "Identifier not found in the worksheet",
        "exit_code": 1,
        "user_action": "Check spelling against the worksheet ids",
    },
    "WRONG_KIND": {
        "code": "WRONG_KIND",
        "message": "Coefficient attached to the wrong kind of mode or measure",
        "exit_code": 1,
        "user_action": "Move the coefficient to the matching matrix",
    },
    "INCONSISTENT_WORKSHEET": {
        "code": "INCONSISTENT_WORKSHEET",
        "message": "Merged bundles were built against different worksheets",
        "exit_code": 1,
        "user_action": "Re-derive CDCFs against the current worksheet",
    },
    "INVALID_CDCF": {
        "code": "INVALID_CDCF",
        "message": "CDCF JSON malformed or uses scientific notation",
        "exit_code": 1,
        "user_action": "Write coefficients as plain decimals in the documented layout",
    },
    "UNKNOWN_CLASS_LABEL": {
        "code": "UNKNOWN_CLASS_LABEL",
        "message": "Risk matrix class label not configured",
        "exit_code": 1,
        "user_action": "Use a label listed in the risk matrix configuration",
    },
    "INVALID_RISK_MATRIX": {
        "code": "INVALID_RISK_MATRIX",
        "message": "Risk matrix is not total, in range and monotone",
        "exit_code": 1,
        "user_action": "Fix the risk matrix configuration file",
    },
    "BENCH_SYNTAX": {
        "code": "BENCH_SYNTAX",
        "message": "Netlist line does not match the bench grammar",
        "exit_code": 1,
        "user_action": "Fix the reported netlist line",
    },
    "UNDRIVEN_NET": {
        "code": "UNDRIVEN_NET",
        "message": "Net used without a driver",
        "exit_code": 1,
        "user_action": "Declare the net as INPUT or drive it with a gate",
    },
    "MULTIPLY_DRIVEN_NET": {
        "code": "MULTIPLY_DRIVEN_NET",
        "message": "Net has more than one driver",
        "exit_code": 1,
        "user_action": "Keep a single driver per net",
    },
    "COMBINATIONAL_LOOP": {
        "code": "COMBINATIONAL_LOOP",
        "message": "Cycle not broken by a DFF",
        "exit_code": 1,
        "user_action": "Insert a flip-flop or break the feedback path",
    },
    "UNKNOWN_GATE_KIND": {
        "code": "UNKNOWN_GATE_KIND",
        "message": "Gate keyword not supported",
        "exit_code": 1,
        "user_action": "Use AND, OR, NAND, NOR, XOR, XNOR, NOT, BUFF or DFF",
    },
    "UNKNOWN_NET": {
        "code": "UNKNOWN_NET",
        "message": "Net name not present in the netlist",
        "exit_code": 1,
        "user_action": "Check anchors and roots against the netlist",
    },
    "EMPTY_NET_SET": {
        "code": "EMPTY_NET_SET",
        "message": "Operation requires at least one net",
        "exit_code": 1,
        "user_action": "Provide effect/root nets",
    },
    "SCOAP_OVERFLOW": {
        "code": "SCOAP_OVERFLOW",
        "message": "SCOAP score exceeds the 64-bit bound",
        "exit_code": 1,
        "user_action": "Analyse a smaller partition of the design",
    },
    "INCOMPLETE_VECTOR": {
        "code": "INCOMPLETE_VECTOR",
        "message": "Simulation vector misses pseudo-primary inputs",
        "exit_code": 1,
        "user_action": "Assign every INPUT and DFF output",
    },
    "EXHAUSTIVE_LIMIT_EXCEEDED": {
        "code": "EXHAUSTIVE_LIMIT_EXCEEDED",
        "message": "Too many inputs for exhaustive enumeration",
        "exit_code": 1,
        "user_action": "Use sampled vectors with a seed",
    },
    "INVALID_ATTACK_INPUTS": {
        "code": "INVALID_ATTACK_INPUTS",
        "message": "Attack inputs must be INPUTs or DFF outputs",
        "exit_code": 1,
        "user_action": "Anchor attack inputs on pseudo-primary inputs",
    },
    "INVALID_REPORT": {
        "code": "INVALID_REPORT",
        "message": "RPN report cannot be parsed",
        "exit_code": 1,
        "user_action": "Pass reports written by 'ftmea analyze'",
    },
    "INVALID_ENCODING": {
        "code": "INVALID_ENCODING",
        "message": "Input file cannot be decoded as UTF-8",
        "exit_code": 1,
        "user_action": "Re-save the file as UTF-8 text",
    },
}
