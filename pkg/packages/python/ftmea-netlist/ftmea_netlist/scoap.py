"""
SCOAP Testability

Combinational controllability (CC0/CC1) and observability (CO) per net.
DFF Q nets are scored as primary inputs and DFF D nets as primary outputs.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple
import csv
import io
import logging

from ftmea_core.errors import EmptyNetSetError, ScoapOverflowError, UnknownNetError

from .bench import Gate, GateKind, Netlist

logger = logging.getLogger(__name__)

SCORE_LIMIT = 2**63 - 1
SCOAP_COLUMNS = ["net", "cc0", "cc1", "co"]

Pair = Tuple[int, int]  # (cc0, cc1)


@dataclass(frozen=True)
class ScoapReport:
    """
    Per-net SCOAP scores.

    `co` is None for nets with no path to any (pseudo-)primary output.
    """

    nets: Tuple[str, ...]
    cc0: Mapping[str, int]
    cc1: Mapping[str, int]
    co: Mapping[str, Optional[int]]

    def __contains__(self, net: object) -> bool:
        return net in self.cc0

    def controllability(self, net: str) -> int:
        """cc0 + cc1"""
        if net not in self.cc0:
            raise UnknownNetError(net)
        return self.cc0[net] + self.cc1[net]

    def rows(self) -> List[Tuple[str, int, int, Optional[int]]]:
        return [(net, self.cc0[net], self.cc1[net], self.co[net]) for net in self.nets]


def _check(net: str, value: int) -> int:
    if value > SCORE_LIMIT:
        raise ScoapOverflowError(net, value)
    return value


def _xor_stages(operands: Sequence[Pair], invert_last: bool) -> List[Pair]:
    """Controllability of each stage of a left-associative 2-input XOR chain"""
    stages = []
    left = operands[0]
    for position, right in enumerate(operands[1:], start=1):
        odd = min(left[0] + right[1], left[1] + right[0]) + 1
        even = min(left[0] + right[0], left[1] + right[1]) + 1
        if invert_last and position == len(operands) - 1:
            left = (odd, even)
        else:
            left = (even, odd)
        stages.append(left)
    return stages


def _controllability(gate: Gate, cc: Dict[str, Pair]) -> Pair:
    ins = [cc[net] for net in gate.inputs]
    zeros = [c[0] for c in ins]
    ones = [c[1] for c in ins]
    kind = gate.kind
    if kind is GateKind.AND:
        return min(zeros) + 1, sum(ones) + 1
    if kind is GateKind.NAND:
        return sum(ones) + 1, min(zeros) + 1
    if kind is GateKind.OR:
        return sum(zeros) + 1, min(ones) + 1
    if kind is GateKind.NOR:
        return min(ones) + 1, sum(zeros) + 1
    if kind is GateKind.NOT:
        return ones[0] + 1, zeros[0] + 1
    if kind is GateKind.BUFF:
        return zeros[0] + 1, ones[0] + 1
    # XOR / XNOR
    return _xor_stages(ins, invert_last=kind is GateKind.XNOR)[-1]


def _input_observability(gate: Gate, co_out: int, cc: Dict[str, Pair]) -> List[int]:
    """CO of each input pin of a gate, in pin order"""
    ins = [cc[net] for net in gate.inputs]
    kind = gate.kind
    if kind in (GateKind.NOT, GateKind.BUFF):
        return [co_out + 1]
    if kind in (GateKind.AND, GateKind.NAND):
        # side inputs held at the non-controlling value 1
        total = sum(c[1] for c in ins)
        return [co_out + total - c[1] + 1 for c in ins]
    if kind in (GateKind.OR, GateKind.NOR):
        total = sum(c[0] for c in ins)
        return [co_out + total - c[0] + 1 for c in ins]

    # XOR / XNOR: walk the chain backwards, either value of the other operand works
    stages = _xor_stages(ins, invert_last=kind is GateKind.XNOR)
    result = [0] * len(ins)
    co_stage = co_out
    for position in range(len(ins) - 1, 0, -1):
        left = ins[0] if position == 1 else stages[position - 2]
        right = ins[position]
        result[position] = co_stage + min(left) + 1
        co_left = co_stage + min(right) + 1
        if position == 1:
            result[0] = co_left
        co_stage = co_left
    return result


def compute_scoap(netlist: Netlist) -> ScoapReport:
    """Controllability forward in topological order, observability backward"""
    cc: Dict[str, Pair] = {net: (1, 1) for net in netlist.pseudo_inputs}
    for gate in netlist.topo_order:
        zero, one = _controllability(gate, cc)
        cc[gate.output] = (_check(gate.output, zero), _check(gate.output, one))

    co: Dict[str, Optional[int]] = {net: None for net in netlist.nets}
    for net in netlist.pseudo_outputs:
        co[net] = 0
    for gate in reversed(netlist.topo_order):
        co_out = co[gate.output]
        if co_out is None:
            continue
        for net, value in zip(gate.inputs, _input_observability(gate, co_out, cc)):
            _check(net, value)
            if co[net] is None or value < co[net]:
                co[net] = value

    unobservable = sum(1 for value in co.values() if value is None)
    if unobservable:
        logger.debug("%d nets have no path to an output", unobservable)

    return ScoapReport(
        nets=netlist.nets,
        cc0={net: cc[net][0] for net in netlist.nets},
        cc1={net: cc[net][1] for net in netlist.nets},
        co=co,
    )


def mean_controllability(report: ScoapReport, nets: Iterable[str]) -> float:
    """Arithmetic mean of cc0 + cc1 over a net set"""
    unique = sorted(set(nets))
    if not unique:
        raise EmptyNetSetError("mean_controllability")
    return sum(report.controllability(net) for net in unique) / len(unique)


def render_scoap_csv(report: ScoapReport) -> str:
    """`net,cc0,cc1,co` in net declaration order; unobservable nets get an empty co"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SCOAP_COLUMNS)
    for net, zero, one, obs in report.rows():
        writer.writerow([net, zero, one, "" if obs is None else obs])
    return buffer.getvalue()
