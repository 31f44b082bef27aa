"""
Bench Netlist Parser

Parses ISCAS-style .bench text into an immutable Netlist. Flip-flops cut the
design into a combinational view: a DFF's Q net is a pseudo-primary input and
its D net a pseudo-primary output.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple
import logging
import re

import networkx as nx

from ftmea_core.errors import (
    BenchSyntaxError,
    CombinationalLoopError,
    FtmeaError,
    MultiplyDrivenNetError,
    UndrivenNetError,
    UnknownGateKindError,
    UnknownNetError,
)

logger = logging.getLogger(__name__)

_NAME = r"[A-Za-z_][A-Za-z0-9_.]*"
_PORT_RE = re.compile(rf"(INPUT|OUTPUT)\s*\(\s*({_NAME})\s*\)")
_GATE_RE = re.compile(
    rf"({_NAME})\s*=\s*([A-Za-z]+)\s*\(\s*({_NAME}(?:\s*,\s*{_NAME})*)\s*\)"
)

NetSet = FrozenSet[str]


class GateKind(str, Enum):
    AND = "AND"
    OR = "OR"
    NAND = "NAND"
    NOR = "NOR"
    XOR = "XOR"
    XNOR = "XNOR"
    NOT = "NOT"
    BUFF = "BUFF"
    DFF = "DFF"

    @property
    def is_unary(self) -> bool:
        return self in (GateKind.NOT, GateKind.BUFF, GateKind.DFF)


_ALIASES = {"BUF": GateKind.BUFF}


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    inputs: Tuple[str, ...]
    output: str

    def __post_init__(self):
        if self.kind.is_unary and len(self.inputs) != 1:
            raise BenchSyntaxError(f"{self.kind.value} takes exactly one input")
        if not self.kind.is_unary and len(self.inputs) < 2:
            raise BenchSyntaxError(f"{self.kind.value} needs at least two inputs")

    def __str__(self) -> str:
        return f"{self.output} = {self.kind.value}({', '.join(self.inputs)})"


class Netlist:
    """
    Gate-level circuit with its combinational DAG.

    `graph` has one node per net and an edge input -> output for every
    combinational gate; DFFs contribute no edge, so the graph is acyclic.
    """

    def __init__(
        self,
        nets: Sequence[str],
        gates: Sequence[Gate],
        primary_inputs: Sequence[str],
        primary_outputs: Sequence[str],
        name: Optional[str] = None,
    ):
        self.name = name
        self.nets: Tuple[str, ...] = tuple(nets)
        self.gates: Tuple[Gate, ...] = tuple(gates)
        self.primary_inputs: Tuple[str, ...] = tuple(primary_inputs)
        self.primary_outputs: Tuple[str, ...] = tuple(primary_outputs)
        self.dff_boundaries: Tuple[Tuple[str, str], ...] = tuple(
            (g.inputs[0], g.output) for g in self.gates if g.kind is GateKind.DFF
        )
        self._index = {net: i for i, net in enumerate(self.nets)}
        self._drivers: Dict[str, Gate] = {g.output: g for g in self.gates}

        self.graph = nx.DiGraph()
        self.graph.add_nodes_from(self.nets)
        for gate in self.combinational_gates():
            for net in gate.inputs:
                self.graph.add_edge(net, gate.output)

        if not nx.is_directed_acyclic_graph(self.graph):
            cycle = [u for u, _ in nx.find_cycle(self.graph)]
            raise CombinationalLoopError(cycle + cycle[:1])

        order = nx.lexicographical_topological_sort(self.graph, key=self._index.__getitem__)
        self.topo_order: Tuple[Gate, ...] = tuple(
            self._drivers[net]
            for net in order
            if net in self._drivers and self._drivers[net].kind is not GateKind.DFF
        )

    def __contains__(self, net: object) -> bool:
        return net in self._index

    def __len__(self) -> int:
        return len(self.nets)

    def __repr__(self) -> str:
        label = f" '{self.name}'" if self.name else ""
        return (
            f"<Netlist{label} with {len(self.nets)} nets, {len(self.gates)} gates, "
            f"{len(self.pseudo_inputs)} pseudo-inputs>"
        )

    def index(self, net: str) -> int:
        try:
            return self._index[net]
        except KeyError:
            raise UnknownNetError(net)

    def driver(self, net: str) -> Optional[Gate]:
        """Gate driving a net, None for primary inputs"""
        self.index(net)
        return self._drivers.get(net)

    def combinational_gates(self) -> Iterator[Gate]:
        return (g for g in self.gates if g.kind is not GateKind.DFF)

    @property
    def pseudo_inputs(self) -> Tuple[str, ...]:
        """Primary inputs followed by DFF Q nets"""
        return self.primary_inputs + tuple(q for _, q in self.dff_boundaries)

    @property
    def pseudo_outputs(self) -> Tuple[str, ...]:
        """Primary outputs followed by DFF D nets (each listed once)"""
        seen = dict.fromkeys(self.primary_outputs)
        seen.update(dict.fromkeys(d for d, _ in self.dff_boundaries))
        return tuple(seen)

    def resolve(self, nets) -> NetSet:
        """Validate a collection of net names and return it as a frozenset"""
        resolved = frozenset(nets)
        for net in sorted(resolved):
            if net not in self._index:
                raise UnknownNetError(net)
        return resolved

    def sorted_nets(self, nets) -> List[str]:
        """Nets in declaration order"""
        return sorted(nets, key=self.index)


def _logical_lines(text: str) -> Iterator[Tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def _gate_kind(keyword: str, line: int) -> GateKind:
    upper = keyword.upper()
    if upper in _ALIASES:
        return _ALIASES[upper]
    try:
        return GateKind(upper)
    except ValueError:
        raise UnknownGateKindError(keyword, line=line)


def parse_bench(text: str, source: str = "<bench>", name: Optional[str] = None) -> Netlist:
    """
    Parse bench text into a validated Netlist.

    Net names are matched case-sensitively; gate keywords are not.
    """
    inputs: List[str] = []
    outputs: List[str] = []
    gates: List[Gate] = []
    nets: Dict[str, None] = {}
    driven_at: Dict[str, int] = {}
    used_at: Dict[str, int] = {}

    def drive(net: str, line: int) -> None:
        if net in driven_at:
            raise MultiplyDrivenNetError(net, line=line)
        driven_at[net] = line
        nets[net] = None

    try:
        for line, content in _logical_lines(text):
            port = _PORT_RE.fullmatch(content)
            if port:
                keyword, net = port.groups()
                if keyword == "INPUT":
                    drive(net, line)
                    inputs.append(net)
                elif net not in outputs:
                    outputs.append(net)
                    used_at.setdefault(net, line)
                continue

            match = _GATE_RE.fullmatch(content)
            if not match:
                raise BenchSyntaxError(content, line=line)
            output, keyword, args = match.groups()
            kind = _gate_kind(keyword, line)
            operands = tuple(arg.strip() for arg in args.split(","))
            try:
                gate = Gate(kind, operands, output)
            except BenchSyntaxError:
                raise BenchSyntaxError(content, line=line)
            drive(output, line)
            for net in operands:
                used_at.setdefault(net, line)
            gates.append(gate)

        for net, line in sorted(used_at.items(), key=lambda kv: kv[1]):
            if net not in driven_at:
                raise UndrivenNetError(net, line=line)

        netlist = Netlist(list(nets), gates, inputs, outputs, name=name)
    except FtmeaError as e:
        raise e.with_context(source)

    logger.debug(
        "parsed %s: %d nets, %d gates, %d PIs, %d POs, %d DFFs",
        source,
        len(netlist.nets),
        len(netlist.gates),
        len(netlist.primary_inputs),
        len(netlist.primary_outputs),
        len(netlist.dff_boundaries),
    )
    return netlist
