"""
Fault and Attack Injection

Two-valued, bit-parallel logic simulation over numpy bool arrays (one element
per input vector), single and joint stuck-at campaigns, and attack-toggle
campaigns. These are the empirical oracle for the structural cone analyses.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple
import logging

import numpy as np

from ftmea_core.errors import (
    EmptyNetSetError,
    ExhaustiveLimitExceededError,
    IncompleteVectorError,
    InvalidAttackInputsError,
    UnknownNetError,
)

from .bench import GateKind, Netlist
from .cones import fanin_cone

logger = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = 16
DEFAULT_SAMPLES = 4096
DEFAULT_SEED = 0

Values = Dict[str, np.ndarray]


class Polarity(str, Enum):
    STUCK_AT_0 = "StuckAt0"
    STUCK_AT_1 = "StuckAt1"

    @property
    def value_bit(self) -> bool:
        return self is Polarity.STUCK_AT_1


@dataclass(frozen=True, order=True)
class FaultSite:
    net: str
    polarity: Polarity

    def __str__(self) -> str:
        return f"{self.net}/{self.polarity.value}"


@dataclass(frozen=True)
class SimVector:
    """One boolean per pseudo-primary input"""

    assignment: Mapping[str, bool]


class VectorMode(str, Enum):
    AUTO = "auto"  # exhaustive up to EXHAUSTIVE_LIMIT inputs, sampled above
    EXHAUSTIVE = "exhaustive"
    SAMPLED = "sampled"


@dataclass(frozen=True)
class VectorSource:
    mode: VectorMode = VectorMode.AUTO
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED

    @classmethod
    def exhaustive(cls) -> "VectorSource":
        return cls(VectorMode.EXHAUSTIVE)

    @classmethod
    def sampled(cls, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> "VectorSource":
        return cls(VectorMode.SAMPLED, samples, seed)

    def is_exhaustive(self, width: int) -> bool:
        if self.mode is VectorMode.EXHAUSTIVE:
            if width > EXHAUSTIVE_LIMIT:
                raise ExhaustiveLimitExceededError(width, EXHAUSTIVE_LIMIT)
            return True
        return self.mode is VectorMode.AUTO and width <= EXHAUSTIVE_LIMIT

    def matrix(self, width: int) -> np.ndarray:
        """(vectors, width) bool matrix; row r of the exhaustive set is r in binary"""
        if self.is_exhaustive(width):
            return exhaustive_matrix(width)
        rng = np.random.default_rng(self.seed)
        return rng.integers(0, 2, size=(self.samples, width), dtype=np.uint8).astype(bool)


def exhaustive_matrix(width: int) -> np.ndarray:
    rows = np.arange(2**width, dtype=np.int64)
    return ((rows[:, None] >> np.arange(width)) & 1).astype(bool)


@dataclass(frozen=True)
class CampaignResult:
    affecting_sites: FrozenSet[FaultSite] = frozenset()
    toggleable_nets: FrozenSet[str] = frozenset()
    vectors_evaluated: int = 0
    seed: Optional[int] = None  # set when vectors were sampled

    def to_dict(self) -> dict:
        return {
            "affecting": [str(site) for site in sorted(self.affecting_sites)],
            "toggleable": sorted(self.toggleable_nets),
            "vectors_evaluated": self.vectors_evaluated,
            "seed": self.seed,
        }


def _evaluate(kind: GateKind, operands: List[np.ndarray]) -> np.ndarray:
    if kind is GateKind.NOT:
        return ~operands[0]
    if kind is GateKind.BUFF:
        return operands[0].copy()
    stacked = np.stack(operands)
    if kind in (GateKind.AND, GateKind.NAND):
        out = np.logical_and.reduce(stacked, axis=0)
    elif kind in (GateKind.OR, GateKind.NOR):
        out = np.logical_or.reduce(stacked, axis=0)
    else:
        out = np.logical_xor.reduce(stacked, axis=0)
    if kind in (GateKind.NAND, GateKind.NOR, GateKind.XNOR):
        out = ~out
    return out


def simulate_batch(
    netlist: Netlist,
    inputs: Mapping[str, np.ndarray],
    faults: Optional[Mapping[str, bool]] = None,
) -> Values:
    """
    Evaluate every net for a batch of vectors.

    `inputs` maps each pseudo-primary input to a bool array; `faults` forces
    nets to a constant (stuck-at), applied where the net is driven.
    """
    missing = set(netlist.pseudo_inputs) - set(inputs)
    if missing:
        raise IncompleteVectorError(missing)
    for net in inputs:
        if net not in netlist:
            raise UnknownNetError(net)
    faults = faults or {}

    values: Values = {}
    for net in netlist.pseudo_inputs:
        column = np.asarray(inputs[net], dtype=bool)
        values[net] = np.full(column.shape, faults[net]) if net in faults else column
    for gate in netlist.topo_order:
        out = _evaluate(gate.kind, [values[net] for net in gate.inputs])
        if gate.output in faults:
            out = np.full(out.shape, faults[gate.output])
        values[gate.output] = out
    return values


def simulate(netlist: Netlist, vector: SimVector) -> Dict[str, bool]:
    """Single-vector evaluation"""
    columns = {net: np.array([bool(bit)]) for net, bit in vector.assignment.items()}
    return {net: bool(column[0]) for net, column in simulate_batch(netlist, columns).items()}


def _columns(matrix: np.ndarray, order: Sequence[str]) -> Dict[str, np.ndarray]:
    return {net: matrix[:, i] for i, net in enumerate(order)}


def _varies(rows: np.ndarray) -> bool:
    """Some row holds both values"""
    return bool((rows.any(axis=1) & ~rows.all(axis=1)).any())


def _differs(golden: Values, faulty: Values, nets: Iterable[str]) -> np.ndarray:
    """Per-vector mask: some net in `nets` differs"""
    masks = [golden[net] != faulty[net] for net in nets]
    if not masks:
        return np.zeros(0, dtype=bool)
    return np.logical_or.reduce(np.stack(masks), axis=0)


def _check_sites(netlist: Netlist, sites: Iterable[FaultSite]) -> List[FaultSite]:
    sites = list(sites)
    for site in sites:
        if site.net not in netlist:
            raise UnknownNetError(site.net)
    return sites


def all_sites(nets: Iterable[str]) -> List[FaultSite]:
    """Both stuck-at polarities on every net, sorted"""
    return sorted(FaultSite(net, polarity) for net in nets for polarity in Polarity)


def fault_campaign(
    netlist: Netlist,
    monitored: Iterable[str],
    sites: Iterable[FaultSite],
    vectors: VectorSource = VectorSource(),
) -> CampaignResult:
    """
    Single stuck-at campaign.

    A site is affecting when some vector makes a monitored net differ from the
    fault-free run.
    """
    monitored = netlist.resolve(monitored)
    sites = _check_sites(netlist, sites)
    order = netlist.pseudo_inputs
    exhaustive = vectors.is_exhaustive(len(order))
    matrix = vectors.matrix(len(order))
    columns = _columns(matrix, order)
    golden = simulate_batch(netlist, columns)

    affecting = set()
    for site in sites:
        faulty = simulate_batch(netlist, columns, {site.net: site.polarity.value_bit})
        if _differs(golden, faulty, monitored).any():
            affecting.add(site)

    logger.info(
        "fault campaign: %d sites, %d vectors, %d affecting",
        len(sites),
        len(matrix),
        len(affecting),
    )
    return CampaignResult(
        affecting_sites=frozenset(affecting),
        vectors_evaluated=len(matrix),
        seed=None if exhaustive else vectors.seed,
    )


def attack_toggle_campaign(
    netlist: Netlist,
    attack_inputs: Iterable[str],
    vectors: VectorSource = VectorSource(),
) -> CampaignResult:
    """
    Nets an attacker can flip through the attack inputs alone.

    A net is toggleable when two vectors that agree on every non-attack input
    give it different values.
    """
    attack = netlist.resolve(attack_inputs)
    invalid = attack - set(netlist.pseudo_inputs)
    if invalid:
        raise InvalidAttackInputsError(invalid)
    if not attack:
        return CampaignResult()

    attack_order = [net for net in netlist.pseudo_inputs if net in attack]
    other_order = [net for net in netlist.pseudo_inputs if net not in attack]
    width = len(attack_order) + len(other_order)

    if vectors.is_exhaustive(width):
        # attack bits on the fast axis: rows of the reshaped result share the
        # non-attack assignment
        a, k = len(attack_order), len(other_order)
        grid = exhaustive_matrix(width)
        columns = _columns(grid, attack_order + other_order)
        values = simulate_batch(netlist, columns)
        toggleable = {
            net
            for net, column in values.items()
            if _varies(column.reshape(2**k, 2**a))
        }
        evaluated, seed = len(grid), None
    else:
        rng = np.random.default_rng(vectors.seed)
        n = vectors.samples
        base = rng.integers(0, 2, size=(n, len(other_order)), dtype=np.uint8).astype(bool)
        first = rng.integers(0, 2, size=(n, len(attack_order)), dtype=np.uint8).astype(bool)
        second = rng.integers(0, 2, size=(n, len(attack_order)), dtype=np.uint8).astype(bool)
        order = attack_order + other_order
        values_a = simulate_batch(netlist, _columns(np.hstack([first, base]), order))
        values_b = simulate_batch(netlist, _columns(np.hstack([second, base]), order))
        toggleable = {net for net in values_a if (values_a[net] != values_b[net]).any()}
        evaluated, seed = 2 * n, vectors.seed

    logger.info(
        "attack campaign: %d attack inputs, %d vectors, %d toggleable nets",
        len(attack),
        evaluated,
        len(toggleable),
    )
    return CampaignResult(
        toggleable_nets=frozenset(toggleable), vectors_evaluated=evaluated, seed=seed
    )


@dataclass(frozen=True)
class JointFaultResult:
    """Per-vector difference masks of the monitored nets under a joint fault"""

    vectors_evaluated: int
    differing: Mapping[str, np.ndarray] = field(default_factory=dict)

    def affected(self) -> FrozenSet[str]:
        return frozenset(net for net, mask in self.differing.items() if mask.any())

    def escapes(self, effect_nets: Iterable[str], alarm_nets: Iterable[str]) -> int:
        """Vectors where an effect net is corrupted and no alarm net reacts"""
        corrupted = _any_mask(self.differing, effect_nets, self.vectors_evaluated)
        alarmed = _any_mask(self.differing, alarm_nets, self.vectors_evaluated)
        return int(np.count_nonzero(corrupted & ~alarmed))


def _any_mask(masks: Mapping[str, np.ndarray], nets: Iterable[str], size: int) -> np.ndarray:
    out = np.zeros(size, dtype=bool)
    for net in nets:
        out |= masks[net]
    return out


def joint_fault_effect(
    netlist: Netlist,
    monitored: Iterable[str],
    sites: Sequence[FaultSite],
    vectors: VectorSource = VectorSource(),
) -> JointFaultResult:
    """Activate up to two stuck-at sites together (multiple-bit upset)"""
    monitored = netlist.resolve(monitored)
    sites = _check_sites(netlist, sites)
    if not 1 <= len(sites) <= 2:
        raise ValueError("joint fault injection takes one or two sites")
    if len({site.net for site in sites}) != len(sites):
        raise ValueError("joint fault sites must be on distinct nets")

    order = netlist.pseudo_inputs
    matrix = vectors.matrix(len(order))
    columns = _columns(matrix, order)
    golden = simulate_batch(netlist, columns)
    faulty = simulate_batch(
        netlist, columns, {site.net: site.polarity.value_bit for site in sites}
    )
    return JointFaultResult(
        vectors_evaluated=len(matrix),
        differing={net: golden[net] != faulty[net] for net in sorted(monitored)},
    )


def empirical_common_effect(
    netlist: Netlist,
    effect_nets: Iterable[str],
    attack_inputs: Iterable[str],
    vectors: VectorSource = VectorSource(),
) -> Tuple[float, FrozenSet[str]]:
    """
    Measured overlap fraction between the effect cone and attack-controlled logic.

    Returns (fraction, nets) where nets are the effect-cone nets that are both
    fault-sensitizing (some stuck-at on them reaches an effect net) and
    attack-toggleable.
    """
    effect = netlist.resolve(effect_nets)
    if not effect:
        raise EmptyNetSetError("effect_nets")
    coi = fanin_cone(netlist, effect)
    faults = fault_campaign(netlist, effect, all_sites(netlist.sorted_nets(coi)), vectors)
    sensitizing = {site.net for site in faults.affecting_sites}
    toggleable = attack_toggle_campaign(netlist, attack_inputs, vectors).toggleable_nets
    shared = frozenset(coi & sensitizing & toggleable)
    return len(shared) / len(coi), shared
