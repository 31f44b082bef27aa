"""
FTMEA Netlist Package

Gate-level analyses behind the structural correlation factors: bench parsing,
cones of influence, SCOAP testability, fault/attack simulation and CDCF
derivation.
"""

__version__ = "0.1.0"

from .bench import Gate, GateKind, Netlist, NetSet, parse_bench
from .cones import fanin_cone, fanout_cone
from .scoap import ScoapReport, compute_scoap, mean_controllability, render_scoap_csv
from .faultsim import (
    CampaignResult,
    FaultSite,
    JointFaultResult,
    Polarity,
    SimVector,
    VectorMode,
    VectorSource,
    attack_toggle_campaign,
    empirical_common_effect,
    fault_campaign,
    joint_fault_effect,
    simulate,
    simulate_batch,
)
from .structural import (
    CdcfKind,
    Derivation,
    DerivationRequest,
    DerivedCdcf,
    VariantRole,
    common_effect_cdcf,
    derive,
    derive_bundle,
    detection_cdcf,
    prevention_cdcf,
)

__all__ = [
    # Netlist
    "Gate",
    "GateKind",
    "Netlist",
    "NetSet",
    "parse_bench",
    # Cones
    "fanin_cone",
    "fanout_cone",
    # SCOAP
    "ScoapReport",
    "compute_scoap",
    "mean_controllability",
    "render_scoap_csv",
    # Simulation
    "CampaignResult",
    "FaultSite",
    "JointFaultResult",
    "Polarity",
    "SimVector",
    "VectorMode",
    "VectorSource",
    "attack_toggle_campaign",
    "empirical_common_effect",
    "fault_campaign",
    "joint_fault_effect",
    "simulate",
    "simulate_batch",
    # Structural CDCF
    "CdcfKind",
    "Derivation",
    "DerivationRequest",
    "DerivedCdcf",
    "VariantRole",
    "common_effect_cdcf",
    "derive",
    "derive_bundle",
    "detection_cdcf",
    "prevention_cdcf",
]
