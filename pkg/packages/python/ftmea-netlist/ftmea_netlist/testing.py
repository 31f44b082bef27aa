"""
Testing Utilities for FTMEA netlists

Bench fixtures with hand-evaluated SCOAP scores and a seeded random circuit
generator.
"""

from typing import Dict, Tuple
import random

from .bench import Netlist, parse_bench

NAND_NOT_BENCH = """\
INPUT(a)
INPUT(b)
g1 = NAND(a, b)
OUTPUT(y)
y = NOT(g1)
"""

BUFF_BENCH = """\
INPUT(a)
OUTPUT(y)
y = BUFF(a)
"""

CHAIN_BENCH = """\
INPUT(a)
OUTPUT(y)
g1 = NOT(a)
y = NOT(g1)
"""

TWO_CHAINS_BENCH = """\
INPUT(a)
INPUT(b)
OUTPUT(y)
OUTPUT(z)
g1 = NOT(a)
y = NOT(g1)
g2 = BUFF(b)
z = NOT(g2)
"""

# ISCAS-85 c17, nets renamed to identifiers
C17_BENCH = """\
# c17
INPUT(N1)
INPUT(N2)
INPUT(N3)
INPUT(N6)
INPUT(N7)
OUTPUT(N22)
OUTPUT(N23)
N10 = NAND(N1, N3)
N11 = NAND(N3, N6)
N16 = NAND(N2, N11)
N19 = NAND(N11, N7)
N22 = NAND(N10, N16)
N23 = NAND(N16, N19)
"""

# y = AND(NOT a, b) next to an unrelated block driven by b and c.
# Effect cone of y: {a, b, g1, y}; fanout of b reaches b and y inside it.
OVERLAP_BENCH = """\
INPUT(a)
INPUT(b)
INPUT(c)
OUTPUT(y)
OUTPUT(z)
g1 = NOT(a)
y = AND(g1, b)
g2 = NOT(c)
g3 = OR(b, g2)
g4 = NAND(g3, c)
z = BUFF(g4)
"""

# Two-bit configuration register behind a write lock. s0/s1 hold the current
# state, q0/q1 are the next state; a write only lands when wr_req and key_in
# are both set. lock_alarm flags every committed write, par_err checks the
# stored parity sp of the current state.
REGISTER_LOCK_BENCH = """\
INPUT(wr_req)
INPUT(key_in)
INPUT(d0)
INPUT(d1)
OUTPUT(q0)
OUTPUT(q1)
OUTPUT(lock_alarm)
OUTPUT(par_err)
s0 = DFF(q0)
s1 = DFF(q1)
sp = DFF(pn)
unlock = AND(wr_req, key_in)
hold = NOT(unlock)
w0 = AND(unlock, d0)
h0 = AND(hold, s0)
q0 = OR(w0, h0)
w1 = AND(unlock, d1)
h1 = AND(hold, s1)
q1 = OR(w1, h1)
lock_alarm = OR(w0, w1)
pn = XOR(q0, q1)
par_err = XOR(s0, s1, sp)
"""

# Same register without the key: any write request lands
REGISTER_UNLOCKED_BENCH = """\
INPUT(wr_req)
INPUT(key_in)
INPUT(d0)
INPUT(d1)
OUTPUT(q0)
OUTPUT(q1)
OUTPUT(lock_alarm)
OUTPUT(par_err)
s0 = DFF(q0)
s1 = DFF(q1)
sp = DFF(pn)
hold = NOT(wr_req)
w0 = AND(wr_req, d0)
h0 = AND(hold, s0)
q0 = OR(w0, h0)
w1 = AND(wr_req, d1)
h1 = AND(hold, s1)
q1 = OR(w1, h1)
lock_alarm = OR(w0, w1)
pn = XOR(q0, q1)
par_err = XOR(s0, s1, sp)
"""

# Debug bypass: the register follows the data pins directly
REGISTER_BYPASS_BENCH = """\
INPUT(wr_req)
INPUT(key_in)
INPUT(d0)
INPUT(d1)
OUTPUT(q0)
OUTPUT(q1)
q0 = BUFF(d0)
q1 = BUFF(d1)
"""

# Two data bits with parity computed at write time and checked on read
PARITY_REGISTER_BENCH = """\
INPUT(d0)
INPUT(d1)
OUTPUT(q0)
OUTPUT(q1)
OUTPUT(par_err)
q0 = BUFF(d0)
q1 = BUFF(d1)
p = XOR(d0, d1)
chk = XOR(q0, q1)
par_err = XOR(chk, p)
"""

# Hand evaluation of the SCOAP rules, net -> (cc0, cc1, co)
NAND_NOT_SCOAP: Dict[str, Tuple[int, int, int]] = {
    "a": (1, 1, 3),
    "b": (1, 1, 3),
    "g1": (3, 2, 1),
    "y": (3, 4, 0),
}

BUFF_SCOAP: Dict[str, Tuple[int, int, int]] = {
    "a": (1, 1, 1),
    "y": (2, 2, 0),
}

REGISTER_LOCK_SCOAP: Dict[str, Tuple[int, int, int]] = {
    "wr_req": (1, 1, 7),
    "key_in": (1, 1, 7),
    "d0": (1, 1, 7),
    "s0": (1, 1, 4),
    "sp": (1, 1, 4),
    "unlock": (2, 3, 5),
    "hold": (4, 3, 5),
    "w0": (2, 5, 3),
    "h0": (2, 5, 3),
    "q0": (5, 6, 0),
    "lock_alarm": (5, 6, 0),
    "pn": (11, 12, 0),
    "par_err": (5, 5, 0),
}

# Means of cc0 + cc1 over the fan-in cone of {q0, q1}
REGISTER_LOCK_MEAN_CC = 74 / 14
REGISTER_UNLOCKED_MEAN_CC = 54 / 12
REGISTER_BYPASS_MEAN_CC = 12 / 4

# Structural coefficients of the configuration-register worksheet derived on
# REGISTER_LOCK_BENCH with REGISTER_UNLOCKED_BENCH as the variant without the
# key lock. Effect cone of {q0, q1}: 14 nets.
CASE_STUDY_DERIVED: Dict[str, Dict[Tuple[str, str], float]] = {
    "detection": {
        ("FM1", "M_SAF_PARITY"): 2 / 14,
        ("FM2", "M_SAF_PARITY"): 2 / 14,
        ("FM2", "M_SEC_LOCK"): 7 / 14,
        ("FM3", "M_SEC_LOCK"): 7 / 14,
    },
    "prevention": {
        ("TM1", "M_SEC_KEY"): 11 / 74,
    },
    "common_effect": {
        ("FM1", "TM1"): 9 / 14,
        ("FM2", "TM1"): 9 / 14,
        ("FM3", "TM1"): 9 / 14,
    },
}

SOUNDNESS_FIXTURES = {
    "nand_not": NAND_NOT_BENCH,
    "two_chains": TWO_CHAINS_BENCH,
    "c17": C17_BENCH,
    "overlap": OVERLAP_BENCH,
    "register_lock": REGISTER_LOCK_BENCH,
    "parity_register": PARITY_REGISTER_BENCH,
}


def load_fixture(name: str) -> Netlist:
    return parse_bench(SOUNDNESS_FIXTURES[name], source=f"<{name}>", name=name)


def random_circuit(
    rng: random.Random, inputs: int = 4, gates: int = 10, dffs: int = 0
) -> Netlist:
    """
    Random valid netlist with at least two inputs.

    Gate operands are drawn from already defined nets, so the combinational
    part is acyclic by construction; every unread gate output is declared as
    an output.
    """
    inputs = max(2, inputs)
    lines = [f"INPUT(i{k})" for k in range(inputs)]
    available = [f"i{k}" for k in range(inputs)] + [f"s{k}" for k in range(dffs)]
    used = set()
    kinds = ["AND", "OR", "NAND", "NOR", "XOR", "XNOR", "NOT", "BUFF"]
    for k in range(gates):
        kind = rng.choice(kinds)
        arity = 1 if kind in ("NOT", "BUFF") else rng.randint(2, 3)
        operands = rng.sample(available, min(arity, len(available)))
        used.update(operands)
        lines.append(f"g{k} = {kind}({', '.join(operands)})")
        available.append(f"g{k}")
    driven = [net for net in available if net.startswith("g")] or [f"i{k}" for k in range(inputs)]
    for k in range(dffs):
        d = rng.choice(driven)
        used.add(d)
        lines.append(f"s{k} = DFF({d})")
    for net in available:
        if net.startswith("g") and net not in used:
            lines.append(f"OUTPUT({net})")
    return parse_bench("\n".join(lines), source="<random>")
