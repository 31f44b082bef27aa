"""
Tests for fan-in and fan-out cones
"""

import random

import pytest

from ftmea_core.errors import UnknownNetError
from ftmea_netlist.bench import parse_bench
from ftmea_netlist.cones import fanin_cone, fanout_cone
from ftmea_netlist.testing import (
    C17_BENCH,
    NAND_NOT_BENCH,
    REGISTER_LOCK_BENCH,
    random_circuit,
)


@pytest.fixture
def register():
    return parse_bench(REGISTER_LOCK_BENCH)


class TestCones:
    """Tests for fanin_cone and fanout_cone"""

    def test_nand_not(self):
        netlist = parse_bench(NAND_NOT_BENCH)
        assert fanin_cone(netlist, ["y"]) == {"a", "b", "g1", "y"}
        assert fanin_cone(netlist, ["a"]) == {"a"}
        assert fanout_cone(netlist, ["a"]) == {"a", "g1", "y"}
        assert fanout_cone(netlist, ["y"]) == {"y"}

    def test_c17(self):
        netlist = parse_bench(C17_BENCH)
        assert fanin_cone(netlist, ["N22"]) == {
            "N22", "N10", "N16", "N1", "N2", "N3", "N11", "N6",
        }
        assert fanout_cone(netlist, ["N3"]) == {
            "N3", "N10", "N11", "N16", "N19", "N22", "N23",
        }

    def test_register_effect_cone(self, register):
        cone = fanin_cone(register, ["q0", "q1"])
        assert len(cone) == 14
        assert "key_in" in cone
        assert "lock_alarm" not in cone
        assert fanin_cone(register, ["par_err"]) == {"par_err", "s0", "s1", "sp"}

    def test_stops_at_flip_flops(self, register):
        assert fanout_cone(register, ["q0"]) == {"q0", "pn"}
        assert "q0" not in fanin_cone(register, ["par_err"])

    def test_attack_reach(self, register):
        reach = fanout_cone(register, ["key_in"])
        assert reach == {
            "key_in", "unlock", "hold", "w0", "w1", "h0", "h1",
            "q0", "q1", "lock_alarm", "pn",
        }

    def test_output_feeding_gates_is_traversed(self):
        netlist = parse_bench("INPUT(a)\nOUTPUT(y)\nOUTPUT(z)\ny = NOT(a)\nz = NOT(y)\n")
        assert fanout_cone(netlist, ["a"]) == {"a", "y", "z"}

    def test_root_set_is_union(self, register):
        roots = ["lock_alarm", "par_err"]
        assert fanin_cone(register, roots) == fanin_cone(register, ["lock_alarm"]) | fanin_cone(
            register, ["par_err"]
        )

    def test_empty_roots(self, register):
        assert fanin_cone(register, []) == frozenset()
        assert fanout_cone(register, []) == frozenset()

    def test_unknown_root(self, register):
        with pytest.raises(UnknownNetError):
            fanin_cone(register, ["q7"])
        with pytest.raises(UnknownNetError):
            fanout_cone(register, ["q7"])


class TestConeProperties:
    """Randomized cone properties"""

    @pytest.mark.parametrize("seed", range(20))
    def test_duality(self, seed):
        rng = random.Random(seed)
        netlist = random_circuit(rng, inputs=4, gates=12, dffs=seed % 3)
        for u in netlist.nets:
            down = fanout_cone(netlist, [u])
            for v in netlist.nets:
                assert (u in fanin_cone(netlist, [v])) == (v in down)

    @pytest.mark.parametrize("seed", range(20))
    def test_monotone_and_idempotent(self, seed):
        rng = random.Random(seed)
        netlist = random_circuit(rng, inputs=5, gates=15, dffs=seed % 2)
        small = set(rng.sample(netlist.nets, 2))
        large = small | set(rng.sample(netlist.nets, 3))
        for cone in (fanin_cone, fanout_cone):
            assert cone(netlist, small) <= cone(netlist, large)
            assert cone(netlist, cone(netlist, large)) == cone(netlist, large)
            assert large <= cone(netlist, large)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
