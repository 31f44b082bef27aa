"""
Tests for the bench netlist parser
"""

import pytest

from ftmea_core.errors import (
    BenchSyntaxError,
    CombinationalLoopError,
    MultiplyDrivenNetError,
    UndrivenNetError,
    UnknownGateKindError,
    UnknownNetError,
)
from ftmea_netlist.bench import Gate, GateKind, parse_bench
from ftmea_netlist.testing import (
    C17_BENCH,
    NAND_NOT_BENCH,
    REGISTER_LOCK_BENCH,
)


class TestParseBench:
    """Tests for parse_bench on well-formed input"""

    def test_nand_not(self):
        netlist = parse_bench(NAND_NOT_BENCH)
        assert netlist.nets == ("a", "b", "g1", "y")
        assert netlist.primary_inputs == ("a", "b")
        assert netlist.primary_outputs == ("y",)
        assert [g.output for g in netlist.topo_order] == ["g1", "y"]
        assert netlist.driver("g1") == Gate(GateKind.NAND, ("a", "b"), "g1")
        assert netlist.driver("a") is None

    def test_c17_shape(self):
        netlist = parse_bench(C17_BENCH, name="c17")
        assert len(netlist) == 11
        assert len(netlist.gates) == 6
        assert netlist.primary_outputs == ("N22", "N23")
        assert "c17" in repr(netlist)

    def test_dff_cuts_the_graph(self):
        netlist = parse_bench(REGISTER_LOCK_BENCH)
        assert netlist.dff_boundaries == (("q0", "s0"), ("q1", "s1"), ("pn", "sp"))
        assert netlist.pseudo_inputs == (
            "wr_req",
            "key_in",
            "d0",
            "d1",
            "s0",
            "s1",
            "sp",
        )
        assert netlist.pseudo_outputs == ("q0", "q1", "lock_alarm", "par_err", "pn")
        assert not netlist.graph.has_edge("q0", "s0")
        assert all(g.kind is not GateKind.DFF for g in netlist.topo_order)

    def test_topological_order(self):
        netlist = parse_bench(REGISTER_LOCK_BENCH)
        position = {g.output: i for i, g in enumerate(netlist.topo_order)}
        for gate in netlist.topo_order:
            for net in gate.inputs:
                if net in position:
                    assert position[net] < position[gate.output]

    def test_dff_breaks_feedback(self):
        netlist = parse_bench("INPUT(a)\nOUTPUT(y)\ns = DFF(y)\ny = AND(a, s)\n")
        assert netlist.pseudo_inputs == ("a", "s")

    def test_comments_and_blank_lines(self):
        text = "# header\n\nINPUT(a)   # the input\n\nOUTPUT(y)\ny = NOT(a)\n"
        assert parse_bench(text).nets == ("a", "y")

    def test_keyword_case_and_buf_alias(self):
        netlist = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ng = nand(a, b)\ny = BUF(g)\n")
        assert netlist.driver("g").kind is GateKind.NAND
        assert netlist.driver("y").kind is GateKind.BUFF

    def test_repeated_output_declaration(self):
        netlist = parse_bench("INPUT(a)\nOUTPUT(y)\nOUTPUT(y)\ny = NOT(a)\n")
        assert netlist.primary_outputs == ("y",)

    def test_gate_str(self):
        assert str(Gate(GateKind.XOR, ("a", "b"), "y")) == "y = XOR(a, b)"

    def test_deterministic(self):
        first = parse_bench(C17_BENCH)
        second = parse_bench(C17_BENCH)
        assert first.nets == second.nets
        assert first.gates == second.gates
        assert first.topo_order == second.topo_order


class TestParseErrors:
    """Tests for bench parse errors and their line context"""

    def test_unknown_gate_kind(self):
        with pytest.raises(UnknownGateKindError) as exc:
            parse_bench("INPUT(a)\nOUTPUT(y)\ny = MUX(a, a)\n", source="bad.bench")
        assert exc.value.line == 3
        assert exc.value.source == "bad.bench"

    def test_malformed_line(self):
        with pytest.raises(BenchSyntaxError) as exc:
            parse_bench("INPUT(a)\nOUTPUT y\n")
        assert exc.value.line == 2

    def test_wrong_arity(self):
        with pytest.raises(BenchSyntaxError) as exc:
            parse_bench("INPUT(a)\nOUTPUT(y)\ny = AND(a)\n")
        assert exc.value.line == 3
        with pytest.raises(BenchSyntaxError):
            parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = NOT(a, b)\n")

    def test_multiply_driven(self):
        with pytest.raises(MultiplyDrivenNetError) as exc:
            parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\ny = BUFF(a)\n")
        assert exc.value.line == 4

    def test_input_driven_by_gate(self):
        with pytest.raises(MultiplyDrivenNetError):
            parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(a)\na = NOT(b)\n")

    def test_undriven_operand(self):
        with pytest.raises(UndrivenNetError) as exc:
            parse_bench("INPUT(a)\nOUTPUT(y)\ny = AND(a, b)\n")
        assert exc.value.details["net"] == "b"
        assert exc.value.line == 3

    def test_undriven_output(self):
        with pytest.raises(UndrivenNetError) as exc:
            parse_bench("INPUT(a)\nOUTPUT(z)\n")
        assert exc.value.line == 2

    def test_combinational_loop(self):
        with pytest.raises(CombinationalLoopError) as exc:
            parse_bench("INPUT(a)\nOUTPUT(y)\ny = AND(a, g)\ng = NOT(y)\n", source="loop.bench")
        cycle = exc.value.details["nets"]
        assert set(cycle) == {"y", "g"}
        assert cycle[0] == cycle[-1]
        assert exc.value.source == "loop.bench"


class TestNetlistLookups:
    """Tests for Netlist net lookups"""

    def test_index_and_contains(self):
        netlist = parse_bench(NAND_NOT_BENCH)
        assert netlist.index("g1") == 2
        assert "g1" in netlist
        assert "zz" not in netlist
        with pytest.raises(UnknownNetError):
            netlist.index("zz")

    def test_resolve(self):
        netlist = parse_bench(NAND_NOT_BENCH)
        assert netlist.resolve(["y", "a", "y"]) == frozenset({"a", "y"})
        with pytest.raises(UnknownNetError) as exc:
            netlist.resolve(["a", "nope"])
        assert exc.value.net == "nope"

    def test_sorted_nets(self):
        netlist = parse_bench(NAND_NOT_BENCH)
        assert netlist.sorted_nets({"y", "a", "g1"}) == ["a", "g1", "y"]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
