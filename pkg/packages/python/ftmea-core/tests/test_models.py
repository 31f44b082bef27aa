"""
Tests for FTMEA worksheet models
"""

import pytest

from ftmea_core.errors import (
    DanglingReferenceError,
    DuplicateIdError,
    MalformedCsvError,
    RatingOutOfRangeError,
)
from ftmea_core.models import (
    ItemKind,
    MeasureKind,
    NetAnchors,
    Worksheet,
    check_rating,
    is_net_name,
)
from ftmea_core.testing import create_item, create_measure


class TestRiskItem:
    """Tests for RiskItem"""

    def test_create_item(self):
        item = create_item()
        assert item.id == "FM1"
        assert item.kind is ItemKind.FAILURE_MODE
        assert item.is_failure
        assert item.rpn == 9 * 4 * 6

    def test_threat_mode(self):
        item = create_item("TM1", ItemKind.THREAT_MODE)
        assert not item.is_failure

    @pytest.mark.parametrize("field", ["severity", "occurrence", "detection"])
    @pytest.mark.parametrize("value", [0, 11, -3])
    def test_rating_out_of_range(self, field, value):
        with pytest.raises(RatingOutOfRangeError):
            create_item(**{field: value})

    def test_fractional_rating_rejected(self):
        with pytest.raises(RatingOutOfRangeError):
            create_item(occurrence=4.5)

    def test_bool_rating_rejected(self):
        with pytest.raises(RatingOutOfRangeError):
            check_rating("S", True)

    def test_boundaries_accepted(self):
        assert create_item(severity=1, occurrence=10, detection=1).rpn == 10

    def test_empty_effect_group(self):
        with pytest.raises(MalformedCsvError):
            create_item(effect_group="")

    @pytest.mark.parametrize(
        "kwargs",
        [{"item_id": " FM1"}, {"effect_group": "SensorWrong "}, {"item_id": "FM1\t"}],
    )
    def test_padded_labels_rejected(self, kwargs):
        with pytest.raises(MalformedCsvError):
            create_item(**kwargs)

    def test_padded_description_kept(self):
        assert create_item(description="  bit flip ").description == "  bit flip "

    def test_padded_measure_id_rejected(self):
        with pytest.raises(MalformedCsvError):
            create_measure(" M1")


class TestNetAnchors:
    """Tests for NetAnchors"""

    def test_net_names(self):
        assert is_net_name("G10")
        assert is_net_name("core.q_0")
        assert not is_net_name("1abc")
        assert not is_net_name("a-b")

    def test_invalid_net_rejected(self):
        with pytest.raises(MalformedCsvError):
            NetAnchors(effect_nets=("ok", "not ok"))

    def test_all_nets_and_empty(self):
        anchors = NetAnchors(("q0",), ("alarm",), ("wr",))
        assert anchors.all_nets() == ["q0", "alarm", "wr"]
        assert not anchors.is_empty()
        assert NetAnchors().is_empty()


class TestWorksheet:
    """Tests for Worksheet invariants"""

    def test_lookup(self):
        fm = create_item("FM1")
        tm = create_item("TM1", ItemKind.THREAT_MODE)
        m1 = create_measure("M1")
        m2 = create_measure("M2", MeasureKind.PREVENTION)
        ws = Worksheet((fm, tm), (m1, m2), (("FM1", "M1"), ("TM1", "M2"), ("TM1", "M1")))
        assert ws.items_by_id["TM1"] is tm
        assert ws.measures_by_id["M2"] is m2
        assert ("TM1", "M2") in ws.applicable_pairs
        assert [m.id for m in ws.measures_for("TM1")] == ["M2", "M1"]
        assert ws.measures_for("FM1") == [m1]

    def test_duplicate_item(self):
        with pytest.raises(DuplicateIdError) as exc:
            Worksheet((create_item("FM1"), create_item("FM1")))
        assert exc.value.details["what"] == "item id"

    def test_duplicate_measure(self):
        with pytest.raises(DuplicateIdError):
            Worksheet((), (create_measure("M1"), create_measure("M1")))

    def test_dangling_item(self):
        with pytest.raises(DanglingReferenceError):
            Worksheet((create_item(),), (create_measure(),), (("FM9", "M1"),))

    def test_dangling_measure(self):
        with pytest.raises(DanglingReferenceError):
            Worksheet((create_item(),), (create_measure(),), (("FM1", "M9"),))

    def test_duplicate_pair(self):
        with pytest.raises(DuplicateIdError):
            Worksheet(
                (create_item(),), (create_measure(),), (("FM1", "M1"), ("FM1", "M1"))
            )

    def test_measure_on_both_kinds(self):
        """A measure may apply to a failure mode and a threat mode at once"""
        ws = Worksheet(
            (create_item("FM1"), create_item("TM1", ItemKind.THREAT_MODE)),
            (create_measure("M1"),),
            (("FM1", "M1"), ("TM1", "M1")),
        )
        assert len(ws.applicable_pairs) == 2


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
