"""
Tests for the ftmea command line
"""

import json

import pytest

from ftmea_cli.config import FtmeaSettings, init_settings
from ftmea_cli.main import EXIT_IO, EXIT_OK, EXIT_VALIDATION, describe_error, main
from ftmea_core.errors import RatingOutOfRangeError
from ftmea_core.testing import (
    CASE_STUDY_APPLICABILITY_CSV,
    CASE_STUDY_CDCF_JSON,
    CASE_STUDY_ITEMS_CSV,
    CASE_STUDY_MEASURES_CSV,
)
from ftmea_netlist.testing import (
    NAND_NOT_BENCH,
    REGISTER_LOCK_BENCH,
    REGISTER_UNLOCKED_BENCH,
)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    monkeypatch.delenv("FTMEA_LOG_LEVEL", raising=False)
    monkeypatch.delenv("FTMEA_NO_COLOR", raising=False)


@pytest.fixture
def inputs(tmp_path):
    """Case-study worksheet, CDCFs and register netlists on disk"""
    files = {
        "items.csv": CASE_STUDY_ITEMS_CSV,
        "measures.csv": CASE_STUDY_MEASURES_CSV,
        "applicability.csv": CASE_STUDY_APPLICABILITY_CSV,
        "cdcf.json": CASE_STUDY_CDCF_JSON,
        "register.bench": REGISTER_LOCK_BENCH,
        "register_unlocked.bench": REGISTER_UNLOCKED_BENCH,
        "nand_not.bench": NAND_NOT_BENCH,
    }
    for name, text in files.items():
        (tmp_path / name).write_text(text)
    return tmp_path


def worksheet_args(root):
    return [
        "--worksheet", str(root / "items.csv"),
        "--measures", str(root / "measures.csv"),
        "--applicability", str(root / "applicability.csv"),
    ]


class TestAnalyze:
    """Tests for `ftmea analyze`"""

    def test_case_study(self, inputs):
        out = inputs / "out"
        args = ["analyze", *worksheet_args(inputs), "--cdcf", str(inputs / "cdcf.json")]
        assert main(args + ["--out", str(out)]) == EXIT_OK
        lines = (out / "rpn_report.csv").read_text().splitlines()
        assert lines[0] == "item_id,kind,S,O,D,O_corr,D_corr,RPN_base,RPN_corr,improvement_pct"
        assert "TM1,ThreatMode,9,6,4,1,4,216,36,83.33" in lines
        assert lines[1].startswith("FM1,")
        assert (out / "comparison.csv").exists()
        effective = json.loads((out / "cdcf_effective.json").read_text())
        assert effective["prevention"] == {"TM1": {"M_SEC_KEY": 1.0}}
        assert effective["provenance"]["prevention"]["TM1"]["M_SEC_KEY"]["source"] == "Configured"

    def test_identity_without_cdcf(self, inputs):
        out = inputs / "out"
        assert main(["analyze", *worksheet_args(inputs), "--out", str(out)]) == EXIT_OK
        for line in (out / "rpn_report.csv").read_text().splitlines()[1:]:
            cells = line.split(",")
            assert cells[3:5] == cells[5:7]
            assert cells[7] == cells[8]
            assert cells[9] == "0.00"

    def test_with_netlist(self, inputs):
        out = inputs / "out"
        args = [
            "analyze",
            *worksheet_args(inputs),
            "--cdcf", str(inputs / "cdcf.json"),
            "--netlist", str(inputs / "register.bench"),
            "--variant-netlist", str(inputs / "register_unlocked.bench"),
            "--out", str(out),
        ]
        assert main(args) == EXIT_OK
        report = (out / "rpn_report.csv").read_text()
        # D = 6 - 6 * 2/14 -> 5
        assert "FM1,FailureMode,9,4,6,4,5,216,180,16.67" in report
        provenance = json.loads((out / "cdcf_effective.json").read_text())["provenance"]
        assert provenance["detection"]["FM1"]["M_SAF_PARITY"]["source"] == "Derived"
        assert provenance["detection"]["FM2"]["M_SEC_LOCK"]["source"] == "Configured"

    @pytest.mark.parametrize("fmt,name", [("markdown", "rpn_report.md"), ("json", "rpn_report.json")])
    def test_formats(self, inputs, fmt, name):
        out = inputs / "out"
        args = ["analyze", *worksheet_args(inputs), "--cdcf", str(inputs / "cdcf.json")]
        assert main(args + ["--format", fmt, "--out", str(out)]) == EXIT_OK
        assert (out / name).exists()
        assert not (out / "comparison.csv").exists()
        if fmt == "json":
            results = json.loads((out / name).read_text())["results"]
            assert results[0]["item_id"] == "FM1"

    def test_deterministic(self, inputs):
        args = ["analyze", *worksheet_args(inputs), "--cdcf", str(inputs / "cdcf.json")]
        assert main(args + ["--out", str(inputs / "a")]) == EXIT_OK
        assert main(args + ["--out", str(inputs / "b")]) == EXIT_OK
        for name in ("rpn_report.csv", "comparison.csv", "cdcf_effective.json"):
            assert (inputs / "a" / name).read_bytes() == (inputs / "b" / name).read_bytes()

    def test_missing_worksheet_file(self, inputs, capsys):
        out = inputs / "out"
        args = ["analyze", "--worksheet", str(inputs / "nope.csv"), "--out", str(out)]
        assert main(args) == EXIT_IO
        assert "nope.csv" in capsys.readouterr().err
        assert not out.exists() or list(out.iterdir()) == []

    def test_bad_rating(self, inputs, capsys):
        (inputs / "items.csv").write_text(CASE_STUDY_ITEMS_CSV.replace(",9,4,6", ",9,4.5,6"))
        out = inputs / "out"
        assert main(["analyze", *worksheet_args(inputs), "--out", str(out)]) == EXIT_VALIDATION
        err = capsys.readouterr().err.strip()
        assert err.startswith(f"{inputs / 'items.csv'}:2: [RATING_OUT_OF_RANGE]")
        assert not out.exists() or list(out.iterdir()) == []

    def test_latin1_worksheet(self, inputs, capsys):
        text = CASE_STUDY_ITEMS_CSV.replace("Bit flip", "Bit flip é")
        (inputs / "items.csv").write_bytes(text.encode("latin-1"))
        out = inputs / "out"
        assert main(["analyze", *worksheet_args(inputs), "--out", str(out)]) == EXIT_VALIDATION
        err = capsys.readouterr().err.strip()
        assert err.startswith(f"{inputs / 'items.csv'}: [INVALID_ENCODING]")
        assert "0xe9" in err
        assert "Traceback" not in err
        assert not out.exists() or list(out.iterdir()) == []

    def test_binary_netlist(self, inputs, capsys):
        (inputs / "nand_not.bench").write_bytes(b"INPUT(a)\n\xff\xfe\x00OUTPUT(y)\n")
        out = inputs / "out"
        argv = ["scoap", "--netlist", str(inputs / "nand_not.bench"), "--out", str(out)]
        assert main(argv) == EXIT_VALIDATION
        assert "[INVALID_ENCODING]" in capsys.readouterr().err
        assert not out.exists() or list(out.iterdir()) == []

    def test_missing_flag(self, capsys):
        assert main(["analyze"]) == EXIT_VALIDATION
        assert "--worksheet" in capsys.readouterr().err

    def test_unknown_option(self, capsys):
        assert main(["analyze", "--bogus"]) == EXIT_VALIDATION
        assert "error:" in capsys.readouterr().err


class TestDeriveCdcf:
    """Tests for `ftmea derive-cdcf`"""

    def test_outputs(self, inputs):
        out = inputs / "out"
        args = [
            "derive-cdcf",
            *worksheet_args(inputs),
            "--netlist", str(inputs / "register.bench"),
            "--variant-netlist", str(inputs / "register_unlocked.bench"),
            "--out", str(out),
        ]
        assert main(args) == EXIT_OK
        derived = json.loads((out / "cdcf_derived.json").read_text())
        assert derived["detection"]["FM2"]["M_SEC_LOCK"] == 0.5
        assert derived["prevention"]["TM1"]["M_SEC_KEY"] == round(11 / 74, 4)
        assert derived["provenance"]["common_effect"]["FM1"]["TM1"]["source"] == "Derived"
        evidence = json.loads((out / "cdcf_evidence.json").read_text())
        assert evidence["detection"]["FM1"]["M_SAF_PARITY"] == {"coi_size": 14, "overlap_size": 2}

    def test_requires_netlist(self, inputs, capsys):
        assert main(["derive-cdcf", *worksheet_args(inputs)]) == EXIT_VALIDATION
        assert "--netlist" in capsys.readouterr().err

    def test_variant_needs_netlist(self, inputs, capsys):
        args = ["analyze", *worksheet_args(inputs)]
        args += ["--variant-netlist", str(inputs / "register_unlocked.bench")]
        assert main(args) == EXIT_VALIDATION
        assert "--variant-netlist needs --netlist" in capsys.readouterr().err


class TestNetlistCommands:
    """Tests for `ftmea scoap`, `ftmea coi` and `ftmea faultsim`"""

    def test_scoap(self, inputs):
        out = inputs / "out"
        assert main(["scoap", "--netlist", str(inputs / "nand_not.bench"), "--out", str(out)]) == 0
        assert (out / "scoap.csv").read_text() == (
            "net,cc0,cc1,co\na,1,1,3\nb,1,1,3\ng1,3,2,1\ny,3,4,0\n"
        )

    def test_coi(self, inputs):
        out = inputs / "out"
        args = ["coi", "--netlist", str(inputs / "nand_not.bench"), "--roots", "y"]
        assert main(args + ["--out", str(out)]) == EXIT_OK
        assert json.loads((out / "coi.json").read_text()) == {
            "roots": ["y"],
            "fanin": ["a", "b", "g1", "y"],
            "fanout": ["y"],
        }

    def test_coi_split_and_repeated_roots(self, inputs):
        out = inputs / "out"
        args = ["coi", "--netlist", str(inputs / "register.bench"), "--roots", "q0,q1"]
        args += ["--roots", "par_err", "--out", str(out)]
        assert main(args) == EXIT_OK
        data = json.loads((out / "coi.json").read_text())
        assert data["roots"] == ["par_err", "q0", "q1"]
        # par_err adds itself and sp; s0 and s1 already feed q0 and q1
        assert len(data["fanin"]) == 16

    def test_coi_unknown_root(self, inputs, capsys):
        args = ["coi", "--netlist", str(inputs / "nand_not.bench"), "--roots", "zz"]
        assert main(args + ["--out", str(inputs / "out")]) == EXIT_VALIDATION
        assert "[UNKNOWN_NET]" in capsys.readouterr().err

    def test_coi_requires_roots(self, inputs):
        assert main(["coi", "--netlist", str(inputs / "nand_not.bench")]) == EXIT_VALIDATION

    def test_faultsim(self, inputs):
        out = inputs / "out"
        args = ["faultsim", "--netlist", str(inputs / "register.bench")]
        args += ["--monitored", "lock_alarm", "--attack-inputs", "key_in", "--out", str(out)]
        assert main(args) == EXIT_OK
        data = json.loads((out / "faultsim.json").read_text())
        faults = data["fault_campaign"]
        assert faults["vectors_evaluated"] == 2**7
        assert faults["seed"] is None
        assert "lock_alarm/StuckAt0" in faults["affecting"]
        attack = data["attack_campaign"]
        assert "lock_alarm" in attack["toggleable"]
        assert "par_err" not in attack["toggleable"]

    def test_faultsim_needs_a_campaign(self, inputs, capsys):
        assert main(["faultsim", "--netlist", str(inputs / "nand_not.bench")]) == EXIT_VALIDATION
        assert "--monitored" in capsys.readouterr().err


class TestCompare:
    """Tests for `ftmea compare`"""

    def test_same_report(self, inputs):
        out = inputs / "out"
        args = ["analyze", *worksheet_args(inputs), "--cdcf", str(inputs / "cdcf.json")]
        assert main(args + ["--out", str(out)]) == EXIT_OK
        report = str(out / "rpn_report.csv")
        assert main(["compare", "--before", report, "--after", report, "--out", str(out)]) == 0
        lines = (out / "report_diff.csv").read_text().splitlines()
        assert len(lines) == 5
        for line in lines[1:]:
            cells = line.split(",")
            assert cells[3] == "0"
            assert cells[6] == "0"

    def test_before_after_configured(self, inputs):
        args = ["analyze", *worksheet_args(inputs)]
        assert main(args + ["--out", str(inputs / "before")]) == EXIT_OK
        assert main(args + ["--cdcf", str(inputs / "cdcf.json"), "--out", str(inputs / "after")]) == 0
        compare = [
            "compare",
            "--before", str(inputs / "before" / "rpn_report.csv"),
            "--after", str(inputs / "after" / "rpn_report.csv"),
            "--out", str(inputs / "diff"),
        ]
        assert main(compare) == EXIT_OK
        rows = {
            line.split(",")[0]: line.split(",")
            for line in (inputs / "diff" / "report_diff.csv").read_text().splitlines()[1:]
        }
        assert rows["TM1"][4:] == ["216", "36", "-180"]
        assert rows["FM1"][6] == "0"

    def test_malformed_report(self, inputs, capsys):
        (inputs / "bad.csv").write_text("item_id,rank\nFM1,1\n")
        args = ["compare", "--before", str(inputs / "bad.csv"), "--after", str(inputs / "bad.csv")]
        assert main(args + ["--out", str(inputs / "out")]) == EXIT_VALIDATION
        assert "[INVALID_REPORT]" in capsys.readouterr().err


class TestSettings:
    """Tests for FtmeaSettings and error formatting"""

    def test_from_env(self):
        settings = FtmeaSettings.from_env({"FTMEA_LOG_LEVEL": "debug", "FTMEA_NO_COLOR": ""})
        assert settings.log_level == "DEBUG"
        assert settings.no_color is True
        assert FtmeaSettings.from_env({}).log_level is None

    def test_bad_log_level(self, monkeypatch, capsys):
        monkeypatch.setenv("FTMEA_LOG_LEVEL", "chatty")
        assert main(["scoap", "--netlist", "x.bench"]) == EXIT_VALIDATION
        assert "FTMEA_LOG_LEVEL" in capsys.readouterr().err

    def test_init_settings(self):
        settings = init_settings(FtmeaSettings(no_color=True))
        assert settings.no_color is True

    def test_describe_error(self):
        error = RatingOutOfRangeError("S", 11, source="items.csv", line=3)
        assert describe_error(error) == (
            "items.csv:3: [RATING_OUT_OF_RANGE] Rating S=11 must be an integer in [1, 10]"
        )
        assert describe_error(RatingOutOfRangeError("S", 11)).startswith("[RATING")


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
