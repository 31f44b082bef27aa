"""
FTMEA Command Line

Subcommands: analyze, derive-cdcf, scoap, coi, faultsim, compare.

Exit codes: 0 success, 1 validation error, 2 I/O error. All outputs of a run
are rendered before the first file is written, and each file is written to a
temporary name and renamed into place.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Mapping, Optional, Sequence
import argparse
import contextlib
import json
import logging
import os
import sys
import tempfile

from pydantic import ValidationError

from ftmea_core.correlation import CdcfBundle, dump_cdcf, load_cdcf, merge_bundles
from ftmea_core.errors import FtmeaError, InvalidEncodingError
from ftmea_core.models import Worksheet
from ftmea_core.reports import (
    compare_reports,
    read_report,
    render_comparison_csv,
    render_csv,
    render_diff_csv,
    render_json,
    render_markdown,
)
from ftmea_core.risk_matrix import load_risk_matrix
from ftmea_core.rpn import compute_rpn, rank_changes
from ftmea_core.worksheet import parse_item_anchors, parse_worksheet
from ftmea_netlist.bench import Netlist, parse_bench
from ftmea_netlist.cones import fanin_cone, fanout_cone
from ftmea_netlist.faultsim import (
    VectorSource,
    all_sites,
    attack_toggle_campaign,
    fault_campaign,
)
from ftmea_netlist.scoap import compute_scoap, render_scoap_csv
from ftmea_netlist.structural import Derivation, DerivationRequest, derive

from .config import ReportFormat, RunConfig, init_settings
from .console import Console

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


class UsageError(Exception):
    """Command line could not be parsed"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class CommandResult:
    summary: str
    files: Dict[str, str] = field(default_factory=dict)


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise InvalidEncodingError(
            f"byte 0x{e.object[e.start]:02x} at offset {e.start}", source=str(path)
        ) from e


def _json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def write_outputs(output_dir: Path, files: Mapping[str, str]) -> None:
    """Write every file atomically (temp file + rename)"""
    for name in sorted(files):
        fd, tmp = tempfile.mkstemp(dir=output_dir, prefix=f".{name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                handle.write(files[name])
            os.replace(tmp, output_dir / name)
        except BaseException:
            with contextlib.suppress(FileNotFoundError):
                os.unlink(tmp)
            raise
        logger.debug("wrote %s", output_dir / name)


def _load_worksheet(config: RunConfig) -> Worksheet:
    risk_matrix = None
    if config.risk_matrix_path is not None:
        risk_matrix = load_risk_matrix(
            _read(config.risk_matrix_path), str(config.risk_matrix_path)
        )
    paths = (config.worksheet_path, config.measures_path, config.applicability_path)
    texts = [_read(path) if path is not None else None for path in paths]
    return parse_worksheet(
        texts[0],
        texts[1],
        texts[2],
        risk_matrix,
        sources=tuple(
            str(path) if path is not None else f"<{label}>"
            for path, label in zip(paths, ("worksheet", "measures", "applicability"))
        ),
    )


def _load_netlist(path: Path) -> Netlist:
    return parse_bench(_read(path), source=str(path), name=path.stem)


def _derive(config: RunConfig, worksheet: Worksheet) -> Optional[Derivation]:
    if config.netlist_path is None:
        return None
    netlist = _load_netlist(config.netlist_path)
    variant = None
    if config.variant_netlist_path is not None:
        variant = _load_netlist(config.variant_netlist_path)
    item_anchors = {}
    if config.item_anchors_path is not None:
        item_anchors = parse_item_anchors(
            _read(config.item_anchors_path), str(config.item_anchors_path)
        )
    request = DerivationRequest(netlist, variant_netlist=variant, item_anchors=item_anchors)
    return derive(request, worksheet)


def cmd_analyze(config: RunConfig) -> CommandResult:
    """Corrected RPN report, rank comparison and the effective CDCF bundle"""
    worksheet = _load_worksheet(config)
    if config.cdcf_path is not None:
        bundle = load_cdcf(_read(config.cdcf_path), worksheet, str(config.cdcf_path))
    else:
        bundle = CdcfBundle.empty(worksheet)
    derivation = _derive(config, worksheet)
    if derivation is not None:
        bundle = merge_bundles(bundle, derivation.bundle)

    results = compute_rpn(worksheet, bundle)
    report = f"rpn_report.{config.format.extension}"
    files: Dict[str, str] = {}
    if config.format is ReportFormat.CSV:
        files[report] = render_csv(results)
        files["comparison.csv"] = render_comparison_csv(results)
    elif config.format is ReportFormat.MARKDOWN:
        files[report] = render_markdown(results, bundle, worksheet)
    else:
        files[report] = render_json(results)
    files["cdcf_effective.json"] = dump_cdcf(bundle, with_provenance=True)

    moved = sum(1 for change in rank_changes(results) if change.rank_delta != 0)
    return CommandResult(
        f"ranked {len(results)} items, {moved} rank changes vs classical FMEA", files
    )


def cmd_derive_cdcf(config: RunConfig) -> CommandResult:
    worksheet = _load_worksheet(config)
    derivation = _derive(config, worksheet)
    return CommandResult(
        f"derived {derivation.bundle.entry_count()} CDCF entries",
        {
            "cdcf_derived.json": dump_cdcf(derivation.bundle, with_provenance=True),
            "cdcf_evidence.json": derivation.evidence_json(),
        },
    )


def cmd_scoap(config: RunConfig) -> CommandResult:
    netlist = _load_netlist(config.netlist_path)
    report = compute_scoap(netlist)
    return CommandResult(f"scored {len(report.nets)} nets", {"scoap.csv": render_scoap_csv(report)})


def cmd_coi(config: RunConfig) -> CommandResult:
    netlist = _load_netlist(config.netlist_path)
    fanin = fanin_cone(netlist, config.roots)
    fanout = fanout_cone(netlist, config.roots)
    data = {
        "roots": sorted(set(config.roots)),
        "fanin": sorted(fanin),
        "fanout": sorted(fanout),
    }
    return CommandResult(
        f"fan-in {len(fanin)} nets, fan-out {len(fanout)} nets", {"coi.json": _json(data)}
    )


def cmd_faultsim(config: RunConfig) -> CommandResult:
    netlist = _load_netlist(config.netlist_path)
    vectors = VectorSource(samples=config.samples, seed=config.seed)
    data = {}
    if config.monitored:
        sites = all_sites(netlist.nets)
        data["fault_campaign"] = fault_campaign(
            netlist, config.monitored, sites, vectors
        ).to_dict()
    if config.attack_inputs:
        data["attack_campaign"] = attack_toggle_campaign(
            netlist, config.attack_inputs, vectors
        ).to_dict()
    evaluated = sum(campaign["vectors_evaluated"] for campaign in data.values())
    return CommandResult(f"{evaluated} vectors evaluated", {"faultsim.json": _json(data)})


def cmd_compare(config: RunConfig) -> CommandResult:
    before = read_report(_read(config.before_path), str(config.before_path))
    after = read_report(_read(config.after_path), str(config.after_path))
    diffs = compare_reports(before, after)
    moved = sum(1 for diff in diffs if diff.rank_delta)
    return CommandResult(
        f"compared {len(diffs)} items, {moved} rank changes",
        {"report_diff.csv": render_diff_csv(diffs)},
    )


COMMANDS: Dict[str, Callable[[RunConfig], CommandResult]] = {
    "analyze": cmd_analyze,
    "derive-cdcf": cmd_derive_cdcf,
    "scoap": cmd_scoap,
    "coi": cmd_coi,
    "faultsim": cmd_faultsim,
    "compare": cmd_compare,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", dest="output_dir", help="Output directory (default: .)")
    common.add_argument("--seed", type=int, help="Seed for sampled vectors (default: 0)")
    common.add_argument(
        "--verbose", "-v", action="count", default=0, help="-v for info, -vv for debug logs"
    )

    worksheet = _Parser(add_help=False)
    worksheet.add_argument("--worksheet", dest="worksheet_path", help="FM/TM worksheet CSV")
    worksheet.add_argument("--measures", dest="measures_path", help="Countermeasure CSV")
    worksheet.add_argument(
        "--applicability", dest="applicability_path", help="Item/measure applicability CSV"
    )
    worksheet.add_argument("--risk-matrix", dest="risk_matrix_path", help="Unified risk matrix JSON")

    netlist = _Parser(add_help=False)
    netlist.add_argument("--netlist", dest="netlist_path", help="Bench netlist")

    derivation = _Parser(add_help=False)
    derivation.add_argument(
        "--variant-netlist",
        dest="variant_netlist_path",
        help="Bench netlist of the design without the prevention measures",
    )
    derivation.add_argument(
        "--item-anchors", dest="item_anchors_path", help="Per-item net anchors CSV"
    )

    parser = _Parser(prog="ftmea", description="Integrated failure and threat mode analysis")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser(
        "analyze",
        parents=[common, worksheet, netlist, derivation],
        help="Compute and rank corrected RPNs",
    )
    analyze.add_argument("--cdcf", dest="cdcf_path", help="Configured CDCF JSON")
    analyze.add_argument(
        "--format", choices=[f.value for f in ReportFormat], default=ReportFormat.CSV.value
    )

    sub.add_parser(
        "derive-cdcf",
        parents=[common, worksheet, netlist, derivation],
        help="Derive CDCFs from netlist structure",
    )
    sub.add_parser("scoap", parents=[common, netlist], help="SCOAP testability per net")

    coi = sub.add_parser("coi", parents=[common, netlist], help="Cones of influence")
    coi.add_argument("--roots", action="append", help="Root nets (comma-separated or repeated)")

    faultsim = sub.add_parser(
        "faultsim", parents=[common, netlist], help="Stuck-at and attack-toggle campaigns"
    )
    faultsim.add_argument("--monitored", action="append", help="Nets observed for fault effects")
    faultsim.add_argument(
        "--attack-inputs", dest="attack_inputs", action="append", help="Attacker-controlled inputs"
    )
    faultsim.add_argument("--samples", type=int, help="Vectors sampled above 16 inputs")

    compare = sub.add_parser("compare", parents=[common], help="Diff two RPN reports")
    compare.add_argument("--before", dest="before_path", help="Earlier report (CSV or JSON)")
    compare.add_argument("--after", dest="after_path", help="Later report (CSV or JSON)")
    return parser


def _configure_logging(verbosity: int, default_level: Optional[str]) -> None:
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = getattr(logging, default_level or "WARNING")
    logging.basicConfig(
        stream=sys.stderr,
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def describe_error(error: FtmeaError) -> str:
    """`path:line: [CODE] message`, location parts only when known"""
    location = ":".join(str(part) for part in (error.source, error.line) if part is not None)
    return f"{location}: {error}" if location else str(error)


def _validation_message(error: ValidationError) -> str:
    return "; ".join(detail["msg"].removeprefix("Value error, ") for detail in error.errors())


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the `ftmea` command"""
    console = Console()
    try:
        settings = init_settings()
    except ValidationError as e:
        console.error(f"error: FTMEA_LOG_LEVEL: {_validation_message(e)}")
        return EXIT_VALIDATION
    console = Console(no_color=settings.no_color)

    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        console.error(f"error: {e}")
        return EXIT_VALIDATION
    _configure_logging(args.verbose, settings.log_level)

    options = {
        name: value
        for name, value in vars(args).items()
        if name in RunConfig.model_fields and value is not None
    }
    try:
        config = RunConfig(**options)
    except ValidationError as e:
        console.error(f"error: {_validation_message(e)}")
        return EXIT_VALIDATION

    try:
        result = COMMANDS[config.command](config)
        output_dir = config.prepare_output_dir()
        write_outputs(output_dir, result.files)
    except FtmeaError as e:
        console.error(describe_error(e))
        return EXIT_VALIDATION
    except OSError as e:
        console.error(f"{e.filename}: {e.strerror}" if e.filename else str(e))
        return EXIT_IO

    console.success(f"{config.command}: {result.summary}")
    for name in sorted(result.files):
        console.info(f"  {output_dir / name}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
