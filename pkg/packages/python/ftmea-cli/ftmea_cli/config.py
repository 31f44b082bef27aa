"""
Configuration Management for the FTMEA CLI

Run configuration per subcommand and process-wide settings.
"""

from enum import Enum
from pathlib import Path
from typing import List, Mapping, Optional
import logging
import os

from pydantic import BaseModel, field_validator, model_validator

from ftmea_netlist.faultsim import DEFAULT_SAMPLES, DEFAULT_SEED


class ReportFormat(str, Enum):
    CSV = "csv"
    MARKDOWN = "markdown"
    JSON = "json"

    @property
    def extension(self) -> str:
        return {"csv": "csv", "markdown": "md", "json": "json"}[self.value]


# Paths each subcommand cannot run without
REQUIRED_PATHS = {
    "analyze": ["worksheet_path"],
    "derive-cdcf": ["worksheet_path", "netlist_path"],
    "scoap": ["netlist_path"],
    "coi": ["netlist_path"],
    "faultsim": ["netlist_path"],
    "compare": ["before_path", "after_path"],
}

_FLAGS = {
    "worksheet_path": "--worksheet",
    "netlist_path": "--netlist",
    "before_path": "--before",
    "after_path": "--after",
}


class RunConfig(BaseModel):
    """Validated inputs of one CLI invocation"""

    command: str
    worksheet_path: Optional[Path] = None
    measures_path: Optional[Path] = None
    applicability_path: Optional[Path] = None
    cdcf_path: Optional[Path] = None
    netlist_path: Optional[Path] = None
    variant_netlist_path: Optional[Path] = None
    risk_matrix_path: Optional[Path] = None
    item_anchors_path: Optional[Path] = None
    before_path: Optional[Path] = None
    after_path: Optional[Path] = None
    output_dir: Path = Path(".")
    format: ReportFormat = ReportFormat.CSV
    seed: int = DEFAULT_SEED
    samples: int = DEFAULT_SAMPLES
    roots: List[str] = []
    attack_inputs: List[str] = []
    monitored: List[str] = []

    @field_validator("command")
    @classmethod
    def check_command(cls, value: str) -> str:
        if value not in REQUIRED_PATHS:
            raise ValueError(f"unknown command {value!r}")
        return value

    @field_validator("samples")
    @classmethod
    def check_samples(cls, value: int) -> int:
        if value < 1:
            raise ValueError("samples must be positive")
        return value

    @field_validator("roots", "attack_inputs", "monitored", mode="before")
    @classmethod
    def split_net_list(cls, value):
        """Accept `a,b` as well as repeated flags"""
        if value is None:
            return []
        if isinstance(value, str):
            value = [value]
        return [net.strip() for entry in value for net in entry.split(",") if net.strip()]

    @model_validator(mode="after")
    def check_required(self) -> "RunConfig":
        missing = [
            _FLAGS[name] for name in REQUIRED_PATHS[self.command] if getattr(self, name) is None
        ]
        if missing:
            raise ValueError(f"{self.command} requires {', '.join(missing)}")
        if self.command == "coi" and not self.roots:
            raise ValueError("coi requires --roots")
        if self.command == "faultsim" and not (self.monitored or self.attack_inputs):
            raise ValueError("faultsim requires --monitored or --attack-inputs")
        if self.variant_netlist_path is not None and self.netlist_path is None:
            raise ValueError("--variant-netlist needs --netlist")
        return self

    def prepare_output_dir(self) -> Path:
        """Create the output directory; OSError when it cannot be written"""
        self.output_dir.mkdir(parents=True, exist_ok=True)
        if not os.access(self.output_dir, os.W_OK):
            raise PermissionError(f"{self.output_dir}: output directory is not writable")
        return self.output_dir


class FtmeaSettings(BaseModel):
    """Process-wide settings read from FTMEA_* environment variables"""

    no_color: bool = False
    log_level: Optional[str] = None

    @field_validator("log_level")
    @classmethod
    def check_log_level(cls, value: Optional[str]) -> Optional[str]:
        if value is None:
            return None
        level = value.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"unknown log level {value!r}")
        return level

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "FtmeaSettings":
        env = os.environ if environ is None else environ
        return cls(
            no_color="FTMEA_NO_COLOR" in env,
            log_level=env.get("FTMEA_LOG_LEVEL") or None,
        )


# Singleton settings
_settings: Optional[FtmeaSettings] = None


def init_settings(settings: Optional[FtmeaSettings] = None) -> FtmeaSettings:
    """Initialize global settings, from the environment unless given"""
    global _settings
    _settings = settings if settings is not None else FtmeaSettings.from_env()
    return _settings


def get_settings() -> FtmeaSettings:
    """Get global settings"""
    if _settings is None:
        raise RuntimeError("FTMEA settings not initialized. Call init_settings() first.")
    return _settings


def is_initialized() -> bool:
    return _settings is not None
