"""
FTMEA CLI Package

The `ftmea` command: corrected RPN reports, structural CDCF derivation,
SCOAP, cones of influence, fault simulation and report comparison.
"""

__version__ = "0.1.0"

from .config import (
    FtmeaSettings,
    ReportFormat,
    RunConfig,
    get_settings,
    init_settings,
    is_initialized,
)
from .console import Console
from .main import COMMANDS, EXIT_IO, EXIT_OK, EXIT_VALIDATION, build_parser, main

__all__ = [
    # Configuration
    "FtmeaSettings",
    "ReportFormat",
    "RunConfig",
    "init_settings",
    "get_settings",
    "is_initialized",
    # Output
    "Console",
    # Entry point
    "COMMANDS",
    "EXIT_OK",
    "EXIT_VALIDATION",
    "EXIT_IO",
    "build_parser",
    "main",
]
