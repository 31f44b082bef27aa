"""
Styled stderr output for the FTMEA CLI
"""

from typing import Optional, TextIO
import sys


class Colors:
    """ANSI color codes for terminal output"""

    OKGREEN = "\033[92m"
    OKCYAN = "\033[96m"
    WARNING = "\033[93m"
    FAIL = "\033[91m"
    ENDC = "\033[0m"
    BOLD = "\033[1m"


class Console:
    """Summary and diagnostic lines on stderr; plain text unless a TTY allows color"""

    def __init__(self, stream: Optional[TextIO] = None, no_color: bool = False):
        self.stream = stream if stream is not None else sys.stderr
        isatty = getattr(self.stream, "isatty", lambda: False)
        self.color = not no_color and isatty()

    def _emit(self, color: str, text: str) -> None:
        if self.color:
            text = f"{color}{text}{Colors.ENDC}"
        print(text, file=self.stream)

    def success(self, text: str) -> None:
        self._emit(Colors.OKGREEN, text)

    def info(self, text: str) -> None:
        self._emit(Colors.OKCYAN, text)

    def warning(self, text: str) -> None:
        self._emit(Colors.WARNING, text)

    def error(self, text: str) -> None:
        self._emit(Colors.BOLD + Colors.FAIL, text)
