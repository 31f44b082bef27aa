#!/usr/bin/env python3
"""
FTMEA Test Runner

Runs the pytest suite of every package under packages/python and prints a
per-package summary table.
"""

import argparse
import importlib.util
import re
import subprocess
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

# Install order; later packages depend on earlier ones
PACKAGE_ORDER = ["ftmea-core", "ftmea-netlist", "ftmea-cli"]

# import name -> distribution name
REQUIRED_MODULES = {
    "pytest": "pytest",
    "pydantic": "pydantic",
    "networkx": "networkx",
    "numpy": "numpy",
}

STATUS_ORDER = ["passed", "failed", "error", "skipped", "xfailed", "xpassed"]


class Colors:
    """ANSI color codes for terminal output"""

    HEADER = "\033[95m"
    OKCYAN = "\033[96m"
    OKGREEN = "\033[92m"
    WARNING = "\033[93m"
    FAIL = "\033[91m"
    ENDC = "\033[0m"
    BOLD = "\033[1m"


@dataclass
class PackageTestResult:
    """Outcome of one package's pytest run"""

    package: str
    success: bool
    count: int = 0
    duration: float = 0.0
    stats: Dict[str, int] = field(default_factory=dict)
    summary: str = ""


def header(text: str) -> None:
    rule = f"{Colors.BOLD}{Colors.HEADER}{'=' * 70}{Colors.ENDC}"
    print(f"\n{rule}\n{Colors.BOLD}{Colors.HEADER}{text}{Colors.ENDC}\n{rule}\n")


def ok(text: str) -> None:
    print(f"{Colors.OKGREEN}✅ {text}{Colors.ENDC}")


def fail(text: str) -> None:
    print(f"{Colors.FAIL}❌ {text}{Colors.ENDC}")


def warn(text: str) -> None:
    print(f"{Colors.WARNING}⚠️  {text}{Colors.ENDC}")


def parse_pytest_summary(stdout: str) -> Dict[str, int]:
    """Status counts from the final `=== 3 passed, 1 failed in 0.12s ===` line"""
    for line in reversed(stdout.splitlines()):
        line = line.strip()
        if line.startswith("=") and " in " in line:
            counts, _, _ = line.strip("= ").partition(" in ")
            stats: Dict[str, int] = {}
            for count, label in re.findall(r"(\d+)\s+([a-zA-Z_]+)", counts):
                stats[label] = stats.get(label, 0) + int(count)
            return stats
    return {}


def format_stats(stats: Dict[str, int]) -> str:
    if not stats:
        return "no tests collected"
    known = [f"{stats[key]} {key}" for key in STATUS_ORDER if key in stats]
    rest = sorted(f"{count} {label}" for label, count in stats.items() if label not in STATUS_ORDER)
    return ", ".join(known + rest)


class TestRunner:
    """Test runner for the FTMEA packages"""

    __test__ = False

    def __init__(self, packages_dir: Optional[Path] = None):
        self.packages_dir = packages_dir or Path(__file__).resolve().parent
        self.available_packages = self.discover_packages()

    def discover_packages(self) -> List[str]:
        """Packages with a pyproject.toml, in install order"""
        found = {
            path.name
            for path in self.packages_dir.iterdir()
            if path.is_dir() and (path / "pyproject.toml").exists()
        }
        ordered = [name for name in PACKAGE_ORDER if name in found]
        return ordered + sorted(found - set(ordered))

    def run_package_tests(
        self, package: str, pytest_args: Optional[List[str]] = None, show_output: bool = False
    ) -> PackageTestResult:
        package_dir = self.packages_dir / package
        tests_dir = package_dir / "tests"
        if not tests_dir.exists():
            warn(f"No tests directory found for {package}")
            return PackageTestResult(package, success=True, summary="no tests directory")

        print(f"\n{Colors.BOLD}Testing: {package}{Colors.ENDC}")
        command = [sys.executable, "-m", "pytest", str(tests_dir), "-v", "--tb=short"]
        command += pytest_args or []

        start = time.time()
        completed = subprocess.run(command, cwd=package_dir, capture_output=True, text=True)
        duration = time.time() - start

        stats = parse_pytest_summary(completed.stdout)
        result = PackageTestResult(
            package,
            success=completed.returncode == 0,
            count=sum(n for label, n in stats.items() if not label.startswith("warning")),
            duration=duration,
            stats=stats,
        )
        if result.success:
            if show_output:
                print(completed.stdout)
            ok(f"{package}: {format_stats(stats)} in {duration:.2f}s")
        else:
            fail(f"{package}: Tests failed")
            print(completed.stdout)
            if completed.stderr:
                sys.stderr.write(completed.stderr)
                result.summary = completed.stderr.strip().splitlines()[-1]
        return result

    def run_all_tests(
        self,
        packages: Optional[List[str]] = None,
        pytest_args: Optional[List[str]] = None,
        show_output: bool = False,
    ) -> int:
        packages = packages or list(self.available_packages)
        if not packages:
            warn("No packages available to test.")
            return 0

        header("🧪 FTMEA Test Runner")
        results = [self.run_package_tests(p, pytest_args, show_output) for p in packages]

        header("📊 Test Summary")
        print(f"{'Package':<20} {'Tests':<8} {'Status':<6} {'Time':<9} Summary")
        print("-" * 80)
        for result in results:
            status = "PASS" if result.success else "FAIL"
            color = Colors.OKGREEN if result.success else Colors.FAIL
            summary = format_stats(result.stats) if result.stats else (result.summary or "-")
            print(
                f"{result.package:<20} {result.count:<8} {color}{status:<6}{Colors.ENDC} "
                f"{result.duration:>6.2f}s   {summary}"
            )
        print("-" * 80)
        total = sum(r.count for r in results)
        elapsed = sum(r.duration for r in results)
        print(f"{'TOTAL':<20} {total:<8} {'':<6} {elapsed:>6.2f}s\n")

        if all(r.success for r in results):
            ok(f"All {total} tests passed in {elapsed:.2f}s")
            return 0
        fail("Some tests failed")
        return 1

    def check_dependencies(self) -> bool:
        header("🔍 Checking Dependencies")
        missing = []
        for module, distribution in REQUIRED_MODULES.items():
            if importlib.util.find_spec(module) is None:
                missing.append(distribution)
                fail(f"{distribution} is NOT installed")
            else:
                ok(f"{distribution} is installed")
        if missing:
            warn(f"Install missing packages: pip install {' '.join(missing)}")
        return not missing

    def install_packages(self, packages: Optional[List[str]] = None) -> None:
        """Editable installs, dependencies first"""
        header("📦 Installing Packages")
        for package in packages or self.available_packages:
            print(f"\nInstalling {package}...")
            try:
                subprocess.run(
                    [sys.executable, "-m", "pip", "install", "-e", str(self.packages_dir / package), "-q"],
                    check=True,
                )
                ok(f"{package} installed")
            except subprocess.CalledProcessError as e:
                fail(f"Failed to install {package}: {e}")


def main() -> int:
    runner = TestRunner()

    parser = argparse.ArgumentParser(description="Run FTMEA tests")
    parser.add_argument(
        "--package",
        "-p",
        dest="packages",
        action="append",
        help="Limit the run to specific package(s); repeat or comma-separate. Defaults to all.",
    )
    parser.add_argument("--install", "-i", action="store_true", help="Install packages before testing")
    parser.add_argument("--check-deps", action="store_true", help="Only check dependencies")
    parser.add_argument("--list-packages", action="store_true", help="List packages and exit")
    parser.add_argument("--show-output", action="store_true", help="Show pytest output on success")
    parser.add_argument(
        "--pytest-args",
        nargs=argparse.REMAINDER,
        help="Extra arguments forwarded to pytest",
    )
    args = parser.parse_args()

    if args.list_packages:
        for package in runner.available_packages:
            print(f"- {package}")
        return 0
    if args.check_deps:
        return 0 if runner.check_dependencies() else 1

    selected: Optional[List[str]] = None
    if args.packages:
        names = [part.strip() for entry in args.packages for part in entry.split(",") if part.strip()]
        if names and not any(name.lower() == "all" for name in names):
            unknown = sorted(set(names) - set(runner.available_packages))
            if unknown:
                fail(f"Unknown package(s): {', '.join(unknown)}")
                return 1
            selected = list(dict.fromkeys(names))

    if args.install:
        runner.install_packages(selected)
    return runner.run_all_tests(selected, args.pytest_args, args.show_output)


if __name__ == "__main__":
    sys.exit(main())
