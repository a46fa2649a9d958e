"""
Task definitions for project automation using invoke.
Install with: pip install invoke
Run with: invoke [task-name]
"""

import shutil
from pathlib import Path

from invoke import task

# Packaging and test leftovers at the project root
BUILD_DIRS = ["build", "dist", ".pytest_cache", "clifford_kt.egg-info"]
# Default output of `clifford-kt enumerate`
DATA_DIR = "ckt-data"


def remove_artifacts(root=".", data=False):
    """Delete build output and bytecode caches under root; returns the removed paths."""
    root = Path(root)
    targets = [root / name for name in BUILD_DIRS]
    for sub in ("cliffordkt", "tests"):
        if (root / sub).is_dir():
            targets += sorted((root / sub).rglob("__pycache__"))
    if data:
        targets.append(root / DATA_DIR)
    removed = []
    for path in targets:
        if path.is_dir():
            print(f"Removing directory: {path}")
            shutil.rmtree(path, ignore_errors=True)
            removed.append(path)
    return removed


@task
def clean(c, data=False):
    """Remove build artifacts; --data also drops stored state layers."""
    remove_artifacts(data=data)


@task
def test(c):
    """Run the fast tests."""
    c.run("python -m pytest tests/ -v")


@task
def test_slow(c):
    """Run every test, including the long enumerations."""
    c.run("python -m pytest tests/ -v --runslow")


@task
def verify(c):
    """Run the quick property suites through the CLI."""
    c.run("clifford-kt verify counts-n1 strict-law monotone-sh lower-bound duality t-strategy tables")


@task
def lint(c):
    """Run linting."""
    c.run("flake8 cliffordkt tests")
    c.run("black --check cliffordkt tests")


@task
def format(c):
    """Format code with Black."""
    c.run("black cliffordkt tests")


@task
def build(c):
    """Build the package."""
    clean(c)
    c.run("python -m build")
