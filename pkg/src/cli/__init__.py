"""Command-line surface: simulate, theory, green, tails and compare."""

from .main import build_parser, main
from .output import RunManifest, read_csv, write_csv

__all__ = ["build_parser", "main", "RunManifest", "read_csv", "write_csv"]
