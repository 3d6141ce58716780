"""Logging helpers shared by the numerical modules."""

from .decorators import log_io
from .log_sanitizer import sanitize_log_input

__all__ = ["log_io", "sanitize_log_input"]
