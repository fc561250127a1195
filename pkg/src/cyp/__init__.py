"""Checker for equational proofs about small functional programs, with holes."""

from .checker import Report, check_file, check_source
from .diagnostics import CypError, Diagnostic, render

__all__ = ["CypError", "Diagnostic", "Report", "check_file", "check_source", "render"]
