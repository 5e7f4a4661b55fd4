"""Quantum circuit compiler with mirror-circuit validation."""

__version__ = "0.1.0"
