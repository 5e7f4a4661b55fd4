"""OpenQASM 3 subset frontend: tokenize, parse, build IR."""

from __future__ import annotations

from pathlib import Path

from ..ir import Module
from .ast import Program, format_program
from .builder import ENTRY_NAME, build_ir
from .diagnostics import CompileError, Diagnostic
from .emit import kernel_to_qasm
from .lexer import Token, tokenize
from .parser import parse, parse_source


def compile_source(text: str) -> Module:
    return build_ir(parse(tokenize(text)))


def compile_file(path: str | Path) -> Module:
    return compile_source(Path(path).read_text(encoding="utf-8"))


__all__ = [
    "ENTRY_NAME",
    "CompileError",
    "Diagnostic",
    "Module",
    "Program",
    "Token",
    "build_ir",
    "compile_file",
    "compile_source",
    "format_program",
    "kernel_to_qasm",
    "parse",
    "parse_source",
    "tokenize",
]
