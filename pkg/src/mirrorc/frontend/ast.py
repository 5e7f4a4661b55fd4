"""Syntax tree for the OpenQASM subset, plus a source printer.

Angle arguments reuse the IR expression values (``Num``, ``Ref``, ``Neg``,
``BinOp``); every statement-level node carries a source span.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

from ..ir import BinOp, Neg, Num, Ref, format_angle


@dataclass(frozen=True)
class Span:
    line: int
    column: int
    end_line: int
    end_column: int

    def contains(self, other: "Span") -> bool:
        return (self.line, self.column) <= (other.line, other.column) and (
            other.end_line,
            other.end_column,
        ) <= (self.end_line, self.end_column)


_NO_SPAN = Span(0, 0, 0, 0)


def _span() -> Span:
    return field(default=_NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Operand:
    name: str
    index: int | None = None
    span: Span = _span()

    def __str__(self) -> str:
        return self.name if self.index is None else f"{self.name}[{self.index}]"


@dataclass(frozen=True)
class Include:
    path: str
    span: Span = _span()


@dataclass(frozen=True)
class QubitDecl:
    name: str
    size: int
    span: Span = _span()


@dataclass(frozen=True)
class ClassicalDecl:
    name: str
    size: int
    span: Span = _span()


@dataclass(frozen=True)
class GateCall:
    name: str
    args: tuple = ()
    operands: tuple[Operand, ...] = ()
    span: Span = _span()


@dataclass(frozen=True)
class KernelInvoke:
    name: str
    args: tuple = ()
    operands: tuple[Operand, ...] = ()
    span: Span = _span()


@dataclass(frozen=True)
class Measure:
    qubit: Operand
    target: Operand | None = None
    span: Span = _span()


@dataclass(frozen=True)
class Barrier:
    operands: tuple[Operand, ...] = ()
    span: Span = _span()


@dataclass(frozen=True)
class Reset:
    operand: Operand
    span: Span = _span()


@dataclass(frozen=True)
class ParamDecl:
    name: str
    type_name: str = "float"
    width: int | None = 64
    span: Span = _span()


@dataclass(frozen=True)
class QubitArg:
    name: str
    size: int = 1
    span: Span = _span()


Statement = Union[Include, QubitDecl, ClassicalDecl, GateCall, KernelInvoke, Measure, Barrier, Reset, "KernelDef"]


@dataclass(frozen=True)
class KernelDef:
    name: str
    params: tuple[ParamDecl, ...] = ()
    qubit_args: tuple[QubitArg, ...] = ()
    body: tuple = ()
    span: Span = _span()


@dataclass(frozen=True)
class Program:
    version: str | None
    statements: tuple = ()
    span: Span = _span()

    @property
    def includes(self) -> list[Include]:
        return [s for s in self.statements if isinstance(s, Include)]

    @property
    def kernels(self) -> list[KernelDef]:
        return [s for s in self.statements if isinstance(s, KernelDef)]

    @property
    def qubit_decls(self) -> list[QubitDecl]:
        return [s for s in self.statements if isinstance(s, QubitDecl)]

    @property
    def top_level(self) -> list:
        """Statements that form the entry point."""
        return [s for s in self.statements if not isinstance(s, (Include, KernelDef))]


def children(node) -> Iterator:
    if isinstance(node, Program):
        yield from node.statements
    elif isinstance(node, KernelDef):
        yield from node.params
        yield from node.qubit_args
        yield from node.body
    elif isinstance(node, (GateCall, KernelInvoke, Barrier)):
        yield from node.operands
    elif isinstance(node, Measure):
        yield node.qubit
        if node.target is not None:
            yield node.target
    elif isinstance(node, Reset):
        yield node.operand


def walk(node) -> Iterator:
    yield node
    for child in children(node):
        yield from walk(child)


# --- printer ---------------------------------------------------------------


def format_expr(e) -> str:
    if isinstance(e, Num):
        return format_angle(e.value)
    if isinstance(e, Ref):
        return e.name
    if isinstance(e, Neg):
        return f"-({format_expr(e.operand)})"
    if isinstance(e, BinOp):
        return f"({format_expr(e.left)} {e.op} {format_expr(e.right)})"
    return format_angle(e)


def _call(name: str, args: tuple, operands: tuple[Operand, ...]) -> str:
    head = name + (f"({', '.join(format_expr(a) for a in args)})" if args else "")
    return f"{head} {', '.join(map(str, operands))};"


def format_statement(s, indent: str = "") -> list[str]:
    if isinstance(s, Include):
        return [f'{indent}include "{s.path}";']
    if isinstance(s, QubitDecl):
        return [f"{indent}qubit[{s.size}] {s.name};"]
    if isinstance(s, ClassicalDecl):
        return [f"{indent}bit[{s.size}] {s.name};"]
    if isinstance(s, (GateCall, KernelInvoke)):
        return [indent + _call(s.name, s.args, s.operands)]
    if isinstance(s, Measure):
        if s.target is None:
            return [f"{indent}measure {s.qubit};"]
        return [f"{indent}{s.target} = measure {s.qubit};"]
    if isinstance(s, Barrier):
        return [f"{indent}barrier {', '.join(map(str, s.operands))};".replace(" ;", ";")]
    if isinstance(s, Reset):
        return [f"{indent}reset {s.operand};"]
    if isinstance(s, KernelDef):
        params = ", ".join(
            f"{p.type_name}[{p.width}]:{p.name}" if p.width is not None else f"{p.type_name}:{p.name}"
            for p in s.params
        )
        qargs = ", ".join(f"qubit[{a.size}]:{a.name}" for a in s.qubit_args)
        lines = [f"{indent}def {s.name}({params}) {qargs} {{"]
        for b in s.body:
            lines += format_statement(b, indent + "    ")
        return lines + [indent + "}"]
    raise TypeError(f"cannot format {type(s).__name__}")


def format_program(program: Program) -> str:
    lines = [f"OPENQASM {program.version};"] if program.version is not None else []
    for s in program.statements:
        lines += format_statement(s)
    return "\n".join(lines) + "\n"
