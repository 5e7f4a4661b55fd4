"""Lower the syntax tree to an IR module."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..gates import GATES, LOGICAL_GATES
from ..ir import Angle, Dialect, Instruction, Kernel, Module, angle_params
from .ast import (
    Barrier,
    ClassicalDecl,
    GateCall,
    Include,
    KernelDef,
    KernelInvoke,
    Measure,
    Operand,
    Program,
    QubitDecl,
    Reset,
    Span,
)
from .diagnostics import CompileError

ENTRY_NAME = "main"
STDGATES = "stdgates.inc"


def _fail(message: str, span: Span) -> CompileError:
    return CompileError.at(message, span.line, span.column)


@dataclass
class _Scope:
    qregs: dict[str, tuple[int, int]] = field(default_factory=dict)  # name -> (offset, size)
    cregs: dict[str, tuple[int, int]] = field(default_factory=dict)
    params: tuple[str, ...] = ()
    n_qubits: int = 0
    n_clbits: int = 0
    instructions: list[Instruction] = field(default_factory=list)

    def add_qreg(self, name: str, size: int, span: Span) -> None:
        if name in self.qregs or name in self.cregs:
            raise _fail(f"redefinition of '{name}'", span)
        self.qregs[name] = (self.n_qubits, size)
        self.n_qubits += size

    def add_creg(self, name: str, size: int, span: Span) -> None:
        if name in self.qregs or name in self.cregs:
            raise _fail(f"redefinition of '{name}'", span)
        self.cregs[name] = (self.n_clbits, size)
        self.n_clbits += size


def _resolve(regs: dict[str, tuple[int, int]], op: Operand, what: str) -> list[int]:
    if op.name not in regs:
        raise _fail(f"undefined identifier '{op.name}'", op.span)
    offset, size = regs[op.name]
    if op.index is None:
        return list(range(offset, offset + size))
    if not 0 <= op.index < size:
        raise _fail(f"{what} index out of range: {op.name}[{op.index}] (size {size})", op.span)
    return [offset + op.index]


class Builder:
    def __init__(self, program: Program):
        self.program = program
        self.gates_enabled = False
        self.kernels: dict[str, Kernel] = {}

    def build(self) -> Module:
        entry = _Scope()
        for stmt in self.program.statements:
            if isinstance(stmt, Include):
                if stmt.path != STDGATES:
                    raise _fail(f"cannot include '{stmt.path}': only \"{STDGATES}\" is available", stmt.span)
                self.gates_enabled = True
            elif isinstance(stmt, KernelDef):
                self.kernel_def(stmt)
            else:
                if isinstance(stmt, QubitDecl):
                    entry.add_qreg(stmt.name, stmt.size, stmt.span)
                    offset = entry.qregs[stmt.name][0]
                    entry.instructions.append(Instruction.alloc(stmt.name, range(offset, offset + stmt.size)))
                else:
                    self.statement(entry, stmt)
        main = Kernel(ENTRY_NAME, entry.n_qubits, tuple(entry.instructions), (), entry.n_clbits)
        return Module((*self.kernels.values(), main), ENTRY_NAME, Dialect.LOGICAL)

    def kernel_def(self, node: KernelDef) -> None:
        if node.name == ENTRY_NAME:
            raise _fail(f"kernel name '{ENTRY_NAME}' is reserved for the entry point", node.span)
        if node.name in self.kernels or node.name in GATES:
            raise _fail(f"redefinition of '{node.name}'", node.span)
        names = [p.name for p in node.params]
        if len(set(names)) != len(names):
            raise _fail(f"duplicate parameter in kernel '{node.name}'", node.span)
        scope = _Scope(params=tuple(names))
        for arg in node.qubit_args:
            scope.add_qreg(arg.name, arg.size, arg.span)
        # register before the body so recursion is caught by inlining, not here
        self.kernels[node.name] = Kernel(node.name, scope.n_qubits, (), scope.params, 0)
        for stmt in node.body:
            if isinstance(stmt, QubitDecl):
                raise _fail("qubit declarations are not allowed inside a kernel", stmt.span)
            self.statement(scope, stmt)
        self.kernels[node.name] = Kernel(
            node.name, scope.n_qubits, tuple(scope.instructions), scope.params, scope.n_clbits
        )

    def angle(self, scope: _Scope, expr, span: Span) -> Angle:
        unknown = angle_params(expr) - set(scope.params)
        if unknown:
            raise _fail(f"undefined identifier '{sorted(unknown)[0]}'", span)
        if angle_params(expr):
            return expr
        value = expr.evaluate({})
        return float(value)

    def statement(self, scope: _Scope, stmt) -> None:
        if isinstance(stmt, ClassicalDecl):
            scope.add_creg(stmt.name, stmt.size, stmt.span)
        elif isinstance(stmt, GateCall):
            self.gate_call(scope, stmt)
        elif isinstance(stmt, KernelInvoke):
            self.invoke(scope, stmt)
        elif isinstance(stmt, Measure):
            self.measure(scope, stmt)
        elif isinstance(stmt, Barrier):
            qubits = (
                [q for op in stmt.operands for q in _resolve(scope.qregs, op, "qubit")]
                if stmt.operands
                else list(range(scope.n_qubits))
            )
            scope.instructions.append(Instruction.barrier(*qubits))
        elif isinstance(stmt, Reset):
            for q in _resolve(scope.qregs, stmt.operand, "qubit"):
                scope.instructions.append(Instruction.reset(q))
        else:
            raise _fail(f"unsupported statement {type(stmt).__name__}", stmt.span)

    def gate_call(self, scope: _Scope, stmt: GateCall) -> None:
        if stmt.name not in LOGICAL_GATES:
            raise _fail(f"undefined gate '{stmt.name}'", stmt.span)
        if not self.gates_enabled:
            raise _fail(f"undefined gate '{stmt.name}' (missing include \"{STDGATES}\"?)", stmt.span)
        spec = GATES[stmt.name]
        if len(stmt.args) != spec.n_angles:
            raise _fail(
                f"gate '{stmt.name}' takes {spec.n_angles} angle(s), got {len(stmt.args)}", stmt.span
            )
        if len(stmt.operands) != spec.n_qubits:
            raise _fail(
                f"gate '{stmt.name}' takes {spec.n_qubits} qubit(s), got {len(stmt.operands)}", stmt.span
            )
        angles = tuple(self.angle(scope, a, stmt.span) for a in stmt.args)
        resolved = [_resolve(scope.qregs, op, "qubit") for op in stmt.operands]
        widths = {len(r) for op, r in zip(stmt.operands, resolved) if op.index is None}
        if len(widths) > 1:
            raise _fail(f"register size mismatch in broadcast of '{stmt.name}'", stmt.span)
        width = widths.pop() if widths else 1
        for i in range(width):
            qubits = tuple(r[i] if op.index is None else r[0] for op, r in zip(stmt.operands, resolved))
            if len(set(qubits)) != len(qubits):
                raise _fail(f"duplicate qubit operands for '{stmt.name}'", stmt.span)
            scope.instructions.append(Instruction.gate(stmt.name, *qubits, angles=angles))

    def invoke(self, scope: _Scope, stmt: KernelInvoke) -> None:
        callee = self.kernels.get(stmt.name)
        if callee is None:
            raise _fail(f"undefined kernel '{stmt.name}'", stmt.span)
        if len(stmt.args) != len(callee.params):
            raise _fail(
                f"kernel '{stmt.name}' takes {len(callee.params)} argument(s), got {len(stmt.args)}", stmt.span
            )
        qubits = [q for op in stmt.operands for q in _resolve(scope.qregs, op, "qubit")]
        if len(qubits) != callee.n_qubits:
            raise _fail(f"kernel '{stmt.name}' takes {callee.n_qubits} qubit(s), got {len(qubits)}", stmt.span)
        if len(set(qubits)) != len(qubits):
            raise _fail(f"duplicate qubit operands for '{stmt.name}'", stmt.span)
        args = tuple(self.angle(scope, a, stmt.span) for a in stmt.args)
        scope.instructions.append(Instruction.call(stmt.name, qubits, args))

    def measure(self, scope: _Scope, stmt: Measure) -> None:
        qubits = _resolve(scope.qregs, stmt.qubit, "qubit")
        if stmt.target is None:
            start = scope.n_clbits
            scope.n_clbits += len(qubits)
            clbits = list(range(start, start + len(qubits)))
        else:
            clbits = _resolve(scope.cregs, stmt.target, "bit")
        if len(clbits) != len(qubits):
            raise _fail("measurement size mismatch between qubits and bits", stmt.span)
        for q, c in zip(qubits, clbits):
            scope.instructions.append(Instruction.measure(q, c))


def build_ir(program: Program) -> Module:
    module = Builder(program).build()
    module.validate()
    return module

