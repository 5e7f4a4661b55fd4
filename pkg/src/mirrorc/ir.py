"""Circuit IR: modules of kernels holding flat instruction lists.

A kernel's qubits are plain integers ``0..n_qubits-1``. Angle operands are
either floats or small symbolic expressions over the kernel's parameters;
inlining binds and folds them to floats.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Union

from .gates import GATES, LOGICAL_GATES, NATIVE_GATES


class IRError(Exception):
    pass


# --- angle expressions -----------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float

    def evaluate(self, env: Mapping[str, float]) -> float:
        return self.value

    def params(self) -> set[str]:
        return set()

    def __str__(self) -> str:
        return format_angle(self.value)


@dataclass(frozen=True)
class Ref:
    name: str

    def evaluate(self, env: Mapping[str, float]) -> float:
        if self.name == "pi":
            return math.pi
        try:
            return env[self.name]
        except KeyError:
            raise IRError(f"unbound parameter {self.name!r}") from None

    def params(self) -> set[str]:
        return set() if self.name == "pi" else {self.name}

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Neg:
    operand: "Expr"

    def evaluate(self, env: Mapping[str, float]) -> float:
        return -self.operand.evaluate(env)

    def params(self) -> set[str]:
        return self.operand.params()

    def __str__(self) -> str:
        return f"-({self.operand})"


_BINOPS = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": lambda a, b: a / b,
}


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"

    def evaluate(self, env: Mapping[str, float]) -> float:
        return _BINOPS[self.op](self.left.evaluate(env), self.right.evaluate(env))

    def params(self) -> set[str]:
        return self.left.params() | self.right.params()

    def __str__(self) -> str:
        return f"({self.left} {self.op} {self.right})"


Expr = Union[Num, Ref, Neg, BinOp]
Angle = Union[float, Num, Ref, Neg, BinOp]


def format_angle(a: Angle) -> str:
    if isinstance(a, (int, float)):
        return format(float(a), ".17g")
    return str(a)


def bind_angle(a: Angle, env: Mapping[str, float]) -> float:
    if isinstance(a, (int, float)):
        return float(a)
    return float(a.evaluate(env))


def angle_params(a: Angle) -> set[str]:
    return set() if isinstance(a, (int, float)) else a.params()


# --- instructions, kernels, modules ---------------------------------------


class Kind(str, enum.Enum):
    GATE = "gate"
    MEASURE = "measure"
    BARRIER = "barrier"
    RESET = "reset"
    CALL = "call"
    ALLOC = "alloc"


class Dialect(str, enum.Enum):
    LOGICAL = "logical"
    NATIVE = "native"

    @property
    def gates(self) -> frozenset[str]:
        return LOGICAL_GATES if self is Dialect.LOGICAL else NATIVE_GATES


@dataclass(frozen=True)
class Instruction:
    kind: Kind
    name: str = ""
    angles: tuple[Angle, ...] = ()
    qubits: tuple[int, ...] = ()
    clbit: int | None = None

    @classmethod
    def gate(cls, name: str, *qubits: int, angles: Iterable[Angle] = ()) -> "Instruction":
        return cls(Kind.GATE, name, tuple(angles), tuple(qubits))

    @classmethod
    def measure(cls, qubit: int, clbit: int) -> "Instruction":
        return cls(Kind.MEASURE, "measure", (), (qubit,), clbit)

    @classmethod
    def barrier(cls, *qubits: int) -> "Instruction":
        return cls(Kind.BARRIER, "barrier", (), tuple(qubits))

    @classmethod
    def reset(cls, qubit: int) -> "Instruction":
        return cls(Kind.RESET, "reset", (), (qubit,))

    @classmethod
    def call(cls, callee: str, qubits: Iterable[int], args: Iterable[Angle] = ()) -> "Instruction":
        return cls(Kind.CALL, callee, tuple(args), tuple(qubits))

    @classmethod
    def alloc(cls, register: str, qubits: Iterable[int]) -> "Instruction":
        return cls(Kind.ALLOC, register, (), tuple(qubits))

    @property
    def is_gate(self) -> bool:
        return self.kind is Kind.GATE

    def bound_angles(self, env: Mapping[str, float] | None = None) -> tuple[float, ...]:
        return tuple(bind_angle(a, env or {}) for a in self.angles)

    def __str__(self) -> str:
        qs = ", ".join(f"q{q}" for q in self.qubits)
        if self.kind is Kind.MEASURE:
            return f"measure {qs} -> c{self.clbit}"
        if self.kind is Kind.ALLOC:
            return f"alloc {self.name}[{len(self.qubits)}] {qs}"
        head = self.name if self.kind is not Kind.CALL else f"call {self.name}"
        if self.angles or self.kind is Kind.CALL:
            head += "(" + ", ".join(format_angle(a) for a in self.angles) + ")"
        return f"{head} {qs}" if qs else head


@dataclass(frozen=True)
class Kernel:
    name: str
    n_qubits: int
    instructions: tuple[Instruction, ...] = ()
    params: tuple[str, ...] = ()
    n_clbits: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "instructions", tuple(self.instructions))
        object.__setattr__(self, "params", tuple(self.params))

    def with_instructions(self, instructions: Iterable[Instruction]) -> "Kernel":
        return replace(self, instructions=tuple(instructions))

    @property
    def gates(self) -> list[Instruction]:
        return [i for i in self.instructions if i.is_gate]

    def validate(self, dialect: Dialect | None = None) -> None:
        """Check structural invariants; raise IRError on the first violation."""
        for inst in self.instructions:
            for q in inst.qubits:
                if not 0 <= q < self.n_qubits:
                    raise IRError(f"{self.name}: qubit q{q} out of range in '{inst}'")
            if inst.kind is Kind.GATE:
                spec = GATES.get(inst.name)
                if spec is None:
                    raise IRError(f"{self.name}: unknown gate {inst.name!r}")
                if dialect is not None and inst.name not in dialect.gates:
                    raise IRError(f"{self.name}: gate {inst.name!r} not in {dialect.value} dialect")
                if len(inst.qubits) != spec.n_qubits or len(set(inst.qubits)) != spec.n_qubits:
                    raise IRError(f"{self.name}: arity mismatch in '{inst}'")
                if len(inst.angles) != spec.n_angles:
                    raise IRError(f"{self.name}: angle count mismatch in '{inst}'")
            if inst.kind is Kind.MEASURE and (inst.clbit is None or not 0 <= inst.clbit < self.n_clbits):
                raise IRError(f"{self.name}: classical target out of range in '{inst}'")
            for a in inst.angles if inst.kind is not Kind.CALL else ():
                missing = angle_params(a) - set(self.params)
                if missing:
                    raise IRError(f"{self.name}: unresolved parameter {sorted(missing)[0]!r}")

    def dump(self) -> str:
        lines = [f"kernel {self.name}({', '.join(self.params)}) qubits={self.n_qubits} clbits={self.n_clbits}"]
        lines += [f"  {inst}" for inst in self.instructions]
        return "\n".join(lines)


@dataclass(frozen=True)
class Module:
    kernels: tuple[Kernel, ...]
    entry: str
    dialect: Dialect = Dialect.LOGICAL
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        kernels = tuple(self.kernels)
        object.__setattr__(self, "kernels", kernels)
        index = {k.name: k for k in kernels}
        if len(index) != len(kernels):
            raise IRError("duplicate kernel names")
        if self.entry not in index:
            raise IRError(f"entry kernel {self.entry!r} not found")
        object.__setattr__(self, "_index", index)

    def __getitem__(self, name: str) -> Kernel:
        return self._index[name]

    def __contains__(self, name: str) -> bool:
        return name in self._index

    @property
    def entry_kernel(self) -> Kernel:
        return self._index[self.entry]

    def map_kernels(self, fn, dialect: Dialect | None = None) -> "Module":
        return Module(tuple(fn(k) for k in self.kernels), self.entry, dialect or self.dialect)

    def replace_kernel(self, kernel: Kernel) -> "Module":
        return Module(
            tuple(kernel if k.name == kernel.name else k for k in self.kernels), self.entry, self.dialect
        )

    def validate(self) -> None:
        for k in self.kernels:
            k.validate(self.dialect)
            for inst in k.instructions:
                if inst.kind is Kind.CALL and inst.name not in self:
                    raise IRError(f"{k.name}: call to undefined kernel {inst.name!r}")

    def dump(self) -> str:
        """Stable textual form, one instruction per line."""
        head = f"module entry={self.entry} dialect={self.dialect.value}"
        return "\n".join([head, *(k.dump() for k in self.kernels)]) + "\n"
