"""Lowering from the logical dialect to the native {u1, u2, u3, cx} set."""

from __future__ import annotations

from dataclasses import dataclass
from math import pi
from typing import Callable, Sequence

import numpy as np

from ..gates import GATES, equal_up_to_phase, gate_matrix
from ..ir import Angle, Dialect, Instruction, IRError, Kernel
from ..sim import unitary
from .manager import kernel_pass

RULE_TOL = 1e-12


@dataclass(frozen=True)
class GateLoweringRule:
    source: str
    expand: Callable[[tuple[int, ...], tuple[Angle, ...]], list[Instruction]]

    def __call__(self, qubits: tuple[int, ...], angles: tuple[Angle, ...] = ()) -> list[Instruction]:
        return self.expand(qubits, angles)


def _u3(t, p, l):
    return lambda q, a: [Instruction.gate("u3", *q, angles=(t, p, l))]


def _u2(p, l):
    return lambda q, a: [Instruction.gate("u2", *q, angles=(p, l))]


def _u1(l):
    return lambda q, a: [Instruction.gate("u1", *q, angles=(l,))]


RULES: dict[str, GateLoweringRule] = {
    r.source: r
    for r in [
        GateLoweringRule("x", _u3(pi, 0.0, -pi)),
        GateLoweringRule("y", _u3(pi, pi / 2, pi / 2)),
        GateLoweringRule("z", _u1(pi)),
        GateLoweringRule("h", _u2(0.0, pi)),
        GateLoweringRule("s", _u1(pi / 2)),
        GateLoweringRule("sdg", _u1(-pi / 2)),
        GateLoweringRule("rz", lambda q, a: [Instruction.gate("u1", *q, angles=(a[0],))]),
        GateLoweringRule("ry", lambda q, a: [Instruction.gate("u3", *q, angles=(a[0], 0.0, 0.0))]),
        GateLoweringRule("rx", lambda q, a: [Instruction.gate("u3", *q, angles=(a[0], -pi / 2, pi / 2))]),
        GateLoweringRule("cx", lambda q, a: [Instruction.gate("cx", *q)]),
        GateLoweringRule(
            "cz",
            lambda q, a: [
                Instruction.gate("u2", q[1], angles=(0.0, pi)),
                Instruction.gate("cx", q[0], q[1]),
                Instruction.gate("u2", q[1], angles=(0.0, pi)),
            ],
        ),
        GateLoweringRule(
            "swap",
            lambda q, a: [
                Instruction.gate("cx", q[0], q[1]),
                Instruction.gate("cx", q[1], q[0]),
                Instruction.gate("cx", q[0], q[1]),
            ],
        ),
    ]
}


def rule_holds(rule: GateLoweringRule, angles: Sequence[float] = (), atol: float = RULE_TOL) -> bool:
    """Numerically compare a rule's replacement against the source gate."""
    spec = GATES[rule.source]
    qubits = tuple(range(spec.n_qubits))
    src = gate_matrix(rule.source, tuple(angles))
    replacement = Kernel("rule", spec.n_qubits, rule(qubits, tuple(angles)))
    return equal_up_to_phase(unitary(replacement), src, atol)


def check_rules(samples: int = 3, seed: int = 0) -> None:
    rng = np.random.default_rng(seed)
    for rule in RULES.values():
        n_angles = GATES[rule.source].n_angles
        for _ in range(samples if n_angles else 1):
            angles = tuple(rng.uniform(-2 * pi, 2 * pi, n_angles))
            if not rule_holds(rule, angles):
                raise AssertionError(f"lowering rule for {rule.source!r} is not unitary-equivalent")


def lower_to_native(kernel: Kernel) -> Kernel:
    out: list[Instruction] = []
    for inst in kernel.instructions:
        if not inst.is_gate:
            out.append(inst)
            continue
        rule = RULES.get(inst.name)
        if rule is None:
            raise IRError(f"no native lowering for gate {inst.name!r}")
        out.extend(rule(inst.qubits, inst.angles))
    return kernel.with_instructions(out)


check_rules()

LOWER_NATIVE = kernel_pass("lower_native", lower_to_native, Dialect.LOGICAL, Dialect.NATIVE)
