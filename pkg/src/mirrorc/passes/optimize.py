"""Peephole passes on the logical dialect: inverse cancellation and rotation merging."""

from __future__ import annotations

import math

from ..dag import build_wire_dag
from ..gates import ROTATION_AXIS, SELF_INVERSE, SYMMETRIC_2Q
from ..ir import Dialect, Instruction, Kernel
from .manager import kernel_pass

ANGLE_TOL = 1e-12


def _numeric(inst: Instruction) -> bool:
    return all(isinstance(a, (int, float)) for a in inst.angles)


def is_inverse_pair(a: Instruction, b: Instruction) -> bool:
    """True if applying ``a`` then ``b`` is the identity."""
    if not (a.is_gate and b.is_gate):
        return False
    if a.qubits != b.qubits:
        if not (a.name == b.name and a.name in SYMMETRIC_2Q and set(a.qubits) == set(b.qubits)):
            return False
    if a.name in SELF_INVERSE:
        return a.name == b.name
    if {a.name, b.name} == {"s", "sdg"}:
        return True
    if a.name in ROTATION_AXIS and a.name == b.name and _numeric(a) and _numeric(b):
        return abs(a.angles[0] + b.angles[0]) <= ANGLE_TOL
    return False


def _adjacent_pair(kernel: Kernel) -> tuple[int, int] | None:
    dag = build_wire_dag(kernel)
    for i, inst in enumerate(kernel.instructions):
        if not inst.is_gate:
            continue
        nxt = {dag.next_on_wire(i, q) for q in inst.qubits}
        if len(nxt) != 1:
            continue
        j = nxt.pop()
        if j is not None and is_inverse_pair(inst, kernel.instructions[j]):
            return i, j
    return None


def cancel_adjacent_inverses(kernel: Kernel) -> Kernel:
    """Remove gate pairs G, G^-1 that are adjacent on every wire they share, to fixpoint."""
    insts = kernel.instructions
    while True:
        pair = _adjacent_pair(kernel.with_instructions(insts))
        if pair is None:
            break
        i, j = pair
        insts = tuple(x for k, x in enumerate(insts) if k not in (i, j))
    if insts == kernel.instructions:
        return kernel
    return kernel.with_instructions(insts)


def normalize_angle(theta: float) -> float:
    """Map to (-2*pi, 2*pi]; the rotation's period is 4*pi so this is exact."""
    r = math.fmod(theta, 4 * math.pi)
    if r > 2 * math.pi:
        r -= 4 * math.pi
    elif r <= -2 * math.pi:
        r += 4 * math.pi
    return r


def _is_rotation(inst: Instruction) -> bool:
    return inst.is_gate and inst.name in ROTATION_AXIS and _numeric(inst)


def _merge_once(insts: tuple[Instruction, ...]) -> tuple[Instruction, ...]:
    out: list[Instruction] = []
    last_on_wire: dict[int, int] = {}
    for inst in insts:
        if _is_rotation(inst):
            q = inst.qubits[0]
            k = last_on_wire.get(q)
            prev = out[k] if k is not None else None
            if prev is not None and prev.name == inst.name:
                theta = normalize_angle(prev.angles[0] + inst.angles[0])
                out[k] = Instruction.gate(inst.name, q, angles=(theta,))
                continue
        for q in inst.qubits:
            last_on_wire[q] = len(out)
        out.append(inst)

    return tuple(i for i in out if not (_is_rotation(i) and abs(normalize_angle(i.angles[0])) <= ANGLE_TOL))


def merge_rotations(kernel: Kernel) -> Kernel:
    """Fuse consecutive same-axis rotations on one wire; drop zero rotations."""
    insts = kernel.instructions
    while True:
        merged = _merge_once(insts)
        if merged == insts:
            break
        insts = merged
    if insts == kernel.instructions:
        return kernel
    return kernel.with_instructions(insts)


CANCEL = kernel_pass("cancel", cancel_adjacent_inverses, Dialect.LOGICAL, Dialect.LOGICAL)
MERGE = kernel_pass("merge", merge_rotations, Dialect.LOGICAL, Dialect.LOGICAL)
