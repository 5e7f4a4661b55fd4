"""Flatten kernel calls into the entry kernel."""

from __future__ import annotations

from dataclasses import replace
from typing import Mapping

from ..ir import Instruction, IRError, Kernel, Kind, Module, bind_angle
from .manager import Pass


def _expand(
    module: Module,
    kernel: Kernel,
    env: Mapping[str, float],
    qmap: tuple[int, ...],
    clbit_base: int,
    stack: tuple[str, ...],
    out: list[Instruction],
    next_clbit: list[int],
) -> None:
    for inst in kernel.instructions:
        if inst.kind is Kind.ALLOC:
            continue
        if inst.kind is Kind.CALL:
            if inst.name in stack:
                cycle = " -> ".join((*stack, inst.name))
                raise IRError(f"recursive kernel call: {cycle}")
            callee = module[inst.name]
            if len(inst.angles) != len(callee.params):
                raise IRError(f"call to {callee.name!r}: expected {len(callee.params)} arguments")
            if len(inst.qubits) != callee.n_qubits:
                raise IRError(f"call to {callee.name!r}: expected {callee.n_qubits} qubits")
            args = [bind_angle(a, env) for a in inst.angles]
            sub_qmap = tuple(qmap[q] for q in inst.qubits)
            base = next_clbit[0]
            next_clbit[0] += callee.n_clbits
            _expand(module, callee, dict(zip(callee.params, args)), sub_qmap, base, (*stack, callee.name), out, next_clbit)
            continue
        clbit = None if inst.clbit is None else clbit_base + inst.clbit
        out.append(
            replace(
                inst,
                angles=tuple(bind_angle(a, env) for a in inst.angles),
                qubits=tuple(qmap[q] for q in inst.qubits),
                clbit=clbit,
            )
        )


def inline_kernel(module: Module, name: str | None = None) -> Kernel:
    """Return kernel ``name`` (default: the entry) with every call expanded."""
    kernel = module[name or module.entry]
    if not any(i.kind in (Kind.CALL, Kind.ALLOC) for i in kernel.instructions):
        return kernel
    out: list[Instruction] = []
    next_clbit = [kernel.n_clbits]
    _expand(module, kernel, {}, tuple(range(kernel.n_qubits)), 0, (kernel.name,), out, next_clbit)
    return replace(kernel, instructions=tuple(out), n_clbits=next_clbit[0])


def inline_kernels(module: Module) -> Module:
    return module.replace_kernel(inline_kernel(module))


INLINE = Pass("inline", inline_kernels)
