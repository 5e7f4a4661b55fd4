"""Print flat numeric kernels as standalone OpenQASM 3 source."""

from __future__ import annotations

from ..ir import Kernel, Kind, format_angle


def kernel_to_qasm(kernel: Kernel, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.append(f"// {comment}")
    lines += ["OPENQASM 3;", 'include "stdgates.inc";', f"qubit[{kernel.n_qubits}] q;"]
    if kernel.n_clbits:
        lines.append(f"bit[{kernel.n_clbits}] c;")
    for inst in kernel.instructions:
        qs = ", ".join(f"q[{q}]" for q in inst.qubits)
        if inst.kind is Kind.GATE:
            angles = inst.bound_angles()
            head = inst.name + (f"({', '.join(format_angle(a) for a in angles)})" if angles else "")
            lines.append(f"{head} {qs};")
        elif inst.kind is Kind.MEASURE:
            lines.append(f"c[{inst.clbit}] = measure {qs};")
        elif inst.kind is Kind.BARRIER:
            lines.append(f"barrier {qs};" if qs else "barrier;")
        elif inst.kind is Kind.RESET:
            lines.append(f"reset {qs};")
        else:
            raise ValueError(f"cannot emit '{inst}' as standalone OpenQASM; inline first")
    return "\n".join(lines) + "\n"
