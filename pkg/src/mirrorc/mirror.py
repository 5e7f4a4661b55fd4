"""Pauli-randomized mirror circuits.

A mirror of a base circuit C is ``C``, then a layer of Pauli gates, then a
quasi-inverse of ``C`` whose rotation angles are sign-adjusted so the Pauli
layer commutes through, then a measurement of every qubit. Run without
error it returns one predictable bitstring.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .gates import CLIFFORD_GATES, ROTATION_AXIS, inverse_gate
from .ir import Instruction, Kernel, Kind
from .pauli import PauliString, commutes_with_axis, conjugate_by_clifford, sample_random_pauli, target_bitstring

DEFAULT_MIRRORS = 32


class MirrorError(ValueError):
    pass


@dataclass(frozen=True)
class MirrorCircuit:
    kernel: Kernel
    pauli_layer: PauliString
    target: str
    final_frame: PauliString

    def sidecar(self, index: int) -> str:
        return f"# target: {self.target} pauli: {self.pauli_layer} seed_index: {index}"


@dataclass(frozen=True)
class MirrorSuite:
    base: Kernel
    mirrors: tuple[MirrorCircuit, ...]
    seed: int

    @property
    def size(self) -> int:
        return len(self.mirrors)

    def dump(self) -> str:
        parts = []
        for k, m in enumerate(self.mirrors):
            parts.append(m.sidecar(k))
            parts.append(m.kernel.dump())
        return "\n".join(parts) + "\n"


def quasi_inverse(
    base_gates: Sequence[Instruction], pauli: PauliString
) -> tuple[list[Instruction], PauliString]:
    """Reverse ``base_gates`` into a quasi-inverse and propagate ``pauli`` through it.

    Returns the emitted gates in application order and the final Pauli frame F
    such that ``emitted * pauli * base == F`` up to global phase.
    """
    frame = pauli
    emitted: list[Instruction] = []
    for inst in reversed(base_gates):
        if not inst.is_gate:
            raise MirrorError(f"unsupported instruction in mirrored region: '{inst}'")
        if inst.name in CLIFFORD_GATES:
            name, _ = inverse_gate(inst.name)
            emitted.append(Instruction.gate(name, *inst.qubits))
            frame = conjugate_by_clifford(frame, inst)
        elif inst.name in ROTATION_AXIS:
            (theta,) = inst.bound_angles()
            if commutes_with_axis(frame, ROTATION_AXIS[inst.name], inst.qubits[0]):
                theta = -theta
            emitted.append(Instruction.gate(inst.name, *inst.qubits, angles=(theta,)))
        else:
            raise MirrorError(f"gate {inst.name!r} is neither Clifford nor a Pauli rotation")
    return emitted, frame


def pauli_layer_gates(pauli: PauliString) -> list[Instruction]:
    return [Instruction.gate(c.lower(), q) for q, c in enumerate(pauli.letters) if c != "I"]


def split_measured(base: Kernel) -> list[Instruction]:
    """Return the base's gates, checking it ends by measuring every qubit."""
    gates: list[Instruction] = []
    measured: set[int] = set()
    for inst in base.instructions:
        if inst.kind is Kind.RESET:
            raise MirrorError("reset is not allowed in a mirrored circuit")
        if inst.kind in (Kind.CALL, Kind.ALLOC):
            raise MirrorError(f"kernel {base.name!r} must be inlined before mirroring")
        if inst.kind is Kind.BARRIER:
            continue
        if inst.kind is Kind.MEASURE:
            measured.add(inst.qubits[0])
            continue
        if measured:
            raise MirrorError(f"mid-circuit measurement before '{inst}'")
        gates.append(inst)
    unmeasured = sorted(set(range(base.n_qubits)) - measured)
    if unmeasured:
        raise MirrorError(f"qubit q{unmeasured[0]} is not measured at the end of the circuit")
    return gates


def make_mirror(base: Kernel, pauli: PauliString, name: str | None = None) -> MirrorCircuit:
    if pauli.n != base.n_qubits:
        raise MirrorError(f"Pauli layer has {pauli.n} qubits, circuit has {base.n_qubits}")
    gates = split_measured(base)
    inverse, frame = quasi_inverse(gates, pauli)
    n = base.n_qubits
    body = [*gates, *pauli_layer_gates(pauli), *inverse, *(Instruction.measure(q, q) for q in range(n))]
    kernel = Kernel(name or f"{base.name}_mirror", n, tuple(body), (), n)
    return MirrorCircuit(kernel, pauli, target_bitstring(frame), frame)


def make_suite(base: Kernel, n_mirrors: int = DEFAULT_MIRRORS, seed: int = 0) -> MirrorSuite:
    """Build ``n_mirrors`` mirrors with Pauli layers drawn from a stream seeded by ``seed``."""
    if n_mirrors < 1:
        raise MirrorError("a mirror suite needs at least one circuit")
    rng = np.random.default_rng(seed)
    mirrors = tuple(
        make_mirror(base, sample_random_pauli(base.n_qubits, rng), f"{base.name}_mirror{k}")
        for k in range(n_mirrors)
    )
    return MirrorSuite(base, mirrors, seed)


def write_suite(suite: MirrorSuite, directory: str | Path) -> list[Path]:
    """Write each mirror as standalone OpenQASM plus a ``.target`` sidecar."""
    from .frontend.emit import kernel_to_qasm

    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for k, m in enumerate(suite.mirrors):
        path = out / f"mirror_{k:03d}.qasm"
        path.write_text(kernel_to_qasm(m.kernel))
        path.with_suffix(".target").write_text(m.sidecar(k) + "\n")
        paths.append(path)
    return paths
