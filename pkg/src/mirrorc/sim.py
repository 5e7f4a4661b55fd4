"""Dense statevector simulator backend with Pauli-trajectory noise.

Basis-state integers use qubit i as bit i (q0 least significant). Rendered
bitstrings put the first classical bit leftmost; see ``render_bits``.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Protocol

import numpy as np

from .gates import GATES, PAULI_MATRICES, gate_matrix
from .ir import Instruction, Kernel, Kind

DEFAULT_QUBIT_CAP = 20
_PAULI_LETTERS = "IXYZ"


class SimulationError(Exception):
    pass


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing probability per 1-/2-qubit gate and readout flip probability."""

    p1: float = 0.0
    p2: float = 0.0
    p_ro: float = 0.0

    def __post_init__(self) -> None:
        for name in ("p1", "p2", "p_ro"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"noise probability {name}={value} outside [0, 1]")

    @property
    def gate_noise(self) -> bool:
        return self.p1 > 0 or self.p2 > 0

    @property
    def noiseless(self) -> bool:
        return not self.gate_noise and self.p_ro == 0

    @classmethod
    def from_file(cls, path: str | Path) -> "NoiseModel":
        """Read ``p1``, ``p2``, ``p_ro`` from JSON or ``key = value`` lines."""
        text = Path(path).read_text()
        if text.lstrip().startswith("{"):
            values = json.loads(text)
        else:
            values = {}
            for raw in text.splitlines():
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                key, sep, value = line.replace(":", "=", 1).partition("=")
                if not sep:
                    raise ValueError(f"{path}: cannot parse noise line {raw!r}")
                values[key.strip()] = float(value)
        unknown = set(values) - {"p1", "p2", "p_ro"}
        if unknown:
            raise ValueError(f"{path}: unknown noise keys {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in values.items()})


@dataclass(frozen=True)
class ShotResult:
    counts: dict[str, int]
    shots: int

    def __post_init__(self) -> None:
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts do not sum to shots")

    @property
    def n_bits(self) -> int:
        return len(next(iter(self.counts))) if self.counts else 0


@dataclass
class StateVector:
    n: int
    amplitudes: np.ndarray = field(repr=False)

    @classmethod
    def zero(cls, n: int) -> "StateVector":
        amps = np.zeros(2**n, dtype=complex)
        amps[0] = 1.0
        return cls(n, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def apply_matrix(amps: np.ndarray, n: int, matrix: np.ndarray, qubits: tuple[int, ...]) -> np.ndarray:
    """Apply a 2^k x 2^k matrix to ``qubits`` of an array of shape (2^n, ...)."""
    k = len(qubits)
    rest = amps.shape[1:]
    psi = amps.reshape((2,) * n + rest)
    # axis of qubit q in C order is n-1-q; matrix axes run from qubits[k-1] down to qubits[0]
    targets = [n - 1 - q for q in reversed(qubits)]
    m = matrix.reshape((2,) * (2 * k))
    out = np.tensordot(m, psi, axes=(list(range(k, 2 * k)), targets))
    out = np.moveaxis(out, list(range(k)), targets)
    return out.reshape(amps.shape)


def _instruction_matrix(inst: Instruction, env: Mapping[str, float] | None) -> np.ndarray:
    if inst.name not in GATES:
        raise SimulationError(f"unknown gate {inst.name!r}")
    try:
        angles = inst.bound_angles(env)
    except Exception as exc:
        raise SimulationError(str(exc)) from None
    return gate_matrix(inst.name, angles)


def apply_gate(state: StateVector, inst: Instruction, env: Mapping[str, float] | None = None) -> StateVector:
    if not inst.is_gate:
        raise SimulationError(f"cannot apply non-gate instruction '{inst}'")
    for q in inst.qubits:
        if not 0 <= q < state.n:
            raise SimulationError(f"qubit q{q} out of range for {state.n}-qubit state")
    matrix = _instruction_matrix(inst, env)
    return StateVector(state.n, apply_matrix(state.amplitudes, state.n, matrix, inst.qubits))


def unitary(kernel: Kernel, env: Mapping[str, float] | None = None) -> np.ndarray:
    """Dense unitary of the kernel's gates; measurements and barriers are skipped."""
    n = kernel.n_qubits
    u = np.eye(2**n, dtype=complex)
    for inst in kernel.instructions:
        if inst.kind in (Kind.MEASURE, Kind.BARRIER):
            continue
        if not inst.is_gate:
            raise SimulationError(f"no unitary for '{inst}'")
        u = apply_matrix(u, n, _instruction_matrix(inst, env), inst.qubits)
    return u


@dataclass(frozen=True)
class _Program:
    """A kernel split into its gate sequence and terminal measurements."""

    n: int
    gates: tuple[tuple[Instruction, np.ndarray], ...]
    measured: tuple[int, ...]  # qubit read into each classical bit, in clbit order


def _prepare(kernel: Kernel, cap: int | None = None) -> _Program:
    if cap is not None and kernel.n_qubits > cap:
        raise SimulationError(f"{kernel.n_qubits} qubits exceeds simulator cap of {cap}")
    gates = []
    measures: dict[int, int] = {}
    for inst in kernel.instructions:
        if inst.kind is Kind.RESET:
            raise SimulationError("reset is not supported by the simulator backend")
        if inst.kind in (Kind.CALL, Kind.ALLOC):
            raise SimulationError(f"kernel {kernel.name!r} must be inlined before execution")
        if inst.kind is Kind.MEASURE:
            if inst.clbit in measures:
                raise SimulationError(f"classical bit c{inst.clbit} measured twice")
            measures[inst.clbit] = inst.qubits[0]
        elif inst.is_gate:
            if measures:
                raise SimulationError("mid-circuit measurement is not supported")
            for q in inst.qubits:
                if not 0 <= q < kernel.n_qubits:
                    raise SimulationError(f"qubit q{q} out of range")
            gates.append((inst, _instruction_matrix(inst, None)))
    if not measures:
        raise SimulationError(f"kernel {kernel.name!r} has no measurements")
    measured = tuple(measures[c] for c in sorted(measures))
    return _Program(kernel.n_qubits, tuple(gates), measured)


def render_bits(outcome: int, measured: tuple[int, ...]) -> str:
    """Bitstring for a basis-state integer, first classical bit leftmost."""
    return "".join(str((outcome >> q) & 1) for q in measured)


def _final_state(prog: _Program, errors: tuple[tuple[int, int], ...] = ()) -> np.ndarray:
    amps = StateVector.zero(prog.n).amplitudes
    pending = dict(errors)
    for g, (inst, matrix) in enumerate(prog.gates):
        amps = apply_matrix(amps, prog.n, matrix, inst.qubits)
        kind = pending.get(g)
        if kind:
            for pos, q in enumerate(inst.qubits):
                letter = _PAULI_LETTERS[(kind >> (2 * pos)) & 3]
                if letter != "I":
                    amps = apply_matrix(amps, prog.n, PAULI_MATRICES[letter], (q,))
    return amps


def _outcome_probabilities(amps: np.ndarray) -> np.ndarray:
    p = np.abs(amps) ** 2
    return p / p.sum()


def ideal_distribution(kernel: Kernel, cap: int = DEFAULT_QUBIT_CAP) -> dict[str, float]:
    """Born-rule distribution over the measured classical bits; zero entries omitted."""
    prog = _prepare(kernel, cap)
    probs = _outcome_probabilities(_final_state(prog))
    out: dict[str, float] = {}
    for idx in np.flatnonzero(probs):
        key = render_bits(int(idx), prog.measured)
        out[key] = out.get(key, 0.0) + float(probs[idx])
    return dict(sorted(out.items()))


def run_shots(
    kernel: Kernel,
    shots: int,
    noise: NoiseModel | None = None,
    rng: np.random.Generator | int | None = None,
    cap: int = DEFAULT_QUBIT_CAP,
) -> ShotResult:
    """Sample ``shots`` noisy trajectories of a measurement-terminated kernel.

    After every gate, with probability p1 (1-qubit) or p2 (2-qubit) a uniformly
    random non-identity Pauli hits the gate's qubits. Each trajectory is
    measured once; readout bits then flip independently with probability p_ro.
    Trajectories with the same error pattern share one statevector run.
    """
    if shots < 1:
        raise SimulationError("shots must be >= 1")
    noise = noise or NoiseModel()
    rng = np.random.default_rng(rng)
    prog = _prepare(kernel, cap)
    n_gates = len(prog.gates)

    patterns: dict[tuple, list[int]] = {}
    if noise.gate_noise and n_gates:
        p = np.array([noise.p1 if len(inst.qubits) == 1 else noise.p2 for inst, _ in prog.gates])
        two = np.array([len(inst.qubits) == 2 for inst, _ in prog.gates])
        hits = rng.random((shots, n_gates)) < p
        kinds1 = rng.integers(1, 4, size=(shots, n_gates))
        kinds2 = rng.integers(1, 16, size=(shots, n_gates))
        kinds = np.where(two, kinds2, kinds1)
        for s in range(shots):
            where = np.flatnonzero(hits[s])
            key = tuple((int(g), int(kinds[s, g])) for g in where)
            patterns.setdefault(key, []).append(s)
    else:
        patterns[()] = list(range(shots))

    outcomes = np.empty(shots, dtype=np.int64)
    for key in sorted(patterns):
        idx = patterns[key]
        probs = _outcome_probabilities(_final_state(prog, key))
        outcomes[idx] = rng.choice(probs.size, size=len(idx), p=probs)

    bits = ((outcomes[:, None] >> np.array(prog.measured, dtype=np.int64)) & 1).astype(np.int8)
    if noise.p_ro > 0:
        bits ^= (rng.random(bits.shape) < noise.p_ro).astype(np.int8)
    counts = Counter("".join(map(str, row)) for row in bits)
    return ShotResult(dict(sorted(counts.items())), shots)


class Backend(Protocol):
    name: str

    def run(self, kernel: Kernel, shots: int, noise: NoiseModel, rng: np.random.Generator) -> ShotResult: ...


@dataclass(frozen=True)
class SimBackend:
    name: str = "sim"
    cap: int = DEFAULT_QUBIT_CAP
    description: str = "statevector simulator"

    def run(self, kernel: Kernel, shots: int, noise: NoiseModel, rng: np.random.Generator) -> ShotResult:
        return run_shots(kernel, shots, noise, rng, self.cap)

    def ideal_distribution(self, kernel: Kernel) -> dict[str, float]:
        return ideal_distribution(kernel, self.cap)

