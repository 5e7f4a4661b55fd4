"""Gate table and unitary matrices.

Conventions:
    - qubit i of a register is bit i of the basis-state integer (q0 is the LSB)
    - two-qubit matrices are written in the basis ``b0 + 2*b1`` where ``b0`` is
      the bit of ``qubits[0]`` and ``b1`` the bit of ``qubits[1]``
    - u3(theta, phi, lam) = [[cos(t/2), -e^{i lam} sin(t/2)],
                             [e^{i phi} sin(t/2), e^{i(phi+lam)} cos(t/2)]]
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, pi, sin, sqrt

import numpy as np


@dataclass(frozen=True)
class GateSpec:
    name: str
    n_qubits: int
    n_angles: int


GATES: dict[str, GateSpec] = {
    g.name: g
    for g in [
        GateSpec("x", 1, 0),
        GateSpec("y", 1, 0),
        GateSpec("z", 1, 0),
        GateSpec("h", 1, 0),
        GateSpec("s", 1, 0),
        GateSpec("sdg", 1, 0),
        GateSpec("rx", 1, 1),
        GateSpec("ry", 1, 1),
        GateSpec("rz", 1, 1),
        GateSpec("cx", 2, 0),
        GateSpec("cz", 2, 0),
        GateSpec("swap", 2, 0),
        GateSpec("u1", 1, 1),
        GateSpec("u2", 1, 2),
        GateSpec("u3", 1, 3),
    ]
}

LOGICAL_GATES = frozenset({"x", "y", "z", "h", "s", "sdg", "rx", "ry", "rz", "cx", "cz", "swap"})
NATIVE_GATES = frozenset({"u1", "u2", "u3", "cx"})
CLIFFORD_GATES = frozenset({"x", "y", "z", "h", "s", "sdg", "cx", "cz", "swap"})
SELF_INVERSE = frozenset({"x", "y", "z", "h", "cx", "cz", "swap"})
ROTATION_AXIS = {"rx": "X", "ry": "Y", "rz": "Z"}
SYMMETRIC_2Q = frozenset({"cz", "swap"})

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI_MATRICES = {"I": _I, "X": _X, "Y": _Y, "Z": _Z}

_FIXED_1Q = {
    "x": _X,
    "y": _Y,
    "z": _Z,
    "h": np.array([[1, 1], [1, -1]], dtype=complex) / sqrt(2),
    "s": np.array([[1, 0], [0, 1j]], dtype=complex),
    "sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
}


def _cx() -> np.ndarray:
    m = np.zeros((4, 4), dtype=complex)
    for b in range(4):
        c, t = b & 1, (b >> 1) & 1
        m[c | ((t ^ c) << 1), b] = 1
    return m


_FIXED_2Q = {
    "cx": _cx(),
    "cz": np.diag([1, 1, 1, -1]).astype(complex),
    "swap": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}


def u3(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = cos(theta / 2), sin(theta / 2)
    return np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
        ],
        dtype=complex,
    )


def rotation(axis: str, theta: float) -> np.ndarray:
    """exp(-i theta P / 2) for P in {X, Y, Z}."""
    return cos(theta / 2) * _I - 1j * sin(theta / 2) * PAULI_MATRICES[axis]


def gate_matrix(name: str, angles: tuple[float, ...] = ()) -> np.ndarray:
    if name in _FIXED_1Q:
        return _FIXED_1Q[name]
    if name in _FIXED_2Q:
        return _FIXED_2Q[name]
    if name in ROTATION_AXIS:
        return rotation(ROTATION_AXIS[name], angles[0])
    if name == "u3":
        return u3(*angles)
    if name == "u2":
        return u3(pi / 2, angles[0], angles[1])
    if name == "u1":
        return u3(0.0, 0.0, angles[0])
    raise KeyError(f"unknown gate {name!r}")


def inverse_gate(name: str, angles: tuple[float, ...] = ()) -> tuple[str, tuple[float, ...]]:
    """Name and angles of the inverse of a logical gate."""
    if name in SELF_INVERSE:
        return name, ()
    if name == "s":
        return "sdg", ()
    if name == "sdg":
        return "s", ()
    if name in ROTATION_AXIS:
        return name, (-angles[0],)
    raise KeyError(f"no inverse rule for gate {name!r}")


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, atol: float = 1e-10) -> bool:
    """Max-abs elementwise comparison after removing a global phase."""
    if a.shape != b.shape:
        return False
    k = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[k]) < 1e-14:
        return bool(np.max(np.abs(a)) <= atol)
    phase = a[k] / b[k]
    if abs(abs(phase) - 1) > atol:
        return False
    return bool(np.max(np.abs(a - phase * b)) <= atol)
