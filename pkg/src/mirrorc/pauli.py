"""n-qubit Pauli operators in symplectic form with exact quarter-turn phase."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .gates import CLIFFORD_GATES, PAULI_MATRICES
from .ir import Instruction

_LETTER_BITS = {"I": (False, False), "X": (True, False), "Y": (True, True), "Z": (False, True)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}
_PHASE_TEXT = {0: "+", 1: "+i", 2: "-", 3: "-i"}

# a*b = i^k c for single-qubit letters
_LETTER_PRODUCT: dict[tuple[str, str], tuple[int, str]] = {}
for _a in "IXYZ":
    _LETTER_PRODUCT[("I", _a)] = (0, _a)
    _LETTER_PRODUCT[(_a, "I")] = (0, _a)
    _LETTER_PRODUCT[(_a, _a)] = (0, "I")
for _a, _b, _c in (("X", "Y", "Z"), ("Y", "Z", "X"), ("Z", "X", "Y")):
    _LETTER_PRODUCT[(_a, _b)] = (1, _c)
    _LETTER_PRODUCT[(_b, _a)] = (3, _c)


class CliffordError(ValueError):
    pass


@dataclass(frozen=True)
class PauliString:
    """``i**phase`` times a tensor product of letters; bit i is qubit q[i]."""

    x_bits: tuple[bool, ...]
    z_bits: tuple[bool, ...]
    phase: int = 0

    def __post_init__(self) -> None:
        if len(self.x_bits) != len(self.z_bits):
            raise ValueError("x_bits and z_bits differ in length")
        object.__setattr__(self, "x_bits", tuple(bool(b) for b in self.x_bits))
        object.__setattr__(self, "z_bits", tuple(bool(b) for b in self.z_bits))
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def from_letters(cls, letters: str, phase: int = 0) -> "PauliString":
        bits = [_LETTER_BITS[c] for c in letters]
        return cls(tuple(b[0] for b in bits), tuple(b[1] for b in bits), phase)

    @classmethod
    def from_text(cls, text: str) -> "PauliString":
        for prefix, phase in (("+i", 1), ("-i", 3), ("+", 0), ("-", 2)):
            if text.startswith(prefix):
                return cls.from_letters(text[len(prefix):], phase)
        return cls.from_letters(text)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls((False,) * n, (False,) * n)

    @property
    def n(self) -> int:
        return len(self.x_bits)

    @property
    def letters(self) -> str:
        return "".join(_BITS_LETTER[(x, z)] for x, z in zip(self.x_bits, self.z_bits))

    def letter(self, qubit: int) -> str:
        return _BITS_LETTER[(self.x_bits[qubit], self.z_bits[qubit])]

    def __str__(self) -> str:
        return _PHASE_TEXT[self.phase] + self.letters

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n != other.n:
            raise ValueError("Pauli strings act on different qubit counts")
        phase = self.phase + other.phase
        out = []
        for a, b in zip(self.letters, other.letters):
            k, c = _LETTER_PRODUCT[(a, b)]
            phase += k
            out.append(c)
        return PauliString.from_letters("".join(out), phase)

    def with_phase(self, phase: int) -> "PauliString":
        return PauliString(self.x_bits, self.z_bits, phase)

    def matrix(self) -> np.ndarray:
        """Dense matrix with q0 as the least significant basis bit."""
        mats = [PAULI_MATRICES[c] for c in reversed(self.letters)]
        base = reduce(np.kron, mats, np.eye(1, dtype=complex))
        return (1j**self.phase) * base


def _single(n: int, qubit: int, letter: str, phase: int = 0) -> PauliString:
    letters = ["I"] * n
    letters[qubit] = letter
    return PauliString.from_letters("".join(letters), phase)


def _pair(n: int, a: int, la: str, b: int, lb: str, phase: int = 0) -> PauliString:
    letters = ["I"] * n
    letters[a] = la
    letters[b] = lb
    return PauliString.from_letters("".join(letters), phase)


def _generator_images(n: int, gate: str, qubits: tuple[int, ...]) -> dict[tuple[int, str], PauliString]:
    """G^dag P G for P in {X_q, Z_q} on each of the gate's qubits."""
    if gate in ("x", "y", "z", "h", "s", "sdg"):
        (q,) = qubits
        x_img, z_img = {
            "x": (("X", 0), ("Z", 2)),
            "y": (("X", 2), ("Z", 2)),
            "z": (("X", 2), ("Z", 0)),
            "h": (("Z", 0), ("X", 0)),
            "s": (("Y", 2), ("Z", 0)),
            "sdg": (("Y", 0), ("Z", 0)),
        }[gate]
        return {(q, "X"): _single(n, q, *x_img), (q, "Z"): _single(n, q, *z_img)}
    a, b = qubits
    if gate == "cx":
        return {
            (a, "X"): _pair(n, a, "X", b, "X"),
            (a, "Z"): _single(n, a, "Z"),
            (b, "X"): _single(n, b, "X"),
            (b, "Z"): _pair(n, a, "Z", b, "Z"),
        }
    if gate == "cz":
        return {
            (a, "X"): _pair(n, a, "X", b, "Z"),
            (a, "Z"): _single(n, a, "Z"),
            (b, "X"): _pair(n, a, "Z", b, "X"),
            (b, "Z"): _single(n, b, "Z"),
        }
    if gate == "swap":
        return {
            (a, "X"): _single(n, b, "X"),
            (a, "Z"): _single(n, b, "Z"),
            (b, "X"): _single(n, a, "X"),
            (b, "Z"): _single(n, a, "Z"),
        }
    raise CliffordError(f"gate {gate!r} is not a supported Clifford")


def conjugate_by_clifford(p: PauliString, gate: Instruction) -> PauliString:
    """Return G^dag p G with exact phase."""
    if gate.name not in CLIFFORD_GATES or not gate.is_gate:
        raise CliffordError(f"gate {gate.name!r} is not a supported Clifford")
    for q in gate.qubits:
        if not 0 <= q < p.n:
            raise CliffordError(f"qubit q{q} out of range for {p.n}-qubit Pauli")
    images = _generator_images(p.n, gate.name, gate.qubits)
    touched = set(gate.qubits)
    rest = "".join("I" if q in touched else c for q, c in enumerate(p.letters))
    out = PauliString.from_letters(rest, p.phase)
    for q in gate.qubits:
        letter = p.letter(q)
        if letter == "X":
            out = out * images[(q, "X")]
        elif letter == "Z":
            out = out * images[(q, "Z")]
        elif letter == "Y":
            # Y = i X Z
            out = out * images[(q, "X")] * images[(q, "Z")]
            out = out.with_phase(out.phase + 1)
    return out


def commutes_with_axis(p: PauliString, axis: str, qubit: int) -> bool:
    if axis not in ("X", "Y", "Z"):
        raise ValueError(f"axis must be X, Y or Z, not {axis!r}")
    letter = p.letter(qubit)
    return letter == "I" or letter == axis


def target_bitstring(p: PauliString) -> str:
    """Computational-basis image of |0...0> under p, q0 leftmost."""
    return "".join("1" if x else "0" for x in p.x_bits)


def sample_random_pauli(n: int, rng: np.random.Generator) -> PauliString:
    draws = rng.integers(0, 4, size=n)
    return PauliString.from_letters("".join("IXYZ"[d] for d in draws))
