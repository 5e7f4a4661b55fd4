"""Distances between distributions over fixed-length bitstrings.

Outcomes are placed on a line by reading the bitstring as a binary integer
(``int(bits, 2)``, so q0 is the most significant digit) with unit spacing.
Wasserstein and energy distances are reported both raw and normalized by the
span of that line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np


class DistributionError(ValueError):
    pass


@dataclass(frozen=True)
class Distribution:
    n: int
    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=float)
        if probs.shape != (2**self.n,):
            raise DistributionError(f"expected {2**self.n} probabilities, got {probs.shape}")
        if np.any(probs < -1e-12) or np.any(probs > 1 + 1e-12):
            raise DistributionError("probabilities must lie in [0, 1]")
        if abs(probs.sum() - 1.0) > 1e-9:
            raise DistributionError(f"probabilities sum to {probs.sum()}, not 1")
        object.__setattr__(self, "probs", np.clip(probs, 0.0, 1.0))

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, float], n: int | None = None) -> "Distribution":
        if n is None:
            lengths = {len(k) for k in mapping}
            if len(lengths) != 1:
                raise DistributionError("bitstrings of mixed length")
            n = lengths.pop()
        probs = np.zeros(2**n)
        for bits, p in mapping.items():
            if len(bits) != n:
                raise DistributionError(f"bitstring {bits!r} does not have length {n}")
            probs[int(bits, 2) if n else 0] += p
        return cls(n, probs)

    @classmethod
    def from_counts(cls, counts: Mapping[str, int], n: int | None = None) -> "Distribution":
        total = sum(counts.values())
        if total <= 0:
            raise DistributionError("no counts")
        return cls.from_mapping({k: v / total for k, v in counts.items()}, n)

    def to_dict(self) -> dict[str, float]:
        return {format(i, f"0{self.n}b") if self.n else "": float(p) for i, p in enumerate(self.probs) if p > 0}


def _check(a: Distribution, b: Distribution) -> None:
    if a.n != b.n:
        raise DistributionError(f"support mismatch: {a.n} vs {b.n} bits")


def _span(n: int) -> int:
    return 2**n - 1


def raw_wasserstein(a: Distribution, b: Distribution) -> float:
    _check(a, b)
    cdf_diff = np.cumsum(a.probs - b.probs)[:-1]
    return float(np.sum(np.abs(cdf_diff)))


def wasserstein_distance(a: Distribution, b: Distribution) -> float:
    """Earth mover's distance on the integer line, scaled into [0, 1]."""
    raw = raw_wasserstein(a, b)
    return raw / _span(a.n) if a.n else 0.0


def raw_energy(a: Distribution, b: Distribution) -> float:
    # For 1-D distributions: 2E|X-Y| - E|X-X'| - E|Y-Y'| = 2 * integral (F - G)^2
    _check(a, b)
    cdf_diff = np.cumsum(a.probs - b.probs)[:-1]
    return math.sqrt(2.0 * float(np.sum(cdf_diff**2)))


def energy_distance(a: Distribution, b: Distribution) -> float:
    raw = raw_energy(a, b)
    return raw / math.sqrt(_span(a.n)) if a.n else 0.0


def smooth(p: Distribution, delta: float) -> np.ndarray:
    q = p.probs + delta
    return q / q.sum()


def kl_divergence(p: Distribution, q: Distribution, shots: int | None = None) -> float:
    """KL(p || q) in nats.

    With ``shots`` given, both sides get pseudo-count mass ``1/(2*shots)`` per
    outcome before renormalizing, which keeps the value finite when the
    empirical side has outcomes the ideal side lacks (or vice versa).
    """
    _check(p, q)
    if shots is not None:
        if shots < 1:
            raise DistributionError("shots must be positive")
        delta = 1.0 / (2 * shots)
        pp, qq = smooth(p, delta), smooth(q, delta)
    else:
        pp, qq = p.probs, q.probs
    mask = pp > 0
    if np.any(qq[mask] == 0):
        return math.inf
    return max(0.0, float(np.sum(pp[mask] * np.log(pp[mask] / qq[mask]))))


def js_distance(a: Distribution, b: Distribution) -> float:
    """Square root of the base-2 Jensen-Shannon divergence; lies in [0, 1]."""
    _check(a, b)
    m = (a.probs + b.probs) / 2

    def kl2(x: np.ndarray) -> float:
        mask = x > 0
        return float(np.sum(x[mask] * np.log2(x[mask] / m[mask])))

    jsd = 0.5 * kl2(a.probs) + 0.5 * kl2(b.probs)
    return math.sqrt(min(1.0, max(0.0, jsd)))
