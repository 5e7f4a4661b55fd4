"""Run a base circuit alongside its mirror suite and summarize the result."""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from .ir import Kernel
from .metrics import (
    Distribution,
    energy_distance,
    js_distance,
    kl_divergence,
    raw_energy,
    raw_wasserstein,
    wasserstein_distance,
)
from .mirror import DEFAULT_MIRRORS, make_suite
from .passes.lower import lower_to_native
from .sim import Backend, NoiseModel, ShotResult, SimBackend, ideal_distribution

DEFAULT_SHOTS = 1024

CONVENTIONS = {
    "bit_order": "q0 leftmost; outcome integer = int(bitstring, 2)",
    "kl_log_base": "e",
    "kl_direction": "KL(empirical || ideal)",
    "js_log_base": 2,
    "w_e_normalization": "raw / (2^n - 1) for W, raw / sqrt(2^n - 1) for E",
}


class ValidationError(Exception):
    pass


@dataclass(frozen=True)
class MirrorOutcome:
    index: int
    target: str
    p: float
    p_prime: float
    epsilon: float
    counts: dict[str, int] = field(default_factory=dict)


def score_mirror(result: ShotResult, target: str, index: int = 0) -> MirrorOutcome:
    if result.shots <= 0:
        raise ValidationError("cannot score a mirror with zero shots")
    if result.counts and result.n_bits != len(target):
        raise ValidationError(f"target {target!r} does not match {result.n_bits}-bit counts")
    p = result.counts.get(target, 0) / result.shots
    p_prime = math.sqrt(p)
    return MirrorOutcome(index, target, p, p_prime, 1.0 - p_prime, dict(result.counts))


@dataclass
class ValidationReport:
    backend: str
    shots: int
    n_mirrors: int
    seed: int
    mean_p_prime: float | None
    min_p_prime: float | None
    distances: dict[str, float]
    base_counts: dict[str, int]
    ideal_distribution: dict[str, float]
    mirrors: list[dict]
    smoothing: dict[str, float]
    conventions: dict = field(default_factory=lambda: dict(CONVENTIONS))
    noise: dict[str, float] = field(default_factory=dict)
    valid: bool = True
    description: str = ""

    @property
    def mean_epsilon(self) -> float | None:
        eps = [m["epsilon"] for m in self.mirrors if m.get("epsilon") is not None]
        return float(np.mean(eps)) if eps else None

    def to_dict(self) -> dict:
        out = asdict(self)
        out.pop("description")
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def table(self) -> str:
        return format_table([self])


TABLE_COLUMNS = ("Name", "Descriptions", "mean(P')", "min(P')", "W", "E", "KL", "JS")


def _fmt(value: float | None, digits: int) -> str:
    return "n/a" if value is None else f"{value:.{digits}f}"


def table_row(report: ValidationReport) -> list[str]:
    d = report.distances
    return [
        report.backend,
        report.description or report.backend,
        _fmt(report.mean_p_prime, 6),
        _fmt(report.min_p_prime, 6),
        *(_fmt(d.get(k), 3) for k in ("w", "e", "kl", "js")),
    ]


def format_table(reports: Sequence[ValidationReport]) -> str:
    rows = [list(TABLE_COLUMNS), *(table_row(r) for r in reports)]
    widths = [max(len(r[i]) for r in rows) for i in range(len(TABLE_COLUMNS))]
    lines = ["| " + " | ".join(c.ljust(w) for c, w in zip(row, widths)) + " |" for row in rows]
    rule = "|" + "|".join("-" * (w + 2) for w in widths) + "|"
    return "\n".join([lines[0], rule, *lines[1:]]) + "\n"


def distribution_distances(empirical: Distribution, ideal: Distribution, shots: int) -> dict[str, float]:
    return {
        "w": wasserstein_distance(empirical, ideal),
        "e": energy_distance(empirical, ideal),
        "kl": kl_divergence(empirical, ideal, shots),
        "js": js_distance(empirical, ideal),
        "raw_w": raw_wasserstein(empirical, ideal),
        "raw_e": raw_energy(empirical, ideal),
    }


def validate(
    base: Kernel,
    backend: Backend | None = None,
    shots: int = DEFAULT_SHOTS,
    n_mirrors: int = DEFAULT_MIRRORS,
    seed: int = 0,
    noise: NoiseModel | None = None,
    prepare: Callable[[Kernel], Kernel] | None = lower_to_native,
    workers: int | None = None,
) -> ValidationReport:
    """Execute ``base`` and ``n_mirrors`` mirrors of it and build the report.

    ``base`` is a flat logical kernel. Mirrors are generated from it, then
    every circuit goes through ``prepare`` (native lowering by default)
    before execution. Circuit k draws from its own RNG stream spawned from
    ``seed`` so results do not depend on execution order.
    """
    backend = backend or SimBackend()
    noise = noise or NoiseModel()
    if shots < 1:
        raise ValidationError("shots must be >= 1")
    suite = make_suite(base, n_mirrors, seed)
    prepare = prepare or (lambda k: k)
    circuits = [prepare(base), *(prepare(m.kernel) for m in suite.mirrors)]
    streams = np.random.SeedSequence(seed).spawn(len(circuits))

    def execute(i: int) -> ShotResult | Exception:
        try:
            return backend.run(circuits[i], shots, noise, np.random.default_rng(streams[i]))
        except Exception as exc:  # reported per circuit, not raised
            return exc

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(execute, range(len(circuits))))
    else:
        results = [execute(i) for i in range(len(circuits))]

    base_result = results[0]
    if isinstance(base_result, Exception):
        raise base_result

    valid = True
    mirrors: list[dict] = []
    for k, (mirror, result) in enumerate(zip(suite.mirrors, results[1:])):
        if isinstance(result, Exception):
            valid = False
            mirrors.append({"index": k, "target": mirror.target, "error": str(result)})
            continue
        outcome = score_mirror(result, mirror.target, k)
        mirrors.append(asdict(outcome) | {"pauli": str(mirror.pauli_layer)})

    p_primes = [m["p_prime"] for m in mirrors if "p_prime" in m]
    ideal = ideal_distribution(base)
    n_bits = len(next(iter(ideal)))
    empirical = Distribution.from_counts(base_result.counts, n_bits)
    return ValidationReport(
        backend=backend.name,
        shots=shots,
        n_mirrors=n_mirrors,
        seed=seed,
        mean_p_prime=float(np.mean(p_primes)) if p_primes else None,
        min_p_prime=float(min(p_primes)) if p_primes else None,
        distances=distribution_distances(empirical, Distribution.from_mapping(ideal, n_bits), shots),
        base_counts=dict(base_result.counts),
        ideal_distribution=ideal,
        mirrors=mirrors,
        smoothing={"delta": 1.0 / (2 * shots)},
        noise={"p1": noise.p1, "p2": noise.p2, "p_ro": noise.p_ro},
        valid=valid,
        description=getattr(backend, "description", backend.name),
    )
