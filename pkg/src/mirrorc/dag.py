"""Per-qubit wire chains over a kernel's instruction list."""

from __future__ import annotations

from dataclasses import dataclass
from graphlib import TopologicalSorter

from .ir import Instruction, Kernel


@dataclass(frozen=True)
class WireDag:
    """Instruction indices threaded along each qubit wire.

    ``chains[q]`` lists, in program order, the indices of the instructions
    touching qubit ``q``. Edges connect consecutive entries of a chain.
    """

    instructions: tuple[Instruction, ...]
    chains: dict[int, list[int]]

    def successors(self, node: int) -> set[int]:
        out = set()
        for q in self.instructions[node].qubits:
            chain = self.chains[q]
            pos = chain.index(node)
            if pos + 1 < len(chain):
                out.add(chain[pos + 1])
        return out

    def predecessors(self, node: int) -> set[int]:
        out = set()
        for q in self.instructions[node].qubits:
            chain = self.chains[q]
            pos = chain.index(node)
            if pos > 0:
                out.add(chain[pos - 1])
        return out

    def next_on_wire(self, node: int, qubit: int) -> int | None:
        chain = self.chains[qubit]
        pos = chain.index(node)
        return chain[pos + 1] if pos + 1 < len(chain) else None

    def topological_order(self) -> list[int]:
        ts = TopologicalSorter({i: self.predecessors(i) for i in range(len(self.instructions))})
        return list(ts.static_order())

    def chain_names(self, qubit: int) -> list[str]:
        return [self.instructions[i].name for i in self.chains[qubit]]


def build_wire_dag(kernel: Kernel) -> WireDag:
    chains: dict[int, list[int]] = {q: [] for q in range(kernel.n_qubits)}
    for idx, inst in enumerate(kernel.instructions):
        for q in inst.qubits:
            chains[q].append(idx)
    return WireDag(kernel.instructions, chains)
