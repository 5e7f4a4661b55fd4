from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    message: str
    line: int
    column: int

    def format(self, path: str = "<input>") -> str:
        return f"{path}:{self.line}:{self.column}: {self.severity}: {self.message}"


class CompileError(Exception):
    """Raised for any rejected input; carries at least one diagnostic."""

    def __init__(self, diagnostics: list[Diagnostic] | Diagnostic):
        if isinstance(diagnostics, Diagnostic):
            diagnostics = [diagnostics]
        self.diagnostics = list(diagnostics)
        super().__init__(self.diagnostics[0].message)

    @classmethod
    def at(cls, message: str, line: int, column: int) -> "CompileError":
        return cls(Diagnostic("error", message, line, column))

    def format(self, path: str = "<input>") -> str:
        return "\n".join(d.format(path) for d in self.diagnostics)
