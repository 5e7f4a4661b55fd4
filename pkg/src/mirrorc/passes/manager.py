"""Pass objects and the pipeline runner."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Sequence

from ..ir import Dialect, Kernel, Module

log = logging.getLogger(__name__)


class PassError(Exception):
    def __init__(self, pass_name: str, message: str):
        super().__init__(f"pass '{pass_name}': {message}")
        self.pass_name = pass_name


@dataclass(frozen=True)
class Pass:
    """A whole-module rewrite.

    ``requires`` is the dialect the input must be in; ``produces`` the dialect
    of the output. ``None`` means any dialect / unchanged.
    """

    name: str
    run: Callable[[Module], Module]
    requires: Dialect | None = None
    produces: Dialect | None = None

    def __call__(self, module: Module) -> Module:
        return self.run(module)

    def output_dialect(self, incoming: Dialect) -> Dialect:
        return self.produces or incoming


def kernel_pass(
    name: str,
    fn: Callable[[Kernel], Kernel],
    requires: Dialect | None = None,
    produces: Dialect | None = None,
) -> Pass:
    """Lift a kernel rewrite to a module pass applied to every kernel."""

    def run(module: Module) -> Module:
        return module.map_kernels(fn, produces)

    return Pass(name, run, requires, produces)


def check_pipeline(passes: Sequence[Pass], dialect: Dialect) -> None:
    current = dialect
    for p in passes:
        if p.requires is not None and p.requires is not current:
            raise PassError(
                p.name, f"requires {p.requires.value} dialect but receives {current.value}"
            )
        current = p.output_dialect(current)


def run_pipeline(
    module: Module,
    passes: Sequence[Pass],
    dump: Callable[[str, Module], None] | None = None,
) -> Module:
    """Apply ``passes`` in order.

    Dialect compatibility of the whole pipeline is checked before any pass
    runs. ``dump`` is called with ``(pass_name, module)`` after each pass.
    """
    check_pipeline(passes, module.dialect)
    for p in passes:
        log.debug("running pass %s", p.name)
        try:
            module = p(module)
        except PassError:
            raise
        except Exception as exc:
            raise PassError(p.name, str(exc)) from exc
        if dump is not None:
            dump(p.name, module)
    return module
