"""``mirrorc`` command-line driver.

    mirrorc [-qpu SEL] [-shots N] [-validate] [-mirrors N] [-seed S]
            [-noise FILE] [-o REPORT.json] [-dump-ir] FILE.qasm

Exit status: 0 on success, 1 on compile errors, 2 on execution errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .frontend import CompileError, compile_source
from .ir import IRError, Module
from .mirror import DEFAULT_MIRRORS, MirrorError
from .passes import CANCEL, INLINE, LOWER_NATIVE, PassError, run_pipeline
from .passes.lower import lower_to_native
from .sim import NoiseModel, SimBackend, SimulationError
from .validation import DEFAULT_SHOTS, ValidationError, validate

log = logging.getLogger("mirrorc")

EXIT_OK, EXIT_COMPILE, EXIT_EXEC = 0, 1, 2

# providers known from the remote-execution world; none has a client here
KNOWN_PROVIDERS = ("honeywell", "ibm", "ionq")


class BackendUnavailable(Exception):
    pass


def select_backend(selector: str) -> SimBackend:
    provider, _, device = selector.partition(":")
    if provider == "sim" and (device or selector == "sim"):
        return SimBackend(name=selector)
    if not provider or not device:
        raise BackendUnavailable(f"malformed backend selector {selector!r}; expected <provider>:<device> or sim")
    if provider in KNOWN_PROVIDERS:
        raise BackendUnavailable(
            f"backend not available: {selector} (recognized providers without a built-in client: "
            f"{', '.join(KNOWN_PROVIDERS)}; built-in: sim)"
        )
    raise BackendUnavailable(f"backend not available: {selector} (unknown provider {provider!r})")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mirrorc", allow_abbrev=False, description=__doc__.split("\n")[0])
    p.add_argument("input", help="OpenQASM 3 source file")
    p.add_argument("-qpu", "--qpu", default="sim", help="backend selector: sim or <provider>:<device>")
    p.add_argument("-shots", "--shots", type=_positive, default=DEFAULT_SHOTS)
    p.add_argument("-validate", "--validate", action="store_true", help="run mirror-circuit validation")
    p.add_argument("-mirrors", "--mirrors", type=_positive, default=DEFAULT_MIRRORS)
    p.add_argument("-seed", "--seed", type=int, default=None, help="RNG seed (fallback: $MIRRORC_SEED, then 0)")
    p.add_argument("-noise", "--noise", type=Path, default=None, help="noise model file (p1, p2, p_ro)")
    p.add_argument("-o", "--output", type=Path, default=None, help="write the JSON report here")
    p.add_argument("-dump-ir", "--dump-ir", action="store_true", help="print the IR after each pass to stderr")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("MIRRORC_SEED", "0"))


def _dumper(enabled: bool):
    if not enabled:
        return None

    def dump(name: str, module: Module) -> None:
        sys.stderr.write(f"// IR after {name}\n{module.dump()}")

    return dump


def compile_module(text: str, dump_ir: bool = False) -> tuple[Module, Module]:
    """Return (optimized logical module, native module) for a source text."""
    dump = _dumper(dump_ir)
    module = compile_source(text)
    if dump:
        dump("build_ir", module)
    logical = run_pipeline(module, [INLINE, CANCEL], dump)
    native = run_pipeline(logical, [LOWER_NATIVE], dump)
    return logical, native


def _emit(payload: str, table: str, output: Path | None) -> None:
    sys.stdout.write(table)
    if output is not None:
        output.write_text(payload)
    else:
        sys.stdout.write(payload)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    path = str(args.input)
    seed = _seed(args)

    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        print(f"{path}: error: {exc}", file=sys.stderr)
        return EXIT_COMPILE
    try:
        logical, native = compile_module(text, args.dump_ir)
    except CompileError as exc:
        print(exc.format(path), file=sys.stderr)
        return EXIT_COMPILE
    except (PassError, IRError) as exc:
        print(f"{path}: error: {exc}", file=sys.stderr)
        return EXIT_COMPILE

    try:
        backend = select_backend(args.qpu)
        noise = NoiseModel.from_file(args.noise) if args.noise else NoiseModel()
    except (BackendUnavailable, ValueError, OSError) as exc:
        print(f"mirrorc: {exc}", file=sys.stderr)
        return EXIT_EXEC

    base = logical.entry_kernel
    if args.validate:
        try:
            report = validate(base, backend, args.shots, args.mirrors, seed, noise, prepare=lower_to_native)
        except MirrorError as exc:
            print(f"{path}: error: mirror transform: {exc}", file=sys.stderr)
            return EXIT_COMPILE
        except (SimulationError, ValidationError) as exc:
            print(f"mirrorc: execution error: {exc}", file=sys.stderr)
            return EXIT_EXEC
        _emit(report.to_json(), report.table(), args.output)
        return EXIT_OK if report.valid else EXIT_EXEC

    try:
        stream = np.random.SeedSequence(seed).spawn(1)[0]
        result = backend.run(native.entry_kernel, args.shots, noise, np.random.default_rng(stream))
    except SimulationError as exc:
        print(f"mirrorc: execution error: {exc}", file=sys.stderr)
        return EXIT_EXEC
    payload = json.dumps(
        {"backend": backend.name, "shots": args.shots, "seed": seed, "counts": result.counts}, indent=2
    ) + "\n"
    table = "".join(f"{bits}  {count}\n" for bits, count in result.counts.items())
    _emit(payload, table, args.output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
