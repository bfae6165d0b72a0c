"""Command-line front end.

Exit codes: 0 success, 2 parse or usage error, 3 failed precondition
(non-unitary matrix, unnormalised state), 4 numerical failure (residual
above tolerance).
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

import numpy as np

from . import textio
from .circuit import GateCounts, count_gates, predicted_level_count
from .decomposition import synthesize
from .errors import FormatError, NotUnitaryError, NumericalFailure, SynthesisError
from .linalg import RECONSTRUCTION_TOL, UNITARY_TOL, random_unitary, unitarity_residual
from .lowering import lower_circuit
from .simulator import apply_circuit, equivalence, reconstruct

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PRECONDITION = 3
EXIT_NUMERICAL = 4


class CLIError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else textio.read_text(path)
    except OSError as e:
        raise CLIError(f"cannot read {path}: {e.strerror}", EXIT_USAGE) from None


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        textio.write_text(path, text)


def _load_matrix(path: str):
    try:
        return textio.parse_matrix(_read(path))
    except FormatError as e:
        raise CLIError(f"{path}: {e}", EXIT_USAGE) from None


def _load_circuit(path: str):
    try:
        return textio.parse_circuit(_read(path))
    except FormatError as e:
        raise CLIError(f"{path}: {e}", EXIT_USAGE) from None


def _load_state(path: str):
    try:
        return textio.parse_state(_read(path))
    except (FormatError, SynthesisError) as e:
        raise CLIError(f"{path}: {e}", EXIT_USAGE) from None


def prime_dims(m: int) -> tuple[int, ...]:
    """Prime factors of ``m`` in ascending order, used as default qudit dimensions."""
    out, p = [], 2
    while p * p <= m:
        while m % p == 0:
            out.append(p)
            m //= p
        p += 1
    if m > 1:
        out.append(m)
    return tuple(out)


def cmd_random(args) -> int:
    if args.m < 2:
        raise CLIError("size must be >= 2 (a register needs a qudit of dimension >= 2)", EXIT_USAGE)
    dims = tuple(args.dims) if args.dims else prime_dims(args.m)
    if int(np.prod(dims)) != args.m:
        raise CLIError(f"dims {dims} do not multiply to {args.m}", EXIT_USAGE)
    _emit(textio.format_matrix(random_unitary(args.m, args.seed), dims), args.output)
    return EXIT_OK


def cmd_synth(args) -> int:
    W, dims = _load_matrix(args.matrix)
    m = W.shape[0]
    res = unitarity_residual(W)
    if res > UNITARY_TOL:
        raise CLIError(f"input is not unitary: ||W^H W - I||_F = {res:.3e} > {UNITARY_TOL:.0e}", EXIT_PRECONDITION)
    tol = args.tol if args.tol is not None else RECONSTRUCTION_TOL * m
    try:
        circuit = synthesize(W, dims, control=args.control, levels=args.levels, prune=args.prune)
    except NumericalFailure as e:
        raise CLIError(str(e), EXIT_NUMERICAL) from None
    except ValueError as e:
        raise CLIError(str(e), EXIT_USAGE) from None
    if args.lower:
        circuit = lower_circuit(circuit, peephole=args.peephole)
    residual = equivalence(reconstruct(circuit), W)
    _emit(textio.format_circuit(circuit), args.output)
    print(f"residual {textio.fmt_float(residual)} (tol {tol:.3e}, {len(circuit)} gates)", file=sys.stderr)
    return EXIT_OK if residual <= tol else EXIT_NUMERICAL


def cmd_verify(args) -> int:
    W, dims = _load_matrix(args.matrix)
    circuit = _load_circuit(args.circuit)
    if circuit.dims != dims:
        raise CLIError(f"dims mismatch: matrix {dims}, circuit {circuit.dims}", EXIT_USAGE)
    tol = args.tol if args.tol is not None else RECONSTRUCTION_TOL * W.shape[0]
    residual = equivalence(reconstruct(circuit), W)
    ok = residual <= tol
    print(f"residual {textio.fmt_float(residual)}")
    print(f"tolerance {tol:.3e}")
    print("OK" if ok else "MISMATCH")
    return EXIT_OK if ok else EXIT_NUMERICAL


def _print_counts(counts: GateCounts) -> None:
    for key, val in counts.as_dict().items():
        print(f"{key} {val}")


def cmd_count(args) -> int:
    if args.predict is not None:
        d, n = args.predict
        try:
            print(predicted_level_count(d, n))
        except ValueError as e:
            raise CLIError(str(e), EXIT_USAGE) from None
        return EXIT_OK
    if args.circuit is None:
        raise CLIError("count needs a circuit file or --predict D N", EXIT_USAGE)
    _print_counts(count_gates(_load_circuit(args.circuit)))
    return EXIT_OK


def cmd_simulate(args) -> int:
    circuit = _load_circuit(args.circuit)
    state = _load_state(args.state)
    if state.dims != circuit.dims:
        raise CLIError(f"dims mismatch: state {state.dims}, circuit {circuit.dims}", EXIT_USAGE)
    if not state.is_normalized(UNITARY_TOL):
        raise CLIError(f"state is not normalised (norm^2 = {state.norm ** 2:.12g})", EXIT_PRECONDITION)
    _emit(textio.format_state(apply_circuit(state, circuit)), args.output)
    return EXIT_OK


def cmd_lower(args) -> int:
    circuit = _load_circuit(args.circuit)
    _emit(textio.format_circuit(lower_circuit(circuit, peephole=args.peephole)), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hybridcsd", description="CSD synthesis of hybrid qudit circuits")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("random", help="emit a seeded random unitary matrix file")
    r.add_argument("m", type=int)
    r.add_argument("seed", type=int)
    r.add_argument("--dims", type=int, nargs="+", help="qudit dimensions (default: prime factors of m)")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_random)

    s = sub.add_parser("synth", help="synthesize a circuit from a matrix file")
    s.add_argument("matrix")
    s.add_argument("-o", "--output")
    s.add_argument("--lower", action="store_true", help="lower to shifts and controlled gates")
    s.add_argument("--peephole", action="store_true", help="with --lower, merge adjacent shifts")
    s.add_argument("--prune", action="store_true", help="drop all-zero-angle rotations")
    s.add_argument("--tol", type=float)
    s.add_argument("--control", type=int, help="control qudit for the top level")
    s.add_argument("--levels", type=int, help="number of levels to decompose (default: all)")
    s.set_defaults(func=cmd_synth)

    v = sub.add_parser("verify", help="compare a circuit against a matrix")
    v.add_argument("matrix")
    v.add_argument("circuit")
    v.add_argument("--tol", type=float)
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("count", help="gate counts of a circuit, or the predicted level count")
    c.add_argument("circuit", nargs="?")
    c.add_argument("--predict", type=int, nargs=2, metavar=("D", "N"))
    c.set_defaults(func=cmd_count)

    m = sub.add_parser("simulate", help="apply a circuit to a state file")
    m.add_argument("circuit")
    m.add_argument("state")
    m.add_argument("-o", "--output")
    m.set_defaults(func=cmd_simulate)

    lo = sub.add_parser("lower", help="lower a circuit file")
    lo.add_argument("circuit")
    lo.add_argument("-o", "--output")
    lo.add_argument("--peephole", action="store_true")
    lo.set_defaults(func=cmd_lower)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CLIError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except NotUnitaryError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except NumericalFailure as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
