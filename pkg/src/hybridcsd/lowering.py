"""Rewrite multiplexers and uniformly controlled rotations into controlled gates.

The output vocabulary is single-qudit gates, shifts, controlled unitaries
and controlled Givens rotations, with every control triggering on its
qudit's maximum value ``d - 1``. A control on value ``k`` is moved to the
top value by conjugating with ``Shift(+(d - 1 - k))`` / ``Shift(-(d - 1 - k))``.
"""

from __future__ import annotations

from itertools import product
from typing import Sequence

from .circuit import (
    Circuit,
    ControlledGivens,
    ControlledUnitary,
    Gate,
    Multiplexer,
    ShiftGate,
    UniformlyControlledGivens,
)
from .register import check_dims, complement


def lower_multiplexer(g: Multiplexer, dims: Sequence[int]) -> list[Gate]:
    """Shift / controlled-unitary sequence for a multiplexer.

    For one control of dimension ``d`` this is ``d`` repetitions of
    ``Shift(control, d - 1)`` followed by the next block as a controlled
    unitary, ``2d`` gates in all; the ``d`` shifts add up to a multiple of
    ``d`` so the control comes back to its input value. With several
    controls the same pattern is nested, outermost control first.
    """
    dims = check_dims(dims)
    g.validate(dims)
    targets = complement(g.controls, len(dims))
    out: list[Gate] = []

    def emit(level: int, prefix: int) -> None:
        q = g.controls[level]
        d = dims[q]
        for t in range(d):
            out.append(ShiftGate(q, d - 1))
            idx = prefix * d + t
            if level + 1 == len(g.controls):
                out.append(ControlledUnitary(targets, g.controls, g.blocks[idx]))
            else:
                emit(level + 1, idx)

    emit(0, 0)
    return out


def normalize_controls(g: ControlledGivens, dims: Sequence[int]) -> list[Gate]:
    """Wrap ``g`` in shifts so that every control triggers on the top value."""
    dims = check_dims(dims)
    g.validate(dims)
    before: list[Gate] = []
    after: list[Gate] = []
    controls = []
    for q, k in g.controls:
        top = dims[q] - 1
        if k != top:
            a = (top - k) % dims[q]
            before.append(ShiftGate(q, a))
            after.append(ShiftGate(q, -a))
        controls.append((q, top))
    core = ControlledGivens(g.target, g.plane, g.theta, tuple(controls))
    return before + [core] + after


def lower_ucg(g: UniformlyControlledGivens, dims: Sequence[int]) -> list[Gate]:
    """One controlled rotation per joint state of the other qudits, controls normalised."""
    dims = check_dims(dims)
    g.validate(dims)
    others = complement([g.target], len(dims))
    out: list[Gate] = []
    for k, values in enumerate(product(*(range(dims[q]) for q in others))):
        cg = ControlledGivens(g.target, g.plane, g.angles[k], tuple(zip(others, values)))
        out.extend(normalize_controls(cg, dims))
    return out


def merge_shifts(gates: Sequence[Gate], dims: Sequence[int]) -> list[Gate]:
    """Combine runs of adjacent shifts wire by wire, dropping the ones that cancel."""
    out: list[Gate] = []
    run: dict[int, int] = {}

    def flush():
        for q, a in run.items():
            if a % dims[q]:
                out.append(ShiftGate(q, a % dims[q]))
        run.clear()

    for g in gates:
        if isinstance(g, ShiftGate):
            run[g.target] = run.get(g.target, 0) + g.amount
        else:
            flush()
            out.append(g)
    flush()
    return out


def lower_gate(g: Gate, dims: Sequence[int]) -> list[Gate]:
    if isinstance(g, Multiplexer):
        return lower_multiplexer(g, dims)
    if isinstance(g, UniformlyControlledGivens):
        return lower_ucg(g, dims)
    if isinstance(g, ControlledGivens):
        return normalize_controls(g, dims)
    g.validate(dims)
    return [g]


def lower_circuit(c: Circuit, *, peephole: bool = False) -> Circuit:
    """Lower every gate of ``c``; ``peephole`` also merges adjacent shifts."""
    gates: list[Gate] = []
    for g in c.gates:
        gates.extend(lower_gate(g, c.dims))
    if peephole:
        gates = merge_shifts(gates, c.dims)
    return Circuit(c.dims, tuple(gates))
