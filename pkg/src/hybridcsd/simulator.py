"""Mixed-radix state-vector simulation and circuit reconstruction.

States are reshaped to a tensor with one axis per qudit and gates act on
the relevant axes directly: shifts are index rolls, controlled gates update
only the matching slice. None of this goes through
:func:`hybridcsd.circuit.gate_unitary`, so the two can check each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

from .circuit import (
    Circuit,
    ControlledGivens,
    ControlledUnitary,
    Gate,
    Multiplexer,
    ShiftGate,
    SingleQuditGate,
    UniformlyControlledGivens,
    gate_unitary,
)
from .errors import DimensionError
from .register import Dims, check_dims, complement, total_dim

NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class StateVector:
    dims: Dims
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = check_dims(self.dims)
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != total_dim(dims):
            raise DimensionError(f"{amps.size} amplitudes do not fit dims {dims}")
        amps.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, dims: Sequence[int], index: int) -> "StateVector":
        dims = check_dims(dims)
        amps = np.zeros(total_dim(dims), dtype=np.complex128)
        amps[index] = 1.0
        return cls(dims, amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm**2 - 1.0) <= tol

    def __eq__(self, other):
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.dims == other.dims and np.array_equal(self.amplitudes, other.amplitudes)

    __hash__ = None


def _apply_block(psi: np.ndarray, op: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """Apply ``op`` to the tensor axes ``axes`` (in order) of ``psi``."""
    k = len(axes)
    shape = [psi.shape[a] for a in axes]
    moved = np.moveaxis(psi, list(axes), list(range(k)))
    rest = moved.shape[k:]
    flat = moved.reshape(prod(shape), -1)
    out = (op @ flat).reshape(tuple(shape) + rest)
    return np.moveaxis(out, list(range(k)), list(axes))


def _controlled_slice(n: int, controls: Sequence[tuple[int, int]]) -> tuple:
    idx = [slice(None)] * n
    for q, v in controls:
        idx[q] = v
    return tuple(idx)


def _apply_tensor(psi: np.ndarray, g: Gate, dims: Dims) -> np.ndarray:
    n = len(dims)
    if isinstance(g, ShiftGate):
        return np.roll(psi, g.amount % dims[g.target], axis=g.target)
    if isinstance(g, SingleQuditGate):
        return _apply_block(psi, g.matrix, [g.target])
    if isinstance(g, ControlledGivens):
        out = psi.copy()
        sl = _controlled_slice(n, g.controls)
        sub = out[sl]
        # the target axis shifts left by the number of fixed controls before it
        t = g.target - sum(1 for q, _ in g.controls if q < g.target)
        i, j = g.plane
        a = np.take(sub, i, axis=t)
        b = np.take(sub, j, axis=t)
        c, s = np.cos(g.theta), np.sin(g.theta)
        ai, bj = c * a - s * b, s * a + c * b
        sub = np.moveaxis(sub, t, 0)
        sub[i], sub[j] = ai, bj
        out[sl] = np.moveaxis(sub, 0, t)
        return out
    if isinstance(g, UniformlyControlledGivens):
        moved = np.moveaxis(psi, g.target, 0).copy()
        flat = moved.reshape(dims[g.target], -1)
        i, j = g.plane
        c, s = np.cos(g.angles), np.sin(g.angles)
        a, b = flat[i].copy(), flat[j].copy()
        flat[i] = c * a - s * b
        flat[j] = s * a + c * b
        return np.moveaxis(flat.reshape(moved.shape), 0, g.target)
    if isinstance(g, ControlledUnitary):
        out = psi.copy()
        sl = _controlled_slice(n, [(q, dims[q] - 1) for q in g.controls])
        remaining = complement(g.controls, n)
        axes = [remaining.index(q) for q in g.targets]
        out[sl] = _apply_block(out[sl], g.matrix, axes)
        return out
    if isinstance(g, Multiplexer):
        k = len(g.controls)
        moved = np.moveaxis(psi, list(g.controls), list(range(k)))
        shape = moved.shape
        flat = moved.reshape(prod(shape[:k]), prod(shape[k:]))
        out = np.stack([b @ flat[v] for v, b in enumerate(g.blocks)])
        return np.moveaxis(out.reshape(shape), list(range(k)), list(g.controls))
    raise TypeError(f"unsupported gate {type(g).__name__}")


def apply_gate(s: StateVector, g: Gate) -> StateVector:
    """Return ``gate_unitary(g) @ s`` without forming the full matrix."""
    g.validate(s.dims)
    psi = s.amplitudes.reshape(s.dims)
    return StateVector(s.dims, _apply_tensor(psi, g, s.dims).reshape(-1))


def apply_circuit(s: StateVector, c: Circuit) -> StateVector:
    if s.dims != c.dims:
        raise DimensionError(f"state dims {s.dims} do not match circuit dims {c.dims}")
    for g in c.gates:
        s = apply_gate(s, g)
    return s


def reconstruct(c: Circuit) -> np.ndarray:
    """The circuit's matrix: product of gate unitaries in reverse application order."""
    M = np.eye(c.m, dtype=np.complex128)
    for g in c.gates:
        M = gate_unitary(g, c.dims) @ M
    return M


def reconstruct_by_columns(c: Circuit) -> np.ndarray:
    """Same as :func:`reconstruct`, via simulation of every basis state."""
    cols = [apply_circuit(StateVector.basis(c.dims, k), c).amplitudes for k in range(c.m)]
    return np.stack(cols, axis=1)


def equivalence(A, B) -> float:
    """Frobenius distance ``||A - B||_F``. Global phase is not quotiented out."""
    A = np.asarray(A, dtype=np.complex128)
    B = np.asarray(B, dtype=np.complex128)
    if A.shape != B.shape:
        raise DimensionError(f"cannot compare shapes {A.shape} and {B.shape}")
    return float(np.linalg.norm(A - B))
