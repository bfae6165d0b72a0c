"""Mixed-radix bookkeeping for registers of qudits with differing dimensions.

A register is described by its dimensions ``(d_1, ..., d_n)``. Basis states
are digit tuples ``(a_1, ..., a_n)`` indexed most significant qudit first,
i.e. row-major order of an array of shape ``dims``.
"""

from __future__ import annotations

from math import prod
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError

Dims = tuple[int, ...]


def check_dims(dims: Iterable[int]) -> Dims:
    """Validate and normalise a dimension list to a tuple of ints >= 2."""
    out = tuple(int(d) for d in dims)
    if len(out) == 0:
        raise DimensionError("a register needs at least one qudit")
    for d in out:
        if d < 2:
            raise DimensionError(f"qudit dimensions must be >= 2, got {out}")
    return out


def total_dim(dims: Sequence[int]) -> int:
    return prod(dims)


def basis_digits(dims: Sequence[int]) -> np.ndarray:
    """All basis digit tuples as an ``(m, n)`` int array, in index order."""
    if len(dims) == 0:
        return np.zeros((1, 0), dtype=int)
    grids = np.indices(tuple(dims)).reshape(len(dims), -1)
    return grids.T.copy()


def ravel(digits, dims: Sequence[int]) -> np.ndarray | int:
    """Mixed-radix index of ``digits`` (last axis) over ``dims``."""
    digits = np.asarray(digits, dtype=int)
    idx = np.zeros(digits.shape[:-1], dtype=int)
    for k, d in enumerate(dims):
        idx = idx * d + digits[..., k]
    return int(idx) if idx.ndim == 0 else idx


def unravel(index: int, dims: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(x) for x in np.unravel_index(index, tuple(dims)))


def complement(qudits: Iterable[int], n: int) -> tuple[int, ...]:
    s = set(qudits)
    return tuple(q for q in range(n) if q not in s)
