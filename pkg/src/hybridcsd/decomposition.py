"""Iterated cosine-sine synthesis of unitaries on hybrid-dimension registers.

One *level* of synthesis picks a control qudit of dimension ``d_c``, moves it
to the most significant position and peels the matrix apart with ``d_c - 1``
rounds of CSD (the lateral decomposition). The result is a product of
``2**(d_c - 1)`` block-diagonal factors (multiplexers over the control) and
``2**(d_c - 1) - 1`` cosine-sine factors (uniformly controlled Givens
rotations on the control). Block-diagonal factors are then synthesised
again on the remaining qudits until only one-qudit blocks are left.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import Circuit, Gate, Multiplexer, SingleQuditGate, UniformlyControlledGivens
from .errors import DimensionError, NumericalFailure
from .linalg import RECONSTRUCTION_TOL, as_matrix, block_diag, cs_matrix, csd, require_unitary
from .register import Dims, basis_digits, check_dims, ravel, total_dim

PRUNE_TOL = 1e-12


def select_control(dims: Sequence[int]) -> int:
    """Index of the lowest-dimension qudit, preferring the lowest index on ties."""
    dims = check_dims(dims)
    if len(dims) < 2:
        raise ValueError("need at least two qudits to choose a control")
    return min(range(len(dims)), key=lambda q: (dims[q], q))


def reorder_to_control(dims: Sequence[int], control: int) -> tuple[np.ndarray, Dims]:
    """Basis permutation that makes ``control`` the most significant qudit.

    Returns ``(perm, new_dims)`` where ``perm[i]`` is the new index of old
    basis state ``i``. The other qudits keep their relative order. With
    ``P[perm[i], i] = 1`` the reordered operator is ``P @ W @ P.T``.
    """
    dims = check_dims(dims)
    if not 0 <= control < len(dims):
        raise ValueError(f"control {control} out of range for {len(dims)} qudits")
    order = (control,) + tuple(q for q in range(len(dims)) if q != control)
    new_dims = tuple(dims[q] for q in order)
    digits = basis_digits(dims)
    perm = ravel(digits[:, list(order)], new_dims)
    return np.asarray(perm, dtype=int).reshape(-1), new_dims


def permutation_matrix(perm: np.ndarray) -> np.ndarray:
    m = len(perm)
    P = np.zeros((m, m))
    P[perm, np.arange(m)] = 1.0
    return P


def _conjugate(W: np.ndarray, perm: np.ndarray) -> np.ndarray:
    """``P @ W @ P.T`` for the permutation matrix of ``perm``."""
    out = np.empty_like(W)
    out[np.ix_(perm, perm)] = W
    return out


@dataclass(frozen=True, eq=False)
class BlockDiagonalFactor:
    """``diag(blocks)``: one equal-sized block per value of the control qudit."""

    blocks: tuple[np.ndarray, ...]

    kind = "BlockDiagonal"

    def matrix(self) -> np.ndarray:
        return block_diag(self.blocks)


@dataclass(frozen=True, eq=False)
class CosineSineFactor:
    """Rotation between control levels ``iteration`` and ``iteration + 1``.

    Realised as ``diag(I_{j r0}, [[C, -S], [S, C]], I_{m - (j+2) r0})`` where
    ``r0 = len(angles)``.
    """

    iteration: int
    angles: np.ndarray
    size: int

    kind = "CosineSine"

    @property
    def plane(self) -> tuple[int, int]:
        return (self.iteration, self.iteration + 1)

    def matrix(self) -> np.ndarray:
        return cs_matrix(self.angles, self.size, offset=self.iteration * len(self.angles))


LateralFactor = BlockDiagonalFactor | CosineSineFactor


@dataclass(frozen=True, eq=False)
class FactorSequence:
    """Factors whose left-to-right matrix product is the decomposed unitary."""

    factors: tuple[LateralFactor, ...]
    dims: Dims
    control: int = 0

    def __len__(self):
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def product(self) -> np.ndarray:
        m = total_dim(self.dims)
        out = np.eye(m, dtype=np.complex128)
        for f in self.factors:
            out = out @ f.matrix()
        return out


def _lateral(W: np.ndarray, r0: int, level: int, tol: float) -> list[LateralFactor]:
    # W spans control levels level..d_c-1, so it has k = d_c - level blocks of size r0
    k = W.shape[0] // r0
    if k == 1:
        return [BlockDiagonalFactor((W,))]
    res = csd(W, r0, tol=tol)
    eye = np.eye(r0, dtype=np.complex128)

    def absorb(head: np.ndarray, seq: list[LateralFactor]) -> list[LateralFactor]:
        # diag(head, F1 F2 ...) = diag(head, F1) diag(I, F2) ...
        out: list[LateralFactor] = []
        first = True
        for f in seq:
            if isinstance(f, BlockDiagonalFactor):
                out.append(BlockDiagonalFactor(((head if first else eye),) + f.blocks))
                first = False
            else:
                out.append(CosineSineFactor(f.iteration, f.angles, f.size + r0))
        return out

    middle = CosineSineFactor(level, res.thetas, W.shape[0])
    left = absorb(res.U, _lateral(res.V, r0, level + 1, tol))
    right = absorb(res.X, _lateral(res.Y, r0, level + 1, tol))
    return left + [middle] + right


def lateral_decompose(W, dims: Sequence[int], control: int = 0, tol: float | None = None) -> FactorSequence:
    """Lateral decomposition of ``W`` with respect to its most significant qudit.

    Produces ``2**d_c - 1`` factors alternating block-diagonal and
    cosine-sine, starting and ending with block-diagonal. Every block has
    size ``r0 = m / d_c``. The cosine-sine factor from iteration ``j`` mixes
    control levels ``j`` and ``j + 1`` only.

    Args:
        W: unitary of size ``prod(dims)``.
        dims: register dimensions with the control already first
            (see :func:`reorder_to_control`).
        control: must be 0; kept so callers state which qudit controls.
        tol: Frobenius tolerance on the factor product, default ``1e-9 * m``.
    """
    dims = check_dims(dims)
    if control != 0:
        raise ValueError("lateral_decompose needs the control as the most significant qudit; reorder first")
    W = as_matrix(W)
    m = total_dim(dims)
    if W.shape != (m, m):
        raise DimensionError(f"matrix of shape {W.shape} does not act on dims {dims}")
    require_unitary(W)
    if tol is None:
        tol = RECONSTRUCTION_TOL * m
    r0 = m // dims[0]
    seq = FactorSequence(tuple(_lateral(W, r0, 0, tol)), dims, 0)
    residual = float(np.linalg.norm(seq.product() - W))
    if residual > tol:
        raise NumericalFailure("lateral decomposition", residual, tol)
    return seq


def _ucg_angles(seqs, f, controls, targets, c, dims) -> np.ndarray:
    """Merge sibling angle vectors into one array over all qudits except ``c``."""
    others = tuple(q for q in range(len(dims)) if q != c)
    digits = basis_digits([dims[q] for q in others])
    pos = {q: k for k, q in enumerate(others)}
    blk = ravel(digits[:, [pos[q] for q in controls]], [dims[q] for q in controls]) if controls else np.zeros(len(digits), int)
    rest = [q for q in targets if q != c]
    loc = ravel(digits[:, [pos[q] for q in rest]], [dims[q] for q in rest])
    angles = np.stack([seqs[b].factors[f].angles for b in range(len(seqs))])
    return angles[np.asarray(blk).reshape(-1), np.asarray(loc).reshape(-1)]


def _expand(blocks, controls, targets, dims, first_control, levels, prune, tol) -> list[Gate]:
    """Gates, in matrix (right-to-left) order, for a multiplexed unitary.

    ``blocks[v]`` acts on ``targets`` (ascending) when ``controls`` hold ``v``.
    """
    if len(targets) == 1 or levels == 0:
        if not controls:
            return [SingleQuditGate(targets[0], blocks[0])]
        return [Multiplexer(controls, tuple(blocks))]

    tdims = [dims[q] for q in targets]
    c = first_control if first_control is not None else targets[select_control(tdims)]
    perm, rdims = reorder_to_control(tdims, targets.index(c))
    seqs = [lateral_decompose(_conjugate(B, perm), rdims, 0, tol=tol) for B in blocks]

    sub_controls = controls + (c,)
    sub_targets = tuple(q for q in targets if q != c)
    out: list[Gate] = []
    for f, factor in enumerate(seqs[0].factors):
        if isinstance(factor, CosineSineFactor):
            angles = _ucg_angles(seqs, f, controls, targets, c, dims)
            if prune and np.all(np.abs(angles) < PRUNE_TOL):
                continue
            out.append(UniformlyControlledGivens(c, factor.plane, angles))
        else:
            sub_blocks = [blk for s in seqs for blk in s.factors[f].blocks]
            sub_tol = RECONSTRUCTION_TOL * total_dim([dims[q] for q in sub_targets])
            out.extend(_expand(sub_blocks, sub_controls, sub_targets, dims, None, levels - 1, prune, sub_tol))
    return out


def synthesize(
    W,
    dims: Sequence[int],
    *,
    control: int | None = None,
    levels: int | None = None,
    prune: bool = False,
    tol: float | None = None,
) -> Circuit:
    """Synthesize ``W`` into multiplexers and uniformly controlled Givens rotations.

    Each level chooses one control among the qudits not yet used as controls
    (lowest dimension first) and decomposes every sibling block with respect
    to it, so the sibling rotations merge into one uniformly controlled gate
    and the sibling blocks into one multiplexer with an extra control.

    Args:
        W: unitary on ``dims``.
        dims: qudit dimensions.
        control: override the control choice at the top level only.
        levels: stop after this many levels; the remaining blocks are emitted
            as multiplexers over larger blocks. ``None`` recurses fully
            (``n - 1`` levels), leaving one-qudit blocks.
        prune: drop rotations whose angles are all below ``1e-12``.
        tol: per-level Frobenius tolerance, default ``1e-9 * m``.
    """
    dims = check_dims(dims)
    W = as_matrix(W)
    m = total_dim(dims)
    if W.shape != (m, m):
        raise DimensionError(f"matrix of shape {W.shape} does not act on dims {dims}")
    require_unitary(W)
    if control is not None and not 0 <= control < len(dims):
        raise ValueError(f"control {control} out of range for {len(dims)} qudits")
    if levels is not None and levels < 1 and len(dims) > 1:
        raise ValueError("levels must be >= 1")
    if tol is None:
        tol = RECONSTRUCTION_TOL * m
    gates = _expand([W], (), tuple(range(len(dims))), dims, control, levels if levels is not None else -1, prune, tol)
    return Circuit(dims, tuple(reversed(gates)))
