"""Dense complex linear algebra and the cosine-sine decomposition kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The CSD here
factors a unitary ``W`` partitioned at ``r`` (with ``2r <= m``) as::

    W = diag(U, V) @ [[C, -S, 0], [S, C, 0], [0, 0, I]] @ diag(X, Y)

with ``C = diag(cos(theta))`` and ``S = diag(sin(theta))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, NotUnitaryError, NumericalFailure, PartitionError

#: Tolerance for accepting an input matrix as unitary.
UNITARY_TOL = 1e-8
#: Per-dimension Frobenius tolerance for reconstructions (scaled by ``m``).
RECONSTRUCTION_TOL = 1e-9


def as_matrix(M) -> np.ndarray:
    """Return ``M`` as a finite 2-d complex array."""
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-d matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise DimensionError("matrix has non-finite entries")
    return A


def unitarity_residual(M) -> float:
    """Frobenius norm of ``M^H M - I``."""
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"matrix must be square, got shape {A.shape}")
    return float(np.linalg.norm(A.conj().T @ A - np.eye(A.shape[0])))


def is_unitary(M, tol: float = UNITARY_TOL) -> bool:
    """True iff ``||M^H M - I||_F <= tol``. Raises DimensionError if ``M`` is not square."""
    return unitarity_residual(M) <= tol


def require_unitary(M, tol: float = UNITARY_TOL) -> np.ndarray:
    A = as_matrix(M)
    res = unitarity_residual(A)
    if res > tol:
        raise NotUnitaryError(res, tol)
    return A


def random_unitary(m: int, seed: int) -> np.ndarray:
    """Seeded Haar-style random unitary of size ``m``.

    A complex Gaussian matrix is QR-factored and the columns of ``Q`` are
    rescaled by the phases of ``diag(R)``. The generator is local to the call,
    so the same ``(m, seed)`` always gives the same matrix.
    """
    if m < 1:
        raise DimensionError(f"size must be >= 1, got {m}")
    rng = np.random.default_rng(seed)
    Z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2.0)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    ph = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1.0), 1.0)
    return Q * ph


def block_diag(blocks: Sequence) -> np.ndarray:
    """Block-diagonal matrix with the given square blocks along the diagonal."""
    if len(blocks) == 0:
        raise ValueError("block_diag needs at least one block")
    mats = [as_matrix(b) for b in blocks]
    for b in mats:
        if b.shape[0] != b.shape[1]:
            raise DimensionError(f"blocks must be square, got shape {b.shape}")
    size = sum(b.shape[0] for b in mats)
    out = np.zeros((size, size), dtype=np.complex128)
    k = 0
    for b in mats:
        n = b.shape[0]
        out[k : k + n, k : k + n] = b
        k += n
    return out


def cs_matrix(thetas, m: int, offset: int = 0) -> np.ndarray:
    """The ``m x m`` cosine-sine factor for angles ``thetas``.

    The rotation block ``[[C, -S], [S, C]]`` sits at rows/cols
    ``[offset, offset + 2r)``; everything else is identity.
    """
    th = np.asarray(thetas, dtype=float)
    r = th.size
    if offset < 0 or offset + 2 * r > m:
        raise PartitionError(f"cosine-sine block of size {2 * r} at offset {offset} does not fit in {m}")
    out = np.eye(m, dtype=np.complex128)
    c, s = np.cos(th), np.sin(th)
    i = np.arange(offset, offset + r)
    out[i, i] = c
    out[i + r, i + r] = c
    out[i, i + r] = -s
    out[i + r, i] = s
    return out


@dataclass(frozen=True, eq=False)
class CSDResult:
    """Factors of one cosine-sine decomposition.

    ``U``, ``X`` are ``r x r``; ``V``, ``Y`` are ``(m - r) x (m - r)``; the
    angles are ascending in ``[0, pi/2]``.
    """

    r: int
    U: np.ndarray
    V: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    thetas: np.ndarray

    @property
    def m(self) -> int:
        return self.r + self.V.shape[0]

    @property
    def C(self) -> np.ndarray:
        return np.diag(np.cos(self.thetas))

    @property
    def S(self) -> np.ndarray:
        return np.diag(np.sin(self.thetas))

    def left(self) -> np.ndarray:
        return block_diag([self.U, self.V])

    def middle(self) -> np.ndarray:
        return cs_matrix(self.thetas, self.m)

    def right(self) -> np.ndarray:
        return block_diag([self.X, self.Y])

    def product(self) -> np.ndarray:
        return self.left() @ self.middle() @ self.right()


def csd(W, r: int, tol: float | None = None) -> CSDResult:
    """Cosine-sine decomposition of a unitary ``W`` partitioned at ``r``.

    ``U``, ``C`` and ``X`` come from the SVD of the top-left ``r x r`` block.
    ``V`` is the full QR completion of ``W21 X^H``, processed in order of
    decreasing sine so that near-zero sines only see the orthogonal
    complement. Each row of ``Y`` is read off whichever of the top-right or
    bottom-right block has the larger coefficient (``max(c, s) >= 1/sqrt 2``).

    Args:
        W: unitary ``m x m`` matrix.
        r: size of the leading partition, ``1 <= r`` and ``2r <= m``.
        tol: Frobenius reconstruction tolerance; defaults to ``1e-9 * m``.

    Raises:
        PartitionError: ``r`` out of range.
        NotUnitaryError: ``W`` fails the unitarity check.
        NumericalFailure: the three-factor product misses ``W`` by more than ``tol``.
    """
    W = as_matrix(W)
    m = W.shape[0]
    if W.shape[1] != m:
        raise DimensionError(f"matrix must be square, got shape {W.shape}")
    if r < 1 or 2 * r > m:
        raise PartitionError(f"partition r={r} needs 1 <= r and 2r <= m={m}")
    require_unitary(W)
    if tol is None:
        tol = RECONSTRUCTION_TOL * m

    W11, W12 = W[:r, :r], W[:r, r:]
    W21, W22 = W[r:, :r], W[r:, r:]

    U, c, Xh = np.linalg.svd(W11)
    c = np.clip(c, 0.0, 1.0)

    # columns of Q are orthogonal with norms sin(theta_i)
    Q = W21 @ Xh.conj().T
    order = np.argsort(-np.linalg.norm(Q, axis=0), kind="stable")
    Vq, R = np.linalg.qr(Q[:, order], mode="complete")
    rd = np.diagonal(R)[:r]
    mag = np.abs(rd)
    ph = np.where(mag > 0, rd / np.where(mag > 0, mag, 1.0), 1.0)
    Vq[:, :r] *= ph
    s = np.empty(r)
    s[order] = mag
    V = Vq.copy()
    V[:, order] = Vq[:, :r]

    thetas = np.clip(np.arctan2(s, c), 0.0, np.pi / 2)
    perm = np.argsort(thetas, kind="stable")
    if np.any(perm != np.arange(r)):
        thetas = thetas[perm]
        U = U[:, perm]
        Xh = Xh[perm, :]
        V[:, :r] = V[:, perm]
    cos, sin = np.cos(thetas), np.sin(thetas)

    top = U.conj().T @ W12
    bottom = V.conj().T @ W22
    Y = bottom.copy()
    use_cos = cos >= sin
    Y[:r][use_cos] = bottom[:r][use_cos] / cos[use_cos, None]
    Y[:r][~use_cos] = -top[~use_cos] / sin[~use_cos, None]

    res = CSDResult(r=r, U=U, V=V, X=Xh, Y=Y, thetas=thetas)
    residual = float(np.linalg.norm(res.product() - W))
    if residual > tol:
        raise NumericalFailure("cosine-sine decomposition", residual, tol)
    return res
