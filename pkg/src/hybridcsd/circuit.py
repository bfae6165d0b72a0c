"""Gate vocabulary, circuit container and gate-count accounting.

Circuits list gates in application order: ``gates[0]`` acts on the state
first, so the circuit's matrix is ``G[-1] @ ... @ G[1] @ G[0]``.

Whenever a gate carries data indexed by the joint state of several qudits
(multiplexer blocks, uniformly controlled angles), that index is the
mixed-radix number of those qudits' values, most significant first. For a
uniformly controlled Givens rotation the qudits are all non-target qudits in
ascending order; for a multiplexer they are its ``controls`` in listed order.
The blocks of multiplexers and controlled unitaries act on their target
qudits in ascending order.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from math import prod
from typing import Iterator, Sequence

import numpy as np

from .errors import GateValidationError
from .linalg import UNITARY_TOL, unitarity_residual
from .register import Dims, basis_digits, check_dims, complement, ravel, total_dim


def givens(d: int, plane: tuple[int, int], theta: float) -> np.ndarray:
    """``d x d`` rotation by ``theta`` in the ``(i, j)`` coordinate plane."""
    i, j = plane
    G = np.eye(d, dtype=np.complex128)
    c, s = np.cos(theta), np.sin(theta)
    G[i, i] = c
    G[j, j] = c
    G[i, j] = -s
    G[j, i] = s
    return G


def shift_matrix(d: int, amount: int) -> np.ndarray:
    """Cyclic shift ``|x> -> |x + amount mod d>``."""
    return np.roll(np.eye(d, dtype=np.complex128), amount % d, axis=0)


class Gate:
    """Base class; concrete gates are frozen dataclasses."""

    def qudits(self) -> tuple[int, ...]:
        raise NotImplementedError

    def validate(self, dims: Sequence[int]) -> None:
        raise NotImplementedError

    def adjoint(self) -> "Gate":
        raise NotImplementedError

    def acted_on(self, n: int) -> tuple[int, ...]:
        """Qudits whose values the gate may change, in ascending order for blocks."""
        raise NotImplementedError

    def local_op(self, digits: np.ndarray, dims: Sequence[int]) -> np.ndarray | None:
        """Operator applied to ``acted_on(n)`` when the register holds ``digits``.

        ``None`` means identity. Only the non-target entries of ``digits`` are
        consulted.
        """
        raise NotImplementedError

    def __eq__(self, other):
        if type(self) is not type(other):
            return NotImplemented
        for f in dataclasses.fields(self):
            a, b = getattr(self, f.name), getattr(other, f.name)
            if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
                if not np.array_equal(np.asarray(a), np.asarray(b)):
                    return False
            elif isinstance(a, tuple) and a and isinstance(a[0], np.ndarray):
                if len(a) != len(b) or not all(np.array_equal(x, y) for x, y in zip(a, b)):
                    return False
            elif a != b:
                return False
        return True

    __hash__ = None


def _check_qudit(q: int, n: int, what: str) -> None:
    if not 0 <= q < n:
        raise GateValidationError(f"{what} qudit {q} out of range for {n} qudits")


def _check_distinct(qs: Sequence[int]) -> None:
    if len(set(qs)) != len(qs):
        raise GateValidationError(f"qudit indices must be distinct, got {tuple(qs)}")


def _check_unitary(M: np.ndarray, size: int, what: str) -> None:
    if M.shape != (size, size):
        raise GateValidationError(f"{what} must be {size}x{size}, got {M.shape}")
    res = unitarity_residual(M)
    if res > UNITARY_TOL:
        raise GateValidationError(f"{what} is not unitary (residual {res:.3e})")


def _check_plane(plane: tuple[int, int], d: int) -> None:
    i, j = plane
    if not 0 <= i < j < d:
        raise GateValidationError(f"plane {plane} needs 0 <= i < j < {d}")


def _matrix(M) -> np.ndarray:
    A = np.array(M, dtype=np.complex128)
    A.setflags(write=False)
    return A


@dataclass(frozen=True, eq=False)
class SingleQuditGate(Gate):
    target: int
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", _matrix(self.matrix))

    def qudits(self):
        return (self.target,)

    def validate(self, dims):
        _check_qudit(self.target, len(dims), "target")
        _check_unitary(self.matrix, dims[self.target], "single-qudit matrix")

    def adjoint(self):
        return SingleQuditGate(self.target, self.matrix.conj().T)

    def acted_on(self, n):
        return (self.target,)

    def local_op(self, digits, dims):
        return self.matrix


@dataclass(frozen=True, eq=False)
class ShiftGate(Gate):
    """``|x> -> |x + amount mod d>`` on one qudit."""

    target: int
    amount: int

    def qudits(self):
        return (self.target,)

    def validate(self, dims):
        _check_qudit(self.target, len(dims), "target")

    def adjoint(self):
        return ShiftGate(self.target, -self.amount)

    def acted_on(self, n):
        return (self.target,)

    def local_op(self, digits, dims):
        return shift_matrix(dims[self.target], self.amount)


@dataclass(frozen=True, eq=False)
class ControlledUnitary(Gate):
    """Applies ``matrix`` to ``targets`` when every control holds its maximum value."""

    targets: tuple[int, ...]
    controls: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(q) for q in self.targets))
        object.__setattr__(self, "controls", tuple(int(q) for q in self.controls))
        object.__setattr__(self, "matrix", _matrix(self.matrix))

    def qudits(self):
        return self.controls + self.targets

    def validate(self, dims):
        n = len(dims)
        if not self.targets or not self.controls:
            raise GateValidationError("controlled unitary needs targets and controls")
        for q in self.targets:
            _check_qudit(q, n, "target")
        for q in self.controls:
            _check_qudit(q, n, "control")
        _check_distinct(self.qudits())
        _check_unitary(self.matrix, prod(dims[q] for q in self.targets), "controlled block")

    def adjoint(self):
        return ControlledUnitary(self.targets, self.controls, self.matrix.conj().T)

    def acted_on(self, n):
        return self.targets

    def local_op(self, digits, dims):
        if all(digits[c] == dims[c] - 1 for c in self.controls):
            return self.matrix
        return None


@dataclass(frozen=True, eq=False)
class ControlledGivens(Gate):
    """Givens rotation on ``target`` when each ``(qudit, value)`` control matches."""

    target: int
    plane: tuple[int, int]
    theta: float
    controls: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "plane", (int(self.plane[0]), int(self.plane[1])))
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "controls", tuple((int(q), int(v)) for q, v in self.controls))

    def qudits(self):
        return tuple(q for q, _ in self.controls) + (self.target,)

    def validate(self, dims):
        n = len(dims)
        _check_qudit(self.target, n, "target")
        _check_plane(self.plane, dims[self.target])
        for q, v in self.controls:
            _check_qudit(q, n, "control")
            if not 0 <= v < dims[q]:
                raise GateValidationError(f"control value {v} out of range for qudit {q}")
        _check_distinct(self.qudits())

    def adjoint(self):
        return ControlledGivens(self.target, self.plane, -self.theta, self.controls)

    def acted_on(self, n):
        return (self.target,)

    def local_op(self, digits, dims):
        if all(digits[q] == v for q, v in self.controls):
            return givens(dims[self.target], self.plane, self.theta)
        return None


@dataclass(frozen=True, eq=False)
class UniformlyControlledGivens(Gate):
    """Givens rotation on ``target`` whose angle is selected by every other qudit."""

    target: int
    plane: tuple[int, int]
    angles: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "plane", (int(self.plane[0]), int(self.plane[1])))
        a = np.array(self.angles, dtype=float).reshape(-1)
        a.setflags(write=False)
        object.__setattr__(self, "angles", a)

    def qudits(self):
        return (self.target,)

    def validate(self, dims):
        n = len(dims)
        _check_qudit(self.target, n, "target")
        _check_plane(self.plane, dims[self.target])
        want = prod(dims[q] for q in complement([self.target], n))
        if self.angles.size != want:
            raise GateValidationError(f"expected {want} angles, got {self.angles.size}")

    def adjoint(self):
        return UniformlyControlledGivens(self.target, self.plane, -self.angles)

    def acted_on(self, n):
        return (self.target,)

    def local_op(self, digits, dims):
        others = complement([self.target], len(dims))
        k = ravel([digits[q] for q in others], [dims[q] for q in others]) if others else 0
        return givens(dims[self.target], self.plane, self.angles[k])


@dataclass(frozen=True, eq=False)
class Multiplexer(Gate):
    """Block-diagonal gate: block ``v`` acts on the other qudits when ``controls`` hold ``v``."""

    controls: tuple[int, ...]
    blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        controls = (self.controls,) if isinstance(self.controls, (int, np.integer)) else self.controls
        object.__setattr__(self, "controls", tuple(int(q) for q in controls))
        object.__setattr__(self, "blocks", tuple(_matrix(b) for b in self.blocks))

    @property
    def control(self) -> int:
        """The leading (outermost) control qudit."""
        return self.controls[0]

    def qudits(self):
        return self.controls

    def validate(self, dims):
        n = len(dims)
        if not self.controls:
            raise GateValidationError("multiplexer needs at least one control")
        for q in self.controls:
            _check_qudit(q, n, "control")
        _check_distinct(self.controls)
        tq = complement(self.controls, n)
        if not tq:
            raise GateValidationError("multiplexer has no target qudits")
        nblocks = prod(dims[q] for q in self.controls)
        if len(self.blocks) != nblocks:
            raise GateValidationError(f"expected {nblocks} blocks, got {len(self.blocks)}")
        size = prod(dims[q] for q in tq)
        for b in self.blocks:
            _check_unitary(b, size, "multiplexer block")

    def adjoint(self):
        return Multiplexer(self.controls, tuple(b.conj().T for b in self.blocks))

    def acted_on(self, n):
        return complement(self.controls, n)

    def local_op(self, digits, dims):
        v = ravel([digits[q] for q in self.controls], [dims[q] for q in self.controls])
        return self.blocks[v]


def controls_are_maximal(g: Gate, dims: Sequence[int]) -> bool:
    """True when every control of ``g`` triggers only on its qudit's top value."""
    if isinstance(g, ControlledGivens):
        return all(v == dims[q] - 1 for q, v in g.controls)
    return True


def gate_unitary(g: Gate, dims: Sequence[int]) -> np.ndarray:
    """Full ``m x m`` matrix of ``g`` on the register ``dims``.

    Built entry by entry from the gate's local operator on each basis state,
    independently of the state-vector kernels in :mod:`hybridcsd.simulator`.
    """
    dims = check_dims(dims)
    g.validate(dims)
    n, m = len(dims), total_dim(dims)
    tq = g.acted_on(n)
    tdims = [dims[q] for q in tq]
    tsize = prod(tdims)
    digits = basis_digits(dims)
    local = basis_digits(tdims)
    out = np.zeros((m, m), dtype=np.complex128)
    for col in range(m):
        dj = digits[col]
        op = g.local_op(dj, dims)
        if op is None:
            out[col, col] = 1.0
            continue
        tj = ravel(dj[list(tq)], tdims)
        for ti in range(tsize):
            amp = op[ti, tj]
            if amp == 0:
                continue
            di = dj.copy()
            di[list(tq)] = local[ti]
            out[ravel(di, dims), col] = amp
    return out


@dataclass(frozen=True, eq=False)
class Circuit:
    """Gates on a register of qudits, in application order."""

    dims: Dims
    gates: tuple[Gate, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "dims", check_dims(self.dims))
        object.__setattr__(self, "gates", tuple(self.gates))

    def validate(self) -> None:
        for g in self.gates:
            g.validate(self.dims)

    @property
    def m(self) -> int:
        return total_dim(self.dims)

    def __len__(self):
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.dims == other.dims and len(self.gates) == len(other.gates) and all(
            a == b for a, b in zip(self.gates, other.gates)
        )

    __hash__ = None

    def adjoint(self) -> "Circuit":
        return Circuit(self.dims, tuple(g.adjoint() for g in reversed(self.gates)))


@dataclass(frozen=True)
class GateCounts:
    rotations: int = 0
    shifts: int = 0
    controlled_unitaries: int = 0
    single_qudit: int = 0
    multiplexers: int = 0
    uniformly_controlled: int = 0

    @property
    def total(self) -> int:
        return (
            self.rotations
            + self.shifts
            + self.controlled_unitaries
            + self.single_qudit
            + self.multiplexers
            + self.uniformly_controlled
        )

    def as_dict(self) -> dict[str, int]:
        d = dataclasses.asdict(self)
        d["total"] = self.total
        return d


_KIND = {
    ControlledGivens: "rotations",
    ShiftGate: "shifts",
    ControlledUnitary: "controlled_unitaries",
    SingleQuditGate: "single_qudit",
    Multiplexer: "multiplexers",
    UniformlyControlledGivens: "uniformly_controlled",
}


def count_gates(c: Circuit) -> GateCounts:
    tally = dict.fromkeys(_KIND.values(), 0)
    for g in c.gates:
        tally[_KIND[type(g)]] += 1
    return GateCounts(**tally)


def _check_level_args(d: int, n: int) -> None:
    if d < 2 or n < 2:
        raise ValueError(f"gate-count formulas need d >= 2 and n >= 2, got d={d}, n={n}")


def predicted_rotations(d: int, n: int) -> int:
    """One-qudit Givens rotations from one level of a ``d**n`` synthesis."""
    _check_level_args(d, n)
    return d ** (n - 1) * (2 ** (d - 1) - 1)


def predicted_shifts_per_ucg(d: int, n: int) -> int:
    """Shift gates needed to normalise the controls of one uniformly controlled rotation."""
    _check_level_args(d, n)
    return 2 * (n - 1) * (d ** (n - 1) - d ** (n - 2))


def predicted_multiplexer_gates(d: int) -> int:
    """Shift and controlled gates from all ``2**(d-1)`` multiplexers of one level."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    return d * 2**d


def predicted_level_count(d: int, n: int) -> int:
    """Worst-case one-qudit plus controlled gate count at level ``n - 1``.

    ``(2**(d-1) - 1) * [2(n-1)(d**(n-1) - d**(n-2)) + d**(n-1)] + d * 2**d``
    """
    _check_level_args(d, n)
    ucgs = 2 ** (d - 1) - 1
    return ucgs * (predicted_shifts_per_ucg(d, n) + d ** (n - 1)) + predicted_multiplexer_gates(d)
