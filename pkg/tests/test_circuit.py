import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybridcsd.circuit import (
    Circuit,
    ControlledGivens,
    ControlledUnitary,
    GateCounts,
    Multiplexer,
    ShiftGate,
    SingleQuditGate,
    UniformlyControlledGivens,
    count_gates,
    gate_unitary,
    givens,
    predicted_level_count,
    predicted_multiplexer_gates,
    predicted_rotations,
    predicted_shifts_per_ucg,
)
from hybridcsd.decomposition import permutation_matrix, reorder_to_control, synthesize
from hybridcsd.errors import GateValidationError
from hybridcsd.linalg import block_diag, is_unitary, random_unitary
from hybridcsd.lowering import lower_circuit, lower_multiplexer

from conftest import haar
from strategies import gates, registers


def ry(t):
    return np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])


class TestGateUnitary:
    def test_binary_inverter(self):
        assert np.array_equal(gate_unitary(ShiftGate(0, 1), (2,)), [[0, 1], [1, 0]])

    def test_shift_direction(self):
        X = gate_unitary(ShiftGate(0, 1), (3,))
        assert X[1, 0] == 1 and X[2, 1] == 1 and X[0, 2] == 1

    def test_uniformly_controlled_ry(self):
        th = [0.1, 0.7, -0.4, 1.3]
        G = gate_unitary(UniformlyControlledGivens(0, (0, 1), th), (2, 2, 2))
        proj = [np.diag(np.eye(4)[k]) for k in range(4)]
        want = sum(np.kron(ry(t), p) for t, p in zip(th, proj))
        assert np.allclose(G, want, atol=1e-15)
        # control state |00> selects theta_0; |11> selects theta_3
        assert G[0, 0] == pytest.approx(np.cos(th[0])) and G[4, 0] == pytest.approx(np.sin(th[0]))
        assert G[3, 7] == pytest.approx(-np.sin(th[3]))

    def test_ternary_rotation_planes(self):
        t = 0.4
        rx = [[1, 0, 0], [0, np.cos(t), -np.sin(t)], [0, np.sin(t), np.cos(t)]]
        rz = [[np.cos(t), -np.sin(t), 0], [np.sin(t), np.cos(t), 0], [0, 0, 1]]
        assert np.allclose(givens(3, (1, 2), t), rx)
        assert np.allclose(givens(3, (0, 1), t), rz)

    def test_identity_multiplexer(self):
        I3 = np.eye(3)
        assert np.array_equal(gate_unitary(Multiplexer(0, (I3, I3)), (2, 3)), np.eye(6))

    def test_multiplexer_is_block_diag_after_reorder(self):
        dims = (3, 2)
        blocks = (random_unitary(3, 1), random_unitary(3, 2))
        G = gate_unitary(Multiplexer(1, blocks), dims)
        perm, _ = reorder_to_control(dims, 1)
        P = permutation_matrix(perm)
        assert np.allclose(P @ G @ P.T, block_diag(blocks), atol=1e-15)
        top = gate_unitary(Multiplexer(0, blocks), (2, 3))
        assert np.array_equal(top, block_diag(blocks))

    def test_controlled_unitary_triggers_on_top_value(self):
        U = random_unitary(2, 3)
        G = gate_unitary(ControlledUnitary((1,), (0,), U), (3, 2))
        assert np.array_equal(G, block_diag([np.eye(2), np.eye(2), U]))

    def test_controlled_givens(self):
        G = gate_unitary(ControlledGivens(1, (0, 2), 0.5, ((0, 0),)), (2, 3))
        assert np.allclose(G, block_diag([givens(3, (0, 2), 0.5), np.eye(3)]))

    @settings(max_examples=80, deadline=None)
    @given(data=st.data())
    def test_every_gate_is_unitary(self, data):
        dims = data.draw(registers())
        g = data.draw(gates(dims))
        assert is_unitary(gate_unitary(g, dims), 1e-10)
        assert np.allclose(gate_unitary(g.adjoint(), dims), gate_unitary(g, dims).conj().T, atol=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(d=st.integers(2, 6), k1=st.integers(-8, 8), k2=st.integers(-8, 8))
    def test_shift_group_law(self, d, k1, k2):
        dims = (d, 2)
        lhs = gate_unitary(ShiftGate(0, k1), dims) @ gate_unitary(ShiftGate(0, k2), dims)
        assert np.array_equal(lhs, gate_unitary(ShiftGate(0, (k1 + k2) % d), dims))


class TestValidation:
    def test_bad_plane(self):
        with pytest.raises(GateValidationError):
            gate_unitary(UniformlyControlledGivens(0, (1, 1), [0, 0]), (2, 2))

    def test_angle_count(self):
        with pytest.raises(GateValidationError):
            gate_unitary(UniformlyControlledGivens(0, (0, 1), [0, 0, 0]), (2, 2))

    def test_repeated_qudit(self):
        with pytest.raises(GateValidationError):
            gate_unitary(ControlledGivens(0, (0, 1), 0.1, ((0, 1),)), (2, 2))

    def test_not_unitary_block(self):
        with pytest.raises(GateValidationError):
            gate_unitary(SingleQuditGate(0, np.diag([1, 2])), (2,))

    def test_block_count(self):
        with pytest.raises(GateValidationError):
            gate_unitary(Multiplexer(0, (np.eye(2),) * 2), (3, 2))

    def test_out_of_range(self):
        with pytest.raises(GateValidationError):
            gate_unitary(ShiftGate(2, 1), (2, 2))

    def test_control_value_range(self):
        with pytest.raises(GateValidationError):
            gate_unitary(ControlledGivens(0, (0, 1), 0.1, ((1, 2),)), (2, 2))


class TestCounts:
    def test_empty(self):
        counts = count_gates(Circuit((2, 3)))
        assert counts == GateCounts() and counts.total == 0

    def test_binary_multiplexer_lowering(self):
        g = Multiplexer(0, (random_unitary(2, 0), random_unitary(2, 1)))
        counts = count_gates(Circuit((2, 2), lower_multiplexer(g, (2, 2))))
        assert counts.shifts == 2 and counts.controlled_unitaries == 2 and counts.total == 4

    def test_lowered_ternary_rotations(self):
        c = lower_circuit(synthesize(haar((3, 3), 0), (3, 3)))
        assert count_gates(c).rotations == 3 ** (2 - 1) * (2 ** (3 - 1) - 1) == 9

    def test_total_is_sum(self):
        c = synthesize(haar((2, 3), 1), (2, 3))
        d = count_gates(c).as_dict()
        assert d.pop("total") == sum(d.values())


class TestPredictedCount:
    @pytest.mark.parametrize(
        "d, n, want",
        [
            (2, 2, (2**1 - 1) * (2 * 1 * (2**1 - 2**0) + 2**1) + 2 * 2**2),
            (3, 2, (2**2 - 1) * (2 * 1 * (3**1 - 3**0) + 3**1) + 3 * 2**3),
            (2, 3, (2**1 - 1) * (2 * 2 * (2**2 - 2**1) + 2**2) + 2 * 2**2),
        ],
    )
    def test_formula(self, d, n, want):
        assert predicted_level_count(d, n) == want

    def test_values(self):
        assert predicted_level_count(2, 2) == 12
        assert predicted_level_count(3, 2) == 45 == 3 * (3 + 4) + 4 * 6
        assert predicted_level_count(2, 3) == 20

    def test_components(self):
        d, n = 3, 2
        total = (2 ** (d - 1) - 1) * predicted_shifts_per_ucg(d, n) + predicted_rotations(d, n)
        assert total + predicted_multiplexer_gates(d) == predicted_level_count(d, n)

    @pytest.mark.parametrize("d, n", [(1, 2), (2, 1), (0, 0)])
    def test_domain(self, d, n):
        with pytest.raises(ValueError):
            predicted_level_count(d, n)
