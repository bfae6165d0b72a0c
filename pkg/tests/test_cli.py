import numpy as np
import pytest

from hybridcsd.cli import main, prime_dims
from hybridcsd.textio import format_circuit, format_matrix, format_state, parse_circuit, parse_state
from hybridcsd.circuit import Circuit, ShiftGate
from hybridcsd.linalg import random_unitary
from hybridcsd.simulator import StateVector


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err

    return _run


def test_prime_dims():
    assert prime_dims(9) == (3, 3) and prime_dims(12) == (2, 2, 3) and prime_dims(7) == (7,)


def test_random_emits_matrix(run, tmp_path):
    code, out, _ = run("random", 6, 3)
    assert code == 0 and out.startswith("dims 2 3\n")
    code, _, _ = run("random", 8, 3, "--dims", 4, 2, "-o", tmp_path / "w.txt")
    assert code == 0 and (tmp_path / "w.txt").read_text().startswith("dims 4 2\n")
    assert run("random", 8, 3, "--dims", 3, 2)[0] == 2


def test_synth_identity(run, tmp_path):
    (tmp_path / "i.txt").write_text(format_matrix(np.eye(6), (2, 3)))
    code, _, err = run("synth", tmp_path / "i.txt", "-o", tmp_path / "c.txt")
    assert code == 0
    assert "residual 0 " in err
    c = parse_circuit((tmp_path / "c.txt").read_text())
    assert c.dims == (2, 3) and len(c) == 3


def test_synth_random_and_verify(run, tmp_path):
    run("random", 9, 7, "-o", tmp_path / "w.txt")
    code, _, err = run("synth", tmp_path / "w.txt", "-o", tmp_path / "c.txt")
    assert code == 0
    residual = float(err.split()[1])
    assert residual <= 9e-9
    code, out, _ = run("verify", tmp_path / "w.txt", tmp_path / "c.txt")
    assert code == 0 and "OK" in out


def test_synth_not_unitary(run, tmp_path):
    (tmp_path / "bad.txt").write_text(format_matrix(np.diag([1, 1, 1, 2.0]), (2, 2)))
    code, _, err = run("synth", tmp_path / "bad.txt")
    assert code == 3 and "not unitary" in err


def test_synth_parse_error(run, tmp_path):
    (tmp_path / "bad.txt").write_text("dims 2\n1,0\n")
    assert run("synth", tmp_path / "bad.txt")[0] == 2
    assert run("synth", tmp_path / "missing.txt")[0] == 2


def test_synth_flags(run, tmp_path):
    run("random", 8, 1, "-o", tmp_path / "w.txt")
    for flags in (["--lower"], ["--lower", "--peephole"], ["--prune"], ["--control", 2], ["--levels", 1]):
        code, _, _ = run("synth", tmp_path / "w.txt", "-o", tmp_path / "c.txt", *flags)
        assert code == 0, flags
        assert run("verify", tmp_path / "w.txt", tmp_path / "c.txt")[0] == 0
    assert run("synth", tmp_path / "w.txt", "--control", 5)[0] == 2
    assert run("synth", tmp_path / "w.txt", "--tol", -1)[0] == 4


def test_verify_perturbed(run, tmp_path):
    run("random", 6, 2, "-o", tmp_path / "w.txt")
    run("synth", tmp_path / "w.txt", "-o", tmp_path / "c.txt")
    text = (tmp_path / "c.txt").read_text() + "SHIFT q=0 k=1\n"
    (tmp_path / "c2.txt").write_text(text)
    code, out, _ = run("verify", tmp_path / "w.txt", tmp_path / "c2.txt")
    assert code == 4 and float(out.split()[1]) > 0


def test_verify_empty_vs_identity(run, tmp_path):
    (tmp_path / "i.txt").write_text(format_matrix(np.eye(4), (2, 2)))
    (tmp_path / "c.txt").write_text(format_circuit(Circuit((2, 2))))
    code, out, _ = run("verify", tmp_path / "i.txt", tmp_path / "c.txt")
    assert code == 0 and out.splitlines()[0] == "residual 0"


def test_verify_dims_mismatch(run, tmp_path):
    (tmp_path / "i.txt").write_text(format_matrix(np.eye(4), (4,)))
    (tmp_path / "c.txt").write_text(format_circuit(Circuit((2, 2))))
    assert run("verify", tmp_path / "i.txt", tmp_path / "c.txt")[0] == 2


def test_count(run, tmp_path):
    assert run("count", "--predict", 3, 2)[1].strip() == "45"
    assert run("count", "--predict", 2, 2)[1].strip() == "12"
    assert run("count", "--predict", 1, 2)[0] == 2
    assert run("count")[0] == 2
    run("random", 9, 4, "-o", tmp_path / "w.txt")
    run("synth", tmp_path / "w.txt", "--lower", "-o", tmp_path / "c.txt")
    code, out, _ = run("count", tmp_path / "c.txt")
    counts = dict(line.split() for line in out.splitlines())
    assert code == 0 and counts["total"] == "45" and counts["rotations"] == "9"


def test_simulate(run, tmp_path):
    (tmp_path / "c.txt").write_text(format_circuit(Circuit((2,), (ShiftGate(0, 1),))))
    (tmp_path / "s.txt").write_text(format_state(StateVector.basis((2,), 0)))
    code, out, _ = run("simulate", tmp_path / "c.txt", tmp_path / "s.txt")
    assert code == 0 and parse_state(out) == StateVector.basis((2,), 1)

    (tmp_path / "e.txt").write_text(format_circuit(Circuit((2,))))
    s = StateVector((2,), [0.6, 0.8j])
    (tmp_path / "s2.txt").write_text(format_state(s))
    assert parse_state(run("simulate", tmp_path / "e.txt", tmp_path / "s2.txt")[1]) == s

    (tmp_path / "bad.txt").write_text("STATE dims=2\n1,0\n1,0\n")
    assert run("simulate", tmp_path / "c.txt", tmp_path / "bad.txt")[0] == 3


def test_simulate_synthesized(run, tmp_path):
    W = random_unitary(6, 5)
    (tmp_path / "w.txt").write_text(format_matrix(W, (2, 3)))
    run("synth", tmp_path / "w.txt", "-o", tmp_path / "c.txt")
    (tmp_path / "s.txt").write_text(format_state(StateVector.basis((2, 3), 0)))
    run("simulate", tmp_path / "c.txt", tmp_path / "s.txt", "-o", tmp_path / "out.txt")
    out = parse_state((tmp_path / "out.txt").read_text())
    assert np.linalg.norm(out.amplitudes - W[:, 0]) <= 1e-9


def test_lower_subcommand(run, tmp_path):
    run("random", 4, 0, "-o", tmp_path / "w.txt")
    run("synth", tmp_path / "w.txt", "-o", tmp_path / "c.txt")
    code, out, _ = run("lower", tmp_path / "c.txt")
    assert code == 0 and len(parse_circuit(out)) == 12
    (tmp_path / "l.txt").write_text(out)
    assert run("verify", tmp_path / "w.txt", tmp_path / "l.txt")[0] == 0
