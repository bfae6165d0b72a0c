"""Plain-text formats for matrices, circuits and states.

Matrix file::

    dims 2 3
    1,0 0,0 ...        # m lines of m entries, each ``re,im``

Circuit file::

    CIRCUIT dims=2,3
    U q=0 [re,im ...]
    SHIFT q=0 k=1
    CU q=1..2 ctrl=0 [re,im ...]
    CG q=0 plane=0,1 theta=0.3 ctrls=1:2,2:0
    UCG q=0 plane=1,2 thetas=0.1,0.2,0.3
    MUX q=0 blocks=[re,im ...];[re,im ...]

State file::

    STATE dims=2,3
    re,im              # m lines

Lines starting with ``#`` and blank lines are ignored. Floats are written
with 17 significant digits, so parsing a printed object gives it back
bit for bit. Qudit lists may be a single index, an inclusive range
``a..b`` or a comma list.
"""

from __future__ import annotations

import math
import re
from pathlib import Path
from typing import Iterable, Sequence

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
)
from .errors import FormatError, SynthesisError
from .register import check_dims, total_dim
from .simulator import StateVector


def fmt_float(x: float) -> str:
    return f"{float(x):.17g}"


def fmt_complex(z: complex) -> str:
    return f"{fmt_float(z.real)},{fmt_float(z.imag)}"


def parse_float(s: str) -> float:
    try:
        return float(s)
    except ValueError:
        raise FormatError(f"bad number {s!r}") from None


def parse_int(s: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise FormatError(f"bad integer {s!r}") from None


def parse_complex(tok: str) -> complex:
    parts = tok.split(",")
    if len(parts) != 2:
        raise FormatError(f"expected 're,im', got {tok!r}")
    return complex(parse_float(parts[0]), parse_float(parts[1]))


def _content_lines(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        s = line.strip()
        if s and not s.startswith("#"):
            out.append(s)
    return out


def _parse_dims_list(s: str) -> tuple[int, ...]:
    try:
        return check_dims(parse_int(t) for t in s.split(",") if t)
    except SynthesisError as e:
        raise FormatError(str(e)) from None


def _checked_dims(tokens: Iterable[str]) -> tuple[int, ...]:
    try:
        return check_dims(parse_int(t) for t in tokens)
    except FormatError:
        raise
    except SynthesisError as e:
        raise FormatError(str(e)) from None


# -- matrices ---------------------------------------------------------------


def format_matrix(M, dims: Sequence[int]) -> str:
    M = np.asarray(M, dtype=np.complex128)
    lines = ["dims " + " ".join(str(d) for d in dims)]
    for row in M:
        lines.append(" ".join(fmt_complex(z) for z in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> tuple[np.ndarray, tuple[int, ...]]:
    lines = _content_lines(text)
    if not lines or not lines[0].split()[0] == "dims":
        raise FormatError("matrix file must start with a 'dims' line")
    dims = _checked_dims(lines[0].split()[1:])
    m = total_dim(dims)
    rows = lines[1:]
    if len(rows) != m:
        raise FormatError(f"expected {m} matrix rows for dims {dims}, got {len(rows)}")
    M = np.empty((m, m), dtype=np.complex128)
    for i, row in enumerate(rows):
        toks = row.split()
        if len(toks) != m:
            raise FormatError(f"row {i} has {len(toks)} entries, expected {m}")
        M[i] = [parse_complex(t) for t in toks]
    return M, dims


# -- circuits ---------------------------------------------------------------


def fmt_qudits(qs: Sequence[int]) -> str:
    qs = list(qs)
    if len(qs) > 1 and qs == list(range(qs[0], qs[0] + len(qs))):
        return f"{qs[0]}..{qs[-1]}"
    return ",".join(str(q) for q in qs)


def parse_qudits(s: str) -> tuple[int, ...]:
    if ".." in s:
        a, _, b = s.partition("..")
        lo, hi = parse_int(a), parse_int(b)
        if hi < lo:
            raise FormatError(f"empty qudit range {s!r}")
        return tuple(range(lo, hi + 1))
    if not s:
        raise FormatError("empty qudit list")
    return tuple(parse_int(t) for t in s.split(","))


def _fmt_block(M) -> str:
    return "[" + " ".join(fmt_complex(z) for z in np.asarray(M).reshape(-1)) + "]"


def _parse_block(body: str) -> np.ndarray:
    vals = [parse_complex(t) for t in body.split()]
    k = math.isqrt(len(vals))
    if k * k != len(vals) or k == 0:
        raise FormatError(f"matrix with {len(vals)} entries is not square")
    return np.array(vals, dtype=np.complex128).reshape(k, k)


def format_gate(g: Gate) -> str:
    if isinstance(g, SingleQuditGate):
        return f"U q={g.target} {_fmt_block(g.matrix)}"
    if isinstance(g, ShiftGate):
        return f"SHIFT q={g.target} k={g.amount}"
    if isinstance(g, ControlledUnitary):
        return f"CU q={fmt_qudits(g.targets)} ctrl={fmt_qudits(g.controls)} {_fmt_block(g.matrix)}"
    if isinstance(g, ControlledGivens):
        ctrls = ",".join(f"{q}:{v}" for q, v in g.controls)
        return f"CG q={g.target} plane={g.plane[0]},{g.plane[1]} theta={fmt_float(g.theta)} ctrls={ctrls}"
    if isinstance(g, UniformlyControlledGivens):
        thetas = ",".join(fmt_float(t) for t in g.angles)
        return f"UCG q={g.target} plane={g.plane[0]},{g.plane[1]} thetas={thetas}"
    if isinstance(g, Multiplexer):
        return f"MUX q={fmt_qudits(g.controls)} blocks=" + ";".join(_fmt_block(b) for b in g.blocks)
    raise TypeError(f"cannot format {type(g).__name__}")


_BLOCK = re.compile(r"\[([^\[\]]*)\]")


def _split_gate_line(line: str) -> tuple[str, dict[str, str], list[str]]:
    head, sep, tail = line.partition("[")
    blocks: list[str] = []
    if sep:
        tail = "[" + tail
        blocks = _BLOCK.findall(tail)
        if _BLOCK.sub("", tail).replace(";", "").strip():
            raise FormatError(f"junk around matrix data: {line!r}")
    toks = head.split()
    if not toks:
        raise FormatError("empty gate line")
    fields = {}
    for t in toks[1:]:
        key, eq, val = t.partition("=")
        if not eq:
            raise FormatError(f"expected key=value, got {t!r}")
        fields[key] = val
    return toks[0], fields, blocks


def _need(fields: dict[str, str], *keys: str) -> list[str]:
    missing = [k for k in keys if k not in fields]
    if missing:
        raise FormatError(f"missing field(s) {', '.join(missing)}")
    return [fields[k] for k in keys]


def _plane(s: str) -> tuple[int, int]:
    p = s.split(",")
    if len(p) != 2:
        raise FormatError(f"plane must be 'i,j', got {s!r}")
    return parse_int(p[0]), parse_int(p[1])


def parse_gate(line: str) -> Gate:
    kind, f, blocks = _split_gate_line(line)
    if kind == "U":
        (q,) = _need(f, "q")
        if len(blocks) != 1:
            raise FormatError("U needs exactly one matrix")
        return SingleQuditGate(parse_int(q), _parse_block(blocks[0]))
    if kind == "SHIFT":
        q, k = _need(f, "q", "k")
        return ShiftGate(parse_int(q), parse_int(k))
    if kind == "CU":
        q, c = _need(f, "q", "ctrl")
        if len(blocks) != 1:
            raise FormatError("CU needs exactly one matrix")
        return ControlledUnitary(parse_qudits(q), parse_qudits(c), _parse_block(blocks[0]))
    if kind == "CG":
        q, plane, theta, ctrls = _need(f, "q", "plane", "theta", "ctrls")
        pairs = []
        for item in filter(None, ctrls.split(",")):
            a, colon, b = item.partition(":")
            if not colon:
                raise FormatError(f"control must be 'qudit:value', got {item!r}")
            pairs.append((parse_int(a), parse_int(b)))
        return ControlledGivens(parse_int(q), _plane(plane), parse_float(theta), tuple(pairs))
    if kind == "UCG":
        q, plane, thetas = _need(f, "q", "plane", "thetas")
        return UniformlyControlledGivens(parse_int(q), _plane(plane), [parse_float(t) for t in thetas.split(",") if t])
    if kind == "MUX":
        (q,) = _need(f, "q")
        if "blocks" not in f or not blocks:
            raise FormatError("MUX needs blocks=[...];[...]")
        return Multiplexer(parse_qudits(q), tuple(_parse_block(b) for b in blocks))
    raise FormatError(f"unknown gate kind {kind!r}")


def format_circuit(c: Circuit) -> str:
    lines = ["CIRCUIT dims=" + ",".join(str(d) for d in c.dims)]
    lines.extend(format_gate(g) for g in c.gates)
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> Circuit:
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty circuit file")
    kind, f, _ = _split_gate_line(lines[0])
    if kind != "CIRCUIT" or "dims" not in f:
        raise FormatError("circuit file must start with 'CIRCUIT dims=...'")
    dims = _parse_dims_list(f["dims"])
    gates = tuple(parse_gate(line) for line in lines[1:])
    c = Circuit(dims, gates)
    try:
        c.validate()
    except SynthesisError as e:
        raise FormatError(f"invalid circuit: {e}") from None
    return c


# -- states -----------------------------------------------------------------


def format_state(s: StateVector) -> str:
    lines = ["STATE dims=" + ",".join(str(d) for d in s.dims)]
    lines.extend(fmt_complex(z) for z in s.amplitudes)
    return "\n".join(lines) + "\n"


def parse_state(text: str) -> StateVector:
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty state file")
    kind, f, _ = _split_gate_line(lines[0])
    if kind != "STATE" or "dims" not in f:
        raise FormatError("state file must start with 'STATE dims=...'")
    dims = _parse_dims_list(f["dims"])
    m = total_dim(dims)
    if len(lines) - 1 != m:
        raise FormatError(f"expected {m} amplitudes for dims {dims}, got {len(lines) - 1}")
    return StateVector(dims, [parse_complex(t) for t in lines[1:]])


def read_text(path: str | Path) -> str:
    return Path(path).read_text()


def write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text)
