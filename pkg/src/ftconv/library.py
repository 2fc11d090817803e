"""Builtin codes and the plain-text code file format.

Code file::

    # comment
    5 1
    XZZXI
    IXZZX
    XIXZZ
    -ZXIXZ

Header ``n k`` then ``n - k`` signed Pauli strings. Blank lines and anything
after ``#`` are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

from .codes import StabilizerCode
from .pauli import PauliOperator


class CodeParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def parse_code(text: str) -> StabilizerCode:
    header = None
    ops: list[PauliOperator] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        col = raw.index(line[0]) + 1
        if header is None:
            parts = line.split()
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise CodeParseError("expected header 'n k'", lineno, col)
            header = (int(parts[0]), int(parts[1]))
            if header[1] > header[0]:
                raise CodeParseError("k exceeds n", lineno, col)
            continue
        body = line[1:] if line[0] in "+-" else line
        for i, ch in enumerate(body.upper()):
            if ch not in "IXYZ":
                raise CodeParseError(f"invalid Pauli letter {ch!r}", lineno, col + i + (len(line) - len(body)))
        if len(body) != header[0]:
            raise CodeParseError(f"expected {header[0]} letters, got {len(body)}", lineno, col)
        ops.append(PauliOperator.from_string(line))
    if header is None:
        raise CodeParseError("empty code file", 1)
    n, k = header
    if len(ops) != n - k:
        raise CodeParseError(f"expected {n - k} generators, got {len(ops)}", lineno if ops else 1)
    return StabilizerCode.from_paulis(ops, n)


def format_code(code: StabilizerCode) -> str:
    lines = [f"{code.n} {code.k}"]
    for p in code.paulis():
        s = str(p)
        lines.append(s[1:] if s[0] == "+" else s)
    return "\n".join(lines) + "\n"


def load_code(path: str | Path) -> StabilizerCode:
    return parse_code(Path(path).read_text())


# --------------------------------------------------------------------------
# builtin codes


def five_qubit_code() -> StabilizerCode:
    return StabilizerCode.from_paulis(["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"])


def _css(hx: np.ndarray, hz: np.ndarray) -> StabilizerCode:
    n = hx.shape[1]
    bits = np.zeros((hx.shape[0] + hz.shape[0], 2 * n), np.uint8)
    bits[: hx.shape[0], :n] = hx
    bits[hx.shape[0] :, n:] = hz
    return StabilizerCode(n, bits)


def hamming_parity_check(r: int = 3) -> np.ndarray:
    """Column j (1-based) is the binary expansion of j, most significant bit first."""
    n = 2**r - 1
    return np.array([[(j >> (r - 1 - b)) & 1 for j in range(1, n + 1)] for b in range(r)], np.uint8)


def steane_code() -> StabilizerCode:
    h = hamming_parity_check(3)
    return _css(h, h)


def reed_muller_generator(r: int, m: int) -> np.ndarray:
    """Generator matrix of RM(r, m): monomials of degree <= r evaluated on F_2^m.

    Rows are degree-graded and lexicographic within a degree; columns are the
    evaluation points 0..2^m - 1 with variable x_1 as the most significant bit.
    """
    points = [[(p >> (m - 1 - b)) & 1 for b in range(m)] for p in range(2**m)]
    rows = []
    for deg in range(r + 1):
        for mono in combinations(range(m), deg):
            rows.append([int(all(pt[v] for v in mono)) for pt in points])
    return np.array(rows, dtype=np.uint8)


def build_reed_muller_15() -> StabilizerCode:
    """[[15,1,3]] code from punctured RM(1,4) (X checks) and RM(2,4) (Z checks)."""
    gx = reed_muller_generator(1, 4)[1:, 1:]
    gz = reed_muller_generator(2, 4)[1:, 1:]
    return _css(gx, gz)


def qpc_code(blocks: int = 3, size: int = 4) -> StabilizerCode:
    """(blocks, size) quantum parity check code: ZZ inside blocks, X on block pairs."""
    n = blocks * size
    ops = []
    for b in range(blocks):
        for j in range(size - 1):
            s = ["I"] * n
            s[b * size + j] = s[b * size + j + 1] = "Z"
            ops.append("".join(s))
    for b in range(blocks - 1):
        s = ["I"] * n
        for q in range(b * size, (b + 2) * size):
            s[q] = "X"
        ops.append("".join(s))
    return StabilizerCode.from_paulis(ops)


@dataclass(frozen=True)
class CodeLibraryEntry:
    name: str
    build: object
    note: str

    @property
    def code(self) -> StabilizerCode:
        return self.build()


LIBRARY = {
    e.name: e
    for e in [
        CodeLibraryEntry("five-qubit", five_qubit_code, "[[5,1,3]] cyclic code, generators XZZXI and shifts"),
        CodeLibraryEntry("steane", steane_code, "[[7,1,3]] CSS code on the [7,4] Hamming parity checks"),
        CodeLibraryEntry("rm15", build_reed_muller_15, "[[15,1,3]] punctured RM(1,4)/RM(2,4) CSS code"),
        CodeLibraryEntry("qpc34", qpc_code, "(3,4) quantum parity check code, [[12,1,3]]"),
    ]
}


def get_code(spec: str) -> StabilizerCode:
    """Resolve ``builtin:NAME``, a bare builtin name, or a code file path."""
    name = spec.removeprefix("builtin:")
    if name in LIBRARY:
        return LIBRARY[name].code
    if spec.startswith("builtin:"):
        raise KeyError(f"unknown builtin code {name!r}; have {', '.join(LIBRARY)}")
    return load_code(spec)
