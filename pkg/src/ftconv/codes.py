"""Stabilizer codes as GF(2) tableaux: standard form, IABC form, logicals.

A code on ``n`` qubits is an ``(n-k) x 2n`` bit matrix ``[G_X | G_Z]`` plus a
sign bit per generator (0 for +1, 1 for -1). Columns are 0-based internally.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import NamedTuple

import numpy as np

from . import _kernels as K
from .pauli import (
    CNOT,
    CZ,
    SWAP,
    CliffordGate,
    DimensionError,
    H,
    PauliOperator,
    apply_gate_rows,
    multiply,
)


class LayoutError(RuntimeError):
    """A code cannot be brought into the requested block layout."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.uint8)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StabilizerCode:
    n: int
    generators: np.ndarray
    sign_bits: np.ndarray = field(default=None)

    def __post_init__(self):
        g = np.asarray(self.generators, dtype=np.uint8).reshape(-1, 2 * self.n)
        if g.size and g.max() > 1:
            raise ValueError("generator entries must be 0 or 1")
        s = np.zeros(g.shape[0], np.uint8) if self.sign_bits is None else self.sign_bits
        s = np.asarray(s, dtype=np.uint8)
        if s.shape != (g.shape[0],):
            raise ValueError("one sign per generator")
        object.__setattr__(self, "generators", _readonly(g))
        object.__setattr__(self, "sign_bits", _readonly(s))

    @classmethod
    def from_paulis(cls, ops: Sequence[PauliOperator | str], n: int | None = None) -> StabilizerCode:
        ops = [PauliOperator.from_string(o) if isinstance(o, str) else o for o in ops]
        if n is None:
            if not ops:
                raise ValueError("qubit count needed for an empty generator list")
            n = ops[0].n
        if any(o.n != n for o in ops):
            raise DimensionError("generators act on different qubit counts")
        bits = np.array([o.to_bits() for o in ops], dtype=np.uint8).reshape(-1, 2 * n)
        signs = np.array([0 if o.sign > 0 else 1 for o in ops], dtype=np.uint8)
        return cls(n, bits, signs)

    @property
    def k(self) -> int:
        return self.n - self.generators.shape[0]

    @property
    def num_generators(self) -> int:
        return self.generators.shape[0]

    @property
    def gx(self) -> np.ndarray:
        return self.generators[:, : self.n]

    @property
    def gz(self) -> np.ndarray:
        return self.generators[:, self.n :]

    @property
    def signs(self) -> list[int]:
        return [-1 if b else 1 for b in self.sign_bits]

    def generator(self, i: int) -> PauliOperator:
        return PauliOperator.from_bits(self.generators[i], -1 if self.sign_bits[i] else 1)

    def paulis(self) -> list[PauliOperator]:
        return [self.generator(i) for i in range(self.num_generators)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, StabilizerCode):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.generators, other.generators)
            and np.array_equal(self.sign_bits, other.sign_bits)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.generators.tobytes(), self.sign_bits.tobytes()))

    def __repr__(self) -> str:
        return f"StabilizerCode(n={self.n}, k={self.k}, [{', '.join(map(str, self.paulis()))}])"


# --------------------------------------------------------------------------
# tableau helpers


def _row_mul(bits: np.ndarray, signs: np.ndarray, dst: int, src: int, n: int) -> None:
    """Replace generator ``dst`` by ``dst * src`` (they commute, so exactly)."""
    u = PauliOperator.from_bits(bits[dst], -1 if signs[dst] else 1)
    v = PauliOperator.from_bits(bits[src], -1 if signs[src] else 1)
    signs[dst] = 0 if multiply(u, v).sign > 0 else 1
    bits[dst] ^= bits[src]


def _swap_rows(bits: np.ndarray, signs: np.ndarray, a: int, b: int) -> None:
    if a != b:
        bits[[a, b]] = bits[[b, a]]
        signs[[a, b]] = signs[[b, a]]


def apply_gates(code: StabilizerCode, gates: Iterable[CliffordGate]) -> StabilizerCode:
    """Conjugate every generator by each gate in order."""
    bits = code.generators.copy()
    signs = code.sign_bits.copy()
    for g in gates:
        apply_gate_rows(bits, signs, g, code.n)
    return StabilizerCode(code.n, bits, signs)


def canonical(code: StabilizerCode) -> StabilizerCode:
    """Row-reduced generators with signs carried through the row products."""
    bits = code.generators.copy()
    signs = code.sign_bits.copy()
    rows, cols = bits.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.nonzero(bits[r:, c])[0]
        if hits.size == 0:
            continue
        _swap_rows(bits, signs, r, r + int(hits[0]))
        for i in range(rows):
            if i != r and bits[i, c]:
                _row_mul(bits, signs, i, r, code.n)
        r += 1
    return StabilizerCode(code.n, bits[:r], signs[:r])


def same_group(a: StabilizerCode, b: StabilizerCode, strict: bool = False) -> bool:
    """Equal stabilizer groups; ``strict`` also demands equal signs."""
    if a.n != b.n:
        return False
    ca, cb = canonical(a), canonical(b)
    if not np.array_equal(ca.generators, cb.generators):
        return False
    return not strict or np.array_equal(ca.sign_bits, cb.sign_bits)


# --------------------------------------------------------------------------
# validation


@dataclass
class Validation:
    ok: bool
    rank_deficient: bool = False
    anticommuting: list[tuple[int, int]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok

    def messages(self) -> list[str]:
        out = []
        if self.rank_deficient:
            out.append("generators are not independent (rank deficient)")
        out += [f"rows ({i + 1},{j + 1}) anti-commute" for i, j in self.anticommuting]
        return out


def validate(code: StabilizerCode) -> Validation:
    g = code.generators
    comm = K.syndromes(g, g, code.n)
    bad = [(int(i), int(j)) for i, j in zip(*np.nonzero(np.triu(comm, 1)))]
    deficient = K.rank(g) < g.shape[0]
    return Validation(not bad and not deficient, deficient, bad)


# --------------------------------------------------------------------------
# standard form


@dataclass(frozen=True, eq=False)
class StandardForm:
    """Generators laid out as

        [ I A1 A2 | B O C ]   r rows
        [ O O  O  | D I E ]   n-k-r rows

    on the qubit order reached by ``swaps``.
    """

    base: StabilizerCode
    r: int
    swaps: tuple[CliffordGate, ...]

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def k(self) -> int:
        return self.base.k

    def _blocks(self):
        n, k, r = self.n, self.k, self.r
        return self.base.gx, self.base.gz, n, k, r

    @property
    def A1(self):
        X, _, n, k, r = self._blocks()
        return X[:r, r : n - k]

    @property
    def A2(self):
        X, _, n, k, r = self._blocks()
        return X[:r, n - k :]

    @property
    def B(self):
        _, Z, n, k, r = self._blocks()
        return Z[:r, :r]

    @property
    def C(self):
        _, Z, n, k, r = self._blocks()
        return Z[:r, n - k :]

    @property
    def D(self):
        _, Z, n, k, r = self._blocks()
        return Z[r:, :r]

    @property
    def E(self):
        _, Z, n, k, r = self._blocks()
        return Z[r:, n - k :]


def _pivot_pass(bits, signs, n, row, col, col_end, offset, swaps):
    """Eliminate one pivot at (row, col) in the X (offset 0) or Z (offset n) half.

    Swaps in the first later qubit column that has a 1 among the unused rows
    when ``col`` has none. Returns False if no column up to ``col_end`` works.
    """
    m = bits.shape[0]
    hits = np.nonzero(bits[row:, offset + col])[0]
    if hits.size == 0:
        cand = [c for c in range(col + 1, col_end) if bits[row:, offset + c].any()]
        if not cand:
            return False
        other = cand[0]
        for off in (0, n):
            bits[:, [off + col, off + other]] = bits[:, [off + other, off + col]]
        swaps.append(SWAP(col, other))
        hits = np.nonzero(bits[row:, offset + col])[0]
    _swap_rows(bits, signs, row, row + int(hits[0]))
    for i in range(m):
        if i != row and bits[i, offset + col]:
            _row_mul(bits, signs, i, row, n)
    return True


def to_standard_form(code: StabilizerCode) -> StandardForm:
    """Gaussian elimination with qubit swaps only where no pivot exists."""
    n, m = code.n, code.num_generators
    bits = code.generators.copy()
    signs = code.sign_bits.copy()
    swaps: list[CliffordGate] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        if not _pivot_pass(bits, signs, n, row, col, n, 0, swaps):
            break
        row += 1
    r = row
    for col in range(r, m):
        if not _pivot_pass(bits, signs, n, row, col, n, n, swaps):
            raise LayoutError("Z block has no pivot; generators are not independent")
        row += 1
    return StandardForm(StabilizerCode(n, bits, signs), r, tuple(swaps))


def logical_operators(sf: StandardForm) -> tuple[list[PauliOperator], list[PauliOperator]]:
    """Logical X and Z operators in the qubit order of ``sf.base``."""
    n, k, r = sf.n, sf.k, sf.r
    xs, zs = [], []
    E, C, A2 = sf.E, sf.C, sf.A2
    for i in range(k):
        bx = np.zeros(2 * n, np.uint8)
        bx[r : n - k] = E[:, i]
        bx[n - k + i] = 1
        bx[n : n + r] = C[:, i]
        bz = np.zeros(2 * n, np.uint8)
        bz[n : n + r] = A2[:, i]
        bz[n + n - k + i] = 1
        xs.append(PauliOperator.from_bits(bx))
        zs.append(PauliOperator.from_bits(bz))
    return xs, zs


def code_logicals(code: StabilizerCode) -> tuple[list[PauliOperator], list[PauliOperator]]:
    """Logical operators mapped back onto the original qubit order of ``code``."""
    sf = to_standard_form(code)
    xs, zs = logical_operators(sf)
    undo = list(reversed(sf.swaps))
    from .pauli import conjugate_all

    return [conjugate_all(undo, p) for p in xs], [conjugate_all(undo, p) for p in zs]


# --------------------------------------------------------------------------
# IABC form


@dataclass(frozen=True, eq=False)
class IabcForm:
    """Generators ``[I A | B C]`` plus the gate record that produced them.

    ``code`` acts on ``n + ancillas`` qubits; the identity block has size
    ``N - k``. For augmented codes ``delta`` and ``theta`` are the Z blocks of
    the data and ancilla rows over the ancilla columns.
    """

    code: StabilizerCode
    k: int
    u_record: tuple[CliffordGate, ...]
    r: int
    ancillas: int = 0

    @property
    def N(self) -> int:
        return self.code.n

    @property
    def R(self) -> int:
        return self.code.n - self.k

    @property
    def A(self) -> np.ndarray:
        return self.code.gx[:, self.R :]

    @property
    def B(self) -> np.ndarray:
        return self.code.gz[:, : self.R]

    @property
    def C(self) -> np.ndarray:
        return self.code.gz[:, self.R :]

    @property
    def delta(self) -> np.ndarray:
        lo = self.R - self.ancillas
        return self.code.gz[:lo, lo : self.R]

    @property
    def theta(self) -> np.ndarray:
        lo = self.R - self.ancillas
        return self.code.gz[lo:, lo : self.R]

    def symplectic_residual(self) -> np.ndarray:
        """``B^T + A C^T + B + C A^T`` mod 2; all-zero for a valid form."""
        A, B, C = (x.astype(np.int64) for x in (self.A, self.B, self.C))
        return ((B.T + A @ C.T + B + C @ A.T) & 1).astype(np.uint8)


def _check_iabc(code: StabilizerCode, k: int) -> None:
    R = code.n - k
    if code.num_generators != R or not np.array_equal(code.gx[:, :R], np.eye(R, dtype=np.uint8)):
        raise LayoutError("X part does not start with a full identity block")


def to_iabc(sf: StandardForm) -> IabcForm:
    n, k, r = sf.n, sf.k, sf.r
    hs = [H(q) for q in range(r, n - k)]
    code = apply_gates(sf.base, hs)
    _check_iabc(code, k)
    return IabcForm(code, k, tuple(sf.swaps) + tuple(hs), r)


def augment(code: StabilizerCode, m: int) -> StabilizerCode:
    """``code`` tensored with m |+> ancillas appended as the last qubits."""
    if m < 0:
        raise ValueError("ancilla count must be non-negative")
    n, rows = code.n, code.num_generators
    N = n + m
    bits = np.zeros((rows + m, 2 * N), np.uint8)
    bits[:rows, :n] = code.gx
    bits[:rows, N : N + n] = code.gz
    for t in range(m):
        bits[rows + t, n + t] = 1
    signs = np.concatenate([code.sign_bits, np.zeros(m, np.uint8)])
    return StabilizerCode(N, bits, signs)


def augmented_iabc(code: StabilizerCode, m: int) -> IabcForm:
    """IABC form of ``code`` with m |+> ancillas.

    The ancillas start as the last m qubits. Each logical column is bubbled
    past them with adjacent swaps, then every ancilla row gets its logical
    entries filled by CNOT(ancilla, logical) and CZ(ancilla, logical).
    """
    base = to_iabc(to_standard_form(code))
    n, k = code.n, code.k
    N = n + m
    gates = list(base.u_record)
    moves: list[CliffordGate] = []
    for j in reversed(range(k)):
        pos = n - k + j
        for t in range(m):
            moves.append(SWAP(pos + t, pos + t + 1))
    anc = range(n - k, n - k + m)
    logical = range(N - k, N)
    fills = [CNOT(i, j) for j in logical for i in anc]
    fills += [CZ(i, j) for j in logical for i in anc]
    out = apply_gates(augment(base.code, m), moves + fills)
    _check_iabc(out, k)
    return IabcForm(out, k, tuple(gates + moves + fills), base.r, m)


# --------------------------------------------------------------------------
# syndromes and group membership


def syndrome(code: StabilizerCode, e: PauliOperator) -> np.ndarray:
    if e.n != code.n:
        raise DimensionError(f"error on {e.n} qubits, code on {code.n}")
    return K.syndromes(code.generators, e.to_bits()[None, :], code.n)[0]


def syndrome_signs(code: StabilizerCode, e: PauliOperator) -> tuple[int, ...]:
    """Syndrome in measurement-outcome notation: +1 commute, -1 anti-commute."""
    return tuple(-1 if b else 1 for b in syndrome(code, e))


def _combination(code: StabilizerCode, vec: np.ndarray) -> np.ndarray | None:
    """Which generators multiply to ``vec`` (as bits), or None if none do."""
    m = code.num_generators
    aug = np.hstack([code.generators, np.eye(m, dtype=np.uint8)])
    red, piv = K.rref(aug)
    width = code.generators.shape[1]
    v = np.concatenate([vec, np.zeros(m, np.uint8)])
    for i, c in enumerate(piv):
        if c >= width:
            break
        if v[c]:
            v ^= red[i]
    if v[:width].any():
        return None
    return v[width:]


class Membership(NamedTuple):
    kind: str  # "stabilizer" | "logical" | "detectable"
    sign: int | None = None  # for stabilizer elements: +1 if p in S, -1 if -p in S


def in_group(code: StabilizerCode, p: PauliOperator) -> Membership:
    if p.n != code.n:
        raise DimensionError(f"operator on {p.n} qubits, code on {code.n}")
    if syndrome(code, p).any():
        return Membership("detectable")
    combo = _combination(code, p.to_bits())
    if combo is None:
        return Membership("logical")
    prod = PauliOperator.identity(code.n)
    for i in np.flatnonzero(combo):
        prod = multiply(prod, code.generator(int(i)))
    return Membership("stabilizer", p.sign * prod.sign)


@lru_cache(maxsize=32)
def low_weight_errors(n: int, max_weight: int = 2) -> np.ndarray:
    """All Paulis of weight 1..max_weight as bit rows, lightest first."""
    rows = []
    for w in range(1, max_weight + 1):
        for qs in combinations(range(n), w):
            for kinds in np.ndindex(*(3,) * w):
                row = np.zeros(2 * n, np.uint8)
                for q, kind in zip(qs, kinds):
                    # kind 0: X, 1: Z, 2: Y
                    row[q] = kind != 1
                    row[n + q] = kind != 0
                rows.append(row)
    out = np.array(rows, dtype=np.uint8).reshape(-1, 2 * n)
    out.setflags(write=False)
    return out


class DistanceCheck(NamedTuple):
    ok: bool
    witness: PauliOperator | None = None

    def __bool__(self) -> bool:
        return self.ok


def low_weight_logical(gens: np.ndarray, n: int, max_weight: int = 2) -> np.ndarray | None:
    """First undetectable non-stabilizer Pauli of weight <= max_weight, as bits."""
    errs = low_weight_errors(n, max_weight)
    syn = K.syndromes(gens, errs, n)
    quiet = errs[~syn.any(axis=1)]
    if quiet.shape[0] == 0:
        return None
    red, piv = K.rref(gens)
    res = K.residuals(red, piv, quiet)
    bad = np.flatnonzero(res.any(axis=1))
    return quiet[bad[0]] if bad.size else None


def distance_at_least_3(code: StabilizerCode) -> DistanceCheck:
    """True unless some weight-1 or weight-2 Pauli is a logical operator."""
    w = low_weight_logical(code.generators, code.n)
    if w is None:
        return DistanceCheck(True)
    return DistanceCheck(False, PauliOperator.from_bits(w))
