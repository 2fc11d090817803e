"""Pauli operators in binary symplectic form and Clifford conjugation.

A Pauli on ``n`` qubits is a pair of bit-packed ints ``(x, z)`` plus a sign,
with bit ``i`` addressing qubit ``i`` (0-based). The per-qubit encoding is
I=(0|0), X=(1|0), Z=(0|1), Y=(1|1), where (1|1) stands for the Hermitian Y,
so ``sign * P`` is always Hermitian. Phases of i are never stored.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

GATE_KINDS = ("H", "P", "CNOT", "CZ", "SWAP")
PHASES = ("U_source", "A_diff", "C_diff", "B_diff", "U_target_inverse")


class DimensionError(ValueError):
    """Operands act on different numbers of qubits, or an index is out of range."""


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliOperator:
    n: int
    x: int = 0
    z: int = 0
    sign: int = 1

    def __post_init__(self):
        if self.n < 0:
            raise DimensionError("negative qubit count")
        if (self.x | self.z) >> self.n:
            raise DimensionError(f"bits set beyond qubit {self.n - 1}")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @classmethod
    def identity(cls, n: int) -> PauliOperator:
        return cls(n)

    @classmethod
    def single(cls, n: int, qubit: int, kind: str) -> PauliOperator:
        if not 0 <= qubit < n:
            raise DimensionError(f"qubit {qubit} out of range for n={n}")
        bit = 1 << qubit
        return cls(n, bit if kind in "XY" else 0, bit if kind in "ZY" else 0)

    @classmethod
    def from_string(cls, text: str) -> PauliOperator:
        """Parse ``"-XZZXI"`` style text; the first character is qubit 1."""
        s = text.strip()
        sign = 1
        if s[:1] in "+-":
            sign = -1 if s[0] == "-" else 1
            s = s[1:]
        x = z = 0
        for i, ch in enumerate(s.upper()):
            if ch not in "IXYZ":
                raise ValueError(f"invalid Pauli letter {ch!r} at position {i + 1}")
            if ch in "XY":
                x |= 1 << i
            if ch in "ZY":
                z |= 1 << i
        return cls(len(s), x, z, sign)

    @classmethod
    def from_bits(cls, bits: Sequence[int], sign: int = 1) -> PauliOperator:
        """Build from a length-2n 0/1 vector laid out as (x_1..x_n | z_1..z_n)."""
        bits = np.asarray(bits, dtype=np.uint8)
        n = bits.size // 2
        x = sum(1 << int(i) for i in np.flatnonzero(bits[:n]))
        z = sum(1 << int(i) for i in np.flatnonzero(bits[n:]))
        return cls(n, x, z, sign)

    def to_bits(self) -> np.ndarray:
        out = np.zeros(2 * self.n, dtype=np.uint8)
        for i in range(self.n):
            out[i] = (self.x >> i) & 1
            out[self.n + i] = (self.z >> i) & 1
        return out

    def letter(self, qubit: int) -> str:
        return "IXZY"[((self.x >> qubit) & 1) | (((self.z >> qubit) & 1) << 1)]

    def __str__(self) -> str:
        body = "".join(self.letter(i) for i in range(self.n))
        return ("-" if self.sign < 0 else "+") + body

    def label(self) -> str:
        """Sparse 1-based label such as ``X6Z8``; ``I`` for the identity."""
        parts = [f"{self.letter(i)}{i + 1}" for i in range(self.n) if self.letter(i) != "I"]
        return "".join(parts) or "I"

    @property
    def support(self) -> int:
        return self.x | self.z

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    def unsigned(self) -> PauliOperator:
        return PauliOperator(self.n, self.x, self.z, 1)

    def __neg__(self) -> PauliOperator:
        return PauliOperator(self.n, self.x, self.z, -self.sign)

    def __mul__(self, other: PauliOperator) -> PauliOperator:
        return multiply(self, other)


def _check_dims(u: PauliOperator, v: PauliOperator) -> None:
    if u.n != v.n:
        raise DimensionError(f"operators act on {u.n} and {v.n} qubits")


def symplectic_inner_product(u: PauliOperator, v: PauliOperator) -> int:
    """0 when ``u`` and ``v`` commute, 1 when they anti-commute."""
    _check_dims(u, v)
    return _popcount((u.x & v.z) ^ (u.z & v.x)) & 1


def _phase_exponent(u: PauliOperator, v: PauliOperator) -> int:
    """Power of i picked up by the per-qubit products in ``u * v``."""
    x1, z1, x2, z2 = u.x, u.z, v.x, v.z
    y1, xo, zo = x1 & z1, x1 & ~z1, z1 & ~x1
    plus = (y1 & z2 & ~x2) | (xo & x2 & z2) | (zo & x2 & ~z2)
    minus = (y1 & x2 & ~z2) | (xo & z2 & ~x2) | (zo & x2 & z2)
    return (_popcount(plus) - _popcount(minus)) % 4


def multiply(u: PauliOperator, v: PauliOperator) -> PauliOperator:
    """Operator product ``u * v`` with an odd power of i dropped.

    Commuting operands give the exact product. For anti-commuting operands the
    true product is ``+-i`` times a Hermitian Pauli; the factor ``i`` is
    removed, which keeps ``sign(u*v) != sign(v*u)`` exactly when they
    anti-commute.
    """
    _check_dims(u, v)
    k = _phase_exponent(u, v)
    k += 0 if u.sign > 0 else 2
    k += 0 if v.sign > 0 else 2
    k %= 4
    k -= k & 1
    return PauliOperator(u.n, u.x ^ v.x, u.z ^ v.z, 1 if k == 0 else -1)


@dataclass(frozen=True)
class CliffordGate:
    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        qs = tuple(int(q) for q in self.qubits)
        want = 1 if self.kind in ("H", "P") else 2
        if len(qs) != want:
            raise ValueError(f"{self.kind} takes {want} qubit(s), got {len(qs)}")
        if min(qs) < 0:
            raise DimensionError("negative qubit index")
        if want == 2 and qs[0] == qs[1]:
            raise ValueError(f"{self.kind} needs two distinct qubits")
        if self.kind in ("CZ", "SWAP"):
            qs = tuple(sorted(qs))
        object.__setattr__(self, "qubits", qs)

    @classmethod
    def parse(cls, token: str) -> CliffordGate:
        """Parse a 1-based token such as ``CZ(1,4)``."""
        t = token.strip()
        name, _, rest = t.partition("(")
        if not rest.endswith(")"):
            raise ValueError(f"malformed gate token {token!r}")
        qs = tuple(int(a) - 1 for a in rest[:-1].split(","))
        return cls(name.strip().upper(), qs)

    def __str__(self) -> str:
        return f"{self.kind}({','.join(str(q + 1) for q in self.qubits)})"

    @property
    def is_two_qubit(self) -> bool:
        return len(self.qubits) == 2

    def inverse(self) -> list[CliffordGate]:
        if self.kind == "P":
            return [self, self, self]
        return [self]


def H(q: int) -> CliffordGate:
    return CliffordGate("H", (q,))


def P(q: int) -> CliffordGate:
    return CliffordGate("P", (q,))


def CNOT(c: int, t: int) -> CliffordGate:
    return CliffordGate("CNOT", (c, t))


def CZ(a: int, b: int) -> CliffordGate:
    return CliffordGate("CZ", (a, b))


def SWAP(a: int, b: int) -> CliffordGate:
    return CliffordGate("SWAP", (a, b))


def parse_gates(text: str) -> list[CliffordGate]:
    """Parse a comma/whitespace separated listing like ``"CZ(1,4), H(3)"``."""
    out = []
    for token in text.replace(")", ");").split(";"):
        token = token.strip(" ,\n\t")
        if token:
            out.append(CliffordGate.parse(token))
    return out


def format_gates(gates: Iterable[CliffordGate]) -> str:
    return ", ".join(str(g) for g in gates)


def _swap_bits(v: int, a: int, b: int) -> int:
    if ((v >> a) ^ (v >> b)) & 1:
        v ^= (1 << a) | (1 << b)
    return v


def conjugate(gate: CliffordGate, p: PauliOperator) -> PauliOperator:
    """Return ``g p g^dagger`` with the sign tracked."""
    if max(gate.qubits) >= p.n:
        raise DimensionError(f"{gate} does not fit on {p.n} qubits")
    x, z = p.x, p.z
    flip = 0
    if gate.kind == "H":
        a = gate.qubits[0]
        xa, za = (x >> a) & 1, (z >> a) & 1
        flip = xa & za
        x = (x & ~(1 << a)) | (za << a)
        z = (z & ~(1 << a)) | (xa << a)
    elif gate.kind == "P":
        a = gate.qubits[0]
        xa, za = (x >> a) & 1, (z >> a) & 1
        flip = xa & za
        z ^= xa << a
    elif gate.kind == "CNOT":
        c, t = gate.qubits
        xc, zc, xt, zt = (x >> c) & 1, (z >> c) & 1, (x >> t) & 1, (z >> t) & 1
        flip = xc & zt & (xt ^ zc ^ 1)
        x ^= xc << t
        z ^= zt << c
    elif gate.kind == "CZ":
        a, b = gate.qubits
        xa, za, xb, zb = (x >> a) & 1, (z >> a) & 1, (x >> b) & 1, (z >> b) & 1
        flip = xa & xb & (za ^ zb)
        z ^= (xb << a) | (xa << b)
    else:  # SWAP
        a, b = gate.qubits
        x, z = _swap_bits(x, a, b), _swap_bits(z, a, b)
    sign = -p.sign if flip else p.sign
    return PauliOperator(p.n, x, z, sign)


def conjugate_all(gates: Iterable[CliffordGate], p: PauliOperator) -> PauliOperator:
    for g in gates:
        p = conjugate(g, p)
    return p


def two_qubit_error_set(gate: CliffordGate, n: int | None = None) -> set[PauliOperator]:
    """Weight-2 errors a CNOT/CZ spreads from a single-qubit fault on its qubits.

    One-qubit gates and SWAP spread nothing, so their set is empty.
    """
    if gate.kind not in ("CNOT", "CZ"):
        return set()
    n = max(gate.qubits) + 1 if n is None else n
    out = set()
    for q in gate.qubits:
        for kind in "XZY":
            e = conjugate(gate, PauliOperator.single(n, q, kind))
            if e.weight == 2:
                out.add(e.unsigned())
    return out


# --------------------------------------------------------------------------
# array forms used by the code and verifier modules


def apply_gate_rows(bits: np.ndarray, signs: np.ndarray, gate: CliffordGate, n: int) -> None:
    """Conjugate every row of an (m, 2n) tableau in place, updating signs (0/1)."""
    if max(gate.qubits) >= n:
        raise DimensionError(f"{gate} does not fit on {n} qubits")
    X = bits[:, :n]
    Z = bits[:, n:]
    if gate.kind == "H":
        (a,) = gate.qubits
        signs ^= X[:, a] & Z[:, a]
        tmp = X[:, a].copy()
        X[:, a] = Z[:, a]
        Z[:, a] = tmp
    elif gate.kind == "P":
        (a,) = gate.qubits
        signs ^= X[:, a] & Z[:, a]
        Z[:, a] ^= X[:, a]
    elif gate.kind == "CNOT":
        c, t = gate.qubits
        signs ^= X[:, c] & Z[:, t] & (X[:, t] ^ Z[:, c] ^ 1)
        X[:, t] ^= X[:, c]
        Z[:, c] ^= Z[:, t]
    elif gate.kind == "CZ":
        a, b = gate.qubits
        signs ^= X[:, a] & X[:, b] & (Z[:, a] ^ Z[:, b])
        za_new = Z[:, a] ^ X[:, b]
        Z[:, b] ^= X[:, a]
        Z[:, a] = za_new
    else:
        a, b = gate.qubits
        for off in (0, n):
            bits[:, [off + a, off + b]] = bits[:, [off + b, off + a]]


def rowsum_sign(row_h: np.ndarray, s_h: int, row_i: np.ndarray, s_i: int, n: int) -> int:
    """Sign bit of the product of two commuting tableau rows."""
    u = PauliOperator.from_bits(row_h, -1 if s_h else 1)
    v = PauliOperator.from_bits(row_i, -1 if s_i else 1)
    return 0 if multiply(u, v).sign > 0 else 1


def symplectic_matrix(gates: Iterable[CliffordGate], n: int) -> np.ndarray:
    """Row ``j`` is the image of elementary Pauli ``j`` (X_1..X_n, Z_1..Z_n)."""
    m = np.eye(2 * n, dtype=np.uint8)
    s = np.zeros(2 * n, dtype=np.uint8)
    for g in gates:
        apply_gate_rows(m, s, g, n)
    return m


@dataclass(frozen=True)
class ConversionCircuit:
    n: int
    gates: tuple[CliffordGate, ...] = ()
    phases: tuple[str, ...] = field(default=())

    def __post_init__(self):
        gates = tuple(self.gates)
        phases = tuple(self.phases) if self.phases else ("U_source",) * len(gates)
        if len(phases) != len(gates):
            raise ValueError("one phase label per gate")
        for g in gates:
            if max(g.qubits) >= self.n:
                raise DimensionError(f"{g} does not fit on {self.n} qubits")
        for ph in phases:
            if ph not in PHASES:
                raise ValueError(f"unknown phase {ph!r}")
        object.__setattr__(self, "gates", gates)
        object.__setattr__(self, "phases", phases)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def phase(self, name: str) -> list[CliffordGate]:
        return [g for g, ph in zip(self.gates, self.phases) if ph == name]

    def two_qubit_count(self) -> int:
        return sum(1 for g in self.gates if g.kind in ("CNOT", "CZ"))

    def inverse(self) -> ConversionCircuit:
        """Gates reversed and inverted; phase labels follow their gates."""
        gates, phases = [], []
        for g, ph in zip(reversed(self.gates), reversed(self.phases)):
            for h in g.inverse():
                gates.append(h)
                phases.append(ph)
        return ConversionCircuit(self.n, tuple(gates), tuple(phases))

    def listing(self) -> str:
        return format_gates(self.gates)
