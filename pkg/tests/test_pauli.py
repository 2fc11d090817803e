import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ftconv.pauli import (
    CNOT,
    CZ,
    SWAP,
    CliffordGate,
    ConversionCircuit,
    DimensionError,
    H,
    P,
    PauliOperator,
    conjugate,
    conjugate_all,
    format_gates,
    multiply,
    parse_gates,
    symplectic_inner_product,
    symplectic_matrix,
    two_qubit_error_set,
)

# dense reference: qubit 0 is the leftmost tensor factor
I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
ONE = {"H": np.array([[1, 1], [1, -1]]) / np.sqrt(2), "P": np.diag([1, 1j])}


def kron_all(mats):
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


def dense_pauli(p: PauliOperator) -> np.ndarray:
    mats = []
    for q in range(p.n):
        xq, zq = (p.x >> q) & 1, (p.z >> q) & 1
        m = np.linalg.matrix_power(X, xq) @ np.linalg.matrix_power(Z, zq)
        mats.append(m * (1j if xq and zq else 1))  # Y = iXZ
    return p.sign * kron_all(mats)


def dense_gate(g: CliffordGate, n: int) -> np.ndarray:
    if g.kind in ONE:
        return kron_all([ONE[g.kind] if q == g.qubits[0] else I2 for q in range(n)])
    dim = 2**n
    u = np.zeros((dim, dim), dtype=complex)
    a, b = g.qubits
    for idx in range(dim):
        bits = [(idx >> (n - 1 - q)) & 1 for q in range(n)]
        amp = 1
        if g.kind == "CNOT":
            bits[b] ^= bits[a]
        elif g.kind == "CZ":
            amp = -1 if bits[a] and bits[b] else 1
        else:
            bits[a], bits[b] = bits[b], bits[a]
        out = sum(v << (n - 1 - q) for q, v in enumerate(bits))
        u[out, idx] = amp
    return u


def all_paulis(n):
    for x in range(2**n):
        for z in range(2**n):
            yield PauliOperator(n, x, z)


def all_gates(n):
    for q in range(n):
        yield H(q)
        yield P(q)
    for a in range(n):
        for b in range(n):
            if a != b:
                yield CNOT(a, b)
                yield CZ(a, b)
                yield SWAP(a, b)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_conjugation_matches_dense_unitaries(n):
    for g in all_gates(n):
        u = dense_gate(g, n)
        for p in all_paulis(n):
            got = conjugate(g, p)
            assert np.allclose(u @ dense_pauli(p) @ u.conj().T, dense_pauli(got)), (g, p)


@pytest.mark.parametrize("n", [1, 2])
def test_commuting_products_match_dense(n):
    for u in all_paulis(n):
        for v in all_paulis(n):
            w = multiply(u, v)
            if symplectic_inner_product(u, v) == 0:
                assert np.allclose(dense_pauli(u) @ dense_pauli(v), dense_pauli(w))
            else:
                assert np.allclose(dense_pauli(u) @ dense_pauli(v), 1j * dense_pauli(w)) or np.allclose(
                    dense_pauli(u) @ dense_pauli(v), -1j * dense_pauli(w)
                )


def test_string_round_trip_and_labels():
    p = PauliOperator.from_string("-XZYI")
    assert str(p) == "-XZYI"
    assert p.weight == 3
    assert p.label() == "X1Z2Y3"
    assert PauliOperator.identity(3).label() == "I"
    assert PauliOperator.from_bits(p.to_bits(), -1) == p


def test_bad_inputs():
    with pytest.raises(ValueError):
        PauliOperator.from_string("XQ")
    with pytest.raises(DimensionError):
        PauliOperator(2, x=0b100)
    with pytest.raises(DimensionError):
        symplectic_inner_product(PauliOperator(2), PauliOperator(3))
    with pytest.raises(DimensionError):
        conjugate(CNOT(0, 3), PauliOperator(3))
    with pytest.raises(ValueError):
        CliffordGate("CNOT", (1, 1))
    with pytest.raises(ValueError):
        parse_gates("CNOT(1,2), TOF(1,2,3)")


def test_gate_parsing_is_one_based():
    gates = parse_gates("SWAP(5,6), CNOT(5,8) CZ(1,2); H(3) P(4)")
    assert gates == [SWAP(4, 5), CNOT(4, 7), CZ(0, 1), H(2), P(3)]
    assert format_gates(gates) == "SWAP(5,6), CNOT(5,8), CZ(1,2), H(3), P(4)"


def test_two_qubit_error_sets():
    assert {p.label() for p in two_qubit_error_set(CNOT(0, 1))} == {"X1X2", "Z1Z2", "Y1X2", "Z1Y2"}
    assert {p.label() for p in two_qubit_error_set(CZ(0, 1))} == {"X1Z2", "Z1X2", "Y1Z2", "Z1Y2"}
    assert two_qubit_error_set(SWAP(0, 1)) == set()
    assert two_qubit_error_set(H(0)) == set()


def test_circuit_inverse_undoes_conjugation():
    gates = parse_gates("H(1), P(2), CNOT(1,3), CZ(2,3), SWAP(1,2), P(3)")
    circ = ConversionCircuit(3, tuple(gates))
    inv = circ.inverse()
    assert len(inv) == len(circ) + 4  # each P inverts to three P
    for p in all_paulis(3):
        assert conjugate_all(inv, conjugate_all(circ, p)) == p
    assert np.array_equal(symplectic_matrix(list(circ) + list(inv), 3), np.eye(6, dtype=np.uint8))


def test_circuit_rejects_out_of_range_gates():
    with pytest.raises(DimensionError):
        ConversionCircuit(2, (CNOT(0, 2),))
    with pytest.raises(ValueError):
        ConversionCircuit(2, (H(0),), ("Z_diff",))


paulis3 = st.builds(
    PauliOperator, st.just(3), st.integers(0, 7), st.integers(0, 7), st.sampled_from([1, -1])
)
gates3 = st.sampled_from(list(all_gates(3)))


@settings(max_examples=200, deadline=None)
@given(paulis3, paulis3, gates3)
def test_conjugation_preserves_commutation(u, v, g):
    assert symplectic_inner_product(u, v) == symplectic_inner_product(conjugate(g, u), conjugate(g, v))


@settings(max_examples=200, deadline=None)
@given(paulis3, paulis3, paulis3)
def test_inner_product_is_bilinear(u, v, w):
    lhs = symplectic_inner_product(u, multiply(v, w))
    assert lhs == symplectic_inner_product(u, v) ^ symplectic_inner_product(u, w)


@settings(max_examples=200, deadline=None)
@given(paulis3, paulis3)
def test_product_signs_flip_on_anticommutation(u, v):
    uv, vu = multiply(u, v), multiply(v, u)
    assert (uv.sign != vu.sign) == bool(symplectic_inner_product(u, v))
