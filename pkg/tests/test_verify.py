import pytest
from conftest import GOLDEN, reference
from hypothesis import given, settings
from hypothesis import strategies as st

from ftconv.codes import (
    StabilizerCode,
    apply_gates,
    augment,
    same_group,
    syndrome_signs,
)
from ftconv.library import load_code, steane_code
from ftconv.pauli import CNOT, CZ, SWAP, H, PauliOperator
from ftconv.verify import (
    COLLISION,
    DEGENERATE,
    LOGICAL,
    UNIQUE,
    check_step,
    prefix_passes,
    step_passes,
    step_passes_reference,
    verify_circuit,
)


@pytest.fixture(scope="module")
def cz68_step():
    src, _, circ = reference("five_to_steane")
    i = next(k for k, (g, ph) in enumerate(zip(circ.gates, circ.phases)) if g == CZ(5, 7) and ph == "C_diff")
    return check_step(apply_gates(src, circ.gates[:i]), circ.gates[i], i)


def test_cz_step_reaches_recorded_code(cz68_step):
    assert same_group(cz68_step.code_after, load_code(GOLDEN / "five_to_steane_after_cz68.txt"))


def test_cz_step_degenerate_pair(cz68_step):
    recorded = load_code(GOLDEN / "five_to_steane_after_cz68.txt")
    expect = (-1, -1, -1, -1, 1, 1, 1)
    assert syndrome_signs(recorded, PauliOperator.from_string("IIIIXIII")) == expect
    assert syndrome_signs(recorded, PauliOperator.from_string("IIIIIXIZ")) == expect
    row = cz68_step.row("IIIIIXIZ")
    assert row.classification == DEGENERATE
    assert [p.label() for p in row.partners] == ["X5"]
    assert cz68_step.passed and cz68_step.distance_ok


def test_cz_step_other_spread_errors_are_unique(cz68_step):
    others = {r.error.label(): r.classification for r in cz68_step.error_table if r.two_qubit}
    assert others == {"X6Z8": DEGENERATE, "Y6Z8": UNIQUE, "Z6X8": UNIQUE, "Z6Y8": UNIQUE}


def test_cz_on_distance_two_code_fails():
    toy = StabilizerCode.from_paulis(["XXXX", "ZZZZ"])
    rep = check_step(toy, CZ(0, 1))
    assert not rep.passed and not rep.distance_ok
    assert rep.witness.weight == 2
    assert "distance < 3" in rep.reason


def test_collision_detected():
    # repetition code protects against X only, so single Z errors are logical
    rep = check_step(StabilizerCode.from_paulis(["ZZI", "IZZ"]), None)
    kinds = {r.classification for r in rep.error_table}
    assert LOGICAL in kinds and COLLISION in kinds
    assert not rep.passed


def test_swap_and_hadamard_steps():
    code = augment(steane_code(), 1)
    rep = check_step(code, SWAP(6, 7))
    assert rep.passed and not any(r.two_qubit for r in rep.error_table)
    assert check_step(code, H(3)).passed


def test_gate_none_checks_code_itself():
    rep = check_step(steane_code(), None)
    assert rep.passed and len(rep.error_table) == 21


def test_empty_circuit():
    bundle = verify_circuit(steane_code(), [])
    assert bundle.passed and bundle.steps == []


def test_reference_circuits_pass(conversion):
    _, src, tgt, circ = conversion
    bundle = verify_circuit(src, circ)
    assert bundle.passed, bundle.first_failure and bundle.first_failure.reason
    assert same_group(bundle.steps[-1].code_after, tgt)
    assert prefix_passes(src, circ) == (True, len(circ))


def test_verify_stops_at_first_failure_unless_exhaustive():
    toy = StabilizerCode.from_paulis(["XXXX", "ZZZZ"])
    gates = [CZ(0, 1), CNOT(2, 3), CZ(0, 1)]
    assert len(verify_circuit(toy, gates).steps) == 1
    full = verify_circuit(toy, gates, exhaustive=True)
    assert len(full.steps) == 3 and not full.passed


step_gates = st.sampled_from([None, H(0), CNOT(0, 3), CNOT(4, 1), CZ(2, 7), CZ(6, 5), SWAP(1, 2)])


@settings(max_examples=150, deadline=None)
@given(st.lists(st.sampled_from([H(1), CNOT(0, 2), CZ(3, 7), CNOT(7, 4), CZ(5, 6), SWAP(2, 3)]), max_size=6), step_gates)
def test_fast_verdict_agrees_with_reference_and_report(prefix, gate):
    code = apply_gates(augment(steane_code(), 1), prefix)
    after = code if gate is None else apply_gates(code, [gate])
    fast = step_passes(after.generators, gate, code.n)
    assert fast == step_passes_reference(after.generators, gate, code.n)
    assert fast == check_step(code, gate).passed


def test_stabilizer_errors_are_degenerate_with_identity():
    # CNOT(1,2) maps this code onto one containing ZZII, its own spread error
    code = StabilizerCode.from_paulis(["IZII", "IIZZ", "XIXX"])
    rep = check_step(code, CNOT(0, 1))
    row = rep.row("ZZII")
    assert row.two_qubit and not any(row.syndrome)
    assert row.classification == DEGENERATE
    assert [p.label() for p in row.partners] == ["I"]
