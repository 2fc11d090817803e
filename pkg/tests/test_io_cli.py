import json

import pytest
from click.testing import CliRunner
from conftest import GOLDEN, reference
from hypothesis import given, settings
from hypothesis import strategies as st

from ftconv.cli import main
from ftconv.codes import StabilizerCode
from ftconv.io import (
    CircuitParseError,
    circuit_from_dict,
    circuit_to_dict,
    circuit_to_json,
    format_report,
    parse_circuit,
    phase_listing,
    report_to_dict,
)
from ftconv.library import LIBRARY, CodeParseError, format_code, get_code, parse_code
from ftconv.pauli import CNOT, CZ, PHASES, SWAP, ConversionCircuit, H, P
from ftconv.verify import verify_circuit


@pytest.fixture
def runner():
    return CliRunner()


def test_circuit_formats_round_trip(conversion):
    _, _, _, circ = conversion
    assert parse_circuit(phase_listing(circ), circ.n) == circ
    assert parse_circuit(circuit_to_json(circ)) == circ
    flat = parse_circuit(circ.listing(), circ.n)
    assert flat.gates == circ.gates


def test_json_uses_one_based_qubits():
    d = circuit_to_dict(ConversionCircuit(3, (CNOT(0, 2),), ("A_diff",)))
    assert d == {"n": 3, "gates": [{"phase": "A_diff", "gate": "CNOT", "qubits": [1, 3]}]}


@pytest.mark.parametrize(
    "text",
    [
        '{"n": 3, "gates": [{"gate": "CNOT", "qubits": [0, 1]}]}',
        '{"n": 3, "gates": [{"gate": "CNOT", "qubits": [1, 2], "phase": "D_diff"}]}',
        '{"n": 3, "gates": [',
        "A_diff: CNOT(1,2), FOO(3)",
        "CNOT(1,2) CNOT(1)",
    ],
)
def test_bad_circuits(text):
    with pytest.raises((CircuitParseError, ValueError)):
        parse_circuit(text)


def test_json_qubit_count_mismatch():
    with pytest.raises(CircuitParseError):
        parse_circuit('{"n": 3, "gates": []}', 4)


gate_st = st.one_of(
    st.builds(H, st.integers(0, 4)),
    st.builds(P, st.integers(0, 4)),
    st.builds(CNOT, st.integers(0, 2), st.integers(3, 5)),
    st.builds(CZ, st.integers(0, 2), st.integers(3, 5)),
    st.builds(SWAP, st.integers(0, 2), st.integers(3, 5)),
)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(gate_st, st.sampled_from(PHASES)), max_size=12))
def test_listing_and_json_round_trip(pairs):
    circ = ConversionCircuit(6, tuple(g for g, _ in pairs), tuple(p for _, p in pairs))
    assert parse_circuit(phase_listing(circ), 6) == circ
    assert circuit_from_dict(json.loads(circuit_to_json(circ))) == circ


def test_code_file_round_trip_and_errors():
    for entry in LIBRARY.values():
        code = entry.code
        assert parse_code(format_code(code)) == code
    assert parse_code("2 0\n-ZZ\nXX\n").signs == [-1, 1]
    with pytest.raises(CodeParseError) as info:
        parse_code("3 1\nXXX\nZQZ\n")
    assert (info.value.line, info.value.column) == (3, 2)
    for bad in ["", "3\nXXX", "3 1\nXXX\n", "2 0\nXXX\nZZ\n", "1 2\n"]:
        with pytest.raises(CodeParseError):
            parse_code(bad)
    with pytest.raises(KeyError):
        get_code("builtin:nope")


def test_report_dict_and_text():
    src, _, circ = reference("five_to_steane")
    bundle = verify_circuit(src, circ)
    d = report_to_dict(bundle)
    assert d["passed"] and len(d["steps"]) == len(circ)
    assert d["steps"][0]["step"] == 1
    assert format_report(bundle).splitlines()[-1].startswith("PASS: 33 steps")
    toy = verify_circuit(StabilizerCode.from_paulis(["XXXX", "ZZZZ"]), [CZ(0, 1)])
    assert format_report(toy).splitlines()[-1].startswith("FAIL")


def test_cli_library(runner):
    res = runner.invoke(main, ["library", "--json"])
    assert res.exit_code == 0
    assert {e["name"] for e in json.loads(res.output)} == set(LIBRARY)


def test_cli_convert_and_verify(runner, tmp_path):
    emit, rep = tmp_path / "c.json", tmp_path / "r.json"
    res = runner.invoke(
        main,
        ["convert", "builtin:five-qubit", "builtin:steane", "--m1", "3", "--m2", "1", "--verify",
         "--emit", str(emit), "--report", str(rep)],
    )
    assert res.exit_code == 0, res.output
    assert "B_diff:" in res.stdout and "PASS" in res.stderr
    assert json.loads(rep.read_text())["passed"]
    res = runner.invoke(main, ["verify", str(emit), "builtin:five-qubit", "--m", "3", "--tables"])
    assert res.exit_code == 0 and "degenerate-with" in res.output


def test_cli_convert_options(runner, tmp_path):
    res = runner.invoke(main, ["convert", "five-qubit", "steane", "--simplify", "--strict-signs", "--json"])
    assert res.exit_code == 0, res.output
    circ = parse_circuit(res.stdout)
    assert circ.n == 7
    assert "final signs [1, 1, 1, 1, 1, 1]" in res.stderr
    res = runner.invoke(
        main,
        ["convert", "five-qubit", "steane", "--m1", "3", "--m2", "1", "--prefer", str(GOLDEN / "five_to_steane.txt")],
    )
    assert res.stdout.strip() == phase_listing(reference("five_to_steane")[2])


def test_cli_exit_codes(runner, tmp_path):
    toy = tmp_path / "toy.txt"
    toy.write_text("4 2\nXXXX\nZZZZ\n")
    bad = tmp_path / "bad.txt"
    bad.write_text("3 1\nXQZ\nZZI\n")
    anti = tmp_path / "anti.txt"
    anti.write_text("2 0\nXI\nZI\n")
    assert runner.invoke(main, ["distance", str(toy)]).exit_code == 6
    assert runner.invoke(main, ["distance", str(bad)]).exit_code == 2
    assert runner.invoke(main, ["distance", str(anti)]).exit_code == 2
    assert runner.invoke(main, ["distance", "builtin:nope"]).exit_code == 2
    assert runner.invoke(main, ["convert", "steane", str(toy)]).exit_code == 3
    assert runner.invoke(main, ["convert", "five-qubit", "steane", "--m1", "3", "--m2", "0"]).exit_code == 4
    assert runner.invoke(main, ["convert", "steane", "qpc34", "--m1", "5", "--m2", "0", "--budget", "3"]).exit_code == 5
    circ = tmp_path / "c.txt"
    circ.write_text("CZ(1,2)\n")
    assert runner.invoke(main, ["verify", str(circ), str(toy)]).exit_code == 6
    circ.write_text("CZ(1,2\n")
    assert runner.invoke(main, ["verify", str(circ), str(toy)]).exit_code == 2


def test_cli_forms(runner):
    for flag in ("--standard", "--iabc", "--logicals"):
        res = runner.invoke(main, ["forms", "builtin:five-qubit", flag])
        assert res.exit_code == 0, res.output
    res = runner.invoke(main, ["forms", "builtin:five-qubit", "--iabc", "--augment", "3"])
    lines = [line for line in res.output.splitlines() if not line.startswith("#")]
    assert len(lines) == 7 and lines[0].startswith("+ 1 0 0 0 0 0 0 1 |")
