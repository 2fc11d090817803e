"""Circuit and report serialization.

Circuits are written as ``{"n": N, "gates": [{"phase", "gate", "qubits"}, ...]}``
with 1-based qubit indices, or as a flat comma-separated listing such as
``SWAP(5,6), CNOT(5,8)``. Reports use the same envelope, one record per step.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .codes import StabilizerCode
from .pauli import PHASES, CliffordGate, ConversionCircuit, parse_gates
from .verify import FtReportBundle, StepReport


class CircuitParseError(ValueError):
    pass


def gate_record(gate: CliffordGate, phase: str) -> dict:
    return {"phase": phase, "gate": gate.kind, "qubits": [q + 1 for q in gate.qubits]}


def circuit_to_dict(circuit: ConversionCircuit) -> dict:
    return {
        "n": circuit.n,
        "gates": [gate_record(g, ph) for g, ph in zip(circuit.gates, circuit.phases)],
    }


def circuit_to_json(circuit: ConversionCircuit) -> str:
    return json.dumps(circuit_to_dict(circuit), indent=1)


def circuit_from_dict(data: dict) -> ConversionCircuit:
    gates, phases = [], []
    try:
        n = int(data["n"])
        for i, rec in enumerate(data["gates"]):
            qubits = [int(q) - 1 for q in rec["qubits"]]
            if min(qubits) < 0:
                raise CircuitParseError(f"record {i + 1}: qubit indices are 1-based")
            gates.append(CliffordGate(rec["gate"], tuple(qubits)))
            phase = rec.get("phase", "U_source")
            if phase not in PHASES:
                raise CircuitParseError(f"record {i + 1}: unknown phase {phase!r}")
            phases.append(phase)
    except (KeyError, TypeError) as exc:
        raise CircuitParseError(f"malformed circuit record: {exc}") from None
    return ConversionCircuit(n, tuple(gates), tuple(phases))


def parse_circuit(text: str, n: int | None = None) -> ConversionCircuit:
    """Read the JSON envelope, a phase listing, or a flat gate listing.

    Listings carry no qubit count; ``n`` defaults to the largest index used.
    """
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise CircuitParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        circ = circuit_from_dict(data)
        if n is not None and n != circ.n:
            raise CircuitParseError(f"circuit is on {circ.n} qubits, code on {n}")
        return circ
    lines = [line.split("#", 1)[0].strip() for line in stripped.splitlines()]
    if any(line.partition(":")[0].strip() in PHASES for line in lines):
        return parse_phase_listing(stripped, n)
    try:
        gates = parse_gates(" ".join(lines))
    except ValueError as exc:
        raise CircuitParseError(str(exc)) from None
    return ConversionCircuit(_span(gates) if n is None else n, tuple(gates))


def _span(gates) -> int:
    return max((q + 1 for g in gates for q in g.qubits), default=0)


def load_circuit(path: str | Path, n: int | None = None) -> ConversionCircuit:
    return parse_circuit(Path(path).read_text(), n)


def phase_listing(circuit: ConversionCircuit) -> str:
    """One line per run of same-phase gates, ``phase: CZ(1,4), ...``."""
    lines = []
    run: list[CliffordGate] = []
    current = None
    for g, ph in zip(circuit.gates, circuit.phases):
        if ph != current and run:
            lines.append(f"{current}: " + ", ".join(map(str, run)))
            run = []
        current = ph
        run.append(g)
    if run:
        lines.append(f"{current}: " + ", ".join(map(str, run)))
    return "\n".join(lines)


def parse_phase_listing(text: str, n: int | None = None) -> ConversionCircuit:
    """Inverse of :func:`phase_listing`; ``#`` comments and blank lines are skipped."""
    gates, phases = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, body = line.partition(":")
        name = name.strip()
        if not sep or name not in PHASES:
            raise CircuitParseError(f"line {lineno}: expected '<phase>: gates'")
        try:
            run = parse_gates(body)
        except ValueError as exc:
            raise CircuitParseError(f"line {lineno}: {exc}") from None
        gates += run
        phases += [name] * len(run)
    return ConversionCircuit(_span(gates) if n is None else n, tuple(gates), tuple(phases))


# --------------------------------------------------------------------------
# matrices


def format_matrix(bits: np.ndarray, split: int | None = None) -> str:
    """Rows of 0/1 with a bar between the X and Z halves."""
    bits = np.asarray(bits, dtype=np.uint8)
    split = bits.shape[1] // 2 if split is None else split
    out = []
    for row in bits:
        left = " ".join(str(int(b)) for b in row[:split])
        right = " ".join(str(int(b)) for b in row[split:])
        out.append(f"{left} | {right}" if split and right else left or right)
    return "\n".join(out)


def format_code_matrix(code: StabilizerCode) -> str:
    lines = format_matrix(code.generators).splitlines()
    return "\n".join(f"{'-' if s else '+'} {line}" for s, line in zip(code.sign_bits, lines))


# --------------------------------------------------------------------------
# reports


def _pm(syndrome) -> list[int]:
    return [-1 if b else 1 for b in syndrome]


def step_to_dict(rep: StepReport, table: bool = True) -> dict:
    out = {
        "step": rep.step_index + 1,
        "gate": None if rep.gate is None else str(rep.gate),
        "passed": rep.passed,
        "distance_ok": rep.distance_ok,
        "witness": None if rep.witness is None else rep.witness.label(),
        "reason": rep.reason,
        "flags": list(rep.flags),
    }
    if table:
        out["errors"] = [
            {
                "error": r.error.label(),
                "syndrome": _pm(r.syndrome),
                "classification": r.classification,
                "partners": [p.label() for p in r.partners],
                "two_qubit": r.two_qubit,
            }
            for r in rep.error_table
        ]
    return out


def report_to_dict(bundle: FtReportBundle, table: bool = True, signs: list[int] | None = None) -> dict:
    out = {
        "passed": bundle.passed,
        "steps": [step_to_dict(s, table) for s in bundle.steps],
        "max_table_size": bundle.max_table_size,
        "degenerate_pairs": bundle.degenerate_pairs,
    }
    if signs is not None:
        out["final_signs"] = signs
    return out


def report_to_json(bundle: FtReportBundle, table: bool = True, signs: list[int] | None = None) -> str:
    return json.dumps(report_to_dict(bundle, table, signs), indent=1)


def format_step_table(rep: StepReport, two_qubit_only: bool = False) -> str:
    """Error table with syndromes written as +1/-1 eigenvalues."""
    rows = []
    for r in rep.error_table:
        if two_qubit_only and not r.two_qubit:
            continue
        syn = " ".join(f"{v:+d}" for v in _pm(r.syndrome))
        rows.append(f"  {r.error.label():<10} ({syn})  {r.describe()}")
    return "\n".join(rows)


def format_report(bundle: FtReportBundle, tables: bool = False) -> str:
    lines = []
    for s in bundle.steps:
        mark = "ok  " if s.passed else "FAIL"
        gate = "-" if s.gate is None else str(s.gate)
        extra = f"  {s.reason}" if s.reason else ""
        lines.append(f"{s.step_index + 1:4d} {gate:<12} {mark}{extra}")
        if tables and s.gate is not None and s.gate.is_two_qubit:
            lines.append(format_step_table(s, two_qubit_only=True))
    verdict = "PASS" if bundle.passed else "FAIL"
    lines.append(
        f"{verdict}: {len(bundle.steps)} steps, max table {bundle.max_table_size}, "
        f"{bundle.degenerate_pairs} degenerate pairs"
    )
    return "\n".join(lines)
