"""Per-gate error-correction certification of a conversion circuit.

After each gate the current code must have distance >= 3 and must tell apart
every error the step can produce: any single-qubit Pauli on any qubit, plus
the weight-2 errors the gate itself spreads. Errors sharing a syndrome are
fine only when their product is a stabilizer element.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import _kernels as K
from .codes import StabilizerCode, apply_gates, low_weight_errors, low_weight_logical
from .pauli import (
    CliffordGate,
    ConversionCircuit,
    DimensionError,
    PauliOperator,
    apply_gate_rows,
    two_qubit_error_set,
)

UNIQUE = "unique-syndrome"
DEGENERATE = "degenerate-with"
COLLISION = "uncorrectable-collision"
LOGICAL = "logical"


@dataclass(frozen=True)
class ErrorRow:
    error: PauliOperator
    syndrome: tuple[int, ...]
    classification: str
    partners: tuple[PauliOperator, ...] = ()
    two_qubit: bool = False

    def describe(self) -> str:
        if self.classification == DEGENERATE:
            return f"{DEGENERATE}({', '.join(p.label() for p in self.partners)})"
        return self.classification


@dataclass
class StepReport:
    step_index: int
    gate: CliffordGate | None
    code_after: StabilizerCode
    distance_ok: bool
    witness: PauliOperator | None
    error_table: list[ErrorRow]
    passed: bool
    reason: str = ""
    flags: list[str] = field(default_factory=list)

    def row(self, error: PauliOperator | str) -> ErrorRow:
        if isinstance(error, str):
            error = PauliOperator.from_string(error)
        key = error.unsigned()
        for r in self.error_table:
            if r.error == key:
                return r
        raise KeyError(str(error))

    @property
    def degenerate_pairs(self) -> int:
        pairs = {
            frozenset((r.error, p))
            for r in self.error_table
            if r.classification == DEGENERATE
            for p in r.partners
        }
        return len(pairs)


@dataclass
class FtReportBundle:
    steps: list[StepReport]
    passed: bool
    max_table_size: int = 0
    degenerate_pairs: int = 0

    @property
    def first_failure(self) -> StepReport | None:
        return next((s for s in self.steps if not s.passed), None)


def step_errors(gate: CliffordGate | None, n: int) -> tuple[np.ndarray, int]:
    """Bit rows of the step's error set; weight-1 errors come first."""
    singles = [PauliOperator.single(n, q, kind) for q in range(n) for kind in "XZY"]
    doubles = [] if gate is None else sorted(two_qubit_error_set(gate, n), key=lambda p: (p.x, p.z))
    rows = np.array([p.to_bits() for p in singles + doubles], dtype=np.uint8)
    return rows, len(singles)


_ERR_CACHE: dict = {}


def _cached_errors(gate: CliffordGate | None, n: int):
    key = (gate, n)
    hit = _ERR_CACHE.get(key)
    if hit is None:
        hit = step_errors(gate, n)
        hit[0].setflags(write=False)
        if len(_ERR_CACHE) > 4096:
            _ERR_CACHE.clear()
        _ERR_CACHE[key] = hit
    return hit


def _analyse(gens: np.ndarray, n: int, errs: np.ndarray):
    """Syndromes, stabilizer mask and syndrome groups for an error set."""
    syn = K.syndromes(gens, errs, n)
    red, piv = K.rref(gens)
    in_stab = ~K.residuals(red, piv, errs).any(axis=1)
    groups: dict[bytes, list[int]] = {}
    for i in range(errs.shape[0]):
        if syn[i].any():
            groups.setdefault(syn[i].tobytes(), []).append(i)
    return syn, in_stab, groups, red, piv


_INDEX_CACHE: dict = {}


def _step_index(gate: CliffordGate | None, n: int) -> np.ndarray:
    """Positions of the step's error set inside ``low_weight_errors(n)``."""
    key = (gate, n)
    hit = _INDEX_CACHE.get(key)
    if hit is None:
        table = _INDEX_CACHE.get(n)
        if table is None:
            table = {row.tobytes(): i for i, row in enumerate(low_weight_errors(n))}
            _INDEX_CACHE[n] = table
        errs, _ = _cached_errors(gate, n)
        hit = np.array([table[row.tobytes()] for row in errs], dtype=np.int64)
        _INDEX_CACHE[key] = hit
    return hit


def step_passes(gens: np.ndarray, gate: CliffordGate | None, n: int) -> bool:
    """Verdict of :func:`check_step` on a bare generator matrix, without the report."""
    return K.step_verdict(gens, low_weight_errors(n), _step_index(gate, n), n)


def step_passes_reference(gens: np.ndarray, gate: CliffordGate | None, n: int) -> bool:
    """Unfused form of :func:`step_passes`, kept as a cross-check."""
    if low_weight_logical(gens, n) is not None:
        return False
    errs, _ = _cached_errors(gate, n)
    syn, in_stab, groups, red, piv = _analyse(gens, n, errs)
    if (~syn.any(axis=1) & ~in_stab).any():
        return False
    prods = [errs[a] ^ errs[b] for idx in groups.values() if len(idx) > 1 for a, b in combinations(idx, 2)]
    if not prods:
        return True
    return not K.residuals(red, piv, np.array(prods, dtype=np.uint8)).any()


def check_step(code_before: StabilizerCode, gate: CliffordGate | None, step_index: int = 0) -> StepReport:
    """Apply ``gate`` and certify the resulting code against the step's errors.

    ``gate=None`` certifies ``code_before`` itself against single-qubit errors.
    """
    n = code_before.n
    if gate is not None and max(gate.qubits) >= n:
        raise DimensionError(f"{gate} does not fit on {n} qubits")
    code = code_before if gate is None else apply_gates(code_before, [gate])
    gens = code.generators
    witness_bits = low_weight_logical(gens, n)
    witness = None if witness_bits is None else PauliOperator.from_bits(witness_bits)

    errs, n_single = _cached_errors(gate, n)
    syn, in_stab, groups, red, piv = _analyse(gens, n, errs)
    ops = [PauliOperator.from_bits(e) for e in errs]
    identity = PauliOperator.identity(n)

    table: list[ErrorRow] = []
    flags: list[str] = []
    for i, e in enumerate(ops):
        s = tuple(int(b) for b in syn[i])
        two = i >= n_single
        if not syn[i].any():
            if in_stab[i]:
                table.append(ErrorRow(e, s, DEGENERATE, (identity,), two))
            else:
                table.append(ErrorRow(e, s, LOGICAL, (), two))
            continue
        mates = [j for j in groups[syn[i].tobytes()] if j != i]
        if not mates:
            table.append(ErrorRow(e, s, UNIQUE, (), two))
            continue
        prods = np.array([errs[i] ^ errs[j] for j in mates], dtype=np.uint8)
        ok = ~K.residuals(red, piv, prods).any(axis=1)
        if ok.all():
            table.append(ErrorRow(e, s, DEGENERATE, tuple(ops[j] for j in mates), two))
            if two and any(j >= n_single for j in mates):
                flags.append(f"{e.label()} degenerate with another two-qubit error")
        else:
            bad = tuple(ops[j] for j, good in zip(mates, ok) if not good)
            table.append(ErrorRow(e, s, COLLISION, bad, two))

    reasons = []
    if witness is not None:
        reasons.append(f"distance < 3: {witness.label()} is a logical operator")
    logical = [r.error.label() for r in table if r.classification == LOGICAL]
    if logical:
        reasons.append("logical errors: " + ", ".join(logical))
    clash = [r.error.label() for r in table if r.classification == COLLISION]
    if clash:
        reasons.append("uncorrectable collisions: " + ", ".join(clash))
    return StepReport(
        step_index,
        gate,
        code,
        witness is None,
        witness,
        table,
        not reasons,
        "; ".join(reasons),
        sorted(set(flags)),
    )


def verify_circuit(
    code0: StabilizerCode,
    circuit: ConversionCircuit | Iterable[CliffordGate],
    exhaustive: bool = False,
) -> FtReportBundle:
    """Fold :func:`check_step` over the gates, stopping at the first failure
    unless ``exhaustive``."""
    gates = list(circuit)
    steps: list[StepReport] = []
    code = code0
    for i, g in enumerate(gates):
        rep = check_step(code, g, i)
        steps.append(rep)
        code = rep.code_after
        if not rep.passed and not exhaustive:
            break
    passed = len(steps) == len(gates) and all(s.passed for s in steps)
    return FtReportBundle(
        steps,
        passed,
        max((len(s.error_table) for s in steps), default=0),
        sum(s.degenerate_pairs for s in steps),
    )


StepCheck = Callable[[np.ndarray, CliffordGate, int], bool]


def prefix_passes(
    code0: StabilizerCode,
    gates: Iterable[CliffordGate],
    check: StepCheck = step_passes,
) -> tuple[bool, int]:
    """(True, len) if every step passes, else (False, index of first failing gate)."""
    bits = code0.generators.copy()
    signs = code0.sign_bits.copy()
    i = -1
    for i, g in enumerate(gates):
        apply_gate_rows(bits, signs, g, code0.n)
        if not check(bits, g, code0.n):
            return False, i
    return True, i + 1
