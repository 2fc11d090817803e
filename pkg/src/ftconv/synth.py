"""Conversion circuit synthesis between two stabilizer codes.

Pipeline: IABC forms of both augmented codes, CNOTs fixing the A column
differences, CZs fixing the C column differences, CZs (and P gates on the
diagonal) resolving the remaining B difference, then the target's IABC record
undone. The A/C and B gates are ordered so that every intermediate code passes
the fault-tolerance check, and repeated gates are cancelled afterwards.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .codes import (
    IabcForm,
    LayoutError,
    StabilizerCode,
    apply_gates,
    augment,
    augmented_iabc,
    canonical,
    same_group,
)
from .pauli import (
    CNOT,
    CZ,
    CliffordGate,
    ConversionCircuit,
    H,
    P,
    PauliOperator,
    apply_gate_rows,
    symplectic_matrix,
)
from .verify import StepCheck, prefix_passes, step_passes

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 100_000


class KMismatchError(ValueError):
    pass


class QubitCountError(ValueError):
    pass


class InternalConsistencyError(RuntimeError):
    pass


class OrderingExhausted(RuntimeError):
    """No fault-tolerant ordering found within the verifier-call budget."""

    def __init__(self, message: str, best_prefix: Sequence[CliffordGate], failing: CliffordGate | None, calls: int):
        super().__init__(message)
        self.best_prefix = list(best_prefix)
        self.failing = failing
        self.calls = calls


@dataclass
class DifferenceGates:
    a_gates: list[CliffordGate]
    c_gates: list[CliffordGate]
    b_gates: list[CliffordGate]
    d_matrix: np.ndarray
    after_ac: StabilizerCode

    @property
    def ac_gates(self) -> list[CliffordGate]:
        return self.a_gates + self.c_gates


@dataclass
class ConversionPlan:
    source: StabilizerCode
    target: StabilizerCode
    m1: int
    m2: int
    source_iabc: IabcForm
    target_iabc: IabcForm
    a_diff: np.ndarray
    c_diff: np.ndarray
    d_matrix: np.ndarray
    draft: ConversionCircuit
    circuit: ConversionCircuit
    scheduled: bool = False
    verifier_calls: int = 0
    sign_fix: list[CliffordGate] = field(default_factory=list)

    @property
    def N(self) -> int:
        return self.source.n + self.m1

    @property
    def augmented_source(self) -> StabilizerCode:
        return augment(self.source, self.m1)

    @property
    def augmented_target(self) -> StabilizerCode:
        return augment(self.target, self.m2)

    def output_code(self, circuit: ConversionCircuit | None = None) -> StabilizerCode:
        return apply_gates(self.augmented_source, circuit or self.circuit)

    def final_signs(self, circuit: ConversionCircuit | None = None) -> list[int]:
        """Signs of the output group's canonical generators relative to the target's.

        +1 where the output agrees with augmented target, -1 where it differs.
        """
        got = canonical(self.output_code(circuit))
        want = canonical(self.augmented_target)
        if not np.array_equal(got.generators, want.generators):
            raise InternalConsistencyError("output group differs from the target group")
        return [-1 if a != b else 1 for a, b in zip(got.sign_bits, want.sign_bits)]


# --------------------------------------------------------------------------
# gate selection


def _check_same_layout(src: IabcForm, tgt: IabcForm) -> None:
    if src.N != tgt.N or src.k != tgt.k:
        raise QubitCountError(f"IABC forms on {src.N}/{tgt.N} qubits with k={src.k}/{tgt.k}")


def a_c_gates(src: IabcForm, tgt: IabcForm) -> tuple[list[CliffordGate], list[CliffordGate]]:
    """Draft A-phase CNOTs and C-phase CZs, column-major over the logical columns."""
    _check_same_layout(src, tgt)
    R, k = src.R, src.k
    a_diff = src.A ^ tgt.A
    c_diff = src.C ^ tgt.C
    a = [CNOT(i, R + j) for j in range(k) for i in range(R) if a_diff[i, j]]
    c = [CZ(i, R + j) for j in range(k) for i in range(R) if c_diff[i, j]]
    return a, c


def b_gates_from(code: StabilizerCode, tgt: IabcForm) -> tuple[list[CliffordGate], np.ndarray]:
    """B-phase gates that turn ``code`` (matching ``tgt`` outside B) into ``tgt``."""
    R = tgt.R
    if not (np.array_equal(code.gx, tgt.code.gx) and np.array_equal(code.gz[:, R:], tgt.C)):
        raise InternalConsistencyError("A/C phases did not reach the target A and C blocks")
    D = code.gz[:, :R] ^ tgt.B
    if not np.array_equal(D, D.T):
        raise InternalConsistencyError("difference matrix is not symmetric")
    gates = [P(i) for i in range(R) if D[i, i]]
    gates += [CZ(i, j) for i in range(R) for j in range(i + 1, R) if D[i, j]]
    return gates, D


def difference_gates(
    src: IabcForm, tgt: IabcForm, ac_order: Sequence[CliffordGate] | None = None
) -> DifferenceGates:
    """A/C/B-phase gates taking ``src`` onto ``tgt``.

    The B block after the A/C phases is obtained by conjugating the source
    generators through the A/C gates in ``ac_order`` (default: A then C).
    """
    a, c = a_c_gates(src, tgt)
    order = list(a + c) if ac_order is None else list(ac_order)
    if sorted(order, key=str) != sorted(a + c, key=str):
        raise ValueError("ac_order must be a permutation of the A and C phase gates")
    after = apply_gates(src.code, order)
    b, D = b_gates_from(after, tgt)
    return DifferenceGates(a, c, b, D, after)


def _inverse_record(record: Sequence[CliffordGate]) -> list[CliffordGate]:
    out = []
    for g in reversed(record):
        out.extend(g.inverse())
    return out


def _assemble(n, usrc, ac, a_set, b, utgt_inv) -> ConversionCircuit:
    gates = list(usrc) + list(ac) + list(b) + list(utgt_inv)
    phases = ["U_source"] * len(usrc)
    phases += ["A_diff" if g in a_set else "C_diff" for g in ac]
    phases += ["B_diff"] * len(b) + ["U_target_inverse"] * len(utgt_inv)
    return ConversionCircuit(n, tuple(gates), tuple(phases))


def _by_preference(gates: Sequence[CliffordGate], preferred: Sequence[CliffordGate] | None):
    if not preferred:
        return list(gates)
    rank: dict[CliffordGate, int] = {}
    for i, g in enumerate(preferred):
        rank.setdefault(g, i)
    big = len(preferred)
    return sorted(gates, key=lambda g: rank.get(g, big))


# --------------------------------------------------------------------------
# fault-tolerant ordering


class _OutOfBudget(Exception):
    pass


class _Search:
    """Limited-discrepancy search for gate orders whose every step passes.

    At each position the first passing candidate in pool order is free and
    any other passing candidate costs one discrepancy, so with zero
    discrepancies the search is greedy in draft order and a fully passing
    draft comes back unchanged. Verdicts are memoized on the generator bits,
    which makes the B-phase states shared across A/C orders: every B-phase
    state is the target form with some set of B gates still to apply.
    """

    def __init__(self, verifier: StepCheck, limit: int, n: int):
        self.verifier = verifier
        self.limit = limit
        self.n = n
        self.calls = 0
        self.memo: dict = {}
        self.dead: dict = {}
        self.best: list[CliffordGate] = []
        self.best_fail: CliffordGate | None = None

    def check(self, bits: np.ndarray, gate: CliffordGate) -> bool:
        key = (bits.tobytes(), gate)
        hit = self.memo.get(key)
        if hit is None:
            if self.calls >= self.limit:
                raise _OutOfBudget
            self.calls += 1
            hit = self.memo[key] = bool(self.verifier(bits, gate, self.n))
        return hit

    def step(self, bits: np.ndarray, gate: CliffordGate) -> np.ndarray:
        out = bits.copy()
        apply_gate_rows(out, np.zeros(out.shape[0], np.uint8), gate, self.n)
        return out

    def prefix_ok(self, bits: np.ndarray, gates: Sequence[CliffordGate]) -> int:
        """Index of the first failing gate, or -1."""
        for i, g in enumerate(gates):
            bits = self.step(bits, g)
            if not self.check(bits, g):
                return i
        return -1

    def orders(
        self, bits: np.ndarray, pool: list[CliffordGate], k: int, prefix: list[CliffordGate], backward: bool = False
    ) -> Iterator[tuple[list[CliffordGate], int]]:
        """Orders of ``pool`` using at most ``k`` discrepancies, with the count used.

        Backward mode starts from the state after the whole pool and peels
        gates off the end; the returned order is still forward.
        """
        if not pool:
            yield [], 0
            return
        key = (backward, bits.tobytes(), frozenset(pool))
        if self.dead.get(key, -1) >= k:
            return
        found = False
        cost = 0
        seen = set()
        for idx, g in enumerate(pool):
            if g in seen:
                continue
            seen.add(g)
            if backward:
                if not self.check(bits, g):
                    continue
                nb = self.step(bits, g)
            else:
                nb = self.step(bits, g)
                if not self.check(nb, g):
                    self.note(prefix, g)
                    continue
            if cost > k:
                break
            rest = pool[:idx] + pool[idx + 1 :]
            for tail, used in self.orders(nb, rest, k - cost, prefix + [g], backward):
                found = True
                yield ([g] + tail if not backward else tail + [g]), used + cost
            cost = 1
        if not found:
            self.dead[key] = max(self.dead.get(key, -1), k)

    def note(self, prefix: list[CliffordGate], failing: CliffordGate) -> None:
        if len(prefix) >= len(self.best):
            self.best = list(prefix)
            self.best_fail = failing


def order_for_fault_tolerance(
    plan: ConversionPlan,
    verifier: StepCheck = step_passes,
    budget: int = DEFAULT_BUDGET,
    draft: ConversionCircuit | None = None,
) -> ConversionCircuit:
    """Reorder the A/C and B phases so that every prefix passes ``verifier``.

    A-phase CNOTs and C-phase CZs form one pool (a CNOT may follow a CZ);
    the B-phase gates are recomputed from whichever A/C order is chosen.
    Discrepancies from the draft order are allowed in increasing total
    number, split between the A/C and B pools; each B pool is tried forward
    from the A/C result and backward from the target form.
    """
    draft = draft or plan.draft
    N = plan.N
    src, tgt = plan.source_iabc, plan.target_iabc
    usrc = draft.phase("U_source")
    utgt_inv = draft.phase("U_target_inverse")
    ac_draft = [g for g, ph in zip(draft.gates, draft.phases) if ph in ("A_diff", "C_diff")]
    b_draft = draft.phase("B_diff")
    a_set = set(draft.phase("A_diff"))
    search = _Search(verifier, budget, N)

    def done(ac, b):
        plan.verifier_calls = search.calls
        log.debug("ordering found after %d verifier calls", search.calls)
        return _assemble(N, usrc, ac, a_set, b, utgt_inv)

    try:
        bad = search.prefix_ok(plan.augmented_source.generators.copy(), usrc)
        if bad >= 0:
            raise OrderingExhausted(
                f"source IABC record fails at step {bad + 1} ({usrc[bad]})", usrc[:bad], usrc[bad], search.calls
            )
        bad = search.prefix_ok(tgt.code.generators.copy(), utgt_inv)
        if bad >= 0:
            raise OrderingExhausted(
                f"inverse target record fails at {utgt_inv[bad]}", usrc, utgt_inv[bad], search.calls
            )
        # same group as the gate image of the record, in IABC row order
        mid = src.code.generators.copy()
        end = tgt.code.generators.copy()
        b_cache: dict = {}
        tried: dict = {}
        total = len(ac_draft) + len(b_draft) + 1
        for d in range(total + 1):
            for ac, used in search.orders(mid, ac_draft, d, list(usrc)):
                key = tuple(ac)
                if key not in b_cache:
                    b_set, _ = b_gates_from(apply_gates(src.code, ac), tgt)
                    b_cache[key] = _by_preference(b_set, b_draft)
                pool = b_cache[key]
                kb = d - used
                pk = frozenset(pool)
                if tried.get(pk, -1) >= kb:
                    continue
                tried[pk] = kb
                after = search.step(end, pool[0]) if pool else end
                for g in pool[1:]:
                    after = search.step(after, g)
                for b, _ in search.orders(after, pool, kb, list(usrc) + ac):
                    return done(ac, b)
                for b, _ in search.orders(end, pool[::-1], kb, [], backward=True):
                    return done(ac, b)
    except _OutOfBudget:
        plan.verifier_calls = search.calls
        raise OrderingExhausted(
            f"verifier budget of {budget} calls exhausted", search.best, search.best_fail, search.calls
        ) from None
    plan.verifier_calls = search.calls
    raise OrderingExhausted("no fault-tolerant ordering exists", search.best, search.best_fail, search.calls)


# --------------------------------------------------------------------------
# planning


def _min_ancillas(code: StabilizerCode, cap: int = 16) -> int:
    for m in range(cap + 1):
        try:
            augmented_iabc(code, m)
            return m
        except LayoutError:
            continue
    raise LayoutError(f"no IABC layout with up to {cap} ancillas")


def default_ancillas(source: StabilizerCode, target: StabilizerCode) -> tuple[int, int]:
    """(m1, m2) padding both codes to the smallest common qubit count that
    each can reach with a valid augmented IABC layout."""
    N = max(source.n + _min_ancillas(source), target.n + _min_ancillas(target))
    return N - source.n, N - target.n


def plan_conversion(
    source: StabilizerCode,
    target: StabilizerCode,
    m1: int,
    m2: int,
    *,
    schedule: bool = True,
    preferred: Sequence[CliffordGate] | None = None,
    verifier: StepCheck = step_passes,
    budget: int = DEFAULT_BUDGET,
    strict_signs: bool = False,
) -> ConversionPlan:
    """Synthesize the circuit taking ``source`` + m1 ancillas to ``target`` + m2.

    ``preferred`` optionally lists gates in a desired order; the A/C and B
    drafts follow it where it names their gates. With ``schedule`` the drafts
    are reordered for fault tolerance, otherwise they are emitted as drafted.
    ``strict_signs`` appends Pauli corrections (built from P and H) so the
    output matches the target generators' signs as well.
    """
    if source.k != target.k:
        raise KMismatchError(f"source encodes k={source.k}, target k={target.k}")
    if source.n + m1 != target.n + m2:
        raise QubitCountError(f"{source.n}+{m1} qubits vs {target.n}+{m2} qubits")
    src = augmented_iabc(source, m1)
    tgt = augmented_iabc(target, m2)
    _check_same_layout(src, tgt)

    a, c = a_c_gates(src, tgt)
    if preferred is not None:
        preferred = list(preferred)
        rec = list(src.u_record)
        if preferred[: len(rec)] == rec:
            # the source record shares gates with the A/C phases
            preferred = preferred[len(rec) :]
    ac = _by_preference(a + c, preferred)
    diff = difference_gates(src, tgt, ac)
    b = _by_preference(diff.b_gates, preferred)
    utgt_inv = _inverse_record(tgt.u_record)
    N = src.N
    draft = _assemble(N, src.u_record, ac, set(a), b, utgt_inv)
    plan = ConversionPlan(
        source, target, m1, m2, src, tgt, src.A ^ tgt.A, src.C ^ tgt.C, diff.d_matrix, draft, draft
    )
    if schedule:
        plan.circuit = order_for_fault_tolerance(plan, verifier, budget)
        plan.scheduled = True
        ac_done = [g for g, ph in zip(plan.circuit.gates, plan.circuit.phases) if ph in ("A_diff", "C_diff")]
        plan.d_matrix = difference_gates(src, tgt, ac_done).d_matrix
    if strict_signs:
        plan.circuit, plan.sign_fix = with_sign_fix(plan.circuit, plan.augmented_source, plan.augmented_target)
    return plan


def with_sign_fix(
    circuit: ConversionCircuit, code0: StabilizerCode, want: StabilizerCode
) -> tuple[ConversionCircuit, list[CliffordGate]]:
    """``circuit`` followed by the Pauli frame fix that makes its output equal
    ``want`` including signs, and the fix itself."""
    fix = sign_fix_gates(apply_gates(code0, circuit), want)
    out = ConversionCircuit(
        circuit.n, circuit.gates + tuple(fix), circuit.phases + ("U_target_inverse",) * len(fix)
    )
    return out, fix


def pauli_gates(p: PauliOperator) -> list[CliffordGate]:
    """P and H gates whose conjugation action equals that of the Pauli ``p``."""
    out: list[CliffordGate] = []
    for q in range(p.n):
        if (p.z >> q) & 1:
            out += [P(q), P(q)]
        if (p.x >> q) & 1:
            out += [H(q), P(q), P(q), H(q)]
    return out


def sign_fix_gates(got: StabilizerCode, want: StabilizerCode) -> list[CliffordGate]:
    """Pauli frame correction making ``got`` equal ``want`` including signs."""
    cg, cw = canonical(got), canonical(want)
    if not np.array_equal(cg.generators, cw.generators):
        raise InternalConsistencyError("codes differ beyond signs")
    flips = cg.sign_bits ^ cw.sign_bits
    if not flips.any():
        return []
    n = got.n
    # Want Q with symplectic product against canonical row i equal to flips[i].
    # Swapping the X and Z halves turns that into an ordinary linear system.
    swapped = np.hstack([cg.generators[:, n:], cg.generators[:, :n]])
    aug = np.hstack([swapped, flips[:, None]]).astype(np.uint8)
    red, piv = K.rref(aug)
    if piv.size and piv[-1] == 2 * n:
        raise InternalConsistencyError("sign correction has no solution")
    sol = np.zeros(2 * n, np.uint8)
    for i, col in enumerate(piv):
        sol[col] = red[i, -1]
    q = PauliOperator.from_bits(sol)
    fixed = apply_gates(got, pauli_gates(q))
    if not same_group(fixed, want, strict=True):
        raise InternalConsistencyError("sign correction failed")
    return pauli_gates(q)


# --------------------------------------------------------------------------
# simplification

_SELF_INVERSE = ("H", "CNOT", "CZ", "SWAP")


class _Commuter:
    """Cached symplectic commutation tests between gate blocks."""

    def __init__(self, n: int):
        self.n = n
        self.cache: dict = {}

    def matrix(self, gates: tuple[CliffordGate, ...]) -> np.ndarray:
        hit = self.cache.get(gates)
        if hit is None:
            hit = symplectic_matrix(gates, self.n)
            self.cache[gates] = hit
        return hit

    def commute(self, a: tuple[CliffordGate, ...], b: tuple[CliffordGate, ...]) -> bool:
        if not {q for g in a for q in g.qubits} & {q for g in b for q in g.qubits}:
            return True
        return np.array_equal(self.matrix(a + b), self.matrix(b + a))


def _cancellations(gates: list[CliffordGate], comm: _Commuter) -> Iterator[tuple[int, int]]:
    """Pairs (i, j) of equal self-inverse gates with everything between them
    commuting past gate j, nearest pairs first."""
    for j in range(len(gates)):
        g = gates[j]
        if g.kind not in _SELF_INVERSE:
            continue
        for i in range(j - 1, -1, -1):
            if gates[i] == g:
                yield i, j
                break
            if not comm.commute((gates[i],), (g,)):
                break


def simplify(
    circuit: ConversionCircuit,
    code0: StabilizerCode,
    verifier: StepCheck = step_passes,
    max_block: int = 4,
) -> ConversionCircuit:
    """Cancel repeated self-inverse gates while keeping every prefix verified.

    Moves are exact at the symplectic level: a gate slides past neighbours it
    commutes with, and two adjacent blocks whose products commute may trade
    places when that exposes a cancellation. The conjugation action of the
    whole circuit is unchanged up to signs, so output signs may differ; run
    :func:`with_sign_fix` afterwards when they matter.
    """
    n = circuit.n
    gates = list(circuit.gates)
    phases = list(circuit.phases)
    comm = _Commuter(n)
    reference = symplectic_matrix(gates, n)

    def passes(gs):
        return prefix_passes(code0, gs, verifier)[0]

    def try_cancel(gs, ps):
        for i, j in _cancellations(gs, comm):
            ng = gs[:i] + gs[i + 1 : j] + gs[j + 1 :]
            if passes(ng):
                return ng, ps[:i] + ps[i + 1 : j] + ps[j + 1 :]
        return None

    while True:
        hit = try_cancel(gates, phases)
        if hit is None:
            hit = _block_swap_then_cancel(gates, phases, comm, max_block, try_cancel)
        if hit is None:
            break
        gates, phases = hit
        log.debug("simplify: %d gates", len(gates))

    if not np.array_equal(symplectic_matrix(gates, n), reference):
        raise InternalConsistencyError("simplification changed the circuit action")
    return ConversionCircuit(n, tuple(gates), tuple(phases))


def _block_swap_then_cancel(gates, phases, comm, max_block, try_cancel):
    before = set(_cancellations(gates, comm))
    L = len(gates)
    for p in range(L):
        for a in range(2, max_block + 1):
            for b in range(2, max_block + 1):
                if p + a + b > L:
                    break
                left = tuple(gates[p : p + a])
                right = tuple(gates[p + a : p + a + b])
                if not comm.commute(left, right):
                    continue
                ng = gates[:p] + list(right) + list(left) + gates[p + a + b :]
                np_ = phases[:p] + phases[p + a : p + a + b] + phases[p : p + a] + phases[p + a + b :]
                fresh = [pair for pair in _cancellations(ng, comm) if _pair_key(ng, pair) not in _keys(gates, before)]
                if not fresh:
                    continue
                hit = try_cancel(ng, np_)
                if hit is not None and len(hit[0]) < L:
                    return hit
    return None


def _pair_key(gates, pair):
    i, j = pair
    return (gates[i], i, j)


def _keys(gates, pairs):
    return {_pair_key(gates, p) for p in pairs}
