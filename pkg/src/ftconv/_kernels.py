"""GF(2) kernels over uint8 bit matrices.

Every kernel exists twice: a loop form compiled with numba ``@njit`` and a
vectorized numpy form. ``FTCONV_NUMBA=0`` in the environment (or numba
failing to import) selects the numpy path at import time. Both paths take and
return identical dtypes and shapes, so callers never branch.
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("FTCONV_NUMBA", "1").strip().lower()
_WANT_NUMBA = _FLAG not in ("0", "false", "no", "off")

try:
    if not _WANT_NUMBA:
        raise ImportError
    from numba import njit
except ImportError:  # pragma: no cover - exercised via the env flag
    njit = None

USE_NUMBA = njit is not None


# --------------------------------------------------------------------------
# numpy implementations


def _rref_np(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    m = mat.copy()
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.nonzero(m[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            m[[r, p]] = m[[p, r]]
        mask = m[:, c].astype(bool)
        mask[r] = False
        m[mask] ^= m[r]
        pivots.append(c)
        r += 1
    return m, np.array(pivots, dtype=np.int64)


def _syndromes_np(gens: np.ndarray, errs: np.ndarray, n: int) -> np.ndarray:
    gx = gens[:, :n].astype(np.int64)
    gz = gens[:, n:].astype(np.int64)
    ex = errs[:, :n].astype(np.int64)
    ez = errs[:, n:].astype(np.int64)
    return ((ex @ gz.T + ez @ gx.T) & 1).astype(np.uint8)


def _residuals_np(red: np.ndarray, pivots: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    out = vecs.copy()
    for i, c in enumerate(pivots):
        mask = out[:, c].astype(bool)
        out[mask] ^= red[i]
    return out


def _step_verdict_np(gens: np.ndarray, errs: np.ndarray, idx: np.ndarray, n: int) -> bool:
    red, piv = _rref_np(gens)
    syn = _syndromes_np(gens, errs, n)
    quiet = ~syn.any(axis=1)
    if quiet.any() and _residuals_np(red, piv, errs[quiet]).any():
        return False
    sub = syn[idx]
    keys = sub.astype(np.int64) @ np.left_shift(np.int64(1), np.arange(sub.shape[1], dtype=np.int64))
    order = np.argsort(keys, kind="stable")
    keys = keys[order]
    rows = errs[idx][order]
    prods = []
    start = 0
    for i in range(1, len(keys) + 1):
        if i == len(keys) or keys[i] != keys[start]:
            if keys[start] != 0 and i - start > 1:
                for a in range(start, i):
                    for b in range(a + 1, i):
                        prods.append(rows[a] ^ rows[b])
            start = i
    if not prods:
        return True
    return not _residuals_np(red, piv, np.array(prods, dtype=np.uint8)).any()


def _symplectic_np(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """Pairwise symplectic products, shape (len(a), len(b))."""
    return _syndromes_np(b, a, n)


# --------------------------------------------------------------------------
# numba implementations

if USE_NUMBA:

    @njit(cache=True)
    def _rref_nb(mat):
        m = mat.copy()
        rows, cols = m.shape
        pivots = np.empty(min(rows, cols), dtype=np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            p = -1
            for i in range(r, rows):
                if m[i, c]:
                    p = i
                    break
            if p < 0:
                continue
            if p != r:
                for j in range(cols):
                    t = m[r, j]
                    m[r, j] = m[p, j]
                    m[p, j] = t
            for i in range(rows):
                if i != r and m[i, c]:
                    for j in range(cols):
                        m[i, j] ^= m[r, j]
            pivots[r] = c
            r += 1
        return m, pivots[:r].copy()

    @njit(cache=True)
    def _syndromes_nb(gens, errs, n):
        ne = errs.shape[0]
        ng = gens.shape[0]
        out = np.zeros((ne, ng), dtype=np.uint8)
        for e in range(ne):
            for g in range(ng):
                acc = 0
                for q in range(n):
                    acc ^= (errs[e, q] & gens[g, n + q]) ^ (errs[e, n + q] & gens[g, q])
                out[e, g] = acc
        return out

    @njit(cache=True)
    def _residuals_nb(red, pivots, vecs):
        out = vecs.copy()
        nv, width = out.shape
        for v in range(nv):
            for i in range(pivots.shape[0]):
                c = pivots[i]
                if out[v, c]:
                    for j in range(width):
                        out[v, j] ^= red[i, j]
        return out


    @njit(cache=True)
    def _reduces_to_zero(red, pivots, v):
        w = v.copy()
        for i in range(pivots.shape[0]):
            if w[pivots[i]]:
                for j in range(w.shape[0]):
                    w[j] ^= red[i, j]
        for j in range(w.shape[0]):
            if w[j]:
                return False
        return True

    @njit(cache=True)
    def _step_verdict_nb(gens, errs, idx, n):
        red, piv = _rref_nb(gens)
        ng = gens.shape[0]
        ne = errs.shape[0]
        keys = np.zeros(ne, dtype=np.int64)
        for e in range(ne):
            key = 0
            for g in range(ng):
                acc = 0
                for q in range(n):
                    acc ^= (errs[e, q] & gens[g, n + q]) ^ (errs[e, n + q] & gens[g, q])
                key |= np.int64(acc) << g
            keys[e] = key
            if key == 0 and not _reduces_to_zero(red, piv, errs[e]):
                return False
        m = idx.shape[0]
        for a in range(m):
            ka = keys[idx[a]]
            if ka == 0:
                continue
            for b in range(a + 1, m):
                if keys[idx[b]] == ka:
                    if not _reduces_to_zero(red, piv, errs[idx[a]] ^ errs[idx[b]]):
                        return False
        return True


def _as_bits(mat: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(mat, dtype=np.uint8)


def rref(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form over GF(2) and the pivot column indices."""
    mat = _as_bits(mat)
    if mat.size == 0:
        return mat.copy(), np.zeros(0, dtype=np.int64)
    if USE_NUMBA:
        return _rref_nb(mat)
    return _rref_np(mat)


def syndromes(gens: np.ndarray, errs: np.ndarray, n: int) -> np.ndarray:
    """Row ``e`` column ``g``: symplectic product of error e with generator g."""
    gens = _as_bits(gens)
    errs = _as_bits(errs)
    if gens.shape[0] == 0 or errs.shape[0] == 0:
        return np.zeros((errs.shape[0], gens.shape[0]), dtype=np.uint8)
    if USE_NUMBA:
        return _syndromes_nb(gens, errs, n)
    return _syndromes_np(gens, errs, n)


def residuals(red: np.ndarray, pivots: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    """Reduce each row of ``vecs`` by an rref basis; all-zero rows lie in the span."""
    vecs = _as_bits(vecs)
    if vecs.shape[0] == 0 or pivots.size == 0:
        return vecs.copy()
    if USE_NUMBA:
        return _residuals_nb(_as_bits(red), pivots, vecs)
    return _residuals_np(red, pivots, vecs)


def step_verdict(gens: np.ndarray, errs: np.ndarray, idx: np.ndarray, n: int) -> bool:
    """Fused step check.

    ``errs`` holds every Pauli of weight <= 2 and ``idx`` picks the step's
    error set out of it. False if some undetectable row of ``errs`` is
    outside the stabilizer, or if two step errors share a nonzero syndrome
    and their product is outside the stabilizer.
    """
    gens = _as_bits(gens)
    if gens.shape[0] > 62:
        raise ValueError("step_verdict packs syndromes into 64-bit keys")
    if USE_NUMBA:
        return bool(_step_verdict_nb(gens, _as_bits(errs), np.ascontiguousarray(idx, dtype=np.int64), n))
    return bool(_step_verdict_np(gens, _as_bits(errs), np.asarray(idx, dtype=np.int64), n))


def rank(mat: np.ndarray) -> int:
    return int(rref(mat)[1].size)


def in_rowspace(basis: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    """Boolean mask: which rows of ``vecs`` are GF(2) combinations of ``basis``."""
    red, piv = rref(basis)
    return ~residuals(red, piv, vecs).any(axis=1)


def pack_rows(bits: np.ndarray) -> np.ndarray:
    """Pack each bit row into a Python-int-compatible key (row width < 63)."""
    if bits.shape[1] == 0:
        return np.zeros(bits.shape[0], dtype=np.int64)
    weights = np.left_shift(np.int64(1), np.arange(bits.shape[1], dtype=np.int64))
    return bits.astype(np.int64) @ weights


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
