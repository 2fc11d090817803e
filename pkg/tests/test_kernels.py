import os
import subprocess
import sys

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ftconv import _kernels as K
from ftconv.codes import apply_gates, augment, low_weight_errors
from ftconv.library import steane_code
from ftconv.pauli import CNOT, CZ
from ftconv.verify import _step_index

bit_mats = st.integers(1, 8).flatmap(
    lambda r: st.integers(1, 6).flatmap(lambda n: arrays(np.uint8, (r, 2 * n), elements=st.integers(0, 1)))
)


def gf2_rank(m):
    m = m.copy() % 2
    r = 0
    for c in range(m.shape[1]):
        rows = [i for i in range(r, m.shape[0]) if m[i, c]]
        if not rows:
            continue
        m[[r, rows[0]]] = m[[rows[0], r]]
        for i in range(m.shape[0]):
            if i != r and m[i, c]:
                m[i] ^= m[r]
        r += 1
    return r


@settings(max_examples=150, deadline=None)
@given(bit_mats)
def test_rref_paths_agree(mat):
    red, piv = K.rref(mat)
    red_np, piv_np = K._rref_np(mat)
    assert np.array_equal(red, red_np) and np.array_equal(piv, piv_np)
    assert piv.size == gf2_rank(mat)
    assert K.in_rowspace(mat, mat).all()


@settings(max_examples=150, deadline=None)
@given(bit_mats, st.data())
def test_syndrome_and_residual_paths_agree(gens, data):
    n = gens.shape[1] // 2
    errs = data.draw(arrays(np.uint8, (5, 2 * n), elements=st.integers(0, 1)))
    assert np.array_equal(K.syndromes(gens, errs, n), K._syndromes_np(gens, errs, n))
    red, piv = K.rref(gens)
    assert np.array_equal(K.residuals(red, piv, errs), K._residuals_np(red, piv, errs))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from([CNOT(0, 7), CZ(1, 7), CNOT(7, 2), CZ(3, 4), CNOT(5, 6)]), max_size=8))
def test_step_verdict_paths_agree(gates):
    code = apply_gates(augment(steane_code(), 1), gates)
    errs = low_weight_errors(code.n)
    for g in (None, CNOT(0, 7), CZ(2, 5)):
        idx = _step_index(g, code.n)
        assert K.step_verdict(code.generators, errs, idx, code.n) == K._step_verdict_np(
            code.generators, errs, idx, code.n
        )


def test_env_flag_selects_numpy():
    env = dict(os.environ, FTCONV_NUMBA="0")
    out = subprocess.run(
        [sys.executable, "-c", "from ftconv import _kernels as K; print(K.backend())"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "numpy"


def test_pack_rows():
    bits = np.array([[1, 0, 1], [0, 0, 0]], np.uint8)
    assert K.pack_rows(bits).tolist() == [5, 0]
