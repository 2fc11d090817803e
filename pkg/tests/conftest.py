from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

from ftconv.codes import augment
from ftconv.io import load_circuit
from ftconv.library import build_reed_muller_15, five_qubit_code, qpc_code, steane_code

GOLDEN = Path(__file__).parent / "golden"

# (fixture file, source, m1, target, m2)
CONVERSIONS = {
    "five_to_steane": (five_qubit_code, 3, steane_code, 1),
    "steane_to_rm15": (steane_code, 8, build_reed_muller_15, 0),
    "steane_to_qpc34": (steane_code, 5, qpc_code, 0),
}


def load_matrix(name: str) -> np.ndarray:
    rows = []
    for line in (GOLDEN / f"{name}.txt").read_text().splitlines():
        line = line.split("#", 1)[0].replace("|", " ").split()
        if line:
            rows.append([int(t) for t in line])
    return np.array(rows, dtype=np.uint8)


def reference(name: str):
    """(augmented source, augmented target, reference circuit) for a fixture."""
    src, m1, tgt, m2 = CONVERSIONS[name]
    s, t = src(), tgt()
    circ = load_circuit(GOLDEN / f"{name}.txt", s.n + m1)
    return augment(s, m1), augment(t, m2), circ


@pytest.fixture(params=sorted(CONVERSIONS))
def conversion(request):
    return request.param, *reference(request.param)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for num in sorted(lines):
            terminalreporter.write_line(lines[num])
