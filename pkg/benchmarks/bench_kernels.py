"""Compare the numba and numpy kernel paths.

Runs itself in two subprocesses, one per FTCONV_NUMBA setting, since the
backend is chosen at import time.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys
import time


def workload(repeat: int) -> dict:
    from ftconv import _kernels as K
    from ftconv.codes import augment, low_weight_errors
    from ftconv.library import build_reed_muller_15, steane_code
    from ftconv.pauli import CZ
    from ftconv.synth import plan_conversion
    from ftconv.verify import _step_index, step_passes

    code = augment(build_reed_muller_15(), 1)
    gens, n = code.generators, code.n
    errs = low_weight_errors(n)
    idx = _step_index(CZ(0, 5), n)
    step_passes(gens, CZ(0, 5), n)  # compile

    out = {"backend": K.backend()}
    t = time.perf_counter()
    for _ in range(200 * repeat):
        K.step_verdict(gens, errs, idx, n)
    out["step_verdict_us"] = (time.perf_counter() - t) / (200 * repeat) * 1e6

    t = time.perf_counter()
    for _ in range(200 * repeat):
        K.rref(gens)
    out["rref_us"] = (time.perf_counter() - t) / (200 * repeat) * 1e6

    t = time.perf_counter()
    for _ in range(repeat):
        plan_conversion(steane_code(), build_reed_muller_15(), 8, 0)
    out["plan_steane_rm15_s"] = (time.perf_counter() - t) / repeat
    return out


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.child:
        print(json.dumps(workload(args.repeat)))
        return
    rows = []
    for flag in ("1", "0"):
        env = dict(os.environ, FTCONV_NUMBA=flag)
        res = subprocess.run(
            [sys.executable, __file__, "--child", "--repeat", str(args.repeat)],
            env=env, capture_output=True, text=True, check=True,
        )
        rows.append(json.loads(res.stdout.strip().splitlines()[-1]))
    keys = [k for k in rows[0] if k != "backend"]
    print(f"{'metric':<22}" + "".join(f"{r['backend']:>12}" for r in rows) + f"{'speedup':>10}")
    for k in keys:
        a, b = rows[0][k], rows[1][k]
        print(f"{k:<22}{a:>12.2f}{b:>12.2f}{b / a:>9.1f}x")


if __name__ == "__main__":
    main()
