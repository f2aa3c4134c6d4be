"""Time the hot kernels under numba and under the pure-Python fallback.

    python3 benchmarks/bench_kernels.py            # both backends, side by side
    python3 benchmarks/bench_kernels.py --single   # current backend only (JSON)

The fallback is selected by KINKFORGE_DISABLE_NUMBA=1 in a child process,
since the switch is read once at import time.
"""
import argparse
import json
import os
import subprocess
import sys
import time


def _best(f, repeat):
    f()  # warm-up (includes JIT compilation)
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        f()
        times.append(time.perf_counter() - t)
    return min(times)


def run_single(repeat):
    import numpy as np

    from kinkforge import backend, get_case, kernels

    case = get_case("phi12.6dm.mid")
    p = case.params()
    pot = case.V(p)
    args = pot.kernel_args()
    lo, hi = case.minima(p)
    phi = np.linspace(lo, hi, 20000)
    s_out = np.linspace(0.0, 60.0, 2001)
    phi0 = 0.5 * (lo + hi)

    def eval_v():
        kernels.factored_eval(*args, phi)

    def integrate():
        for d in (1.0, -1.0):
            kernels.bps_dp45(*args, pot.lam**2, lo, hi, phi0, s_out, d, 1e-12, 1e-15, 1e-12, 1e-12, 200000)

    return {
        "backend": backend(),
        "factored_eval_20k": _best(eval_v, repeat),
        "bps_dp45_two_sided": _best(integrate, repeat),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--single", action="store_true")
    ap.add_argument("--repeat", type=int, default=5)
    a = ap.parse_args()
    if a.single:
        print(json.dumps(run_single(a.repeat)))
        return
    rows = []
    for flag in ("0", "1"):
        env = dict(os.environ, KINKFORGE_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, __file__, "--single", "--repeat", str(a.repeat)], env=env,
                             capture_output=True, text=True, check=True)
        rows.append(json.loads(out.stdout))
    print(f"{'kernel':24s} " + " ".join(f"{r['backend']:>12s}" for r in rows) + "    speedup")
    for key in ("factored_eval_20k", "bps_dp45_two_sided"):
        vals = [r[key] for r in rows]
        print(f"{key:24s} " + " ".join(f"{v:12.3e}" for v in vals) + f"   {vals[1] / vals[0]:8.1f}x")


if __name__ == "__main__":
    main()
