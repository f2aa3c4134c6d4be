"""The numba kernels and the plain-Python fallback must agree."""
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from kinkforge import HAVE_NUMBA, backend, get_case, kernels

PROBE = r"""
import json, numpy as np
from kinkforge import backend, get_case, kernels
out = {"backend": backend()}
for cid in ("phi8.4dm.outer", "phi10.3dm.I", "phi12.6dm.mid"):
    case = get_case(cid); p = case.params(); pot = case.V(p); lo, hi = case.minima(p)
    args = pot.kernel_args()
    phi = np.linspace(lo, hi, 257)
    s = np.linspace(0.0, 20.0, 201)
    y, n, st = kernels.bps_dp45(*args, pot.lam**2, lo, hi, 0.5 * (lo + hi), s, 1.0, 1e-12, 1e-15, 1e-12, 1e-12, 200000)
    out[cid] = {"V": kernels.factored_eval(*args, phi).tolist(), "ode": y[:n].tolist(), "status": int(st)}
print(json.dumps(out))
"""


def _run(disable):
    env = dict(os.environ, KINKFORGE_DISABLE_NUMBA="1" if disable else "0")
    r = subprocess.run([sys.executable, "-c", PROBE], env=env, capture_output=True, text=True, check=True)
    return json.loads(r.stdout)


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not importable")
def test_numba_and_fallback_agree():
    fast, slow = _run(False), _run(True)
    assert fast["backend"] == "numba" and slow["backend"] == "python"
    for cid in ("phi8.4dm.outer", "phi10.3dm.I", "phi12.6dm.mid"):
        a, b = fast[cid], slow[cid]
        assert a["status"] == b["status"] == kernels.STATUS_OK
        assert np.allclose(a["V"], b["V"], rtol=1e-14, atol=1e-300)
        assert len(a["ode"]) == len(b["ode"])
        assert np.allclose(a["ode"], b["ode"], rtol=1e-13, atol=1e-15)


def test_backend_name():
    assert backend() in ("numba", "python")


def test_horner_and_factored_eval():
    c = np.array([1.0, -2.0, 3.0])
    assert kernels.horner(c, np.array([2.0, -1.0])).tolist() == [1 - 4 + 12, 1 + 2 + 3]
    case = get_case("phi10.4dm.inner")
    pot = case.V(case.params())
    x = np.linspace(-1.2, 1.2, 25)
    assert np.allclose(kernels.factored_eval(*pot.kernel_args(), x), pot(x), rtol=1e-14)


def test_negative_status():
    from kinkforge.potential import PolynomialPotential

    pot = PolynomialPotential((0.0, 0.0, -1.0, 0.0, 1.0))
    s = np.linspace(0.0, 1.0, 11)
    _, _, st = kernels.bps_dp45(*pot.kernel_args(), 1.0, 0.0, 1.0, 0.5, s, 1.0, 1e-12, 1e-15, 1e-12, 1e-12, 1000)
    assert st == kernels.STATUS_NEGATIVE
