import math

import numpy as np
import pytest

from kinkforge import qes

SQ2 = math.sqrt(2)


def _fd_residual(state, grid, h=1e-4):
    # independent route: psi'' by a fourth-order stencil, V from the alpha coefficients
    psi = state.psi
    d2 = (-psi(grid + 2 * h) + 16 * psi(grid + h) - 30 * psi(grid) + 16 * psi(grid - h) - psi(grid - 2 * h)) / (12 * h * h)
    V = state.lam**2 * np.polynomial.polynomial.polyval(grid, state.potential_coeffs())
    return np.max(np.abs(-d2 + 2 * (V - state.E) * psi(grid))) / np.max(np.abs(2 * V * psi(grid)))


def test_ground_level_energy():
    for B, C, lam in ((1.0, 2.0, 1.0), (-0.5, 0.3, 1.7), (0.2, -1.0, 0.4)):
        s = qes.make_state0(B, C, lam)
        assert s.E == C / 2
        assert s.nodes() == 0
        assert qes.schrodinger_residual(s) < 1e-12
        assert qes.free_energy(s) == C / 2


def test_level_one_frozen():
    # [DERIVED] B = 1, C = 2, lam = 1; checked by the finite-difference residual below
    (s,) = qes.make_state1(1.0, 2.0)
    assert s.D == pytest.approx(-0.2728614947852496, rel=1e-12)
    assert s.E == pytest.approx(4.664863013328541, rel=1e-12)
    assert s.nodes() == 2
    assert _fd_residual(s, np.linspace(-1.5, 1.5, 301)) < 1e-6


def test_level_two_frozen():
    # [DERIVED] B = 1, C = 2, lam = 1
    states = qes.make_state2(1.0, 2.0)
    got = [(s.D, s.J, s.E) for s in states]
    want = [(-1.2024938704591575, 0.13477072323789832, 9.922515525397204),
            (0.034149934722654665, 1.4310889016223491, 0.976137097643661)]
    assert np.allclose(got, want, rtol=1e-10)
    assert [s.nodes() for s in states] == [4, 0]
    for s in states:
        r1, r2 = qes.dj_relations(s.D, s.J, s.B, s.C, s.lam)
        assert abs(r1) < 1e-10 and abs(r2) < 1e-10
        assert _fd_residual(s, np.linspace(-1.5, 1.5, 301)) < 1e-6


def test_printed_h_breaks_the_equation():
    s = qes.make_state2(1.0, 2.0)[1]
    assert s.H == qes.state2_H(s.D, s.J, s.C)
    printed = qes.state2_H(s.D, s.J, s.C, printed=True)
    assert printed != pytest.approx(s.H, rel=1e-3)
    a8, a6, a4, a2, a0 = s.alphas
    wrong = qes.QESState(2, s.B, s.C, s.lam, s.D, s.J, s.E, s.F, s.G, printed,
                         (a8, a6, a4, (s.C**2 + 3 * s.B + printed) / 2, a0))
    assert qes.schrodinger_residual(wrong) > 1e-3


def test_alpha4_progression():
    B, C, lam = 0.7, 1.3, 0.9
    states = [qes.make_state0(B, C, lam), qes.make_state1(B, C, lam)[0], qes.make_state2(B, C, lam)[0]]
    a4 = [s.alphas[2] for s in states]
    assert np.allclose([(2 * lam * lam * v - 2 * B * C) / (SQ2 * lam) for v in a4], [5, 9, 13], rtol=1e-12)


def test_free_energy_rejects_excited_states():
    s2 = qes.make_state2(1.0, 2.0)
    with pytest.raises(qes.NotGroundState):
        qes.free_energy(s2[0])
    assert qes.free_energy(s2[1], siblings=s2) == s2[1].E
    with pytest.raises(qes.NotGroundState):
        qes.free_energy(qes.make_state1(1.0, 2.0)[0])


def test_pdf_is_normalised():
    from scipy.integrate import simpson

    s = qes.make_state2(1.0, 2.0)[1]
    Phi = qes.cutoff(s)
    g = np.linspace(-Phi, Phi, 20001)
    assert simpson(qes.pdf(s, g), x=g) == pytest.approx(1.0, abs=1e-9)
    assert np.all(qes.pdf(s, g) >= 0)


def test_positive_b_c_gives_negative_cubic_roots():
    rng = np.random.default_rng(3)
    for B, C, lam in rng.uniform([0.05, 0.05, 0.3], [3, 3, 2], size=(50, 3)):
        for s in qes.make_state1(B, C, lam):
            assert s.D < 0


def test_errors():
    with pytest.raises(qes.QESError):
        qes.make_state0(1.0, 1.0, 0.0)


def test_json_and_csv():
    s = qes.make_state0(1.0, 2.0)
    d = s.to_dict()
    assert d["E"] == 1.0 and d["alphas"]["alpha0"] == 0.0
    lines = qes.states_csv(qes.make_state2(1.0, 2.0)).splitlines()
    assert len(lines) == 3 and lines[0].startswith("level,B,C,D,J")
