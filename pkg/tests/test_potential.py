import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kinkforge import roots
from kinkforge.potential import (
    AlphaForm,
    FactoredPotential,
    NonPolynomial,
    PolynomialPotential,
    PotentialError,
    check_phi8_first_order,
    classify_critical_points,
    default_tol,
    phi8_scan_template,
    phi10_scan_template,
    example_potential,
    expand_factored,
    phi8_ratio_window,
    phi10_alpha_map,
    potential_from_json,
    scan_phase,
)

shift = st.floats(0.05, 3.0)


def test_polynomial_basics():
    p = PolynomialPotential((1.0, 0.0, -2.0, 0.0, 1.0), lam=2.0)
    assert p.degree == 4
    assert p(1.0) == 0.0
    assert p(0.0) == pytest.approx(4.0)
    assert p.derivative(0.5) == pytest.approx(4 * (4 * 0.125 - 4 * 0.5))
    assert p.d2(1.0) == pytest.approx(4 * 8.0)


@pytest.mark.parametrize("coeffs", [(1.0, 1.0, 1.0), (1.0, 0.0, -1.0), ()])
def test_polynomial_rejects(coeffs):
    with pytest.raises(PotentialError):
        PolynomialPotential(coeffs)


def test_lambda_must_be_positive():
    with pytest.raises(PotentialError):
        PolynomialPotential((0.0, 0.0, 1.0), lam=0.0)
    with pytest.raises(PotentialError):
        FactoredPotential.of((1.0, "minus", 2), lam=-1.0)


def test_classify_phi4():
    cps = classify_critical_points(PolynomialPotential((1.0, 0.0, -2.0, 0.0, 1.0)))
    assert [c.kind for c in cps.points] == ["minimum", "maximum", "minimum"]
    assert [c.location for c in cps.degenerate_minima] == [-1.0, 1.0]
    rows = list(cps.csv_rows())
    assert rows[0] == ("phi_e", "kind", "value", "degenerate")


def test_quartic_order_minimum_is_not_an_inflection():
    # (phi^2 - 1)^4: V'' vanishes at the minima
    cps = classify_critical_points(expand_factored(FactoredPotential.of((1.0, "minus", 4))))
    kinds = {round(c.location, 12): c.kind for c in cps.points}
    assert kinds[1.0] == "minimum" and kinds[-1.0] == "minimum"


def test_phi8_scan_alpha2_one_four_degenerate_minima():
    # [PAPER] a = (sqrt3-1)/2, b = (sqrt3+1)/2 at alpha2 = 1
    cps = scan_phase(phi8_scan_template(), "alpha2", [1.0])[0]
    locs = [c.location for c in cps.degenerate_minima]
    a, b = (math.sqrt(3) - 1) / 2, (math.sqrt(3) + 1) / 2
    assert locs == pytest.approx([-b, -a, a, b], abs=1e-12)


def test_phi8_scan_alpha2_two_inflections():
    # [DERIVED: V' = 8 phi (phi^2 - 2)(phi^2 - 1/2)^2]
    cps = scan_phase(phi8_scan_template(), "alpha2", [2.0])[0]
    assert [c.location for c in cps.inflections] == pytest.approx([-1 / math.sqrt(2), 1 / math.sqrt(2)])
    assert [c.location for c in cps.minima] == pytest.approx([-math.sqrt(2), math.sqrt(2)])


def test_phi10_scan_true_crossover():
    # [DERIVED: bisection on V(0) - V(a_hat)]; 0 and +-a_hat are degenerate at alpha2 = 2.229347
    tmpl = phi10_scan_template()
    cps = classify_critical_points(tmpl.with_alpha("alpha2", 2.229347).to_polynomial(), tol=1e-6)
    assert len(cps.degenerate_minima) == 3
    assert cps.degenerate_minima[2].location == pytest.approx(0.805, abs=2e-3)


def test_phi8_examples_are_scan_members():
    # [DERIVED] alpha2 = 121/128 and 135/128 up to the constant term
    for name, a2 in (("phi8.above", 121 / 128), ("phi8.below", 135 / 128)):
        c = expand_factored(example_potential(name)).coeffs
        t = phi8_scan_template().with_alpha("alpha2", a2).to_polynomial().coeffs
        assert np.allclose(c[1:], t[1:], atol=1e-14)


def test_alpha_form_round_trip():
    af = AlphaForm("phi10", {"alpha8": 1.5, "alpha6": 0.3, "alpha4": 2.0, "alpha2": 0.1, "alpha0": 0.2})
    back = AlphaForm.from_polynomial(af.to_polynomial(), "phi10")
    assert back == af
    with pytest.raises(PotentialError):
        AlphaForm("phi9")
    with pytest.raises(PotentialError):
        AlphaForm("phi8", {"alpha7": 1.0})


def test_phi10_alpha_map_matches_expansion():
    a, b, c = 0.5, 1.0, 0.75
    pot = expand_factored(FactoredPotential.of((a * a, "minus", 2), (b * b, "minus", 2), (c * c, "plus", 1)))
    af = AlphaForm.from_polynomial(pot, "phi10")
    m = phi10_alpha_map(a, b, c)
    for k, v in m.items():
        assert af.alphas[k] == pytest.approx(v, abs=1e-14)


def test_phi8_first_order_relation():
    a, b = 0.5, 1.2
    A, B = a * a, b * b
    a6, a4, a2 = 2 * (A + B), A * A + B * B + 4 * A * B, 2 * A * B * (A + B)
    assert check_phi8_first_order(a6, a4, a2).ok
    assert not check_phi8_first_order(a6, a4, 1.1 * a2).ok
    with pytest.raises(PotentialError):
        check_phi8_first_order(-1.0, 1.0, 1.0)


@pytest.mark.parametrize("r,label", [(0.2, "below"), (0.26, "local_minima_persist"), (9 / 32, "inflection_boundary"),
                                     (0.3, "minima_vanish_early"), (0.4, "above")])
def test_phi8_ratio_window(r, label):
    assert phi8_ratio_window(1.0, r) == label


def test_factored_json_round_trip():
    f = FactoredPotential.of((0.25, "minus", 2), (1.0, "plus", 1), lam=1.5, phi2_power=1)
    g = potential_from_json(f.to_json())
    assert g == f
    p = expand_factored(f)
    assert potential_from_json(p.to_json()) == p


def test_non_polynomial_cannot_expand():
    with pytest.raises(NonPolynomial):
        expand_factored(FactoredPotential.of((1.0, "minus", 5), absolute=True))


def test_vanishing_order():
    f = FactoredPotential.of((0.64, "minus", 2), phi2_power=3)
    assert f.vanishing_order(0.0) == (6.0, 0.64**2)
    order, k = f.vanishing_order(0.8)
    assert order == 2.0 and k == pytest.approx(0.64**3 * 1.6**2)


def test_default_tol_env(monkeypatch):
    assert default_tol() == 1e-9
    monkeypatch.setenv("KINKFORGE_TOL", "1e-6")
    assert default_tol() == 1e-6


@settings(max_examples=60, deadline=None)
@given(shift, shift, st.floats(0.2, 3.0))
def test_expand_matches_factored(r1, r2, lam):
    f = FactoredPotential.of((r1, "minus", 2), (r2, "plus", 1), lam=lam, phi2_power=1)
    x = np.linspace(-2, 2, 17)
    assert np.allclose(expand_factored(f)(x), f(x), rtol=1e-12, atol=1e-12 * lam**2)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.1, 1.0), st.floats(1.1, 2.5))
def test_factored_phi8_has_four_degenerate_minima(a, ratio):
    b = a * ratio
    p = expand_factored(FactoredPotential.of((a * a, "minus", 2), (b * b, "minus", 2)))
    locs = [c.location for c in classify_critical_points(p).degenerate_minima]
    assert locs == pytest.approx([-b, -a, a, b], rel=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-3, 3).filter(lambda v: abs(v) > 1e-3), min_size=1, max_size=5, unique=True))
def test_real_roots_recovers_product(rts):
    # [DERIVED] exact product of (x - r_i) has exactly those roots
    p = [Fraction(1)]
    for r in rts:
        fr = Fraction(r)
        p = [(p[i - 1] if i > 0 else 0) - fr * (p[i] if i < len(p) else 0) for i in range(len(p) + 1)]
    found = roots.real_roots(p)
    assert [x for x, _ in found] == pytest.approx(sorted(rts), abs=1e-9)


def test_real_roots_multiplicity():
    # (x - 1)^3 (x + 2)
    p = [Fraction(c) for c in (2, -5, 3, 1, -1)]
    p = [-c for c in p]  # sign does not matter
    assert roots.real_roots(p) == [(-2.0, 1), (1.0, 3)]
