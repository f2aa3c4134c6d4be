import math

import numpy as np
import pytest

from kinkforge import catalog
from kinkforge.phonons import (
    NotEquilibrium,
    PhononBranch,
    branch,
    dispersion,
    mass_term,
    mass_term_fd,
    phonon_table,
    table_csv,
)
from kinkforge.potential import FactoredPotential, PolynomialPotential

ROWS = phonon_table()


def test_table_sizes():
    # the phi12 table has 28 rows once every potential's equilibria are counted
    sizes = {t: len(phonon_table(table=t)) for t in ("I", "II", "III")}
    assert sizes == {"I": 8, "II": 16, "III": 28}
    assert phonon_table(family="phi10") == phonon_table(table="II")


@pytest.mark.parametrize("row", ROWS, ids=lambda r: f"{r.table}-{r.potential_eq}-{r.phi_e_label}")
def test_row_matches_closed_form(row):
    if row.closed == 0.0:
        assert row.numeric == 0.0 and row.kind == "acoustic_nonlinear"
    else:
        assert row.numeric == pytest.approx(row.closed, rel=1e-10)
        assert row.kind == "optical"


@pytest.mark.parametrize("row", [r for r in ROWS if r.closed != 0.0], ids=lambda r: f"{r.potential_eq}-{r.phi_e_label}")
def test_row_matches_finite_difference(row):
    case = next(c for c in catalog.list_cases() if c.potential_eq == row.potential_eq)
    fd = mass_term_fd(case.V(case.params()), row.phi_e)
    assert fd == pytest.approx(row.closed, rel=1e-6)


def test_printed_entries_that_disagree():
    bad = {(r.potential_eq, r.phi_e_label) for r in ROWS if r.printed != r.closed}
    # the single-lambda entry only differs away from lam = 1; the 1.15a entry
    # names a b the potential does not have, so it evaluates to zero here
    assert bad == {("1.80", "0"), ("3.5d", "±b")}
    noted = {(r.potential_eq, r.phi_e_label) for r in ROWS if r.note}
    assert noted == bad | {("7.5", "±a"), ("1.15a", "0")}


def test_maximum_is_rejected():
    phi4 = PolynomialPotential((1.0, 0.0, -2.0, 0.0, 1.0))
    assert mass_term(phi4, 0.0) == -4.0
    with pytest.raises(NotEquilibrium):
        branch(phi4, 0.0)
    with pytest.raises(NotEquilibrium):
        mass_term(phi4, 0.5)


def test_non_polynomial_factored_uses_vanishing_order():
    # |phi^2 - 1|^(5/2) vanishes faster than quadratically
    f = FactoredPotential.of((1.0, "minus", 2.5))
    assert mass_term(f, 1.0) == 0.0
    g = FactoredPotential.of((1.0, "minus", 2), lam=1.5)
    assert mass_term(g, 1.0) == pytest.approx(2 * 1.5**2 * 4)


def test_dispersion():
    br = PhononBranch(1.0, 8.0, "optical")
    q = np.array([0.0, 1.0, 3.0])
    assert np.allclose(dispersion(br, q), np.sqrt(q**2 + 8.0))
    flat = PhononBranch(0.0, 0.0, "acoustic_nonlinear")
    assert np.array_equal(dispersion(flat, q), q)


def test_lambda_scaling():
    case = catalog.get_case("phi8.4dm.inner")
    for lam in (0.5, 2.0):
        p = case.params(lam=lam)
        assert mass_term(case.V(p), p.a) == pytest.approx(lam**2 * mass_term(case.V(case.params()), p.a), rel=1e-12)


def test_csv_is_exact():
    text = table_csv(ROWS)
    lines = text.splitlines()
    assert lines[0].startswith("table,potential_eq_id,phi_e")
    assert len(lines) == len(ROWS) + 1
    first = lines[1].split(",")
    assert float(first[3]) == ROWS[0].closed
    assert not math.isnan(float(first[4]))
