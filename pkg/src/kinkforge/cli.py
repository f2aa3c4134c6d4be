"""kinkforge command line.

Exit status: 0 pass, 1 tolerance failure, 2 invalid parameters.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import tempfile

import numpy as np

from . import catalog, figures, limits, numeric, phonons, qes, verify
from .potential import (
    AlphaForm,
    FactoredPotential,
    PolynomialPotential,
    PotentialError,
    classify_critical_points,
    default_tol,
    phi8_scan_template,
    phi10_scan_template,
    expand_factored,
    phi10_constraint_scale,
    phi10_four_degenerate_constraint,
    scan_phase,
)

EXIT_OK, EXIT_TOL, EXIT_INVALID = 0, 1, 2


class InvalidInput(ValueError):
    pass


# ---------------------------------------------------------------- output ----

def write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for r in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


def _json(obj) -> str:
    def conv(o):
        if isinstance(o, (np.floating, np.integer)):
            return o.item()
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, (np.bool_,)):
            return bool(o)
        raise TypeError(type(o))

    return json.dumps(obj, indent=2, default=conv) + "\n"


# --------------------------------------------------------------- parsing ----

def parse_range(spec: str):
    """'lo:hi:step' -> inclusive grid; a single number is a one-point grid."""
    parts = spec.split(":")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise InvalidInput(f"bad range {spec!r}") from None
    if len(vals) == 1:
        return vals
    if len(vals) != 3 or vals[2] <= 0 or vals[1] < vals[0]:
        raise InvalidInput(f"range must be lo:hi:step with step > 0, got {spec!r}")
    lo, hi, st = vals
    n = int(math.floor((hi - lo) / st + 1e-9)) + 1
    return [lo + i * st for i in range(n)]


def parse_int_range(spec: str):
    if ".." in spec:
        a, b = spec.split("..")
        return list(range(int(a), int(b) + 1))
    return [int(v) for v in spec.split(",")]


_TERM = re.compile(r"([+-]?)\s*(\d*\.?\d*(?:e[+-]?\d+)?)\s*\*?\s*(x(\d+)?)?")


def _parse_y_poly(text: str):
    """'x4-3x2+2' (powers of x must be even) -> coefficients in y = x^2, lowest first."""
    s = text.replace(" ", "")
    if not s:
        raise InvalidInput("empty factor")
    coef = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise InvalidInput(f"cannot parse {text!r} near {s[pos:]!r}")
        sign, num, xs, power = m.groups()
        if not num and not xs:
            raise InvalidInput(f"cannot parse {text!r} near {s[pos:]!r}")
        c = float(num) if num else 1.0
        c = -c if sign == "-" else c
        k = 0
        if xs:
            k = int(power) if power else 1
            if k % 2:
                raise InvalidInput(f"odd power x{k} in {text!r}; only even potentials are supported")
        coef[k // 2] = coef.get(k // 2, 0.0) + c
        pos = m.end()
    n = max(coef) + 1
    return [coef.get(i, 0.0) for i in range(n)]


_FACTOR = re.compile(r"\s*(?:\(([^()]*)\)|(x\d*))\s*(?:\^\s*(\d+(?:\.\d+)?))?\s*\*?")


def parse_factored(text: str, lam: float = 1.0) -> FactoredPotential:
    """Parse products such as '(x2-1)^2', 'x2 (x2-0.25)^2 (x2+1)' or '(x4-x2+1)(x2-2)^2'.

    x2 stands for phi^2 (x4 for phi^4, ...).  Linear factors in x2 become
    shifted factors; anything of higher degree goes into the base polynomial.
    """
    s = text.strip()
    const = 1.0
    m = re.match(r"\s*([0-9.]+(?:e[+-]?\d+)?)\s*\*?", s)
    if m and m.group(1):
        const = float(m.group(1))
        s = s[m.end():]
    factors = []
    base = np.array([const])
    pos = 0
    while pos < len(s):
        m = _FACTOR.match(s, pos)
        if not m or m.end() == pos:
            raise InvalidInput(f"cannot parse factor near {s[pos:]!r}")
        inner = m.group(1) if m.group(1) is not None else m.group(2)
        e = float(m.group(3)) if m.group(3) else 1.0
        y = _parse_y_poly(inner)
        while len(y) > 1 and y[-1] == 0.0:
            y.pop()
        if len(y) == 2 and y[0] != 0.0:
            lead, r = y[1], y[0] / y[1]
            factors.append((abs(r), "plus" if r > 0 else "minus", e))
            base = base * lead**e
        elif e.is_integer():
            for _ in range(int(e)):
                base = np.convolve(base, y)
        else:
            raise InvalidInput(f"non-integer power on {inner!r}")
        pos = m.end()
    if not factors and len(base) == 1:
        raise InvalidInput(f"no factors found in {text!r}")
    try:
        return FactoredPotential(tuple(factors), lam, False, tuple(base))
    except PotentialError as exc:
        raise InvalidInput(str(exc)) from None


def _floats(spec: str, n: int | None = None):
    try:
        vals = [float(v) for v in spec.split(",")]
    except ValueError:
        raise InvalidInput(f"expected comma-separated numbers, got {spec!r}") from None
    if n is not None and len(vals) != n:
        raise InvalidInput(f"expected {n} values, got {len(vals)}")
    return vals


def _potential_from_args(args):
    if args.factored:
        return parse_factored(args.factored, args.lam)
    if args.coeffs:
        return PolynomialPotential(tuple(_floats(args.coeffs)), args.lam)
    raise InvalidInput("give --factored or --coeffs")


# -------------------------------------------------------------- commands ----

def _report_cps(cps) -> str:
    return _csv(cps.csv_rows())


def cmd_potential(args) -> int:
    tol = args.tol if args.tol is not None else default_tol()
    if args.action == "scan":
        tmpl = phi8_scan_template() if args.family == "phi8" else phi10_scan_template()
        grid = parse_range(args.alpha2)
        rows = [("alpha2", "n_minima", "n_degenerate_minima", "minima", "degenerate_minima", "maxima", "inflections")]
        for g, cps in zip(grid, scan_phase(tmpl, "alpha2", grid, args.lam, tol)):
            j = lambda pts: ";".join(repr(p.location) for p in pts)
            rows.append((g, len(cps.minima), len(cps.degenerate_minima), j(cps.minima), j(cps.degenerate_minima),
                         j(cps.maxima), j(cps.inflections)))
        _emit(_csv(rows), args.out)
        return EXIT_OK
    if args.action == "classify":
        pot = _potential_from_args(args)
        poly = expand_factored(pot) if isinstance(pot, FactoredPotential) else pot
        _emit(_report_cps(classify_critical_points(poly, tol)), args.out)
        return EXIT_OK
    if args.action == "expand":
        pot = _potential_from_args(args)
        poly = expand_factored(pot) if isinstance(pot, FactoredPotential) else pot
        doc = poly.to_dict()
        if args.family:
            doc["alphas"] = AlphaForm.from_polynomial(poly, args.family).alphas
        _emit(_json(doc), args.out)
        return EXIT_OK
    if args.action == "check-phi10-constraint":
        a8, a6, a4, a2 = _floats(args.alphas, 4)
        res = phi10_four_degenerate_constraint(a8, a6, a4, a2)
        scale = phi10_constraint_scale(a8, a6, a4, a2)
        rel = abs(res) / scale
        _emit(_csv([("residual", "scale", "relative"), (res, scale, rel)]), args.out)
        return EXIT_OK if rel <= args.rtol else EXIT_TOL
    raise InvalidInput(args.action)


def _case_params(args):
    case = catalog.get_case(args.case)
    kw = {k: getattr(args, k) for k in ("a", "b", "c") if getattr(args, k) is not None and k in case.param_names}
    extra = [k for k in ("a", "b", "c") if getattr(args, k) is not None and k not in case.param_names]
    if extra:
        raise InvalidInput(f"{case.id} takes parameters {case.param_names}, not {extra}")
    return case, case.validate(case.params(lam=args.lam, **kw))


def _default_x(case, p, n=801):
    lo, hi = case.minima(p)
    w = hi - lo
    f = case.relation(np.array([lo + 1e-3 * w, hi - 1e-3 * w]), p) / case.mu(p)
    L = float(np.max(np.abs(f)))
    return np.linspace(-L, L, n)


def cmd_kink(args) -> int:
    if args.action == "list":
        rows = [("case_id", "family", "relation_eq", "potential_eq", "energy_eq", "params", "defaults")]
        for c in catalog.list_cases(args.family):
            rows.append((c.id, c.family, c.eq, c.potential_eq, c.energy_eq, " ".join(c.param_names),
                         " ".join(f"{k}={v!r}" for k, v in c.defaults.items())))
        _emit(_csv(rows), args.out)
        return EXIT_OK
    if args.action == "verify":
        if args.all:
            reports = verify.verify_all(args.jobs)
        elif args.case:
            reports = [verify.verify_case(args.case)]
        else:
            raise InvalidInput("give --case or --all")
        if args.out_dir:
            for r in reports:
                write_atomic(os.path.join(args.out_dir, f"{r.case}.json"), _json(r.to_dict()))
        rows = [("case_id", "status", "energy_rel", "profile_gap", "tails")]
        for r in reports:
            t = ";".join(f"{c.side}:{c.found}:{'ok' if c.ok else 'FAIL'}" for c in r.tails)
            rows.append((r.case, "pass" if r.ok else "FAIL", r.energy_rel, r.profile_gap, t))
        sys.stdout.write(_csv(rows))
        npass = sum(r.ok for r in reports)
        sys.stdout.write(f"# {npass}/{len(reports)} cases pass\n")
        return EXIT_OK if npass == len(reports) else EXIT_TOL
    case, p = _case_params(args)
    if args.action == "sample":
        x = np.linspace(*_range3(args.x)) if args.x else _default_x(case, p)
        if args.method == "inverted":
            prof = numeric.inverted_profile(case, x, p)
        else:
            phi0 = float(numeric.invert_implicit(case, 0.0, p).phi)
            if 0.0 not in x:
                x = np.unique(np.concatenate((x, [0.0])))
            prof = numeric.integrate_bps(case.V(p), x, 0.0, phi0, minima=case.minima(p))
        if args.format == "csv":
            text = prof.to_csv()
        elif args.format == "json":
            text = prof.to_json()
        else:
            from . import svg

            text = svg.line_plot([{"x": prof.x, "y": prof.phi, "label": case.id}], f"kink {case.id}", "x", "phi(x)")
        _emit(text, args.out)
        return EXIT_OK
    if args.action == "energy":
        lo, hi = case.minima(p)
        ec = catalog.closed_form_energy(case, p)
        eq = numeric.quadrature_energy(case.V(p), lo, hi)
        rel = abs(ec - eq) / abs(eq)
        _emit(_csv([("case_id", "closed_form", "quadrature", "relative_difference"), (case.id, ec, eq, rel)]),
              args.out)
        return EXIT_OK if rel <= args.rtol else EXIT_TOL
    if args.action == "tails":
        checks = verify.check_tails(case, p)
        rows = [("side", "kind", "rate", "exponent", "prefactor", "approach", "fit_kind", "rate_rel", "exponent_rel",
                 "prefactor_rel", "status")]
        for chk in checks:
            t = catalog.tail(case, chk.side, p)
            rows.append((t.side, t.kind, "" if t.rate is None else t.rate, "" if t.exponent is None else t.exponent,
                         t.prefactor, t.approach_value, chk.found, "" if chk.rate_rel is None else chk.rate_rel,
                         "" if chk.exponent_rel is None else chk.exponent_rel, chk.prefactor_rel,
                         "pass" if chk.ok else "FAIL"))
        _emit(_csv(rows), args.out)
        return EXIT_OK if all(c.ok for c in checks) else EXIT_TOL
    raise InvalidInput(args.action)


def _range3(spec):
    lo, hi, n = spec.split(":")
    lo, hi, n = float(lo), float(hi), int(n)
    if not hi > lo or n < 2:
        raise InvalidInput("--x must be lo:hi:n with hi > lo and n >= 2")
    return lo, hi, n


def cmd_phonon(args) -> int:
    try:
        rows = phonons.phonon_table(table=args.table, family=args.family)
    except KeyError as exc:
        raise InvalidInput(f"unknown table or family {exc}") from None
    _emit(phonons.table_csv(rows), args.out)
    bad = [r for r in rows if not _close(r.numeric, r.closed, 1e-10)]
    return EXIT_OK if not bad else EXIT_TOL


def _close(a, b, rtol):
    if b == 0.0:
        return a == 0.0
    return abs(a - b) <= rtol * abs(b)


def _qes_states(level, B, C, lam):
    if level == 0:
        return [qes.make_state0(B, C, lam)]
    if level == 1:
        return qes.make_state1(B, C, lam)
    if level == 2:
        return qes.make_state2(B, C, lam)
    raise InvalidInput("level must be 0, 1 or 2")


def cmd_qes(args) -> int:
    if args.lam <= 0:
        raise InvalidInput("lambda must be positive")
    try:
        states = _qes_states(args.level, args.B, args.C, args.lam)
    except qes.NoRealSolution as exc:
        sys.stderr.write(f"kinkforge: {exc}\n")
        return EXIT_INVALID
    if args.action == "solve":
        _emit(qes.states_csv(states), args.out)
        worst = max(qes.schrodinger_residual(s) for s in states)
        return EXIT_OK if worst <= args.rtol else EXIT_TOL
    st = states[args.index]
    Phi = qes.cutoff(st)
    g = np.linspace(-Phi, Phi, args.npts)
    rows = [("phi", "pdf")] + list(zip(g, qes.pdf(st, g)))
    _emit(_csv(rows), args.out)
    return EXIT_OK


def cmd_limit(args) -> int:
    if args.action == "converge":
        ns = parse_int_range(args.n)
        parities = ["odd_4n2", "even_4n"] if args.parity == "both" else [args.parity]
        rows = [("parity", "n", "order", "gap")]
        ok = True
        for par in parities:
            gaps = [limits.convergence_metric(par, n, args.lam) for n in ns]
            rows += [(par, n, limits.truncated_potential(par, n).degree, g) for n, g in zip(ns, gaps)]
            ok &= all(b < a for a, b in zip(gaps, gaps[1:]))
        _emit(_csv(rows), args.out)
        return EXIT_OK if ok else EXIT_TOL
    x = np.linspace(-10.0 / args.lam, 10.0 / args.lam, 401)
    if args.format == "csv":
        rows = [("x", "phi_odd", "phi_even")] + list(zip(x, limits.limit_kink("odd", args.lam, x),
                                                          limits.limit_kink("even", args.lam, x)))
        _emit(_csv(rows), args.out)
    else:
        _emit(figures.render("limiting_kinks")["fig17a"], args.out)
    return EXIT_OK


def cmd_figure(args) -> int:
    if args.which == "list":
        rows = [("number", "label", "title", "panels")]
        rows += [(f.number, f.label, f.title, "".join(s for s, _ in f.panels)) for f in figures.FIGURES.values()]
        sys.stdout.write(_csv(rows))
        return EXIT_OK
    keys = list(figures.FIGURES) if args.which == "all" else [args.which]
    for k in keys:
        try:
            panels = figures.render(k)
        except KeyError as exc:
            raise InvalidInput(str(exc)) from None
        for name, text in panels.items():
            path = os.path.join(args.out_dir, f"{name}.svg")
            write_atomic(path, text)
            sys.stdout.write(path + "\n")
    return EXIT_OK


# ---------------------------------------------------------------- parser ----

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kinkforge", description="Kinks of phi^8 to phi^12 field theories.")
    sub = ap.add_subparsers(dest="command", required=True)

    pp = sub.add_parser("potential", help="phase structure of polynomial potentials")
    pp.add_argument("action", choices=["scan", "classify", "expand", "check-phi10-constraint"])
    pp.add_argument("--family", choices=["phi8", "phi10", "phi12"])
    pp.add_argument("--alpha2", default="0:2.5:0.5")
    pp.add_argument("--factored")
    pp.add_argument("--coeffs", help="c0,c1,...,cN in powers of phi")
    pp.add_argument("--alphas", help="a8,a6,a4,a2")
    pp.add_argument("--lam", type=float, default=1.0)
    pp.add_argument("--tol", type=float, help="degeneracy tolerance (default KINKFORGE_TOL or 1e-9)")
    pp.add_argument("--rtol", type=float, default=1e-9)
    pp.add_argument("--out")
    pp.set_defaults(func=cmd_potential)

    kp = sub.add_parser("kink", help="catalog kinks: profiles, energies, tails, verification")
    kp.add_argument("action", choices=["list", "sample", "energy", "tails", "verify"])
    kp.add_argument("--case")
    kp.add_argument("--family", choices=["phi8", "phi10", "phi12"])
    for name in ("a", "b", "c"):
        kp.add_argument(f"--{name}", type=float)
    kp.add_argument("--lam", type=float, default=1.0)
    kp.add_argument("--x", help="lo:hi:n sample grid")
    kp.add_argument("--method", choices=["inverted", "integrated"], default="inverted")
    kp.add_argument("--format", choices=["csv", "json", "svg"], default="csv")
    kp.add_argument("--all", action="store_true")
    kp.add_argument("--jobs", type=int, default=1)
    kp.add_argument("--rtol", type=float, default=verify.TOLERANCES["energy_rel"])
    kp.add_argument("--out")
    kp.add_argument("--out-dir", help="write one JSON report per case (verify)")
    kp.set_defaults(func=cmd_kink)

    ph = sub.add_parser("phonon", help="phonon mass terms at the minima")
    ph.add_argument("action", choices=["table"])
    ph.add_argument("--family", choices=["phi8", "phi10", "phi12"])
    ph.add_argument("--table", choices=["I", "II", "III"])
    ph.add_argument("--out")
    ph.set_defaults(func=cmd_phonon)

    qp = sub.add_parser("qes", help="quasi-exactly solvable phi^10 states")
    qp.add_argument("action", choices=["solve", "pdf"])
    qp.add_argument("--level", type=int, default=0)
    qp.add_argument("--B", type=float, required=True)
    qp.add_argument("--C", type=float, required=True)
    qp.add_argument("--lam", type=float, default=1.0)
    qp.add_argument("--index", type=int, default=0, help="which root for pdf")
    qp.add_argument("--npts", type=int, default=1001)
    qp.add_argument("--rtol", type=float, default=1e-10)
    qp.add_argument("--out")
    qp.set_defaults(func=cmd_qes)

    lp = sub.add_parser("limit", help="sine-Gordon limits")
    lp.add_argument("action", choices=["converge", "kinks"])
    lp.add_argument("--n", default="1..5")
    lp.add_argument("--parity", choices=["odd_4n2", "even_4n", "odd", "even", "both"], default="both")
    lp.add_argument("--lam", type=float, default=1.0)
    lp.add_argument("--format", choices=["csv", "svg"], default="svg")
    lp.add_argument("--out")
    lp.set_defaults(func=cmd_limit)

    fp = sub.add_parser("figure", help="reproduce a figure (number, label, 'all' or 'list')")
    fp.add_argument("which")
    fp.add_argument("--out", dest="out_dir", default=".")
    fp.set_defaults(func=cmd_figure)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidInput, catalog.CatalogError, PotentialError, qes.QESError, phonons.NotEquilibrium) as exc:
        sys.stderr.write(f"kinkforge: {exc}\n")
        return EXIT_INVALID
    except numeric.NumericError as exc:
        sys.stderr.write(f"kinkforge: numerical failure: {exc}\n")
        return EXIT_TOL
    except ValueError as exc:
        sys.stderr.write(f"kinkforge: invalid input: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
