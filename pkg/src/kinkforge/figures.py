"""Registry of the figure reproductions; each entry renders one SVG per panel."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import svg
from .catalog import Params, get_case
from .limits import limit_kink, limit_potential
from .numeric import integrate_bps, inverted_profile
from .potential import phi8_scan_template, phi10_scan_template, example_potential

__all__ = ["Figure", "FIGURES", "get_figure", "render"]

NPTS = 801


@dataclass(frozen=True)
class Figure:
    number: int
    label: str
    title: str
    panels: tuple  # (suffix, builder) pairs; builder() -> svg text
    params: dict = field(default_factory=dict)


# ------------------------------------------------------------ references ----

def _phi4(p):
    return lambda f: p.lam**2 * (f * f - p.a**2) ** 2


def _phi6(p):
    return lambda f: p.lam**2 * f * f * (f * f - p.a**2) ** 2


def _phi8(p):
    return lambda f: p.lam**2 * (f * f - p.a**2) ** 2 * (f * f - p.b**2) ** 2


def _phi4_kink(p, x):
    return p.a * np.tanh(p.lam * x)


def _phi6_kink(p, x):
    return p.a / np.sqrt(1.0 + np.exp(-2.0 * math.sqrt(2.0) * p.a**2 * p.lam * x))


REF_V = {"phi4": _phi4, "phi6": _phi6, "phi8": _phi8}
REF_KINK = {"phi4": _phi4_kink, "phi6": _phi6_kink}


def _params(**kw):
    return Params(kw.get("a", 0.0), kw.get("b", 0.0), kw.get("c", 0.0), kw.get("lam", 1.0))


# ---------------------------------------------------------------- panels ----

def _kink_extent(case, p, frac=0.01):
    """|x| at which each catalog kink is within frac*width of its minima."""
    lo, hi = case.minima(p)
    w = hi - lo
    f = case.relation(np.array([lo + frac * w, hi - frac * w]), p) / case.mu(p)
    return float(np.max(np.abs(f)))


def _case_p(cid, p):
    case = get_case(cid)
    kw = {k: getattr(p, k) for k in case.param_names}
    return case, case.validate(case.params(lam=p.lam, **kw))


def potential_panel(title, cases, refs, p, span=None):
    def build():
        phis = []
        for cid in cases:
            case, cp = _case_p(cid, p)
            phis.extend(abs(m) for m in case.minima(cp))
        pm = span or 1.15 * max(phis + [p.a, p.b])
        f = np.linspace(-pm, pm, NPTS)
        series = []
        seen = set()
        for cid in cases:
            case, cp = _case_p(cid, p)
            if case.potential_eq in seen:
                continue
            seen.add(case.potential_eq)
            series.append({"x": f, "y": case.V(cp)(f), "label": f"V ({case.potential_eq})"})
        for r in refs:
            series.append({"x": f, "y": REF_V[r](p)(f), "label": f"{r} reference", "dashed": True})
        ys = np.concatenate([s["y"] for s in series])
        top = float(np.percentile(ys, 60)) * 1.2 or 1.0
        return svg.line_plot(series, title, "phi", "V(phi)", ylim=(0.0, top))
    return build


def kink_panel(title, cases, refs, p, ref_cases=()):
    def build():
        ext = [_kink_extent(*_case_p(cid, p)) for cid in cases]
        L = min(max(ext) * 1.2, 60.0)
        x = np.linspace(-L, L, NPTS)
        series = []
        for cid in cases:
            case, cp = _case_p(cid, p)
            series.append({"x": x, "y": inverted_profile(case, x, cp).phi, "label": f"kink ({case.eq})"})
        for cid in ref_cases:
            case, cp = _case_p(cid, p)
            series.append({"x": x, "y": inverted_profile(case, x, cp).phi, "label": f"phi8 kink ({case.eq})",
                           "dashed": True, "color": "#7f7f7f"})
        for r in refs:
            series.append({"x": x, "y": REF_KINK[r](p, x), "label": f"{r} kink", "dashed": True, "color": "#222222"})
        return svg.line_plot(series, title, "x", "phi(x)")
    return build


def scan_panel(title, template, values, span, zoom=False):
    def build():
        f = np.linspace(-span, span, NPTS)
        series = []
        for v in values:
            pot = template.with_alpha("alpha2", v).to_polynomial().min_shifted()
            series.append({"x": f, "y": pot(f), "label": f"alpha2 = {v:g}"})
        if zoom:
            return svg.line_plot(series, title, "phi", "V(phi)", ylim=(0.0, 0.5))
        return svg.line_plot(series, title, "phi", "V(phi)", ylim=(0.0, 3.0))
    return build


def numeric_potential_panel(title, names, span):
    def build():
        f = np.linspace(-span, span, NPTS)
        series = [{"x": f, "y": example_potential(n)(f), "label": n, "dashed": i > 0} for i, n in enumerate(names)]
        top = float(max(np.max(s["y"][np.abs(f) <= 0.8 * span]) for s in series)) * 1.1
        return svg.line_plot(series, title, "phi", "V(phi)", ylim=(0.0, top))
    return build


def numeric_kink_panel(title, names, L):
    def build():
        x = np.linspace(-L, L, NPTS)
        series = []
        for i, n in enumerate(names):
            prof = integrate_bps(example_potential(n), x, 0.0, 0.0)
            lo, hi = prof.minima
            y = np.where(x < prof.x[0], lo, np.where(x > prof.x[-1], hi, 0.0))
            y[np.searchsorted(x, prof.x)] = prof.phi
            series.append({"x": x, "y": y, "label": n, "dashed": i > 0})
        return svg.line_plot(series, title, "x", "phi(x)")
    return build


def limit_panel(title):
    def build():
        x = np.linspace(-10.0, 10.0, NPTS)
        series = [
            {"x": x, "y": limit_kink("odd", 1.0, x), "label": "1 - cos phi", "color": "#1f4e9c"},
            {"x": x, "y": limit_kink("even", 1.0, x), "label": "1 + cos phi", "color": "#c0392b"},
        ]
        return svg.line_plot(series, title, "x", "phi(x)")
    return build


def limit_potential_panel(title):
    def build():
        f = np.linspace(-2 * math.pi, 2 * math.pi, NPTS)
        series = [
            {"x": f, "y": limit_potential("odd", f), "label": "1 - cos phi", "color": "#1f4e9c"},
            {"x": f, "y": limit_potential("even", f), "label": "1 + cos phi", "color": "#c0392b"},
        ]
        return svg.line_plot(series, title, "phi", "V(phi)")
    return build


# -------------------------------------------------------------- registry ----

def _kink_fig(number, label, title, p, vcases, vrefs, kinks):
    panels = [("a", potential_panel(f"{title}: potentials", vcases, vrefs, p))]
    for suffix, (ktitle, cases, refs, refcases) in zip("bcd", kinks):
        panels.append((suffix, kink_panel(ktitle, cases, refs, p, refcases)))
    return Figure(number, label, title, tuple(panels), p._asdict())


_S3 = math.sqrt(3.0)
_F = []
_F.append(Figure(1, "phi8_fig1", "phi8 phase scan", (
    ("a", scan_panel("phi8 potentials across alpha2", phi8_scan_template(), (0, 0.5, 1, 1.5, 2, 2.5), 2.0)),
    ("b", scan_panel("zoom near the origin", phi8_scan_template(), (0, 0.5, 1, 1.5, 2, 2.5), 1.0, zoom=True)),
)))
_p = _params(a=(_S3 - 1) / 2, b=(_S3 + 1) / 2)
_F.append(_kink_fig(2, "phi8_TCI_kinks", "phi8 four degenerate minima", _p, ["phi8.4dm.inner"], ["phi4"], [
    ("kink from -a to a", ["phi8.4dm.inner"], ["phi4"], ()),
    ("kink from a to b", ["phi8.4dm.outer"], [], ()),
]))
_F.append(Figure(3, "phi8_nonTCI_kinks", "phi8 away from the transition", (
    ("a", numeric_potential_panel("potentials", ["phi8.above", "phi8.below"], 1.6)),
    ("b", numeric_kink_panel("numerical kinks, phi(0) = 0", ["phi8.above", "phi8.below"], 10.0)),
)))
_p = _params(a=0.75, b=1.0)
_F.append(_kink_fig(4, "phi8_3Degen_kinks", "phi8 three degenerate minima", _p,
                    ["phi8.3dm.I", "phi8.3dm.II"], ["phi6"], [
                        ("kinks from 0 to a", ["phi8.3dm.I", "phi8.3dm.II"], ["phi6"], ()),
                    ]))
_p = _params(a=0.8, b=1.0)
_F.append(_kink_fig(5, "phi8_2Degen_kinks", "phi8 two degenerate minima", _p,
                    ["phi8.2dm.I", "phi8.2dm.II"], ["phi4"], [
                        ("kinks from -a to a", ["phi8.2dm.I", "phi8.2dm.II"], ["phi4"], ()),
                    ]))
_F.append(Figure(6, "phi10_fig1", "phi10 phase scan", (
    ("a", scan_panel("phi10 potentials across alpha2", phi10_scan_template(), (1, 2, 2.2, 2.5, 3, 4), 1.6)),
    ("b", scan_panel("zoom near the origin", phi10_scan_template(), (1, 2, 2.2, 2.5, 3, 4), 1.0, zoom=True)),
)))
_p = _params(a=0.5, b=1.0)
_F.append(_kink_fig(7, "phi10_5Degen_kinks", "phi10 five degenerate minima", _p,
                    ["phi10.5dm.inner"], ["phi8", "phi6"], [
                        ("kink from 0 to a", ["phi10.5dm.inner"], ["phi6"], ()),
                        ("kink from a to b", ["phi10.5dm.outer"], [], ("phi8.4dm.outer",)),
                    ]))
_p = _params(a=0.5, b=1.0, c=0.75)
_F.append(_kink_fig(8, "phi10_TCI_II_kinks", "phi10 at the second transition", _p,
                    ["phi10.4dm.inner"], ["phi8", "phi4"], [
                        ("kink from -a to a", ["phi10.4dm.inner"], ["phi4"], ()),
                        ("kink from a to b", ["phi10.4dm.outer"], [], ("phi8.4dm.outer",)),
                    ]))
_F.append(Figure(9, "phi10_nonTCI_II_kinks", "phi10 away from the transitions", (
    ("a", numeric_potential_panel("potentials", ["phi10.between", "phi10.below"], 1.6)),
    ("b", numeric_kink_panel("numerical kinks, phi(0) = 0", ["phi10.between", "phi10.below"], 6.0)),
)))
_p = _params(a=0.8, b=1.0, c=1.0)
_F.append(_kink_fig(10, "phi10_3Degen_kinks", "phi10 three degenerate minima", _p,
                    ["phi10.3dm.I", "phi10.3dm.II", "phi10.3dm.III", "phi10.3dm.IV"], ["phi6"], [
                        ("kinks from 0 to a", ["phi10.3dm.I", "phi10.3dm.II", "phi10.3dm.III", "phi10.3dm.IV"],
                         ["phi6"], ()),
                    ]))
_p = _params(a=0.9, b=1.0)
_F.append(_kink_fig(11, "phi10_2Degen_kinks", "phi10 two degenerate minima", _p,
                    ["phi10.2dm.I", "phi10.2dm.II", "phi10.2dm.III"], ["phi4"], [
                        ("kinks from -a to a", ["phi10.2dm.I", "phi10.2dm.II", "phi10.2dm.III"], ["phi4"], ()),
                    ]))
_p = _params(a=0.25, b=2 / 3, c=1.0)
_F.append(_kink_fig(12, "phi12_6Degen_kinks", "phi12 six degenerate minima", _p,
                    ["phi12.6dm.inner"], ["phi8", "phi4"], [
                        ("kinks from -a to a, a to b, b to c", ["phi12.6dm.inner", "phi12.6dm.mid", "phi12.6dm.outer"],
                         ["phi4"], ("phi8.4dm.inner", "phi8.4dm.outer")),
                    ]))
_p = _params(a=0.5, b=1.0, c=2.0)
_F.append(_kink_fig(13, "phi12_5Degen_kinks", "phi12 five degenerate minima", _p,
                    ["phi12.5dm.I.inner", "phi12.5dm.II.inner"], ["phi8", "phi6"], [
                        ("kinks from 0 to a", ["phi12.5dm.I.inner", "phi12.5dm.II.inner"], ["phi6"], ()),
                        ("kinks from a to b", ["phi12.5dm.I.outer", "phi12.5dm.II.outer"], [], ("phi8.4dm.outer",)),
                    ]))
_p = _params(a=0.5, b=1.0, c=0.75)
_F.append(_kink_fig(14, "phi12_4Degen_kinks", "phi12 four degenerate minima", _p,
                    ["phi12.4dm.I.inner", "phi12.4dm.II.inner", "phi12.4dm.III.inner"], ["phi8", "phi4"], [
                        ("kinks from -a to a", ["phi12.4dm.I.inner", "phi12.4dm.II.inner", "phi12.4dm.III.inner"],
                         ["phi4"], ("phi8.4dm.inner",)),
                        ("kinks from a to b", ["phi12.4dm.I.outer", "phi12.4dm.II.outer", "phi12.4dm.III.outer"],
                         [], ("phi8.4dm.outer",)),
                    ]))
_p = _params(a=0.8, b=1.0)
_F.append(_kink_fig(15, "phi12_3Degen_kinks", "phi12 three degenerate minima", _p,
                    ["phi12.3dm.I", "phi12.3dm.II", "phi12.3dm.III", "phi12.3dm.IV", "phi12.3dm.V"], ["phi6"], [
                        ("kinks from 0 to a",
                         ["phi12.3dm.I", "phi12.3dm.II", "phi12.3dm.III", "phi12.3dm.IV", "phi12.3dm.V"], ["phi6"], ()),
                    ]))
_p = _params(a=0.9, b=1.0)
_F.append(_kink_fig(16, "phi12_2Degen_kinks", "phi12 two degenerate minima", _p,
                    ["phi12.2dm.I", "phi12.2dm.II", "phi12.2dm.III"], ["phi4"], [
                        ("kinks from -a to a", ["phi12.2dm.I", "phi12.2dm.II", "phi12.2dm.III"], ["phi4"], ()),
                    ]))
_F.append(Figure(17, "limiting_kinks", "sine-Gordon limits", (
    ("a", limit_panel("limit kinks")),
    ("b", limit_potential_panel("limit potentials")),
)))

FIGURES = {f.number: f for f in _F}
del _p, _F


def get_figure(key) -> Figure:
    """Look a figure up by source-order number or by label."""
    s = str(key)
    if s.isdigit() and int(s) in FIGURES:
        return FIGURES[int(s)]
    for f in FIGURES.values():
        if f.label == s or f"fig:{f.label}" == s:
            return f
    raise KeyError(f"unknown figure {key!r}")


def render(key) -> dict:
    """suffix -> svg text for every panel of a figure."""
    fig = get_figure(key)
    return {f"fig{fig.number:02d}{suffix}": build() for suffix, build in fig.panels}
