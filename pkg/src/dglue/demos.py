"""Worked examples: the wedge of two lines, the delta function, the infinite-dimension witness."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import connections as C
from . import expr as E
from .bundles import FiniteFibreMap, TrivialPseudoBundle, glue_bundles, standard_fibre
from .gluing import FinitePoints, First, GluedSpace, Piece, Second, delta_demo
from .report import CheckReport, worst
from .sections import certify_dim_witness, dim_witness, glue_sections_S, section

WEDGE_H1 = E.add(E.ONE, E.power(E.X, 2))
WEDGE_H2 = E.exp(E.X)
# s1(0) = s2(0) = 1
WEDGE_S1 = E.add(E.cos(E.X), E.X)
WEDGE_S2 = E.add(E.sub(E.ONE, E.X), E.power(E.X, 2))


@dataclass(frozen=True)
class Wedge:
    """The lines ``y = 0`` and ``x = 0`` glued at the origin, with ``V = {xy = 0}`` over them."""

    space: GluedSpace
    bundle: object
    g1: C.PseudoMetric
    g2: C.PseudoMetric
    c1: C.Connection
    c2: C.Connection
    glued: C.GluedConnection
    metric: C.GluedMetric


def wedge(h1: E.SmoothExpr = WEDGE_H1, h2: E.SmoothExpr = WEDGE_H2) -> Wedge:
    x1, x2 = Piece("X1"), Piece("X2")
    space = GluedSpace(x1, x2, FinitePoints(((0.0, 0.0),)))
    v1 = TrivialPseudoBundle("V1", x1, standard_fibre(1))
    v2 = TrivialPseudoBundle("V2", x2, standard_fibre(1))
    G = glue_bundles(v1, v2, space, FiniteFibreMap({0.0: [[1.0]]}))
    g1, g2 = C.pseudo_metric(v1, h1), C.pseudo_metric(v2, h2)
    metric = C.induced_pseudo_metric(g1, g2, G)
    c1, c2 = C.levi_civita_1d(h1, v1), C.levi_civita_1d(h2, v2)
    return Wedge(space, G, g1, g2, c1, c2, C.induce_connection(c1, c2, G), metric)


@dataclass(frozen=True)
class WedgeDemo:
    wedge: Wedge
    rows: tuple[tuple[str, float, tuple[float, ...]], ...]
    reports: tuple[CheckReport, ...]


def _row(p, value) -> tuple[str, float, tuple[float, ...]]:
    parts = []
    if value.first is not None:
        parts.extend(value.first.tolist())
    if value.second is not None:
        parts.extend(value.second.tolist())
    return (type(p).__name__, float(p.x), tuple(parts))


def wedge_demo(samples: int = 100, seed: int = 0) -> WedgeDemo:
    """Evaluate ``∇∪`` on the compatible pair ``(cos x + x, 1 - y + y^2)``.

    Off the glue point the value is the factor value ``s' + h'/(2h) s``; at
    the origin it is the pair of both factor values tensored with ``e``.
    """
    w = wedge()
    s = glue_sections_S(section(w.bundle.v1, WEDGE_S1), section(w.bundle.v2, WEDGE_S2), w.bundle)
    t = glue_sections_S(section(w.bundle.v1, E.add(E.ONE, E.sin(E.X))),
                        section(w.bundle.v2, E.exp(E.mul(E.const(-1.0), E.X))), w.bundle)
    rng = np.random.default_rng(seed)
    xs = rng.uniform(-3.0, 3.0, samples)
    xs = xs[xs != 0.0]
    pts = [First(float(x)) for x in xs[: samples // 2]] + [Second(float(x)) for x in xs[samples // 2:]]
    pts.append(Second(0.0))
    rows = tuple(_row(p, C.apply_glued_connection(w.glued, s, p)) for p in pts)
    # the factor values, computed through the factor connections directly
    n1 = C.apply_connection(w.c1, s.s1).components[0]
    n2 = C.apply_connection(w.c2, s.s2).components[0]
    res, where = [], []
    for (kind, x, vals) in rows:
        if kind == "First":
            want = (E.evaluate(n1, x),)
        elif x != 0.0:
            want = (E.evaluate(n2, x),)
        else:
            want = (E.evaluate(n1, 0.0), E.evaluate(n2, 0.0))
        res.append(max(abs(a - b) for a, b in zip(vals, want)) if len(vals) == len(want) else np.inf)
        where.append(f"{kind}({x:.6g})")
    reports = (
        worst("wedge: ∇∪ matches the factor connections", res, where, 1e-9, law="apply_glued_connection"),
        C.induced_metric_compatibility_check(w.glued, w.metric, [(s, t), (s, s), (t, t)], pts),
        C.glued_leibniz_check(w.glued, _wedge_function(w), s, pts),
    )
    return WedgeDemo(w, rows, reports)


def _wedge_function(w: Wedge):
    from .gluing import glue_functions
    return glue_functions(E.power(E.X, 2), E.sin(E.X), w.space)


def delta_table(xs=None):
    return delta_demo(xs)


def delta_report(xs=None) -> CheckReport:
    demo = delta_demo(xs)
    res = [abs(v - (1.0 if x == 0.0 else 0.0)) for x, v in demo.table]
    return worst("delta: h∘p is 1 at 0 and 0 elsewhere", res, [x for x, _ in demo.table], 0.0,
                 law="delta_demo")


def dim_witness_reports(seed: int = 0, max_points: int = 5) -> list[CheckReport]:
    rng = np.random.default_rng(seed)
    out = []
    for k in range(1, max_points + 1):
        while True:
            pts = np.round(np.sort(rng.uniform(-5.0, 5.0, k)), 4)
            if len(set(pts.tolist())) == k:
                break
        s = dim_witness(pts.tolist())
        rep = certify_dim_witness(s, pts.tolist(), seed=seed + k)
        rep.name = f"dim_witness k={k}"
        rep.extra["section"] = s.text()
        out.append(rep)
    return out
