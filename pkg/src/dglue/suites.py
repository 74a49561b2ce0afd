"""Seeded generator family and the property suites run by ``dglue suite``.

Functions are drawn from cubic polynomials, ``exp(c x)`` and ``sin(a x + b)``;
positive metrics from ``1 + c x^2``, ``exp(c x)`` and ``2 + sin(a x)``. All
draws go through one ``numpy.random.Generator`` so a seed fixes every case.
Samples lie in ``SUITE_DOMAIN``, where the absolute residual bound of the
identity checks is meaningful (no term grows past a few hundred).
"""

from __future__ import annotations

import numpy as np

from . import connections as C
from . import expr as E
from .bundles import (FiniteFibreMap, IntervalFibreMap, TrivialPseudoBundle,
                      glue_bundles, standard_fibre)
from .gluing import FinitePoints, GluedSpace, Interval, Piece
from .report import CheckReport
from .sections import Section

SUITE_DOMAIN = (-2.0, 2.0)
DEFAULT_SAMPLES = 64
NEGATIVE_FLOOR = {"leibniz": 0.5, "metric": 0.05, "compat": 0.05}


def suite_piece(name: str = "X") -> Piece:
    return Piece(name, window=SUITE_DOMAIN)


def suite_bundle(rank: int = 1, name: str = "V", piece: Piece | None = None) -> TrivialPseudoBundle:
    return TrivialPseudoBundle(name, piece or suite_piece(), standard_fibre(rank))


def _coef(rng, lo=0.5, hi=1.0) -> float:
    """A coefficient with magnitude in ``[lo, hi]`` and random sign, rounded for readable reports."""
    return float(np.round(rng.choice([-1.0, 1.0]) * rng.uniform(lo, hi), 3))


def random_function(rng) -> E.SmoothExpr:
    """A nonconstant member of the family."""
    kind = rng.integers(3)
    if kind == 0:
        deg = int(rng.integers(1, 4))
        coeffs = [float(np.round(rng.uniform(-1, 1), 3)) for _ in range(deg)] + [_coef(rng)]
        return E.total(E.mul(E.const(c), E.power(E.X, i)) for i, c in enumerate(coeffs) if c != 0.0)
    if kind == 1:
        return E.exp(E.mul(E.const(_coef(rng)), E.X))
    a, b = _coef(rng, 0.5, 1.5), float(np.round(rng.uniform(-1, 1), 3))
    return E.sin(E.add(E.mul(E.const(a), E.X), E.const(b)))


def random_section_component(rng) -> E.SmoothExpr:
    """A family member shifted away from zero, so products with it are not accidentally tiny."""
    return E.add(random_function(rng), E.const(_coef(rng, 1.0, 2.0)))


def random_metric(rng) -> E.SmoothExpr:
    kind = rng.integers(3)
    if kind == 0:
        return E.add(E.ONE, E.mul(E.const(float(np.round(rng.uniform(0.1, 1.0), 3))), E.power(E.X, 2)))
    if kind == 1:
        return E.exp(E.mul(E.const(_coef(rng)), E.X))
    return E.add(E.const(2.0), E.sin(E.mul(E.const(_coef(rng, 0.5, 1.5)), E.X)))


def sample_points(rng, n: int = DEFAULT_SAMPLES, domain=SUITE_DOMAIN) -> np.ndarray:
    return np.sort(rng.uniform(*domain, n))


def _summary(name: str, reports: list[CheckReport], tol: float, seed: int, law: str) -> CheckReport:
    r = max(reports, key=lambda c: c.residual)
    return CheckReport(name, all(reports), r.residual, {"trial": reports.index(r), "x": r.location},
                       sum(c.samples for c in reports), law=law, seed=seed,
                       detail=f"{len(reports)} trials, tol {tol:g}")


def _negative(name: str, reports: list[CheckReport], floor: float, seed: int, law: str) -> CheckReport:
    """A negative control passes when every trial fails with residual at least ``floor``."""
    r = min(reports, key=lambda c: c.residual)
    ok = all(not c.passed and c.residual >= floor for c in reports)
    return CheckReport(name, ok, r.residual, {"trial": reports.index(r)}, sum(c.samples for c in reports),
                       law=law, seed=seed, detail=f"every trial must fail with residual >= {floor:g}")


# -- suites ---------------------------------------------------------------------------

def leibniz_suite(seed: int = 0, samples: int = DEFAULT_SAMPLES, tol: float = 1e-9,
                  trials: int = 50) -> list[CheckReport]:
    """Leibniz rule for random, direct-sum, tensor and Levi-Civita connections, plus the negative control."""
    rng = np.random.default_rng(seed)
    V = suite_bundle()
    base, dropped, dsum, tens, lc = [], [], [], [], []
    for _ in range(trials):
        h = random_function(rng)
        s = Section(V, (random_section_component(rng),))
        conn = C.Connection(V, ((random_function(rng),),))
        xs = sample_points(rng, samples)
        base.append(C.leibniz_check(conn, h, s, xs, tol))
        dropped.append(C.leibniz_check(conn, h, s, xs, tol, drop_dh=True))
        other = C.Connection(V, ((random_function(rng),),))
        t = Section(V, (random_section_component(rng),))
        ds = C.direct_sum_connection(conn, other)
        dsum.append(C.leibniz_check(ds, h, Section(ds.bundle, s.components + t.components), xs, tol))
        tc = C.tensor_connection(conn, other)
        tens.append(C.leibniz_check(tc, h, Section(tc.bundle, (E.mul(s.components[0], t.components[0]),)),
                                    xs, tol))
        lcc = C.levi_civita_1d(random_metric(rng), V)
        lc.append(C.leibniz_check(lcc, h, s, xs, tol))
    return [
        _summary("leibniz: random Γ", base, tol, seed, "leibniz_check"),
        _negative("leibniz: negative control (dh⊗s dropped)", dropped, NEGATIVE_FLOOR["leibniz"], seed,
                  "leibniz_check"),
        _summary("leibniz: direct sum", dsum, tol, seed, "direct_sum_connection"),
        _summary("leibniz: tensor product", tens, tol, seed, "tensor_connection"),
        _summary("leibniz: Levi-Civita", lc, tol, seed, "levi_civita_1d"),
    ]


def metric_suite(seed: int = 0, samples: int = DEFAULT_SAMPLES, tol: float = 1e-9,
                 trials: int = 20, eps: float = 0.1) -> list[CheckReport]:
    """``Γ = h'/(2h)`` is metric compatible; ``Γ + eps`` is not."""
    rng = np.random.default_rng(seed)
    V = suite_bundle()
    good, bad = [], []
    for _ in range(trials):
        h = random_metric(rng)
        g = C.PseudoMetric(V, ((h,),))
        s = Section(V, (random_section_component(rng),))
        t = Section(V, (random_section_component(rng),))
        xs = sample_points(rng, samples)
        lc = C.levi_civita_1d(h, V)
        good.append(C.metric_compatible_check(lc, g, s, t, xs, tol))
        shifted = C.Connection(V, ((E.add(lc.gamma[0][0], E.const(eps)),),))
        bad.append(C.metric_compatible_check(shifted, g, s, t, xs, tol))
    return [
        _summary("metric: Levi-Civita compatible", good, tol, seed, "metric_compatible_check"),
        _negative(f"metric: Γ + {eps:g} rejected", bad, NEGATIVE_FLOOR["metric"], seed,
                  "metric_compatible_check"),
    ]


def random_interval_gluing(rng, rank: int = 1):
    """Two suite lines glued over the whole domain by a monotone ``f`` and an invertible ``A``."""
    x1, x2 = suite_piece("X1"), suite_piece("X2")
    kind = rng.integers(3)
    if kind == 0:
        f = E.add(E.mul(E.const(_coef(rng, 0.5, 1.5)), E.X), E.const(float(np.round(rng.uniform(-0.5, 0.5), 3))))
    elif kind == 1:
        f = E.add(E.mul(E.const(0.1), E.power(E.X, 3)), E.X)
    else:
        f = E.add(E.X, E.mul(E.const(0.3), E.sin(E.X)))
    entries = []
    for i in range(rank):
        row = []
        for j in range(rank):
            if i == j:
                row.append(E.exp(E.mul(E.const(_coef(rng, 0.1, 0.5)), E.X)) if rng.integers(2)
                           else E.const(_coef(rng, 1.0, 2.0)))
            else:
                row.append(E.const(float(np.round(rng.uniform(-0.2, 0.2), 3))))
        entries.append(tuple(row))
    # Y is the whole real line; sampling is confined to the piece windows
    space = GluedSpace(x1, x2, Interval(-np.inf, np.inf, f))
    v1, v2 = suite_bundle(rank, "V1", x1), suite_bundle(rank, "V2", x2)
    return glue_bundles(v1, v2, space, IntervalFibreMap(tuple(entries)))


def compat_suite(seed: int = 0, samples: int = DEFAULT_SAMPLES, tol: float = 1e-9,
                 trials: int = 10, eps: float = 0.1) -> list[CheckReport]:
    """Compatibility of connections: pulled-back pairs pass, shifted ones fail, point loci always pass."""
    rng = np.random.default_rng(seed)
    good, bad, point = [], [], []
    for n in range(trials):
        rank = 1 if n % 2 == 0 else 2
        G = random_interval_gluing(rng, rank)
        g2 = tuple(tuple(random_function(rng) if i == j else E.const(float(np.round(rng.uniform(-0.5, 0.5), 3)))
                         for j in range(rank)) for i in range(rank))
        c2 = C.Connection(G.v2, g2)
        c1 = C.pullback_connection(c2, G)
        good.append(C.connections_compatible_check(c1, c2, G, tol=tol))
        shifted = C.Connection(G.v1, tuple(tuple(E.add(e, E.const(eps)) if i == j else e
                                                 for j, e in enumerate(row)) for i, row in enumerate(c1.gamma)))
        bad.append(C.connections_compatible_check(shifted, c2, G, tol=tol))
        x1, x2 = suite_piece("X1"), suite_piece("X2")
        y = float(np.round(rng.uniform(-1, 1), 3))
        space = GluedSpace(x1, x2, FinitePoints(((y, float(np.round(rng.uniform(-1, 1), 3))),)))
        v1, v2 = suite_bundle(1, "V1", x1), suite_bundle(1, "V2", x2)
        Gp = glue_bundles(v1, v2, space, FiniteFibreMap({y: [[_coef(rng, 0.5, 2.0)]]}))
        point.append(C.connections_compatible_check(C.Connection(v1, ((random_function(rng),),)),
                                                    C.Connection(v2, ((random_function(rng),),)), Gp, tol=tol))
    return [
        _summary("compat: pulled-back connections compatible", good, tol, seed, "connections_compatible_check"),
        _negative(f"compat: Γ1 + {eps:g} rejected", bad, NEGATIVE_FLOOR["compat"], seed,
                  "connections_compatible_check"),
        _summary("compat: point loci need no condition", point, tol, seed, "connections_compatible_check"),
    ]


SUITES = {"leibniz": leibniz_suite, "metric": metric_suite, "compat": compat_suite}


def run_suite(name: str, seed: int = 0, samples: int = DEFAULT_SAMPLES, tol: float = 1e-9) -> list[CheckReport]:
    return SUITES[name](seed=seed, samples=samples, tol=tol)


__all__ = ["SUITES", "run_suite", "random_function", "random_metric", "random_section_component",
           "sample_points", "suite_bundle", "suite_piece", "random_interval_gluing",
           "SUITE_DOMAIN"]
