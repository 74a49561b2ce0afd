"""Connections on trivial pseudo-bundles over a line and on glued bundles.

A connection is a ``k x k`` matrix ``Γ`` of expressions; for a section ``s``
the ``dx ⊗ e_i`` coefficients of ``∇s`` are ``s' + Γ s``. This is what the
Leibniz rule forces once ``∇e = Γ e dx`` is fixed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import expr as E
from . import exprmat as M
from .bundles import (GluedBundle, TrivialPseudoBundle, direct_sum_bundle,
                      fibre_dual_dim, tensor_bundle)
from .errors import (BaseMismatch, DomainError, IncompatibleConnections,
                     IncompatibleMetrics, InvalidMetric, NonInvertibleGluing,
                     NonPositiveMetric, SingularInput)
from .expr import SmoothExpr
from .forms import LambdaFibreValue, glued_differential
from .gluing import GLUE_TOL, First, GluedFunction, GluedPoint, glue_functions
from .report import CheckReport, worst
from .sections import GluedSection, Section, compatible_source

IDENTITY_TOL = 1e-9
EIGEN_FLOOR = -1e-10
POSITIVITY_MARGIN = 1e-6
RANK_TOL = 1e-9
KINK_RADIUS = 1e-6


# -- sampling helpers ------------------------------------------------------------------

def kinks(exprs, lo: float, hi: float) -> tuple[float, ...]:
    args = []
    for e in exprs:
        args.extend(a for a in E.abs_arguments(e) if a not in args)
    return tuple(E.SingularFinder(tuple(args))(lo, hi))


def smooth_samples(exprs, samples, radius: float = KINK_RADIUS) -> np.ndarray:
    """Drop samples within ``radius`` of a zero of an abs argument occurring in ``exprs``."""
    xs = np.asarray(samples, dtype=np.float64)
    if xs.size == 0:
        return xs
    ks = kinks(exprs, float(xs.min()) - 1.0, float(xs.max()) + 1.0)
    if not ks:
        return xs
    keep = np.all(np.abs(xs[:, None] - np.asarray(ks)[None, :]) > radius, axis=1)
    return xs[keep]


def _vec_residual(a: M.ExprVec, b: M.ExprVec, xs) -> tuple[np.ndarray, np.ndarray]:
    """Per-sample ``max_i |a_i - b_i|``."""
    xs = np.asarray(xs, dtype=np.float64)
    if xs.size == 0:
        return np.zeros(0), xs
    r = np.abs(M.evaluate_vec_many(a, xs) - M.evaluate_vec_many(b, xs))
    return r.max(axis=1) if r.size else np.zeros(len(xs)), xs


def _report(name, r, xs, tol, **kw) -> CheckReport:
    return worst(name, np.asarray(r).tolist(), np.asarray(xs).tolist(), tol, **kw)


# -- connections on a trivial bundle ----------------------------------------------------

@dataclass(frozen=True)
class Connection:
    bundle: TrivialPseudoBundle
    gamma: M.ExprMat

    def __post_init__(self):
        g = M.as_mat(self.gamma)
        k = self.bundle.rank
        if len(g) != k or any(len(r) != k for r in g):
            raise ValueError(f"Christoffel matrix must be {k}x{k}")
        object.__setattr__(self, "gamma", g)
        xs = self.bundle.base.samples(257)
        for row in g:
            for e in row:
                E.check_nonvanishing(e, xs, POSITIVITY_MARGIN)
                E.evaluate_many(e, xs)

    def text(self) -> str:
        return M.mat_text(self.gamma)


def connection(bundle: TrivialPseudoBundle, gamma) -> Connection:
    if isinstance(gamma, (int, float, SmoothExpr)):
        gamma = ((gamma,),)
    return Connection(bundle, M.as_mat(gamma))


def flat_connection(bundle: TrivialPseudoBundle) -> Connection:
    return Connection(bundle, M.zeros(bundle.rank))


def nabla(conn: Connection, components: M.ExprVec) -> M.ExprVec:
    """``s' + Γ s`` componentwise."""
    return M.vec_add(M.vec_diff(components), M.mat_vec(conn.gamma, components))


def apply_connection(conn: Connection, s: Section, samples=None) -> Section:
    """``∇s`` as the section of ``dx ⊗ e_i`` coefficients.

    With ``samples`` given, raise SingularInput if any of them sits on a kink
    of ``s`` where ``s'`` is undefined.
    """
    if s.bundle != conn.bundle:
        raise ValueError("section and connection live on different bundles")
    if s.point_values:
        raise SingularInput("sections with pinned point values have no derivative there",
                            [y for y, _ in s.point_values])
    out = nabla(conn, s.components)
    if samples is not None:
        xs = np.asarray(samples, dtype=np.float64)
        bad = sorted(set(xs.tolist()) - set(smooth_samples(s.components, xs).tolist()))
        if bad:
            raise SingularInput(f"s' is undefined at {len(bad)} sample(s), first {bad[0]:.6g}", bad)
    return Section(s.bundle, out)


def leibniz_check(conn: Connection, h: SmoothExpr, s: Section, samples,
                  tol: float = IDENTITY_TOL, drop_dh: bool = False) -> CheckReport:
    """Residual of ``∇(h s) - (dh ⊗ s + h ∇s)``.

    ``drop_dh`` removes the ``dh ⊗ s`` term from the right-hand side; it is a
    negative control and must fail for nonconstant ``h``.
    """
    h = E.as_expr(h)
    lhs = nabla(conn, M.vec_scale(h, s.components))
    rhs = M.vec_scale(h, nabla(conn, s.components))
    if not drop_dh:
        rhs = M.vec_add(M.vec_scale(E.differentiate(h), s.components), rhs)
    xs = smooth_samples(list(s.components) + [h], samples)
    r, xs = _vec_residual(lhs, rhs, xs)
    name = "leibniz_check (dh⊗s dropped)" if drop_dh else "leibniz_check"
    return _report(name, r, xs, tol, law="leibniz_check")


def levi_civita_1d(h: SmoothExpr, bundle: TrivialPseudoBundle | None = None) -> Connection:
    """``Γ = h' / (2h)`` for the rank-1 metric ``h``."""
    h = E.as_expr(h)
    if bundle is None:
        from .bundles import standard_fibre
        from .gluing import Piece
        bundle = TrivialPseudoBundle("V", Piece("X"), standard_fibre(1))
    if bundle.rank != 1:
        raise ValueError("levi_civita_1d is for rank-1 bundles")
    xs = bundle.base.samples(1025)
    try:
        vals = E.evaluate_many(h, xs)
    except DomainError as exc:
        raise NonPositiveMetric(f"metric {E.to_text(h)} is not defined on the piece: {exc}") from None
    i = int(np.argmin(vals))
    if vals[i] < POSITIVITY_MARGIN:
        raise NonPositiveMetric(f"metric {E.to_text(h)} = {vals[i]:.3g} at x={xs[i]:.6g} is not positive")
    gamma = E.div(E.differentiate(h), E.mul(E.const(2.0), h))
    return Connection(bundle, ((gamma,),))


@dataclass(frozen=True)
class DualSection:
    """A section ``t`` of ``(Λ¹X)*`` on a line: ``a dx -> t a``."""

    coefficient: SmoothExpr

    def __post_init__(self):
        object.__setattr__(self, "coefficient", E.as_expr(self.coefficient))


@dataclass(frozen=True)
class GluedDualSection:
    """``t1`` on ``X1`` and ``t2`` on ``X2``; at a glue point it pairs with a ``Λ¹`` pair componentwise."""

    space: object
    t1: DualSection
    t2: DualSection

    def pair(self, value: LambdaFibreValue, p: GluedPoint) -> float:
        if isinstance(p, First):
            return value.first * E.evaluate(self.t1.coefficient, p.x)
        out = 0.0
        if value.first is not None:
            y = self.space.preimage(p.x)[0]
            out += value.first * E.evaluate(self.t1.coefficient, y)
        if value.second is not None:
            out += value.second * E.evaluate(self.t2.coefficient, p.x)
        return out


def covariant_derivative(conn: Connection, t: DualSection, s: Section) -> Section:
    """``∇_t s = t (s' + Γ s)``."""
    return Section(s.bundle, M.vec_scale(t.coefficient, nabla(conn, s.components)))


def covariant_linearity_check(conn: Connection, t1: DualSection, t2: DualSection, h: SmoothExpr,
                              s: Section, samples, tol: float = IDENTITY_TOL) -> CheckReport:
    """``∇_{t1+t2} s = ∇_{t1} s + ∇_{t2} s`` and ``∇_{h t1} s = h ∇_{t1} s``."""
    h = E.as_expr(h)
    add_l = covariant_derivative(conn, DualSection(E.add(t1.coefficient, t2.coefficient)), s).components
    add_r = M.vec_add(covariant_derivative(conn, t1, s).components,
                      covariant_derivative(conn, t2, s).components)
    mul_l = covariant_derivative(conn, DualSection(E.mul(h, t1.coefficient)), s).components
    mul_r = M.vec_scale(h, covariant_derivative(conn, t1, s).components)
    xs = smooth_samples(list(s.components), samples)
    r1, _ = _vec_residual(add_l, add_r, xs)
    r2, _ = _vec_residual(mul_l, mul_r, xs)
    return _report("covariant_linearity_check", np.maximum(r1, r2), xs, tol)


def _same_base(a: Connection, b: Connection) -> None:
    if a.bundle.base != b.bundle.base:
        raise BaseMismatch("connections live over different base pieces")


def direct_sum_connection(c1: Connection, c2: Connection) -> Connection:
    _same_base(c1, c2)
    return Connection(direct_sum_bundle(c1.bundle, c2.bundle), M.block_diag(c1.gamma, c2.gamma))


def tensor_connection(c1: Connection, c2: Connection) -> Connection:
    """``Γ1 ⊗ I + I ⊗ Γ2`` on the Kronecker fibre."""
    _same_base(c1, c2)
    k1, k2 = c1.bundle.rank, c2.bundle.rank
    gamma = M.mat_add(M.kron(c1.gamma, M.identity(k2)), M.kron(M.identity(k1), c2.gamma))
    return Connection(tensor_bundle(c1.bundle, c2.bundle), gamma)


# -- pseudo-metrics --------------------------------------------------------------------

@dataclass(frozen=True)
class PseudoMetric:
    """Symmetric positive semidefinite ``G`` whose rank is the dimension of the fibre's dual."""

    bundle: TrivialPseudoBundle
    matrix: M.ExprMat

    def __post_init__(self):
        g = M.as_mat(self.matrix)
        k = self.bundle.rank
        if len(g) != k or any(len(r) != k for r in g):
            raise InvalidMetric(f"metric must be {k}x{k}")
        object.__setattr__(self, "matrix", g)
        xs = self.bundle.base.samples(129)
        try:
            vals = M.evaluate_mat_many(g, xs)
        except DomainError as exc:
            raise InvalidMetric(f"metric entry undefined on the piece: {exc}") from None
        asym = np.max(np.abs(vals - np.swapaxes(vals, 1, 2)))
        if asym > IDENTITY_TOL:
            raise InvalidMetric(f"metric is not symmetric (residual {asym:.3g})")
        want = fibre_dual_dim(self.bundle.fibre)
        for x, m in zip(xs, vals):
            ev = np.linalg.eigvalsh(m)
            if ev[0] < EIGEN_FLOOR:
                raise NonPositiveMetric(f"metric has eigenvalue {ev[0]:.3g} at x={x:.6g}")
            r = int(np.sum(ev > RANK_TOL))
            if r != want:
                raise InvalidMetric(f"metric has rank {r} at x={x:.6g}; the fibre's dual has dimension {want}")

    def at(self, x: float) -> np.ndarray:
        return M.evaluate_mat(self.matrix, x)

    def pairing(self, s: M.ExprVec, t: M.ExprVec) -> SmoothExpr:
        """``s^T G t`` as an expression."""
        return M.dot(s, M.mat_vec(self.matrix, t))


def pseudo_metric(bundle: TrivialPseudoBundle, matrix) -> PseudoMetric:
    if isinstance(matrix, (int, float, SmoothExpr)):
        matrix = ((matrix,),)
    return PseudoMetric(bundle, M.as_mat(matrix))


def metric_compatible_check(conn: Connection, g: PseudoMetric, s: Section, t: Section, samples,
                            tol: float = IDENTITY_TOL) -> CheckReport:
    """Residual of ``(s^T G t)' - ((∇s)^T G t + s^T G ∇t)``."""
    lhs = E.differentiate(g.pairing(s.components, t.components))
    rhs = E.add(g.pairing(nabla(conn, s.components), t.components),
                g.pairing(s.components, nabla(conn, t.components)))
    xs = smooth_samples(list(s.components) + list(t.components), samples)
    r = np.abs(E.evaluate_many(lhs, xs) - E.evaluate_many(rhs, xs)) if len(xs) else np.zeros(0)
    return _report("metric_compatible_check", r, xs, tol)


def metrics_compatible_check(g1: PseudoMetric, g2: PseudoMetric, G: GluedBundle,
                             tol: float = GLUE_TOL) -> CheckReport:
    """``G1(y) = A_y^T G2(f(y)) A_y`` on the locus."""
    res, where = [], []
    for y in G.space.locus_samples():
        y = float(y)
        a = G.A(y)
        d = g1.at(y) - a.T @ g2.at(G.space.f(y)) @ a
        res.append(float(np.max(np.abs(d))))
        where.append(y)
    return worst("metrics_compatible_check", res, where, tol)


@dataclass(frozen=True)
class GluedMetric:
    """``g̃``: ``g1`` over ``i1(X1 \\ Y)``, ``g2`` over ``i2(X2)``."""

    g1: PseudoMetric
    g2: PseudoMetric
    bundle: GluedBundle

    def at(self, p: GluedPoint) -> np.ndarray:
        if isinstance(p, First):
            return self.g1.at(p.x)
        return self.g2.at(p.x)

    __call__ = at


def induced_pseudo_metric(g1: PseudoMetric, g2: PseudoMetric, G: GluedBundle,
                          tol: float = GLUE_TOL) -> GluedMetric:
    rep = metrics_compatible_check(g1, g2, G, tol)
    if not rep:
        raise IncompatibleMetrics(f"g1 != f̃*g2 on the locus: residual {rep.residual:.3g} at y={rep.location}")
    return GluedMetric(g1, g2, G)


# -- compatible connections and the induced connection ----------------------------------

def generated_test_pairs(G: GluedBundle, degree: int = 3) -> list[tuple[Section, Section]]:
    """Compatible pairs built from the polynomial basis ``x^j e_i`` (``j <= degree``) of ``V2``.

    Each ``s2`` is paired with ``s1 = A^{-1} (s2∘f)``, valid on the locus.
    """
    pairs = []
    for i in range(G.v2.rank):
        for j in range(degree + 1):
            comps = [E.ZERO] * G.v2.rank
            comps[i] = E.power(E.X, j)
            s2 = Section(G.v2, tuple(comps))
            pairs.append((compatible_source(s2, G, local=True), s2))
    return pairs


def connections_compatible_check(c1: Connection, c2: Connection, G: GluedBundle, test_pairs=None,
                                 tol: float = IDENTITY_TOL) -> CheckReport:
    """``A_y (∇¹s1)(y) = f'(y) (∇²s2)(f(y))`` on the locus for compatible test pairs.

    On a finite locus both restrictions of forms vanish and the condition is empty.
    """
    if c1.bundle != G.v1 or c2.bundle != G.v2:
        raise ValueError("connections do not belong to the glued bundle's factors")
    if G.finite:
        return CheckReport("connections_compatible_check", True, 0.0, None, 0,
                           law="connections_compatible_check",
                           detail="finite locus: i*Λ and j*Λ are zero maps")
    if test_pairs is None:
        test_pairs = generated_test_pairs(G)
    f = G.space.locus.f
    df = E.differentiate(f)
    ys = G.space.sample_interval()
    A = M.evaluate_mat_many(G.fmap.entries, ys)
    dfy = E.evaluate_many(df, ys)
    fys = E.evaluate_many(f, ys)
    res, where = [], []
    for n, (s1, s2) in enumerate(test_pairs):
        lhs = np.einsum("nij,nj->ni", A, M.evaluate_vec_many(nabla(c1, s1.components), ys))
        rhs = dfy[:, None] * M.evaluate_vec_many(nabla(c2, s2.components), fys)
        r = np.abs(lhs - rhs).max(axis=1)
        i = int(np.argmax(r))
        res.append(float(r[i]))
        where.append({"pair": n, "y": float(ys[i])})
    rep = worst("connections_compatible_check", res, where, tol, law="connections_compatible_check",
                extra={"pairs": len(test_pairs), "points": len(ys)})
    rep.samples = len(test_pairs) * len(ys)
    return rep


def _check_invertible(G: GluedBundle) -> None:
    k2, k1 = G.fmap.shape
    if k1 != k2:
        raise NonInvertibleGluing(f"f̃ maps rank {k1} to rank {k2}")
    if G.finite:
        if not G.space.locus.injective:
            raise NonInvertibleGluing("f is not injective on the locus")
        for y in G.space.locus.points:
            if np.linalg.matrix_rank(G.A(y), tol=1e-10) < k1:
                raise NonInvertibleGluing(f"A_y is singular at y={y}")
        return
    d = M.det(G.fmap.entries)
    vals = np.abs(E.evaluate_many(d, G.space.sample_interval(dense=True)))
    if vals.min() < POSITIVITY_MARGIN:
        raise NonInvertibleGluing(f"det A_y comes within {POSITIVITY_MARGIN:g} of 0 on the locus")


@dataclass(frozen=True)
class GluedConnection:
    c1: Connection
    c2: Connection
    bundle: GluedBundle
    certificate: CheckReport = field(compare=False)


def induce_connection(c1: Connection, c2: Connection, G: GluedBundle, test_pairs=None,
                      tol: float = IDENTITY_TOL) -> GluedConnection:
    _check_invertible(G)
    cert = connections_compatible_check(c1, c2, G, test_pairs, tol)
    if not cert:
        raise IncompatibleConnections(
            f"∇¹ and ∇² are not compatible: residual {cert.residual:.3g} at {cert.location}", cert)
    return GluedConnection(c1, c2, G, cert)


@dataclass(frozen=True)
class GluedConnectionValue:
    """``∇∪ s`` at a point: a ``Λ¹`` value (or pair) tensored with a fibre vector.

    ``first`` is the ``Λ¹(X1)`` part, already pushed into the ``V2`` fibre at
    glue points; ``second`` is the ``Λ¹(X2)`` part.
    """

    first: np.ndarray | None = None
    second: np.ndarray | None = None

    @property
    def is_pair(self) -> bool:
        return self.first is not None and self.second is not None


def _nabla_value(conn: Connection, s: Section, x: float) -> np.ndarray:
    return M.evaluate_vec(nabla(conn, s.components), x)


def apply_glued_connection(gc: GluedConnection, s: GluedSection, p: GluedPoint) -> GluedConnectionValue:
    """Three cases: ``∇¹s1`` off the locus in ``X1``, ``∇²s2`` off ``f(Y)``, the pair on glue points."""
    space = gc.bundle.space
    if isinstance(p, First):
        return GluedConnectionValue(first=_nabla_value(gc.c1, s.s1, p.x))
    if not space.in_image(p.x):
        return GluedConnectionValue(second=_nabla_value(gc.c2, s.s2, p.x))
    y = space.preimage(p.x)[0]
    pushed = gc.bundle.A(y) @ _nabla_value(gc.c1, s.s1, y)
    return GluedConnectionValue(first=pushed, second=_nabla_value(gc.c2, s.s2, p.x))


def glued_formula(gc: GluedConnection) -> list[tuple[str, str]]:
    """The three branches of ``∇∪`` as text, for reports."""
    g1, g2 = gc.c1.text(), gc.c2.text()
    return [
        ("i1(X1 \\ Y)", f"(s1' + {g1} s1) dx ⊗ e"),
        ("i2(f(Y))", f"(A_y (s1' + {g1} s1)(y), (s2' + {g2} s2)(f(y))) ⊗ e"),
        ("i2(X2 \\ f(Y))", f"(s2' + {g2} s2) dx ⊗ e"),
    ]


def glued_leibniz_check(gc: GluedConnection, h: GluedFunction, s: GluedSection, points,
                        tol: float = IDENTITY_TOL) -> CheckReport:
    """``∇∪(h s) = dh ⊗ s + h ∇∪ s`` branchwise, ``dh`` taken from the glued differential."""
    dh = glued_differential(h)
    hs = GluedSection(s.bundle, s.s1.scale(h.h1), s.s2.scale(h.h2))
    res, where = [], []
    for p in points:
        lhs = apply_glued_connection(gc, hs, p)
        base = apply_glued_connection(gc, s, p)
        d = dh(p)
        hv = h(p)
        sv = s.value(p)
        parts = []
        if lhs.first is not None:
            parts.append(lhs.first - (d.first * sv + hv * base.first))
        if lhs.second is not None:
            parts.append(lhs.second - (d.second * sv + hv * base.second))
        res.append(max(float(np.max(np.abs(v), initial=0.0)) for v in parts))
        where.append(_pt(p))
    return worst("glued_leibniz_check", res, where, tol)


def _pt(p: GluedPoint) -> str:
    return f"{type(p).__name__}({p.x:.6g})"


def induced_metric_compatibility_check(gc: GluedConnection, gm: GluedMetric, test_sections, points,
                                       tol: float = IDENTITY_TOL) -> CheckReport:
    """``d(g̃(s,t)) = g̃(∇∪s, t) + g̃(s, ∇∪t)`` branchwise.

    ``test_sections`` is a list of ``(s, t)`` glued sections; ``points`` are
    glued points (``First`` off the locus, ``Second`` anywhere). Each factor
    connection is first checked against its own metric.
    """
    pre = []
    space = gc.bundle.space
    xs1 = [p.x for p in points if isinstance(p, First)] + [y for p in points if not isinstance(p, First)
                                                            for y in space.preimage(p.x)]
    xs2 = [p.x for p in points if not isinstance(p, First)]
    for s, t in test_sections:
        pre.append(metric_compatible_check(gc.c1, gm.g1, s.s1, t.s1, xs1, tol))
        pre.append(metric_compatible_check(gc.c2, gm.g2, s.s2, t.s2, xs2, tol))
    bad = [r for r in pre if not r]
    if bad:
        r = max(bad, key=lambda c: c.residual)
        return CheckReport("induced_metric_compatibility_check", False, r.residual, r.location,
                           r.samples, detail="a factor connection is not compatible with its metric")
    res, where = [], []
    for s, t in test_sections:
        h1 = gm.g1.pairing(s.s1.components, t.s1.components)
        h2 = gm.g2.pairing(s.s2.components, t.s2.components)
        dh = glued_differential(glue_functions(h1, h2, gc.bundle.space))
        for p in points:
            G = gm.at(p)
            ns, nt = apply_glued_connection(gc, s, p), apply_glued_connection(gc, t, p)
            sv, tv = s.value(p), t.value(p)
            d = dh(p)
            parts = []
            if ns.first is not None:
                parts.append(d.first - (ns.first @ G @ tv + sv @ G @ nt.first))
            if ns.second is not None:
                parts.append(d.second - (ns.second @ G @ tv + sv @ G @ nt.second))
            res.append(max(abs(float(v)) for v in parts))
            where.append(_pt(p))
    rep = worst("induced_metric_compatibility_check", res, where, tol)
    rep.extra = {"pairs": len(test_sections), "points": len(points)}
    return rep


def pullback_connection(c2: Connection, G: GluedBundle, bundle: TrivialPseudoBundle | None = None) -> Connection:
    """``Γ1 = A^{-1} A' + f' A^{-1} (Γ2∘f) A``: the connection on ``V1`` compatible with ``c2``.

    Differentiating ``A s1 = s2∘f`` shows this is exactly the ``Γ1`` that makes
    the defining identity of compatibility hold for every compatible pair.
    """
    if G.finite:
        raise ValueError("on a finite locus every pair of connections is compatible")
    A = G.fmap.entries
    inv = M.inverse(A)
    f = G.space.locus.f
    df = E.differentiate(f)
    dA = tuple(tuple(E.differentiate(e) for e in row) for row in A)
    g2f = tuple(tuple(E.compose(e, f) for e in row) for row in c2.gamma)
    term1 = M.mat_mul(inv, dA)
    term2 = tuple(tuple(E.mul(df, e) for e in row) for row in M.mat_mul(M.mat_mul(inv, g2f), A))
    return Connection(bundle or G.v1, M.mat_add(term1, term2))


__all__ = [
    "Connection", "connection", "flat_connection", "apply_connection", "leibniz_check",
    "levi_civita_1d", "DualSection", "GluedDualSection", "covariant_derivative",
    "covariant_linearity_check", "direct_sum_connection", "tensor_connection", "PseudoMetric",
    "pseudo_metric", "metric_compatible_check", "metrics_compatible_check", "GluedMetric",
    "induced_pseudo_metric", "connections_compatible_check", "induce_connection", "GluedConnection",
    "GluedConnectionValue", "apply_glued_connection", "glued_formula", "glued_leibniz_check",
    "induced_metric_compatibility_check", "generated_test_pairs", "nabla", "smooth_samples",
    "pullback_connection",
]
