"""Sections of trivial and glued pseudo-bundles and the maps ``S`` and ``S1``.

A section of a trivial bundle is a vector of expressions in the base variable.
It may additionally carry values pinned at finitely many locus points; these
model perturbations supported on a finite gluing locus (two invariant sections
with the same image under ``S1`` can only differ there).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import expr as E
from . import exprmat as M
from .bundles import (GluedBundle, ReducedBundle, TrivialPseudoBundle,
                      tensor_glued_bundle, witness_bundle)
from .errors import (BaseMismatch, DomainError, DuplicatePoints,
                     IncompatibleSections, NotInvariant)
from .expr import SmoothExpr
from .gluing import GLUE_TOL, First, GluedFunction, GluedPoint
from .report import CheckReport, worst

ROUND_TRIP_TOL = 1e-10
WITNESS_GAP = 1.9
WITNESS_MATCH = 1e-6


@dataclass(frozen=True)
class Section:
    bundle: TrivialPseudoBundle
    components: M.ExprVec
    point_values: tuple[tuple[float, tuple[float, ...]], ...] = ()

    def __post_init__(self):
        comps = M.as_vec(self.components)
        if len(comps) != self.bundle.rank:
            raise ValueError(f"section has {len(comps)} components, fibre rank is {self.bundle.rank}")
        object.__setattr__(self, "components", comps)
        pins = self.point_values.items() if isinstance(self.point_values, dict) else self.point_values
        pins = tuple(sorted((float(y), tuple(float(c) for c in v)) for y, v in pins))
        for _, v in pins:
            if len(v) != self.bundle.rank:
                raise ValueError("pinned value has the wrong length")
        object.__setattr__(self, "point_values", pins)

    @property
    def pinned(self) -> dict[float, np.ndarray]:
        return {y: np.array(v) for y, v in self.point_values}

    def value(self, x: float) -> np.ndarray:
        for y, v in self.point_values:
            if y == x:
                return np.array(v)
        return M.evaluate_vec(self.components, x)

    def values(self, xs) -> np.ndarray:
        xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
        out = M.evaluate_vec_many(self.components, xs)
        for y, v in self.point_values:
            out[xs == y] = v
        return out

    @property
    def smooth_expression(self) -> bool:
        return not self.point_values

    def rough_flags(self) -> tuple[tuple[bool, bool], ...]:
        """Per coordinate: (uses abs, coordinate touched by a rough fibre direction)."""
        dirs = self.bundle.fibre.rough_directions
        touched = np.any(np.abs(dirs) > 0, axis=0) if dirs.size else np.zeros(self.bundle.rank, bool)
        return tuple((E.contains_abs(c), bool(t)) for c, t in zip(self.components, touched))

    def __add__(self, other: "Section") -> "Section":
        if other.bundle != self.bundle:
            raise ValueError("sections of different bundles")
        pins = {}
        for y in {y for y, _ in self.point_values} | {y for y, _ in other.point_values}:
            pins[y] = tuple(self.value(y) + other.value(y))
        return Section(self.bundle, M.vec_add(self.components, other.components), pins)

    def scale(self, h: SmoothExpr) -> "Section":
        pins = {y: tuple(E.evaluate(h, y) * np.array(v)) for y, v in self.point_values}
        return Section(self.bundle, M.vec_scale(h, self.components), pins)

    def text(self) -> str:
        return M.vec_text(self.components)


def section(bundle: TrivialPseudoBundle, *components, point_values=()) -> Section:
    return Section(bundle, M.as_vec(components), point_values)


def zero_section(bundle: TrivialPseudoBundle) -> Section:
    return Section(bundle, (E.ZERO,) * bundle.rank)


# -- compatibility and invariance ---------------------------------------------------

def _check_membership(s1: Section, s2: Section | None, G: GluedBundle) -> None:
    if s1.bundle != G.v1 or (s2 is not None and s2.bundle != G.v2):
        raise ValueError("sections do not belong to the bundles being glued")


def compatibility_residuals(s1: Section, s2: Section, G: GluedBundle):
    ys = G.space.locus_samples()
    out = []
    for y in ys:
        y = float(y)
        r = G.A(y) @ s1.value(y) - s2.value(G.space.f(y))
        out.append((float(np.max(np.abs(r), initial=0.0)), y))
    return out


def is_compatible(s1: Section, s2: Section, G: GluedBundle, tol: float = GLUE_TOL) -> CheckReport:
    """``f̃∘s1 = s2∘f`` on the locus (exact points or interval samples)."""
    _check_membership(s1, s2, G)
    pairs = compatibility_residuals(s1, s2, G)
    return worst("is_compatible", [r for r, _ in pairs], [y for _, y in pairs], tol)


def is_invariant(s1: Section, G: GluedBundle, tol: float = GLUE_TOL) -> CheckReport:
    """``A_y s1(y) = A_y' s1(y')`` whenever ``f(y) = f(y')``; vacuous on an interval locus."""
    _check_membership(s1, None, G)
    if not G.finite:
        return CheckReport("is_invariant", True, 0.0, None, 0, detail="vacuous: f is injective")
    groups: dict[float, list[float]] = {}
    for y, fy in G.space.locus.pairs:
        groups.setdefault(fy, []).append(y)
    residuals, where = [], []
    for fy, ys in sorted(groups.items()):
        images = [G.A(y) @ s1.value(y) for y in ys]
        for y, img in zip(ys[1:], images[1:]):
            residuals.append(float(np.max(np.abs(img - images[0]), initial=0.0)))
            where.append((ys[0], y))
    return worst("is_invariant", residuals, where, tol)


@dataclass(frozen=True)
class GluedSection:
    """``s1 ∪_(f,f̃) s2``."""

    bundle: GluedBundle
    s1: Section
    s2: Section

    def value(self, p: GluedPoint) -> np.ndarray:
        if isinstance(p, First):
            return self.s1.value(p.x)
        return self.s2.value(p.x)

    __call__ = value

    def residual(self) -> float:
        return max((r for r, _ in compatibility_residuals(self.s1, self.s2, self.bundle)), default=0.0)


def glue_sections_S(s1: Section, s2: Section, G: GluedBundle, tol: float = GLUE_TOL) -> GluedSection:
    report = is_compatible(s1, s2, G, tol)
    if not report:
        raise IncompatibleSections(
            f"f̃∘s1 != s2∘f: residual {report.residual:.3g} at y={report.location}", report)
    return GluedSection(G, s1, s2)


def section_add(a: GluedSection, b: GluedSection, tol: float = GLUE_TOL) -> GluedSection:
    if a.bundle != b.bundle:
        raise ValueError("sections of different glued bundles")
    out = GluedSection(a.bundle, a.s1 + b.s1, a.s2 + b.s2)
    assert out.residual() <= 2 * tol, "sum of compatible pairs left the compatible subspace"
    return out


def section_mul(h: GluedFunction, a: GluedSection, tol: float = GLUE_TOL) -> GluedSection:
    if h.space != a.bundle.space:
        raise BaseMismatch("function and section live over different gluings")
    out = GluedSection(a.bundle, a.s1.scale(h.h1), a.s2.scale(h.h2))
    assert out.residual() <= 2 * tol * max(1.0, _sup_on_locus(h)), "h·s is not compatible"
    return out


def _sup_on_locus(h: GluedFunction) -> float:
    ys = h.space.locus_samples()
    return float(np.max(np.abs(E.evaluate_many(h.h1, ys))))


def tensor_sections(a: GluedSection, b: GluedSection) -> GluedSection:
    if a.bundle.space != b.bundle.space:
        raise BaseMismatch("tensor product of sections needs the same base gluing")
    T = tensor_glued_bundle(a.bundle, b.bundle)

    def side(s, t, bundle):
        pins = {y: tuple(np.kron(s.value(y), t.value(y)))
                for y in {y for y, _ in s.point_values} | {y for y, _ in t.point_values}}
        return Section(bundle, M.kron_vec(s.components, t.components), pins)

    return GluedSection(T, side(a.s1, b.s1, T.v1), side(a.s2, b.s2, T.v2))


# -- generating compatible pairs --------------------------------------------------------

def interpolating_polynomials(nodes, values) -> M.ExprVec:
    """One polynomial per column of ``values`` through ``(nodes[i], values[i])``."""
    nodes = np.asarray(nodes, dtype=np.float64)
    values = np.atleast_2d(np.asarray(values, dtype=np.float64))
    if values.shape[0] != len(nodes):
        values = values.T
    n = len(nodes)
    vander = np.vander(nodes, n, increasing=True)
    coeffs = np.linalg.solve(vander, values)
    monomials = [E.power(E.X, i) for i in range(n)]
    return tuple(E.linear_combination(coeffs[:, j], monomials, clean=0.0) for j in range(values.shape[1]))


def compatible_partner(s1: Section, G: GluedBundle, base: M.ExprVec | None = None) -> Section:
    """A section ``s2`` of ``V2`` compatible with ``s1``.

    Finite locus: ``base`` plus the interpolating correction through the glue
    points; ``s1`` must be invariant. Interval locus: ``f`` needs an inverse,
    so use :func:`compatible_source` instead.
    """
    if not G.finite:
        raise ValueError("compatible_partner needs a finite locus; use compatible_source")
    inv = is_invariant(s1, G)
    if not inv:
        raise NotInvariant("s1 is not (f,f̃)-invariant, so no compatible s2 exists", inv)
    base = base or (E.ZERO,) * G.v2.rank
    targets: dict[float, np.ndarray] = {}
    for y, fy in G.space.locus.pairs:
        targets.setdefault(fy, G.A(y) @ s1.value(y))
    nodes = sorted(targets)
    residual = np.array([targets[t] - M.evaluate_vec(base, t) for t in nodes])
    corr = interpolating_polynomials(nodes, residual)
    return Section(G.v2, M.vec_add(base, corr))


def compatible_source(s2: Section, G: GluedBundle, base: M.ExprVec | None = None,
                      local: bool = False) -> Section:
    """A section ``s1`` of ``V1`` compatible with a given ``s2``.

    Interval locus: ``s1 = A^{-1} (s2∘f)``, which needs a square fibre map
    invertible along the locus and ``Y`` covering the whole sampling window
    of ``X1`` (otherwise ``s1`` would be piecewise; ``local=True`` accepts a
    section that is only meaningful on ``Y``). Finite locus: ``base``
    corrected through the locus points by least-squares preimages.
    """
    if G.finite:
        base = base or (E.ZERO,) * G.v1.rank
        nodes = list(G.space.locus.points)
        values = []
        for y in nodes:
            want = s2.value(G.space.f(y)) - G.A(y) @ M.evaluate_vec(base, y)
            sol, *_ = np.linalg.lstsq(G.A(y), want, rcond=None)
            values.append(sol + M.evaluate_vec(base, y))
        resid = np.array(values) - np.array([M.evaluate_vec(base, y) for y in nodes])
        corr = interpolating_polynomials(nodes, resid)
        return Section(G.v1, M.vec_add(base, corr))
    k2, k1 = G.fmap.shape
    if k1 != k2:
        raise ValueError("compatible_source on an interval needs a square fibre map")
    a, b = G.space._clipped()
    if not local and (a, b) != tuple(G.v1.base.window):
        raise ValueError("compatible_source on an interval needs the locus to cover the window of X1")
    inv = M.inverse(G.fmap.entries)
    d = M.det(G.fmap.entries)
    try:
        E.check_nonvanishing(E.recip(d), G.space.sample_interval(dense=True))
    except DomainError as exc:
        raise ValueError(f"fibre map is not invertible along the locus: {exc}") from None
    f = G.space.locus.f
    return Section(G.v1, M.mat_vec(inv, M.vec_compose(s2.components, f)))


# -- S1 and its right inverse ----------------------------------------------------------

@dataclass(frozen=True)
class ReducedSection:
    """A section of ``V1^f̃`` over ``X1^f``.

    ``outside`` gives the values off the locus; ``inside`` the canonical coset
    member on an interval locus; ``pins`` the canonical members at class
    representatives of a finite locus.
    """

    reduced: ReducedBundle
    outside: M.ExprVec
    inside: M.ExprVec | None = None
    pins: tuple[tuple[float, tuple[float, ...]], ...] = ()

    def value(self, x: float) -> np.ndarray:
        space = self.reduced.bundle.space
        if space.in_domain(x):
            if space.finite:
                rep = self.reduced.base.project(x)
                return np.array(dict(self.pins)[rep])
            return M.evaluate_vec(self.inside, x)
        return M.evaluate_vec(self.outside, x)

    def __add__(self, other: "ReducedSection") -> "ReducedSection":
        inside = None if self.inside is None else M.vec_add(self.inside, other.inside)
        theirs = dict(other.pins)
        pins = tuple((y, tuple(np.array(v) + np.array(theirs[y]))) for y, v in self.pins)
        return ReducedSection(self.reduced, M.vec_add(self.outside, other.outside), inside, pins)

    def scale(self, h: SmoothExpr) -> "ReducedSection":
        """Multiplication by ``h^f`` for an f-invariant ``h``."""
        inside = None if self.inside is None else M.vec_scale(h, self.inside)
        pins = tuple((y, tuple(E.evaluate(h, y) * np.array(v))) for y, v in self.pins)
        return ReducedSection(self.reduced, M.vec_scale(h, self.outside), inside, pins)


def _constant_matrix(R: ReducedBundle, which: str) -> np.ndarray:
    G = R.bundle
    mats = [getattr(R.quotient.fibre(float(y)), which) for y in G.space.sample_interval()]
    if any(np.max(np.abs(m - mats[0])) > 1e-12 for m in mats):
        raise ValueError("kernel of f̃ moves along the interval; S1 needs a constant splitting there")
    return mats[0]


def _covers_window(G: GluedBundle) -> bool:
    return tuple(G.space._clipped()) == tuple(G.v1.base.window)


def S1(s1: Section, R: ReducedBundle, tol: float = GLUE_TOL) -> ReducedSection:
    """The section ``S1(s1)`` of ``V1^f̃`` with ``S1(s1)∘χ1^f = χ1^f̃∘s1``."""
    G = R.bundle
    if s1.bundle != G.v1:
        raise ValueError("section does not belong to V1")
    rep = is_invariant(s1, G, tol)
    if not rep:
        raise NotInvariant(f"s1 is not (f,f̃)-invariant: residual {rep.residual:.3g} at {rep.location}", rep)
    if G.finite:
        pins = tuple((c[0], tuple(R.chi_ftilde(c[0], s1.value(c[0]))[1]))
                     for c in sorted({R.base.class_of(y) for y in G.space.locus.points}))
        return ReducedSection(R, s1.components, None, pins)
    if s1.point_values:
        raise ValueError("pinned values are only meaningful on a finite locus")
    P = _constant_matrix(R, "projector")
    return ReducedSection(R, s1.components, M.const_mat_vec(P, s1.components))


def S1_right_inverse(r: ReducedSection, R: ReducedBundle) -> Section:
    """Lift through the stored complement; the result is invariant and ``S1`` maps it back to ``r``."""
    G = R.bundle
    if G.finite:
        pins = {}
        for y in G.space.locus.points:
            w = r.value(y)
            rep = R.base.project(y)
            if rep == y:
                pins[y] = tuple(R.quotient.lift(y, w))
            else:
                fib = R.quotient.fibre(y)
                m = G.A(y) @ fib.complement
                coef = np.linalg.lstsq(m, R.ftilde_sim(rep, w), rcond=None)[0]
                pins[y] = tuple(fib.complement @ coef)
        return Section(G.v1, r.outside, pins)
    L = _constant_matrix(R, "lift")
    lifted = M.const_mat_vec(L, r.inside)
    if _covers_window(G):
        return Section(G.v1, lifted)
    if np.allclose(L, np.eye(len(L)), atol=0.0):
        return Section(G.v1, r.outside)
    raise ValueError("lift over a proper sub-interval with a nontrivial kernel would be piecewise")


def round_trip_report(r: ReducedSection, R: ReducedBundle, samples=None,
                      tol: float = ROUND_TRIP_TOL) -> CheckReport:
    back = S1(S1_right_inverse(r, R), R)
    G = R.bundle
    xs = list(G.space.locus_samples())
    if samples is not None:
        xs += list(samples)
    res = [float(np.max(np.abs(back.value(float(x)) - r.value(float(x))), initial=0.0)) for x in xs]
    return worst("S1_right_inverse round trip", res, [float(x) for x in xs], tol, law="S1_right_inverse")


def kernel_perturbation(s1: Section, R: ReducedBundle, y: float, direction=None) -> Section:
    """``s1 + s0`` with ``s0`` a kernel vector at the locus point ``y`` and zero elsewhere."""
    G = R.bundle
    if not G.finite or not G.space.in_domain(y):
        raise ValueError("kernel perturbations are attached to points of a finite locus")
    kb = R.quotient.kernel.basis_at(y)
    if kb.shape[1] == 0:
        raise ValueError(f"f̃ is injective on the fibre over {y}")
    v = kb[:, 0] if direction is None else np.asarray(direction, dtype=np.float64)
    if np.max(np.abs(G.A(y) @ v)) > 1e-10:
        raise ValueError("perturbation direction is not in the kernel")
    pins = s1.pinned
    pins[y] = s1.value(y) + v
    return Section(s1.bundle, s1.components, {k: tuple(p) for k, p in pins.items()})


def reduced_sections_equal(a: ReducedSection, b: ReducedSection, samples, tol: float) -> CheckReport:
    xs = list(samples)
    space = a.reduced.bundle.space
    if space.finite:
        xs += list(space.locus.points)
    res = [float(np.max(np.abs(a.value(float(x)) - b.value(float(x))), initial=0.0)) for x in xs]
    return worst("reduced sections equal", res, [float(x) for x in xs], tol)


# -- the infinite-dimension witness -------------------------------------------------------

def dim_witness(points) -> Section:
    """``x -> (x, 0, sum |x - x_i|)`` on ``R x R^2`` with rough direction ``e_z``.

    The classical derivative fails exactly at the given points, so these
    sections are linearly independent for distinct point sets.
    """
    pts = [float(p) for p in points]
    if len(set(pts)) != len(pts):
        raise DuplicatePoints(f"repeated points in {sorted(pts)}")
    z = E.total(E.absolute(E.sub(E.X, E.const(p))) for p in sorted(pts))
    return Section(witness_bundle(), (E.ZERO, z))


def certify_dim_witness(s: Section, points, others: int = 50, seed: int = 0) -> CheckReport:
    """One-sided derivative gap ``>= 1.9`` at each point and agreement within ``1e-6`` elsewhere."""
    pts = sorted(float(p) for p in points)
    z = s.components[1]
    lo, hi = s.bundle.base.window
    sep = min([b - a for a, b in zip(pts, pts[1:])] + [1.0])
    h0 = min(1e-3, sep / 8)
    gaps = []
    for p in pts:
        left, right = E.one_sided_derivatives(z, p, h0)
        gaps.append(right - left)
    rng = np.random.default_rng(seed)
    guard = 8 * h0
    smooth_pts = []
    while len(smooth_pts) < others:
        x = float(rng.uniform(lo, hi))
        if all(abs(x - p) > guard for p in pts):
            smooth_pts.append(x)
    mismatch = []
    for x in smooth_pts:
        left, right = E.one_sided_derivatives(z, x, h0)
        mismatch.append(abs(right - left))
    min_gap = min(gaps, default=np.inf)
    worst_match = max(mismatch, default=0.0)
    ok = min_gap >= WITNESS_GAP and worst_match <= WITNESS_MATCH
    return CheckReport("dim_witness", ok, worst_match, None, len(pts) + len(smooth_pts), seed=seed,
                       detail=f"min gap {min_gap:.6g} at kinks, h0={h0:g}",
                       extra={"gaps": gaps, "points": pts})
