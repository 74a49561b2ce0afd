"""Trivial pseudo-bundles over pieces and their gluing along fibrewise-linear maps.

A fibre is ``R^k`` with a vector space diffeology generated by finitely many
"rough" plots ``u -> profile(u) * direction`` (each profile containing an abs
node). Only the span of the rough directions is tracked: a linear functional
on the fibre is smooth iff it kills every rough direction, which fixes the
dimension of the diffeological dual and hence the rank of any pseudo-metric.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from . import expr as E
from .errors import (DomainError, InvalidComplement, LocusMismatch,
                     NonconstantRankOnInterval, ShapeMismatch)
from .expr import SmoothExpr
from .gluing import (FinitePoints, GluedSpace, Interval, Piece, QuotientBase,
                     quotient_base)
from .linalg import PIVOT_TOL, null_space, orthogonal_complement, rank

KERNEL_RESIDUAL = 1e-10
RANK_MARGIN = 1e-6


@dataclass(frozen=True)
class RoughGenerator:
    direction: tuple[float, ...]
    profile: SmoothExpr = E.absolute(E.X)

    def __post_init__(self):
        object.__setattr__(self, "direction", tuple(float(d) for d in self.direction))
        if not any(self.direction):
            raise ValueError("rough direction must be nonzero")
        if not E.contains_abs(self.profile):
            raise ValueError(f"rough profile {E.to_text(self.profile)} has no abs node")


@dataclass(frozen=True)
class FibreDescriptor:
    rank: int
    rough: tuple[RoughGenerator, ...] = ()

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("fibre rank must be positive")
        object.__setattr__(self, "rough", tuple(self.rough))
        for g in self.rough:
            if len(g.direction) != self.rank:
                raise ValueError(f"rough direction {g.direction} does not live in R^{self.rank}")

    @property
    def rough_directions(self) -> np.ndarray:
        return np.array([g.direction for g in self.rough]).reshape(len(self.rough), self.rank)

    @property
    def dual_dim(self) -> int:
        return fibre_dual_dim(self)


def fibre_dual_dim(d: FibreDescriptor) -> int:
    """Dimension of the diffeological dual: ``rank - dim span(rough directions)``."""
    return d.rank - rank(d.rough_directions)


def standard_fibre(k: int) -> FibreDescriptor:
    return FibreDescriptor(k)


@dataclass(frozen=True)
class TrivialPseudoBundle:
    """``base x R^k``; the projection is the first coordinate."""

    name: str
    base: Piece
    fibre: FibreDescriptor

    @property
    def rank(self) -> int:
        return self.fibre.rank


# -- fibre maps --------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteFibreMap:
    """One ``k2 x k1`` matrix per locus point."""

    matrices: tuple[tuple[float, tuple[tuple[float, ...], ...]], ...]

    def __post_init__(self):
        items = self.matrices.items() if isinstance(self.matrices, dict) else self.matrices
        norm = tuple(sorted((float(y), tuple(tuple(float(v) for v in row) for row in np.atleast_2d(m)))
                            for y, m in items))
        object.__setattr__(self, "matrices", norm)
        object.__setattr__(self, "_arrays", {y: np.array(m) for y, m in norm})

    @property
    def points(self) -> tuple[float, ...]:
        return tuple(y for y, _ in self.matrices)

    def at(self, y: float) -> np.ndarray:
        return self._arrays[y]

    @property
    def shape(self) -> tuple[int, int]:
        shapes = {a.shape for a in self._arrays.values()}
        if len(shapes) != 1:
            raise ShapeMismatch(f"fibre map matrices have differing shapes {sorted(shapes)}")
        return shapes.pop()


@dataclass(frozen=True)
class IntervalFibreMap:
    """A ``k2 x k1`` matrix of expressions in the base variable."""

    entries: tuple[tuple[SmoothExpr, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(E.as_expr(v) for v in row) for row in self.entries)
        if not rows or len({len(r) for r in rows}) != 1 or not rows[0]:
            raise ShapeMismatch("fibre map must be a nonempty rectangular matrix")
        object.__setattr__(self, "entries", rows)

    def at(self, y: float) -> np.ndarray:
        return np.array([[E.evaluate(v, y) for v in row] for row in self.entries])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.entries[0])

    @property
    def constant(self) -> bool:
        return all(isinstance(v, E.Const) for row in self.entries for v in row)


FibreMap = FiniteFibreMap | IntervalFibreMap


@dataclass(frozen=True)
class GluedBundle:
    """``V1 ∪_f̃ V2`` over ``X1 ∪_f X2``."""

    v1: TrivialPseudoBundle
    v2: TrivialPseudoBundle
    space: GluedSpace
    fmap: FibreMap

    def A(self, y: float) -> np.ndarray:
        """Matrix of ``f̃`` on the fibre over the locus point ``y``."""
        return self.fmap.at(y)

    @property
    def finite(self) -> bool:
        return self.space.finite


def glue_bundles(v1: TrivialPseudoBundle, v2: TrivialPseudoBundle, space: GluedSpace,
                 fmap: FibreMap) -> GluedBundle:
    if v1.base != space.x1 or v2.base != space.x2:
        raise LocusMismatch("bundle bases do not match the glued space pieces")
    if isinstance(space.locus, FinitePoints):
        if not isinstance(fmap, FiniteFibreMap):
            raise LocusMismatch("a finite locus needs one matrix per locus point")
        if set(fmap.points) != set(space.locus.points):
            raise LocusMismatch(f"fibre map points {fmap.points} != locus points {space.locus.points}")
    elif not isinstance(fmap, IntervalFibreMap):
        raise LocusMismatch("an interval locus needs a matrix of expressions")
    if fmap.shape != (v2.rank, v1.rank):
        raise ShapeMismatch(f"fibre map has shape {fmap.shape}, expected {(v2.rank, v1.rank)}")
    if isinstance(fmap, IntervalFibreMap):
        ys = space.sample_interval()
        for row in fmap.entries:
            for v in row:
                try:
                    E.check_nonvanishing(v, ys)
                    E.evaluate_many(v, ys)
                except DomainError as exc:
                    raise ShapeMismatch(f"fibre map entry {E.to_text(v)} invalid on the locus: {exc}") from None
    return GluedBundle(v1, v2, space, fmap)


# -- kernel, quotient, reduced bundle ---------------------------------------------

def _kernel_basis(a: np.ndarray) -> np.ndarray:
    k = null_space(a, PIVOT_TOL)
    if k.shape[1] and np.max(np.abs(a @ k)) > KERNEL_RESIDUAL:
        raise ArithmeticError("kernel basis residual above threshold")
    return k


@dataclass(frozen=True)
class KernelSubBundle:
    """``Ker(f̃)``: ``null(A_y)`` over locus points, zero elsewhere."""

    bundle: GluedBundle
    constant_dim: int | None = None
    _bases: dict = field(default_factory=dict, repr=False, compare=False)

    def basis_at(self, y: float) -> np.ndarray:
        k1 = self.bundle.v1.rank
        if not self.bundle.space.in_domain(y):
            return np.zeros((k1, 0))
        if y not in self._bases:
            self._bases[y] = _kernel_basis(self.bundle.A(y))
        return self._bases[y]

    def dim_at(self, y: float) -> int:
        return self.basis_at(y).shape[1]


def kernel(G: GluedBundle) -> KernelSubBundle:
    ker = KernelSubBundle(G)
    if G.finite:
        for y in G.space.locus.points:
            ker.basis_at(y)
        return ker
    ys = G.space.sample_interval()
    dims = {ker.dim_at(float(y)) for y in ys}
    if len(dims) != 1:
        raise NonconstantRankOnInterval(f"kernel dimension varies over the interval: {sorted(dims)}")
    d = dims.pop()
    _check_rank_floor(G, ys, G.v1.rank - d)
    return KernelSubBundle(G, d, ker._bases)


def _check_rank_floor(G: GluedBundle, ys: np.ndarray, r: int) -> None:
    """The ``r``-th singular value of ``A_y`` must stay away from 0 between samples too."""
    if r == 0:
        return
    sigma = lambda y: float(np.linalg.svd(G.A(float(y)), compute_uv=False)[r - 1])
    vals = np.array([sigma(y) for y in ys])
    i = int(np.argmin(vals))
    lo, hi = ys[max(i - 1, 0)], ys[min(i + 1, len(ys) - 1)]
    low = vals[i]
    where = float(ys[i])
    if hi > lo:
        res = minimize_scalar(sigma, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
        if res.fun < low:
            low, where = float(res.fun), float(res.x)
    if low < RANK_MARGIN:
        raise NonconstantRankOnInterval(f"rank of f̃ drops near y={where:.6g} (singular value {low:.3g})")


@dataclass(frozen=True)
class QuotientFibre:
    """Data of ``V1(f̃)`` over one locus point.

    ``rows`` spans the orthogonal complement of the kernel; cosets are stored
    canonically as their member in ``span(rows)`` (``projector``). ``lift``
    maps that canonical member to the member of the chosen complement.
    """

    kernel: np.ndarray
    rows: np.ndarray
    complement: np.ndarray
    projector: np.ndarray
    lift: np.ndarray


def _quotient_fibre(kbasis: np.ndarray, complement: np.ndarray | None) -> QuotientFibre:
    k1, d = kbasis.shape
    rows = orthogonal_complement(kbasis, k1)
    if complement is None:
        complement = rows
    complement = np.atleast_2d(np.asarray(complement, dtype=np.float64))
    if complement.shape[0] != k1 and complement.shape[1] == k1:
        complement = complement.T
    if complement.shape != (k1, k1 - d):
        raise InvalidComplement(f"complement needs {k1 - d} vectors in R^{k1}, got shape {complement.shape}")
    if rank(np.hstack([kbasis, complement])) != k1:
        raise InvalidComplement("supplied complement intersects the kernel")
    projector = rows @ rows.T
    lift = complement @ np.linalg.solve(rows.T @ complement, rows.T) if k1 > d else np.zeros((k1, k1))
    return QuotientFibre(kbasis, rows, complement, projector, lift)


@dataclass(frozen=True)
class QuotientBundle:
    """``V1(f̃) = V1 / Ker(f̃)`` with its projection ``χ1^{V1(f̃)}``."""

    kernel: KernelSubBundle
    split: tuple = ()
    _fibres: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def bundle(self) -> GluedBundle:
        return self.kernel.bundle

    def complement_for(self, y: float):
        chosen = dict(self.split)
        if y in chosen:
            return chosen[y]
        return chosen.get("*")

    def fibre(self, y: float) -> QuotientFibre:
        if y not in self._fibres:
            self._fibres[y] = _quotient_fibre(self.kernel.basis_at(y), self.complement_for(y))
        return self._fibres[y]

    def chi(self, y: float, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.float64)
        if not self.bundle.space.in_domain(y):
            return v
        return self.fibre(y).projector @ v

    def lift(self, y: float, q) -> np.ndarray:
        q = np.asarray(q, dtype=np.float64)
        if not self.bundle.space.in_domain(y):
            return q
        return self.fibre(y).lift @ q


def quotient_bundle(G: GluedBundle, split: dict | None = None) -> QuotientBundle:
    """``split`` maps a locus point (or ``"*"`` for every point) to complement vectors."""
    ker = kernel(G)
    items = []
    for key, vecs in (split or {}).items():
        key = key if key == "*" else float(key)
        if key != "*" and not G.space.in_domain(key):
            raise InvalidComplement(f"{key} is not a locus point")
        arr = np.atleast_2d(np.asarray(vecs, dtype=np.float64))
        items.append((key, arr))
    q = QuotientBundle(ker, tuple(items))
    points = G.space.locus.points if G.finite else [float(y) for y in G.space.sample_interval()]
    for y in points:
        q.fibre(y)
    return q


@dataclass(frozen=True)
class ReducedBundle:
    """``V1^f̃`` over ``X1^f`` with the induced maps.

    A point of the total space is ``(rep, w)``: ``rep`` the smallest member of
    its base class and ``w`` the canonical coset member in the fibre at ``rep``.
    """

    quotient: QuotientBundle
    base: QuotientBase

    @property
    def bundle(self) -> GluedBundle:
        return self.quotient.bundle

    def chi_f(self, y: float) -> float:
        return self.base.project(y)

    def f_sim(self, rep: float) -> float:
        return self.bundle.space.f(rep)

    def chi_ftilde(self, y: float, v) -> tuple[float, np.ndarray]:
        v = np.asarray(v, dtype=np.float64)
        space = self.bundle.space
        if not space.in_domain(y):
            return y, v
        rep = self.base.project(y)
        if rep == y:
            return y, self.quotient.chi(y, v)
        return rep, self.transport(y, v, rep)

    def transport(self, y: float, v, rep: float) -> np.ndarray:
        """Canonical member ``w`` at ``rep`` with ``A_rep w = A_y v``."""
        target = self.bundle.A(y) @ np.asarray(v, dtype=np.float64)
        rows = self.quotient.fibre(rep).rows
        m = self.bundle.A(rep) @ rows
        coef = np.linalg.lstsq(m, target, rcond=None)[0]
        w = rows @ coef
        resid = float(np.max(np.abs(m @ coef - target), initial=0.0))
        if resid > KERNEL_RESIDUAL:
            raise InvalidComplement(
                f"f̃-images over the class of {rep} differ: A_{y} v is not in the image of A_{rep}")
        return w

    def ftilde_sim(self, rep: float, w) -> np.ndarray:
        return self.bundle.A(rep) @ np.asarray(w, dtype=np.float64)

    def pi(self, rep: float, w) -> float:
        return rep

    def verify(self, n: int = 100, seed: int = 0) -> dict:
        """Check ``χ1^f∘π1 = π1^(f̃,f)∘χ1^f̃`` and ``f̃∼∘χ1^f̃ = f̃`` on sampled points."""
        rng = np.random.default_rng(seed)
        space = self.bundle.space
        k1 = self.bundle.v1.rank
        ys = list(space.locus_samples())
        mismatches = 0
        worst = 0.0
        for i in range(n):
            y = float(ys[i % len(ys)]) if i % 2 == 0 else float(rng.uniform(*space.x1.window))
            v = rng.normal(size=k1)
            rep, w = self.chi_ftilde(y, v)
            if self.chi_f(y) != self.pi(rep, w):
                mismatches += 1
            if space.in_domain(y):
                worst = max(worst, float(np.max(np.abs(self.ftilde_sim(rep, w) - self.bundle.A(y) @ v))))
        return {"commutation_mismatches": mismatches, "ftilde_residual": worst, "samples": n}


def reduced_bundle(G: GluedBundle, split: dict | None = None) -> ReducedBundle:
    R = ReducedBundle(quotient_bundle(G, split), quotient_base(G.space))
    report = R.verify()
    if report["commutation_mismatches"] or report["ftilde_residual"] > KERNEL_RESIDUAL:
        raise ArithmeticError(f"reduced bundle maps do not commute: {report}")
    return R


# -- operations on trivial bundles ---------------------------------------------------

def direct_sum_bundle(a: TrivialPseudoBundle, b: TrivialPseudoBundle,
                      name: str | None = None) -> TrivialPseudoBundle:
    if a.base != b.base:
        raise ValueError("direct sum needs a common base")
    ka, kb = a.rank, b.rank
    rough = [RoughGenerator(g.direction + (0.0,) * kb, g.profile) for g in a.fibre.rough]
    rough += [RoughGenerator((0.0,) * ka + g.direction, g.profile) for g in b.fibre.rough]
    return TrivialPseudoBundle(name or f"{a.name}+{b.name}", a.base, FibreDescriptor(ka + kb, tuple(rough)))


def tensor_bundle(a: TrivialPseudoBundle, b: TrivialPseudoBundle,
                  name: str | None = None) -> TrivialPseudoBundle:
    """Kronecker fibre; rough span is ``R_a ⊗ F_b + F_a ⊗ R_b``."""
    if a.base != b.base:
        raise ValueError("tensor product needs a common base")
    ka, kb = a.rank, b.rank
    rough = []
    for g in a.fibre.rough:
        for j in range(kb):
            rough.append(RoughGenerator(tuple(np.kron(g.direction, np.eye(kb)[j])), g.profile))
    for g in b.fibre.rough:
        for i in range(ka):
            rough.append(RoughGenerator(tuple(np.kron(np.eye(ka)[i], g.direction)), g.profile))
    return TrivialPseudoBundle(name or f"{a.name}⊗{b.name}", a.base, FibreDescriptor(ka * kb, tuple(rough)))


def kron_expr(a, b) -> tuple[tuple[SmoothExpr, ...], ...]:
    """Kronecker product of two matrices of expressions."""
    rows = []
    for ra in a:
        for rb in b:
            rows.append(tuple(E.mul(x, y) for x in ra for y in rb))
    return tuple(rows)


def tensor_glued_bundle(G: GluedBundle, H: GluedBundle) -> GluedBundle:
    from .errors import BaseMismatch
    if G.space != H.space:
        raise BaseMismatch("tensor product of glued bundles needs the same base gluing")
    v1 = tensor_bundle(G.v1, H.v1)
    v2 = tensor_bundle(G.v2, H.v2)
    if G.finite:
        fmap = FiniteFibreMap({y: np.kron(G.A(y), H.A(y)) for y in G.space.locus.points})
    else:
        fmap = IntervalFibreMap(kron_expr(G.fmap.entries, H.fmap.entries))
    return glue_bundles(v1, v2, G.space, fmap)


# -- bundles from the worked examples -------------------------------------------------

def witness_bundle() -> TrivialPseudoBundle:
    """``R x R^2`` with the fibre diffeology generated by ``v -> (0, |v|)``."""
    return TrivialPseudoBundle("V", Piece("X"), FibreDescriptor(2, (RoughGenerator((0.0, 1.0)),)))


def diagonal_kernel_bundle(window=(-10.0, 10.0)) -> GluedBundle:
    """``V1 = R x R^2`` (rough along ``e_y+e_z``) mapped onto ``V2 = R x R`` by ``(y, z) -> z``.

    ``f̃`` is defined over the whole of ``X1``; the locus is the full line.
    """
    x1, x2 = Piece("X1", window=window), Piece("X2", window=window)
    v1 = TrivialPseudoBundle("V1", x1, FibreDescriptor(2, (RoughGenerator((1.0, 1.0)),)))
    v2 = TrivialPseudoBundle("V2", x2, FibreDescriptor(1, (RoughGenerator((1.0,)),)))
    space = GluedSpace(x1, x2, Interval(-np.inf, np.inf, E.X))
    return glue_bundles(v1, v2, space, IntervalFibreMap(((E.ZERO, E.ONE),)))
