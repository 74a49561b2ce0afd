"""Glued base spaces ``X1 ∪_f X2`` built from copies of the real line.

Two locus kinds are supported: a finite list of points ``y -> f(y)`` (``f``
need not be injective) and a closed interval ``[a, b]`` with a strictly
monotone expression ``f``. A point of the glued space is ``First(x)`` for
``x`` in ``X1`` outside the locus, or ``Second(x2)`` for ``x2`` in ``X2``;
glue classes are always represented on the ``X2`` side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import expr as E
from .errors import (DomainError, DuplicateLocusPoint, IncompatibleFunctions,
                     NonMonotoneGluingMap)
from .expr import SmoothExpr

LOCUS_SAMPLES = 64
GLUE_TOL = 1e-9
MONOTONE_MARGIN = 1e-6


@dataclass(frozen=True)
class Piece:
    """A copy of the standard line (``dim=1``) or a single point (``dim=0``).

    ``window`` bounds the region used whenever a property has to be sampled.
    """

    name: str
    dim: int = 1
    window: tuple[float, float] = (-10.0, 10.0)

    def __post_init__(self):
        if self.dim not in (0, 1):
            raise ValueError("pieces are lines (dim 1) or a single point (dim 0)")
        lo, hi = self.window
        if not lo < hi:
            raise ValueError(f"empty sampling window {self.window}")

    def contains(self, x: float) -> bool:
        return self.dim == 1 or x == 0.0

    def samples(self, n: int = LOCUS_SAMPLES) -> np.ndarray:
        if self.dim == 0:
            return np.zeros(1)
        return np.linspace(*self.window, n)


def point_piece(name: str) -> Piece:
    return Piece(name, dim=0)


@dataclass(frozen=True)
class FinitePoints:
    pairs: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pairs = tuple(sorted((float(y), float(fy)) for y, fy in self.pairs))
        ys = [y for y, _ in pairs]
        for a, b in zip(ys, ys[1:]):
            if a == b:
                raise DuplicateLocusPoint(f"locus point {a} listed twice")
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "_map", dict(pairs))

    @property
    def points(self) -> tuple[float, ...]:
        return tuple(y for y, _ in self.pairs)

    def contains(self, y: float) -> bool:
        return y in self._map

    def image_of(self, y: float) -> float:
        return self._map[y]

    def in_image(self, x2: float) -> bool:
        return any(fy == x2 for _, fy in self.pairs)

    def preimage(self, x2: float) -> tuple[float, ...]:
        return tuple(y for y, fy in self.pairs if fy == x2)

    @property
    def injective(self) -> bool:
        images = [fy for _, fy in self.pairs]
        return len(set(images)) == len(images)


@dataclass(frozen=True)
class Interval:
    """``f`` defined on ``[a, b]``; infinite endpoints are allowed."""

    a: float
    b: float
    f: SmoothExpr = E.X

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"empty interval [{self.a}, {self.b}]")

    def contains(self, y: float) -> bool:
        return self.a <= y <= self.b

    def image_of(self, y: float) -> float:
        return E.evaluate(self.f, y)

    injective = True


GluingLocus = Union[FinitePoints, Interval]


@dataclass(frozen=True)
class First:
    """``i1(x)`` for ``x`` in ``X1`` off the gluing locus."""

    x: float


@dataclass(frozen=True)
class Second:
    """``i2(x)`` for ``x`` in ``X2``."""

    x: float


GluedPoint = Union[First, Second]


@dataclass(frozen=True)
class GluedSpace:
    x1: Piece
    x2: Piece
    locus: GluingLocus
    _image: tuple[float, float] | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.x1.dim != 1:
            raise ValueError("the first piece must be a line")
        loc = self.locus
        if isinstance(loc, FinitePoints):
            if not loc.pairs:
                raise ValueError("empty gluing locus")
            for _, fy in loc.pairs:
                if not self.x2.contains(fy):
                    raise ValueError(f"f maps into a point {fy} outside {self.x2.name}")
        else:
            if self.x2.dim != 1:
                raise ValueError("an interval cannot be glued to a point piece")
            _check_monotone(loc.f, self.sample_interval(dense=True))
            fa, fb = (E.evaluate(loc.f, t) for t in self._clipped())
            object.__setattr__(self, "_image", (min(fa, fb), max(fa, fb)))

    # -- locus queries ------------------------------------------------------

    def _clipped(self) -> tuple[float, float]:
        lo, hi = self.x1.window
        return max(self.locus.a, lo), min(self.locus.b, hi)

    def sample_interval(self, n: int = LOCUS_SAMPLES, dense: bool = False) -> np.ndarray:
        """``n`` equispaced interior points plus both endpoints of the (window-clipped) interval."""
        a, b = self._clipped()
        if dense:
            return np.linspace(a, b, 257)
        return np.linspace(a, b, n + 2)

    def locus_samples(self) -> np.ndarray:
        """Points of ``Y`` where gluing conditions are checked."""
        if isinstance(self.locus, FinitePoints):
            return np.asarray(self.locus.points)
        return self.sample_interval()

    @property
    def finite(self) -> bool:
        return isinstance(self.locus, FinitePoints)

    def in_domain(self, y: float) -> bool:
        return self.locus.contains(y)

    def f(self, y: float) -> float:
        return self.locus.image_of(y)

    def in_image(self, x2: float) -> bool:
        if self.finite:
            return self.locus.in_image(x2)
        lo, hi = self._image
        if self.locus.a == -math.inf or self.locus.b == math.inf:
            # image of an unbounded interval: decided through the preimage
            return bool(self.preimage(x2))
        return lo <= x2 <= hi

    def preimage(self, x2: float) -> tuple[float, ...]:
        if self.finite:
            return self.locus.preimage(x2)
        a, b = self._clipped()
        g = lambda t: E.evaluate(self.locus.f, t) - x2
        ga, gb = g(a), g(b)
        if ga == 0.0:
            return (a,)
        if gb == 0.0:
            return (b,)
        if ga * gb > 0:
            return ()
        return (brentq(g, a, b, xtol=1e-14, rtol=4 * np.finfo(float).eps),)

    def glue_points(self) -> tuple[Second, ...]:
        """The points ``i2(f(y))`` for a finite locus (one per distinct image)."""
        if not self.finite:
            raise ValueError("an interval locus has a continuum of glue points")
        return tuple(Second(v) for v in sorted({fy for _, fy in self.locus.pairs}))

    def is_glue_point(self, p: GluedPoint) -> bool:
        return isinstance(p, Second) and self.in_image(p.x)


def _check_monotone(f: SmoothExpr, xs: np.ndarray) -> None:
    try:
        E.check_nonvanishing(f, xs)
        df = E.differentiate(f)
        vals = E.evaluate_many(df, xs)
    except DomainError as exc:
        raise NonMonotoneGluingMap(f"gluing map is not smooth on the interval: {exc}") from None
    i = int(np.argmin(np.abs(vals)))
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)]
    if hi > lo:
        res = minimize_scalar(lambda t: abs(E.evaluate(df, t)), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12})
        worst = min(abs(vals[i]), float(res.fun))
        where = float(res.x) if res.fun < abs(vals[i]) else float(xs[i])
    else:
        worst, where = abs(vals[i]), float(xs[i])
    if worst < MONOTONE_MARGIN or not (np.all(vals > 0) or np.all(vals < 0)):
        raise NonMonotoneGluingMap(
            f"f' of {E.to_text(f)} comes within {MONOTONE_MARGIN:g} of 0 (|f'|={worst:.3g} at x={where:.6g})")


def make_glued_space(x1: Piece, x2: Piece, locus: GluingLocus) -> GluedSpace:
    return GluedSpace(x1, x2, locus)


def classify(space: GluedSpace, side: int, x: float) -> GluedPoint:
    """Image of ``x`` under ``i2`` (side 2) or ``ĩ1`` (side 1)."""
    x = float(x)
    if side == 2:
        if not space.x2.contains(x):
            raise ValueError(f"{x} is not a point of {space.x2.name}")
        return Second(x)
    if side != 1:
        raise ValueError("side must be 1 or 2")
    if space.in_domain(x):
        return Second(space.f(x))
    return First(x)


@dataclass(frozen=True)
class GluedPlot:
    """``u -> ĩ1(p1(u))``, the local form of a plot lifting to ``X1``."""

    space: GluedSpace
    p1: SmoothExpr

    def __call__(self, u: float) -> GluedPoint:
        return classify(self.space, 1, E.evaluate(self.p1, u))


def glued_plot(space: GluedSpace, p1: SmoothExpr) -> GluedPlot:
    return GluedPlot(space, p1)


@dataclass(frozen=True)
class QuotientBase:
    """``X1^f``: locus points with equal image merged; every other point is its own class."""

    space: GluedSpace
    classes: tuple[tuple[float, ...], ...]

    def class_of(self, y: float) -> tuple[float, ...]:
        for c in self.classes:
            if y in c:
                return c
        return (y,)

    def project(self, y: float) -> float:
        """``χ1^f``: a class is represented by its smallest member."""
        return self.class_of(y)[0]

    @property
    def is_identity(self) -> bool:
        return all(len(c) == 1 for c in self.classes)


def quotient_base(space: GluedSpace) -> QuotientBase:
    if not space.finite:
        return QuotientBase(space, ())
    groups: dict[float, list[float]] = {}
    for y, fy in space.locus.pairs:
        groups.setdefault(fy, []).append(y)
    return QuotientBase(space, tuple(sorted(tuple(sorted(g)) for g in groups.values())))


@dataclass(frozen=True)
class GluedFunction:
    """``h1 ∪_f h2``: ``h1`` on ``X1`` and ``h2`` on ``X2``."""

    space: GluedSpace
    h1: SmoothExpr
    h2: SmoothExpr

    def __call__(self, p: GluedPoint) -> float:
        return evaluate_glued_function(self, p)


def _glue_residual(h1, h2, space: GluedSpace) -> tuple[float, float]:
    ys = space.locus_samples()
    fys = np.array([space.f(y) for y in ys])
    r = np.abs(E.evaluate_many(h1, ys) - E.evaluate_many(h2, fys))
    i = int(np.argmax(r))
    return float(r[i]), float(ys[i])


def glue_functions(h1: SmoothExpr, h2: SmoothExpr, space: GluedSpace,
                   tol: float = GLUE_TOL) -> GluedFunction:
    residual, where = _glue_residual(h1, h2, space)
    if residual > tol:
        raise IncompatibleFunctions(
            f"h1(y) != h2(f(y)) at y={where}: residual {residual:.3g}", location=where, residual=residual)
    return GluedFunction(space, h1, h2)


def evaluate_glued_function(h: GluedFunction, p: GluedPoint) -> float:
    if isinstance(p, First):
        return E.evaluate(h.h1, p.x)
    return E.evaluate(h.h2, p.x)


def is_f_invariant(h: SmoothExpr, space: GluedSpace, tol: float = GLUE_TOL) -> bool:
    """``h(y) = h(y')`` whenever ``f(y) = f(y')``."""
    for cls in quotient_base(space).classes:
        vals = [E.evaluate(h, y) for y in cls]
        if max(vals) - min(vals) > tol:
            return False
    return True


@dataclass(frozen=True)
class DeltaDemo:
    h: GluedFunction
    plot: GluedPlot
    table: tuple[tuple[float, float], ...]


def delta_space() -> GluedSpace:
    """The x-axis glued at the origin to the single point ``(0, 1)``."""
    return GluedSpace(Piece("x-axis"), point_piece("{(0,1)}"), FinitePoints(((0.0, 0.0),)))


def delta_demo(xs=None) -> DeltaDemo:
    """``h∘p`` for ``h = pr_y`` on both pieces and ``p`` the glued identity plot.

    ``h`` is assembled directly rather than through ``glue_functions``: ``pr_y``
    is 0 on the axis and 1 on the point, so the pair is not compatible and ``h``
    is not smooth; ``h∘p`` is the delta function.
    """
    space = delta_space()
    h = GluedFunction(space, E.ZERO, E.ONE)
    p = glued_plot(space, E.X)
    if xs is None:
        xs = [0.0] + [k / 20 for k in range(-100, 101) if k != 0]
    table = tuple((float(x), evaluate_glued_function(h, p(x))) for x in xs)
    return DeltaDemo(h, p, table)
