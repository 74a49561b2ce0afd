"""Differential 1-forms ``a(x) dx`` on lines and on glued spaces.

``Λ¹_x`` of a standard line is identified with the value ``a(x)``. On a
finite set of points every form restricts to zero, so at a point glued
locus the fibre of ``Λ¹`` is the full pair of values; on an interval locus
it is the pairs obeying ``a1 = (a2∘f)·f'``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import expr as E
from .errors import NonMonotone, NonMonotoneGluingMap
from .expr import SmoothExpr
from .gluing import (GLUE_TOL, First, GluedFunction, GluedPoint, GluedSpace,
                     _check_monotone)
from .report import CheckReport, worst


@dataclass(frozen=True)
class OneFormPiece:
    coefficient: SmoothExpr

    def __post_init__(self):
        object.__setattr__(self, "coefficient", E.as_expr(self.coefficient))

    def at(self, x: float) -> float:
        return E.evaluate(self.coefficient, x)

    def text(self) -> str:
        return f"({E.to_text(self.coefficient)}) dx"


ZERO_FORM = OneFormPiece(E.ZERO)


def differential(h: SmoothExpr) -> OneFormPiece:
    return OneFormPiece(E.differentiate(E.as_expr(h)))


def pullback(fexpr: SmoothExpr, omega: OneFormPiece, domain: tuple[float, float] = (-10.0, 10.0),
             check: bool = True) -> OneFormPiece:
    """``f*ω = a(f(x)) f'(x) dx``; ``f`` must be strictly monotone on ``domain``."""
    fexpr = E.as_expr(fexpr)
    if check:
        try:
            _check_monotone(fexpr, np.linspace(*domain, 257))
        except NonMonotoneGluingMap as exc:
            raise NonMonotone(str(exc)) from None
    return OneFormPiece(E.mul(E.compose(omega.coefficient, fexpr), E.differentiate(fexpr)))


@dataclass(frozen=True)
class RestrictedForm:
    """``i*ω`` or ``j*ω``: a form on the locus ``Y`` or on ``f(Y)``.

    ``coefficient`` is ``None`` for a finite locus, where the restriction is zero.
    """

    coefficient: SmoothExpr | None
    interval: tuple[float, float] | None

    @property
    def is_zero_map(self) -> bool:
        return self.coefficient is None


def restrict(omega: OneFormPiece, space: GluedSpace, side: int = 1) -> RestrictedForm:
    """Restriction to ``Y`` (side 1, ``i*``) or to ``f(Y)`` (side 2, ``j*``)."""
    if space.finite:
        return RestrictedForm(None, None)
    if side == 1:
        return RestrictedForm(omega.coefficient, space._clipped())
    return RestrictedForm(omega.coefficient, space._image)


def compatibility_residuals(w1: OneFormPiece, w2: OneFormPiece, space: GluedSpace):
    ys = space.sample_interval()
    rhs = pullback(space.locus.f, w2, check=False).coefficient
    r = np.abs(E.evaluate_many(w1.coefficient, ys) - E.evaluate_many(rhs, ys))
    return r, ys


def forms_compatible(w1: OneFormPiece, w2: OneFormPiece, space: GluedSpace,
                     tol: float = GLUE_TOL) -> CheckReport:
    """``i*ω1 = f*(j*ω2)``: automatic at a finite locus, ``a1 = (a2∘f) f'`` on an interval."""
    if space.finite:
        return CheckReport("forms_compatible", True, 0.0, None, 0,
                           detail="finite locus: restrictions vanish")
    r, ys = compatibility_residuals(w1, w2, space)
    return worst("forms_compatible", r.tolist(), ys.tolist(), tol)


@dataclass(frozen=True)
class LambdaFibre:
    dim: int
    tag: str


def lambda_fibre(space: GluedSpace, p: GluedPoint) -> LambdaFibre:
    if isinstance(p, First):
        return LambdaFibre(1, "Λ¹(X1)")
    if not space.in_image(p.x):
        return LambdaFibre(space.x2.dim, "Λ¹(X2)")
    if space.finite:
        # a point piece contributes nothing; each line through the glue point contributes one
        n1 = len(space.preimage(p.x))
        return LambdaFibre(n1 + space.x2.dim, "direct sum")
    return LambdaFibre(1, "compatible pairs")


@dataclass(frozen=True)
class LambdaFibreValue:
    """One value off the glue locus, or the pair ``(Λ¹(X1) part, Λ¹(X2) part)`` on it."""

    first: float | None = None
    second: float | None = None

    @property
    def is_pair(self) -> bool:
        return self.first is not None and self.second is not None

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(v for v in (self.first, self.second) if v is not None)


@dataclass(frozen=True)
class GluedOneForm:
    space: GluedSpace
    w1: OneFormPiece
    w2: OneFormPiece

    def __call__(self, p: GluedPoint) -> LambdaFibreValue:
        return _three_case(self.space, self.w1.coefficient, self.w2.coefficient, p)


def glue_forms(w1: OneFormPiece, w2: OneFormPiece, space: GluedSpace,
               tol: float = GLUE_TOL) -> GluedOneForm:
    rep = forms_compatible(w1, w2, space, tol)
    if not rep:
        raise ValueError(f"forms are not compatible: residual {rep.residual:.3g} at {rep.location}")
    return GluedOneForm(space, w1, w2)


def _three_case(space: GluedSpace, a1: SmoothExpr, a2: SmoothExpr, p: GluedPoint) -> LambdaFibreValue:
    if isinstance(p, First):
        return LambdaFibreValue(first=E.evaluate(a1, p.x))
    if not space.in_image(p.x):
        return LambdaFibreValue(second=E.evaluate(a2, p.x))
    ys = space.preimage(p.x)
    return LambdaFibreValue(first=E.evaluate(a1, ys[0]), second=E.evaluate(a2, p.x))


def glued_differential(h: GluedFunction, space: GluedSpace | None = None) -> GluedOneForm:
    """``d(h1 ∪_f h2)``: ``dh1`` on ``X1 \\ Y``, ``dh2`` off ``f(Y)``, the pair on glue classes."""
    space = space or h.space
    w1 = differential(h.h1)
    w2 = differential(h.h2) if space.x2.dim == 1 else ZERO_FORM
    return GluedOneForm(space, w1, w2)
