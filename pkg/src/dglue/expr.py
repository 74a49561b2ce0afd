"""Piecewise-smooth real functions of one variable as expression trees.

The grammar is closed: constants, the variable ``x``, sums, negation,
products, nonnegative integer powers, ``exp``, ``sin``, ``cos``, ``abs`` and a
reciprocal node whose argument must stay away from zero on the domains where
it is used. Every plot component, section coordinate, form coefficient,
metric entry and Christoffel symbol in the package is one of these trees.

Equality of functions is decided by sampling (``equal_on_samples``); node
equality (``==``) is structural and only used where an exact expression-level
statement is wanted.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .errors import DomainError, ParseError
from .program import (OP_ABS, OP_ADD, OP_CONST, OP_COS, OP_EXP, OP_MUL, OP_NEG,
                      OP_POW, OP_RECIP, OP_SIN, OP_VAR)

EPS_SING = 1e-9


class SmoothExpr:
    __slots__ = ()

    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return sub(self, as_expr(other))

    def __rsub__(self, other):
        return sub(as_expr(other), self)

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return div(self, as_expr(other))

    def __rtruediv__(self, other):
        return div(as_expr(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, n):
        return power(self, n)

    def __call__(self, x: float) -> float:
        return evaluate(self, x)

    def __str__(self):
        return to_text(self)

    def children(self) -> tuple[SmoothExpr, ...]:
        return ()


@dataclass(frozen=True, slots=True)
class Const(SmoothExpr):
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"non-finite constant {self.value!r}")


@dataclass(frozen=True, slots=True)
class Var(SmoothExpr):
    pass


@dataclass(frozen=True, slots=True)
class Add(SmoothExpr):
    left: SmoothExpr
    right: SmoothExpr

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, slots=True)
class Neg(SmoothExpr):
    arg: SmoothExpr

    def children(self):
        return (self.arg,)


@dataclass(frozen=True, slots=True)
class Mul(SmoothExpr):
    left: SmoothExpr
    right: SmoothExpr

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, slots=True)
class Pow(SmoothExpr):
    base: SmoothExpr
    exponent: int

    def __post_init__(self):
        if not isinstance(self.exponent, int) or self.exponent < 0:
            raise ValueError("exponent must be a nonnegative integer")

    def children(self):
        return (self.base,)


@dataclass(frozen=True, slots=True)
class Exp(SmoothExpr):
    arg: SmoothExpr

    def children(self):
        return (self.arg,)


@dataclass(frozen=True, slots=True)
class Sin(SmoothExpr):
    arg: SmoothExpr

    def children(self):
        return (self.arg,)


@dataclass(frozen=True, slots=True)
class Cos(SmoothExpr):
    arg: SmoothExpr

    def children(self):
        return (self.arg,)


@dataclass(frozen=True, slots=True)
class Abs(SmoothExpr):
    arg: SmoothExpr

    def children(self):
        return (self.arg,)


@dataclass(frozen=True, slots=True)
class Recip(SmoothExpr):
    """``1/arg``; only valid where ``arg`` is bounded away from zero."""

    arg: SmoothExpr

    def children(self):
        return (self.arg,)


X = Var()
ZERO = Const(0.0)
ONE = Const(1.0)


def as_expr(value) -> SmoothExpr:
    if isinstance(value, SmoothExpr):
        return value
    if isinstance(value, (int, float, np.integer, np.floating)) and not isinstance(value, bool):
        return Const(float(value))
    raise TypeError(f"cannot convert {type(value).__name__} to SmoothExpr")


# -- smart constructors: fold constants and neutral elements only ---------------

def const(value: float) -> Const:
    return Const(float(value))


def add(a: SmoothExpr, b: SmoothExpr) -> SmoothExpr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if a == ZERO:
        return b
    if b == ZERO:
        return a
    return Add(a, b)


def neg(a: SmoothExpr) -> SmoothExpr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def sub(a: SmoothExpr, b: SmoothExpr) -> SmoothExpr:
    return add(a, neg(b))


def mul(a: SmoothExpr, b: SmoothExpr) -> SmoothExpr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if a == ZERO or b == ZERO:
        return ZERO
    if a == ONE:
        return b
    if b == ONE:
        return a
    if a == Const(-1.0):
        return neg(b)
    if b == Const(-1.0):
        return neg(a)
    return Mul(a, b)


def power(a: SmoothExpr, n: int) -> SmoothExpr:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 0:
        raise ValueError(f"exponent must be a nonnegative integer, got {n!r}")
    n = int(n)
    if n == 0:
        return ONE
    if n == 1:
        return a
    if isinstance(a, Const):
        return Const(a.value ** n)
    return Pow(a, n)


def recip(a: SmoothExpr) -> SmoothExpr:
    if isinstance(a, Const):
        if a.value == 0.0:
            raise DomainError("reciprocal of the zero constant")
        return Const(1.0 / a.value)
    if isinstance(a, Recip):
        return a.arg
    return Recip(a)


def div(a: SmoothExpr, b: SmoothExpr) -> SmoothExpr:
    return mul(a, recip(b))


def _unary(node, fn):
    def build(a):
        a = as_expr(a)
        if isinstance(a, Const):
            return Const(fn(a.value))
        return node(a)
    build.__name__ = node.__name__.lower()
    return build


exp = _unary(Exp, math.exp)
sin = _unary(Sin, math.sin)
cos = _unary(Cos, math.cos)
absolute = _unary(Abs, abs)


def total(terms: Iterable[SmoothExpr]) -> SmoothExpr:
    out = ZERO
    for t in terms:
        out = add(out, t)
    return out


def linear_combination(coeffs: Sequence[float], exprs: Sequence[SmoothExpr],
                       clean: float = 1e-12) -> SmoothExpr:
    """``sum c_i e_i`` with coefficients within ``clean`` of 0 or +-1 snapped."""
    terms = []
    for c, e in zip(coeffs, exprs):
        c = float(c)
        if abs(c) <= clean:
            continue
        if abs(c - 1.0) <= clean:
            terms.append(e)
        elif abs(c + 1.0) <= clean:
            terms.append(neg(e))
        else:
            terms.append(mul(Const(c), e))
    return total(terms)


# -- traversal ---------------------------------------------------------------

def walk(e: SmoothExpr) -> Iterator[SmoothExpr]:
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))


def contains_abs(e: SmoothExpr) -> bool:
    return any(isinstance(n, Abs) for n in walk(e))


def abs_arguments(e: SmoothExpr) -> tuple[SmoothExpr, ...]:
    seen = []
    for n in walk(e):
        if isinstance(n, Abs) and n.arg not in seen:
            seen.append(n.arg)
    return tuple(seen)


def recip_arguments(e: SmoothExpr) -> tuple[SmoothExpr, ...]:
    seen = []
    for n in walk(e):
        if isinstance(n, Recip) and n.arg not in seen:
            seen.append(n.arg)
    return tuple(seen)


def compose(outer: SmoothExpr, inner: SmoothExpr) -> SmoothExpr:
    """``outer(inner(x))``."""
    match outer:
        case Var():
            return inner
        case Const():
            return outer
        case Add(a, b):
            return add(compose(a, inner), compose(b, inner))
        case Neg(a):
            return neg(compose(a, inner))
        case Mul(a, b):
            return mul(compose(a, inner), compose(b, inner))
        case Pow(a, n):
            return power(compose(a, inner), n)
        case Exp(a):
            return exp(compose(a, inner))
        case Sin(a):
            return sin(compose(a, inner))
        case Cos(a):
            return cos(compose(a, inner))
        case Abs(a):
            return absolute(compose(a, inner))
        case Recip(a):
            return recip(compose(a, inner))
    raise TypeError(f"not an expression node: {outer!r}")


# -- evaluation ----------------------------------------------------------------

def evaluate(e: SmoothExpr, x: float) -> float:
    match e:
        case Const(v):
            return v
        case Var():
            return float(x)
        case Add(a, b):
            return evaluate(a, x) + evaluate(b, x)
        case Neg(a):
            return -evaluate(a, x)
        case Mul(a, b):
            return evaluate(a, x) * evaluate(b, x)
        case Pow(a, n):
            return evaluate(a, x) ** float(n)
        case Exp(a):
            return math.exp(evaluate(a, x))
        case Sin(a):
            return math.sin(evaluate(a, x))
        case Cos(a):
            return math.cos(evaluate(a, x))
        case Abs(a):
            return abs(evaluate(a, x))
        case Recip(a):
            d = evaluate(a, x)
            if d == 0.0:
                raise DomainError(f"1/({to_text(a)}) evaluated at x={x!r} where the denominator vanishes")
            return 1.0 / d
    raise TypeError(f"not an expression node: {e!r}")


@dataclass(frozen=True)
class Program:
    ops: np.ndarray
    consts: np.ndarray
    iargs: np.ndarray
    depth: int


@lru_cache(maxsize=8192)
def compile_program(e: SmoothExpr) -> Program:
    ops: list[int] = []
    consts: list[float] = []
    iargs: list[int] = []
    depth = 0
    sp = 0

    def emit(op, c=0.0, n=0, delta=0):
        nonlocal sp, depth
        ops.append(op)
        consts.append(c)
        iargs.append(n)
        sp += delta
        depth = max(depth, sp)

    def visit(node):
        match node:
            case Const(v):
                emit(OP_CONST, c=v, delta=1)
            case Var():
                emit(OP_VAR, delta=1)
            case Add(a, b):
                visit(a)
                visit(b)
                emit(OP_ADD, delta=-1)
            case Mul(a, b):
                visit(a)
                visit(b)
                emit(OP_MUL, delta=-1)
            case Neg(a):
                visit(a)
                emit(OP_NEG)
            case Pow(a, n):
                visit(a)
                emit(OP_POW, n=n)
            case Exp(a):
                visit(a)
                emit(OP_EXP)
            case Sin(a):
                visit(a)
                emit(OP_SIN)
            case Cos(a):
                visit(a)
                emit(OP_COS)
            case Abs(a):
                visit(a)
                emit(OP_ABS)
            case Recip(a):
                visit(a)
                emit(OP_RECIP)
            case _:
                raise TypeError(f"not an expression node: {node!r}")

    visit(e)
    return Program(np.asarray(ops, dtype=np.intc), np.asarray(consts, dtype=np.float64),
                   np.asarray(iargs, dtype=np.intc), depth)


def evaluate_many(e: SmoothExpr, xs) -> np.ndarray:
    """Evaluate ``e`` at every point of ``xs`` with the selected batch backend."""
    xs = np.ascontiguousarray(np.atleast_1d(np.asarray(xs, dtype=np.float64)))
    prog = compile_program(e)
    out = kernels.eval_program(prog.ops, prog.consts, prog.iargs, prog.depth, xs)
    if not np.all(np.isfinite(out)):
        bad = xs[~np.isfinite(out)][0]
        raise DomainError(f"{to_text(e)} is not finite at x={bad!r}")
    return out


def equal_on_samples(e1: SmoothExpr, e2: SmoothExpr, samples, tol: float) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return bool(np.all(np.abs(evaluate_many(e1, samples) - evaluate_many(e2, samples)) <= tol))


def max_difference(e1: SmoothExpr, e2: SmoothExpr, samples) -> tuple[float, float]:
    """Worst ``|e1 - e2|`` over ``samples`` and where it occurs."""
    xs = np.atleast_1d(np.asarray(samples, dtype=np.float64))
    diff = np.abs(evaluate_many(e1, xs) - evaluate_many(e2, xs))
    i = int(np.argmax(diff))
    return float(diff[i]), float(xs[i])


def check_nonvanishing(e: SmoothExpr, samples, margin: float = 1e-6) -> None:
    """Raise DomainError if any reciprocal argument in ``e`` gets within ``margin`` of 0."""
    xs = np.atleast_1d(np.asarray(samples, dtype=np.float64))
    for arg in recip_arguments(e):
        vals = np.abs(evaluate_many(arg, xs))
        i = int(np.argmin(vals))
        if vals[i] < margin:
            raise DomainError(
                f"denominator {to_text(arg)} has |value| {vals[i]:.3g} < {margin:g} at x={xs[i]!r}")


# -- differentiation -------------------------------------------------------------

def differentiate(e: SmoothExpr) -> SmoothExpr:
    """Classical derivative, valid away from zeros of abs arguments.

    ``d|u| = u * (1/|u|) * u'``, so evaluating the result at a kink raises
    DomainError instead of returning a one-sided value.
    """
    match e:
        case Const():
            return ZERO
        case Var():
            return ONE
        case Add(a, b):
            return add(differentiate(a), differentiate(b))
        case Neg(a):
            return neg(differentiate(a))
        case Mul(a, b):
            return add(mul(differentiate(a), b), mul(a, differentiate(b)))
        case Pow(a, n):
            return mul(mul(Const(float(n)), power(a, n - 1)), differentiate(a))
        case Exp(a):
            return mul(e, differentiate(a))
        case Sin(a):
            return mul(cos(a), differentiate(a))
        case Cos(a):
            return mul(neg(sin(a)), differentiate(a))
        case Abs(a):
            return mul(mul(a, recip(e)), differentiate(a))
        case Recip(a):
            return neg(mul(differentiate(a), power(e, 2)))
    raise TypeError(f"not an expression node: {e!r}")


@dataclass(frozen=True)
class SingularSet:
    """Ascending, deduplicated candidate kinks inside a query interval."""

    points: tuple[float, ...]

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def near(self, x: float, radius: float) -> bool:
        return any(abs(x - p) <= radius for p in self.points)


@dataclass(frozen=True)
class SingularFinder:
    """Locates zeros of abs arguments by sign-change scanning and bisection."""

    arguments: tuple[SmoothExpr, ...]

    def __call__(self, a: float, b: float, density: int = 1000,
                 eps: float = EPS_SING) -> SingularSet:
        if not self.arguments:
            return SingularSet(())
        xs = np.linspace(a, b, int(density) + 1)
        found = []
        for u in self.arguments:
            try:
                vals = evaluate_many(u, xs)
            except DomainError:
                vals = np.array([_safe_eval(u, x) for x in xs])
            found.extend(xs[vals == 0.0].tolist())
            sign = np.sign(vals)
            for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
                found.append(brentq(lambda t: evaluate(u, t), xs[i], xs[i + 1], xtol=eps * 1e-3))
        return SingularSet(_dedupe(sorted(found), eps))


def _safe_eval(e, x):
    try:
        return evaluate(e, x)
    except DomainError:
        return math.nan


def _dedupe(points, eps):
    out = []
    for p in points:
        if not out or p - out[-1] > eps:
            out.append(p)
    return tuple(out)


def derivative(e: SmoothExpr) -> tuple[SmoothExpr, SingularFinder]:
    return differentiate(e), SingularFinder(abs_arguments(e))


def one_sided_derivatives(e: SmoothExpr, x: float, h0: float = 1e-3,
                          levels: int = 4) -> tuple[float, float]:
    """Left and right derivatives at ``x`` by Richardson-extrapolated one-sided quotients."""
    if h0 <= 0:
        raise ValueError("h0 must be positive")
    fx = evaluate(e, x)

    def extrapolate(direction):
        rows = []
        for i in range(levels):
            h = h0 / 2 ** i
            row = [direction * (evaluate(e, x + direction * h) - fx) / h]
            for j in range(1, i + 1):
                row.append(row[j - 1] + (row[j - 1] - rows[i - 1][j - 1]) / (2 ** j - 1))
            rows.append(row)
        return rows[-1][-1]

    return extrapolate(-1.0), extrapolate(1.0)


# -- text form -------------------------------------------------------------------

_FUNCS = {"exp": exp, "sin": sin, "cos": cos, "abs": absolute}


def _fmt_const(v: float) -> str:
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def _is_atom(e):
    return (isinstance(e, (Var, Exp, Sin, Cos, Abs))
            or (isinstance(e, Const) and e.value >= 0))


def _paren(e):
    s = to_text(e)
    return s if _is_atom(e) else f"({s})"


def to_text(e: SmoothExpr) -> str:
    match e:
        case Const(v):
            return _fmt_const(v)
        case Var():
            return "x"
        case Add(a, Neg(b)):
            right = f"({to_text(b)})" if isinstance(b, Add) else to_text(b)
            return f"{to_text(a)} - {right}"
        case Add(a, Const(v)) if v < 0:
            return f"{to_text(a)} - {_fmt_const(-v)}"
        case Add(a, b):
            right = f"({to_text(b)})" if isinstance(b, Add) else to_text(b)
            return f"{to_text(a)} + {right}"
        case Neg(a):
            return f"-{to_text(a)}" if _is_atom(a) or isinstance(a, Pow) else f"-({to_text(a)})"
        case Mul(a, Recip(b)):
            left = f"({to_text(a)})" if isinstance(a, (Add, Neg)) or (isinstance(a, Const) and a.value < 0) else to_text(a)
            return f"{left} / {_paren(b)}"
        case Mul(a, b):
            left = f"({to_text(a)})" if isinstance(a, (Add, Neg)) or (isinstance(a, Const) and a.value < 0) else to_text(a)
            right = f"({to_text(b)})" if isinstance(b, (Add, Mul, Neg, Recip)) or (isinstance(b, Const) and b.value < 0) else to_text(b)
            return f"{left} * {right}"
        case Pow(a, n):
            return f"{_paren(a)} ^ {n}"
        case Exp(a):
            return f"exp({to_text(a)})"
        case Sin(a):
            return f"sin({to_text(a)})"
        case Cos(a):
            return f"cos({to_text(a)})"
        case Abs(a):
            return f"abs({to_text(a)})"
        case Recip(a):
            return f"1 / {_paren(a)}"
    raise TypeError(f"not an expression node: {e!r}")


def parse(text: str) -> SmoothExpr:
    """Parse the text grammar: literals, ``x``, ``+ - * / ^``, exp/sin/cos/abs, parentheses."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty expression")
    if "**" in text:
        raise ParseError(f"use '^' for powers: {text!r}")
    try:
        tree = ast.parse(text.strip().replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg} at column {exc.offset}") from None
    return _from_ast(tree.body, text)


def _from_ast(node, text):
    match node:
        case ast.Constant(value=v) if isinstance(v, (int, float)) and not isinstance(v, bool):
            return Const(float(v))
        case ast.Name(id="x"):
            return X
        case ast.UnaryOp(op=ast.USub(), operand=a):
            return neg(_from_ast(a, text))
        case ast.UnaryOp(op=ast.UAdd(), operand=a):
            return _from_ast(a, text)
        case ast.BinOp(left=a, op=ast.Add(), right=b):
            return add(_from_ast(a, text), _from_ast(b, text))
        case ast.BinOp(left=a, op=ast.Sub(), right=b):
            return sub(_from_ast(a, text), _from_ast(b, text))
        case ast.BinOp(left=a, op=ast.Mult(), right=b):
            return mul(_from_ast(a, text), _from_ast(b, text))
        case ast.BinOp(left=a, op=ast.Div(), right=b):
            den = _from_ast(b, text)
            if den == ZERO:
                raise ParseError(f"division by the literal 0 in {text!r}")
            return div(_from_ast(a, text), den)
        case ast.BinOp(left=a, op=ast.Pow(), right=ast.Constant(value=n)) \
                if isinstance(n, int) and not isinstance(n, bool) and n >= 0:
            return power(_from_ast(a, text), n)
        case ast.BinOp(op=ast.Pow()):
            raise ParseError(f"'^' needs a nonnegative integer literal exponent in {text!r}")
        case ast.Call(func=ast.Name(id=name), args=[arg], keywords=[]) if name in _FUNCS:
            return _FUNCS[name](_from_ast(arg, text))
    col = getattr(node, "col_offset", None)
    raise ParseError(f"unsupported syntax {ast.unparse(node)!r} in {text!r}"
                     + (f" at column {col + 1}" if col is not None else ""))
