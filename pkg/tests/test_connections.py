import numpy as np
import pytest
from hypothesis import given

from dglue import connections as C
from dglue import expr as E
from dglue.bundles import (FibreDescriptor, IntervalFibreMap, RoughGenerator,
                           TrivialPseudoBundle, glue_bundles, standard_fibre, witness_bundle)
from dglue.demos import wedge
from dglue.errors import (BaseMismatch, IncompatibleConnections, InvalidMetric, NonInvertibleGluing,
                          NonPositiveMetric, SingularInput)
from dglue.gluing import First, GluedSpace, Interval, Piece, Second
from dglue.sections import glue_sections_S, section

from conftest import smooth_exprs

XS = np.linspace(-2, 2, 41)


def line_bundle(name="V", rank=1, piece=None):
    return TrivialPseudoBundle(name, piece or Piece("X", window=(-2, 2)), standard_fibre(rank))


@given(smooth_exprs, smooth_exprs, smooth_exprs)
def test_leibniz_for_arbitrary_gamma(gamma, h, s):
    V = line_bundle()
    conn = C.Connection(V, ((gamma,),))
    assert C.leibniz_check(conn, h, section(V, s), XS, tol=1e-8)


def test_leibniz_negative_control():
    V = line_bundle()
    rep = C.leibniz_check(C.flat_connection(V), E.X, section(V, E.ONE), XS, drop_dh=True)
    assert not rep and rep.residual == pytest.approx(1.0)


def test_levi_civita_formula():
    conn = C.levi_civita_1d(E.parse("1 + x^2"))
    assert E.evaluate(conn.gamma[0][0], 3.0) == pytest.approx(3.0 / 10.0)
    with pytest.raises(NonPositiveMetric):
        C.levi_civita_1d(E.parse("x^2"))
    with pytest.raises(NonPositiveMetric):
        C.levi_civita_1d(E.parse("1 - x^2"))


def test_covariant_linearity():
    V = line_bundle()
    conn = C.Connection(V, ((E.parse("sin(x)"),),))
    rep = C.covariant_linearity_check(conn, C.DualSection(E.parse("x")), C.DualSection(E.parse("cos(x)")),
                                      E.parse("exp(x)"), section(V, E.parse("x^2 + 1")), XS)
    assert rep


def test_kink_samples_are_dropped_and_rejected():
    V = line_bundle()
    s = section(V, E.parse("abs(x)"))
    rep = C.leibniz_check(C.flat_connection(V), E.X, s, XS)
    assert rep and rep.samples == len(XS) - 1
    with pytest.raises(SingularInput):
        C.apply_connection(C.flat_connection(V), s, [0.0])


def test_direct_sum_and_tensor():
    V, W = line_bundle("V"), line_bundle("W")
    a = C.Connection(V, ((E.parse("x"),),))
    b = C.Connection(W, ((E.parse("cos(x)"),),))
    ds = C.direct_sum_connection(a, b)
    assert ds.gamma[0][1] == E.ZERO and ds.gamma[1][0] == E.ZERO
    t = C.tensor_connection(a, b)
    assert np.allclose(E.evaluate_many(t.gamma[0][0], XS), XS + np.cos(XS))
    other = line_bundle("U", piece=Piece("Y", window=(-2, 2)))
    with pytest.raises(BaseMismatch):
        C.direct_sum_connection(a, C.flat_connection(other))


def test_pseudo_metric_rank_follows_dual():
    V = witness_bundle()
    ok = C.PseudoMetric(V, ((E.parse("1 + x^2"), E.ZERO), (E.ZERO, E.ZERO)))
    assert ok.at(1.0)[0, 0] == 2.0
    with pytest.raises(InvalidMetric):
        C.PseudoMetric(V, ((E.ONE, E.ZERO), (E.ZERO, E.ONE)))
    with pytest.raises(InvalidMetric):
        C.PseudoMetric(V, ((E.ONE, E.X), (E.ZERO, E.ONE)))


def test_metric_compatibility_rank_two():
    V = line_bundle(rank=2)
    h = E.parse("exp(x)")
    g = C.PseudoMetric(V, ((h, E.ZERO), (E.ZERO, h)))
    half = E.const(0.5)
    conn = C.Connection(V, ((half, E.ZERO), (E.ZERO, half)))
    s = section(V, E.parse("sin(x)"), E.parse("x"))
    t = section(V, E.parse("1 + x^2"), E.parse("cos(x)"))
    assert C.metric_compatible_check(conn, g, s, t, XS)
    skew = C.Connection(V, ((half, E.X), (E.neg(E.X), half)))
    assert C.metric_compatible_check(skew, g, s, t, XS)
    assert not C.metric_compatible_check(C.flat_connection(V), g, s, t, XS)


def _interval_glue(A="exp(x)", f="2*x + 1"):
    x1, x2 = Piece("X1", window=(-2, 2)), Piece("X2", window=(-2, 2))
    space = GluedSpace(x1, x2, Interval(-np.inf, np.inf, E.parse(f)))
    return glue_bundles(line_bundle("V1", piece=x1), line_bundle("V2", piece=x2), space,
                        IntervalFibreMap(((E.parse(A),),)))


def test_pullback_connection_is_compatible():
    G = _interval_glue()
    c2 = C.Connection(G.v2, ((E.parse("sin(x)"),),))
    c1 = C.pullback_connection(c2, G)
    assert C.connections_compatible_check(c1, c2, G)
    with pytest.raises(IncompatibleConnections):
        C.induce_connection(C.flat_connection(G.v1), c2, G)


def test_noninvertible_gluing_rejected():
    x1, x2 = Piece("X1"), Piece("X2")
    space = GluedSpace(x1, x2, Interval(-1, 1, E.X))
    v1 = TrivialPseudoBundle("V1", x1, FibreDescriptor(2, (RoughGenerator((0.0, 1.0)),)))
    G = glue_bundles(v1, line_bundle("V2", piece=x2), space, IntervalFibreMap(((E.ONE, E.ZERO),)))
    with pytest.raises(NonInvertibleGluing):
        C.induce_connection(C.flat_connection(v1), C.flat_connection(G.v2), G)


def test_wedge_glued_value_and_negative():
    w = wedge()
    s = glue_sections_S(section(w.bundle.v1, E.parse("cos(x) + x")),
                        section(w.bundle.v2, E.parse("1 - x + x^2")), w.bundle)
    v = C.apply_glued_connection(w.glued, s, Second(0.0))
    assert v.first == pytest.approx([1.0]) and v.second == pytest.approx([-0.5])
    pts = [First(0.5), Second(1.0), Second(0.0)]
    assert C.induced_metric_compatibility_check(w.glued, w.metric, [(s, s)], pts)
    off = C.GluedConnection(C.Connection(w.c1.bundle, ((E.add(w.c1.gamma[0][0], E.const(0.1)),),)),
                            w.c2, w.bundle, w.glued.certificate)
    assert not C.induced_metric_compatibility_check(off, w.metric, [(s, s)], pts)
