import numpy as np
import pytest

from dglue import expr as E
from dglue.bundles import (FibreDescriptor, FiniteFibreMap, IntervalFibreMap, RoughGenerator,
                           TrivialPseudoBundle, diagonal_kernel_bundle, direct_sum_bundle, glue_bundles,
                           kernel, quotient_bundle, reduced_bundle, standard_fibre, tensor_bundle,
                           tensor_glued_bundle, witness_bundle)
from dglue.errors import InvalidComplement, LocusMismatch, NonconstantRankOnInterval, ShapeMismatch
from dglue.gluing import FinitePoints, GluedSpace, Interval, Piece


def _pair(rank1=2, rank2=1):
    x1, x2 = Piece("X1"), Piece("X2")
    return (x1, x2, TrivialPseudoBundle("V1", x1, standard_fibre(rank1)),
            TrivialPseudoBundle("V2", x2, standard_fibre(rank2)))


def test_dual_dimension_drops_with_rough_directions():
    assert witness_bundle().fibre.dual_dim == 1
    two = FibreDescriptor(3, (RoughGenerator((1, 0, 0)), RoughGenerator((2, 0, 0)), RoughGenerator((0, 1, 1))))
    assert two.dual_dim == 1
    assert standard_fibre(4).dual_dim == 4


def test_rough_generator_validation():
    with pytest.raises(ValueError):
        RoughGenerator((0.0, 0.0))
    with pytest.raises(ValueError):
        RoughGenerator((1.0,), E.parse("x^2"))


def test_glue_bundles_validation():
    x1, x2, v1, v2 = _pair()
    space = GluedSpace(x1, x2, FinitePoints(((0.0, 0.0),)))
    with pytest.raises(LocusMismatch):
        glue_bundles(v1, v2, space, FiniteFibreMap({1.0: [[1.0, 0.0]]}))
    with pytest.raises(ShapeMismatch):
        glue_bundles(v1, v2, space, FiniteFibreMap({0.0: [[1.0, 0.0, 0.0]]}))


def test_kernel_and_reduced_bundle_on_merged_class():
    x1, x2, v1, v2 = _pair()
    space = GluedSpace(x1, x2, FinitePoints(((-1.0, 0.0), (1.0, 0.0))))
    G = glue_bundles(v1, v2, space, FiniteFibreMap({-1.0: [[1.0, 0.0]], 1.0: [[0.0, 2.0]]}))
    ker = kernel(G)
    assert ker.dim_at(-1.0) == 1 and ker.dim_at(1.0) == 1 and ker.dim_at(0.5) == 0
    R = reduced_bundle(G)
    rep, w = R.chi_ftilde(1.0, [3.0, 4.0])
    assert rep == -1.0
    assert R.ftilde_sim(rep, w) == pytest.approx(G.A(1.0) @ [3.0, 4.0])
    report = R.verify(n=200, seed=3)
    assert report["commutation_mismatches"] == 0 and report["ftilde_residual"] < 1e-12


def test_complement_choice():
    G = diagonal_kernel_bundle()
    q = quotient_bundle(G, {"*": [[1.0, 1.0]]})
    fib = q.fibre(0.3)
    assert np.allclose(fib.kernel.ravel() ** 2, [1.0, 0.0])
    assert np.allclose(fib.lift @ [0.0, 5.0], [5.0, 5.0])
    with pytest.raises(InvalidComplement):
        quotient_bundle(G, {"*": [[1.0, 0.0]]})


def test_rank_jump_on_interval_rejected():
    x1, x2, v1, v2 = _pair()
    space = GluedSpace(x1, x2, Interval(-1.0, 1.0, E.X))
    G = glue_bundles(v1, v2, space, IntervalFibreMap(((E.ONE, E.X),)))
    assert kernel(G).constant_dim == 1
    x1, x2, v1, v2 = _pair(2, 2)
    space = GluedSpace(x1, x2, Interval(-1.0, 1.0, E.X))
    G = glue_bundles(v1, v2, space, IntervalFibreMap(((E.ONE, E.ZERO), (E.ZERO, E.X))))
    with pytest.raises(NonconstantRankOnInterval):
        kernel(G)


def test_sum_and_tensor_fibres():
    a = witness_bundle()
    b = TrivialPseudoBundle("W", a.base, standard_fibre(1))
    s = direct_sum_bundle(a, b)
    assert s.rank == 3 and s.fibre.dual_dim == 2
    t = tensor_bundle(a, b)
    assert t.rank == 2 and t.fibre.dual_dim == 1
    x1, x2, v1, v2 = _pair(1, 1)
    space = GluedSpace(x1, x2, FinitePoints(((0.0, 0.0),)))
    G = glue_bundles(v1, v2, space, FiniteFibreMap({0.0: [[2.0]]}))
    H = glue_bundles(v1, v2, space, FiniteFibreMap({0.0: [[3.0]]}))
    assert tensor_glued_bundle(G, H).A(0.0) == pytest.approx(np.array([[6.0]]))
