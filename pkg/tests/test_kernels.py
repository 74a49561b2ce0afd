import numpy as np
import pytest
from hypothesis import given

from dglue import _kernels_py, expr as E, kernels

from conftest import rough_exprs

compiled = pytest.importorskip("dglue._kernels")


def test_selected_backend_is_compiled_when_built():
    assert kernels.BACKEND == compiled.BACKEND


@given(rough_exprs)
def test_backends_agree(e):
    prog = E.compile_program(e)
    xs = np.linspace(-2.0, 2.0, 33)
    a = compiled.eval_program(prog.ops, prog.consts, prog.iargs, prog.depth, xs)
    b = _kernels_py.eval_program(prog.ops, prog.consts, prog.iargs, prog.depth, xs)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-13, equal_nan=True)


def test_backends_agree_on_division_by_zero():
    prog = E.compile_program(E.parse("1/x"))
    xs = np.array([-1.0, 0.0, 1.0])
    a = compiled.eval_program(prog.ops, prog.consts, prog.iargs, prog.depth, xs)
    b = _kernels_py.eval_program(prog.ops, prog.consts, prog.iargs, prog.depth, xs)
    assert np.array_equal(np.isfinite(a), np.isfinite(b))
    assert a[0] == b[0] == -1.0


def test_empty_input():
    prog = E.compile_program(E.X)
    assert compiled.eval_program(prog.ops, prog.consts, prog.iargs, prog.depth, np.empty(0)).shape == (0,)
