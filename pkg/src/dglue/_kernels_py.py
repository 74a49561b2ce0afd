"""Numpy fallback for the compiled program evaluator.

Same calling convention as ``dglue._kernels.eval_program``; the program is run
once with whole sample arrays on the stack instead of once per sample.
"""

import numpy as np

from .program import (OP_ABS, OP_ADD, OP_CONST, OP_COS, OP_EXP, OP_MUL, OP_NEG,
                      OP_POW, OP_RECIP, OP_SIN, OP_VAR)

BACKEND = "python"


def eval_program(ops, consts, iargs, depth, xs):
    xs = np.asarray(xs, dtype=np.float64)
    stack = []
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for op, c, n in zip(ops, consts, iargs):
            if op == OP_CONST:
                stack.append(np.full(xs.shape, c))
            elif op == OP_VAR:
                stack.append(xs)
            elif op == OP_ADD:
                b = stack.pop()
                stack[-1] = stack[-1] + b
            elif op == OP_NEG:
                stack[-1] = -stack[-1]
            elif op == OP_MUL:
                b = stack.pop()
                stack[-1] = stack[-1] * b
            elif op == OP_POW:
                stack[-1] = np.power(stack[-1], float(n))
            elif op == OP_EXP:
                stack[-1] = np.exp(stack[-1])
            elif op == OP_SIN:
                stack[-1] = np.sin(stack[-1])
            elif op == OP_COS:
                stack[-1] = np.cos(stack[-1])
            elif op == OP_ABS:
                stack[-1] = np.abs(stack[-1])
            elif op == OP_RECIP:
                stack[-1] = 1.0 / stack[-1]
            else:
                raise ValueError(f"unknown opcode {op}")
    (out,) = stack
    return np.array(out, dtype=np.float64, copy=True)
