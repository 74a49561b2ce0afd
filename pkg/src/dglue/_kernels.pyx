# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled stack-machine evaluator for flattened expression programs."""

from libc.math cimport exp, sin, cos, fabs, pow
from libc.stdlib cimport malloc, free

import numpy as np

cdef enum:
    OP_CONST = 0
    OP_VAR = 1
    OP_ADD = 2
    OP_NEG = 3
    OP_MUL = 4
    OP_POW = 5
    OP_EXP = 6
    OP_SIN = 7
    OP_COS = 8
    OP_ABS = 9
    OP_RECIP = 10

BACKEND = "compiled"


def eval_program(const int[::1] ops, const double[::1] consts, const int[::1] iargs,
                 int depth, const double[::1] xs):
    cdef Py_ssize_t n = xs.shape[0]
    cdef Py_ssize_t m = ops.shape[0]
    cdef Py_ssize_t i, k
    cdef int sp, op
    cdef double x
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] res = out
    cdef double* stack = <double*> malloc((depth + 1) * sizeof(double))
    if stack == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(n):
                x = xs[i]
                sp = -1
                for k in range(m):
                    op = ops[k]
                    if op == OP_CONST:
                        sp += 1
                        stack[sp] = consts[k]
                    elif op == OP_VAR:
                        sp += 1
                        stack[sp] = x
                    elif op == OP_ADD:
                        sp -= 1
                        stack[sp] = stack[sp] + stack[sp + 1]
                    elif op == OP_NEG:
                        stack[sp] = -stack[sp]
                    elif op == OP_MUL:
                        sp -= 1
                        stack[sp] = stack[sp] * stack[sp + 1]
                    elif op == OP_POW:
                        stack[sp] = pow(stack[sp], <double> iargs[k])
                    elif op == OP_EXP:
                        stack[sp] = exp(stack[sp])
                    elif op == OP_SIN:
                        stack[sp] = sin(stack[sp])
                    elif op == OP_COS:
                        stack[sp] = cos(stack[sp])
                    elif op == OP_ABS:
                        stack[sp] = fabs(stack[sp])
                    elif op == OP_RECIP:
                        stack[sp] = 1.0 / stack[sp]
                res[i] = stack[0]
    finally:
        free(stack)
    return out
