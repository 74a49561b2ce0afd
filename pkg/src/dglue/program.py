"""Opcodes of the flattened (postfix) expression program shared by both evaluators."""

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
