"""Exception hierarchy.

Every error carries ``law``: the name of the operation or invariant it
instantiates, so CLI reports can tag failures consistently.
"""


class DGlueError(Exception):
    law = "dglue"


class DomainError(DGlueError, ArithmeticError):
    """A reciprocal node was evaluated at (or too near) a zero of its argument."""

    law = "eval"


class ParseError(DGlueError, ValueError):
    law = "parse_presentation"

    def __init__(self, message, *, line=None, field=None):
        where = []
        if field is not None:
            where.append(f"field {field}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.line = line
        self.field = field


class ValidationError(DGlueError, ValueError):
    law = "parse_presentation"

    def __init__(self, message, *, invariant=None):
        super().__init__(f"[{invariant}] {message}" if invariant else message)
        self.invariant = invariant


class NonMonotoneGluingMap(DGlueError, ValueError):
    law = "make_glued_space"


class DuplicateLocusPoint(DGlueError, ValueError):
    law = "make_glued_space"


class IncompatibleFunctions(DGlueError, ValueError):
    law = "glue_functions"

    def __init__(self, message, *, location=None, residual=None):
        super().__init__(message)
        self.location = location
        self.residual = residual


class ShapeMismatch(DGlueError, ValueError):
    law = "glue_bundles"


class LocusMismatch(DGlueError, ValueError):
    law = "glue_bundles"


class NonconstantRankOnInterval(DGlueError, ValueError):
    law = "kernel"


class InvalidComplement(DGlueError, ValueError):
    law = "quotient_bundle"


class IncompatibleSections(DGlueError, ValueError):
    law = "glue_sections_S"

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotInvariant(DGlueError, ValueError):
    law = "S1"

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DuplicatePoints(DGlueError, ValueError):
    law = "dim_witness"


class BaseMismatch(DGlueError, ValueError):
    law = "tensor_sections"


class NonMonotone(DGlueError, ValueError):
    law = "pullback"


class NonPositiveMetric(DGlueError, ValueError):
    law = "levi_civita_1d"


class SingularInput(DGlueError, ValueError):
    law = "apply_connection"

    def __init__(self, message, points=()):
        super().__init__(message)
        self.points = tuple(points)


class IncompatibleMetrics(DGlueError, ValueError):
    law = "induced_pseudo_metric"


class IncompatibleConnections(DGlueError, ValueError):
    law = "induce_connection"

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class NonInvertibleGluing(DGlueError, ValueError):
    law = "induce_connection"


class InvalidMetric(DGlueError, ValueError):
    """Asymmetric matrix, or rank different from the dimension of the fibre's dual."""

    law = "PseudoMetric"
