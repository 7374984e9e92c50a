"""Exception types shared across the package."""


class PolykError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(PolykError):
    """A structural invariant of a presentation, morphism, or functor fails.

    Carries a list of human-readable problem strings so callers can report
    every violation at once instead of the first one found.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class ParseError(PolykError):
    """A text document could not be parsed.  Carries 1-based line/column."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", col {column}" if column is not None else "") + ")"
        super().__init__(message + where)


class UnknownObject(ParseError):
    """A declaration refers to an object id that was never declared."""


class DuplicateDeclaration(ParseError):
    """The same id or structural fact is declared twice."""


class UnsupportedPushout(PolykError):
    """The pushout corner cannot be presented in this combinatorial model.

    Raised when the gluing construction needs a covering refinement that the
    bounded sieve search cannot certify.  This is a boundary of the model,
    not a bug in the input.
    """


class NotACofibration(PolykError):
    """An operation requiring a cofibration received something else."""


class NotLayered(PolykError):
    """Strand decomposition was asked for a non-layered chain morphism."""


class ClosureBoundExceeded(PolykError):
    """The horizontal groupoid closure grew past the requested bound."""


class IndexOutOfRange(PolykError):
    """A degree or stage index lies outside the structure it refers to."""


class BoundExceeded(PolykError):
    """An enumeration hit its size bound; results would be partial."""


class IncompatibleComposition(PolykError):
    """Two morphisms were composed whose endpoints do not match."""


class NotASubcomplex(PolykError):
    """The claimed subcomplex is not a subpresentation of the ambient one."""


class NotPure(PolykError):
    """An operation requiring pure (sub-only or shuffle-only) morphisms got a mixed one."""


class BoundTooSmall(PolykError):
    """A finite materialization bound was exceeded; raise it and retry."""
