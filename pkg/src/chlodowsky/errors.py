"""Exception hierarchy shared by every module of the package."""


class ChlodowskyError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ChlodowskyError, ValueError):
    """A point lies outside the domain of a basis function or operator."""


class SingularityError(DomainError):
    """A transformation fiber degenerates at the requested point."""


class BasisIndexError(ChlodowskyError, IndexError):
    """A basis or node index is out of range."""


class DegreeError(ChlodowskyError, ValueError):
    """An operation needs a positive degree but got zero."""


class DegenerateColumnError(ChlodowskyError, ValueError):
    """A node column has ``m_k = 0`` so its spacing is undefined."""


class ExprError(ChlodowskyError):
    """Base class for expression-language errors."""


class ExprSyntaxError(ExprError, SyntaxError):
    """Malformed expression source; ``offset`` is a 0-based byte offset."""

    def __init__(self, message, source="", offset=0):
        super().__init__(f"{message} at offset {offset}")
        # SyntaxError.__str__ prints only msg, so keep the location in it
        self.msg = f"{message} at offset {offset}"
        self.reason = message
        self.text = source
        self.offset = offset


class UnknownIdentifierError(ExprError, NameError):
    def __init__(self, name, offset=0):
        super().__init__(f"unknown identifier {name!r} at offset {offset}")
        self.name = name
        self.offset = offset


class ArityError(ExprError, TypeError):
    pass


class EvaluationError(ExprError, ArithmeticError):
    """Raised when an expression cannot be evaluated at the given bindings."""

    def __init__(self, message, expr=None, bindings=None):
        where = ""
        if expr is not None:
            where = f" in {expr}"
        if bindings:
            where += " with " + ", ".join(f"{k}={v!r}" for k, v in sorted(bindings.items()))
        super().__init__(message + where)
        self.expr = expr
        self.bindings = dict(bindings or {})


class ConfigError(ChlodowskyError, ValueError):
    """Invalid experiment configuration; ``key`` names the offending entry."""

    def __init__(self, message, key=None):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key


class InvalidDomainError(ChlodowskyError, ValueError):
    """A curve-bounded domain fails its construction checks."""
