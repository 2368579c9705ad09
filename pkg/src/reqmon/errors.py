"""Exception types shared across the toolchain."""

from __future__ import annotations


class ReqmonError(Exception):
    """Base class for all toolchain errors."""


class ReqSyntaxError(ReqmonError):
    """Positioned syntax error in a requirement sentence or formula string.

    Lines and columns are 1-based. `expected` lists token descriptions that
    would have been accepted at the error position.
    """

    def __init__(self, message: str, line: int, col: int,
                 expected: tuple[str, ...] = ()):
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        suffix = ""
        if self.expected:
            suffix = " (expected %s)" % ", ".join(self.expected)
        super().__init__("%d:%d: %s%s" % (line, col, message, suffix))


class MissingFieldError(ReqSyntaxError):
    """A mandatory requirement field (component, shall, response) is absent."""

    def __init__(self, field: str, line: int, col: int,
                 expected: tuple[str, ...] = ()):
        self.field = field
        super().__init__("missing mandatory field '%s'" % field, line, col, expected)


class UnsupportedScopeError(ReqmonError):
    """Requirement uses a scope other than the supported null scope."""


class ValidationFailedError(ReqmonError):
    """One or more requirements failed validation against the declarations."""

    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("; ".join(str(i) for i in self.issues))


class UnknownVariableError(ReqmonError):
    """A formula references a variable the trace or monitor does not carry."""


class UnknownExternError(ReqmonError):
    """set_input() addressed a name that is not a monitor input."""


class UninitializedExternError(ReqmonError):
    """step() was called before every monitor input received a value."""


class UnsupportedOperatorError(ReqmonError):
    """The monitor compiler met a formula node outside the past-time set."""


class VarMapError(ReqmonError):
    """Variable-mapping file is malformed."""


class DuplicateVariableError(VarMapError):
    """Two mapping entries bind the same variable."""


class UnmappedVariableError(ReqmonError):
    """A monitor input has no entry in the variable mapping."""

    def __init__(self, name: str):
        self.name = name
        super().__init__("variable '%s' has no mapping entry" % name)


class TopicTypeMismatchError(ReqmonError):
    """Payload kind does not match the kind expected on the topic."""


class TraceFormatError(ReqmonError):
    """Replay trace file is malformed; carries the 1-based line number."""

    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__("line %d: %s" % (line, message))
