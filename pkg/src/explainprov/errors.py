"""Exception hierarchy.

Errors are split into two families so callers (the CLI and the HTTP service)
can tell who is at fault: :class:`ConfigurationError` for problems in a
bundle's templates, queries, plans or dictionary, and :class:`DataError` for
problems in data submitted at runtime (bindings, PROV documents).
"""

from __future__ import annotations


class ExplainError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(ExplainError):
    pass


class DataError(ExplainError):
    pass


class ProvError(DataError):
    pass


class ProvSyntaxError(ProvError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UndeclaredPrefixError(ProvError):
    pass


class DuplicateIdError(ProvError):
    pass


class UnsupportedStatementError(ProvError):
    pass


class BindingsError(DataError):
    def __init__(self, message: str, row: int | None = None) -> None:
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class ExpansionError(DataError):
    pass


class QueryError(ConfigurationError):
    pass


class QuerySyntaxError(QueryError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class PlanError(ConfigurationError):
    pass


class DictionaryError(ConfigurationError):
    pass


class InstantiationError(ExplainError):
    pass


class RealizationError(ExplainError):
    pass


class BundleError(ConfigurationError):
    def __init__(self, message: str, findings: list | None = None) -> None:
        super().__init__(message)
        self.findings = list(findings or [])


class NotFound(ExplainError):
    pass


class ExplanationUnavailable(ExplainError):
    pass
