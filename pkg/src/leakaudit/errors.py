"""Exception hierarchy.

``DataError`` subclasses signal bad inputs (CLI exit code 2) and
``BackendError`` subclasses signal model backend failures (exit code 3).
"""


class AuditError(Exception):
    pass


class DataError(AuditError):
    pass


class BackendError(AuditError):
    pass


# records
class InvalidRatio(DataError):
    pass


class InvalidDate(DataError):
    pass


# corpus
class TemplateNotFound(DataError):
    pass


class IncompleteRecord(DataError):
    pass


class ContainmentError(DataError):
    pass


class ParseError(DataError):
    def __init__(self, message, line_no=None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


# protocol
class RegimeMismatch(DataError):
    pass


class EmptyBatch(DataError):
    pass


# llmclient
class ConfigError(DataError):
    pass


class BackendUnavailable(BackendError):
    pass


class RequestRejected(BackendError):
    def __init__(self, message, status_code=None):
        self.status_code = status_code
        super().__init__(message)


class MissingCredentials(BackendError):
    pass


class ReplayMiss(BackendError):
    pass


# extract
class NoTableFound(DataError):
    pass


class UnrecognizedSchema(DataError):
    pass


class AgeParseError(DataError):
    pass


class AlignmentError(DataError):
    def __init__(self, message, unmatched=()):
        self.unmatched = list(unmatched)
        super().__init__(message)


# metrics / analysis
class EmptyReference(DataError):
    pass


class MetricMismatch(DataError):
    pass


class UndefinedRetention(DataError):
    pass


class EmptyScores(DataError):
    pass


class ConditionNeverLeaked(DataError):
    pass


# interface
class FormatError(DataError):
    pass


class FingerprintMismatch(DataError):
    pass
