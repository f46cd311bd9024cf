"""Exception hierarchy shared across the package."""


class CateError(Exception):
    """Base class for all package errors."""


class EmptySentenceError(CateError):
    pass


class TreebankSyntaxError(CateError):
    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class VocabularyMismatchError(CateError):
    pass


class NonBinaryNodeError(CateError):
    pass


class EmptySegmentError(CateError):
    pass


class DimensionMismatchError(CateError):
    pass


class MalformedLineError(CateError):
    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.line = line


class EmptyFileError(CateError):
    pass


class UnlabeledNodeError(CateError):
    pass


class EmptyTrainSplitError(CateError):
    pass


class NonFiniteLossError(CateError):
    pass


class EmptyInputError(CateError):
    pass


class NonPositiveTemperatureError(CateError):
    pass


class EmptyValidationError(CateError):
    pass


class TokenMismatchError(CateError):
    pass


class EmptySplitError(CateError):
    pass


class UnknownModelVariantError(CateError):
    pass
