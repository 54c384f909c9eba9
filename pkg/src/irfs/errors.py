"""Exception hierarchy shared by every irfs module."""


class IRFSError(Exception):
    """Base class for all errors raised by this package."""


class DataError(IRFSError):
    """Something is wrong with an input dataset."""


class ParseError(DataError):
    def __init__(self, row, col, token):
        self.row = row
        self.col = col
        self.token = token
        super().__init__(f"cannot parse cell at row {row}, column {col}: {token!r}")


class SchemaError(DataError):
    pass


class LabelError(DataError):
    pass


class SplitError(DataError):
    pass


class EmptyInput(IRFSError, ValueError):
    pass


class LengthMismatch(IRFSError, ValueError):
    pass


class EmptyFeatureSet(IRFSError, ValueError):
    pass


class ShapeMismatch(IRFSError, ValueError):
    pass


class DimensionMismatch(IRFSError, ValueError):
    pass


class IndexOutOfRange(IRFSError, IndexError):
    pass


class RangeError(IRFSError, ValueError):
    pass


class InsufficientSamples(IRFSError, ValueError):
    pass


class NonFiniteLoss(IRFSError, FloatingPointError):
    """A Q-network update produced NaN or Inf."""


class ConfigError(IRFSError, ValueError):
    pass
