"""Exception hierarchy shared by all modules."""


class IvSugenoError(Exception):
    """Base class for every error raised by this package."""


class IntervalError(IvSugenoError, ValueError):
    pass


class OutOfRange(IntervalError):
    """An endpoint falls outside [0, 1]."""


class Inverted(IntervalError):
    """lower > upper."""


class EmptyInput(IvSugenoError, ValueError):
    pass


class LengthMismatch(IvSugenoError, ValueError):
    pass


class MeasureError(IvSugenoError, ValueError):
    pass


class NonSymmetricMeasure(MeasureError):
    pass


class WDSViolation(IvSugenoError):
    """The (measure, F, G) triple depends on how ties are sorted.

    ``witness`` carries the offending input vector and two permutations
    giving different results.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class DataError(IvSugenoError, ValueError):
    """Malformed application input (score tables, graphs, partitions)."""


class MissingCell(DataError):
    pass


class ScoreOutOfRange(DataError):
    pass


class ArityMismatch(DataError):
    pass


class UnlabeledTrial(DataError):
    pass


class EmptyPartition(DataError):
    pass


class TooFewTrials(DataError):
    pass


class ConfigError(IvSugenoError, ValueError):
    pass
