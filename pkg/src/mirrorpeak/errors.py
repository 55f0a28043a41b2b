"""Exception hierarchy shared by the estimation and benchmarking code."""


class PeakError(ValueError):
    """Base class for every error raised by mirrorpeak."""


class InvalidRangeError(PeakError):
    pass


class UndefinedSNRError(PeakError):
    pass


class NonUniformGridError(PeakError):
    pass


class WindowError(PeakError):
    """A usable sample window could not be formed."""


class EmptyWindowError(WindowError):
    pass


class TooFewSamplesError(WindowError):
    pass


class DegenerateWindowError(WindowError):
    """Amplitude sums vanish, so a weighted mean is undefined."""


class EstimatorError(PeakError):
    """An iterative estimator could not produce a step."""


class FlatSpectrumError(EstimatorError):
    pass


class NoOverlapError(EstimatorError):
    pass


class EmptyCellError(PeakError):
    pass


class InternalLogicError(RuntimeError):
    """A caller broke a documented precondition."""
