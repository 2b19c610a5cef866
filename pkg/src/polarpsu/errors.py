"""Exception hierarchy shared by every module."""


class PolarError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(PolarError, ValueError):
    """An argument is outside its documented range."""


class InputError(PolarError, ValueError):
    """Channel data cannot be decoded (wrong length, NaN or infinity)."""


class AvailabilityError(PolarError):
    """A partial sum was requested before all of its bits were decided."""


class TimingViolation(PolarError):
    """A partial sum was read at a time other than its availability time."""


class PsuOverflowError(PolarError):
    """More than N decisions were pushed into a partial-sum unit."""
