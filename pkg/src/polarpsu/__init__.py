"""Bit-accurate polar SC decoding with interchangeable partial-sum unit models."""

from .core import CodeParams, construct_frozen_set, encode, kronecker_power, subset_rule
from .decoder import DecodeResult, decode, f, g
from .errors import (
    AvailabilityError,
    InputError,
    ParameterError,
    PolarError,
    PsuOverflowError,
    TimingViolation,
)
from .matrix_gen import GeneratorRowStream
from .psu import MatrixPsu, RegisterPsu, ShiftRegisterPsu, make_psu, tau

__all__ = [
    "AvailabilityError", "CodeParams", "DecodeResult", "GeneratorRowStream", "InputError",
    "MatrixPsu", "ParameterError", "PolarError", "PsuOverflowError", "RegisterPsu",
    "ShiftRegisterPsu", "TimingViolation", "construct_frozen_set", "decode", "encode", "f", "g",
    "kronecker_power", "make_psu", "subset_rule", "tau",
]
__version__ = "0.1.0"
