"""
Channel - Domain types and unit conventions for the two-user Gaussian
interference channel in standard form

    Y1 = X1 + h12*X2 + Z1
    Y2 = X2 + h21*X1 + Z2

with unit-variance receiver noise. Powers are linear SNRs; rates are bits.
"""

import math
from dataclasses import dataclass
from typing import TypeAlias

from sumcap.errors import InvalidParameterError


# Information rate in bits per channel use
Rate: TypeAlias = float


def _check_power(name, value):
    if not math.isfinite(value):
        raise InvalidParameterError(f"{name} must be finite, got {value!r}")
    if value <= 0:
        raise InvalidParameterError(f"{name} must be positive, got {value!r}")


def _check_gain(name, value):
    if not math.isfinite(value):
        raise InvalidParameterError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class ChannelParams:
    """
    Powers and real cross-gains of the two-user channel.

    Attributes:
        p1: Transmit power of user 1 (linear)
        p2: Transmit power of user 2 (linear)
        h12: Cross-gain of user 2 into receiver 1
        h21: Cross-gain of user 1 into receiver 2
    """

    p1: float
    p2: float
    h12: float
    h21: float

    def __post_init__(self):
        _check_power("p1", self.p1)
        _check_power("p2", self.p2)
        _check_gain("h12", self.h12)
        _check_gain("h21", self.h21)

    @classmethod
    def asymmetric(cls, p1, p2, h12, h21):
        """Validating constructor that coerces every field to float."""
        return cls(float(p1), float(p2), float(h12), float(h21))

    @property
    def symmetric(self):
        return self.p1 == self.p2 and self.h12 == self.h21

    @property
    def p(self):
        """Common power of a symmetric channel."""
        return self.p1

    @property
    def h(self):
        """Common cross-gain of a symmetric channel."""
        return self.h12

    def mirrored(self):
        """Swap the user labels."""
        return ChannelParams(self.p2, self.p1, self.h21, self.h12)

    def interference_plus_noise(self, receiver):
        """
        Variance of the interference plus noise seen at a receiver under
        Gaussian inputs: 1 + h12^2 P2 at receiver 1, 1 + h21^2 P1 at receiver 2.
        """
        if receiver == 1:
            return 1.0 + self.h12 * self.h12 * self.p2
        if receiver == 2:
            return 1.0 + self.h21 * self.h21 * self.p1
        raise InvalidParameterError(f"receiver must be 1 or 2, got {receiver!r}")


def make_symmetric(p, h):
    """
    Build the symmetric channel P1 = P2 = p, h12 = h21 = h.

    Raises:
        InvalidParameterError: non-positive power or non-finite input
    """
    p = float(p)
    h = float(h)
    return ChannelParams(p, p, h, h)


def db_to_linear(x_db):
    """Convert a decibel value to a linear power ratio."""
    if not math.isfinite(x_db):
        raise InvalidParameterError(f"dB value must be finite, got {x_db!r}")
    return 10.0 ** (x_db / 10.0)


def linear_to_db(p):
    _check_power("power", p)
    return 10.0 * math.log10(p)
