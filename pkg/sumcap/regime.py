"""
Regime - Low-interference condition and explicit useful-and-smart genies

A genie hands receiver i the side information

    S1 = h21 * (X1 + eta1 * W1)
    S2 = h12 * (X2 + eta2 * W2)

with W_i unit-variance Gaussian and corr(W_i, Z_i) = rho_i. In the symmetric
channel this is S_i = h*X_i + h*eta*W_i.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from scipy.optimize import brentq

from sumcap import config
from sumcap.channel import ChannelParams
from sumcap.errors import InvalidParameterError

logger = logging.getLogger(__name__)


SYMMETRIC_THRESHOLD = 0.5
ASYMMETRIC_THRESHOLD = 1.0


# --- Domain Types ---

@dataclass(frozen=True)
class GenieSpec:
    """
    Genie side-information parameters per receiver.

    Attributes:
        eta1: Noise scale of the side information at receiver 1 (> 0)
        rho1: Correlation between W1 and Z1, in [0, 1]
        eta2: Noise scale of the side information at receiver 2 (> 0)
        rho2: Correlation between W2 and Z2, in [0, 1]
    """

    eta1: float
    rho1: float
    eta2: float
    rho2: float

    def __post_init__(self):
        for name in ("eta1", "eta2"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise InvalidParameterError(f"{name} must be positive and finite, got {value!r}")
        for name in ("rho1", "rho2"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InvalidParameterError(f"{name} must lie in [0, 1], got {value!r}")

    @classmethod
    def symmetric(cls, eta, rho):
        """Same (eta, rho) at both receivers."""
        return cls(float(eta), float(rho), float(eta), float(rho))

    @property
    def is_symmetric(self):
        return self.eta1 == self.eta2 and self.rho1 == self.rho2

    def is_useful(self, params, slack=config.USEFUL_SLACK):
        """
        Check |h21*eta1| <= sqrt(1 - rho2^2) and |h12*eta2| <= sqrt(1 - rho1^2).

        Returns:
            Boolean - True if both inequalities hold within slack
        """
        r1, r2 = useful_residuals(self, params)
        return r1 <= slack and r2 <= slack

    def is_smart(self, params, rtol=config.SMART_RTOL):
        """
        Check eta1*rho1 = 1 + h12^2 P2 and eta2*rho2 = 1 + h21^2 P1.

        Returns:
            Boolean - True if both equations hold to relative tolerance rtol
        """
        r1, r2 = smart_residuals(self, params)
        return r1 <= rtol and r2 <= rtol


class RegimeKind(str, Enum):
    LOW_INTERFERENCE_EXACT = "low_interference_exact"
    ABOVE_THRESHOLD = "above_threshold"


@dataclass(frozen=True)
class RegimeLabel:
    kind: RegimeKind
    condition_value: float
    threshold: float

    @property
    def exact(self):
        return self.kind is RegimeKind.LOW_INTERFERENCE_EXACT


class RhoChoice(NamedTuple):
    rho1: float
    rho2: float
    phi: float


# --- Residuals ---

def useful_residuals(genie, params):
    """
    Signed margins of the useful-genie inequalities; a value <= 0 means the
    inequality holds.

    Returns:
        Tuple (receiver-1 genie margin, receiver-2 genie margin)
    """
    r1 = abs(params.h21 * genie.eta1) - math.sqrt(1.0 - genie.rho2 * genie.rho2)
    r2 = abs(params.h12 * genie.eta2) - math.sqrt(1.0 - genie.rho1 * genie.rho1)
    return r1, r2


def smart_residuals(genie, params):
    """Relative residuals of the smart-genie equations."""
    n1 = params.interference_plus_noise(1)
    n2 = params.interference_plus_noise(2)
    return abs(genie.eta1 * genie.rho1 - n1) / n1, abs(genie.eta2 * genie.rho2 - n2) / n2


# --- Conditions ---

def cross_terms(params):
    # |h12 (1 + h21^2 P1)| and |h21 (1 + h12^2 P2)|
    a = abs(params.h12) * (1.0 + params.h21 * params.h21 * params.p1)
    b = abs(params.h21) * (1.0 + params.h12 * params.h12 * params.p2)
    return a, b


def symmetric_condition(p, h):
    """
    Low-interference condition of the symmetric channel, |h + h^3 p| <= 0.5.

    Evaluated as |h|(1 + h^2 p) so that it agrees bit-for-bit with the
    asymmetric condition on symmetric parameters.
    """
    return abs(h) * (1.0 + h * h * p) <= SYMMETRIC_THRESHOLD


def asym_condition(params):
    """|h12 (1 + h21^2 P1)| + |h21 (1 + h12^2 P2)| <= 1."""
    a, b = cross_terms(params)
    return a + b <= ASYMMETRIC_THRESHOLD


def is_low_interference(params):
    if params.symmetric:
        return symmetric_condition(params.p, params.h)
    return asym_condition(params)


def condition_value(params):
    """Scalar compared against the regime threshold (0.5 symmetric, 1 otherwise)."""
    if params.symmetric:
        return abs(params.h) * (1.0 + params.h * params.h * params.p)
    a, b = cross_terms(params)
    return a + b


def threshold_gain(p):
    """
    Largest symmetric gain h* >= 0 inside the low-interference regime,
    the root of p*h^3 + h - 0.5 = 0.
    """
    return brentq(lambda h: p * h ** 3 + h - SYMMETRIC_THRESHOLD, 0.0, SYMMETRIC_THRESHOLD, xtol=1e-15, rtol=1e-15)


# --- Genie Construction ---

def find_rhos(params):
    """
    Pick correlations satisfying the asymmetric existence condition.

    With rho1 = sin(phi) and rho2 = cos(phi) the pair is feasible whenever
    |h12 (1 + h21^2 P1)| <= cos^2(phi) <= 1 - |h21 (1 + h12^2 P2)|.
    The midpoint of that interval is returned.

    Returns:
        RhoChoice(rho1, rho2, phi), or None outside the regime
    """
    if not asym_condition(params):
        return None
    a, b = cross_terms(params)
    cos2 = 0.5 * (1.0 + (a - b))
    rho2 = math.sqrt(cos2)
    rho1 = math.sqrt(1.0 - cos2)
    return RhoChoice(rho1, rho2, math.acos(rho2))


def construct_genie(params):
    """
    Build a useful and smart genie certifying that treating interference as
    noise is sum-capacity optimal.

    Returns:
        GenieSpec, or None when the regime condition fails or a cross-gain is
        zero (the side information vanishes and no genie is needed)
    """
    if not is_low_interference(params):
        return None
    if params.h12 == 0.0 or params.h21 == 0.0:
        logger.debug("zero cross-gain %s: exact regime without a genie", params)
        return None

    rhos = find_rhos(params)
    if rhos is None:
        return None
    genie = GenieSpec(
        eta1=params.interference_plus_noise(1) / rhos.rho1,
        rho1=rhos.rho1,
        eta2=params.interference_plus_noise(2) / rhos.rho2,
        rho2=rhos.rho2,
    )
    logger.debug("constructed genie %s for %s (phi=%.6g)", genie, params, rhos.phi)
    return genie


def needs_no_genie(params):
    """Exact regime reached through a zero cross-gain."""
    return is_low_interference(params) and (params.h12 == 0.0 or params.h21 == 0.0)


def classify(params: ChannelParams) -> RegimeLabel:
    threshold = SYMMETRIC_THRESHOLD if params.symmetric else ASYMMETRIC_THRESHOLD
    value = condition_value(params)
    kind = RegimeKind.LOW_INTERFERENCE_EXACT if value <= threshold else RegimeKind.ABOVE_THRESHOLD
    return RegimeLabel(kind=kind, condition_value=value, threshold=threshold)
