"""
Bounds - Closed-form lower and upper bounds on the sum capacity

Lower bounds:  treating interference as noise (TIN), orthogonal signalling
Upper bounds:  One-Bit, Z-channel, tangent genie, constructed genie
Exact value:   TIN sum rate inside the low-interference regime
"""

import logging
import math
from dataclasses import dataclass, fields
from typing import Optional

from sumcap import config, gaussmi, geometry, regime
from sumcap.channel import ChannelParams, Rate
from sumcap.errors import DegenerateObservationError, UnsupportedConfigurationError
from sumcap.regime import RegimeLabel

logger = logging.getLogger(__name__)


LOWER_FIELDS = ("tin_lower", "ortho_lower")
UPPER_FIELDS = ("onebit_upper", "kramer_upper", "tangent_upper", "genie_upper")


@dataclass(frozen=True)
class BoundSet:
    """
    Every bound computed for one channel. None marks "not applicable".

    Attributes:
        tin_lower: TIN sum rate
        ortho_lower: log2(1 + 2P), symmetric channels only
        onebit_upper: One-Bit bound, symmetric channels only
        kramer_upper: Z-channel bound, symmetric channels only
        tangent_upper: Tangent genie bound, symmetric channels above threshold
        genie_upper: Genie-aided bound at the constructed useful-and-smart genie
        exact_capacity: Sum capacity where the low-interference condition holds
        regime: Regime label
    """

    tin_lower: Rate
    ortho_lower: Optional[Rate]
    onebit_upper: Optional[Rate]
    kramer_upper: Optional[Rate]
    tangent_upper: Optional[Rate]
    genie_upper: Optional[Rate]
    exact_capacity: Optional[Rate]
    regime: RegimeLabel

    def present(self, names):
        return {name: getattr(self, name) for name in names if getattr(self, name) is not None}

    def as_dict(self):
        values = {f.name: getattr(self, f.name) for f in fields(self) if f.name != "regime"}
        values["regime"] = self.regime.kind.value
        values["condition_value"] = self.regime.condition_value
        values["threshold"] = self.regime.threshold
        return values


def _require_symmetric(params, bound):
    if not params.symmetric:
        raise UnsupportedConfigurationError(f"{bound} is stated for symmetric channels only, got {params}")


# --- Lower Bounds ---

def tin_sum_rate(params: ChannelParams) -> Rate:
    """
    Sum rate of Gaussian inputs with interference treated as noise,
    1/2 log2(1 + P1/(1 + h12^2 P2)) + 1/2 log2(1 + P2/(1 + h21^2 P1)).
    """
    r1 = math.log2(1.0 + params.p1 / params.interference_plus_noise(1))
    r2 = math.log2(1.0 + params.p2 / params.interference_plus_noise(2))
    return 0.5 * r1 + 0.5 * r2


def ortho_sum_rate(params: ChannelParams) -> Rate:
    """
    Orthogonal signalling sum rate log2(1 + 2P). Each user transmits alone for
    half the time at power 2P, earning 1/2 log2(1 + 2P).
    """
    _require_symmetric(params, "orthogonal signalling bound")
    return math.log2(1.0 + 2.0 * params.p)


# --- Upper Bounds ---

def onebit_upper(params: ChannelParams) -> Rate:
    """One-Bit bound log2(1 + h^2 P + P/(1 + h^2 P))."""
    _require_symmetric(params, "One-Bit bound")
    snr = params.h * params.h * params.p
    return math.log2(1.0 + snr + params.p / (1.0 + snr))


def kramer_upper(params: ChannelParams) -> Rate:
    """Z-channel bound 1/2 log2(1 + P) + 1/2 log2(1 + P/(1 + h^2 P))."""
    _require_symmetric(params, "Z-channel bound")
    r_clean = math.log2(1.0 + params.p)
    r_tin = math.log2(1.0 + params.p / params.interference_plus_noise(1))
    return 0.5 * r_clean + 0.5 * r_tin


def certified_genie_upper(params: ChannelParams) -> Optional[Rate]:
    """
    Genie-aided upper bound at the constructed useful-and-smart genie, or
    None when no genie is constructed or its observations are singular.
    """
    genie = regime.construct_genie(params)
    if genie is None:
        return None
    # the Gaussian law is invariant under X_i -> -X_i, so gain signs do not matter
    magnitudes = ChannelParams(params.p1, params.p2, abs(params.h12), abs(params.h21))
    try:
        return gaussmi.genie_aided_sum_rate(magnitudes, genie)
    except DegenerateObservationError as exc:
        logger.warning("genie-aided bound unavailable for %s: %s", params, exc)
        return None


def exact_sum_capacity(params: ChannelParams) -> Optional[Rate]:
    """TIN sum rate when the low-interference condition holds, otherwise None."""
    if regime.is_low_interference(params):
        return tin_sum_rate(params)
    return None


# --- Aggregation ---

def all_bounds(params: ChannelParams) -> BoundSet:
    """
    Evaluate every applicable bound for one channel.

    Symmetric channels get the One-Bit, Z-channel and orthogonal values; the
    tangent bound is added above threshold when h != 0.
    """
    label = regime.classify(params)
    symmetric = params.symmetric

    tangent = None
    if symmetric and not label.exact and params.h != 0.0:
        tangent = geometry.tangent_bound(params).rate

    bound_set = BoundSet(
        tin_lower=tin_sum_rate(params),
        ortho_lower=ortho_sum_rate(params) if symmetric else None,
        onebit_upper=onebit_upper(params) if symmetric else None,
        kramer_upper=kramer_upper(params) if symmetric else None,
        tangent_upper=tangent,
        genie_upper=certified_genie_upper(params),
        exact_capacity=exact_sum_capacity(params),
        regime=label,
    )
    logger.debug("bounds for %s: %s", params, bound_set)
    return bound_set


def ordering_violations(bound_set: BoundSet, strict=False, tol=config.ORDER_TOL):
    """
    Lower/upper pairs that break lower <= upper + tol.

    The orthogonal-signalling value only takes part in strict mode.

    Returns:
        List of (lower name, upper name, lower - upper)
    """
    lower_names = LOWER_FIELDS if strict else ("tin_lower",)
    lowers = bound_set.present(lower_names)
    uppers = bound_set.present(UPPER_FIELDS)
    violations = []
    for lower_name, lower in lowers.items():
        for upper_name, upper in uppers.items():
            if lower > upper + tol:
                violations.append((lower_name, upper_name, lower - upper))
    return violations
