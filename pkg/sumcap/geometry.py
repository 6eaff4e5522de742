"""
Geometry - Polar description of symmetric genies and the tangent upper bound

In the plane of receiver 1's noise, the output Y1 sits at Q_Y = (a, 0) with
a = sqrt(1 + h^2 P), and a genie (eta, rho) sits at Q_S = (eta, theta) in
polar coordinates with cos(theta) = rho / a. The per-user rate with side
information is 1/2 log2(1 + P / sigma^2), sigma being the distance from the
origin to the line through Q_Y and Q_S.

    useful region:  h^2 eta^2 + a^2 cos^2(theta) <= 1
    smart line:     eta cos(theta) = a
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from sumcap import config
from sumcap.errors import (
    DegenerateLineError,
    InternalConsistencyError,
    InvalidParameterError,
    NoBoundaryError,
    PreconditionError,
    UnsupportedConfigurationError,
)
from sumcap.regime import GenieSpec, symmetric_condition

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2

ANGLE_SLACK = 1e-12


@dataclass(frozen=True)
class PolarGenie:
    """
    Polar description (eta, theta) of a symmetric genie.

    Attributes:
        eta: Radial coordinate (> 0)
        theta: Angle in [0, pi/2]
    """

    eta: float
    theta: float

    def __post_init__(self):
        if not math.isfinite(self.eta) or self.eta <= 0:
            raise InvalidParameterError(f"eta must be positive and finite, got {self.eta!r}")
        if not -ANGLE_SLACK <= self.theta <= math.pi / 2 + ANGLE_SLACK:
            raise InvalidParameterError(f"theta must lie in [0, pi/2], got {self.theta!r}")

    def cartesian(self):
        return self.eta * math.cos(self.theta), self.eta * math.sin(self.theta)

    def is_useful(self, params, slack=config.USEFUL_SLACK):
        a2 = _a_squared(params)
        h = params.h
        return h * h * self.eta * self.eta + a2 * math.cos(self.theta) ** 2 <= 1.0 + slack


@dataclass(frozen=True)
class TangentBound:
    """
    Result of the tangent search.

    Attributes:
        rate: Sum-rate upper bound in bits
        sigma: Origin-to-tangent distance
        slope: Slope of the tangent line through Q_Y (negative)
        point: Tangency point on the useful-region boundary
        local_maxima: Grid angles of every local maximum within tolerance of the best
    """

    rate: float
    sigma: float
    slope: float
    point: PolarGenie
    local_maxima: tuple

    @property
    def multiple(self):
        return len(self.local_maxima) > 1


def _require_symmetric(params):
    if not params.symmetric:
        raise UnsupportedConfigurationError(f"polar genie geometry is defined for symmetric channels only: {params}")


def _a_squared(params):
    return 1.0 + params.h * params.h * params.p


# --- Coordinate Maps ---

def to_polar(genie: GenieSpec, params):
    """Map a symmetric (eta, rho) genie to (eta, theta) with cos(theta) = rho / a."""
    _require_symmetric(params)
    if not genie.is_symmetric:
        raise UnsupportedConfigurationError(f"genie {genie} differs between receivers")
    a = math.sqrt(_a_squared(params))
    return PolarGenie(genie.eta1, math.acos(genie.rho1 / a))


def from_polar(polar: PolarGenie, params):
    _require_symmetric(params)
    rho = math.sqrt(_a_squared(params)) * math.cos(polar.theta)
    if rho > 1.0 + ANGLE_SLACK:
        raise PreconditionError(f"theta={polar.theta!r} needs correlation {rho!r} > 1")
    return GenieSpec.symmetric(polar.eta, min(max(rho, 0.0), 1.0))


def smart_line_x(params):
    """Abscissa of the vertical smart line."""
    _require_symmetric(params)
    return math.sqrt(_a_squared(params))


# --- Distances And Rates ---

def sigma_line(params, q_s: PolarGenie):
    """
    Distance from the origin to the line through Q_Y = (a, 0) and Q_S.

    Raises:
        DegenerateLineError: Q_S coincides with Q_Y
    """
    _require_symmetric(params)
    a = math.sqrt(_a_squared(params))
    x, y = q_s.cartesian()
    chord = math.hypot(x - a, y)
    if chord <= 1e-14 * a:
        raise DegenerateLineError(f"Q_S={q_s} coincides with Q_Y=({a}, 0)")
    return a * abs(y) / chord


def sum_rate_from_sigma(params, sigma):
    """Symmetric sum rate log2(1 + P / sigma^2)."""
    return math.log2(1.0 + params.p / (sigma * sigma))


def tangent_rate_from_slope(params, mu):
    """Slope form of the tangent bound, log2[1 + P/(1+h^2P) (1 + 1/mu^2)]."""
    return math.log2(1.0 + params.p / _a_squared(params) * (1.0 + 1.0 / (mu * mu)))


# --- Useful Region Boundary ---

def feasible_theta_interval(params):
    """Angles at which the useful boundary exists: [arccos(1/a), pi/2]."""
    _require_symmetric(params)
    return math.acos(1.0 / math.sqrt(_a_squared(params))), math.pi / 2


def useful_boundary(params, theta):
    """
    Radial coordinate of the useful-region boundary at angle theta,
    eta = sqrt((1 - a^2 cos^2 theta) / h^2).

    Raises:
        UnsupportedConfigurationError: h = 0 (the region is unbounded)
        NoBoundaryError: cos^2 theta > 1 / a^2
    """
    _require_symmetric(params)
    if params.h == 0.0:
        raise UnsupportedConfigurationError("useful region is unbounded for h = 0")
    if not -ANGLE_SLACK <= theta <= math.pi / 2 + ANGLE_SLACK:
        raise NoBoundaryError(f"theta={theta!r} lies outside [0, pi/2]")
    slack = 1.0 - _a_squared(params) * math.cos(theta) ** 2
    if slack < -ANGLE_SLACK:
        raise NoBoundaryError(f"no useful boundary point at theta={theta!r}")
    return math.sqrt(max(slack, 0.0)) / abs(params.h)


def boundary_genie(params, theta):
    """Symmetric genie on the useful boundary at angle theta."""
    return from_polar(PolarGenie(useful_boundary(params, theta), theta), params)


def boundary_points(params, n=256):
    """Cartesian samples (x, y) of the useful-region boundary curve."""
    lo, hi = feasible_theta_interval(params)
    thetas = np.linspace(lo, hi, n)
    eta = _boundary_eta(params, thetas)
    return eta * np.cos(thetas), eta * np.sin(thetas)


def _boundary_eta(params, thetas):
    slack = 1.0 - _a_squared(params) * np.cos(thetas) ** 2
    return np.sqrt(np.maximum(slack, 0.0)) / abs(params.h)


def boundary_sigma(params, thetas):
    """Vectorised sigma for boundary genies at the given angles."""
    thetas = np.asarray(thetas, dtype=float)
    a = math.sqrt(_a_squared(params))
    eta = _boundary_eta(params, thetas)
    x = eta * np.cos(thetas)
    y = eta * np.sin(thetas)
    return a * y / np.hypot(x - a, y)


# --- Tangent Search ---

def golden_section_max(f, lo, hi, tol):
    """
    Golden-section search for the maximiser of f on [lo, hi].

    Returns:
        Tuple (x, f(x)) at the midpoint of the final bracket
    """
    lo, hi = min(lo, hi), max(lo, hi)
    width = hi - lo
    if width > tol:
        steps = int(math.ceil(math.log(tol / width) / math.log(INV_PHI)))
        c = lo + INV_PHI_SQUARE * width
        d = lo + INV_PHI * width
        fc = f(c)
        fd = f(d)
        for _ in range(steps - 1):
            if fc > fd:
                hi, d, fd = d, c, fc
                width *= INV_PHI
                c = lo + INV_PHI_SQUARE * width
                fc = f(c)
            else:
                lo, c, fc = c, d, fd
                width *= INV_PHI
                d = lo + INV_PHI * width
                fd = f(d)
        if fc > fd:
            hi = d
        else:
            lo = c
    x = 0.5 * (lo + hi)
    return x, f(x)


def _local_maxima(values):
    padded = np.concatenate(([-np.inf], values, [-np.inf]))
    rising = padded[1:-1] > padded[:-2]
    holding = padded[1:-1] >= padded[2:]
    return np.flatnonzero(rising & holding)


def tangent_bound(params, grid_points=config.TANGENT_GRID_POINTS, theta_tol=config.TANGENT_THETA_TOL):
    """
    Best genie on the useful boundary when the low-interference condition fails.

    Maximises sigma over the boundary angle with a coarse grid scan followed
    by golden-section refinement around the best grid point. Ties go to the
    smallest angle.

    Raises:
        UnsupportedConfigurationError: asymmetric channel
        PreconditionError: h = 0 or the low-interference condition holds

    Returns:
        TangentBound
    """
    _require_symmetric(params)
    if params.h == 0.0 or symmetric_condition(params.p, params.h):
        raise PreconditionError(f"tangent bound needs |h + h^3 P| > 0.5, got {params}")

    a2 = _a_squared(params)
    lo, hi = feasible_theta_interval(params)
    thetas = np.linspace(lo, hi, grid_points)
    sigmas = boundary_sigma(params, thetas)

    best = int(np.argmax(sigmas))
    peaks = [int(i) for i in _local_maxima(sigmas) if sigmas[i] >= sigmas[best] - config.LOCAL_MAX_TOL]
    if len(peaks) > 1:
        logger.warning("sigma has %d near-equal local maxima for %s", len(peaks), params)

    def sigma_at(theta):
        return float(boundary_sigma(params, [theta])[0])

    bracket_lo = thetas[max(best - 1, 0)]
    bracket_hi = thetas[min(best + 1, grid_points - 1)]
    theta, sigma = golden_section_max(sigma_at, bracket_lo, bracket_hi, theta_tol)
    if sigma < sigmas[best]:
        theta, sigma = float(thetas[best]), float(sigmas[best])
    logger.debug("tangent search %s: grid theta=%.12g refined theta=%.15g sigma=%.15g",
                 params, thetas[best], theta, sigma)

    point = PolarGenie(useful_boundary(params, theta), theta)
    slope = -math.sqrt(sigma * sigma / (a2 - sigma * sigma))
    rate = sum_rate_from_sigma(params, sigma)
    if abs(rate - tangent_rate_from_slope(params, slope)) > config.ORDER_TOL:
        raise InternalConsistencyError(f"tangent bound forms disagree for {params}")

    return TangentBound(
        rate=rate,
        sigma=sigma,
        slope=slope,
        point=point,
        local_maxima=tuple(float(thetas[i]) for i in peaks),
    )
