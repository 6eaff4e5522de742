"""
GaussMI - Mutual information of jointly Gaussian variables

Two independent evaluation paths:
- determinant path: 1/2 log det(Sigma_obs) / det(Sigma_obs | target)
- MMSE path: the best unit-sum linear combiner of noisy observations of a
  common Gaussian signal, I = 1/2 log(1 + P / sigma^2)

All information quantities are returned in bits.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from sumcap import config
from sumcap.channel import ChannelParams
from sumcap.errors import (
    DegenerateObservationError,
    InternalConsistencyError,
    InvalidCertificateError,
    InvalidParameterError,
    PreconditionError,
)
from sumcap.regime import GenieSpec

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)
LOG_2PIE = math.log(2.0 * math.pi * math.e)

Names = Union[str, Sequence[str]]


def _as_names(names):
    if isinstance(names, str):
        return (names,)
    return tuple(names)


# --- Domain Types ---

@dataclass(frozen=True, eq=False)
class GaussianVector:
    """
    Zero-mean jointly Gaussian vector with named coordinates.

    Attributes:
        names: Ordered, unique coordinate labels
        cov: Symmetric positive-semidefinite covariance matrix
    """

    names: tuple
    cov: np.ndarray = field(repr=False)

    def __post_init__(self):
        names = tuple(self.names)
        cov = np.array(self.cov, dtype=float)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "cov", cov)

        if len(set(names)) != len(names):
            raise InvalidParameterError(f"coordinate names must be unique: {names}")
        if cov.shape != (len(names), len(names)):
            raise InvalidParameterError(f"covariance shape {cov.shape} does not match {len(names)} names")

        scale = max(1.0, float(np.max(np.abs(cov)))) if cov.size else 1.0
        if np.max(np.abs(cov - cov.T), initial=0.0) > config.SYMMETRY_TOL * scale:
            raise InternalConsistencyError("covariance is not symmetric")
        if cov.size and np.linalg.eigvalsh(cov).min() < config.PSD_EIG_TOL * scale:
            raise InternalConsistencyError("covariance is not positive semidefinite")

    def index(self, names):
        try:
            return [self.names.index(name) for name in _as_names(names)]
        except ValueError as exc:
            raise InvalidParameterError(f"unknown coordinate in {names!r}; have {self.names}") from exc

    def block(self, rows, cols=None):
        """Covariance sub-matrix between two groups of coordinates."""
        r = self.index(rows)
        c = r if cols is None else self.index(cols)
        return self.cov[np.ix_(r, c)]

    def variance(self, name):
        return float(self.block(name)[0, 0])

    def covariance(self, a, b):
        return float(self.block(a, b)[0, 0])


@dataclass(frozen=True, eq=False)
class NoisyObservationSet:
    """
    Observations E_i = X + N_i, i = 1..m, of a zero-mean Gaussian signal X.

    Attributes:
        signal_variance: Variance of X
        noise_cov: m x m covariance of the additive noises N_i
    """

    signal_variance: float
    noise_cov: np.ndarray = field(repr=False)

    def __post_init__(self):
        noise_cov = np.atleast_2d(np.array(self.noise_cov, dtype=float))
        object.__setattr__(self, "noise_cov", noise_cov)
        m = noise_cov.shape[0]
        if m < 1 or noise_cov.shape != (m, m):
            raise InvalidParameterError(f"noise covariance must be square with m >= 1, got {noise_cov.shape}")
        if not self.signal_variance > 0:
            raise InvalidParameterError(f"signal variance must be positive, got {self.signal_variance!r}")
        scale = max(1.0, float(np.max(np.abs(noise_cov))))
        if np.linalg.eigvalsh(0.5 * (noise_cov + noise_cov.T)).min() < config.PSD_EIG_TOL * scale:
            raise InvalidParameterError("noise covariance is not positive semidefinite")

    @property
    def m(self):
        return self.noise_cov.shape[0]

    def joint(self):
        """Joint law of (X, E1, ..., Em)."""
        p = float(self.signal_variance)
        ones = np.ones(self.m)
        cov = np.empty((self.m + 1, self.m + 1))
        cov[0, 0] = p
        cov[0, 1:] = cov[1:, 0] = p * ones
        cov[1:, 1:] = p * np.outer(ones, ones) + self.noise_cov
        names = ("X",) + tuple(f"E{i + 1}" for i in range(self.m))
        return GaussianVector(names, cov)


class EntropyComparison(NamedTuple):
    formula: float
    covariance: float

    @property
    def discrepancy(self):
        return abs(self.formula - self.covariance)


# --- Joint Assembly ---

def assemble_joint(params: ChannelParams, genie: Optional[GenieSpec] = None, with_noise=False):
    """
    Joint law of (X1, X2, Y1, Y2[, S1, S2]) under Gaussian inputs.

    The vector is built as a linear map of the independent sources
    (X1, X2, Z1, Z2, U1, U2) with W_i = rho_i Z_i + sqrt(1 - rho_i^2) U_i.

    Args:
        params: Channel parameters
        genie: Side-information parameters, or None for the plain channel
        with_noise: Also expose Z1, Z2 (and W1, W2 when a genie is given)

    Returns:
        GaussianVector
    """
    # source order: X1, X2, Z1, Z2, U1, U2
    source_var = np.array([params.p1, params.p2, 1.0, 1.0, 1.0, 1.0])
    rows = {
        "X1": [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        "X2": [0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        "Y1": [1.0, params.h12, 1.0, 0.0, 0.0, 0.0],
        "Y2": [params.h21, 1.0, 0.0, 1.0, 0.0, 0.0],
    }
    if genie is not None:
        w1 = np.array([0.0, 0.0, genie.rho1, 0.0, math.sqrt(1.0 - genie.rho1 ** 2), 0.0])
        w2 = np.array([0.0, 0.0, 0.0, genie.rho2, 0.0, math.sqrt(1.0 - genie.rho2 ** 2)])
        rows["S1"] = params.h21 * (np.array(rows["X1"]) + genie.eta1 * w1)
        rows["S2"] = params.h12 * (np.array(rows["X2"]) + genie.eta2 * w2)
    if with_noise:
        rows["Z1"] = [0.0, 0.0, 1.0, 0.0, 0.0, 0.0]
        rows["Z2"] = [0.0, 0.0, 0.0, 1.0, 0.0, 0.0]
        if genie is not None:
            rows["W1"] = w1
            rows["W2"] = w2

    loading = np.array([np.asarray(row, dtype=float) for row in rows.values()])
    cov = (loading * source_var) @ loading.T
    return GaussianVector(tuple(rows), 0.5 * (cov + cov.T))


def normalized_observations(params, genie, receiver=1):
    """
    Receiver-side observations of X_i as a NoisyObservationSet: the output
    Y_i and the side information divided by its cross-gain.
    """
    if receiver == 1:
        signal, gain, eta, rho = params.p1, params.h21, genie.eta1, genie.rho1
    elif receiver == 2:
        signal, gain, eta, rho = params.p2, params.h12, genie.eta2, genie.rho2
    else:
        raise InvalidParameterError(f"receiver must be 1 or 2, got {receiver!r}")
    if gain == 0.0:
        raise PreconditionError(f"side information at receiver {receiver} vanishes for a zero cross-gain")
    noise = params.interference_plus_noise(receiver)
    noise_cov = np.array([[noise, eta * rho], [eta * rho, eta * eta]])
    return NoisyObservationSet(signal, noise_cov)


# --- Determinant Path ---

def _normalized_logdet(matrix, scale):
    sign, logdet = np.linalg.slogdet(matrix / np.outer(scale, scale))
    return sign, logdet


def mi_det(joint: GaussianVector, target: Names, observed: Names):
    """
    I(target; observed) from Gaussian entropy determinants.

    Computed as 1/2 log2(det Sigma_obs / det Sigma_obs|target) with the
    conditional covariance taken as a Schur complement. The observation block
    is normalised to unit diagonal before any determinant is taken, so the
    result is invariant to rescaling an observed coordinate.

    Raises:
        PreconditionError: target and observed overlap
        DegenerateObservationError: observation covariance singular or
            ill-conditioned, or the target is recovered exactly
    """
    target = _as_names(target)
    observed = _as_names(observed)
    if not observed:
        return 0.0
    if set(target) & set(observed):
        raise PreconditionError(f"target {target} overlaps observed {observed}")

    s_oo = joint.block(observed)
    s_ot = joint.block(observed, target)
    s_tt = joint.block(target)

    scale = np.sqrt(np.diag(s_oo))
    if np.any(scale <= 0):
        raise DegenerateObservationError(f"zero-variance observation among {observed}")
    corr = s_oo / np.outer(scale, scale)
    if np.linalg.cond(corr) > config.MAX_CONDITION:
        raise DegenerateObservationError(f"observation covariance of {observed} is ill-conditioned")

    try:
        conditional = s_oo - s_ot @ np.linalg.solve(s_tt, s_ot.T)
    except np.linalg.LinAlgError as exc:
        raise DegenerateObservationError(f"singular target covariance for {target}") from exc

    sign_obs, logdet_obs = _normalized_logdet(s_oo, scale)
    sign_cond, logdet_cond = _normalized_logdet(conditional, scale)
    if sign_obs <= 0 or sign_cond <= 0:
        raise DegenerateObservationError(f"{observed} determine {target} exactly; information is unbounded")

    return max(0.0, 0.5 * (logdet_obs - logdet_cond) / LN2)


def cond_entropy(joint: GaussianVector, target: Names, given: Names = ()):
    """Differential entropy h(target | given) in bits."""
    target = _as_names(target)
    given = _as_names(given)
    s_tt = joint.block(target)
    if given:
        s_tg = joint.block(target, given)
        try:
            s_tt = s_tt - s_tg @ np.linalg.solve(joint.block(given), s_tg.T)
        except np.linalg.LinAlgError as exc:
            raise DegenerateObservationError(f"singular conditioning block {given}") from exc
    sign, logdet = np.linalg.slogdet(s_tt)
    if sign <= 0:
        raise DegenerateObservationError(f"{target} is degenerate given {given}")
    return 0.5 * (len(target) * LOG_2PIE + logdet) / LN2


# --- MMSE Path ---

def mmse_combiner(obs: NoisyObservationSet):
    """
    Minimise E[(b^T E - X)^2] = b^T K b subject to sum(b) = 1.

    Solves the KKT system [[2K, -1], [1^T, 0]] [b; lam] = [0; 1] once.

    Returns:
        Tuple (b, sigma2)
    """
    m = obs.m
    scale = float(np.trace(obs.noise_cov)) / m
    if scale <= 0:
        raise DegenerateObservationError("noise covariance is identically zero")
    k = obs.noise_cov / scale

    kkt = np.zeros((m + 1, m + 1))
    kkt[:m, :m] = 2.0 * k
    kkt[:m, m] = -1.0
    kkt[m, :m] = 1.0
    rhs = np.zeros(m + 1)
    rhs[m] = 1.0

    if np.linalg.cond(kkt) > config.MAX_CONDITION:
        raise DegenerateObservationError("constraint system is singular")
    solution = np.linalg.solve(kkt, rhs)
    b = solution[:m]
    sigma2 = float(b @ k @ b) * scale
    if sigma2 <= 0:
        raise DegenerateObservationError("observations recover the signal exactly")
    return b, sigma2


def mi_mmse(obs: NoisyObservationSet):
    """I(X; E) = 1/2 log2(1 + P / sigma^2) with sigma^2 the unit-sum MMSE."""
    _, sigma2 = mmse_combiner(obs)
    return 0.5 * math.log2(1.0 + obs.signal_variance / sigma2)


def mi_fixed_combiner(obs: NoisyObservationSet, b):
    """I(X; b^T E) for a fixed, not necessarily optimal, combiner."""
    b = np.asarray(b, dtype=float)
    peak = float(np.max(np.abs(b))) if b.size else 0.0
    if peak == 0.0:
        return 0.0
    # I(X; b^T E) is scale invariant
    b = b / peak
    gain = float(b.sum())
    noise = float(b @ obs.noise_cov @ b)
    if gain == 0.0:
        return 0.0
    if noise <= 0:
        raise DegenerateObservationError("combiner cancels every noise component")
    return 0.5 * math.log2(1.0 + obs.signal_variance * gain * gain / noise)


# --- Channel Quantities ---

def _receiver_names(receiver):
    if receiver == 1:
        return "X1", "Y1", "S1"
    if receiver == 2:
        return "X2", "Y2", "S2"
    raise InvalidParameterError(f"receiver must be 1 or 2, got {receiver!r}")


def _side_gain(params, receiver):
    return params.h21 if receiver == 1 else params.h12


def cond_mi_smartcheck(params, genie, receiver=1):
    """
    I(X_i; S_i | Y_i) = I(X_i; Y_i, S_i) - I(X_i; Y_i) under Gaussian inputs.
    Zero exactly when the genie is smart at that receiver.
    """
    x, y, s = _receiver_names(receiver)
    if _side_gain(params, receiver) == 0.0:
        raise PreconditionError(f"side information at receiver {receiver} vanishes for a zero cross-gain")
    joint = assemble_joint(params, genie)
    # separately clamped terms can differ by rounding below zero
    return max(0.0, mi_det(joint, x, (y, s)) - mi_det(joint, x, y))


def genie_aided_sum_rate(params, genie):
    """
    Genie-aided upper bound I(X1; Y1, S1) + I(X2; Y2, S2).

    Side information that vanishes with a zero cross-gain is dropped from the
    observations.

    Raises:
        InvalidCertificateError: the genie is not useful, so the value is not
            a proven upper bound
    """
    if not genie.is_useful(params):
        raise InvalidCertificateError(f"genie {genie} is not useful for {params}")
    joint = assemble_joint(params, genie)
    total = 0.0
    for receiver in (1, 2):
        x, y, s = _receiver_names(receiver)
        observed = (y, s) if _side_gain(params, receiver) != 0.0 else (y,)
        total += mi_det(joint, x, observed)
    return total


def cond_entropy_formula(params, genie, receiver=1):
    """
    h(Y_i | S_i) in bits by the closed form

        1/2 log2[2 pi e (1 - rho1^2 + h12^2 P2 + P1 (rho1 - eta1)^2 / (P1 + eta1^2))]

    (mirrored for receiver 2) alongside the covariance-path value.

    Returns:
        EntropyComparison(formula, covariance)
    """
    x, y, s = _receiver_names(receiver)
    if _side_gain(params, receiver) == 0.0:
        raise PreconditionError(f"side information at receiver {receiver} vanishes for a zero cross-gain")
    if receiver == 1:
        p_own, p_other, h, eta, rho = params.p1, params.p2, params.h12, genie.eta1, genie.rho1
    else:
        p_own, p_other, h, eta, rho = params.p2, params.p1, params.h21, genie.eta2, genie.rho2

    variance = 1.0 - rho * rho + h * h * p_other + p_own * (rho - eta) ** 2 / (p_own + eta * eta)
    formula = 0.5 * (LOG_2PIE + math.log(variance)) / LN2
    covariance = cond_entropy(assemble_joint(params, genie), y, s)
    comparison = EntropyComparison(formula, covariance)
    if comparison.discrepancy > 1e-9:
        logger.warning("closed-form h(%s|%s) differs from covariance path by %.3g bits", y, s, comparison.discrepancy)
    return comparison
