"""
MonteCarlo - Seeded sampling oracle for the channel and genie laws

Generator: numpy PCG64 seeded with the 64-bit seed, drawing a (n, 6) block of
uniforms row by row. Gaussian transform: Box-Muller on consecutive uniform
pairs (u1, u2) with u1 replaced by 1 - u1 to avoid log(0):

    g_cos = sqrt(-2 ln u1) cos(2 pi u2),  g_sin = sqrt(-2 ln u1) sin(2 pi u2)

The six standard normals of a row are (X1, X2, Z1, Z2, U1, U2) before scaling.
Given (seed, n) a batch is reproduced bit-exactly.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from sumcap import config
from sumcap.errors import DegenerateBatchError, DegenerateObservationError, EmptyBatchError, InvalidParameterError
from sumcap.gaussmi import GaussianVector, _as_names, mi_det

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """
    i.i.d. rows of the channel (and genie) variables.

    Attributes:
        n: Number of rows
        seed: Generator seed
        columns: Column name -> read-only sample array
    """

    n: int
    seed: int
    columns: dict = field(repr=False)

    @property
    def names(self):
        return tuple(self.columns)

    def column(self, name):
        try:
            return self.columns[name]
        except KeyError as exc:
            raise InvalidParameterError(f"batch has no column {name!r}; have {self.names}") from exc

    def to_csv(self, path):
        """Write the batch as CSV with a header row and 17 significant digits."""
        data = np.column_stack([self.columns[name] for name in self.names])
        np.savetxt(
            path,
            data,
            fmt=f"%.{config.CSV_SIGNIFICANT_DIGITS}g",
            delimiter=",",
            header=",".join(self.names),
            comments="",
        )
        return path


class MiEstimate(NamedTuple):
    estimate: float
    stderr: float


def _standard_normals(n, seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    uniforms = rng.random((n, 6))
    u1 = 1.0 - uniforms[:, 0::2]
    u2 = uniforms[:, 1::2]
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * math.pi * u2
    normals = np.empty((n, 6))
    normals[:, 0::2] = radius * np.cos(angle)
    normals[:, 1::2] = radius * np.sin(angle)
    return normals


def sample(params, genie=None, n=100_000, seed=0):
    """
    Draw n i.i.d. rows of (X1, X2, Z1, Z2[, W1, W2], Y1, Y2[, S1, S2]).

    X_i ~ N(0, P_i), Z_i ~ N(0, 1), W_i = rho_i Z_i + sqrt(1 - rho_i^2) U_i,
    Y1 = X1 + h12 X2 + Z1, S1 = h21 (X1 + eta1 W1), mirrored for user 2.

    Raises:
        EmptyBatchError: n < 1
    """
    if n < 1:
        raise EmptyBatchError(f"sample count must be at least 1, got {n}")
    normals = _standard_normals(n, seed)

    x1 = math.sqrt(params.p1) * normals[:, 0]
    x2 = math.sqrt(params.p2) * normals[:, 1]
    z1 = normals[:, 2]
    z2 = normals[:, 3]
    columns = {"X1": x1, "X2": x2, "Z1": z1, "Z2": z2}

    if genie is not None:
        columns["W1"] = genie.rho1 * z1 + math.sqrt(1.0 - genie.rho1 ** 2) * normals[:, 4]
        columns["W2"] = genie.rho2 * z2 + math.sqrt(1.0 - genie.rho2 ** 2) * normals[:, 5]

    columns["Y1"] = x1 + params.h12 * x2 + z1
    columns["Y2"] = x2 + params.h21 * x1 + z2

    if genie is not None:
        columns["S1"] = params.h21 * (x1 + genie.eta1 * columns["W1"])
        columns["S2"] = params.h12 * (x2 + genie.eta2 * columns["W2"])

    for values in columns.values():
        values.flags.writeable = False
    logger.debug("sampled %d rows (seed=%d) for %s", n, seed, params)
    return SampleBatch(n=n, seed=seed, columns=columns)


# --- Empirical Estimates ---

def empirical_joint(batch, names, rows=slice(None)):
    """Empirical GaussianVector of the selected columns."""
    names = _as_names(names)
    data = np.column_stack([batch.column(name)[rows] for name in names])
    if data.shape[0] <= len(names):
        raise DegenerateBatchError(f"{data.shape[0]} rows cannot estimate a {len(names)}-dimensional covariance")
    cov = np.atleast_2d(np.cov(data, rowvar=False))
    return GaussianVector(names, 0.5 * (cov + cov.T))


def empirical_mi(batch, target, observed, folds=config.MC_FOLDS):
    """
    Plug-in Gaussian mutual information from the empirical covariance.

    The standard error comes from splitting the batch into contiguous folds.

    Returns:
        MiEstimate(estimate, stderr) in bits
    """
    target = _as_names(target)
    observed = _as_names(observed)
    names = target + observed
    if batch.n < folds * (len(names) + 1):
        raise DegenerateBatchError(f"batch of {batch.n} rows is too small for {folds} folds")

    try:
        estimate = mi_det(empirical_joint(batch, names), target, observed)
        per_fold = [
            mi_det(empirical_joint(batch, names, rows=chunk), target, observed)
            for chunk in np.array_split(np.arange(batch.n), folds)
        ]
    except DegenerateObservationError as exc:
        raise DegenerateBatchError(f"empirical covariance of {names} is singular") from exc

    stderr = float(np.std(per_fold, ddof=1) / math.sqrt(folds))
    return MiEstimate(estimate, stderr)


def moment_zscores(batch, analytic: GaussianVector):
    """
    Standardised deviations of every empirical covariance entry from the
    analytic one, using Var(s_ij) = (c_ii c_jj + c_ij^2) / n.

    Returns:
        Dict (name_i, name_j) -> z-score over the names both objects share
    """
    names = tuple(name for name in analytic.names if name in batch.columns)
    empirical = empirical_joint(batch, names)
    exact = analytic.block(names)
    scores = {}
    for i, a in enumerate(names):
        for j in range(i, len(names)):
            variance = (exact[i, i] * exact[j, j] + exact[i, j] ** 2) / batch.n
            scores[(a, names[j])] = float((empirical.cov[i, j] - exact[i, j]) / math.sqrt(variance))
    return scores
