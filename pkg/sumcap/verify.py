"""
Verify - Cross-oracle invariant suites behind the `verify` command

Each suite draws its instances from a seeded numpy generator, checks one
family of invariants and returns a SuiteResult. Exceptions raised by the
library while evaluating an instance count as failures of that instance.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from sumcap import bounds, config, gaussmi, geometry, montecarlo, regime
from sumcap.channel import ChannelParams, make_symmetric
from sumcap.errors import SumCapError
from sumcap.regime import GenieSpec

logger = logging.getLogger(__name__)


@dataclass
class SuiteResult:
    """
    Outcome of one invariant suite.

    Attributes:
        name: Suite name
        checked: Number of instances evaluated
        failures: Number of failing instances
        worst_residual: Largest residual seen (bits unless stated by the suite)
        first_failure: Description of the first failing instance, if any
    """

    name: str
    checked: int = 0
    failures: int = 0
    worst_residual: float = 0.0
    first_failure: Optional[str] = field(default=None)

    @property
    def passed(self):
        return self.failures == 0

    def record(self, ok, residual, instance):
        self.checked += 1
        if math.isfinite(residual):
            self.worst_residual = max(self.worst_residual, residual)
        if not ok:
            self.failures += 1
            if self.first_failure is None:
                self.first_failure = instance
                logger.info("%s: first failure at %s (residual %.3g)", self.name, instance, residual)

    def record_error(self, exc, instance):
        self.record(False, math.inf, f"{instance} raised {type(exc).__name__}: {exc}")


# --- Random Draws ---

def _log_uniform(rng, lo, hi):
    return float(10.0 ** rng.uniform(math.log10(lo), math.log10(hi)))


def draw_power(rng):
    """Power log-uniform on [0.1, 100]."""
    return _log_uniform(rng, 0.1, 100.0)


def draw_in_regime_symmetric(rng):
    """Symmetric channel with h uniform on (-h*, h*)."""
    p = draw_power(rng)
    h_star = regime.threshold_gain(p)
    h = float(rng.uniform(-h_star, h_star))
    return make_symmetric(p, h)


def _signed_gain(rng, lo=1e-3, hi=2.0):
    return float(rng.choice((-1.0, 1.0))) * _log_uniform(rng, lo, hi)


def draw_asymmetric(rng):
    """Asymmetric channel with log-uniform powers and signed log-uniform gains."""
    return ChannelParams(draw_power(rng), draw_power(rng), _signed_gain(rng), _signed_gain(rng))


def draw_in_regime_asymmetric(rng, max_tries=1000):
    for _ in range(max_tries):
        params = draw_asymmetric(rng)
        if regime.asym_condition(params):
            return params
    raise RuntimeError("no in-regime asymmetric draw found")


def draw_useful_genie(rng, params):
    """Random useful genie: rho_i uniform on [0, 0.99], eta_i up to the useful limit."""
    rho1, rho2 = (float(r) for r in rng.uniform(0.0, 0.99, size=2))
    eta1 = (1.0 - rng.random()) * math.sqrt(1.0 - rho2 * rho2) / abs(params.h21)
    eta2 = (1.0 - rng.random()) * math.sqrt(1.0 - rho1 * rho1) / abs(params.h12)
    return GenieSpec(float(eta1), rho1, float(eta2), rho2)


def draw_observation_set(rng, max_m=4):
    m = int(rng.integers(1, max_m + 1))
    loading = rng.normal(size=(m, m))
    noise_cov = loading @ loading.T + 0.1 * np.eye(m)
    return gaussmi.NoisyObservationSet(draw_power(rng), noise_cov)


# --- Suites ---

def _grid_feasibility_tables(points):
    grid = np.linspace(0.0, 1.0, points)
    rho1, rho2 = np.meshgrid(grid, grid, indexing="ij")
    # right-hand sides rho2 sqrt(1 - rho1^2) and rho1 sqrt(1 - rho2^2)
    return rho2 * np.sqrt(1.0 - rho1 ** 2), rho1 * np.sqrt(1.0 - rho2 ** 2)


def regime_equivalence_suite(rng, draws, grid_points=config.VERIFY_DEFAULTS["brute_force_grid"], margin=0.005):
    """
    find_rhos succeeds iff the asymmetric condition holds, its output meets
    both correlation inequalities, and a brute-force grid over (rho1, rho2)
    agrees with the condition. Draws within `margin` below the threshold are
    left out of the grid comparison, since a finite grid cannot resolve them.
    """
    result = SuiteResult("regime_equivalence")
    first_rhs, second_rhs = _grid_feasibility_tables(grid_points)
    for _ in range(draws):
        params = draw_asymmetric(rng)
        try:
            a, b = regime.cross_terms(params)
            holds = regime.asym_condition(params)
            rhos = regime.find_rhos(params)
            ok = (rhos is not None) == holds
            residual = 0.0
            if rhos is not None:
                residual = max(
                    a - rhos.rho2 * math.sqrt(1.0 - rhos.rho1 ** 2),
                    b - rhos.rho1 * math.sqrt(1.0 - rhos.rho2 ** 2),
                    0.0,
                )
                ok = ok and residual <= config.USEFUL_SLACK

            total = a + b
            if total > 1.0 + 1e-9 or total <= 1.0 - margin:
                grid_feasible = bool(np.any((first_rhs >= a) & (second_rhs >= b)))
                ok = ok and grid_feasible == holds
            result.record(ok, residual, repr(params))
        except SumCapError as exc:
            result.record_error(exc, repr(params))
    return result


def certificate_suite(rng, trials):
    """
    Constructed genies are useful and smart, their genie-aided bound equals
    the TIN sum rate, and symmetric channels get symmetric genies. Half the
    draws are symmetric, half asymmetric.
    """
    result = SuiteResult("certificate")
    for trial in range(trials):
        params = draw_in_regime_symmetric(rng) if trial % 2 == 0 else draw_in_regime_asymmetric(rng)
        try:
            genie = regime.construct_genie(params)
            if genie is None:
                result.record(False, math.inf, f"{params!r}: no genie constructed")
                continue
            ok = genie.is_useful(params) and genie.is_smart(params)
            if params.symmetric:
                ok = ok and genie.is_symmetric and regime.symmetric_condition(params.p, params.h) == regime.asym_condition(params)
            residual = abs(gaussmi.genie_aided_sum_rate(params, genie) - bounds.tin_sum_rate(params))
            result.record(ok and residual <= config.ORDER_TOL, residual, f"{params!r} with {genie!r}")
        except SumCapError as exc:
            result.record_error(exc, repr(params))
    return result


def smart_suite(rng, trials, perturbation=1.1, floor=1e-6):
    """
    I(X1; S1 | Y1) vanishes under the smart genie and exceeds `floor` once
    eta1 is scaled by `perturbation`. The chain rule is checked on the way.
    """
    result = SuiteResult("smart_genie")
    for _ in range(trials):
        params = draw_in_regime_symmetric(rng)
        try:
            genie = regime.construct_genie(params)
            smart = gaussmi.cond_mi_smartcheck(params, genie)
            perturbed = GenieSpec(genie.eta1 * perturbation, genie.rho1, genie.eta2, genie.rho2)
            leak = gaussmi.cond_mi_smartcheck(params, perturbed)

            joint = gaussmi.assemble_joint(params, genie)
            chain = abs(gaussmi.mi_det(joint, "X1", ("Y1", "S1")) - gaussmi.mi_det(joint, "X1", "Y1") - smart)

            ok = smart <= config.ORDER_TOL and leak >= floor and chain <= 1e-12
            result.record(ok, max(smart, chain), f"{params!r} with {genie!r} (perturbed leak {leak:.3g})")
        except SumCapError as exc:
            result.record_error(exc, repr(params))
    return result


def two_path_suite(rng, trials):
    """
    Determinant and MMSE paths agree on random observation sets and on
    channel observations (Y_i, S_i / h) under random useful genies.
    """
    result = SuiteResult("two_path_mi")
    for trial in range(trials):
        instance = f"trial {trial}"
        try:
            if trial % 2 == 0:
                obs = draw_observation_set(rng)
                instance = f"NoisyObservationSet(P={obs.signal_variance!r}, K={obs.noise_cov.tolist()!r})"
                joint = obs.joint()
                target, observed = "X", joint.names[1:]
            else:
                params = ChannelParams(draw_power(rng), draw_power(rng), _signed_gain(rng, 0.01), _signed_gain(rng, 0.01))
                genie = draw_useful_genie(rng, params)
                instance = f"{params!r} with {genie!r}"
                obs = gaussmi.normalized_observations(params, genie, receiver=1)
                joint = gaussmi.assemble_joint(params, genie)
                target, observed = "X1", ("Y1", "S1")
            residual = abs(gaussmi.mi_det(joint, target, observed) - gaussmi.mi_mmse(obs))
            result.record(residual <= config.ORDER_TOL, residual, instance)
        except SumCapError as exc:
            result.record_error(exc, instance)
    return result


def onebit_recovery_suite(gains=(0.3, 0.5, 0.8, 1.0), p=10.0):
    """
    The boundary genie (eta = 1/h, rho = 0) reproduces the One-Bit bound by
    both the line distance and the genie-aided bound, and the tangent bound
    never exceeds it.
    """
    result = SuiteResult("onebit_recovery")
    for h in gains:
        params = make_symmetric(p, h)
        try:
            onebit = bounds.onebit_upper(params)
            sigma = geometry.sigma_line(params, geometry.PolarGenie(1.0 / h, math.pi / 2))
            by_line = abs(geometry.sum_rate_from_sigma(params, sigma) - onebit)
            by_genie = abs(gaussmi.genie_aided_sum_rate(params, GenieSpec.symmetric(1.0 / h, 0.0)) - onebit)
            excess = max(geometry.tangent_bound(params).rate - onebit, 0.0)
            residual = max(by_line, by_genie, excess)
            result.record(residual <= config.ORDER_TOL, residual, repr(params))
        except SumCapError as exc:
            result.record_error(exc, repr(params))
    return result


def tangent_suite(p=10.0, h=0.5, oracle_points=config.VERIFY_DEFAULTS["tangent_oracle_points"], genie_samples=64):
    """
    The refined tangent matches a dense brute-force scan, its two rate forms
    agree, and no sampled boundary genie beats it.
    """
    result = SuiteResult("tangent_optimizer")
    params = make_symmetric(p, h)
    try:
        found = geometry.tangent_bound(params)
        lo, hi = geometry.feasible_theta_interval(params)
        oracle_sigma = float(np.max(geometry.boundary_sigma(params, np.linspace(lo, hi, oracle_points))))
        oracle = geometry.sum_rate_from_sigma(params, oracle_sigma)
        residual = abs(found.rate - oracle)
        result.record(residual <= 1e-8, residual, f"{params!r} brute-force scan")

        slope_form = geometry.tangent_rate_from_slope(params, found.slope)
        residual = abs(found.rate - slope_form)
        result.record(residual <= 1e-12, residual, f"{params!r} slope form")

        for theta in np.linspace(lo, hi, genie_samples + 2)[1:-1]:
            genie = geometry.boundary_genie(params, float(theta))
            excess = max(found.rate - gaussmi.genie_aided_sum_rate(params, genie), 0.0)
            result.record(excess <= config.ORDER_TOL, excess, f"{params!r} boundary genie at theta={theta!r}")
    except SumCapError as exc:
        result.record_error(exc, repr(params))
    return result


def reduction_suite(powers=(1.0, 10.0, 100.0), gains=(0.0, 0.05, 0.1, 0.25, 0.28, 0.5, 1.0, 2.0)):
    """
    Symmetric parameters reproduce the symmetric condition and value exactly;
    a zero h21 reproduces the Z-channel value exactly.
    """
    result = SuiteResult("asymmetric_reductions")
    for p in powers:
        for h in gains + tuple(-g for g in gains if g):
            params = make_symmetric(p, h)
            try:
                closed_form = math.log2(1.0 + p / (1.0 + h * h * p))
                same_condition = regime.asym_condition(params) == regime.symmetric_condition(p, h)
                same_value = bounds.tin_sum_rate(params) == closed_form
                one_sided = ChannelParams(p, p, h, 0.0)
                same_z = bounds.tin_sum_rate(one_sided) == bounds.kramer_upper(params)
                ok = same_condition and same_value and same_z
                residual = abs(bounds.tin_sum_rate(one_sided) - bounds.kramer_upper(params))
                result.record(ok, residual, repr(params))
            except SumCapError as exc:
                result.record_error(exc, repr(params))
    return result


def ordering_suite(powers=(1.0, 10.0, 100.0), h_max=2.0, h_step=0.01):
    """
    Every present lower bound stays below every present upper bound, and
    inside the regime the constructed genie closes the gap.
    """
    result = SuiteResult("bound_ordering")
    steps = int(math.floor(h_max / h_step + 1e-9)) + 1
    for p in powers:
        for k in range(steps):
            params = make_symmetric(p, round(k * h_step, 12))
            try:
                bound_set = bounds.all_bounds(params)
                violations = bounds.ordering_violations(bound_set)
                residual = max((excess for _, _, excess in violations), default=0.0)
                ok = not violations
                if bound_set.regime.exact:
                    ok = ok and bound_set.exact_capacity == bound_set.tin_lower
                    gap = min(bound_set.present(bounds.UPPER_FIELDS).values()) - bound_set.tin_lower
                    ok = ok and gap <= config.ORDER_TOL
                    residual = max(residual, abs(gap))
                result.record(ok, residual, repr(params))
            except SumCapError as exc:
                result.record_error(exc, repr(params))
    return result


def montecarlo_suite(seed, n, band=config.VERIFY_DEFAULTS["mc_sigma_band"],
                     moment_band=config.VERIFY_DEFAULTS["moment_sigma_band"]):
    """
    Empirical mutual informations sit within `band` standard errors of their
    analytic values and every empirical covariance entry within `moment_band`.
    Residuals are reported in standard errors.
    """
    result = SuiteResult("monte_carlo")
    in_regime = make_symmetric(10.0, 0.25)
    genie = regime.construct_genie(in_regime)
    cases = (
        (make_symmetric(10.0, 0.0), None, "X1", ("Y1",)),
        (in_regime, None, "X1", ("Y1",)),
        (in_regime, genie, "X1", ("Y1", "S1")),
        (ChannelParams(10.0, 10.0, 0.2, 0.1), regime.construct_genie(ChannelParams(10.0, 10.0, 0.2, 0.1)), "X2", ("Y2", "S2")),
    )
    for offset, (params, case_genie, target, observed) in enumerate(cases):
        instance = f"{params!r} with {case_genie!r}, I({target}; {', '.join(observed)}), seed={seed + offset}"
        try:
            batch = montecarlo.sample(params, case_genie, n=n, seed=seed + offset)
            analytic_joint = gaussmi.assemble_joint(params, case_genie, with_noise=True)
            analytic = gaussmi.mi_det(analytic_joint, target, observed)
            estimate = montecarlo.empirical_mi(batch, target, observed)
            z = abs(estimate.estimate - analytic) / estimate.stderr
            result.record(z <= band, z, instance)

            worst_moment = max(abs(score) for score in montecarlo.moment_zscores(batch, analytic_joint).values())
            result.record(worst_moment <= moment_band, worst_moment, f"{instance} covariance moments")
        except SumCapError as exc:
            result.record_error(exc, instance)
    return result


# --- Runner ---

def run_all(seed=config.VERIFY_DEFAULTS["seed"], trials=config.VERIFY_DEFAULTS["trials"],
            mc_samples=config.VERIFY_DEFAULTS["mc_samples"]):
    """
    Run every suite with a single seeded generator.

    Returns:
        List of SuiteResult in execution order
    """
    rng = np.random.default_rng(seed)
    draws = trials * config.VERIFY_DEFAULTS["regime_draws_per_trial"]
    results = [
        regime_equivalence_suite(rng, draws),
        certificate_suite(rng, trials),
        smart_suite(rng, trials),
        two_path_suite(rng, trials),
        onebit_recovery_suite(),
        tangent_suite(),
        reduction_suite(),
        ordering_suite(),
        montecarlo_suite(seed, mc_samples),
    ]
    for suite in results:
        logger.info("%s: %d checked, %d failed, worst residual %.3g",
                    suite.name, suite.checked, suite.failures, suite.worst_residual)
    return results
