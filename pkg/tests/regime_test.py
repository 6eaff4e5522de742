"""
Regime Tests - Automated test cases for the low-interference condition and genie construction
Maps to Verification Cases: VC-005, VC-006, VC-007

Tests cover:
- Symmetric and asymmetric conditions
- Correlation choice and its feasibility
- Useful-and-smart genie construction
- Regime classification
"""

import math

import pytest

from sumcap import regime
from sumcap.channel import ChannelParams, make_symmetric
from sumcap.errors import InvalidParameterError
from sumcap.regime import GenieSpec, RegimeKind


class TestConditions:
    """
    Test class for the regime conditions.

    Automation mapping:
    - test_symmetric_condition_examples -> VC-005
    - test_asym_condition_examples -> VC-005
    - test_threshold_gain -> VC-005
    """

    @pytest.mark.smoke
    @pytest.mark.regime
    @pytest.mark.parametrize("p, h, expected", [(10.0, 0.28, True), (10.0, 0.29, False), (10.0, 0.0, True), (0.5, 0.0, True)])
    def test_symmetric_condition_examples(self, p, h, expected):
        """
        Test Case: VC-005 - Symmetric condition |h + h^3 P| <= 0.5

        Expected: 0.28 -> 0.49952 (holds), 0.29 -> 0.53389 (fails), 0 -> holds
        """
        # Act & Assert
        assert regime.symmetric_condition(p, h) is expected
        assert regime.symmetric_condition(p, -h) is expected, "condition must not depend on the sign of h"

    @pytest.mark.regime
    def test_condition_values(self):
        """
        Test Case: VC-005 - Condition values

        Expected: 0.49952 at h=0.28 and 0.53389 at h=0.29 for P=10
        """
        # Act & Assert
        assert regime.condition_value(make_symmetric(10.0, 0.28)) == pytest.approx(0.49952, abs=1e-12)
        assert regime.condition_value(make_symmetric(10.0, 0.29)) == pytest.approx(0.53389, abs=1e-12)

    @pytest.mark.smoke
    @pytest.mark.regime
    def test_asym_condition_examples(self, asym_params):
        """
        Test Case: VC-005 - Asymmetric condition

        Expected: (0.2, 0.1) holds with value 0.36, (0.5, 0.5) fails with value 3.5
        """
        # Arrange
        strong = ChannelParams(10.0, 10.0, 0.5, 0.5)

        # Act & Assert
        assert regime.asym_condition(asym_params)
        assert regime.condition_value(asym_params) == pytest.approx(0.36, abs=1e-12)
        assert not regime.asym_condition(strong)
        assert sum(regime.cross_terms(strong)) == pytest.approx(3.5, abs=1e-12)

    @pytest.mark.regression
    @pytest.mark.regime
    def test_symmetric_and_asymmetric_conditions_agree(self):
        """
        Test Case: VC-005 - The asymmetric condition reduces to the symmetric one

        Expected: identical verdicts on a grid of symmetric channels
        """
        # Arrange
        cases = [(p, k * 0.005) for p in (0.1, 1.0, 10.0, 100.0) for k in range(-200, 201)]

        # Act & Assert
        for p, h in cases:
            params = make_symmetric(p, h)
            assert regime.asym_condition(params) == regime.symmetric_condition(p, h), f"disagree at P={p}, h={h}"

    @pytest.mark.regime
    def test_threshold_gain(self):
        """
        Test Case: VC-005 - Threshold gain for P = 10

        Expected: root of 10 h^3 + h - 0.5 = 0, between 0.28 and 0.29
        """
        # Act
        h_star = regime.threshold_gain(10.0)

        # Assert
        assert 0.28 < h_star < 0.29
        assert 10.0 * h_star ** 3 + h_star == pytest.approx(0.5, abs=1e-14)
        assert regime.symmetric_condition(10.0, h_star * (1 - 1e-9))
        assert not regime.symmetric_condition(10.0, h_star * (1 + 1e-9))


class TestFindRhos:
    """
    Test class for the correlation choice.

    Automation mapping:
    - test_midpoint_choice -> VC-006
    - test_boundary_gives_equal_correlations -> VC-006
    """

    @pytest.mark.smoke
    @pytest.mark.regime
    def test_midpoint_choice(self, asym_params):
        """
        Test Case: VC-006 - Midpoint of the feasible cos^2(phi) interval

        Expected: interval [0.22, 0.86], midpoint 0.54; both inequalities hold
        """
        # Act
        rhos = regime.find_rhos(asym_params)

        # Assert
        assert rhos.rho2 == pytest.approx(math.sqrt(0.54), abs=1e-12)
        assert rhos.rho1 == pytest.approx(math.sqrt(0.46), abs=1e-12)
        assert 0.22 <= rhos.rho2 * math.sqrt(1 - rhos.rho1 ** 2)
        assert 0.14 <= rhos.rho1 * math.sqrt(1 - rhos.rho2 ** 2)

    @pytest.mark.regime
    def test_boundary_gives_equal_correlations(self):
        """
        Test Case: VC-006 - Symmetric channel at the threshold

        Expected: rho1 = rho2 = 1/sqrt(2)
        """
        # Arrange
        params = make_symmetric(10.0, regime.threshold_gain(10.0) * (1 - 1e-12))

        # Act
        rhos = regime.find_rhos(params)

        # Assert
        assert rhos.rho1 == pytest.approx(1 / math.sqrt(2), abs=1e-12)
        assert rhos.rho2 == pytest.approx(1 / math.sqrt(2), abs=1e-12)

    @pytest.mark.regime
    def test_zero_interference_midpoint(self):
        """
        Test Case: VC-006 - Zero gains

        Expected: cos^2(phi) = 0.5
        """
        # Act
        rhos = regime.find_rhos(ChannelParams(10.0, 3.0, 0.0, 0.0))

        # Assert
        assert rhos.rho2 ** 2 == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.regime
    def test_absent_outside_regime(self):
        """
        Test Case: VC-006 - Outside the regime

        Expected: None
        """
        assert regime.find_rhos(ChannelParams(10.0, 10.0, 0.5, 0.5)) is None


class TestConstructGenie:
    """
    Test class for genie construction.

    Automation mapping:
    - test_symmetric_genie_example -> VC-007
    - test_asymmetric_genie_is_certified -> VC-007
    - test_zero_gain_returns_none -> VC-007
    """

    @pytest.mark.smoke
    @pytest.mark.regime
    def test_symmetric_genie_example(self, in_regime_params):
        """
        Test Case: VC-007 - Genie for P=10, h=0.25

        Expected: rho = 1/sqrt(2), eta = 1.625 sqrt(2) ~ 2.2981, |h eta| ~ 0.5745 <= 0.7071
        """
        # Act
        genie = regime.construct_genie(in_regime_params)

        # Assert
        assert genie.is_symmetric, "symmetric channels must get symmetric genies"
        assert genie.rho1 == pytest.approx(1 / math.sqrt(2), abs=1e-15)
        assert genie.eta1 == pytest.approx(1.625 * math.sqrt(2), rel=1e-14)
        assert abs(0.25 * genie.eta1) == pytest.approx(0.5745, abs=1e-4)
        assert genie.is_useful(in_regime_params)
        assert genie.is_smart(in_regime_params)

    @pytest.mark.regime
    def test_asymmetric_genie_is_certified(self, asym_params):
        """
        Test Case: VC-007 - Genie for the asymmetric example

        Expected: useful and smart within tolerance
        """
        # Act
        genie = regime.construct_genie(asym_params)

        # Assert
        assert genie.is_useful(asym_params)
        assert genie.is_smart(asym_params)
        assert max(regime.smart_residuals(genie, asym_params)) <= 1e-12
        assert max(regime.useful_residuals(genie, asym_params)) < 0

    @pytest.mark.regime
    def test_absent_above_threshold(self):
        """
        Test Case: VC-007 - P=10, h=0.29

        Expected: None
        """
        assert regime.construct_genie(make_symmetric(10.0, 0.29)) is None

    @pytest.mark.regime
    @pytest.mark.parametrize("params", [make_symmetric(10.0, 0.0), ChannelParams(10.0, 10.0, 0.3, 0.0)])
    def test_zero_gain_returns_none(self, params):
        """
        Test Case: VC-007 - Zero cross-gain

        Expected: no genie, regime still exact
        """
        # Act
        genie = regime.construct_genie(params)

        # Assert
        assert genie is None
        assert regime.classify(params).exact
        assert regime.needs_no_genie(params)

    @pytest.mark.regression
    @pytest.mark.regime
    def test_random_in_regime_genies_are_certified(self, rng):
        """
        Test Case: VC-007 - Certification over random in-regime channels

        Expected: every constructed genie is useful and smart
        """
        for _ in range(500):
            # Arrange
            params = ChannelParams(*(10.0 ** rng.uniform(-1, 2, size=2)), *rng.uniform(-1.0, 1.0, size=2))
            if not regime.asym_condition(params):
                continue

            # Act
            genie = regime.construct_genie(params)

            # Assert
            assert genie.is_useful(params), f"not useful: {params} {genie}"
            assert genie.is_smart(params), f"not smart: {params} {genie}"


class TestGenieSpec:
    """Test class for GenieSpec validation."""

    @pytest.mark.regime
    @pytest.mark.parametrize("eta, rho", [(0.0, 0.5), (-1.0, 0.5), (1.0, -0.1), (1.0, 1.1), (math.inf, 0.5)])
    def test_rejects_invalid_fields(self, eta, rho):
        """
        Test Case: VC-007 - Invalid genie parameters

        Expected: InvalidParameterError
        """
        with pytest.raises(InvalidParameterError):
            GenieSpec.symmetric(eta, rho)


class TestClassify:
    """
    Test class for regime labels.

    Automation mapping:
    - test_labels -> VC-005
    """

    @pytest.mark.smoke
    @pytest.mark.regime
    @pytest.mark.parametrize("params, kind, value, threshold", [
        (make_symmetric(10.0, 0.25), RegimeKind.LOW_INTERFERENCE_EXACT, 0.40625, 0.5),
        (make_symmetric(10.0, 1.0), RegimeKind.ABOVE_THRESHOLD, 11.0, 0.5),
        (ChannelParams(10.0, 10.0, 0.2, 0.1), RegimeKind.LOW_INTERFERENCE_EXACT, 0.36, 1.0),
    ])
    def test_labels(self, params, kind, value, threshold):
        """
        Test Case: VC-005 - Regime labels

        Expected: kind, condition value and threshold as listed
        """
        # Act
        label = regime.classify(params)

        # Assert
        assert label.kind is kind
        assert label.condition_value == pytest.approx(value, abs=1e-12)
        assert label.threshold == threshold
        assert label.exact == (label.condition_value <= label.threshold)
