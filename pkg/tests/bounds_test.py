"""
Bounds Tests - Automated test cases for the closed-form bounds
Maps to Verification Cases: VC-003, VC-004, VC-013

Tests cover:
- Lower bounds (TIN, orthogonal signalling)
- Upper bounds (One-Bit, Z-channel)
- Exact sum capacity in the low-interference regime
- Aggregation, ordering and tightness across the reference grid
"""

import logging
import math

import pytest

from sumcap import bounds, gaussmi, regime
from sumcap.channel import ChannelParams, make_symmetric
from sumcap.errors import DegenerateObservationError, UnsupportedConfigurationError


LOG2_11 = math.log2(11.0)


class TestLowerBounds:
    """
    Test class for the lower bounds.

    Automation mapping:
    - test_tin_examples -> VC-003
    - test_ortho_examples -> VC-003
    """

    @pytest.mark.smoke
    @pytest.mark.bounds
    def test_tin_examples(self, in_regime_params):
        """
        Test Case: VC-003 - TIN sum rate

        Expected: log2(11) at h=0, ~2.8387 bits at h=0.25
        """
        # Act & Assert
        assert bounds.tin_sum_rate(make_symmetric(10.0, 0.0)) == pytest.approx(LOG2_11, abs=1e-15)
        assert bounds.tin_sum_rate(in_regime_params) == pytest.approx(math.log2(1 + 10 / 1.625), abs=1e-14)
        assert bounds.tin_sum_rate(in_regime_params) == pytest.approx(2.8387, abs=1e-4)

    @pytest.mark.bounds
    def test_tin_one_sided(self):
        """
        Test Case: VC-003 - One-sided TIN sum rate

        Expected: 1/2 log2(1 + 10/3.5) + 1/2 log2(11)
        """
        # Act
        rate = bounds.tin_sum_rate(ChannelParams(10.0, 10.0, 0.5, 0.0))

        # Assert
        assert rate == pytest.approx(0.5 * math.log2(1 + 10 / 3.5) + 0.5 * LOG2_11, abs=1e-14)

    @pytest.mark.regression
    @pytest.mark.bounds
    @pytest.mark.parametrize("p", [0.1, 1.0, 10.0, 100.0])
    @pytest.mark.parametrize("h", [0.0, 0.1, 0.25, 0.5, 1.0, -0.7])
    def test_tin_reduces_to_symmetric_formula(self, p, h):
        """
        Test Case: VC-003 - Symmetric TIN equals log2(1 + P/(1 + h^2 P)) exactly

        Expected: bit-for-bit equality
        """
        assert bounds.tin_sum_rate(make_symmetric(p, h)) == math.log2(1.0 + p / (1.0 + h * h * p))

    @pytest.mark.bounds
    @pytest.mark.parametrize("p, expected", [(10.0, math.log2(21.0)), (0.5, 1.0)])
    def test_ortho_examples(self, p, expected):
        """
        Test Case: VC-003 - Orthogonal signalling value

        Expected: log2(21) ~ 4.3923 at P=10, exactly 1 at P=0.5
        """
        assert bounds.ortho_sum_rate(make_symmetric(p, 0.3)) == pytest.approx(expected, abs=1e-15)

    @pytest.mark.bounds
    @pytest.mark.parametrize("bound", [bounds.ortho_sum_rate, bounds.onebit_upper, bounds.kramer_upper])
    def test_symmetric_only_bounds_reject_asymmetric(self, bound, asym_params):
        """
        Test Case: VC-003 - Symmetric-only formulas

        Expected: UnsupportedConfigurationError on asymmetric channels
        """
        with pytest.raises(UnsupportedConfigurationError):
            bound(asym_params)


class TestUpperBounds:
    """
    Test class for the closed-form upper bounds.

    Automation mapping:
    - test_onebit_examples -> VC-004
    - test_kramer_examples -> VC-004
    """

    @pytest.mark.smoke
    @pytest.mark.bounds
    def test_onebit_examples(self):
        """
        Test Case: VC-004 - One-Bit bound

        Expected: log2(1 + 10 + 10/11) ~ 3.5740 at h=1; log2(11) at h=0; log2(1 + 2.5 + 10/3.5) at h=0.5
        """
        assert bounds.onebit_upper(make_symmetric(10.0, 1.0)) == pytest.approx(math.log2(11 + 10 / 11), abs=1e-14)
        assert bounds.onebit_upper(make_symmetric(10.0, 1.0)) == pytest.approx(3.5740, abs=1e-4)
        assert bounds.onebit_upper(make_symmetric(10.0, 0.0)) == pytest.approx(LOG2_11, abs=1e-15)
        assert bounds.onebit_upper(make_symmetric(10.0, 0.5)) == pytest.approx(math.log2(3.5 + 10 / 3.5), abs=1e-14)

    @pytest.mark.bounds
    def test_kramer_examples(self):
        """
        Test Case: VC-004 - Z-channel bound

        Expected: log2(11) at h=0; 1/2 log2(11) + 1/2 log2(1 + 10/11) at h=1
        """
        assert bounds.kramer_upper(make_symmetric(10.0, 0.0)) == pytest.approx(LOG2_11, abs=1e-15)
        assert bounds.kramer_upper(make_symmetric(10.0, 1.0)) == pytest.approx(
            0.5 * LOG2_11 + 0.5 * math.log2(1 + 10 / 11), abs=1e-14)
        assert bounds.kramer_upper(make_symmetric(10.0, 0.5)) == pytest.approx(
            0.5 * LOG2_11 + 0.5 * math.log2(1 + 10 / 3.5), abs=1e-14)

    @pytest.mark.bounds
    def test_one_sided_tin_equals_z_channel_bound(self):
        """
        Test Case: VC-004 - Removing one cross-link reproduces the Z-channel value

        Expected: exact equality
        """
        for h in (0.1, 0.5, 1.0, 3.0):
            assert bounds.tin_sum_rate(ChannelParams(10.0, 10.0, h, 0.0)) == bounds.kramer_upper(make_symmetric(10.0, h))


class TestExactCapacity:
    """
    Test class for the exact sum capacity.

    Automation mapping:
    - test_present_in_regime -> VC-013
    - test_absent_above_threshold -> VC-013
    """

    @pytest.mark.smoke
    @pytest.mark.bounds
    def test_present_in_regime(self, in_regime_params, asym_params):
        """
        Test Case: VC-013 - Exact capacity inside the regime

        Expected: equals the TIN sum rate exactly
        """
        assert bounds.exact_sum_capacity(in_regime_params) == bounds.tin_sum_rate(in_regime_params)
        assert bounds.exact_sum_capacity(asym_params) == bounds.tin_sum_rate(asym_params)

    @pytest.mark.bounds
    def test_absent_above_threshold(self):
        """
        Test Case: VC-013 - P=10, h=0.29

        Expected: None
        """
        assert bounds.exact_sum_capacity(make_symmetric(10.0, 0.29)) is None


class TestAllBounds:
    """
    Test class for aggregation and ordering.

    Automation mapping:
    - test_zero_gain_collapse -> VC-013
    - test_extreme_snr_keeps_exact_capacity -> VC-013
    - test_reference_sweep -> VC-013
    - test_ordering_grid -> VC-013
    """

    @pytest.mark.smoke
    @pytest.mark.bounds
    def test_zero_gain_collapse(self):
        """
        Test Case: VC-013 - P=10, h=0

        Expected: every present bound except ortho_lower equals log2(11)
        """
        # Act
        bound_set = bounds.all_bounds(make_symmetric(10.0, 0.0))
        values = bound_set.present(bounds.LOWER_FIELDS + bounds.UPPER_FIELDS + ("exact_capacity",))

        # Assert
        assert bound_set.tangent_upper is None and bound_set.genie_upper is None
        for name, value in values.items():
            if name != "ortho_lower":
                assert value == pytest.approx(LOG2_11, abs=1e-15), f"{name} should collapse to log2(11)"

    @pytest.mark.bounds
    def test_in_regime_fields(self, in_regime_params):
        """
        Test Case: VC-013 - P=10, h=0.25

        Expected: exact capacity present, genie bound equals TIN, no tangent bound
        """
        # Act
        bound_set = bounds.all_bounds(in_regime_params)

        # Assert
        assert bound_set.exact_capacity == bound_set.tin_lower
        assert bound_set.tangent_upper is None
        assert bound_set.genie_upper == pytest.approx(bound_set.tin_lower, abs=1e-9)
        assert bound_set.regime.exact

    @pytest.mark.bounds
    def test_above_threshold_fields(self, above_threshold_params):
        """
        Test Case: VC-013 - P=10, h=0.5

        Expected: tangent bound between TIN and One-Bit; no exact capacity or genie bound
        """
        # Act
        bound_set = bounds.all_bounds(above_threshold_params)

        # Assert
        assert bound_set.exact_capacity is None and bound_set.genie_upper is None
        assert bound_set.tin_lower < bound_set.tangent_upper < bound_set.onebit_upper

    @pytest.mark.bounds
    def test_asymmetric_fields(self, asym_params):
        """
        Test Case: VC-013 - Asymmetric channel

        Expected: TIN, exact capacity and genie bound present; symmetric-only fields absent
        """
        # Act
        bound_set = bounds.all_bounds(asym_params)

        # Assert
        assert bound_set.ortho_lower is None and bound_set.onebit_upper is None
        assert bound_set.kramer_upper is None and bound_set.tangent_upper is None
        assert bound_set.exact_capacity == bound_set.tin_lower
        assert bound_set.genie_upper == pytest.approx(bound_set.tin_lower, abs=1e-9)

    @pytest.mark.regression
    @pytest.mark.bounds
    def test_extreme_snr_keeps_exact_capacity(self):
        """
        Test Case: VC-013 - P=1e13, h=1e-8

        Expected: the bound set is produced; exact capacity equals TIN; the
        genie bound is either absent or equal to TIN
        """
        # Act
        bound_set = bounds.all_bounds(make_symmetric(1e13, 1e-8))

        # Assert
        assert bound_set.exact_capacity == bound_set.tin_lower
        assert bound_set.genie_upper is None or bound_set.genie_upper == pytest.approx(
            bound_set.tin_lower, rel=1e-9)

    @pytest.mark.bounds
    def test_degenerate_genie_bound_is_absent(self, in_regime_params, monkeypatch, caplog):
        """
        Test Case: VC-013 - Genie-aided bound cannot be evaluated

        Expected: genie_upper absent with a warning; the other fields unaffected
        """
        # Arrange
        def singular_sum_rate(params, genie):
            raise DegenerateObservationError("observations recover the signal exactly")

        monkeypatch.setattr(gaussmi, "genie_aided_sum_rate", singular_sum_rate)

        # Act
        with caplog.at_level(logging.WARNING, logger="sumcap.bounds"):
            bound_set = bounds.all_bounds(in_regime_params)

        # Assert
        assert bound_set.genie_upper is None
        assert bound_set.exact_capacity == bound_set.tin_lower
        assert "genie-aided bound unavailable" in caplog.text

    @pytest.mark.regression
    @pytest.mark.bounds
    def test_reference_sweep(self, reference_power):
        """
        Test Case: VC-013 - 10 dB sweep over h in [0, 1] step 0.01

        Expected: 101 points; inside the regime exact = TIN and the bounds close
        to within 1e-9; the tangent bound never exceeds One-Bit
        """
        for k in range(101):
            # Arrange
            params = make_symmetric(reference_power, round(0.01 * k, 12))

            # Act
            bound_set = bounds.all_bounds(params)

            # Assert
            assert not bounds.ordering_violations(bound_set), f"ordering violated at {params}"
            if regime.symmetric_condition(params.p, params.h):
                uppers = bound_set.present(bounds.UPPER_FIELDS)
                assert bound_set.exact_capacity == bound_set.tin_lower
                assert min(uppers.values()) - bound_set.tin_lower <= 1e-9
            else:
                assert bound_set.tangent_upper <= bound_set.onebit_upper + 1e-9

    @pytest.mark.regression
    @pytest.mark.bounds
    @pytest.mark.parametrize("p", [1.0, 10.0, 100.0])
    def test_ordering_grid(self, p):
        """
        Test Case: VC-013 - Ordering over h in [0, 2] step 0.01

        Expected: tin_lower <= every present upper bound + 1e-9
        """
        for k in range(201):
            bound_set = bounds.all_bounds(make_symmetric(p, round(0.01 * k, 12)))
            assert not bounds.ordering_violations(bound_set), f"ordering violated at P={p}, h={0.01 * k}"

    @pytest.mark.bounds
    def test_strict_mode_flags_orthogonal_value(self):
        """
        Test Case: VC-013 - Strict ordering includes the orthogonal value

        Expected: at P=10, h=0 log2(21) exceeds the upper bounds and is reported
        """
        # Act
        bound_set = bounds.all_bounds(make_symmetric(10.0, 0.0))
        violations = bounds.ordering_violations(bound_set, strict=True)

        # Assert
        assert not bounds.ordering_violations(bound_set)
        assert {lower for lower, _, _ in violations} == {"ortho_lower"}
