"""
Unit tests for measurement_sim.py module.

Tests the phase POVM, its outcome density and two-step sampler, the
phasor and maximum-likelihood estimators, classical Fisher information and
Monte Carlo experiments.
"""

import math

import numpy as np
import pytest
from scipy import stats

from clock_model import ClockConfig, drho_dtheta0, multilayer_state, single_layer_state
from estimation import qfi_multilayer
from measurement_sim import (
    EstimationRun,
    OutcomeModel,
    PhasePovm,
    classical_fisher_povm,
    classical_fisher_projective,
    classical_fisher_quadrature,
    density_from_state,
    mle_estimate,
    outcome_density,
    phasor_estimate,
    povm_completeness,
    povm_element,
    povm_vs_qfi_gap,
    run_simulation,
    sample,
    summarize,
    trial_rng,
    wrap_angle,
)
from validation import EmptySample, ValidationError

GOLDEN_D = (1 + math.sqrt(5)) / 5


def phase_information(d):
    """Closed form 1 - sqrt(1 - D²) of the phase-POVM information."""
    return 1.0 - math.sqrt(1.0 - d * d)


def outcome_cdf(phi, psi, d):
    """CDF of (1/2π)(1 + D cos(ψ - φ)) on [0, 2π)."""
    return (phi - d * np.sin(psi - phi) + d * math.sin(psi)) / (2 * math.pi)


# ============================================================================
# Model & POVM Tests
# ============================================================================


@pytest.mark.unit
class TestModels:
    """Test PhasePovm and OutcomeModel"""

    def test_povm_defaults(self):
        """Test the default resolution and midpoint nodes"""
        povm = PhasePovm()

        assert povm.resolution == 4096
        assert povm.nodes[0] == pytest.approx(povm.step / 2)
        assert len(povm.nodes) == 4096

    def test_povm_resolution_validated(self):
        """Test a single node is rejected"""
        with pytest.raises(ValidationError):
            PhasePovm(resolution=1)

    def test_outcome_model_reduces_phase(self):
        """Test ψ is reduced mod 2π"""
        assert OutcomeModel(psi=7.0).psi == pytest.approx(7.0 - 2 * math.pi)
        assert OutcomeModel(psi=-1.0).psi == pytest.approx(2 * math.pi - 1.0)

    @pytest.mark.parametrize("visibility", [-0.1, 1.5])
    def test_outcome_model_visibility_range(self, visibility):
        """Test visibility outside [0, 1] is rejected"""
        with pytest.raises(ValidationError, match=r"\[0, 1\]"):
            OutcomeModel(psi=0.0, visibility=visibility)

    def test_from_config_pure_state(self):
        """Test a single layer gives D = 1 and the reduced phase"""
        cfg = ClockConfig.dimensionless(2.0, 0.1, psi=0.4)

        model = OutcomeModel.from_config(cfg)

        assert model.visibility == 1.0
        assert model.psi == pytest.approx(0.4)

    def test_from_config_folds_negative_visibility(self):
        """Test D < 0 becomes |D| with the phase shifted by π"""
        cfg = ClockConfig.dimensionless(1.0, math.pi, psi=0.5, ell=1)
        rho, visibility = multilayer_state(cfg)

        model = OutcomeModel.from_config(cfg)

        assert visibility.value == pytest.approx(-1.0 / 3.0)
        assert model.visibility == pytest.approx(1.0 / 3.0)
        assert model.psi == pytest.approx(0.5 + math.pi)
        phi = np.linspace(0.0, 2 * math.pi, 17)
        np.testing.assert_allclose(
            outcome_density(model, phi), density_from_state(rho, phi), atol=1e-12
        )


@pytest.mark.unit
class TestPovmElements:
    """Test povm_element, povm_completeness and projective_pair"""

    def test_completeness(self):
        """Test ∫ dM(φ) = I within 1e-10 per entry"""
        np.testing.assert_allclose(povm_completeness(PhasePovm()), np.eye(2), atol=1e-10)

    def test_element_trace(self):
        """Test tr dM(φ)/dφ = 1/π"""
        assert np.trace(povm_element(0.7)).real == pytest.approx(1 / math.pi)

    def test_density_from_state_matches_closed_form(self):
        """Test tr[ρ dM(φ)]/dφ equals the outcome density of a pure state"""
        cfg = ClockConfig.dimensionless(1.0, 0.1, psi=1.1)
        model = OutcomeModel(psi=1.1)
        phi = np.linspace(0.0, 2 * math.pi, 33)

        np.testing.assert_allclose(
            density_from_state(single_layer_state(cfg), phi),
            outcome_density(model, phi),
            atol=1e-12,
        )


# ============================================================================
# Outcome Density & Sampling Tests
# ============================================================================


@pytest.mark.unit
class TestOutcomeDensity:
    """Test outcome_density"""

    def test_peak(self):
        """Test D = 1, φ = ψ gives 1/π"""
        assert outcome_density(OutcomeModel(psi=0.8), 0.8) == pytest.approx(1 / math.pi)

    def test_antinode(self):
        """Test D = 1, φ = ψ + π gives 0"""
        assert outcome_density(OutcomeModel(psi=0.8), 0.8 + math.pi) == pytest.approx(
            0.0, abs=1e-15
        )

    def test_uniform_when_mixed(self):
        """Test D = 0 gives 1/2π everywhere"""
        values = outcome_density(OutcomeModel(psi=2.0, visibility=0.0), np.linspace(0, 7, 50))
        np.testing.assert_allclose(values, 1 / (2 * math.pi))

    def test_normalization(self, rng):
        """Test the density integrates to 1 for 100 random (ψ, D)"""
        povm = PhasePovm(resolution=512)
        for _ in range(100):
            model = OutcomeModel(psi=float(rng.uniform(0, 2 * math.pi)),
                                 visibility=float(rng.uniform(0, 1)))
            total = float(np.sum(outcome_density(model, povm.nodes)) * povm.step)
            assert total == pytest.approx(1.0, abs=1e-12)


@pytest.mark.unit
class TestSample:
    """Test sample and trial_rng"""

    def test_deterministic(self):
        """Test a fixed seed reproduces the sample list"""
        model = OutcomeModel(psi=1.0, visibility=0.7)

        first = sample(model, 1000, seed=42)
        second = sample(model, 1000, seed=42)

        np.testing.assert_array_equal(first, second)
        assert np.all((first >= 0) & (first < 2 * math.pi))

    def test_different_seeds_differ(self):
        """Test different seeds give different samples"""
        model = OutcomeModel(psi=1.0)
        assert not np.array_equal(sample(model, 100, seed=1), sample(model, 100, seed=2))

    @pytest.mark.parametrize("n", [0, -5])
    def test_count_validated(self, n):
        """Test the sample count must be at least 1"""
        with pytest.raises(ValidationError):
            sample(OutcomeModel(psi=0.0), n, seed=1)

    def test_uniform_when_mixed(self):
        """Test D = 0 samples pass a Kolmogorov–Smirnov uniformity test"""
        samples = sample(OutcomeModel(psi=0.3, visibility=0.0), 100_000, seed=11)

        result = stats.kstest(samples / (2 * math.pi), "uniform")

        assert result.pvalue > 0.001

    @pytest.mark.parametrize("visibility", [0.0, 0.5, 1.0])
    def test_chi_square_fit(self, visibility):
        """Test 64-bin χ² goodness of fit against the outcome density"""
        psi = 2.2
        n = 100_000
        samples = sample(OutcomeModel(psi=psi, visibility=visibility), n, seed=2024)
        edges = np.linspace(0.0, 2 * math.pi, 65)

        observed, _ = np.histogram(samples, bins=edges)
        expected = n * np.diff(outcome_cdf(edges, psi, visibility))
        expected *= n / expected.sum()

        assert stats.chisquare(observed, expected).pvalue > 0.001

    def test_cosine_moment(self):
        """Test D = 1, ψ = 0 gives mean cos φ = 1/2"""
        samples = sample(OutcomeModel(psi=0.0), 1_000_000, seed=5)

        # sd of cos φ is 1/2
        assert float(np.mean(np.cos(samples))) == pytest.approx(0.5, abs=4 * 0.5 / 1000)

    def test_trial_rng_substreams(self):
        """Test trial substreams are reproducible and independent"""
        assert trial_rng(7, 3).random() == trial_rng(7, 3).random()
        assert trial_rng(7, 3).random() != trial_rng(7, 4).random()
        assert trial_rng(7, 3).random() != trial_rng(8, 3).random()


# ============================================================================
# Estimator Tests
# ============================================================================


@pytest.mark.unit
class TestPhasorEstimate:
    """Test phasor_estimate"""

    def test_single_sample(self):
        """Test one sample φ gives 2e^{iφ}"""
        assert phasor_estimate([0.9]) == pytest.approx(2 * np.exp(0.9j))

    def test_empty(self):
        """Test no samples raises EmptySample"""
        with pytest.raises(EmptySample):
            phasor_estimate([])

    def test_unbiased_pure_state(self):
        """Test D = 1 gives modulus 1 and argument ψ"""
        psi = 1.3
        samples = sample(OutcomeModel(psi=psi), 1_000_000, seed=99)

        estimate = phasor_estimate(samples)

        # per-component sd of 2e^{iφ} is at most 2, so 4σ/sqrt(n) <= 0.008
        assert abs(estimate) == pytest.approx(1.0, abs=0.008)
        assert np.angle(estimate) == pytest.approx(psi, abs=0.008)

    def test_unbiased_mixed_state(self):
        """Test the mean modulus equals D for D = (1+√5)/5"""
        samples = sample(OutcomeModel(psi=4.0, visibility=GOLDEN_D), 1_000_000, seed=3)

        estimate = phasor_estimate(samples)

        assert estimate.real == pytest.approx(GOLDEN_D * math.cos(4.0), abs=0.008)
        assert estimate.imag == pytest.approx(GOLDEN_D * math.sin(4.0), abs=0.008)


@pytest.mark.unit
class TestMleEstimate:
    """Test mle_estimate"""

    def test_all_equal_samples(self):
        """Test identical samples put the likelihood peak on them"""
        assert mle_estimate([1.2] * 20) == pytest.approx(1.2, abs=1e-6)

    def test_estimate_in_range(self):
        """Test estimates are reduced to [0, 2π)"""
        samples = sample(OutcomeModel(psi=6.2, visibility=0.8), 5000, seed=8)

        estimate = mle_estimate(samples, visibility=0.8)

        assert 0.0 <= estimate < 2 * math.pi
        assert abs(wrap_angle(estimate - 6.2)) < 0.2

    def test_empty(self):
        """Test no samples raises EmptySample"""
        with pytest.raises(EmptySample):
            mle_estimate([])


# ============================================================================
# Fisher Information Tests
# ============================================================================


@pytest.mark.unit
class TestClassicalFisher:
    """Test classical Fisher information of the phase POVM"""

    def test_pure_state_is_efficient(self):
        """Test D = 1 gives I_ψ = 1 and I(θ₀) = A²"""
        model = OutcomeModel(psi=0.0)

        assert classical_fisher_quadrature(model) == pytest.approx(1.0, abs=1e-6)
        assert classical_fisher_quadrature(model, a=3.0) == pytest.approx(9.0, abs=1e-5)

    @pytest.mark.parametrize("d", [0.2, 0.5, 0.8, 0.99])
    def test_closed_form(self, d):
        """Test I_ψ = 1 - sqrt(1 - D²) < D²"""
        info = classical_fisher_quadrature(OutcomeModel(psi=1.0, visibility=d))

        assert info == pytest.approx(phase_information(d), abs=1e-6)
        assert info < d * d

    @pytest.mark.parametrize("resolution", [3, 1001, 4095, 4096])
    def test_pure_state_any_resolution(self, resolution):
        """Test D = 1 gives 1 for odd resolutions, where u = π is a node"""
        povm = PhasePovm(resolution)

        assert classical_fisher_quadrature(OutcomeModel(psi=0.0), povm=povm) == pytest.approx(
            1.0, abs=1e-6
        )

    @pytest.mark.parametrize("resolution", [1001, 4095])
    def test_closed_form_odd_resolution(self, resolution):
        """Test an odd node count still matches 1 - sqrt(1 - D²)"""
        info = classical_fisher_quadrature(
            OutcomeModel(psi=0.0, visibility=0.8), povm=PhasePovm(resolution)
        )

        assert info == pytest.approx(0.4, abs=1e-6)

    def test_no_information_when_mixed(self):
        """Test D = 0 gives 0"""
        assert classical_fisher_quadrature(OutcomeModel(psi=1.0, visibility=0.0)) == 0.0

    def test_povm_from_state(self):
        """Test the state-based POVM information matches the closed form"""
        cfg = ClockConfig.dimensionless(2.0, math.pi / 10, psi=0.3, ell=2)
        rho, visibility = multilayer_state(cfg)

        info = classical_fisher_povm(rho, drho_dtheta0(cfg))

        expected = cfg.a ** 2 * phase_information(visibility.value)
        assert info == pytest.approx(expected, rel=1e-6)
        assert info < qfi_multilayer(cfg)

    def test_projective_pair_bounded_by_qfi(self, random_configs, rng):
        """Test every projective pair is bounded by the SLD information"""
        for cfg in random_configs(50):
            rho, _ = multilayer_state(cfg)
            drho = drho_dtheta0(cfg)
            phi_prime = float(rng.uniform(0, math.pi))

            info = classical_fisher_projective(rho, drho, phi_prime)

            assert info <= qfi_multilayer(cfg) * (1 + 1e-6) + 1e-12

    def test_projective_pair_at_quadrature(self):
        """Test the pair at φ' = ψ + π/2 reaches A²D²"""
        cfg = ClockConfig.dimensionless(1.5, 0.4, psi=0.6, ell=1)
        rho, _ = multilayer_state(cfg)

        info = classical_fisher_projective(rho, drho_dtheta0(cfg), 0.6 + math.pi / 2)

        assert info == pytest.approx(qfi_multilayer(cfg), rel=1e-12)


@pytest.mark.unit
class TestPovmVsQfiGap:
    """Test povm_vs_qfi_gap"""

    def test_pure_state_no_gap(self):
        """Test the phase POVM is efficient for a single layer"""
        i_m, s = povm_vs_qfi_gap(ClockConfig.dimensionless(2.0, 0.1))
        assert i_m == s == 4.0

    def test_mixed_state_ratio(self):
        """Test D = (1+√5)/5 gives I_M/S = 1/(1 + sqrt(1 - D²)) ≈ 0.5674"""
        i_m, s = povm_vs_qfi_gap(ClockConfig.dimensionless(1.0, math.pi / 5, ell=2))

        assert i_m / s == pytest.approx(phase_information(GOLDEN_D) / GOLDEN_D ** 2)
        assert i_m / s == pytest.approx(0.5674375, abs=1e-6)

    def test_divergence_both_zero(self):
        """Test D = 0 gives zero for both"""
        i_m, s = povm_vs_qfi_gap(ClockConfig.dimensionless(2 * math.pi / 5, 1.0, ell=2))
        assert (i_m, s) == (0.0, 0.0)

    def test_inequality_random(self, random_configs):
        """Test I_M <= S on random configs"""
        for cfg in random_configs(200):
            i_m, s = povm_vs_qfi_gap(cfg)
            assert i_m <= s + 1e-9


# ============================================================================
# Monte Carlo Tests
# ============================================================================


@pytest.mark.unit
class TestSummaries:
    """Test wrap_angle and summarize"""

    def test_wrap_angle(self):
        """Test angles map to (-π, π]"""
        assert wrap_angle(-math.pi) == pytest.approx(math.pi)
        assert wrap_angle(1.5 * math.pi) == pytest.approx(-0.5 * math.pi)
        np.testing.assert_allclose(wrap_angle(np.array([0.1, 7.0])), [0.1, 7.0 - 2 * math.pi])

    def test_summarize_across_zero(self):
        """Test estimates straddling 0 wrap correctly"""
        summary = summarize([0.1, 2 * math.pi - 0.1], psi_true=0.0)

        assert summary.mse == pytest.approx(0.01)
        assert wrap_angle(summary.circular_mean) == pytest.approx(0.0, abs=1e-12)
        assert summary.circular_variance == pytest.approx(1 - math.cos(0.1))

    def test_summarize_empty(self):
        """Test no estimates raises EmptySample"""
        with pytest.raises(EmptySample):
            summarize([], psi_true=0.0)


@pytest.mark.unit
class TestRunSimulation:
    """Test run_simulation"""

    def test_deterministic(self):
        """Test a fixed seed reproduces every estimate"""
        model = OutcomeModel(psi=1.0)

        first = run_simulation(model, 200, 5, seed=17)
        second = run_simulation(model, 200, 5, seed=17)

        assert isinstance(first, EstimationRun)
        assert first.estimates == second.estimates
        assert first.n_trials == 5
        assert all(0.0 <= e < 2 * math.pi for e in first.estimates)

    def test_summary_recomputable(self):
        """Test the summary is a function of the estimates"""
        run = run_simulation(OutcomeModel(psi=3.0, visibility=0.5), 300, 8, seed=4)
        assert run.summary == summarize(run.estimates, run.psi_true)

    def test_validates_counts(self):
        """Test zero trials are rejected"""
        with pytest.raises(ValidationError):
            run_simulation(OutcomeModel(psi=1.0), 100, 0, seed=1)


@pytest.mark.unit
@pytest.mark.slow
class TestMleEfficiency:
    """Test the MLE reaches the classical Cramér–Rao bound"""

    @pytest.mark.parametrize("visibility, n_samples", [(1.0, 10_000), (0.6, 1000)])
    def test_mse_band(self, visibility, n_samples):
        """Test MSE within [0.9, 1.2] × 1/(n·I_ψ) over 2000 trials"""
        run = run_simulation(OutcomeModel(psi=1.0, visibility=visibility), n_samples, 2000, seed=31)

        crb = 1.0 / (n_samples * phase_information(visibility))

        assert 0.9 <= run.summary.mse / crb <= 1.2

    def test_mse_scales_inversely(self):
        """Test log-log slope of MSE against n is -1 ± 0.1"""
        counts = [100, 1000, 10_000]
        mses = [
            run_simulation(OutcomeModel(psi=2.0), n, 500, seed=n).summary.mse for n in counts
        ]

        slope = np.polyfit(np.log10(counts), np.log10(mses), 1)[0]

        assert slope == pytest.approx(-1.0, abs=0.1)
