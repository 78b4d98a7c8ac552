# ═══════════════════════════════════════════════════════════════════════════
# IMPORTS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Continuous phase POVM, its sampling, and phase estimators
#
# External libraries:
# - numpy: Vectorized densities, seeded Generator substreams
# - scipy.stats: Circular mean and circular variance of estimates
# Internal modules: clock_model, estimation (golden-section search), validation
# ═══════════════════════════════════════════════════════════════════════════

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import circmean, circvar

from clock_model import TWO_PI, dirichlet_visibility
from estimation import golden_section_min
from operator_algebra import ketbra, operator2
from validation import (
    EmptySample,
    ValidationError,
    validate_non_negative_int,
    validate_positive_int,
)


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 1: CONSTANTS & TYPES
# ═══════════════════════════════════════════════════════════════════════════
# Description: Measurement model records
#
# Key components:
# - PhasePovm: dM(φ) = |ψ_φ><ψ_φ| dφ/π evaluated on `resolution` nodes
# - OutcomeModel: f(φ) = (1/2π)(1 + D cos(ψ - φ))
# - EstimationSummary / EstimationRun: Monte Carlo results
# ═══════════════════════════════════════════════════════════════════════════

DEFAULT_RESOLUTION = 4096
LOG_CLAMP = 1e-300
MLE_WINDOW = math.pi / 8
MLE_TOL = 1e-10


@dataclass(frozen=True)
class PhasePovm:
    """Phase POVM with the quadrature node count used for its integrals."""

    resolution: int = DEFAULT_RESOLUTION

    def __post_init__(self):
        validate_positive_int(self.resolution, "POVM resolution")
        if self.resolution < 2:
            raise ValidationError("POVM resolution must be at least 2")

    @property
    def step(self):
        return TWO_PI / self.resolution

    @property
    def nodes(self):
        """Midpoint nodes (k + 1/2)·step, k = 0..resolution-1."""
        return (np.arange(self.resolution) + 0.5) * self.step


@dataclass(frozen=True)
class OutcomeModel:
    """
    Outcome statistics of the phase POVM on a clock state.

    Attributes:
        psi (float): Reduced phase Aθ₀ mod 2π, rad
        visibility (float): D in [0, 1]; 1 for a pure single-layer state
    """

    psi: float
    visibility: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.psi):
            raise ValidationError("psi must be finite")
        if not (0.0 <= self.visibility <= 1.0):
            raise ValidationError(
                f"Visibility must lie in [0, 1], got {self.visibility}"
            )
        object.__setattr__(self, "psi", self.psi % TWO_PI)

    @classmethod
    def from_config(cls, cfg):
        """
        Outcome model of the layer-averaged state of a clock config.

        A negative Dirichlet factor is the same state as |D| with the phase
        shifted by π.

        Args:
            cfg (ClockConfig): Clock configuration

        Returns:
            OutcomeModel: Model with D >= 0
        """
        d = dirichlet_visibility(cfg.a_alpha_half, cfg.n_layer).value
        psi = cfg.psi_reduced
        if d < 0:
            return cls(psi=psi + math.pi, visibility=-d)
        return cls(psi=psi, visibility=d)


@dataclass(frozen=True)
class EstimationSummary:
    """Summary statistics of per-trial phase estimates."""

    circular_mean: float
    circular_variance: float
    mse: float


@dataclass(frozen=True)
class EstimationRun:
    """One Monte Carlo estimation experiment."""

    seed: int
    n_samples: int
    n_trials: int
    psi_true: float
    estimates: tuple
    summary: EstimationSummary


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 2: POVM ELEMENTS
# ═══════════════════════════════════════════════════════════════════════════
# Description: The continuous POVM and its projective two-outcome slices
#
# Key components:
# - phase_ket(): |ψ_φ> = (|0> + e^{iφ}|1>)/√2
# - povm_element(): Density |ψ_φ><ψ_φ|/π of dM(φ)
# - povm_completeness(): ∫ dM(φ) by quadrature (should be I)
# - projective_pair(): (|ψ_φ'><ψ_φ'|, |ψ_φ'+π><ψ_φ'+π|)
# - density_from_state(): tr[ρ dM(φ)]/dφ
# ═══════════════════════════════════════════════════════════════════════════


def phase_ket(phi):
    """Return |ψ_φ> = (|0> + e^{iφ}|1>)/√2."""
    return np.array([1.0, np.exp(1j * phi)], dtype=np.complex128) / math.sqrt(2.0)


def povm_element(phi):
    """
    Operator density of the phase POVM at φ (per unit dφ).

    Args:
        phi (float): Outcome angle, rad

    Returns:
        numpy.ndarray: |ψ_φ><ψ_φ|/π
    """
    ket = phase_ket(phi)
    return operator2(ketbra(ket, ket) / math.pi)


def povm_completeness(povm):
    """
    Integrate dM(φ) over [0, 2π) with the midpoint rule.

    Args:
        povm (PhasePovm): POVM with its quadrature resolution

    Returns:
        numpy.ndarray: The integrated operator (I within 1e-10 per entry)
    """
    total = np.zeros((2, 2), dtype=np.complex128)
    for phi in povm.nodes:
        total += povm_element(phi)
    return operator2(total * povm.step)


def projective_pair(phi_prime):
    """
    Projective measurement realized after drawing φ'.

    Args:
        phi_prime (float): Angle in [0, π)

    Returns:
        tuple: Projectors onto |ψ_φ'> and |ψ_φ'+π>
    """
    plus = phase_ket(phi_prime)
    minus = phase_ket(phi_prime + math.pi)
    return ketbra(plus, plus), ketbra(minus, minus)


def _povm_probabilities(op, phi):
    # tr[op dM(φ)]/dφ for every φ in the array
    phi = np.asarray(phi, dtype=float)
    diag = np.real(op[0, 0] + op[1, 1])
    cross = np.real(op[0, 1] * np.exp(1j * phi))
    return (diag + 2.0 * cross) / TWO_PI


def density_from_state(rho, phi):
    """
    Outcome density tr[ρ dM(φ)]/dφ computed from the state itself.

    Args:
        rho (DensityOperator): Measured state
        phi (float | numpy.ndarray): Outcome angle(s)

    Returns:
        float | numpy.ndarray: Density value(s)
    """
    values = _povm_probabilities(rho.op, phi)
    return float(values) if np.ndim(values) == 0 else values


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 3: OUTCOME DENSITY & SAMPLING
# ═══════════════════════════════════════════════════════════════════════════
# Description: Closed-form outcome density and exact two-step sampling
#
# Key components:
# - outcome_density(): (1/2π)(1 + D cos(ψ - φ))
# - sample(): Uniform φ' on [0, π), then the projective pair at φ'
# - trial_rng(): Per-trial substream derived from (seed, trial index)
# ═══════════════════════════════════════════════════════════════════════════


def outcome_density(model, phi):
    """
    Outcome density of the phase POVM.

    Args:
        model (OutcomeModel): ψ and D
        phi (float | numpy.ndarray): Outcome angle(s), reduced mod 2π

    Returns:
        float | numpy.ndarray: f(φ) in [0, (1 + D)/2π]

    Example:
        outcome_density(OutcomeModel(psi=0.0), 0.0)  # 1/π
    """
    phi = np.mod(phi, TWO_PI)
    values = (1.0 + model.visibility * np.cos(model.psi - phi)) / TWO_PI
    values = np.maximum(values, 0.0)
    return float(values) if np.ndim(values) == 0 else values


def trial_rng(seed, trial):
    """
    Independent generator for one trial, reproducible regardless of order.

    Args:
        seed (int): Experiment seed (non-negative)
        trial (int): Trial index

    Returns:
        numpy.random.Generator: PCG64 generator on the (seed, trial) substream
    """
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def _draw(model, n, rng):
    phi_prime = rng.uniform(0.0, math.pi, size=n)
    p_first = 0.5 * (1.0 + model.visibility * np.cos(model.psi - phi_prime))
    first = rng.random(size=n) < p_first
    return np.where(first, phi_prime, phi_prime + math.pi)


def sample(model, n, seed):
    """
    Draw n outcomes of the phase POVM by its two-step realization.

    Step 1 draws φ' uniformly on [0, π). Step 2 performs the projective
    measurement (|ψ_φ'>, |ψ_φ'+π>), which yields φ' with probability
    (1 + D cos(ψ - φ'))/2 and φ' + π otherwise.

    Args:
        model (OutcomeModel): ψ and D
        n (int): Number of outcomes (>= 1)
        seed (int): Non-negative seed

    Returns:
        numpy.ndarray: n angles in [0, 2π)
    """
    n = validate_positive_int(n, "Sample count")
    seed = validate_non_negative_int(seed, "Seed")
    return _draw(model, n, np.random.default_rng(seed))


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 4: ESTIMATORS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Unbiased phasor estimator and maximum likelihood
#
# Key components:
# - phasor_estimate(): (1/n) Σ 2e^{iφ}, expectation D·e^{iψ}
# - mle_estimate(): argmax Σ log(1 + D cos(ψ - φ_i)) near the phasor argument
#
# Note: No unbiased estimator of θ₀ itself exists; θ₀ enters the outcome
# statistics only through e^{iAθ₀}, so the target is the reduced phase ψ
# ═══════════════════════════════════════════════════════════════════════════


def _require_samples(samples):
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise EmptySample("At least one sample is required")
    return samples


def phasor_estimate(samples):
    """
    Unbiased estimator of D·e^{iψ} (of e^{iAθ₀} for a pure state).

    Args:
        samples (array-like): Outcome angles

    Returns:
        complex: (1/n) Σ 2e^{iφ_i}

    Raises:
        EmptySample: If samples is empty
    """
    samples = _require_samples(samples)
    return complex(np.mean(2.0 * np.exp(1j * samples)))


def log_likelihood(psi, samples, visibility=1.0):
    """Σ log(1 + D cos(ψ - φ_i)), terms clamped at LOG_CLAMP."""
    terms = 1.0 + visibility * np.cos(psi - samples)
    return float(np.sum(np.log(np.maximum(terms, LOG_CLAMP))))


def mle_estimate(samples, visibility=1.0):
    """
    Maximum-likelihood estimate of ψ for known visibility D.

    Starts from the argument of phasor_estimate and refines by golden-section
    search within ±π/8, away from the antipodal likelihood ridge.

    Args:
        samples (array-like): Outcome angles
        visibility (float): Known D (1 for a pure state)

    Returns:
        float: ψ̂ in [0, 2π)

    Raises:
        EmptySample: If samples is empty
    """
    samples = _require_samples(samples)
    start = float(np.angle(phasor_estimate(samples)))

    psi_hat, _ = golden_section_min(
        lambda psi: -log_likelihood(psi, samples, visibility),
        start - MLE_WINDOW,
        start + MLE_WINDOW,
        tol=MLE_TOL,
    )
    psi_hat %= TWO_PI
    return psi_hat if psi_hat < TWO_PI else 0.0


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 5: FISHER INFORMATION
# ═══════════════════════════════════════════════════════════════════════════
# Description: Classical Fisher information of the phase POVM
#
# Key components:
# - classical_fisher_quadrature(): ∫ (∂ψ ln f)² f dφ, scaled by A²
# - classical_fisher_povm(): Same quantity for any (ρ, ∂ρ)
# - classical_fisher_projective(): Two-outcome projective pair at φ'
# - povm_vs_qfi_gap(): (I_M(θ₀), S) = (A²(1 - sqrt(1 - D²)), (AD)²)
# ═══════════════════════════════════════════════════════════════════════════


def classical_fisher_quadrature(model, a=1.0, povm=None):
    """
    Classical Fisher information of the phase POVM by periodic quadrature.

    The midpoint nodes are taken in u = ψ - φ. The integrand (∂f)²/f is
    evaluated as D² sin²u / (2π(1 + D cos u)), which for D = 1 reduces to
    (1 - cos u)/2π and stays finite at u = π for any resolution.

    Args:
        model (OutcomeModel): ψ and D
        a (float): A = ΔEτ/ħ; I(θ₀) = A²·I_ψ (a = 1 returns I_ψ)
        povm (PhasePovm): Quadrature resolution; PhasePovm() if None

    Returns:
        float: A²·I_ψ

    Example:
        classical_fisher_quadrature(OutcomeModel(psi=0.0, visibility=0.8))  # 0.4
    """
    povm = povm or PhasePovm()
    u = povm.nodes
    d = model.visibility

    cos_u = np.cos(u)
    if d >= 1.0:
        integrand = (1.0 - cos_u) / TWO_PI
    else:
        integrand = d ** 2 * np.sin(u) ** 2 / (TWO_PI * (1.0 + d * cos_u))

    return a ** 2 * float(np.sum(integrand) * povm.step)


def classical_fisher_povm(rho, drho, povm=None):
    """
    Classical Fisher information of the phase POVM for any state and derivative.

    Args:
        rho (DensityOperator): Measured state
        drho (numpy.ndarray): ∂ρ/∂θ
        povm (PhasePovm): Quadrature resolution; PhasePovm() if None

    Returns:
        float: ∫ (∂p)²/p dφ with p(φ) = tr[ρ dM(φ)]/dφ
    """
    povm = povm or PhasePovm()
    phi = povm.nodes
    p = _povm_probabilities(rho.op, phi)
    dp = _povm_probabilities(drho, phi)

    positive = p > LOG_CLAMP
    return float(np.sum(dp[positive] ** 2 / p[positive]) * povm.step)


def classical_fisher_projective(rho, drho, phi_prime):
    """
    Classical Fisher information of the projective pair at φ'.

    Args:
        rho (DensityOperator): Measured state
        drho (numpy.ndarray): ∂ρ/∂θ
        phi_prime (float): Angle selecting the pair

    Returns:
        float: Σ_± (tr[∂ρ Π±])² / tr[ρ Π±]
    """
    info = 0.0
    for projector in projective_pair(phi_prime):
        p = float(np.real(np.trace(rho.op @ projector)))
        dp = float(np.real(np.trace(drho @ projector)))
        if p > LOG_CLAMP:
            info += dp ** 2 / p
    return info


def povm_vs_qfi_gap(cfg):
    """
    Phase-POVM Fisher information against the SLD Fisher information.

    1 - sqrt(1 - D²) is evaluated as D²/(1 + sqrt(1 - D²)), which keeps
    I_M <= S exact in floating point.

    Args:
        cfg (ClockConfig): Clock configuration

    Returns:
        tuple: (I_M(θ₀), S) = (A²(1 - sqrt(1 - D²)), (A·D)²)
    """
    d = dirichlet_visibility(cfg.a_alpha_half, cfg.n_layer).value
    s = (cfg.a * d) ** 2
    i_m = s / (1.0 + math.sqrt(max(0.0, 1.0 - d * d)))
    return i_m, s


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 6: MONTE CARLO EXPERIMENTS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Repeated estimation trials and their summary
#
# Key components:
# - wrap_angle(): Map to (-π, π]
# - summarize(): Circular mean/variance and mean squared wrapped error
# - run_simulation(): n_trials independent MLE experiments
# ═══════════════════════════════════════════════════════════════════════════


def wrap_angle(angle):
    """Map angle(s) to (-π, π]."""
    wrapped = np.mod(np.asarray(angle, dtype=float) + math.pi, TWO_PI) - math.pi
    wrapped = np.where(wrapped == -math.pi, math.pi, wrapped)
    return float(wrapped) if np.ndim(wrapped) == 0 else wrapped


def summarize(estimates, psi_true):
    """
    Summary statistics of phase estimates.

    Args:
        estimates (array-like): ψ̂ per trial
        psi_true (float): True phase

    Returns:
        EstimationSummary: Circular mean, circular variance (1 - R̄), MSE

    Raises:
        EmptySample: If there are no estimates
    """
    estimates = _require_samples(estimates)
    errors = wrap_angle(estimates - psi_true)
    return EstimationSummary(
        circular_mean=float(circmean(estimates, high=TWO_PI, low=0.0)),
        circular_variance=float(circvar(estimates, high=TWO_PI, low=0.0)),
        mse=float(np.mean(np.square(errors))),
    )


def run_simulation(model, n_samples, n_trials, seed):
    """
    Monte Carlo maximum-likelihood experiment.

    Each trial draws n_samples outcomes from its own (seed, trial) substream
    and estimates ψ with mle_estimate at the model's known visibility.

    Args:
        model (OutcomeModel): True ψ and D
        n_samples (int): Outcomes per trial
        n_trials (int): Number of trials
        seed (int): Non-negative experiment seed

    Returns:
        EstimationRun: Per-trial estimates in trial order and their summary

    Example:
        run = run_simulation(OutcomeModel(psi=1.0), 10_000, 400, seed=7)
        run.summary.mse  # close to 1e-4
    """
    n_samples = validate_positive_int(n_samples, "Sample count")
    n_trials = validate_positive_int(n_trials, "Trial count")
    seed = validate_non_negative_int(seed, "Seed")

    estimates = []
    for trial in range(n_trials):
        samples = _draw(model, n_samples, trial_rng(seed, trial))
        estimates.append(mle_estimate(samples, model.visibility))

    return EstimationRun(
        seed=seed,
        n_samples=n_samples,
        n_trials=n_trials,
        psi_true=model.psi,
        estimates=tuple(estimates),
        summary=summarize(estimates, model.psi),
    )
