# ═══════════════════════════════════════════════════════════════════════════
# IMPORTS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Lattice clock Hamiltonians and evolved states
#
# External libraries:
# - numpy: Complex phases and operator arithmetic
# - fractions / math: Exact phase reduction for physical-scale phases
# Internal modules: operator_algebra, validation
# ═══════════════════════════════════════════════════════════════════════════

import dataclasses
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from operator_algebra import SIGMA_Z, operator2, validate_density
from validation import (
    LayerOutOfRange,
    NonPositiveInput,
    ValidationError,
    validate_odd_layer_count,
)


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 1: CONSTANTS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Physical constants and numerical thresholds
#
# Key components:
# - PhysicalConstants: hbar, c, g_default, Planck h (CODATA 2018 by default)
# - CODATA_2018: Default constants instance
# - TWO_PI_EXACT: 2*pi to 60 digits for exact phase reduction
# - SINGULAR_SIN_TOL / VISIBILITY_ZERO_TOL: Dirichlet factor thresholds
# ═══════════════════════════════════════════════════════════════════════════

TWO_PI = 2.0 * math.pi
TWO_PI_EXACT = Fraction(
    "6.283185307179586476925286766559005768394338798750211641949889"
)

SINGULAR_SIN_TOL = 1e-8
VISIBILITY_ZERO_TOL = 1e-12
VISIBILITY_BOUND_TOL = 1e-12


@dataclass(frozen=True)
class PhysicalConstants:
    """
    Physical constants used by every formula.

    Attributes:
        hbar (float): Reduced Planck constant, J·s
        c (float): Speed of light, m/s
        g_default (float): Standard gravity, m/s²
        planck_h (float): Planck constant, J·s
    """

    hbar: float = 1.054571817e-34
    c: float = 2.99792458e8
    g_default: float = 9.80665
    planck_h: float = 6.62607015e-34

    def __post_init__(self):
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if not (math.isfinite(value) and value > 0):
                raise NonPositiveInput(f"{field.name} must be positive, got {value}")

    @property
    def c_squared(self):
        return self.c * self.c


CODATA_2018 = PhysicalConstants()

DIMENSIONLESS = PhysicalConstants(hbar=1.0, c=1.0, g_default=1.0, planck_h=TWO_PI)


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 2: CLOCK CONFIGURATION
# ═══════════════════════════════════════════════════════════════════════════
# Description: Geometry and interrogation parameters of an N-layer clock
#
# Key components:
# - ClockConfig: delta_e, tau, theta0, g, h_spacing, ell, n_site
# - Derived (never cached): a = ΔEτ/ħ, alpha = gh/c², a_alpha_half, psi_reduced
# - ClockConfig.dimensionless(): ħ = c = g = ΔE = 1 units for plotted curves
# - reduce_phase(): Exact (A·θ₀) mod 2π from physical fields
#
# Note: psi overrides the reduced phase when the caller already knows it
# ═══════════════════════════════════════════════════════════════════════════


def reduce_phase(delta_e, tau, theta0, hbar):
    """
    Reduce the accumulated phase ΔE·τ·θ₀/ħ modulo 2π without rounding loss.

    For optical clocks ΔEτ/ħ reaches ~1e21, far beyond the range where a
    double-precision product carries any phase information. The product is
    formed exactly from the binary values of the inputs and reduced against
    a 60-digit 2π, so the result is correct to double precision.

    Args:
        delta_e (float): Transition energy, J
        tau (float): Interrogation time, s
        theta0 (float): Redshift parameter 1 + V₀/c²
        hbar (float): Reduced Planck constant, J·s

    Returns:
        float: Phase in [0, 2π)
    """
    phase = Fraction(delta_e) * Fraction(tau) * Fraction(theta0) / Fraction(hbar)
    turns = math.floor(phase / TWO_PI_EXACT)
    reduced = float(phase - turns * TWO_PI_EXACT)
    return reduced if reduced < TWO_PI else 0.0


@dataclass(frozen=True)
class ClockConfig:
    """
    Physical and geometric parameters of an optical lattice clock.

    Attributes:
        delta_e (float): Clock transition energy ΔE, J
        tau (float): Interrogation time τ, s
        h_spacing (float): Interlayer distance h, m
        theta0 (float): Redshift parameter θ₀ = 1 + V₀/c²
        g (float): Gravitational acceleration; constants.g_default if None
        ell (int): Layers are indexed -ell..ell (N_layer = 2*ell + 1)
        n_site (int): Number of independent sites N_site
        constants (PhysicalConstants): Constants used by derived quantities
        psi (float): Reduced phase Aθ₀ mod 2π; computed from fields if None
    """

    delta_e: float
    tau: float
    h_spacing: float
    theta0: float = 1.0
    g: float = None
    ell: int = 0
    n_site: int = 1
    constants: PhysicalConstants = CODATA_2018
    psi: float = None

    def __post_init__(self):
        if self.g is None:
            object.__setattr__(self, "g", self.constants.g_default)

        if not (math.isfinite(self.delta_e) and self.delta_e > 0):
            raise NonPositiveInput(f"delta_e must be positive, got {self.delta_e}")
        if not (math.isfinite(self.tau) and self.tau >= 0):
            raise NonPositiveInput(f"tau must not be negative, got {self.tau}")
        if not (math.isfinite(self.h_spacing) and self.h_spacing > 0):
            raise NonPositiveInput(f"h_spacing must be positive, got {self.h_spacing}")
        if not (math.isfinite(self.g) and self.g > 0):
            raise NonPositiveInput(f"g must be positive, got {self.g}")
        if not math.isfinite(self.theta0):
            raise ValidationError("theta0 must be finite")
        if isinstance(self.ell, bool) or not isinstance(self.ell, int) or self.ell < 0:
            raise ValidationError(f"ell must be a non-negative integer, got {self.ell}")
        if isinstance(self.n_site, bool) or not isinstance(self.n_site, int) or self.n_site < 1:
            raise ValidationError(f"n_site must be a positive integer, got {self.n_site}")
        if self.psi is not None and not math.isfinite(self.psi):
            raise ValidationError("psi must be finite")

    @classmethod
    def dimensionless(cls, a, alpha, psi=None, ell=0, n_site=1, theta0=1.0):
        """
        Build a config in units ħ = c = g = ΔE = 1 with τ = A and h = α.

        Args:
            a (float): Accumulated phase rate A = ΔEτ/ħ (>= 0)
            alpha (float): Per-layer detuning α = gh/c² (> 0)
            psi (float): Reduced phase; A·θ₀ mod 2π if None
            ell (int): Layer half-count
            n_site (int): Number of sites
            theta0 (float): Redshift parameter

        Returns:
            ClockConfig: Config whose derived a and alpha equal the inputs
        """
        return cls(
            delta_e=1.0,
            tau=a,
            h_spacing=alpha,
            theta0=theta0,
            g=1.0,
            ell=ell,
            n_site=n_site,
            constants=DIMENSIONLESS,
            psi=psi,
        )

    def replace(self, **changes):
        """Return a copy with some fields changed."""
        return dataclasses.replace(self, **changes)

    @property
    def n_layer(self):
        return 2 * self.ell + 1

    @property
    def a(self):
        """A = ΔEτ/ħ."""
        return self.delta_e * self.tau / self.constants.hbar

    @property
    def alpha(self):
        """α = gh/c²."""
        return self.g * self.h_spacing / self.constants.c_squared

    @property
    def a_alpha_half(self):
        """Aα/2 = ΔE·g·h·τ/(2ħc²), formed in one expression."""
        return (
            self.delta_e * self.g * self.h_spacing * self.tau
            / (2.0 * self.constants.hbar * self.constants.c * self.constants.c)
        )

    @property
    def psi_reduced(self):
        """Reduced phase Aθ₀ mod 2π."""
        if self.psi is not None:
            return self.psi % TWO_PI
        return reduce_phase(self.delta_e, self.tau, self.theta0, self.constants.hbar)


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 3: HAMILTONIANS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Reduced clock Hamiltonian per layer
#
# Key components:
# - hamiltonian(): H_j = (ΔE/2)(θ₀ + jα)σz
#
# Note: The single-layer Hamiltonian is the j = 0 case with V₀ at the layer
# ═══════════════════════════════════════════════════════════════════════════


def hamiltonian(cfg, layer_j=0):
    """
    Reduced Hamiltonian of layer j, with constant terms discarded.

    Args:
        cfg (ClockConfig): Clock configuration
        layer_j (int): Layer index, -ell <= j <= ell

    Returns:
        numpy.ndarray: Diagonal Hermitian Operator2

    Raises:
        LayerOutOfRange: If |layer_j| > ell
    """
    if abs(layer_j) > cfg.ell:
        raise LayerOutOfRange(
            f"Layer index {layer_j} outside -{cfg.ell}..{cfg.ell}"
        )

    energy = 0.5 * cfg.delta_e * (cfg.theta0 + layer_j * cfg.alpha)
    return operator2(energy * SIGMA_Z)


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 4: VISIBILITY
# ═══════════════════════════════════════════════════════════════════════════
# Description: Dirichlet-kernel coherence factor of the layer average
#
# Key components:
# - Visibility: D in [-1, 1]
# - dirichlet_visibility(): sin(n x)/(n sin x), x = Aα/2
# ═══════════════════════════════════════════════════════════════════════════


@dataclass(frozen=True)
class Visibility:
    """Off-diagonal coherence factor D of the layer-averaged state."""

    value: float

    def __post_init__(self):
        if not abs(self.value) <= 1.0 + VISIBILITY_BOUND_TOL:
            raise ValidationError(f"Visibility must lie in [-1, 1], got {self.value}")

    def __float__(self):
        return float(self.value)


def dirichlet_visibility(a_alpha_half, n_layer):
    """
    Dirichlet factor (1/n) Σ_{j=-ell}^{ell} e^{2ijx} = sin(nx)/(n sin x).

    Near the removable singularities sin x = 0 the cosine-sum form
    (1 + 2 Σ_j cos 2jx)/n is used; its limit there is +1 for odd n.
    Values within VISIBILITY_ZERO_TOL of zero are returned as exactly 0,
    which is how divergence of the bound is detected downstream.

    Args:
        a_alpha_half (float): x = Aα/2
        n_layer (int): Odd layer count 2*ell + 1

    Returns:
        Visibility: The factor D

    Raises:
        EvenLayerCount: If n_layer is even

    Example:
        dirichlet_visibility(math.pi / 10, 5).value  # 0.647214
    """
    n_layer = validate_odd_layer_count(n_layer)
    if n_layer == 1:
        return Visibility(1.0)

    x = float(a_alpha_half)
    sin_x = math.sin(x)

    if abs(sin_x) < SINGULAR_SIN_TOL:
        j = np.arange(1, (n_layer - 1) // 2 + 1)
        value = (1.0 + 2.0 * float(np.sum(np.cos(2.0 * j * x)))) / n_layer
    else:
        value = math.sin(n_layer * x) / (n_layer * sin_x)

    if abs(value) < VISIBILITY_ZERO_TOL:
        value = 0.0

    return Visibility(min(1.0, max(-1.0, value)))


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 5: EVOLVED STATES
# ═══════════════════════════════════════════════════════════════════════════
# Description: States after Ramsey-type interrogation for time τ
#
# Key components:
# - single_layer_state(): Pure state (1/2)[I + e^{-iψ}|0><1| + e^{iψ}|1><0|]
# - multilayer_state(): (1/2)[(1+D)|ψ+><ψ+| + (1-D)|ψ-><ψ-|]
# - brute_force_multilayer_state(): Direct average over layers
# - drho_dtheta0() / drho_finite_difference(): ∂ρ/∂θ₀
# ═══════════════════════════════════════════════════════════════════════════


def _coherent_state(psi, visibility=1.0):
    off = 0.5 * visibility * np.exp(-1j * psi)
    return np.array([[0.5, off], [np.conj(off), 0.5]], dtype=np.complex128)


def single_layer_state(cfg):
    """
    Pure state of a single-layer clock after interrogation time τ.

    Args:
        cfg (ClockConfig): Clock configuration (ell is ignored)

    Returns:
        DensityOperator: ρ = (1/2)[I + e^{-iAθ₀}|0><1| + e^{iAθ₀}|1><0|]
    """
    return validate_density(_coherent_state(cfg.psi_reduced))


def psi_pm(psi):
    """
    Eigenvectors |ψ±> = (|0> ± e^{iψ}|1>)/√2 of the layer-averaged state.

    Args:
        psi (float): Reduced phase

    Returns:
        tuple: (|ψ+>, |ψ->) as complex 2-vectors
    """
    phase = np.exp(1j * psi)
    plus = np.array([1.0, phase], dtype=np.complex128) / math.sqrt(2.0)
    minus = np.array([1.0, -phase], dtype=np.complex128) / math.sqrt(2.0)
    return plus, minus


def multilayer_state(cfg):
    """
    Ensemble-averaged state of 2*ell + 1 indistinguishable layers.

    Args:
        cfg (ClockConfig): Clock configuration

    Returns:
        tuple: (DensityOperator, Visibility)

    Example:
        rho, visibility = multilayer_state(ClockConfig.dimensionless(1.0, 0.2, ell=2))
    """
    visibility = dirichlet_visibility(cfg.a_alpha_half, cfg.n_layer)
    d = visibility.value
    plus, minus = psi_pm(cfg.psi_reduced)

    rho = 0.5 * (
        (1.0 + d) * np.outer(plus, np.conj(plus))
        + (1.0 - d) * np.outer(minus, np.conj(minus))
    )
    return validate_density(rho), visibility


def brute_force_multilayer_state(cfg):
    """
    Average the single-layer states of every layer directly.

    Layer j accumulates phase A(θ₀ + jα) = ψ + 2j·(Aα/2).

    Args:
        cfg (ClockConfig): Clock configuration

    Returns:
        DensityOperator: (1/(2ell+1)) Σ_j ρ_j
    """
    psi = cfg.psi_reduced
    x = cfg.a_alpha_half
    total = np.zeros((2, 2), dtype=np.complex128)
    for j in range(-cfg.ell, cfg.ell + 1):
        total += _coherent_state(psi + 2.0 * j * x)
    return validate_density(total / cfg.n_layer)


def drho_dtheta0(cfg):
    """
    Analytic derivative ∂ρ/∂θ₀ of the layer-averaged state.

    Only the off-diagonal phases depend on θ₀; D depends on A and α only.

    Args:
        cfg (ClockConfig): Clock configuration

    Returns:
        numpy.ndarray: Traceless Hermitian Operator2
    """
    d = dirichlet_visibility(cfg.a_alpha_half, cfg.n_layer).value
    off = -0.5j * cfg.a * d * np.exp(-1j * cfg.psi_reduced)
    return operator2([[0.0, off], [np.conj(off), 0.0]])


def drho_finite_difference(cfg, step=1e-6):
    """
    Central-difference ∂ρ/∂θ₀ (test oracle for drho_dtheta0).

    Args:
        cfg (ClockConfig): Clock configuration
        step (float): Step in θ₀

    Returns:
        numpy.ndarray: Finite-difference derivative
    """
    if cfg.psi is None:
        upper = cfg.replace(theta0=cfg.theta0 + step)
        lower = cfg.replace(theta0=cfg.theta0 - step)
    else:
        upper = cfg.replace(psi=cfg.psi + cfg.a * step)
        lower = cfg.replace(psi=cfg.psi - cfg.a * step)

    rho_upper, _ = multilayer_state(upper)
    rho_lower, _ = multilayer_state(lower)
    return operator2((rho_upper.op - rho_lower.op) / (2.0 * step))
