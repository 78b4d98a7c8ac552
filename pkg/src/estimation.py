# ═══════════════════════════════════════════════════════════════════════════
# IMPORTS
# ═══════════════════════════════════════════════════════════════════════════
# Description: SLD Fisher information and quantum Cramér–Rao bounds
#
# External libraries:
# - numpy: Operator arithmetic, log-spaced scans
# Internal modules: operator_algebra, clock_model, validation
# ═══════════════════════════════════════════════════════════════════════════

import math
from dataclasses import dataclass, field

import numpy as np

from clock_model import dirichlet_visibility
from operator_algebra import (
    EIG_HERMITICITY_TOL,
    eig_hermitian,
    is_hermitian,
    operator2,
    trace,
)
from validation import (
    NonPositiveInput,
    NotHermitian,
    SingleLayerNoDivergence,
    TraceNotZero,
    validate_positive_int,
)


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 1: CONSTANTS & RESULT TYPES
# ═══════════════════════════════════════════════════════════════════════════
# Description: Thresholds and the records returned by this module
#
# Key components:
# - SldResult: SLD operator and its Fisher information
# - CrbReport: Cramér–Rao bounds on θ₀ and V₀ with a divergence flag
# - TimeMarks: Divergence times, τ_min and the approximate bound there
# ═══════════════════════════════════════════════════════════════════════════

DRHO_TRACE_TOL = 1e-10
SLD_WEIGHT_FLOOR = 1e-14
PRESCAN_POINTS = 1024
PRESCAN_DECADES = 3
GOLDEN_TOL = 1e-12
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0


@dataclass(frozen=True, eq=False)
class SldResult:
    """Symmetric logarithmic derivative and SLD Fisher information."""

    sld: np.ndarray
    qfi: float


@dataclass(frozen=True)
class CrbReport:
    """
    Quantum Cramér–Rao lower bounds for N_site independent clocks.

    Attributes:
        qfi_per_atom (float): SLD Fisher information per unit θ₀²
        var_theta0_lower (float): Lower bound on Var[θ₀], inf when diverged
        var_v0_lower_over_c4 (float): Lower bound on Var[V₀]/c⁴
        sigma_v0_lower (float): Lower bound on σ(V₀), m²/s²
        diverged (bool): True when the Fisher information vanishes
    """

    qfi_per_atom: float
    var_theta0_lower: float
    var_v0_lower_over_c4: float
    sigma_v0_lower: float
    diverged: bool


@dataclass(frozen=True)
class TimeMarks:
    """Divergence times, first optimum time and the bound there."""

    tau_div: list = field(default_factory=list)
    tau_min: float = 0.0
    bound_at_min_over_c4: float = 0.0


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 2: SYMMETRIC LOGARITHMIC DERIVATIVE
# ═══════════════════════════════════════════════════════════════════════════
# Description: Generic SLD from the spectral decomposition of ρ
#
# Key components:
# - sld_generic(): L_jk = 2<j|∂ρ|k>/(p_j + p_k) in the eigenbasis of ρ
# - sld_residual(): ||∂ρ - (ρL + Lρ)/2||_F
#
# Note: Elements with p_j + p_k below SLD_WEIGHT_FLOOR are set to 0; they do
# not change the Fisher information
# ═══════════════════════════════════════════════════════════════════════════


def sld_generic(rho, drho):
    """
    Solve ∂ρ = (ρL + Lρ)/2 for the SLD and return it with its Fisher information.

    Args:
        rho (DensityOperator): State ρ_θ
        drho (numpy.ndarray): Derivative ∂ρ/∂θ (Hermitian, traceless)

    Returns:
        SldResult: L and tr(ρL²)

    Raises:
        NotHermitian: If drho is not Hermitian
        TraceNotZero: If tr(drho) differs from 0 by more than 1e-10
    """
    drho = operator2(drho)
    if not is_hermitian(drho, EIG_HERMITICITY_TOL):
        raise NotHermitian("State derivative must be Hermitian")
    if abs(trace(drho)) > DRHO_TRACE_TOL:
        raise TraceNotZero(f"State derivative must be traceless, got {trace(drho):.3g}")

    spectrum = eig_hermitian(rho.op)
    basis = np.column_stack(spectrum.eigenvectors)
    p = np.array(spectrum.eigenvalues)

    drho_eig = np.conj(basis).T @ drho @ basis
    weights = p[:, None] + p[None, :]
    sld_eig = np.zeros((2, 2), dtype=np.complex128)
    mask = weights > SLD_WEIGHT_FLOOR
    sld_eig[mask] = 2.0 * drho_eig[mask] / weights[mask]

    sld = basis @ sld_eig @ np.conj(basis).T
    sld = operator2((sld + np.conj(sld).T) / 2.0)

    qfi = float(np.real(trace(rho.op @ sld @ sld)))
    return SldResult(sld=sld, qfi=qfi)


def sld_residual(rho, drho, sld):
    """Frobenius norm of ∂ρ - (ρL + Lρ)/2."""
    anticommutator = (rho.op @ sld + sld @ rho.op) / 2.0
    return float(np.linalg.norm(drho - anticommutator, ord="fro"))


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 3: CLOSED-FORM FISHER INFORMATION & BOUNDS
# ═══════════════════════════════════════════════════════════════════════════
# Description: SLD Fisher information of the clock states and the bounds
#
# Key components:
# - qfi_single_layer(): S = A²
# - qfi_multilayer(): S = (A·D)²
# - crb_report(): Var[θ₀] >= 1/(N_site S), σ(V₀) = c²·sqrt(bound)
# - exact_bound() / exact_bound_at(): Var[V₀]/c⁴ bound, optionally at another τ
# - sql_sigma(): Standard-quantum-limit instability
# - potential_error_from_phase(): δV₀ = (ħc²/ΔEτ)·δψ
# ═══════════════════════════════════════════════════════════════════════════


def qfi_single_layer(cfg):
    """
    SLD Fisher information of the single-layer clock, S = (ΔEτ/ħ)².

    Args:
        cfg (ClockConfig): Clock configuration

    Returns:
        float: A²
    """
    return cfg.a ** 2


def qfi_multilayer(cfg):
    """
    SLD Fisher information of the layer-averaged state, S = (A·D)².

    Args:
        cfg (ClockConfig): Clock configuration

    Returns:
        float: (A·D)²; 0 at the divergence times
    """
    d = dirichlet_visibility(cfg.a_alpha_half, cfg.n_layer).value
    return (cfg.a * d) ** 2


def crb_report(cfg):
    """
    Quantum Cramér–Rao bounds on θ₀ and V₀ for N_site independent sites.

    Var[V₀]/c⁴ equals Var[θ₀] because V₀ = c²(θ₀ - 1).

    Args:
        cfg (ClockConfig): Clock configuration

    Returns:
        CrbReport: Bounds; infinite with diverged=True when S = 0

    Example:
        report = crb_report(ClockConfig.dimensionless(1.0, 0.1))
        report.var_theta0_lower  # 1.0
    """
    qfi = qfi_multilayer(cfg)

    if qfi > 0.0:
        var_theta0 = 1.0 / (cfg.n_site * qfi)
        diverged = False
    else:
        var_theta0 = math.inf
        diverged = True

    return CrbReport(
        qfi_per_atom=qfi,
        var_theta0_lower=var_theta0,
        var_v0_lower_over_c4=var_theta0,
        sigma_v0_lower=cfg.constants.c_squared * math.sqrt(var_theta0),
        diverged=diverged,
    )


def exact_bound(cfg):
    """Var[V₀]/c⁴ lower bound of cfg; inf at the divergence times."""
    return crb_report(cfg).var_v0_lower_over_c4


def exact_bound_at(cfg, tau):
    """Var[V₀]/c⁴ lower bound of cfg with the interrogation time set to tau."""
    return exact_bound(cfg.replace(tau=tau))


def sql_sigma(tau, t_cycle, tau_avg, n_site, omega0, xi_w_sq=1.0):
    """
    Standard-quantum-limit instability σ = (1/ω₀τ)·sqrt(T_C/τ_avg)·sqrt(ξ_W²/N_site).

    With ξ_W² = 1 and T_C = τ_avg its square is the single-layer bound
    1/(N_site (ω₀τ)²).

    Args:
        tau (float): Interrogation time, s
        t_cycle (float): Cycle time T_C, s
        tau_avg (float): Averaging time, s
        n_site (int): Number of atoms
        omega0 (float): Clock angular frequency ΔE/ħ, rad/s
        xi_w_sq (float): Wineland squeezing parameter squared

    Returns:
        float: σ

    Raises:
        NonPositiveInput: If any input is not strictly positive
    """
    inputs = {
        "tau": tau,
        "t_cycle": t_cycle,
        "tau_avg": tau_avg,
        "n_site": n_site,
        "omega0": omega0,
        "xi_w_sq": xi_w_sq,
    }
    for name, value in inputs.items():
        if not (math.isfinite(value) and value > 0):
            raise NonPositiveInput(f"{name} must be positive, got {value}")

    return (
        (1.0 / (omega0 * tau))
        * math.sqrt(t_cycle / tau_avg)
        * math.sqrt(xi_w_sq / n_site)
    )


def potential_error_from_phase(cfg, delta_psi):
    """
    Convert a phase error into a potential error, δV₀ = (ħc²/ΔEτ)·δψ.

    Valid locally, within one fringe.

    Args:
        cfg (ClockConfig): Clock configuration (tau > 0)
        delta_psi (float): Phase error, rad

    Returns:
        float: δV₀, m²/s²

    Raises:
        NonPositiveInput: If tau is 0
    """
    if cfg.tau <= 0:
        raise NonPositiveInput("tau must be positive to convert a phase error")
    constants = cfg.constants
    return constants.hbar * constants.c_squared * delta_psi / (cfg.delta_e * cfg.tau)


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 4: DIVERGENCE & OPTIMUM TIMES
# ═══════════════════════════════════════════════════════════════════════════
# Description: Where the multilayer bound diverges and where it is smallest
#
# Key components:
# - tau_min_formula(): τ_min = πħc²/(ΔE g h N_layer), any N_layer >= 1
# - time_marks(): τ_div(k) = (k/N_layer)(2πħc²/ΔE g h), τ_min, bound at τ_min
# - golden_section_min(): Bracketed golden-section minimizer
# - locate_min_exact(): Minimize the exact bound over (0, τ_div(1))
# - limit_sigma(): σ(V₀)/c² limit in potential-difference and aspect-ratio form
# ═══════════════════════════════════════════════════════════════════════════


def _dephasing_period(delta_e, g, h_spacing, constants):
    return 2.0 * math.pi * constants.hbar * constants.c_squared / (delta_e * g * h_spacing)


def tau_min_formula(delta_e, g, h_spacing, n_layer, constants):
    """
    First local minimum of the small-angle bound, τ_min = πħc²/(ΔE g h N_layer).

    The layer count enters only as a scale factor here, so even counts
    (e.g. 100 atoms per side) are accepted.

    Args:
        delta_e (float): Transition energy, J
        g (float): Gravitational acceleration, m/s²
        h_spacing (float): Interlayer distance, m
        n_layer (int): Number of layers
        constants (PhysicalConstants): Constants

    Returns:
        float: τ_min, s
    """
    n_layer = validate_positive_int(n_layer, "Layer count")
    return _dephasing_period(delta_e, g, h_spacing, constants) / (2.0 * n_layer)


def time_marks(cfg, k_max=5):
    """
    Divergence times, first optimum time and the approximate bound there.

    Args:
        cfg (ClockConfig): Clock configuration with ell >= 1
        k_max (int): Largest k considered for τ_div(k)

    Returns:
        TimeMarks: τ_div for k = 1..k_max except multiples of N_layer,
        τ_min, and (1/N_site)[g N_layer h/(2c²)]²

    Raises:
        SingleLayerNoDivergence: If ell = 0
        ValidationError: If k_max < 1
    """
    if cfg.ell == 0:
        raise SingleLayerNoDivergence("A single-layer clock has no divergence times")
    k_max = validate_positive_int(k_max, "k_max")

    n = cfg.n_layer
    period = _dephasing_period(cfg.delta_e, cfg.g, cfg.h_spacing, cfg.constants)
    tau_div = [k * period / n for k in range(1, k_max + 1) if k % n != 0]

    half_delta_v = cfg.g * n * cfg.h_spacing / (2.0 * cfg.constants.c_squared)
    return TimeMarks(
        tau_div=tau_div,
        tau_min=tau_min_formula(cfg.delta_e, cfg.g, cfg.h_spacing, n, cfg.constants),
        bound_at_min_over_c4=half_delta_v ** 2 / cfg.n_site,
    )


def golden_section_min(func, lo, hi, tol=GOLDEN_TOL, max_iter=200):
    """
    Golden-section search for a minimum of func on [lo, hi].

    Args:
        func (callable): Scalar objective
        lo (float): Lower end of the bracket
        hi (float): Upper end of the bracket
        tol (float): Stop when the bracket is narrower than tol·(|lo| + |hi|)
        max_iter (int): Iteration cap

    Returns:
        tuple: (x, func(x)) at the best point found
    """
    if hi < lo:
        lo, hi = hi, lo

    width = hi - lo
    c = lo + INV_PHI_SQ * width
    d = lo + INV_PHI * width
    fc = func(c)
    fd = func(d)

    for _ in range(max_iter):
        if hi - lo <= tol * (abs(lo) + abs(hi)) or hi - lo == 0.0:
            break
        if fc < fd:
            hi, d, fd = d, c, fc
            c = lo + INV_PHI_SQ * (hi - lo)
            fc = func(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + INV_PHI * (hi - lo)
            fd = func(d)

    return (c, fc) if fc < fd else (d, fd)


def locate_min_exact(cfg):
    """
    Numerically minimize the exact multilayer bound over 0 < τ < τ_div(1).

    A log-spaced pre-scan of PRESCAN_POINTS times brackets the minimum,
    which golden-section search then refines.

    Args:
        cfg (ClockConfig): Clock configuration with ell >= 1 (tau is ignored)

    Returns:
        tuple: (τ*, Var[V₀]/c⁴ bound at τ*)

    Raises:
        SingleLayerNoDivergence: If ell = 0
    """
    marks = time_marks(cfg, k_max=1)
    tau_div_1 = marks.tau_div[0]

    taus = np.logspace(
        math.log10(tau_div_1) - PRESCAN_DECADES,
        math.log10(tau_div_1),
        PRESCAN_POINTS + 2,
    )[1:-1]
    bounds = np.array([exact_bound_at(cfg, float(t)) for t in taus])

    best = int(np.argmin(bounds))
    lo = float(taus[max(best - 1, 0)])
    hi = float(taus[min(best + 1, len(taus) - 1)])

    tau_star, bound_star = golden_section_min(lambda t: exact_bound_at(cfg, t), lo, hi)
    if bounds[best] < bound_star:
        tau_star, bound_star = float(taus[best]), float(bounds[best])
    return tau_star, bound_star


def limit_sigma(cfg):
    """
    Limiting σ(V₀)/c² in its two equivalent forms.

    Args:
        cfg (ClockConfig): Clock configuration

    Returns:
        tuple: (ΔV/(2c²·sqrt(N_site)) with ΔV = g N_layer h,
                (N_layer/sqrt(N_site))·gh/(2c²))
    """
    c_sq = cfg.constants.c_squared
    sqrt_n_site = math.sqrt(cfg.n_site)
    delta_v = cfg.g * cfg.n_layer * cfg.h_spacing

    potential_form = delta_v / (2.0 * c_sq * sqrt_n_site)
    aspect_form = (cfg.n_layer / sqrt_n_site) * cfg.g * cfg.h_spacing / (2.0 * c_sq)
    return potential_form, aspect_form
