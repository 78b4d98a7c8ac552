# ═══════════════════════════════════════════════════════════════════════════
# IMPORTS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Atom catalog, unit conversions and figure/table data emission
#
# External libraries:
# - csv: Deterministic CSV output
# - matplotlib: Optional SVG rendering of bound curves (Agg backend)
# Internal modules: clock_model, estimation, measurement_sim, validation
# ═══════════════════════════════════════════════════════════════════════════

import csv
import math
from dataclasses import dataclass

from clock_model import CODATA_2018, ClockConfig
from estimation import crb_report, tau_min_formula
from measurement_sim import wrap_angle
from validation import (
    NonPositiveWavelength,
    UnknownAtom,
    ValidationError,
    validate_atom_name,
    validate_odd_layer_count,
    validate_positive_float,
    validate_positive_int,
)


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 1: ATOM CATALOG
# ═══════════════════════════════════════════════════════════════════════════
# Description: Clock and magic wavelengths of lattice-clock species
#
# Key components:
# - AtomSpec: name, clock/magic wavelength (nm), published τ_min (s)
# - ATOM_CATALOG: Sr, Yb, Cd, Hg, Mg
# - get_atom(): Case-insensitive lookup
#
# Note: reference_tau_min is the published two-significant-figure value at
# 100 layers, kept for comparison only
# ═══════════════════════════════════════════════════════════════════════════

NM = 1e-9
REFERENCE_LAYERS = 100
SIGNIFICANT_DIGITS = 12


@dataclass(frozen=True)
class AtomSpec:
    """A lattice-clock species."""

    name: str
    clock_wavelength: float
    magic_wavelength: float
    reference_tau_min: float

    def __post_init__(self):
        if self.clock_wavelength <= 0 or self.magic_wavelength <= 0:
            raise NonPositiveWavelength(f"{self.name}: wavelengths must be positive")


ATOM_CATALOG = {
    "Sr": AtomSpec("Sr", 698.0, 813.0, 1.3e5),
    "Yb": AtomSpec("Yb", 578.0, 759.0, 1.2e5),
    "Cd": AtomSpec("Cd", 332.0, 420.0, 1.2e5),
    "Hg": AtomSpec("Hg", 266.0, 363.0, 1.1e5),
    "Mg": AtomSpec("Mg", 458.0, 468.0, 1.5e5),
}


def get_atom(name):
    """
    Look up an atom by symbol.

    Args:
        name (str): Symbol, any case (e.g. "cd")

    Returns:
        AtomSpec: Catalog entry

    Raises:
        UnknownAtom: If the symbol is not in the catalog
    """
    symbol = validate_atom_name(name)
    if symbol not in ATOM_CATALOG:
        raise UnknownAtom(
            f"Unknown atom '{name}'. Choose from: {', '.join(ATOM_CATALOG)}"
        )
    return ATOM_CATALOG[symbol]


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 2: UNIT CONVERSIONS & τ_min
# ═══════════════════════════════════════════════════════════════════════════
# Description: Wavelength to energy, and the optimum time per atom
#
# Key components:
# - wavelength_to_energy(): ΔE = hc/λ
# - tau_min_for_atom(): ΔE from the clock wavelength, h = magic wavelength
# - atoms_table(): Computed vs published τ_min for every catalog atom
# ═══════════════════════════════════════════════════════════════════════════


def wavelength_to_energy(wavelength_nm, constants=CODATA_2018):
    """
    Photon energy of a transition, ΔE = hc/λ.

    Args:
        wavelength_nm (float): Wavelength, nm
        constants (PhysicalConstants): Planck h and c

    Returns:
        float: Energy, J

    Raises:
        NonPositiveWavelength: If wavelength_nm <= 0

    Example:
        wavelength_to_energy(332)  # 5.98e-19
    """
    if not (math.isfinite(wavelength_nm) and wavelength_nm > 0):
        raise NonPositiveWavelength(f"Wavelength must be positive, got {wavelength_nm}")
    return constants.planck_h * constants.c / (wavelength_nm * NM)


def tau_min_for_atom(atom, n_layer, g=None, constants=CODATA_2018):
    """
    First optimum interrogation time for a clock built from an atom species.

    The layer spacing is the magic wavelength, as atoms sit at the antinodes
    of the lattice standing wave.

    Args:
        atom (AtomSpec): Species
        n_layer (int): Number of layers (the 100-per-side cube uses 100)
        g (float): Gravitational acceleration; constants.g_default if None
        constants (PhysicalConstants): Constants

    Returns:
        float: τ_min, s
    """
    g = constants.g_default if g is None else validate_positive_float(g, "g")
    delta_e = wavelength_to_energy(atom.clock_wavelength, constants)
    h_spacing = atom.magic_wavelength * NM
    return tau_min_formula(delta_e, g, h_spacing, n_layer, constants)


def atoms_table(n_layer=REFERENCE_LAYERS, g=None, constants=CODATA_2018):
    """
    Reproduce the published τ_min table.

    Args:
        n_layer (int): Number of layers
        g (float): Gravitational acceleration; constants.g_default if None
        constants (PhysicalConstants): Constants

    Returns:
        list: Row dictionaries with keys atom, clock_nm, magic_nm, tau_min_s,
        paper_tau_min_s, rel_dev
    """
    rows = []
    for atom in ATOM_CATALOG.values():
        tau_min = tau_min_for_atom(atom, n_layer, g, constants)
        rows.append(
            {
                "atom": atom.name,
                "clock_nm": atom.clock_wavelength,
                "magic_nm": atom.magic_wavelength,
                "tau_min_s": tau_min,
                "paper_tau_min_s": atom.reference_tau_min,
                "rel_dev": abs(tau_min - atom.reference_tau_min) / atom.reference_tau_min,
            }
        )
    return rows


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 3: BOUND CURVES
# ═══════════════════════════════════════════════════════════════════════════
# Description: N_site·Var[V₀]/c⁴ bound against A = ΔEτ/ħ
#
# Key components:
# - CurvePoint: (x, y, diverged)
# - emit_fig2(): Single layer, y = 1/x²
# - emit_fig4(): N layers, y = 1/(x² D²) with divergence flags
# ═══════════════════════════════════════════════════════════════════════════


@dataclass(frozen=True)
class CurvePoint:
    """One point of a bound curve; y is inf when diverged."""

    x: float
    y: float
    diverged: bool = False


def _curve_grid(a_max, n_points):
    a_max = validate_positive_float(a_max, "a_max")
    n_points = validate_positive_int(n_points, "Point count")
    if n_points < 2:
        raise ValidationError("Point count must be at least 2")
    return [a_max * i / n_points for i in range(1, n_points + 1)]


def emit_fig2(a_max, n_points):
    """
    Single-layer bound curve on a uniform grid excluding x = 0.

    Args:
        a_max (float): Largest x = ΔEτ/ħ
        n_points (int): Number of grid points (>= 2)

    Returns:
        list: CurvePoint values with y = 1/x²
    """
    return [CurvePoint(x=x, y=1.0 / x ** 2) for x in _curve_grid(a_max, n_points)]


def emit_fig4(n_layer, alpha, a_max, n_points):
    """
    Multilayer bound curve, y = (1/x²)(n sin(xα/2)/sin(xαn/2))².

    Points where the Dirichlet factor vanishes are flagged diverged with
    y = inf. With n_layer = 1 the values equal emit_fig2 exactly.

    Args:
        n_layer (int): Odd number of layers
        alpha (float): Dimensionless per-layer detuning gh/c²
        a_max (float): Largest x
        n_points (int): Number of grid points (>= 2)

    Returns:
        list: CurvePoint values
    """
    n_layer = validate_odd_layer_count(n_layer)
    alpha = validate_positive_float(alpha, "alpha")
    ell = (n_layer - 1) // 2

    points = []
    for x in _curve_grid(a_max, n_points):
        report = crb_report(ClockConfig.dimensionless(x, alpha, ell=ell))
        points.append(
            CurvePoint(x=x, y=report.var_v0_lower_over_c4, diverged=report.diverged)
        )
    return points


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 4: CSV & SVG OUTPUT
# ═══════════════════════════════════════════════════════════════════════════
# Description: Byte-stable file emission
#
# Key components:
# - format_number(): 12 significant digits, '.' separator, 'inf' sentinel
# - write_curve_csv(): x,y,diverged
# - write_simulation_csv(): trial,n_samples,psi_true,psi_hat,sq_err
# - write_atoms_table_csv(): atom,clock_nm,magic_nm,tau_min_s,paper_tau_min_s,rel_dev
# - render_curve_svg(): Line plot of a curve with matplotlib
# ═══════════════════════════════════════════════════════════════════════════

CURVE_HEADER = ["x", "y", "diverged"]
SIMULATION_HEADER = ["trial", "n_samples", "psi_true", "psi_hat", "sq_err"]
ATOMS_HEADER = ["atom", "clock_nm", "magic_nm", "tau_min_s", "paper_tau_min_s", "rel_dev"]


def format_number(value):
    """
    Format a float with 12 significant digits.

    Args:
        value (float): Number to format

    Returns:
        str: e.g. "0.01", "1.2083e+05", "inf"
    """
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(float(value), f".{SIGNIFICANT_DIGITS}g")


def _writer(stream):
    return csv.writer(stream, lineterminator="\n")


def write_curve_csv(points, stream):
    """Write CurvePoint rows as x,y,diverged."""
    writer = _writer(stream)
    writer.writerow(CURVE_HEADER)
    for point in points:
        writer.writerow(
            [
                format_number(point.x),
                format_number(point.y),
                "true" if point.diverged else "false",
            ]
        )


def write_simulation_csv(run, stream):
    """
    Write one row per trial of an EstimationRun.

    Args:
        run (EstimationRun): Simulation result
        stream (TextIO): Destination opened with newline=""
    """
    writer = _writer(stream)
    writer.writerow(SIMULATION_HEADER)
    for trial, psi_hat in enumerate(run.estimates):
        error = wrap_angle(psi_hat - run.psi_true)
        writer.writerow(
            [
                trial,
                run.n_samples,
                format_number(run.psi_true),
                format_number(psi_hat),
                format_number(error ** 2),
            ]
        )


def write_atoms_table_csv(rows, stream):
    """Write atoms_table() rows."""
    writer = _writer(stream)
    writer.writerow(ATOMS_HEADER)
    for row in rows:
        writer.writerow(
            [row["atom"]] + [format_number(row[key]) for key in ATOMS_HEADER[1:]]
        )


def render_curve_svg(points, path, title):
    """
    Render a bound curve as an SVG line plot (log y axis).

    Diverged points are left out, which breaks the line at each divergence.

    Args:
        points (list): CurvePoint values
        path (str | Path): Output file
        title (str): Plot title
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    xs = [p.x for p in points]
    ys = [p.y if not p.diverged else float("nan") for p in points]

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy(xs, ys, "k-", linewidth=1.5)
    ax.set_xlabel(r"$\Delta E \tau / \hbar$")
    ax.set_ylabel(r"$N_{site}\,\mathrm{Var}[V_0]/c^4$ lower bound")
    ax.set_title(title)
    ax.grid(True, which="both", ls="-", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
