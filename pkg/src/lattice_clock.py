# ═══════════════════════════════════════════════════════════════════════════
# IMPORTS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Command-line entry point for lattice clock gravimetry bounds
#
# External libraries: argparse, sys
# Internal modules: atoms_report, clock_model, config, estimation,
#                   measurement_sim, activity_log, validation
#
# Exit codes: 0 success, 2 usage or validation error, 1 runtime error
# ═══════════════════════════════════════════════════════════════════════════

import argparse
import math
import sys

from activity_log import (
    clear_logs,
    display_logs,
    get_all_logs,
    get_flagged_logs,
    log_activity,
)
from atoms_report import (
    REFERENCE_LAYERS,
    atoms_table,
    emit_fig2,
    emit_fig4,
    format_number,
    get_atom,
    render_curve_svg,
    tau_min_for_atom,
    write_atoms_table_csv,
    write_curve_csv,
    write_simulation_csv,
)
from config import clock_config_from_mapping, constants_from_mapping, load_config
from estimation import crb_report, limit_sigma, locate_min_exact, time_marks
from measurement_sim import (
    OutcomeModel,
    PhasePovm,
    classical_fisher_quadrature,
    run_simulation,
)
from validation import (
    ValidationError,
    validate_float,
    validate_non_negative_int,
    validate_positive_float,
    validate_positive_int,
    validate_visibility,
)


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 1: CONSTANTS & OUTPUT HELPERS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Shared formatting for console output
#
# Key components:
# - print_header(): Section title banner
# - write_text_file(): Open an output file for deterministic CSV
# ═══════════════════════════════════════════════════════════════════════════

EXIT_OK = 0
EXIT_RUNTIME_ERROR = 1
EXIT_USAGE_ERROR = 2

TABLE_TOLERANCE = 0.05
MSE_BAND = (0.9, 1.2)
DEFAULT_A_MAX = 20.0
DEFAULT_POINTS = 2000


def print_header(title):
    """Print a section title between rules."""
    print("\n" + "=" * 70)
    print(f"  {title}")
    print("=" * 70)


def write_text_file(path, writer, payload):
    """Write payload with writer(payload, stream) to path, '\\n' line endings."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer(payload, f)


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 2: CLOCK CONFIG FROM ARGUMENTS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Clock flags shared by crb, time-marks and limit
#
# Key components:
# - add_clock_arguments(): Register the flags
# - clock_config_from_args(): Config file values overridden by flags
# ═══════════════════════════════════════════════════════════════════════════

CLOCK_FLAGS = {
    "delta_e": "delta_e_joule",
    "clock_nm": "clock_wavelength_nm",
    "tau": "tau_s",
    "theta0": "theta0",
    "psi": "psi_reduced",
    "g": "g",
    "h_spacing": "h_spacing_m",
    "magic_nm": "magic_wavelength_nm",
    "ell": "ell",
    "n_site": "n_site",
}


def add_clock_arguments(parser):
    """Register clock-parameter flags on a subcommand parser."""
    energy = parser.add_mutually_exclusive_group()
    energy.add_argument("--delta-e", help="Clock transition energy, J")
    energy.add_argument("--clock-nm", help="Clock wavelength, nm")
    spacing = parser.add_mutually_exclusive_group()
    spacing.add_argument("--h-spacing", help="Interlayer distance, m")
    spacing.add_argument("--magic-nm", help="Magic wavelength, nm")
    phase = parser.add_mutually_exclusive_group()
    phase.add_argument("--theta0", help="Redshift parameter 1 + V0/c^2")
    phase.add_argument("--psi", help="Reduced phase, rad")
    parser.add_argument("--tau", help="Interrogation time, s")
    parser.add_argument("--g", help="Gravitational acceleration, m/s^2")
    parser.add_argument("--ell", help="Layer half-count (N_layer = 2*ell + 1)")
    parser.add_argument("--n-site", help="Number of independent sites")


def clock_config_from_args(args, mapping, require_tau=True):
    """
    Build a ClockConfig with CLI flags taking precedence over the config file.

    Args:
        args (argparse.Namespace): Parsed arguments
        mapping (dict): Config file values (empty without --config)
        require_tau (bool): If False, tau defaults to 0 for commands that
            do not depend on it

    Returns:
        ClockConfig: The configuration
    """
    overrides = {key: getattr(args, flag) for flag, key in CLOCK_FLAGS.items()}
    if not require_tau and overrides["tau_s"] is None and "tau_s" not in mapping:
        overrides["tau_s"] = 0.0
    return clock_config_from_mapping(mapping, overrides)


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 3: ATOM COMMANDS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Catalog-based τ_min reports
#
# Key components:
# - cmd_atoms_table(): Computed vs published τ_min for every species
# - cmd_tau_min(): τ_min for one species and layer count
# ═══════════════════════════════════════════════════════════════════════════


def cmd_atoms_table(args, mapping):
    constants = constants_from_mapping(mapping)
    layers = validate_positive_int(args.layers, "Layer count")
    g = None if args.g is None else validate_positive_float(args.g, "g")
    rows = atoms_table(layers, g, constants)

    print_header(f"OPTIMUM INTERROGATION TIME ({layers} layers)")
    print(
        f"{'Atom':<6}{'Clock (nm)':>12}{'Magic (nm)':>12}"
        f"{'tau_min (s)':>14}{'Published (s)':>15}{'Deviation':>11}"
    )
    print("-" * 70)
    for row in rows:
        print(
            f"{row['atom']:<6}{row['clock_nm']:>12.0f}{row['magic_nm']:>12.0f}"
            f"{row['tau_min_s']:>14.4g}{row['paper_tau_min_s']:>15.2g}"
            f"{row['rel_dev']:>10.2%}"
        )

    if args.out:
        write_text_file(args.out, write_atoms_table_csv, rows)
        print(f"\n✓ Table written to {args.out}")

    worst = max(row["rel_dev"] for row in rows)
    log_activity(
        "atoms-table",
        "Reproduced tau_min table",
        f"layers={layers} max_dev={worst:.3%}",
        flagged=worst > TABLE_TOLERANCE,
    )
    return EXIT_OK


def cmd_tau_min(args, mapping):
    constants = constants_from_mapping(mapping)
    atom = get_atom(args.atom)
    layers = validate_positive_int(args.layers, "Layer count")
    g = None if args.g is None else validate_positive_float(args.g, "g")

    tau_min = tau_min_for_atom(atom, layers, g, constants)
    print(f"{atom.name}: tau_min = {format_number(tau_min)} s ({tau_min / 3600:.1f} h)")

    log_activity(
        "tau-min",
        "Computed tau_min",
        f"atom={atom.name} layers={layers} tau_min={format_number(tau_min)}",
    )
    return EXIT_OK


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 4: CURVE & BOUND COMMANDS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Bound curves and per-config reports
#
# Key components:
# - cmd_qfi_curve(): Single-layer or multilayer bound curve to CSV (and SVG)
# - cmd_crb(): CrbReport of one configuration
# - cmd_time_marks(): Divergence times and the optimum time
# - cmd_limit(): Limiting σ(V₀)/c² in both forms
# ═══════════════════════════════════════════════════════════════════════════


def cmd_qfi_curve(args, mapping):
    layers = validate_positive_int(args.layers, "Layer count")
    a_max = validate_positive_float(args.a_max, "a_max")
    points = validate_positive_int(args.points, "Point count")

    if layers == 1:
        curve = emit_fig2(a_max, points)
        title = "Single-layer bound"
    else:
        alpha = validate_positive_float(args.alpha, "alpha")
        curve = emit_fig4(layers, alpha, a_max, points)
        title = f"{layers}-layer bound (alpha = {alpha:g})"

    write_text_file(args.out, write_curve_csv, curve)
    if args.svg:
        render_curve_svg(curve, args.svg, title)

    diverged = sum(1 for point in curve if point.diverged)
    print(f"✓ {len(curve)} points written to {args.out} ({diverged} diverged)")

    log_activity(
        "qfi-curve",
        "Emitted bound curve",
        f"layers={layers} points={points} diverged={diverged}",
        flagged=diverged > 0,
    )
    return EXIT_OK


def cmd_crb(args, mapping):
    cfg = clock_config_from_args(args, mapping)
    report = crb_report(cfg)

    print_header("QUANTUM CRAMER-RAO BOUND")
    print(f"Layers:                 {cfg.n_layer}")
    print(f"Sites:                  {cfg.n_site}")
    print(f"Fisher information:     {format_number(report.qfi_per_atom)}")
    print(f"Var[theta0] >=          {format_number(report.var_theta0_lower)}")
    print(f"Var[V0]/c^4 >=          {format_number(report.var_v0_lower_over_c4)}")
    print(f"sigma(V0) >=            {format_number(report.sigma_v0_lower)} m^2/s^2")
    if report.diverged:
        print("\n⚠️  The bound diverges at this interrogation time")

    log_activity(
        "crb",
        "Bound diverged" if report.diverged else "Computed bound",
        f"tau={format_number(cfg.tau)} layers={cfg.n_layer}",
        flagged=report.diverged,
    )
    return EXIT_OK


def cmd_time_marks(args, mapping):
    cfg = clock_config_from_args(args, mapping, require_tau=False)
    k_max = validate_positive_int(args.k_max, "k_max")
    marks = time_marks(cfg, k_max)
    tau_star, bound_star = locate_min_exact(cfg)

    print_header(f"TIME MARKS ({cfg.n_layer} layers)")
    for k, tau_div in enumerate(marks.tau_div, start=1):
        print(f"tau_div #{k}:              {format_number(tau_div)} s")
    print(f"tau_min (formula):        {format_number(marks.tau_min)} s")
    print(f"bound at tau_min:         {format_number(marks.bound_at_min_over_c4)}")
    print(f"tau_min (exact bound):    {format_number(tau_star)} s")
    print(f"exact bound at minimum:   {format_number(bound_star)}")

    log_activity(
        "time-marks",
        "Computed time marks",
        f"layers={cfg.n_layer} tau_min={format_number(marks.tau_min)}",
    )
    return EXIT_OK


def cmd_limit(args, mapping):
    cfg = clock_config_from_args(args, mapping, require_tau=False)
    potential_form, aspect_form = limit_sigma(cfg)

    print_header("LIMITING PRECISION sigma(V0)/c^2")
    print(f"Potential-difference form: {format_number(potential_form)}")
    print(f"Aspect-ratio form:         {format_number(aspect_form)}")

    log_activity(
        "limit",
        "Computed limiting precision",
        f"layers={cfg.n_layer} sites={cfg.n_site}",
    )
    return EXIT_OK


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 5: MEASUREMENT COMMANDS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Phase POVM Monte Carlo and Fisher information
#
# Key components:
# - cmd_simulate(): MLE trials to CSV with summary against the CRB
# - cmd_povm_fisher(): Quadrature vs closed-form POVM information
# - cmd_show_log(): Activity log table, flagged view or clear
# ═══════════════════════════════════════════════════════════════════════════


def _phase_information(visibility):
    # 1 - sqrt(1 - D^2) without cancellation
    return visibility ** 2 / (1.0 + math.sqrt(max(0.0, 1.0 - visibility ** 2)))


def cmd_simulate(args, mapping):
    psi = validate_float(args.psi, "psi")
    visibility = validate_visibility(args.visibility)
    if visibility < 0:
        raise ValidationError("Visibility must lie in [0, 1] for simulation")
    n_samples = validate_positive_int(args.samples, "Sample count")
    n_trials = validate_positive_int(args.trials, "Trial count")
    seed = validate_non_negative_int(args.seed, "Seed")

    run = run_simulation(OutcomeModel(psi, visibility), n_samples, n_trials, seed)
    write_text_file(args.out, write_simulation_csv, run)

    info = _phase_information(visibility)
    crb = 1.0 / (n_samples * info) if info > 0 else math.inf
    ratio = run.summary.mse / crb if math.isfinite(crb) else math.nan
    in_band = MSE_BAND[0] <= ratio <= MSE_BAND[1]

    print_header("PHASE ESTIMATION (maximum likelihood)")
    print(f"Trials written to:   {args.out}")
    print(f"Circular mean:       {format_number(run.summary.circular_mean)}")
    print(f"Circular variance:   {format_number(run.summary.circular_variance)}")
    print(f"MSE:                 {format_number(run.summary.mse)}")
    print(f"Cramer-Rao bound:    {format_number(crb)}")
    if math.isfinite(crb):
        print(f"MSE / bound:         {ratio:.4f}")

    log_activity(
        "simulate",
        "Ran phase estimation",
        f"seed={seed} samples={n_samples} trials={n_trials} "
        f"mse={format_number(run.summary.mse)}",
        flagged=math.isfinite(crb) and not in_band,
    )
    return EXIT_OK


def cmd_povm_fisher(args, mapping):
    visibility = abs(validate_visibility(args.visibility))
    resolution = validate_positive_int(args.resolution, "POVM resolution")

    quadrature = classical_fisher_quadrature(
        OutcomeModel(0.0, visibility), povm=PhasePovm(resolution)
    )

    print_header("PHASE POVM FISHER INFORMATION (per unit phase)")
    print(f"Quadrature:          {format_number(quadrature)}")
    print(f"1 - sqrt(1 - D^2):   {format_number(_phase_information(visibility))}")
    print(f"SLD bound D^2:       {format_number(visibility ** 2)}")

    log_activity(
        "povm-fisher",
        "Computed POVM Fisher information",
        f"visibility={visibility:g} value={format_number(quadrature)}",
    )
    return EXIT_OK


def cmd_show_log(args, mapping):
    if args.clear:
        success, message = clear_logs()
        print(message)
        return EXIT_OK if success else EXIT_RUNTIME_ERROR

    display_logs(get_flagged_logs() if args.flagged else get_all_logs())
    return EXIT_OK


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 6: PARSER & ENTRY POINT
# ═══════════════════════════════════════════════════════════════════════════
# Description: Argument parsing and dispatch
#
# Key components:
# - build_parser(): argparse parser with one subparser per command
# - run_cli(): Parse, dispatch, map errors to exit codes
# - main(): Process entry point
# ═══════════════════════════════════════════════════════════════════════════


def build_parser():
    """
    Build the argument parser.

    Returns:
        argparse.ArgumentParser: Parser with every subcommand registered
    """
    parser = argparse.ArgumentParser(
        prog="lattice_clock",
        description="Quantum Cramer-Rao bounds for gravitational potential "
        "estimation with optical lattice clocks",
    )
    parser.add_argument("--config", metavar="FILE", help="key = value config file")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    p = commands.add_parser("atoms-table", help="Reproduce the tau_min table")
    p.add_argument("--layers", default=str(REFERENCE_LAYERS))
    p.add_argument("--g")
    p.add_argument("--out", metavar="FILE", help="Also write the table as CSV")
    p.set_defaults(handler=cmd_atoms_table)

    p = commands.add_parser("tau-min", help="tau_min for one atom")
    p.add_argument("--atom", required=True)
    p.add_argument("--layers", required=True)
    p.add_argument("--g")
    p.set_defaults(handler=cmd_tau_min)

    p = commands.add_parser("qfi-curve", help="Bound curve against dE*tau/hbar")
    p.add_argument("--layers", required=True)
    p.add_argument("--alpha", default="1.0")
    p.add_argument("--a-max", default=str(DEFAULT_A_MAX))
    p.add_argument("--points", default=str(DEFAULT_POINTS))
    p.add_argument("--out", metavar="FILE", required=True)
    p.add_argument("--svg", metavar="FILE")
    p.set_defaults(handler=cmd_qfi_curve)

    p = commands.add_parser("simulate", help="Monte Carlo phase estimation")
    p.add_argument("--psi", required=True)
    p.add_argument("--visibility", default="1.0")
    p.add_argument("--samples", required=True)
    p.add_argument("--trials", required=True)
    p.add_argument("--seed", required=True)
    p.add_argument("--out", metavar="FILE", required=True)
    p.set_defaults(handler=cmd_simulate)

    p = commands.add_parser("povm-fisher", help="Phase POVM Fisher information")
    p.add_argument("--visibility", required=True)
    p.add_argument("--resolution", default="4096")
    p.set_defaults(handler=cmd_povm_fisher)

    p = commands.add_parser("crb", help="Cramer-Rao bound for one configuration")
    add_clock_arguments(p)
    p.set_defaults(handler=cmd_crb)

    p = commands.add_parser("time-marks", help="Divergence and optimum times")
    add_clock_arguments(p)
    p.add_argument("--k-max", default="5")
    p.set_defaults(handler=cmd_time_marks)

    p = commands.add_parser("limit", help="Limiting sigma(V0)/c^2")
    add_clock_arguments(p)
    p.set_defaults(handler=cmd_limit)

    p = commands.add_parser("show-log", help="Display the activity log")
    options = p.add_mutually_exclusive_group()
    options.add_argument("--flagged", action="store_true", help="Flagged entries only")
    options.add_argument("--clear", action="store_true", help="Delete the activity log")
    p.set_defaults(handler=cmd_show_log)

    return parser


def _log_failure(command, activity, detail):
    # an unwritable log must not change the exit code
    try:
        log_activity(command, activity, detail, flagged=True)
    except OSError as e:
        print(f"Warning: could not write activity log: {e}", file=sys.stderr)


def run_cli(argv=None):
    """
    Run one command.

    Args:
        argv (list): Arguments without the program name; sys.argv[1:] if None

    Returns:
        int: Exit code (0 success, 2 usage/validation error, 1 runtime error)

    Example:
        run_cli(["tau-min", "--atom", "Cd", "--layers", "100"])
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE_ERROR

    try:
        mapping = load_config(args.config) if args.config else {}
        return args.handler(args, mapping)

    except ValidationError as e:
        print(f"Error: {e}", file=sys.stderr)
        _log_failure(args.command, "Rejected input", str(e))
        return EXIT_USAGE_ERROR

    except Exception as e:
        print(f"Error: {e}", file=sys.stderr)
        _log_failure(args.command, "Failed", str(e))
        return EXIT_RUNTIME_ERROR


def main():
    """Process entry point."""
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    try:
        main()
    except KeyboardInterrupt:
        print("\n\nProgram terminated by user.")
        sys.exit(EXIT_RUNTIME_ERROR)
