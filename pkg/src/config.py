# ═══════════════════════════════════════════════════════════════════════════
# IMPORTS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Config file loading for clock parameters and constants
#
# External libraries: configparser, pathlib
# Internal modules: clock_model, atoms_report (wavelength conversion), validation
# ═══════════════════════════════════════════════════════════════════════════

import configparser
import dataclasses
from pathlib import Path

from atoms_report import NM, wavelength_to_energy
from clock_model import CODATA_2018, ClockConfig
from validation import (
    ConfigError,
    validate_float,
    validate_non_negative_float,
    validate_non_negative_int,
    validate_positive_float,
    validate_positive_int,
)


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 1: KEYS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Recognized keys of the flat `key = value` config file
#
# Key components:
# - CLOCK_KEYS: Clock parameters
# - CONSTANT_KEYS: Physical-constant overrides
# - ALTERNATIVES: Pairs of keys of which at most one may be given
#
# Note: Lines need no [section] header; comments start with '#' or ';'
# ═══════════════════════════════════════════════════════════════════════════

IMPLICIT_SECTION = "clock"

CLOCK_KEYS = {
    "delta_e_joule",
    "clock_wavelength_nm",
    "tau_s",
    "theta0",
    "psi_reduced",
    "g",
    "h_spacing_m",
    "magic_wavelength_nm",
    "ell",
    "n_site",
}
CONSTANT_KEYS = {"hbar", "c", "planck_h", "g_default"}
KNOWN_KEYS = CLOCK_KEYS | CONSTANT_KEYS

ALTERNATIVES = [
    ("delta_e_joule", "clock_wavelength_nm"),
    ("theta0", "psi_reduced"),
    ("h_spacing_m", "magic_wavelength_nm"),
]


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 2: LOADING
# ═══════════════════════════════════════════════════════════════════════════
# Description: Parse and check a config file
#
# Key components:
# - parse_config_text(): Text to {key: raw string}
# - load_config(): File to {key: raw string}
# ═══════════════════════════════════════════════════════════════════════════


def parse_config_text(text, source="<config>"):
    """
    Parse flat `key = value` lines.

    Args:
        text (str): Config file content
        source (str): Name used in error messages

    Returns:
        dict: Raw string values keyed by lower-case key

    Raises:
        ConfigError: On syntax errors, duplicate keys, unknown keys or
            conflicting alternatives
    """
    parser = configparser.ConfigParser(
        comment_prefixes=("#", ";"),
        inline_comment_prefixes=("#", ";"),
        interpolation=None,
        strict=True,
    )
    try:
        parser.read_string(f"[{IMPLICIT_SECTION}]\n{text}", source=source)
    except configparser.Error as e:
        raise ConfigError(f"Invalid config file {source}: {e}")

    if parser.sections() != [IMPLICIT_SECTION]:
        raise ConfigError(f"{source}: section headers are not supported")

    values = dict(parser.items(IMPLICIT_SECTION))

    unknown = sorted(set(values) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"{source}: unknown key(s): {', '.join(unknown)}")

    for first, second in ALTERNATIVES:
        if first in values and second in values:
            raise ConfigError(f"{source}: give either '{first}' or '{second}', not both")

    return values


def load_config(path):
    """
    Load a config file.

    Args:
        path (str | Path): Config file

    Returns:
        dict: Raw string values keyed by lower-case key

    Raises:
        ConfigError: If the file cannot be read or is invalid

    Example:
        mapping = load_config("cd_clock.cfg")
        cfg = clock_config_from_mapping(mapping)
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e}")
    return parse_config_text(text, source=str(path))


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 3: BUILDING CONFIG OBJECTS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Turn raw mappings into PhysicalConstants and ClockConfig
#
# Key components:
# - constants_from_mapping(): CODATA 2018 with overrides
# - clock_config_from_mapping(): Clock config; CLI overrides win over the file
# ═══════════════════════════════════════════════════════════════════════════


def constants_from_mapping(mapping):
    """
    Physical constants with any overrides from a config mapping.

    Args:
        mapping (dict): Raw config values

    Returns:
        PhysicalConstants: CODATA 2018 with overridden fields
    """
    changes = {
        key: validate_positive_float(mapping[key], key)
        for key in CONSTANT_KEYS
        if key in mapping
    }
    return dataclasses.replace(CODATA_2018, **changes)


def _merge(mapping, overrides):
    merged = dict(mapping)
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in KNOWN_KEYS:
            raise ConfigError(f"Unknown override '{key}'")
        # a CLI value replaces the file's value and its alternative
        for first, second in ALTERNATIVES:
            if key == first:
                merged.pop(second, None)
            elif key == second:
                merged.pop(first, None)
        merged[key] = value
    return merged


def clock_config_from_mapping(mapping, overrides=None):
    """
    Build a ClockConfig from config values.

    Precedence is overrides (CLI flags) > mapping (config file) > defaults.

    Args:
        mapping (dict): Raw config values (from load_config)
        overrides (dict): Values that take precedence; None entries are ignored

    Returns:
        ClockConfig: The clock configuration

    Raises:
        ConfigError: If a required parameter is missing
        ValidationError: If a value is out of range
    """
    values = _merge(mapping, overrides)
    constants = constants_from_mapping(values)

    if "delta_e_joule" in values:
        delta_e = validate_positive_float(values["delta_e_joule"], "delta_e_joule")
    elif "clock_wavelength_nm" in values:
        wavelength = validate_positive_float(
            values["clock_wavelength_nm"], "clock_wavelength_nm"
        )
        delta_e = wavelength_to_energy(wavelength, constants)
    else:
        raise ConfigError("Missing 'delta_e_joule' or 'clock_wavelength_nm'")

    if "h_spacing_m" in values:
        h_spacing = validate_positive_float(values["h_spacing_m"], "h_spacing_m")
    elif "magic_wavelength_nm" in values:
        h_spacing = (
            validate_positive_float(values["magic_wavelength_nm"], "magic_wavelength_nm")
            * NM
        )
    else:
        raise ConfigError("Missing 'h_spacing_m' or 'magic_wavelength_nm'")

    if "tau_s" not in values:
        raise ConfigError("Missing 'tau_s'")

    g = values.get("g")
    psi = values.get("psi_reduced")

    return ClockConfig(
        delta_e=delta_e,
        tau=validate_non_negative_float(values["tau_s"], "tau_s"),
        h_spacing=h_spacing,
        theta0=validate_float(values.get("theta0", 1.0), "theta0"),
        g=None if g is None else validate_positive_float(g, "g"),
        ell=validate_non_negative_int(values.get("ell", 0), "ell"),
        n_site=validate_positive_int(values.get("n_site", 1), "n_site"),
        constants=constants,
        psi=None if psi is None else validate_float(psi, "psi_reduced"),
    )
