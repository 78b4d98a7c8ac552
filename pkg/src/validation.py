# ═══════════════════════════════════════════════════════════════════════════
# IMPORTS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Input validation and the shared exception family
#
# External libraries: math (finite checks)
# ═══════════════════════════════════════════════════════════════════════════

import math


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 1: CUSTOM EXCEPTIONS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Exceptions raised by the library and the CLI
#
# Key components:
# - ValidationError: Base class, raised when an input or invariant check fails
# - Operator errors: InvalidOperator, NotHermitian, InvalidDensity
# - Clock errors: LayerOutOfRange, EvenLayerCount
# - Estimation errors: TraceNotZero, NonPositiveInput, SingleLayerNoDivergence
# - Measurement errors: EmptySample
# - Catalog / config errors: NonPositiveWavelength, UnknownAtom, ConfigError
#
# Note: Catching ValidationError catches every domain error
# ═══════════════════════════════════════════════════════════════════════════


class ValidationError(Exception):
    """Custom exception for input validation failures."""

    pass


class InvalidOperator(ValidationError):
    """Raised when operator entries are non-finite or not 2x2."""

    pass


class NotHermitian(ValidationError):
    """Raised when an operator that must be Hermitian is not."""

    pass


class InvalidDensity(ValidationError):
    """Raised when an operator violates a density-operator invariant."""

    pass


class LayerOutOfRange(ValidationError):
    """Raised when a layer index lies outside -ell..ell."""

    pass


class EvenLayerCount(ValidationError):
    """Raised when a state construction receives an even layer count."""

    pass


class TraceNotZero(ValidationError):
    """Raised when a state derivative is not traceless."""

    pass


class NonPositiveInput(ValidationError):
    """Raised when a quantity that must be positive is not."""

    pass


class SingleLayerNoDivergence(ValidationError):
    """Raised when divergence times are requested for a single layer."""

    pass


class EmptySample(ValidationError):
    """Raised when an estimator receives no samples."""

    pass


class NonPositiveWavelength(ValidationError):
    """Raised when a wavelength is zero or negative."""

    pass


class UnknownAtom(ValidationError):
    """Raised when an atom name is not in the catalog."""

    pass


class ConfigError(ValidationError):
    """Raised when a config file has unknown, duplicate or conflicting keys."""

    pass


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 2: NUMERIC VALIDATION
# ═══════════════════════════════════════════════════════════════════════════
# Description: Convert raw input (CLI strings, config values) to numbers
#
# Key components:
# - validate_float(): Any finite real number
# - validate_positive_float(): Finite and > 0
# - validate_non_negative_float(): Finite and >= 0
# - validate_positive_int() / validate_non_negative_int(): Integer checks
#
# Note: Every validator returns the converted value
# ═══════════════════════════════════════════════════════════════════════════


def validate_float(value, field_name="Value"):
    """
    Convert input to a finite float, raising ValidationError otherwise.

    Args:
        value (str | float | int): The raw input
        field_name (str): Name used in the error message

    Returns:
        float: The converted value

    Raises:
        ValidationError: If value is not a number or is NaN/Inf
    """
    if isinstance(value, bool):
        raise ValidationError(f"{field_name} must be a valid number")
    try:
        number = float(value)
    except (ValueError, TypeError):
        raise ValidationError(f"{field_name} must be a valid number")

    if not math.isfinite(number):
        raise ValidationError(f"{field_name} must be finite")

    return number


def validate_positive_float(value, field_name="Value"):
    """
    Convert input to a float that is strictly positive.

    Args:
        value (str | float | int): The raw input
        field_name (str): Name used in the error message

    Returns:
        float: The converted value

    Raises:
        ValidationError: If value is not a finite number > 0
    """
    number = validate_float(value, field_name)
    if number <= 0:
        raise ValidationError(f"{field_name} must be greater than 0")
    return number


def validate_non_negative_float(value, field_name="Value"):
    """
    Convert input to a float that is zero or positive.

    Args:
        value (str | float | int): The raw input
        field_name (str): Name used in the error message

    Returns:
        float: The converted value

    Raises:
        ValidationError: If value is not a finite number >= 0
    """
    number = validate_float(value, field_name)
    if number < 0:
        raise ValidationError(f"{field_name} must not be negative")
    return number


def _validate_int(value, field_name):
    if isinstance(value, bool):
        raise ValidationError(f"{field_name} must be a whole number")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if value.is_integer():
            return int(value)
        raise ValidationError(f"{field_name} must be a whole number")
    try:
        return int(str(value).strip())
    except (ValueError, TypeError):
        raise ValidationError(f"{field_name} must be a whole number")


def validate_positive_int(value, field_name="Value"):
    """
    Convert input to an integer >= 1.

    Args:
        value (str | int): The raw input
        field_name (str): Name used in the error message

    Returns:
        int: The converted value

    Raises:
        ValidationError: If value is not a whole number >= 1
    """
    number = _validate_int(value, field_name)
    if number < 1:
        raise ValidationError(f"{field_name} must be at least 1")
    return number


def validate_non_negative_int(value, field_name="Value"):
    """
    Convert input to an integer >= 0.

    Args:
        value (str | int): The raw input
        field_name (str): Name used in the error message

    Returns:
        int: The converted value

    Raises:
        ValidationError: If value is not a whole number >= 0
    """
    number = _validate_int(value, field_name)
    if number < 0:
        raise ValidationError(f"{field_name} must not be negative")
    return number


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 3: DOMAIN VALIDATION
# ═══════════════════════════════════════════════════════════════════════════
# Description: Checks specific to lattice clocks and phase measurements
#
# Key components:
# - validate_odd_layer_count(): N_layer = 2*ell + 1 must be odd
# - validate_visibility(): D in [-1, 1]
# - validate_atom_name(): Case-insensitive lookup key for the atom catalog
# ═══════════════════════════════════════════════════════════════════════════


def validate_odd_layer_count(value, field_name="Layer count"):
    """
    Validate a layer count for state construction.

    Layers are indexed -ell..ell, so the count 2*ell + 1 is always odd.

    Args:
        value (str | int): The raw input
        field_name (str): Name used in the error message

    Returns:
        int: The layer count

    Raises:
        EvenLayerCount: If the count is even
        ValidationError: If the count is not a positive whole number
    """
    n_layer = validate_positive_int(value, field_name)
    if n_layer % 2 == 0:
        raise EvenLayerCount(
            f"{field_name} must be odd (layers are indexed -ell..ell), got {n_layer}"
        )
    return n_layer


def validate_visibility(value, field_name="Visibility"):
    """
    Validate a Dirichlet visibility factor.

    Args:
        value (str | float): The raw input

    Returns:
        float: Visibility in [-1, 1]

    Raises:
        ValidationError: If the value is outside [-1, 1]
    """
    visibility = validate_float(value, field_name)
    if abs(visibility) > 1.0:
        raise ValidationError(f"{field_name} must lie in [-1, 1], got {visibility}")
    return visibility


def validate_atom_name(name):
    """
    Normalize an atom symbol for catalog lookup (e.g. "cd" -> "Cd").

    Args:
        name (str): Atom symbol

    Returns:
        str: Capitalized symbol

    Raises:
        ValidationError: If the name is empty or not alphabetic
    """
    if not isinstance(name, str) or not name.strip():
        raise ValidationError("Atom name must be a non-empty string")

    name = name.strip()
    if not name.isalpha():
        raise ValidationError("Atom name can only contain letters")

    return name.capitalize()
