# ═══════════════════════════════════════════════════════════════════════════
# IMPORTS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Complex 2x2 operator algebra for single-qubit clock states
#
# External libraries:
# - numpy: Complex arrays, products, Hermitian eigendecomposition (LAPACK)
# Internal modules: validation (exception family)
# ═══════════════════════════════════════════════════════════════════════════

from dataclasses import dataclass

import numpy as np

from validation import InvalidDensity, InvalidOperator, NotHermitian


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 1: CONSTANTS & BASIS OPERATORS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Tolerances and the fixed operators of the clock basis {|0>, |1>}
#
# Key components:
# - HERMITICITY_TOL / RECON_TOL / TRACE_TOL / POSITIVITY_TOL: Tolerances
# - IDENTITY, SIGMA_Z: I = |0><0| + |1><1| and sigma_z = |0><0| - |1><1|
# - KET_0, KET_1: Computational basis vectors
#
# Note: Every operator returned by this module is read-only
# ═══════════════════════════════════════════════════════════════════════════

HERMITICITY_TOL = 1e-12
EIG_HERMITICITY_TOL = 1e-10
RECON_TOL = 1e-10
TRACE_TOL = 1e-12
POSITIVITY_TOL = 1e-12
DEGENERACY_TOL = 1e-12


def _freeze(array):
    array.setflags(write=False)
    return array


KET_0 = _freeze(np.array([1.0, 0.0], dtype=np.complex128))
KET_1 = _freeze(np.array([0.0, 1.0], dtype=np.complex128))


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 2: CONSTRUCTION & BASIC ALGEBRA
# ═══════════════════════════════════════════════════════════════════════════
# Description: Build operators and combine them
#
# Key components:
# - operator2(): Validated, read-only 2x2 complex array (the Operator2 type)
# - ketbra(): Rank-one operator |u><v|
# - multiply(), adjoint(), trace(), frobenius_norm(), is_hermitian()
# ═══════════════════════════════════════════════════════════════════════════


def operator2(entries):
    """
    Build an Operator2 from nested entries or an existing array.

    Args:
        entries (array-like): 2x2 complex entries indexed by {|0>, |1>}

    Returns:
        numpy.ndarray: Read-only complex128 array of shape (2, 2)

    Raises:
        InvalidOperator: If the shape is not (2, 2) or an entry is NaN/Inf
    """
    try:
        array = np.array(entries, dtype=np.complex128)
    except (TypeError, ValueError) as e:
        raise InvalidOperator(f"Operator entries must be complex numbers: {e}")

    if array.shape != (2, 2):
        raise InvalidOperator(f"Operator must be 2x2, got shape {array.shape}")

    if not np.all(np.isfinite(array)):
        raise InvalidOperator("Operator entries must be finite (no NaN/Inf)")

    return _freeze(array)


def ketbra(ket, bra):
    """Return the rank-one operator |ket><bra|."""
    return operator2(np.outer(ket, np.conj(bra)))


IDENTITY = operator2(np.eye(2))
SIGMA_Z = operator2([[1.0, 0.0], [0.0, -1.0]])


def multiply(a, b):
    """
    Standard matrix product a·b.

    Args:
        a (numpy.ndarray): Left operator
        b (numpy.ndarray): Right operator

    Returns:
        numpy.ndarray: The product as an Operator2
    """
    return operator2(a @ b)


def adjoint(m):
    """Conjugate transpose M†."""
    return operator2(np.conj(m).T)


def trace(m):
    """Complex trace of a 2x2 operator."""
    return complex(m[0, 0] + m[1, 1])


def frobenius_norm(m):
    """Frobenius norm ||M||_F."""
    return float(np.linalg.norm(m, ord="fro"))


def is_hermitian(m, tol=HERMITICITY_TOL):
    """
    Check M = M† entrywise within tolerance.

    Args:
        m (numpy.ndarray): Operator to check
        tol (float): Maximum allowed |M_jk - conj(M_kj)|

    Returns:
        bool: True if Hermitian within tol
    """
    return bool(np.max(np.abs(m - np.conj(m).T)) <= tol)


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 3: SPECTRAL DECOMPOSITION
# ═══════════════════════════════════════════════════════════════════════════
# Description: Eigendecomposition of Hermitian operators
#
# Key components:
# - SpectralDecomposition: Eigenvalues p0 >= p1 with orthonormal eigenvectors
# - eig_hermitian(): Sorted decomposition; canonical basis when degenerate
# ═══════════════════════════════════════════════════════════════════════════


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues (descending) and matching orthonormal eigenvectors."""

    eigenvalues: tuple
    eigenvectors: tuple

    def reconstruct(self):
        """Return sum_j p_j |j><j|."""
        total = np.zeros((2, 2), dtype=np.complex128)
        for p, vec in zip(self.eigenvalues, self.eigenvectors):
            total += p * np.outer(vec, np.conj(vec))
        return operator2(total)


def eig_hermitian(m):
    """
    Eigendecompose a Hermitian 2x2 operator.

    Eigenvalues are returned in descending order. When the two eigenvalues
    agree within DEGENERACY_TOL the canonical basis {|0>, |1>} is returned,
    so results are deterministic for multiples of the identity.

    Args:
        m (numpy.ndarray): Hermitian operator

    Returns:
        SpectralDecomposition: Eigenvalues p0 >= p1 and eigenvectors

    Raises:
        NotHermitian: If m is not Hermitian within EIG_HERMITICITY_TOL

    Example:
        spectrum = eig_hermitian(SIGMA_Z)
        spectrum.eigenvalues  # (1.0, -1.0)
    """
    if not is_hermitian(m, EIG_HERMITICITY_TOL):
        raise NotHermitian("Operator is not Hermitian; cannot eigendecompose")

    symmetric = (m + np.conj(m).T) / 2
    values, vectors = np.linalg.eigh(symmetric)

    # eigh sorts ascending
    p0, p1 = float(values[1]), float(values[0])

    if abs(p0 - p1) < DEGENERACY_TOL:
        return SpectralDecomposition(
            eigenvalues=(p0, p1),
            eigenvectors=(KET_0, KET_1),
        )

    return SpectralDecomposition(
        eigenvalues=(p0, p1),
        eigenvectors=(_freeze(vectors[:, 1].copy()), _freeze(vectors[:, 0].copy())),
    )


# ═══════════════════════════════════════════════════════════════════════════
# SECTION 4: DENSITY OPERATORS
# ═══════════════════════════════════════════════════════════════════════════
# Description: Validated quantum states
#
# Key components:
# - DensityOperator: Wraps an Operator2 that is Hermitian, unit-trace and PSD
# - validate_density(): Check all invariants, naming the first one violated
# ═══════════════════════════════════════════════════════════════════════════


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """A 2x2 density operator; build it through validate_density()."""

    op: np.ndarray

    @property
    def purity(self):
        """tr(rho^2)."""
        return float(np.real(trace(self.op @ self.op)))


def validate_density(op):
    """
    Wrap an operator as a DensityOperator if it satisfies every invariant.

    Invariants (checked in order):
    - Hermitian within HERMITICITY_TOL
    - trace = 1 within TRACE_TOL
    - eigenvalues >= -POSITIVITY_TOL

    Args:
        op (array-like): Candidate 2x2 operator

    Returns:
        DensityOperator: The validated state

    Raises:
        InvalidDensity: If an invariant fails (message names the invariant)
        InvalidOperator: If the entries are not a finite 2x2 array
    """
    op = operator2(op)

    if not is_hermitian(op, HERMITICITY_TOL):
        raise InvalidDensity("Density operator must be Hermitian")

    tr = trace(op)
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidDensity(f"Density operator trace must be 1, got {tr.real:.15g}")

    spectrum = eig_hermitian(op)
    if spectrum.eigenvalues[1] < -POSITIVITY_TOL:
        raise InvalidDensity(
            "Density operator must be positive semidefinite "
            f"(negative eigenvalue {spectrum.eigenvalues[1]:.3g})"
        )

    return DensityOperator(op=op)
