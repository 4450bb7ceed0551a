"""Dense Hermitian kernel: eigendecomposition, spectral propagators, negative-spectrum sums.

Everything downstream (Hamiltonian evolution, partial-transpose spectra) is
built on the three contracts here.  All functions are pure; arrays are never
mutated in place.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, DimensionMismatch, NotHermitian

HERMITICITY_TOL = 1e-10
# Eigenvalues below this magnitude are round-off, not entanglement.
ZERO_EIGENVALUE_TOL = 1e-12


def _as_square_complex(m: np.ndarray) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(np.float64))):
        raise ValueError("matrix contains NaN/Inf entries")
    return a


def check_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Validate Hermiticity in max-abs entry norm; returns the validated array."""
    a = _as_square_complex(m)
    dev = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if dev > tol:
        raise NotHermitian(f"max |m - m†| = {dev:.3e} exceeds {tol:.1e}")
    return a


@dataclass(frozen=True)
class SpectralForm:
    """Eigenvalues (ascending) and orthonormal eigenvector columns of a Hermitian matrix."""

    eigenvalues: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def reconstruct(self) -> np.ndarray:
        """V diag(w) V†."""
        return (self.vectors * self.eigenvalues) @ self.vectors.conj().T


def hermitian_eig(m: np.ndarray) -> SpectralForm:
    """Eigendecompose a Hermitian matrix; eigenvalues come out ascending."""
    a = check_hermitian(m)
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return SpectralForm(eigenvalues=w, vectors=v)


def propagator(h: SpectralForm, tau: float) -> np.ndarray:
    """U(tau) = V diag(e^{-i w tau}) V† for the Hermitian generator behind h."""
    phases = np.exp(-1j * h.eigenvalues * tau)
    return (h.vectors * phases) @ h.vectors.conj().T


def conjugate_evolution(rho0: np.ndarray, u: np.ndarray) -> np.ndarray:
    """u rho0 u†, the unitary conjugation step of closed-system evolution."""
    rho = _as_square_complex(rho0)
    uu = _as_square_complex(u)
    if rho.shape != uu.shape:
        raise DimensionMismatch(f"rho {rho.shape} vs u {uu.shape}")
    return uu @ rho @ uu.conj().T


def negative_sum(m: np.ndarray) -> float:
    """2 |sum of negative eigenvalues| of a Hermitian matrix.

    Eigenvalues with |w| < ZERO_EIGENVALUE_TOL are treated as exact zeros so
    that separable states do not register spurious entanglement.
    """
    a = check_hermitian(m)
    w = np.linalg.eigvalsh(a)
    return negative_sum_of_eigenvalues(w)


def negative_sum_of_eigenvalues(w: np.ndarray) -> float:
    """Same contract as negative_sum, applied to a precomputed real spectrum."""
    neg = w[w < -ZERO_EIGENVALUE_TOL]
    return float(2.0 * -neg.sum()) if neg.size else 0.0
