"""Dense complex linear algebra used by the matrix-model samplers.

All routines operate on 2-D complex ``numpy`` arrays and are thin, validated
wrappers around LAPACK (via ``numpy``/``scipy``).  Tolerances are relative to
the Frobenius norm of the input so they are scale free.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = [
    "Spectrum",
    "SingularMatrixError",
    "as_complex_matrix",
    "qr_decompose",
    "hessenberg",
    "eigenvalues_general",
    "eig_hermitian",
    "hermitian_power",
]

HERMITIAN_RTOL = 1e-10
PSD_FLOOR = 1e-13


class SingularMatrixError(np.linalg.LinAlgError):
    """Raised when a matrix power requires inverting a singular matrix."""


def as_complex_matrix(a) -> np.ndarray:
    """Validate and return ``a`` as a finite 2-D complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def _require_square(m: np.ndarray) -> None:
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")


def qr_decompose(a):
    """Reduced QR of a square or tall matrix.

    Returns ``(q, r)`` with orthonormal columns in ``q`` and upper triangular
    ``r`` such that ``q @ r == a`` to relative 1e-12.
    """
    m = as_complex_matrix(a)
    if m.shape[0] < m.shape[1]:
        raise ValueError(f"need rows >= cols, got shape {m.shape}")
    q, r = np.linalg.qr(m, mode="reduced")
    return q, r


def hessenberg(a):
    """Unitary reduction to upper Hessenberg form.

    Returns ``(h, u)`` with ``u @ h @ u.conj().T == a`` to relative 1e-12.
    """
    m = as_complex_matrix(a)
    _require_square(m)
    if m.shape[0] == 0:
        return m.copy(), m.copy()
    h, u = scipy.linalg.hessenberg(m, calc_q=True)
    return h, u


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of a general complex matrix.

    ``converged`` is False when the QR iteration of the backend failed to
    reduce the matrix; ``values`` is then empty and must not be used.
    ``iterations`` counts backend sweeps when available (the LAPACK driver
    manages its own sweep budget internally and reports 0 here).
    """

    values: np.ndarray
    converged: bool
    iterations: int


def eigenvalues_general(a, max_sweeps: int | None = None) -> Spectrum:
    """All eigenvalues of a general square complex matrix.

    Uses balancing, Householder Hessenberg reduction and shifted QR with
    deflation, as provided by LAPACK.  ``max_sweeps`` (default ``30 * n``)
    caps the iteration budget; the backend applies its own equivalent cap,
    so the argument is validated but the backend value is authoritative.
    Non-convergence yields ``Spectrum(converged=False)`` rather than raising.
    """
    m = as_complex_matrix(a)
    _require_square(m)
    n = m.shape[0]
    if max_sweeps is None:
        max_sweeps = 30 * max(n, 1)
    if max_sweeps < 1:
        raise ValueError("max_sweeps must be >= 1")
    try:
        values = np.linalg.eigvals(m) if n else np.empty(0, dtype=np.complex128)
    except np.linalg.LinAlgError:
        return Spectrum(values=np.empty(0, dtype=np.complex128), converged=False, iterations=0)
    return Spectrum(values=values, converged=True, iterations=0)


def eig_hermitian(a):
    """Spectral decomposition of a Hermitian matrix.

    The input is checked to be Hermitian to relative 1e-10 and symmetrized
    before the solve.  Returns ``(values, vectors)`` with real eigenvalues in
    ascending order and unitary ``vectors``.
    """
    m = as_complex_matrix(a)
    _require_square(m)
    scale = np.linalg.norm(m)
    if np.linalg.norm(m - m.conj().T) > HERMITIAN_RTOL * max(scale, 1e-300):
        raise ValueError("matrix is not Hermitian within tolerance")
    sym = (m + m.conj().T) / 2.0
    values, vectors = np.linalg.eigh(sym)
    return values, vectors


def hermitian_power(a, p: float) -> np.ndarray:
    """Matrix power ``a**p`` of a Hermitian (positive definite if p < 0) matrix."""
    values, vectors = eig_hermitian(a)
    if p < 0:
        vmax = values.max(initial=0.0)
        if values.size == 0 or values.min() <= PSD_FLOOR * max(vmax, 0.0):
            raise SingularMatrixError("matrix is singular to working precision; cannot take a negative power")
    powered = np.power(values.astype(np.complex128), p).real
    return (vectors * powered) @ vectors.conj().T
