"""Dense complex linear algebra used by every other module.

Matrices are plain ``numpy.ndarray`` objects of complex dtype. The
eigensolver delegates to LAPACK through ``numpy.linalg.eigh``; this module
only fixes the contract around it (Hermiticity check, symmetrization,
ascending eigenvalues).
"""

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .exceptions import NonHermitianInput

HERMITIAN_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class HermitianEigen:
    """Eigendecomposition ``m = vectors @ diag(values) @ vectors^H``."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self):
        return (self.vectors * self.values) @ self.vectors.conj().T


def as_square(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    return m


def hermiticity_defect(m):
    """``||m - m^H||_F / max(||m||_F, tiny)``."""
    m = as_square(m)
    norm = np.linalg.norm(m)
    if norm == 0.0:
        return 0.0
    return float(np.linalg.norm(m - m.conj().T) / norm)


def is_hermitian(m, rtol=HERMITIAN_RTOL):
    return hermiticity_defect(m) <= rtol


def hermitian_part(m, rtol=HERMITIAN_RTOL):
    """Check Hermiticity and return ``(m + m^H) / 2``."""
    m = as_square(m)
    defect = hermiticity_defect(m)
    if defect > rtol:
        raise NonHermitianInput(f"relative anti-Hermitian part {defect:.3e} exceeds {rtol:.1e}")
    return 0.5 * (m + m.conj().T)


def eig_hermitian(m):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Raises
    ------
    NonHermitianInput
        If ``||m - m^H||_F > 1e-10 ||m||_F``.
    """
    h = hermitian_part(m)
    values, vectors = np.linalg.eigh(h)
    return HermitianEigen(values=values, vectors=vectors)


def eigvals_hermitian(m):
    """Ascending eigenvalues only; cheaper than :func:`eig_hermitian`."""
    return np.linalg.eigvalsh(hermitian_part(m))


def trace_norm(m):
    """Sum of singular values."""
    return float(np.linalg.svd(as_square(m), compute_uv=False).sum())


def spectral_map(m, f):
    """Apply a real function to a Hermitian matrix through its spectrum.

    ``m`` may also be a precomputed :class:`HermitianEigen`, which lets
    callers reuse one decomposition for many functions (temperature sweeps).
    """
    eig = m if isinstance(m, HermitianEigen) else eig_hermitian(m)
    fv = np.asarray(f(eig.values), dtype=float)
    out = (eig.vectors * fv) @ eig.vectors.conj().T
    return 0.5 * (out + out.conj().T)


def kron(*ops):
    """Kronecker product of one or more matrices, left to right."""
    if not ops:
        raise ValueError("kron needs at least one operand")
    return reduce(np.kron, (np.asarray(o, dtype=complex) for o in ops))


def random_hermitian(dim, rng):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (a + a.conj().T)


def random_unitary(dim, rng):
    """Haar-random unitary via QR with phase correction."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_orthogonal(dim, rng):
    z = rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * np.sign(np.diag(r))
