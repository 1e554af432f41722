"""Small dense complex matrices and the error metrics used by every search.

Matrices are plain ``numpy`` arrays of dtype ``complex128`` with shape
``(d, d)``, ``d`` in {2, 4}. Values built by this package are marked
read-only so they can be shared freely.
"""

from __future__ import annotations

import numpy as np

SUPPORTED_DIMS = (2, 4)
UNITARY_TOL = 1e-9


def as_matrix(entries, dim: int | None = None) -> np.ndarray:
    """Return a read-only complex square matrix built from ``entries``."""
    m = np.array(entries, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if dim is not None and m.shape[0] != dim:
        raise ValueError(f"expected dimension {dim}, got {m.shape[0]}")
    if m.shape[0] not in SUPPORTED_DIMS:
        raise ValueError(f"unsupported dimension {m.shape[0]}; expected one of {SUPPORTED_DIMS}")
    m.setflags(write=False)
    return m


def identity(dim: int) -> np.ndarray:
    return as_matrix(np.eye(dim), dim)


def dagger(m: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(m.conj().T)
    out.setflags(write=False)
    return out


def is_unitary(m: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    return bool(np.allclose(m @ m.conj().T, np.eye(m.shape[0]), rtol=0, atol=tol))


def _check_dims(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def mat_multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _check_dims(a, b)
    out = a @ b
    out.setflags(write=False)
    return out


def frobenius_norm(m: np.ndarray) -> float:
    """sqrt of the sum of squared moduli of all entries."""
    m = np.asarray(m)
    return float(np.sqrt(np.sum(m.real**2 + m.imag**2)))


def spectral_norm(m: np.ndarray) -> float:
    """Largest singular value. Reporting aid only; searches use the Frobenius norm."""
    return float(np.linalg.norm(np.asarray(m), 2))


def matrix_distance(a: np.ndarray, b: np.ndarray) -> float:
    _check_dims(a, b)
    return frobenius_norm(a - b)


def batch_frobenius(diff: np.ndarray) -> np.ndarray:
    """Frobenius norms over the last two axes of a stacked array."""
    return np.sqrt(np.sum(diff.real**2 + diff.imag**2, axis=(-2, -1)))


def distance(b1, b2, gs) -> float:
    """Distance between two braid words: the norm of their matrix difference."""
    from .braidword import mat

    return frobenius_norm(mat(b1, gs) - mat(b2, gs))


def braid_error(b, target, gs) -> float:
    """Error of braid ``b`` against a target gate (a TargetGate or a bare matrix)."""
    from .braidword import mat

    target_matrix = getattr(target, "matrix", target)
    if target_matrix.shape != (gs.dim, gs.dim):
        raise ValueError(
            f"dimension mismatch: gate set {gs.name!r} is {gs.dim}x{gs.dim}, "
            f"target is {target_matrix.shape[0]}x{target_matrix.shape[1]}"
        )
    return frobenius_norm(mat(b, gs) - target_matrix)
