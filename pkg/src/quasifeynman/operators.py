"""Dense complex linear algebra on a finite-dimensional Hilbert space.

Operators are ``(dim, dim)`` complex arrays and states are ``(dim,)`` complex
arrays.  The ``as_operator`` / ``as_state`` validators return read-only
copies so values handed around the library are never mutated in place.
"""

from __future__ import annotations

import numpy as np

HERMITIAN_TOL = 1e-10


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def as_operator(op, name: str = "operator") -> np.ndarray:
    """Validate ``op`` as a square, finite complex matrix and return a frozen copy."""
    arr = np.array(op, dtype=np.complex128, copy=True)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ValueError(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return _freeze(arr)


def as_state(v, name: str = "state") -> np.ndarray:
    """Validate ``v`` as a finite complex vector and return a frozen copy."""
    arr = np.array(v, dtype=np.complex128, copy=True)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise ValueError(f"{name} must be a non-empty vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return _freeze(arr)


def identity(dim: int) -> np.ndarray:
    if dim < 1:
        raise ValueError("dim must be positive")
    return _freeze(np.eye(dim, dtype=np.complex128))


def apply(op, v) -> np.ndarray:
    """Matrix-vector product ``op @ v`` with dimension checking."""
    op = as_operator(op)
    v = as_state(v)
    if op.shape[0] != v.shape[0]:
        raise ValueError(f"dimension mismatch: operator {op.shape[0]} vs state {v.shape[0]}")
    return _freeze(op @ v)


def adjoint(op) -> np.ndarray:
    return _freeze(as_operator(op).conj().T.copy())


def hermitian_defect(op) -> float:
    """Largest entrywise modulus of ``op - op^*``."""
    op = as_operator(op)
    return float(np.max(np.abs(op - op.conj().T)))


def adjoint_and_hermitian_check(op, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, bool]:
    """Return the conjugate transpose of ``op`` and whether ``op`` is Hermitian.

    The flag is ``max |op - op^*| <= tol`` taken entrywise.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    adj = adjoint(op)
    return adj, hermitian_defect(op) <= tol


def is_hermitian(op, tol: float = HERMITIAN_TOL) -> bool:
    return hermitian_defect(op) <= tol


def hermitize(op) -> np.ndarray:
    """Orthogonal projection onto Hermitian matrices, ``(op + op^*) / 2``."""
    op = as_operator(op)
    return _freeze(0.5 * (op + op.conj().T))


def operator_norm(op) -> float:
    """Spectral norm (largest singular value)."""
    op = as_operator(op)
    return float(np.linalg.svd(op, compute_uv=False)[0])


def state_norm(v) -> float:
    return float(np.linalg.norm(as_state(v)))
