"""Reference exponentials.

``stone_propagator`` is the trusted ground truth: the unitary group of a
Hermitian generator built by spectral calculus.  ``exp_bounded`` is an
independent series route (scaling and squaring with a truncated Taylor sum)
used for the non-normal exponents that appear in the approximation schemes.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .operators import HERMITIAN_TOL, as_operator, hermitian_defect


class SpectralDecomposition(NamedTuple):
    """Eigenvalues in ascending order and a unitary matrix of eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T

    def function(self, values: np.ndarray) -> np.ndarray:
        """``U diag(values) U^*`` for values given per eigenvalue."""
        u = self.eigenvectors
        return (u * values) @ u.conj().T


def _require_hermitian(op: np.ndarray, name: str) -> None:
    defect = hermitian_defect(op)
    if defect > HERMITIAN_TOL:
        raise ValueError(
            f"{name} is not Hermitian: max |A - A^*| = {defect:.3e} exceeds {HERMITIAN_TOL:g}"
        )


def hermitian_eigendecompose(op) -> SpectralDecomposition:
    op = as_operator(op)
    _require_hermitian(op, "operator")
    w, u = np.linalg.eigh(op)
    w.setflags(write=False)
    u.setflags(write=False)
    return SpectralDecomposition(w, u)


def stone_propagator(L, t: float) -> np.ndarray:
    """Unitary group ``exp(i t L)`` of a Hermitian generator ``L``.

    Parameters
    ----------
    L : array_like
        Hermitian generator.
    t : float
        Real time; negative values are allowed.
    """
    dec = L if isinstance(L, SpectralDecomposition) else hermitian_eigendecompose(L)
    if t == 0:
        return np.eye(dec.eigenvectors.shape[0], dtype=np.complex128)
    return dec.function(np.exp(1j * t * dec.eigenvalues))


def exp_bounded(A) -> np.ndarray:
    """Matrix exponential by scaling and squaring.

    ``A`` is scaled by ``2**-s`` until its Frobenius norm (an upper bound for
    the spectral norm) is at most 0.5, the Taylor series is summed until a
    term is below ``1e-16`` of the partial sum, and the result is squared
    ``s`` times.
    """
    A = as_operator(A)
    dim = A.shape[0]
    eye = np.eye(dim, dtype=np.complex128)
    norm = float(np.linalg.norm(A))
    if norm == 0.0:
        return eye
    s = max(0, math.ceil(math.log2(norm / 0.5)))
    X = A / (2.0**s)

    result = eye.copy()
    term = eye
    for k in range(1, 60):
        term = term @ X / k
        result += term
        if np.linalg.norm(term) < 1e-16 * np.linalg.norm(result):
            break
    for _ in range(s):
        result = result @ result
    return result


def euler_limit_exp(A, k: int) -> np.ndarray:
    """``(I + A/k)**k`` computed by binary powering."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    A = as_operator(A)
    base = np.eye(A.shape[0], dtype=np.complex128) + A / k
    return np.linalg.matrix_power(base, int(k))
