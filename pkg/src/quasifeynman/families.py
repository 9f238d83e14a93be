"""Operator families S(t) tangent to a generator, and weighted decompositions.

A family is a map ``t -> S(t)`` on ``[0, t_max]`` with ``S(0) = I`` whose
derivative at zero is the claimed generator.  In finite dimension the
density and closure requirements on the generator are automatic, so the
verifier only needs the identity at zero and the difference-quotient limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .operators import (
    HERMITIAN_TOL,
    as_operator,
    hermitian_defect,
    hermitize,
    operator_norm,
)
from .oracle import hermitian_eigendecompose

FAMILY_KINDS = ("exact_exponential", "linear", "resolvent", "quadratic")

DEFAULT_T_GRID = (1e-1, 1e-2, 1e-3, 1e-4)

# t_max * ||L|| must stay at or below this for the resolvent family.
RESOLVENT_MARGIN = 0.5


class HypothesisError(ValueError):
    """A decomposition violates one of the convergence hypotheses.

    ``condition`` is the number of the failed hypothesis (3: generator not
    self-adjoint, 4: weighted family sum not self-adjoint, 5: coefficient
    sum not real).  Structural problems use ``condition=None``.
    """

    def __init__(self, message: str, condition: int | None = None):
        super().__init__(message)
        self.condition = condition


@dataclass(frozen=True)
class ChernoffFamily:
    """A family ``t -> S(t)`` together with the generator it claims.

    ``kind`` is one of :data:`FAMILY_KINDS` for the built-in families or any
    other label for user-supplied evaluators.
    """

    label: str
    kind: str
    generator: np.ndarray
    evaluator: Callable[[float], np.ndarray] = field(repr=False)
    t_max: float = np.inf

    @property
    def dim(self) -> int:
        return self.generator.shape[0]

    def __call__(self, t: float) -> np.ndarray:
        if t < 0 or t > self.t_max:
            raise ValueError(f"family {self.label!r} evaluated at t={t!r} outside [0, {self.t_max}]")
        if t == 0:
            return np.eye(self.dim, dtype=np.complex128)
        return self.evaluator(t)


def make_family(kind: str, L, t_max: float = 1.0, label: str | None = None) -> ChernoffFamily:
    """Build one of the standard families tangent to a Hermitian ``L``.

    ``exact_exponential``: ``exp(tL)``; ``linear``: ``I + tL``;
    ``resolvent``: ``(I - tL)^-1``; ``quadratic``: ``I + tL + t^2 L^2 / 2``.
    All of them are Hermitian for real ``t``.
    """
    if kind not in FAMILY_KINDS:
        raise ValueError(f"unknown family kind {kind!r}; expected one of {FAMILY_KINDS}")
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    L = as_operator(L, "generator")
    defect = hermitian_defect(L)
    if defect > HERMITIAN_TOL:
        raise ValueError(f"generator is not Hermitian (max |L - L^*| = {defect:.3e})")
    L = hermitize(L)
    dim = L.shape[0]
    eye = np.eye(dim, dtype=np.complex128)

    if kind == "exact_exponential":
        spec = hermitian_eigendecompose(L)

        def evaluator(t):
            return spec.function(np.exp(t * spec.eigenvalues))

    elif kind == "linear":

        def evaluator(t):
            return eye + t * L

    elif kind == "resolvent":
        norm = operator_norm(L)
        if t_max * norm > RESOLVENT_MARGIN:
            raise ValueError(
                f"resolvent family needs t_max*||L|| <= {RESOLVENT_MARGIN}, "
                f"got {t_max:g}*{norm:.4g} = {t_max * norm:.4g}"
            )

        def evaluator(t):
            return hermitize(np.linalg.inv(eye - t * L))

    else:
        L2 = L @ L

        def evaluator(t):
            return eye + t * L + (0.5 * t * t) * L2

    return ChernoffFamily(label or kind, kind, L, evaluator, float(t_max))


@dataclass(frozen=True)
class TangencyReport:
    t_grid: tuple[float, ...]
    residuals: tuple[float, ...]
    collective_bound: float
    hermitian_at_grid: bool
    ct2_pass: bool
    tangent: bool
    tol: float
    failed_at: float | None = None
    notes: tuple[str, ...] = (
        "continuity in t assumed (built-in evaluators are continuous by construction)",
        "closure condition trivially satisfied in finite dimension",
    )

    def format(self) -> str:
        lines = ["t            residual"]
        lines += [f"{t:<12.3e} {r:.6e}" for t, r in zip(self.t_grid, self.residuals)]
        lines += [
            f"tolerance         {self.tol:.3e}",
            f"collective bound  {self.collective_bound:.6f}",
            f"S(0) = I          {self.ct2_pass}",
            f"Hermitian on grid {self.hermitian_at_grid}",
            f"tangent           {self.tangent}",
        ]
        if self.failed_at is not None:
            lines.append(f"evaluation failed at t = {self.failed_at!r}")
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines)


def tangency_residual(family: ChernoffFamily, t: float) -> float:
    """``max_j || (S(t) e_j - e_j)/t - L e_j ||`` over the standard basis."""
    S = family(t)
    eye = np.eye(family.dim, dtype=np.complex128)
    D = (S - eye) / t - family.generator
    return float(np.max(np.linalg.norm(D, axis=0)))


def check_tangency(
    family: ChernoffFamily,
    tol: float | None = None,
    t_grid: Sequence[float] = DEFAULT_T_GRID,
) -> TangencyReport:
    """Numerically verify that ``family`` is tangent to its generator.

    Parameters
    ----------
    family : ChernoffFamily
    tol : float, optional
        Acceptance threshold for the residual at the smallest grid point.
        Defaults to ``1e-2 * (1 + ||L||^2)``.
    t_grid : sequence of float
        Strictly decreasing positive times inside the family's range.
    """
    grid = tuple(float(t) for t in t_grid)
    if not grid or any(t <= 0 for t in grid) or any(b >= a for a, b in zip(grid, grid[1:])):
        raise ValueError("t_grid must be non-empty, positive and strictly decreasing")
    if grid[0] > family.t_max:
        raise ValueError(f"t_grid exceeds family range t_max={family.t_max}")
    if tol is None:
        tol = 1e-2 * (1.0 + operator_norm(family.generator) ** 2)
    if tol <= 0:
        raise ValueError("tol must be positive")

    eye = np.eye(family.dim, dtype=np.complex128)
    S0 = family(0.0)
    ct2 = bool(np.max(np.abs(S0 - eye)) < 1e-14)

    residuals: list[float] = []
    hermitian = True
    failed_at = None
    for t in grid:
        try:
            S = family(t)
            if not np.all(np.isfinite(S)):
                raise FloatingPointError("non-finite family value")
        except (ValueError, np.linalg.LinAlgError, FloatingPointError):
            failed_at = t
            break
        hermitian &= hermitian_defect(S) <= HERMITIAN_TOL
        residuals.append(tangency_residual(family, t))

    upper = min(1.0, family.t_max)
    probe = sorted(set(np.linspace(0.0, upper, 11).tolist()) | {t for t in grid if t <= upper})
    bound = 0.0
    if failed_at is None:
        for t in probe:
            bound = max(bound, operator_norm(family(t)))

    tangent = failed_at is None and ct2 and residuals[-1] < tol
    return TangencyReport(
        t_grid=grid[: len(residuals)],
        residuals=tuple(residuals),
        collective_bound=bound,
        hermitian_at_grid=bool(hermitian),
        ct2_pass=ct2,
        tangent=bool(tangent),
        tol=float(tol),
        failed_at=failed_at,
    )


@dataclass(frozen=True)
class Decomposition:
    """``L = a_1 L_1 + ... + a_m L_m`` with one tangent family per term.

    The Hamiltonian of the Schroedinger equation is ``-L``.
    """

    coefficients: tuple[float, ...]
    families: tuple[ChernoffFamily, ...]
    assembled_generator: np.ndarray = field(repr=False)
    coefficient_sum: float
    hamiltonian: np.ndarray = field(repr=False)

    @property
    def m(self) -> int:
        return len(self.coefficients)

    @property
    def dim(self) -> int:
        return self.assembled_generator.shape[0]

    @property
    def t_max(self) -> float:
        return min(f.t_max for f in self.families)

    def family_sum(self, t: float) -> np.ndarray:
        """``S(t) = sum_k a_k S_k(t)``."""
        return sum(a * f(t) for a, f in zip(self.coefficients, self.families))

    def shifted_sum(self, t: float) -> np.ndarray:
        """``S(t) - aI = sum_k a_k (S_k(t) - I)``; Hermitian under the hypotheses."""
        eye = np.eye(self.dim, dtype=np.complex128)
        return sum(a * (f(t) - eye) for a, f in zip(self.coefficients, self.families))

    def augmented(self, t: float) -> tuple[tuple[float, ...], tuple[np.ndarray, ...]]:
        """Coefficients and operators with the extra term ``a_{m+1} = -a``, ``S_{m+1} = I``."""
        coeffs = self.coefficients + (-self.coefficient_sum,)
        ops = tuple(f(t) for f in self.families) + (np.eye(self.dim, dtype=np.complex128),)
        return coeffs, ops


def assemble_decomposition(
    coefficients: Sequence[float],
    families: Sequence[ChernoffFamily],
    sample_ts: Sequence[float] | None = None,
) -> Decomposition:
    """Combine families into a decomposition and check the hypotheses.

    Raises
    ------
    HypothesisError
        With ``condition`` set to 3, 4 or 5 when the assembled generator, the
        weighted family sum at some sample time, or the coefficient sum fails
        its requirement.
    """
    families = tuple(families)
    if len(families) == 0:
        raise HypothesisError("decomposition needs at least one term")
    if len(coefficients) != len(families):
        raise HypothesisError("coefficients and families differ in length")
    coeffs = []
    for a in coefficients:
        a = complex(a)
        if a.imag != 0:
            raise HypothesisError(f"coefficient {a} is not real (condition 5)", condition=5)
        if a.real == 0:
            raise HypothesisError("coefficients must be non-zero")
        coeffs.append(float(a.real))
    dims = {f.dim for f in families}
    if len(dims) != 1:
        raise HypothesisError(f"families have different dimensions {sorted(dims)}")

    L = sum(a * f.generator for a, f in zip(coeffs, families))
    defect = hermitian_defect(L)
    if defect > HERMITIAN_TOL:
        raise HypothesisError(
            f"condition 3 failed: assembled generator not self-adjoint (defect {defect:.3e})",
            condition=3,
        )
    a_sum = float(np.sum(coeffs))
    if not np.isfinite(a_sum):
        raise HypothesisError("condition 5 failed: coefficient sum not a finite real", condition=5)

    t_max = min(f.t_max for f in families)
    if sample_ts is None:
        top = min(t_max, 1.0)
        sample_ts = (0.0, top / 4, top / 2, top)
    for t in sample_ts:
        S = sum(a * f(t) for a, f in zip(coeffs, families))
        defect = hermitian_defect(S)
        if defect > HERMITIAN_TOL:
            raise HypothesisError(
                f"condition 4 failed: sum a_k S_k(t) not self-adjoint at t={t:g} "
                f"(defect {defect:.3e})",
                condition=4,
            )

    L = as_operator(L, "assembled generator")
    H = -L
    H.setflags(write=False)
    return Decomposition(tuple(coeffs), families, L, a_sum, H)
