"""Quasi-Feynman approximations of ``exp(itL) f`` for ``L = sum_k a_k L_k``.

The building block is the unitary family

    R(t) = exp[i sign(t) (S(|t|) - aI)],   S(t) = sum_k a_k S_k(t),  a = sum_k a_k,

whose n-th power at ``t/n`` converges to ``exp(itL)``.  Expanding the
exponential either as a power series or as an Euler limit ``(I + A/p)^p``
gives sums over compositions ``S_{k_1} ... S_{k_p}`` of growing length; both
are implemented, with the compositions enumerated literally or collapsed
into powers of one assembled operator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .families import ChernoffFamily, Decomposition
from .operators import as_state
from .oracle import exp_bounded, stone_propagator

VARIANTS = ("operator_exp", "series", "binomial")
DEFAULT_TERM_CAP = 3**12
DEFAULT_SERIES_ORDER = 25
DEFAULT_EULER_POWER = 2**12


class TermCapError(ValueError):
    """Literal enumeration would need more index tuples than allowed."""

    def __init__(self, required: int, cap: int):
        super().__init__(f"literal multinomial sum needs {required} terms, cap is {cap}")
        self.required = required
        self.cap = cap


@dataclass(frozen=True)
class QuasiFeynmanConfig:
    """Numerical schedule for one propagation.

    ``truncation`` is the series order for ``variant="series"`` and the Euler
    power for ``variant="binomial"``; it is ignored by ``operator_exp``.
    """

    n: int
    truncation: int = DEFAULT_SERIES_ORDER
    variant: str = "operator_exp"
    term_cap: int = DEFAULT_TERM_CAP

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        if self.truncation < 0 or (self.variant == "binomial" and self.truncation < 1):
            raise ValueError("truncation out of range for the chosen variant")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        if self.term_cap < 1:
            raise ValueError("term_cap must be positive")


class MultinomialPower(NamedTuple):
    literal: np.ndarray | None
    closed: np.ndarray


class FormulaResult(NamedTuple):
    state: np.ndarray
    path: str
    remainder_bound: float | None = None


class ErrorReport(NamedTuple):
    oracle_residual: float
    norm_drift: float
    path: str | None = None
    remainder_bound: float | None = None


def _sign(t: float) -> float:
    return float(np.sign(t))


def _check_range(dec: Decomposition, tau: float) -> None:
    if abs(tau) > dec.t_max:
        raise ValueError(f"|t| = {abs(tau):g} exceeds the decomposition range t_max = {dec.t_max:g}")


def _state_for(dec: Decomposition, f) -> np.ndarray:
    f = as_state(f)
    if f.shape[0] != dec.dim:
        raise ValueError(f"state has dimension {f.shape[0]}, decomposition has {dec.dim}")
    return f


def r_exponent(dec: Decomposition, t: float) -> np.ndarray:
    """``i sign(t) (S(|t|) - aI)``, the exponent of ``R(t)``."""
    _check_range(dec, t)
    return 1j * _sign(t) * dec.shifted_sum(abs(t))


def r_operator(dec: Decomposition, t: float) -> np.ndarray:
    """The unitary family ``R(t)``; ``R(0) = I``."""
    if t == 0:
        return np.eye(dec.dim, dtype=np.complex128)
    return exp_bounded(r_exponent(dec, t))


def chernoff_iterate(dec: Decomposition, t: float, n: int, f) -> np.ndarray:
    """``R(t/n)^n f`` by applying one precomputed ``R(t/n)`` n times."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    f = _state_for(dec, f)
    R = r_operator(dec, t / n)
    v = np.array(f)
    for _ in range(n):
        v = R @ v
    return v


def _assembled_step(dec: Decomposition, tau: float) -> np.ndarray:
    """``B = sum_{k=1}^{m+1} a_k S_k(tau)`` with the augmented last term."""
    coeffs, ops = dec.augmented(tau)
    return sum(a * S for a, S in zip(coeffs, ops))


def _literal_power(coeffs, ops, p: int, f: np.ndarray) -> np.ndarray:
    """Sum over all index tuples of ``a_{k_1}..a_{k_p} S_{k_1}..S_{k_p} f``.

    Depth-first: each level applies one more operator to the partial vector,
    so the innermost factor ``S_{k_p}`` is applied first.
    """
    acc = np.zeros_like(f)

    def visit(depth: int, vec: np.ndarray, weight: float) -> None:
        nonlocal acc
        if depth == p:
            acc = acc + weight * vec
            return
        for a, S in zip(coeffs, ops):
            visit(depth + 1, S @ vec, weight * a)

    visit(0, f, 1.0)
    return acc


def multinomial_power(
    dec: Decomposition,
    t: float,
    n: int,
    p: int,
    f,
    term_cap: int = DEFAULT_TERM_CAP,
    literal: bool = True,
) -> MultinomialPower:
    """``(sum_{k=1}^{m+1} a_k S_k(|t|/n))^p f`` by two routes.

    The literal route enumerates all ``(m+1)^p`` compositions; the closed
    route applies the assembled operator p times.  Pass ``literal=False`` to
    skip enumeration.

    Raises
    ------
    TermCapError
        If ``literal`` is requested and ``(m+1)^p`` exceeds ``term_cap``.
    """
    if p < 0:
        raise ValueError("p must be non-negative")
    tau = abs(t) / n
    _check_range(dec, tau)
    f = _state_for(dec, f)
    coeffs, ops = dec.augmented(tau)
    B = sum(a * S for a, S in zip(coeffs, ops))

    closed = np.array(f)
    for _ in range(p):
        closed = B @ closed

    lit = None
    if literal:
        required = (dec.m + 1) ** p
        if required > term_cap:
            raise TermCapError(required, term_cap)
        lit = _literal_power(coeffs, ops, p, np.array(f))
    return MultinomialPower(lit, closed)


def _expansion(dec: Decomposition, t: float, n: int, order: int, f: np.ndarray, term_cap: int, ratio):
    """``sum_{d=0}^{order} c_d (nB)^d f`` with ``c_0 = 1``, ``c_d = c_{d-1} * ratio(d)``.

    The factor n is carried inside the powers so the weights stay bounded.
    Within ``term_cap`` every power is enumerated literally over composition
    tuples; otherwise weight and vector are advanced together, which keeps
    both finite for long expansions.
    """
    tau = abs(t) / n
    _check_range(dec, tau)
    coeffs, ops = dec.augmented(tau)
    if (dec.m + 1) ** order <= term_cap:
        scaled = tuple(n * a for a in coeffs)
        out = np.array(f)
        c = 1.0 + 0j
        for d in range(1, order + 1):
            c *= ratio(d)
            out = out + c * _literal_power(scaled, ops, d, f)
        return out, "literal"
    nB = n * sum(a * S for a, S in zip(coeffs, ops))
    out = np.array(f)
    vec = np.array(f)
    for d in range(1, order + 1):
        vec = ratio(d) * (nB @ vec)
        out = out + vec
    return out, "closed"


def _series_tail(x: float, j: int) -> float:
    """``sum_{p>j} x^p / p!`` summed directly (no cancellation)."""
    if x == 0:
        return 0.0
    term = 1.0
    for p in range(1, j + 1):
        term *= x / p
    total = 0.0
    p = j + 1
    while True:
        term *= x / p
        total += term
        if term <= 1e-17 * total or p > j + 10_000:
            return total
        p += 1


def series_formula(
    dec: Decomposition, t: float, n: int, j: int, f, term_cap: int = DEFAULT_TERM_CAP
) -> FormulaResult:
    """Truncated exponential-series expansion at fixed n.

    Returns ``sum_{p=0}^{j} (i n sign(t))^p / p! * B^p f`` with
    ``B = sum_{k=1}^{m+1} a_k S_k(|t|/n)``, the path used for the composition
    sums, and the tail bound ``sum_{p>j} (n||B||)^p/p! * ||f||``.
    """
    if n < 1 or j < 0:
        raise ValueError("need n >= 1 and j >= 0")
    f = _state_for(dec, f)
    z = 1j * _sign(t)
    out, path = _expansion(dec, t, n, j, f, term_cap, lambda p: z / p)
    B = _assembled_step(dec, abs(t) / n)
    x = n * float(np.linalg.norm(B, 2)) if t != 0 else 0.0
    bound = _series_tail(x, j) * float(np.linalg.norm(f))
    return FormulaResult(out, path, bound)


def binomial_formula(
    dec: Decomposition, t: float, n: int, p: int, f, term_cap: int = DEFAULT_TERM_CAP
) -> FormulaResult:
    """Euler-limit expansion ``(I + A/p)^p f`` written as a binomial sum.

    ``A = i n sign(t) B``.  The weights ``p! (i n sign t)^d / (p^d d! (p-d)!)``
    are built by the recurrence ``c_{d+1} = c_d (i sign t)(p-d)/(p(d+1))``
    with the powers of n applied to the vectors instead.
    """
    if n < 1 or p < 1:
        raise ValueError("need n >= 1 and p >= 1")
    f = _state_for(dec, f)
    z = 1j * _sign(t)
    out, path = _expansion(dec, t, n, p, f, term_cap, lambda d: z * (p - d + 1) / (p * d))
    return FormulaResult(out, path)


def solve_schrodinger(
    dec: Decomposition, psi0, t: float, cfg: QuasiFeynmanConfig
) -> tuple[np.ndarray, ErrorReport]:
    """Approximate ``psi(t) = exp(-it H) psi0`` with ``H = -L``.

    The error report compares against the spectral propagator of ``L``.
    """
    psi0 = _state_for(dec, psi0)
    path = None
    bound = None
    if cfg.variant == "operator_exp":
        psi = chernoff_iterate(dec, t, cfg.n, psi0)
    elif cfg.variant == "series":
        psi, path, bound = series_formula(dec, t, cfg.n, cfg.truncation, psi0, cfg.term_cap)
    else:
        psi, path, _ = binomial_formula(dec, t, cfg.n, cfg.truncation, psi0, cfg.term_cap)
    exact = stone_propagator(dec.assembled_generator, t) @ psi0
    report = ErrorReport(
        oracle_residual=float(np.linalg.norm(psi - exact)),
        norm_drift=abs(float(np.linalg.norm(psi)) - float(np.linalg.norm(psi0))),
        path=path,
        remainder_bound=bound,
    )
    return psi, report



def r_family(dec: Decomposition) -> ChernoffFamily:
    """``t -> R(t)`` on ``t >= 0`` as a family claiming the generator ``iL``."""
    return ChernoffFamily(
        label="R",
        kind="quasi_feynman",
        generator=1j * dec.assembled_generator,
        evaluator=lambda t: r_operator(dec, t),
        t_max=dec.t_max,
    )
