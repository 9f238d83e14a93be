"""Competing product formulas and the Chernoff-equivalence distance."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .families import ChernoffFamily, Decomposition, assemble_decomposition
from .operators import as_state
from .oracle import hermitian_eigendecompose, stone_propagator
from .quasi_feynman import chernoff_iterate, r_operator


@dataclass(frozen=True)
class AbstractFamily:
    """An operator-valued map ``t -> G(t)`` with ``G(0) = I``.

    ``two_sided`` marks families that are also defined for negative t.
    """

    label: str
    evaluator: Callable[[float], np.ndarray] = field(repr=False)
    two_sided: bool = False
    t_max: float = np.inf

    def __call__(self, t: float) -> np.ndarray:
        if (t < 0 and not self.two_sided) or abs(t) > self.t_max:
            raise ValueError(f"family {self.label!r} is not defined at t={t!r}")
        return self.evaluator(t)


def stone_family(L, label: str = "stone") -> AbstractFamily:
    """``t -> exp(itL)`` on the whole real line."""
    spec = hermitian_eigendecompose(L)
    return AbstractFamily(label, lambda t: stone_propagator(spec, t), two_sided=True)


def r_abstract_family(dec: Decomposition) -> AbstractFamily:
    """``t -> R(t)``, two-sided, restricted to the decomposition's range."""
    return AbstractFamily("R", lambda t: r_operator(dec, t), two_sided=True, t_max=dec.t_max)


def skew_family(kind: str, H, label: str | None = None) -> AbstractFamily:
    """Standard families tangent to ``iH`` for Hermitian ``H``.

    ``exact_exponential``: ``exp(itH)``; ``linear``: ``I + itH``;
    ``resolvent``: ``(I - itH)^-1``; ``quadratic``: ``I + itH - t^2 H^2/2``.
    None of these except the exponential is unitary.
    """
    spec = hermitian_eigendecompose(H)
    H = spec.reconstruct()
    eye = np.eye(H.shape[0], dtype=np.complex128)
    if kind == "exact_exponential":
        ev = lambda t: stone_propagator(spec, t)  # noqa: E731
    elif kind == "linear":
        ev = lambda t: eye + 1j * t * H  # noqa: E731
    elif kind == "resolvent":
        ev = lambda t: np.linalg.inv(eye - 1j * t * H)  # noqa: E731
    elif kind == "quadratic":
        H2 = H @ H
        ev = lambda t: eye + 1j * t * H - 0.5 * t * t * H2  # noqa: E731
    else:
        raise ValueError(f"unknown family kind {kind!r}")
    return AbstractFamily(label or f"{kind}(iH)", ev)


def _power_apply(G: np.ndarray, n: int, f: np.ndarray) -> np.ndarray:
    v = np.array(f)
    for _ in range(n):
        v = G @ v
    return v


def trotter_product(dec: Decomposition, t: float, n: int, f) -> np.ndarray:
    """``(exp(i t a_1 L_1/n) ... exp(i t a_m L_m/n))^n f``."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    f = as_state(f)
    step = np.eye(dec.dim, dtype=np.complex128)
    for a, fam in zip(dec.coefficients, dec.families):
        step = step @ stone_propagator(a * fam.generator, t / n)
    return _power_apply(step, n, f)


def bss_product(families: Sequence[AbstractFamily], t: float, n: int, f) -> np.ndarray:
    """``(S_1(t/n) ... S_m(t/n))^n f`` for families tangent to ``i a_k L_k``.

    No norm preservation is implied; the caller should track the drift.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    f = as_state(f)
    dims = {f.shape[0]}
    step = None
    for fam in families:
        G = fam(t / n)
        dims.add(G.shape[0])
        step = G if step is None else step @ G
    if len(dims) != 1:
        raise ValueError("families and state have inconsistent dimensions")
    return _power_apply(step, n, f)


def chernoff_distance(
    g1: AbstractFamily,
    g2: AbstractFamily,
    f,
    T: float,
    n: int,
    grid_size: int = 33,
    two_sided: bool | None = None,
) -> float:
    """Grid maximum of ``||G1(t/n)^n f - G2(t/n)^n f||`` over ``[0, T]``.

    When ``two_sided`` is left as ``None`` the grid covers ``[-T, T]`` if
    both families accept negative arguments.  The grid maximum is a lower
    bound for the supremum over the interval.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    if n < 1 or T <= 0:
        raise ValueError("need n >= 1 and T > 0")
    f = as_state(f)
    if two_sided is None:
        two_sided = g1.two_sided and g2.two_sided
    ts = np.linspace(-T if two_sided else 0.0, T, grid_size)
    if g1 is g2:
        return 0.0
    worst = 0.0
    for t in ts:
        d = _power_apply(g1(t / n), n, f) - _power_apply(g2(t / n), n, f)
        worst = max(worst, float(np.linalg.norm(d)))
    return worst


def remizov_single(fam: ChernoffFamily, a: float, t: float, n: int, f) -> np.ndarray:
    """One-term case ``R(t) = exp[ia(S(t) - I)]``, iterated n times."""
    dec = assemble_decomposition([a], [fam])
    return chernoff_iterate(dec, t, n, f)
