"""
Exact propagators and two ways to exponentiate
==============================================

The reference solution of i psi' = H psi is psi(t) = exp(itL) psi0 with
L = -H.  For a Hermitian L we build it from the eigendecomposition, and
compare with a Taylor-series exponential and with the Euler limit
(I + A/k)^k.
"""

import numpy as np

from quasifeynman import euler_limit_exp, exp_bounded, operator_norm, stone_propagator
from quasifeynman.experiment import random_hermitian

rng = np.random.default_rng(0)
L = random_hermitian(6, rng, norm=2.0)

# %%
# The spectral propagator is unitary and satisfies the group law.
U1 = stone_propagator(L, 0.4)
U2 = stone_propagator(L, 0.6)
print("||exp(0.4iL)||            =", operator_norm(U1))
print("group law defect          =", np.abs(U1 @ U2 - stone_propagator(L, 1.0)).max())

# %%
# Scaling-and-squaring reaches the same operator through a different route.
print("series vs spectral        =", np.abs(exp_bounded(1j * L) - stone_propagator(L, 1.0)).max())

# %%
# The Euler limit converges only like 1/k.
for k in (4, 16, 64, 256, 1024):
    err = operator_norm(euler_limit_exp(1j * L, k) - stone_propagator(L, 1.0))
    print(f"k = {k:5d}   ||(I + iL/k)^k - exp(iL)|| = {err:.3e}")
