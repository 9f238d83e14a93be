"""
Three evaluations of the same propagator
========================================

For L = a1 L1 + a2 L2 with resolvent families S_k(t) = (I - t L_k)^-1 we
compare

* the iteration R(t/n)^n f with R(t) = exp[i(S(t) - aI)],
* the exponential series summed over compositions S_k1 ... S_kp,
* the Euler-limit binomial sum,

against the exact exp(itL) f.
"""

import numpy as np

from quasifeynman import (
    assemble_decomposition,
    binomial_formula,
    chernoff_iterate,
    make_family,
    multinomial_power,
    series_formula,
    stone_propagator,
)
from quasifeynman.experiment import random_hermitian, random_state

rng = np.random.default_rng(2)
L1, L2 = random_hermitian(4, rng, 0.5), random_hermitian(4, rng, 0.5)
f = random_state(4, rng)
t = 0.7
dec = assemble_decomposition(
    [1.0, -1.0], [make_family("resolvent", L1, t_max=t / 4), make_family("resolvent", L2, t_max=t / 4)]
)
exact = stone_propagator(dec.assembled_generator, t) @ f

# %%
# The composition sum can be enumerated tuple by tuple or collapsed into a
# power of one operator; both give the same vector.
mp = multinomial_power(dec, t, 4, 5, f)
print("literal vs closed, p = 5  :", np.linalg.norm(mp.literal - mp.closed))

# %%
for n in (4, 16, 64):
    it = chernoff_iterate(dec, t, n, f)
    ser = series_formula(dec, t, n, 25, f)
    bino = binomial_formula(dec, t, n, 4096, f)
    print(
        f"n = {n:3d}  iterate {np.linalg.norm(it - exact):.2e}"
        f"  series {np.linalg.norm(ser.state - exact):.2e} (tail bound {ser.remainder_bound:.1e})"
        f"  binomial {np.linalg.norm(bino.state - exact):.2e}"
    )
