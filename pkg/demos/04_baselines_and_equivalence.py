"""
Product formulas side by side
=============================

Trotter splitting, products of non-unitary tangent families, and the
quasi-Feynman iteration on one 8-dimensional problem.  The last part
measures how fast the iterated R family approaches the exact group in the
sup-over-time distance.
"""

import numpy as np

from quasifeynman import (
    assemble_decomposition,
    bss_product,
    chernoff_distance,
    chernoff_iterate,
    make_family,
    r_abstract_family,
    skew_family,
    stone_family,
    stone_propagator,
    trotter_product,
)
from quasifeynman.experiment import random_hermitian, random_state

rng = np.random.default_rng(42)
L1, L2 = random_hermitian(8, rng), random_hermitian(8, rng)
f = random_state(8, rng)
coeffs = [1.0, -1.0]
dec = assemble_decomposition(coeffs, [make_family("resolvent", L, t_max=0.25) for L in (L1, L2)])
exact = stone_propagator(dec.assembled_generator, 1.0) @ f
bss_fams = [skew_family("resolvent", a * L) for a, L in zip(coeffs, (L1, L2))]

print("    n   trotter    bss(resolvent)  |bss|-1     quasi-Feynman")
for n in (4, 16, 64, 256, 1024):
    tr = trotter_product(dec, 1.0, n, f)
    bs = bss_product(bss_fams, 1.0, n, f)
    qf = chernoff_iterate(dec, 1.0, n, f)
    print(
        f"{n:5d}   {np.linalg.norm(tr - exact):.2e}   {np.linalg.norm(bs - exact):.2e}"
        f"       {np.linalg.norm(bs) - 1:+.1e}   {np.linalg.norm(qf - exact):.2e}"
    )

# %%
g_r, g_exact = r_abstract_family(dec), stone_family(dec.assembled_generator)
for n in (4, 16, 64, 256):
    d = chernoff_distance(g_r, g_exact, f, 1.0, n)
    print(f"sup over t in [-1, 1] (33 points), n = {n:3d}: {d:.3e}")
