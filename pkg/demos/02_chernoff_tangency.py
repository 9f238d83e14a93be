"""
Checking that a family is tangent to its generator
==================================================

A family S(t) qualifies when S(0) = I and (S(t)f - f)/t -> Lf.  The four
built-in families all pass; a family with the wrong derivative does not.
"""

import numpy as np

from quasifeynman import ChernoffFamily, check_tangency, make_family
from quasifeynman.experiment import random_hermitian

rng = np.random.default_rng(1)
L = random_hermitian(4, rng)

for kind in ("linear", "quadratic", "resolvent", "exact_exponential"):
    rep = check_tangency(make_family(kind, L, t_max=0.1))
    print(f"{kind:18s} residuals {[f'{r:.1e}' for r in rep.residuals]}  tangent={rep.tangent}")

# %%
# I + tL^2 has derivative L^2 at zero, so claiming L is caught.
D = np.diag([1.0, 2.0]).astype(complex)
wrong = ChernoffFamily("I + tL^2", "custom", D, lambda t: np.eye(2) + t * D @ D)
print()
print(check_tangency(wrong).format())
