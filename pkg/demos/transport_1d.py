"""One-dimensional optimal transport on histogram densities.

Run with ``python3 demos/transport_1d.py``.
"""
import numpy as np
from scipy import stats

from swkernels import Grid1D, normalize_1d, wasserstein2_1d
from swkernels.transport import psi_embed, psi_invert, riemann_norm, transport_map

grid = Grid1D.cells(-20.0, 20.0, 1024)
x = grid.positions


def gaussian(mean, sd):
    return normalize_1d(stats.norm.pdf(x, mean, sd), grid)


# Two Gaussians have a closed-form distance: sqrt((m1-m2)^2 + (s1-s2)^2).
a, b = gaussian(0.0, 1.0), gaussian(2.0, 3.0)
print(f"W2(N(0,1), N(2,3)) = {wasserstein2_1d(a, b):.6f}   closed form {np.sqrt(8):.6f}")

# The optimal map between them is affine: f(x) = 2 + 3x.
f = transport_map(a, b)
bulk = np.abs(x) < 3
slope = np.polyfit(x[bulk], f.values[bulk], 1)
print(f"fitted map slope {slope[0]:.4f}, intercept {slope[1]:.4f}")

# Embedding against a fixed template turns W2 into a Euclidean distance.
tpl = gaussian(0.0, 2.0)
c = normalize_1d(0.6 * stats.norm.pdf(x, -3, 1.2) + 0.4 * stats.norm.pdf(x, 4, 2.0), grid)
va, vc = psi_embed(a, tpl), psi_embed(c, tpl)
print(f"W2(a, c) = {wasserstein2_1d(a, c):.5f}   embedding distance {riemann_norm(va - vc, grid):.5f}")

# The embedding is invertible: push the template through the recovered map.
back = psi_invert(vc, tpl)
print(f"round-trip L1 error {np.abs(back.masses - c.masses).sum():.2e}")

# Straight lines in the embedding are displacement interpolations.
for t in (0.0, 0.25, 0.5, 0.75, 1.0):
    mid = psi_invert((1 - t) * va + t * vc, tpl)
    print(f"  t={t:.2f}  mean {mid.mean():+.3f}  W2 to a {wasserstein2_1d(mid, a):.4f}")
