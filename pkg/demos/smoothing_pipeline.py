#!/usr/bin/env python3
"""Regularized maximum, smoothed norm combinations, and the nested
strongly convex outer approximation, end to end on the planar cone
E = {x2 >= |x1|}.
"""

import numpy as np

from okacert import (
    Epigraph,
    NormCombo,
    hessian_min_eig,
    outer_sequence,
    rmax,
    smooth_normcombo,
)

rng = np.random.default_rng(7)

# ---------------------------------------------------------------------------
# 1. the regularized maximum: max <= rmax <= max + delta, exact when separated
# ---------------------------------------------------------------------------

delta = 0.25
v = rng.uniform(-2, 2, size=(5, 3))
r = rmax(v, delta)
print("values          ", np.round(v, 3))
print("max             ", np.round(np.max(v, axis=-1), 4))
print("rmax            ", np.round(r, 4))
print("excess over max ", np.round(r - np.max(v, axis=-1), 4), f"(delta={delta})")
print("ties get lifted, separated arguments pass through exactly:")
print("  rmax(5, 1)  =", rmax(np.array([5.0, 1.0]), delta), "(exact)")
print("  rmax(0, 0)  =", float(rmax(np.array([0.0, 0.0]), delta)), "(in (0, delta])")
print()

# ---------------------------------------------------------------------------
# 2. smoothing a norm combination phi = |x1| + |x2| + |x3|
# ---------------------------------------------------------------------------

phi = NormCombo([1.0, 1.0, 1.0], np.eye(3))
eta = 0.05
psi = smooth_normcombo(phi, eta)
xs = rng.uniform(-1.5, 1.5, size=(4, 3))
print("phi  at samples:", np.round(phi.value(xs), 4))
print("psi  at samples:", np.round(psi.value(xs), 4))
print("sandwich: phi - 3*eta <= psi <= phi, strongly convex everywhere")
worst = min(hessian_min_eig(lambda u: float(psi.value(u)), x, h=1e-4) for x in xs)
print("min Hessian eigenvalue across samples:", f"{worst:.2e}")
print()

# ---------------------------------------------------------------------------
# 3. nested smooth strongly convex outer sets around the cone
# ---------------------------------------------------------------------------

E = Epigraph(NormCombo([1.0], [[1.0]]), m=2, graph_index=1, base_indices=[0])
state = outer_sequence(E, steps=3, window=5.0)
print("outer approximation:", len(state.separators), "separators folded in,"
      " one per stage, delta =", state.delta)

# sample a coarse grid and sketch the three sublevel sets around the cone
n = 31
axis = np.linspace(-3, 3, n)
X, Y = np.meshgrid(axis, axis, indexing="ij")
grid = np.stack([X.ravel(), Y.ravel()], axis=-1)
stages = state.stage_values(grid)
chars = np.full(grid.shape[0], ".", dtype="U1")
for k in (1, 2, 3):
    chars[stages[k - 1] < 0] = str(k)       # tightest stage that excludes it
chars[E.contains(grid)] = "E"
print("E = cone, digits = covered by stage k sublevel set (3 = tightest):")
for j in range(n - 1, -1, -1):              # print with x2 increasing upward
    print("   " + "".join(chars.reshape(n, n)[:, j]))
