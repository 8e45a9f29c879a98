#!/usr/bin/env python3
"""Map points between the unit-ball and halfspace models of C^n and verify
the boundary-defect identity that ties the two charts together.
"""

import numpy as np

from okacert import cayley_forward, cayley_inverse, siegel_defect

rng = np.random.default_rng(11)

# a few hand points in the ball model of C^2 (last coordinate is the axis)
w = np.array([
    [0.0 + 0.0j, 0.0 + 0.0j],     # center -> (0, i)
    [0.3 + 0.1j, -0.2 + 0.0j],
    [0.0 + 0.0j, 0.9 + 0.0j],     # near the pole at w_n = 1
])
z = cayley_forward(w)
print("ball model points:")
for wi, zi in zip(w, z):
    print(f"  w = {np.round(wi, 3)}  ->  z = {np.round(zi, 4)},"
          f" defect Im z_n - |z'|^2 = {siegel_defect(zi):.4f}")

back = cayley_inverse(z)
print("roundtrip max error:", f"{np.max(np.abs(back - w)):.2e}")
print()

# the identity: defect(z) = (1 - |w|^2) / |1 - w_n|^2, so the open ball maps
# exactly onto the open halfspace and the sphere onto its boundary
g = rng.normal(size=(4000, 4))
g /= np.linalg.norm(g, axis=1, keepdims=True)
r = rng.uniform(0, 1, size=4000) ** 0.25
w = (g[:, :2] + 1j * g[:, 2:]) * r[:, None]
w = w[np.abs(1 - w[:, 1]) > 0.05]
lhs = siegel_defect(cayley_forward(w))
rhs = (1 - np.sum(np.abs(w) ** 2, axis=-1)) / np.abs(1 - w[:, 1]) ** 2
print(f"identity residual over {len(w)} random ball points:",
      f"{np.max(np.abs(lhs - rhs)):.2e}")

# sphere points (minus the pole) land on the boundary of the halfspace
s = g[:, :2] + 1j * g[:, 2:]
s = s[np.abs(1 - s[:, 1]) > 0.05]
print(f"max |defect| over {len(s)} sphere points:",
      f"{np.max(np.abs(siegel_defect(cayley_forward(s)))):.2e}")
