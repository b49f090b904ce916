"""Tour of the basic complexity estimators.

Builds small index sets, estimates their sign-weighted and Gaussian-weighted
expected suprema both exactly and by Monte Carlo, and checks the textbook
inequalities relating them.
"""

import math

import numpy as np

from berncomp import (
    EstimatorConfig,
    PointSet,
    bernoulli_complexity,
    diameter2,
    gaussian_complexity,
    norm_pq,
)

print("Two standard basis vectors in R^2 (as 1x2 elements):")
T = PointSet.from_rows([[1.0, 0.0], [0.0, 1.0]])
exact = bernoulli_complexity(T, EstimatorConfig(mode="exact"))
print(f"  exact b = {exact.value}  (enumerated {exact.samples} sign patterns)")

mc = bernoulli_complexity(T, EstimatorConfig(mode="monte-carlo", mc_samples=20000, seed=1))
print(f"  MC    b = {mc.value:.4f} +- {mc.std_error:.4f}")

g = gaussian_complexity(T, EstimatorConfig(mc_samples=50000, seed=2))
print(f"  MC    g = {g.value:.4f} +- {g.std_error:.4f}"
      f"  (closed form E max of two normals = {1 / math.sqrt(math.pi):.4f})")

print("\nRandom 8-element set, 10 columns, entries uniform in [-1, 1]:")
rng = np.random.default_rng(7)
T = PointSet(rng.uniform(-1, 1, size=(8, 1, 10)))
b = bernoulli_complexity(T, EstimatorConfig(mode="exact"))
g = gaussian_complexity(T, EstimatorConfig(mc_samples=20000, seed=3))
sup_l1 = max(norm_pq(T.element(i), 1, 1) for i in range(len(T)))
print(f"  b            = {b.value:.4f}")
print(f"  sup l1 norm  = {sup_l1:.4f}   (b never exceeds it)")
print(f"  diameter     = {diameter2(T):.4f}   (never exceeds 4 b = {4 * b.value:.4f})")
print(f"  sqrt(pi/2) g = {math.sqrt(math.pi / 2) * g.value:.4f}   (dominates b)")

print("\nDeterminism: same seed, same estimate, bit for bit:")
a1 = bernoulli_complexity(T, EstimatorConfig(mode="monte-carlo", mc_samples=5000, seed=9))
a2 = bernoulli_complexity(T, EstimatorConfig(mode="monte-carlo", mc_samples=5000, seed=9))
print(f"  {a1.value} == {a2.value}: {a1.value == a2.value}")
