"""
Bivariate shrinkage and its brute-force check
=============================================

The closed-form estimator shrinks a child coefficient jointly with its
parent. Compare it with a grid search over the posterior and look at how
the parent changes the amount of shrinkage.
"""

import math

import numpy as np

from frameletshrink import map_oracle, shrink_bivariate, soft_threshold

sigma_e, sigma = 1.0, math.sqrt(3)
threshold = math.sqrt(3) * sigma_e**2 / sigma
print(f"threshold on the (child, parent) magnitude: {threshold:.3f}")

for g1, g2 in [(3, 4), (0.3, 0.4), (0.8, 0.0), (0.8, 2.0), (-2.5, 1.0)]:
    closed = shrink_bivariate(g1, g2, sigma_e, sigma)
    grid = map_oracle(g1, g2, sigma_e, sigma, half_range=6, step=0.01)[0]
    print(f"g=({g1:5.2f}, {g2:5.2f})  closed form {closed:7.4f}  grid search {grid:7.4f}")

# A strong parent keeps a weak child alive; without a parent the same child
# is soft-thresholded to zero.
child = 0.8
for parent in (0.0, 0.5, 1.0, 2.0, 4.0):
    print(f"parent {parent:3.1f}: child {child} -> {shrink_bivariate(child, parent, sigma_e, sigma):.4f}")
print("univariate soft threshold:", soft_threshold(child, threshold))

g = np.linspace(-4, 4, 9)
print("shrinkage curve, parent 0:", np.round(shrink_bivariate(g, 0.0, sigma_e, sigma), 3))
print("shrinkage curve, parent 2:", np.round(shrink_bivariate(g, 2.0, sigma_e, sigma), 3))
