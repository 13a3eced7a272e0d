"""Tour of the scoring functions.

Two families score a gap fill: Wasserstein distance and Jensen-Shannon
divergence compare the fill's DISTRIBUTION to the pre-gap reference window
(no ground truth needed), while RMSE/MAE compare the fill to the held-out
truth position by position.  Lower is better for all four.
"""

import numpy as np

from gapgauge import jsd, mae, rmse, shared_histogram, wasserstein_1d

rng = np.random.default_rng(0)

print("== Wasserstein distance ==")
print("identical samples:     ", wasserstein_1d([1, 2, 3], [1, 2, 3]))
print("shifted by 1.0:        ", wasserstein_1d([0, 1], [1, 2]))
print("unequal sizes:         ", wasserstein_1d([0, 0, 0, 0], [0, 4]))

reference = rng.normal(loc=100.0, scale=10.0, size=48)
good_fill = rng.normal(loc=100.0, scale=10.0, size=48)
flat_fill = np.full(48, reference.mean())  # right level, no spread
print("\nfill with matching spread:", round(wasserstein_1d(good_fill, reference), 3))
print("flat mean-value fill:     ", round(wasserstein_1d(flat_fill, reference), 3),
      " <- spread loss is priced in")

print("\n== Jensen-Shannon divergence (base 2, in [0, 1]) ==")
print("identical:       ", jsd(reference, reference))
print("matching spread: ", round(jsd(good_fill, reference), 4))
print("flat fill:       ", round(jsd(flat_fill, reference), 4))
print("disjoint ranges: ", round(jsd(np.zeros(40), np.full(40, 9.0), epsilon=1e-12), 4))

hp, hq = shared_histogram(good_fill, reference, bins=10)
print("\nshared histogram edges:", np.round(hp.edges, 1))
print("fill mass:             ", np.round(hp.mass, 3))
print("reference mass:        ", np.round(hq.mass, 3))

print("\n== Ground-truth metrics ==")
truth = np.array([3.0, 4.0])
print("rmse((0,0) vs (3,4)):", rmse([0, 0], truth), " mae:", mae([0, 0], truth))
print("mae never exceeds rmse (power-mean inequality).")
