"""
The decimated framelet transform
================================

Decompose an image into a three-level pyramid, inspect subband sizes and
energies, and check that the inverse recovers the image exactly.
"""

import numpy as np

from frameletshrink import BANDS, analyze, bundled_image, default_filter_bank, parent_of, synthesize

image = bundled_image("camera")
fb = default_filter_bank()
print("filters:", *(np.round(f, 4) for f in fb.filters))
print("unitary-extension residuals:", fb.uep_residuals())

pyr = analyze(image, levels=3, fb=fb)

# Nine subbands per level; eight detail bands are kept and the
# low-pass/low-pass band is split again.
for level in range(1, pyr.levels + 1):
    energies = {b: np.sum(pyr.detail[level - 1][b] ** 2) for b in BANDS}
    share = 100 * sum(energies.values()) / np.sum(image**2)
    print(f"level {level}: bands {pyr.band_shape(level)}, detail energy {share:.3f}% of total")
print("approx shape:", pyr.approx.shape)

# Tight frame: coefficient energy equals image energy, synthesis is the adjoint.
print("energy ratio:", pyr.energy() / np.sum(image**2))
print("round-trip max error:", np.max(np.abs(synthesize(pyr) - image)))

# Every coefficient below the coarsest level has a parent at the same
# position one level up; four children share each parent.
i, j = 40, 71
print("child", (i, j), "parent value", parent_of(pyr, 1, "HH12", i, j),
      "==", pyr.detail[1]["HH12"][i // 2, j // 2])

# Odd sizes work too.
odd = np.random.default_rng(0).uniform(0, 255, size=(37, 51))
print("odd-size round trip:", np.max(np.abs(synthesize(analyze(odd, 3)) - odd)))
