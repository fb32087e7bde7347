#!/usr/bin/env python3
"""Circular low/high-pass filtering and the energy split across radii."""

import numpy as np

from freqtrain import ImageTensor, high_pass_filter, low_pass_filter, spectral_energy

rng = np.random.default_rng(0)
image = ImageTensor(rng.random((1, 64, 64)))
total = spectral_energy(image)

print("radius   low-pass energy   high-pass energy   low+high == original")
for radius in (0, 4, 8, 16, 32, 46):
    low = low_pass_filter(image, radius)
    high = high_pass_filter(image, radius)
    gap = np.max(np.abs(low.data + high.data - image.data))
    print(
        f"{radius:>6}   {spectral_energy(low) / total:>15.4f}"
        f"   {spectral_energy(high) / total:>16.4f}   max gap {gap:.1e}"
    )

print()
print("radius 0 keeps only the mean:",
      np.allclose(low_pass_filter(image, 0).data, image.data.mean()))
