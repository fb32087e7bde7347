#!/usr/bin/env python3
"""The magnitude-scheduled augmentation axis of the curriculum.

Renders one synthetic image at the magnitudes the linear ramp visits over
training and writes a PNG strip per epoch sampled, plus a determinism
check across repeated calls.
"""

import sys
from pathlib import Path

import numpy as np

from freqtrain import AugPolicy, ImageTensor, magnitude_at, randaug
from freqtrain.io import save_png

out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("augment_gallery")
out_dir.mkdir(parents=True, exist_ok=True)

# a soft disc on a gradient, so every op's effect is visible
ys, xs = np.mgrid[0:64, 0:64]
disc = np.exp(-((xs - 40) ** 2 + (ys - 24) ** 2) / 60.0)
base = np.stack([
    0.25 + 0.5 * xs / 63 * 0.8,
    0.2 + 0.6 * disc,
    0.3 + 0.4 * ys / 63,
])
image = ImageTensor(np.clip(base, 0, 1))

TOTAL = 300
print("epoch  magnitude  file")
for t in (0, 75, 150, 225, 300):
    m = magnitude_at(t, TOTAL, 9.0)
    policy = AugPolicy(magnitude=m, magnitude_std=0.5, n_ops=2, seed=7)
    out = randaug(image, policy, index=0)
    path = out_dir / f"epoch_{t:03d}_m{m:.1f}.png"
    save_png(path, out)
    print(f"{t:>5}  {m:>9.2f}  {path}")

policy = AugPolicy(magnitude=9.0, magnitude_std=0.5, n_ops=2, seed=7)
again = randaug(image, policy, index=0)
once = randaug(image, policy, index=0)
print("\nsame (image, policy, index) twice -> bit-identical:",
      np.array_equal(again.data, once.data))
print("magnitude 0 is the identity:",
      np.array_equal(randaug(image, AugPolicy(magnitude=0.0, seed=7), 0).data, image.data))
