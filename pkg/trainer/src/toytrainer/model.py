"""The fixed small CNN and its analytic cost model.

Four conv blocks with pooling after the first three, then global average
pooling, so any input size from the curriculum's crop range works without
architecture changes.  FLOPs are estimated with a continuous spatial
model (each stage's area is (size / 2^p)^2), which makes the per-image
cost exactly quadratic in the input side; the actual integer pooling
sizes differ negligibly.
"""

from __future__ import annotations

import hashlib

import torch
import torch.nn as nn

CHANNELS = (8, 16, 32, 32)
N_CLASSES = 10


class SmallCNN(nn.Module):
    def __init__(self, channels=CHANNELS, n_classes=N_CLASSES):
        super().__init__()
        chain = [3, *channels]
        blocks = []
        for i in range(4):
            blocks += [
                nn.Conv2d(chain[i], chain[i + 1], 3, padding=1),
                # per-sample normalization keeps band-filtered inputs in range
                nn.GroupNorm(min(8, chain[i + 1]), chain[i + 1]),
                nn.ReLU(inplace=True),
            ]
            if i < 3:
                blocks.append(nn.MaxPool2d(2))
        self.features = nn.Sequential(*blocks)
        self.head = nn.Linear(chain[-1], n_classes)

    def forward(self, x):
        h = self.features(x)
        h = torch.nn.functional.adaptive_avg_pool2d(h, 1).flatten(1)
        return self.head(h)


def config_hash(channels=CHANNELS, n_classes=N_CLASSES) -> str:
    text = f"smallcnn-{channels}-{n_classes}"
    return hashlib.sha256(text.encode()).hexdigest()[:12]


def forward_flops_per_image(size: int, channels=CHANNELS, n_classes=N_CLASSES) -> float:
    """Multiply-add pairs counted as 2 FLOPs, continuous spatial model."""
    chain = [3, *channels]
    total = 0.0
    for i in range(4):
        area = (size / 2 ** min(i, 3)) ** 2
        total += 2.0 * chain[i] * chain[i + 1] * 9 * area
    total += 2.0 * channels[-1] * n_classes
    return total


def train_step_flops_per_image(size: int) -> float:
    # backward pass costed at twice the forward
    return 3.0 * forward_flops_per_image(size)
