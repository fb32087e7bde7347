#!/usr/bin/env python3
"""Why pixel down-sampling is not the same as frequency cropping.

Every output frequency of a factor-k down-sampler mixes k^2 input
frequencies (its alias set).  The report below quantifies, per kernel, how
much of that dependency energy comes from outside the retained band; the
frequency crop is the zero-leakage reference.
"""

from freqtrain import KernelSpec, alias_set, leakage_report, rational_leakage_fractions

SIZE = 32
K = 2

print(f"alias set of output bin (3, 0) on a {SIZE}x{SIZE} grid, k={K}:")
print(f"  {sorted(alias_set(3, 0, SIZE, SIZE, K))}")
print()

print(f"{'kernel':>10}   in-band   out-of-band")
for name in ("nearest", "mean", "bilinear", "bicubic"):
    report = leakage_report(KernelSpec.named(name, K), SIZE, SIZE)
    print(f"{name:>10}   {report.total_in_band_fraction:.4f}    {report.total_out_band_fraction:.4f}")
report = leakage_report(KernelSpec.named("nearest", K), SIZE, SIZE)
print(f"{'crop':>10}   {1.0:.4f}    {report.crop_out_band_fraction:.4f}   (reference)")

print()
in_frac, out_frac = rational_leakage_fractions(2, 3, 12, 12, KernelSpec.named("mean", 3))
print(f"rational ratio 2/3 on a 12x12 grid (up-2 nearest, down-3 mean):")
print(f"  in-band {in_frac:.4f}, out-of-band {out_frac:.4f} -> still leaks")
