#!/usr/bin/env python3
"""The built-in curriculum, per-epoch lookups, and the quadratic cost model."""

from freqtrain import (
    Crop,
    MagnitudeRule,
    Schedule,
    Stage,
    efficienttrain_schedule,
    lookup,
    relative_cost,
    schedule_to_json,
)

for total in (300, 100, 20):
    sched = efficienttrain_schedule(total)
    rows = ", ".join(f"{s.start}-{s.end}: B={s.transform.B}" for s in sched.stages)
    cost, speedup = relative_cost(sched)
    print(f"T={total:>4}  {rows}   cost {cost:.3f}  speedup {speedup:.2f}x")

print()
sched = efficienttrain_schedule(300)
print("per-epoch lookups (T=300):")
for t in (1, 100, 181, 280, 300):
    transform, m = lookup(sched, t)
    print(f"  epoch {t:>3}: {transform}  magnitude {m:.2f}")

print()
print("cost sensitivity to the crop bandwidth (first 75% of training):")
for bandwidth in (96, 128, 160, 192, 224):
    sched = Schedule(
        300,
        (Stage(1, 225, Crop(bandwidth)), Stage(226, 300, Crop(224))),
        MagnitudeRule(),
    )
    cost, speedup = relative_cost(sched)
    print(f"  B={bandwidth:>3}: cost {cost:.3f}  speedup {speedup:.2f}x")

print()
print("the full schedule JSON (stable field order):")
print(schedule_to_json(efficienttrain_schedule(20)))
