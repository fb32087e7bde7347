#!/usr/bin/env python3
"""Greedy backward bandwidth search against a synthetic accuracy oracle.

The oracle charges each stage a penalty proportional to how much of the
spectrum it discards, with early stages cheapest -- exactly the intuition
the backward search exploits.
"""

import itertools

from freqtrain import OracleSpec, SearchConfig, greedy_search, schedule_for_vector, relative_cost

CANDIDATES = (96, 128, 160, 192, 224)
STAGES = 4
PENALTIES = (0.004, 0.010, 0.022, 0.048)  # later stages hurt more
BASELINE = 0.800


def oracle(vector):
    return BASELINE - sum(
        lam * (1 - (b / 224) ** 2) for lam, b in zip(PENALTIES, vector)
    )


table = {v: oracle(v) for v in itertools.product(CANDIDATES, repeat=STAGES)}

config = SearchConfig(
    total_epochs=STAGES * 75,
    n_stages=STAGES,
    candidates=CANDIDATES,
    baseline_accuracy=BASELINE - 0.01,
    oracle=OracleSpec(mode="table", table=table),
)
result = greedy_search(config)

print(f"solved bandwidths: {result.bandwidths}")
print(f"oracle calls: {result.oracle_calls} "
      f"(budget {(STAGES - 1) * len(CANDIDATES)})")
print(f"final accuracy {result.accuracy:.4f} vs floor {config.baseline_accuracy:.4f}")

schedule = schedule_for_vector(result.bandwidths, config.total_epochs)
cost, speedup = relative_cost(schedule)
print(f"schedule cost {cost:.3f} -> {speedup:.2f}x estimated speedup")

print("\nsearch trace:")
for entry in result.trace:
    mark = "cache" if entry.cached else "oracle"
    print(f"  stage {entry.stage}: try B={entry.candidate:>3} -> "
          f"{entry.vector} = {entry.accuracy:.4f} [{mark}]")
