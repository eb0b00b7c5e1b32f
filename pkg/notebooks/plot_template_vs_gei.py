"""
Template matching versus GEI matching
=====================================

A template gallery keeps every sampled frame of a cycle, a GEI gallery keeps
one image per person. Only matching is timed; galleries are built first.
"""

import matplotlib.pyplot as plt

from geikit import generate_walker, walker_population
from geikit.bench import BenchConfig, emit_report, run_comparison

data = [generate_walker(s, subject_id=f"{i + 1:03d}") for i, s in enumerate(walker_population(32, seed=0))]

###############################################################################
# 32 people, 11 frames per template: 352 gallery images against 32.
template, gei, comparison = run_comparison(BenchConfig(32, 11, repetitions=7), data)
print(template.images_processed, gei.images_processed)
print(f"template {template.wall_time_seconds:.4f} s, gei {gei.wall_time_seconds:.4f} s")
print(f"time reduction {comparison.time_reduction_percent:.2f}%")
emit_report((template, gei, comparison), "bench.csv")

###############################################################################
# How the gap grows with the number of frames per template.
ks = [2, 4, 6, 8, 11, 16]
times = [run_comparison(BenchConfig(16, k, repetitions=5), data)[:2] for k in ks]
fig, ax = plt.subplots(figsize=(5, 3))
ax.plot(ks, [t.wall_time_seconds for t, _ in times], "o-", label="template")
ax.plot(ks, [g.wall_time_seconds for _, g in times], "o-", label="GEI")
ax.set_xlabel("images per sequence")
ax.set_ylabel("median matching time (s)")
ax.legend()
fig.tight_layout()

plt.show()
