"""
From silhouettes to a Gait Energy Image
=======================================

Render a synthetic walker, normalize its frames, find the gait period,
cut one full cycle and average it into a GEI.
"""

import matplotlib.pyplot as plt
import numpy as np

from geikit import (
    SynthWalkerSpec,
    compute_gei,
    estimate_period,
    gait_signal,
    generate_walker,
    normalize_sequence,
    segment_cycles,
)

###############################################################################
# A walker with a 20-frame stride, 80 frames long.
seq = generate_walker(SynthWalkerSpec(stride_period=20, frame_count=80, seed=4))
frames = normalize_sequence(seq).frames
print(frames.shape, frames.dtype)

###############################################################################
# The leg-region foreground count oscillates once per stride.
signal = gait_signal(frames)
period = estimate_period(signal, min_period=4, max_period=40)
print(period)

fig, ax = plt.subplots(figsize=(6, 2.5))
ax.plot(signal)
ax.set_xlabel("frame")
ax.set_ylabel("lower-half count (centred)")
fig.tight_layout()

###############################################################################
# Cut whole cycles and average the first one.
cycles = segment_cycles(frames, period)
print([(c.start_frame, c.length) for c in cycles])
gei = compute_gei(cycles[0])

fig, axes = plt.subplots(1, 5, figsize=(9, 3))
for ax, t in zip(axes[:4], np.linspace(0, period.period - 1, 4).astype(int)):
    ax.imshow(cycles[0].frames[t], cmap="gray")
    ax.set_title(f"frame {t}")
axes[4].imshow(gei, cmap="gray", vmin=0, vmax=1)
axes[4].set_title("GEI")
for ax in axes:
    ax.axis("off")
fig.tight_layout()

plt.show()
