"""
Noisy silhouettes and the expected GEI
======================================

Each pixel flips with probability p. Averaging over a cycle, the GEI of
noisy frames has expectation (1 - 2p) G + p, where G is the clean GEI.
"""

import matplotlib.pyplot as plt
import numpy as np

from geikit import (
    NoiseParams,
    SynthWalkerSpec,
    compute_gei,
    expected_noisy_gei,
    generate_walker,
    inject_noise_sequence,
    normalize_sequence,
)

frames = normalize_sequence(generate_walker(SynthWalkerSpec(frame_count=20)).frames)
clean = compute_gei(frames)

###############################################################################
# Average many noisy realizations and compare with the affine prediction.
p, m = 0.1, 200
children = np.random.SeedSequence(0).spawn(m)
mean = np.mean(
    [compute_gei(inject_noise_sequence(frames, NoiseParams(p, s))) for s in children], axis=0
)
expected = expected_noisy_gei(clean, p)
se = np.sqrt(p * (1 - p) / (len(frames) * m))
print("pixels within 3 SE:", np.mean(np.abs(mean - expected) <= 3 * se))

fig, axes = plt.subplots(1, 3, figsize=(7, 3))
for ax, img, title in zip(axes, (clean, mean, expected), ("clean", f"mean of {m} noisy", "(1-2p)G+p")):
    ax.imshow(img, cmap="gray", vmin=0, vmax=1)
    ax.set_title(title)
    ax.axis("off")
fig.tight_layout()

plt.show()
