"""Gait Energy Image and the binary silhouette noise model."""

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DimensionMismatch, EmptyCycle

Seed = Union[None, int, np.random.SeedSequence]


@dataclass(frozen=True)
class NoiseParams:
    """Per-pixel flip probability ``p`` and the seed driving the flips."""

    p: float
    seed: Seed = None

    def __post_init__(self):
        if not 0.0 <= self.p < 0.5:
            raise ValueError(f"flip probability must be in [0, 0.5), got {self.p}")


def _stack(cycle) -> np.ndarray:
    frames = getattr(cycle, "frames", cycle)
    if isinstance(frames, np.ndarray):
        if frames.ndim != 3:
            raise DimensionMismatch(f"expected (N, H, W) frames, got {frames.shape}")
        if len(frames) == 0:
            raise EmptyCycle("cycle holds no frames")
        return frames
    frames = list(frames)
    if not frames:
        raise EmptyCycle("cycle holds no frames")
    shapes = {np.shape(f) for f in frames}
    if len(shapes) != 1:
        raise DimensionMismatch(f"frames differ in shape: {sorted(shapes)}")
    return np.stack(frames)


def compute_gei(cycle) -> np.ndarray:
    """Average of the N binary frames of one cycle, as ``float64``.

    ``cycle`` is a ``GaitCycle``, an ``(N, H, W)`` array or a list of frames.
    Pixel sums are accumulated in integers, so each value is the correctly
    rounded ``k / N``.
    """
    frames = _stack(cycle)
    n = len(frames)
    counts = frames.sum(axis=0, dtype=np.int64)
    if counts.min() < 0 or counts.max() > n:
        raise ValueError("cycle frames are not binary")
    gei = counts / n
    # catch accumulation bugs at the source: every value must be k/N
    if not np.array_equal(np.rint(gei * n), counts):
        raise AssertionError("GEI values are not multiples of 1/N")
    return gei


def _rng(seed: Seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def inject_noise(frame, params: NoiseParams) -> np.ndarray:
    """Flip each pixel independently with probability ``params.p``.

    Foreground pixels become 0 and background pixels become 1 with the same
    probability, so ``E[noisy] = f + (p if f == 0 else -p)``. Equal seeds
    give bit-identical output.
    """
    arr = np.asarray(frame, dtype=np.uint8)
    if params.p == 0.0:
        return arr.copy()
    flips = _rng(params.seed).random(arr.shape) < params.p
    return arr ^ flips.astype(np.uint8)


def inject_noise_sequence(frames, params: NoiseParams) -> np.ndarray:
    """Apply :func:`inject_noise` to a ``(T, H, W)`` stack.

    Frame ``t`` draws from the ``t``-th child of ``SeedSequence(seed)``, so
    its noise does not depend on how many other frames are processed or in
    what order.
    """
    frames = np.asarray(frames, dtype=np.uint8)
    root = params.seed
    if not isinstance(root, np.random.SeedSequence):
        root = np.random.SeedSequence(root)
    out = np.empty_like(frames)
    for t, frame in enumerate(frames):
        # same keys SeedSequence.spawn would hand out, without mutating root
        child = np.random.SeedSequence(
            root.entropy, spawn_key=root.spawn_key + (t,), pool_size=root.pool_size
        )
        out[t] = inject_noise(frame, NoiseParams(params.p, child))
    return out


def expected_noisy_gei(clean, p: float) -> np.ndarray:
    """Pixelwise expectation of a GEI built from noisy frames: ``(1 - 2p) G + p``."""
    if not 0.0 <= p < 0.5:
        raise ValueError(f"flip probability must be in [0, 0.5), got {p}")
    return (1.0 - 2.0 * p) * np.asarray(clean, dtype=np.float64) + p
