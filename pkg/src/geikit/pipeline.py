"""End-to-end glue: raw sequence -> normalized frames -> cycles -> GEI."""

from typing import List, Optional

import numpy as np

from .cycle import GaitCycle, PeriodEstimate, estimate_period, gait_signal, segment_cycles
from .errors import SequenceTooShort
from .gei import NoiseParams, compute_gei, inject_noise_sequence
from .silhouette import NormalizationParams, normalize

DEFAULT_MIN_PERIOD = 4
DEFAULT_MAX_PERIOD = 40


def normalize_sequence(sequence, params: NormalizationParams = NormalizationParams()):
    """Normalize every frame; returns the same kind of object it was given."""
    frames = getattr(sequence, "frames", sequence)
    out = np.stack([normalize(f, params) for f in frames])
    if hasattr(sequence, "with_frames"):
        return sequence.with_frames(out)
    return out


def detect_period(
    frames,
    min_period: int = DEFAULT_MIN_PERIOD,
    max_period: int = DEFAULT_MAX_PERIOD,
) -> PeriodEstimate:
    """Estimate the period, shrinking the lag window to what the sequence can support."""
    signal = gait_signal(frames)
    upper = min(max_period, len(signal) // 2)
    if upper <= min_period:
        raise SequenceTooShort(
            f"{len(signal)} frames cannot show two cycles of at least {min_period} frames"
        )
    return estimate_period(signal, min_period, upper)


def extract_cycles(
    sequence,
    params: Optional[NormalizationParams] = NormalizationParams(),
    period: Optional[int] = None,
    noise: Optional[NoiseParams] = None,
    min_period: int = DEFAULT_MIN_PERIOD,
    max_period: int = DEFAULT_MAX_PERIOD,
) -> List[GaitCycle]:
    """Normalize (unless ``params`` is None), optionally add noise, and segment.

    Noise is applied after normalization: a noisy background would otherwise
    stretch the bounding box over the whole frame.
    """
    frames = np.asarray(getattr(sequence, "frames", sequence))
    if params is not None:
        frames = normalize_sequence(frames, params)
    if noise is not None and noise.p > 0:
        frames = inject_noise_sequence(frames, noise)
    if period is None:
        period = detect_period(frames, min_period, max_period).period
    return segment_cycles(frames, period)


def sequence_gei(sequence, **kwargs) -> np.ndarray:
    """GEI of the first full cycle, as ``float32`` (gallery precision)."""
    cycles = extract_cycles(sequence, **kwargs)
    return compute_gei(cycles[0]).astype(np.float32)
