"""Gait period estimation and cycle segmentation."""

from dataclasses import dataclass

import numpy as np

from .errors import NoPeriodDetected, SequenceTooShort, SignalTooShort

MIN_CONFIDENCE = 0.3


@dataclass(frozen=True)
class PeriodEstimate:
    period: int
    confidence: float

    def __post_init__(self):
        if self.period < 2:
            raise ValueError(f"period must be >= 2, got {self.period}")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence must be in [0, 1], got {self.confidence}")


@dataclass(frozen=True, eq=False)
class GaitCycle:
    """``length`` consecutive normalized frames covering one gait period."""

    start_frame: int
    frames: np.ndarray

    def __post_init__(self):
        if self.frames.ndim != 3:
            raise ValueError(f"cycle frames must be (N, H, W), got {self.frames.shape}")
        if len(self.frames) < 2:
            raise ValueError("a gait cycle holds at least 2 frames")

    @property
    def length(self) -> int:
        return len(self.frames)

    def __len__(self):
        return len(self.frames)


def _frames_of(sequence) -> np.ndarray:
    frames = getattr(sequence, "frames", sequence)
    return np.asarray(frames)


def gait_signal(sequence) -> np.ndarray:
    """Mean-subtracted foreground count of the lower (leg) half of each frame.

    ``sequence`` is a ``SilhouetteSequence`` or a ``(T, H, W)`` array of
    frames normalized to a common size.
    """
    frames = _frames_of(sequence)
    if frames.ndim != 3 or len(frames) == 0:
        raise ValueError(f"expected a non-empty (T, H, W) stack, got {frames.shape}")
    lower = frames[:, frames.shape[1] // 2 :, :]
    counts = np.count_nonzero(lower, axis=(1, 2)).astype(np.float64)
    return counts - counts.mean()


def autocorrelation(signal, max_lag: int) -> np.ndarray:
    """Biased autocorrelation normalized by the lag-0 value, lags 0..max_lag.

    Returns all zeros for a signal with no variance.
    """
    x = np.asarray(signal, dtype=np.float64)
    x = x - x.mean()
    n = len(x)
    energy = float(np.dot(x, x))
    scale = float(np.max(np.abs(signal))) if n else 0.0
    if energy <= n * (1e-12 * scale) ** 2:
        return np.zeros(max_lag + 1)
    full = np.correlate(x, x, mode="full")[n - 1 : n + max_lag]
    return full / energy


def estimate_period(
    signal,
    min_period: int = 4,
    max_period: int = 40,
    min_confidence: float = MIN_CONFIDENCE,
) -> PeriodEstimate:
    """Lag in ``[min_period, max_period]`` with the highest autocorrelation.

    Ties go to the shortest lag.

    Raises:
        SignalTooShort: fewer than ``2 * max_period`` samples.
        NoPeriodDetected: the best normalized peak is below ``min_confidence``.
    """
    if min_period < 2 or max_period <= min_period:
        raise ValueError(
            f"need 2 <= min_period < max_period, got {min_period}, {max_period}"
        )
    x = np.asarray(signal, dtype=np.float64)
    if len(x) < 2 * max_period:
        raise SignalTooShort(
            f"signal has {len(x)} samples, need >= {2 * max_period}"
        )
    acf = autocorrelation(x, max_period)
    lags = acf[min_period:]
    best = int(np.argmax(lags))
    confidence = float(np.clip(lags[best], 0.0, 1.0))
    if confidence < min_confidence:
        raise NoPeriodDetected(
            f"best autocorrelation peak {confidence:.3f} < {min_confidence}"
        )
    return PeriodEstimate(period=min_period + best, confidence=confidence)


def segment_cycles(sequence, period, signal=None) -> list:
    """Split a sequence into consecutive, disjoint cycles of ``period`` frames.

    As many whole cycles as fit are kept. The start is placed at the lowest
    gait-signal value (double support) among the offsets that still allow
    that many cycles; the trailing partial cycle is dropped.
    """
    frames = _frames_of(sequence)
    p = int(getattr(period, "period", period))
    if p < 2:
        raise ValueError(f"period must be >= 2, got {p}")
    total = len(frames)
    if total < p:
        raise SequenceTooShort(f"sequence has {total} frames, period is {p}")
    count = total // p
    if signal is None:
        signal = gait_signal(frames)
    slack = total - count * p
    start = int(np.argmin(np.asarray(signal)[: slack + 1]))
    return [
        GaitCycle(start_frame=start + i * p, frames=frames[start + i * p : start + (i + 1) * p])
        for i in range(count)
    ]
