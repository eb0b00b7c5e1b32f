"""Gallery records, GEI and template distances, identification and rates."""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Tuple

import numpy as np

from .errors import DimensionMismatch, EmptyCycle, ZeroTested

DEFAULT_THRESHOLD = 0.25


@dataclass(frozen=True, eq=False)
class GalleryEntry:
    """One enrolled GEI.

    ``gei`` is stored as ``float32``, the precision of the gallery file, so a
    saved and reloaded entry compares equal bit for bit.
    """

    subject_id: str
    gei: np.ndarray
    condition: str = ""
    view_angle: int = 0

    def __post_init__(self):
        if not self.subject_id:
            raise ValueError("subject_id must be non-empty")
        gei = np.asarray(self.gei)
        if gei.ndim != 2 or gei.size == 0:
            raise ValueError(f"GEI must be a non-empty 2-D grid, got shape {gei.shape}")
        gei = gei.astype(np.float32, copy=False)
        if not np.all((gei >= 0.0) & (gei <= 1.0)):
            raise ValueError("GEI values must lie in [0, 1]")
        object.__setattr__(self, "gei", gei)

    def __eq__(self, other):
        if not isinstance(other, GalleryEntry):
            return NotImplemented
        return (
            self.subject_id == other.subject_id
            and self.condition == other.condition
            and self.view_angle == other.view_angle
            and self.gei.shape == other.gei.shape
            and self.gei.tobytes() == other.gei.tobytes()
        )


@dataclass(frozen=True)
class Gallery:
    """Immutable sequence of enrollment records.

    :meth:`enroll` returns a new gallery and leaves this one untouched, so a
    gallery can be shared by concurrent probes.
    """

    entries: Tuple[GalleryEntry, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    def enroll(self, entry: GalleryEntry) -> "Gallery":
        return Gallery(self.entries + (entry,))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]


@dataclass(frozen=True)
class MatchReport:
    ranked: Tuple[Tuple[str, float], ...]
    identified: Optional[str]
    threshold_used: float

    @property
    def rejected(self) -> bool:
        return self.identified is None

    @property
    def decision(self) -> str:
        return "REJECTED" if self.identified is None else f"IDENTIFIED {self.identified}"

    @property
    def best(self) -> Optional[Tuple[str, float]]:
        return self.ranked[0] if self.ranked else None


@dataclass(frozen=True)
class RateReport:
    tested: int
    recognized: int
    rate: float
    trained: Optional[int] = None

    def rate_2dp(self) -> float:
        """Rate truncated (not rounded) to two decimals, as printed in rate tables."""
        exact = Fraction(100 * self.recognized, self.tested)
        return math.floor(exact * 100) / 100


def _normalized_euclidean(a: np.ndarray, b: np.ndarray, axes) -> np.ndarray:
    diff = np.subtract(a, b, dtype=np.float64)
    size = np.prod([diff.shape[ax] for ax in axes])
    return np.sqrt(np.sum(diff * diff, axis=axes) / size)


def gei_distance(probe, entry) -> float:
    """Euclidean distance divided by ``sqrt(H * W)``; 1.0 for all-zeros vs all-ones."""
    a = np.asarray(getattr(probe, "gei", probe))
    b = np.asarray(getattr(entry, "gei", entry))
    if a.shape != b.shape:
        raise DimensionMismatch(f"GEI shapes differ: {a.shape} vs {b.shape}")
    return float(_normalized_euclidean(a, b, (0, 1)))


def phase_indices(n: int, length: int) -> np.ndarray:
    """Nearest-frame map from ``length`` phase slots onto ``n`` frames."""
    return (np.arange(length) * n) // length


def template_distance(probe_cycle, gallery_cycle) -> float:
    """Mean frame-to-frame distance after phase-aligning both cycles.

    Both cycles are resampled to ``L = max(N_probe, N_gallery)`` frames;
    slot ``i`` takes frame ``floor(i * N / L)`` of each cycle.
    """
    p = np.asarray(getattr(probe_cycle, "frames", probe_cycle))
    g = np.asarray(getattr(gallery_cycle, "frames", gallery_cycle))
    if p.ndim != 3 or g.ndim != 3:
        raise DimensionMismatch("cycles must be (N, H, W) frame stacks")
    if len(p) == 0 or len(g) == 0:
        raise EmptyCycle("cannot compare an empty cycle")
    if p.shape[1:] != g.shape[1:]:
        raise DimensionMismatch(f"frame shapes differ: {p.shape[1:]} vs {g.shape[1:]}")
    length = max(len(p), len(g))
    if len(p) != length:
        p = p[phase_indices(len(p), length)]
    if len(g) != length:
        g = g[phase_indices(len(g), length)]
    return float(_normalized_euclidean(p, g, (1, 2)).mean())


def identify(probe, gallery: Iterable[GalleryEntry], threshold: float = DEFAULT_THRESHOLD) -> MatchReport:
    """Rank every gallery entry by :func:`gei_distance` to ``probe``.

    The probe is identified as the nearest subject when that distance is at
    most ``threshold``; otherwise it is rejected as an unauthorized entry.
    Ties are ordered by subject id.
    """
    if threshold < 0 or math.isnan(threshold):
        raise ValueError(f"threshold must be non-negative, got {threshold}")
    probe = np.asarray(getattr(probe, "gei", probe))
    ranked = sorted(
        ((e.subject_id, gei_distance(probe, e.gei)) for e in gallery),
        key=lambda item: (item[1], item[0]),
    )
    identified = ranked[0][0] if ranked and ranked[0][1] <= threshold else None
    return MatchReport(ranked=tuple(ranked), identified=identified, threshold_used=float(threshold))


def verify(probe, entry: GalleryEntry, threshold: float = DEFAULT_THRESHOLD) -> MatchReport:
    """Accept or reject a claimed identity: identification against one entry."""
    return identify(probe, (entry,), threshold)


def recognition_rate(tested: int, recognized: int, trained: Optional[int] = None) -> RateReport:
    """``recognized / tested * 100``."""
    if tested < 1:
        raise ZeroTested(f"tested count must be >= 1, got {tested}")
    if not 0 <= recognized <= tested:
        raise ValueError(f"recognized must be in [0, {tested}], got {recognized}")
    return RateReport(
        tested=tested,
        recognized=recognized,
        rate=recognized * 100 / tested,
        trained=trained,
    )
