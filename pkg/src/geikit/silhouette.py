"""Binary silhouette frames and their normalization.

A silhouette is a 2-D ``uint8`` array holding only 0 (background) and 1
(foreground). Every function here is pure and returns new arrays.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import EmptySilhouette, RoiTooWide

CENTERING_MODES = ("top-half-centroid", "full-centroid")


class Box(NamedTuple):
    """Inclusive pixel rectangle."""

    top: int
    left: int
    bottom: int
    right: int

    @property
    def height(self) -> int:
        return self.bottom - self.top + 1

    @property
    def width(self) -> int:
        return self.right - self.left + 1


@dataclass(frozen=True)
class NormalizationParams:
    target_height: int = 128
    target_width: int = 88
    centering: str = "top-half-centroid"

    def __post_init__(self):
        if self.target_height < 2 or self.target_width < 2:
            raise ValueError(
                f"target size must be at least 2x2, got "
                f"{self.target_height}x{self.target_width}"
            )
        if self.centering not in CENTERING_MODES:
            raise ValueError(f"unknown centering mode {self.centering!r}")


def as_silhouette(frame) -> np.ndarray:
    """Validate ``frame`` as a binary silhouette and return it as ``uint8``."""
    arr = np.asarray(frame)
    if arr.ndim != 2:
        raise ValueError(f"silhouette must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"silhouette must be at least 1x1, got {arr.shape}")
    if arr.dtype == bool:
        return arr.astype(np.uint8)
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("silhouette pixels must be exactly 0 or 1")
    return arr.astype(np.uint8, copy=False)


def foreground_count(frame) -> int:
    return int(np.count_nonzero(as_silhouette(frame)))


def bounding_box(frame) -> Optional[Box]:
    """Tightest box around the foreground, or ``None`` for an empty frame."""
    arr = as_silhouette(frame)
    rows = np.flatnonzero(arr.any(axis=1))
    if rows.size == 0:
        return None
    cols = np.flatnonzero(arr.any(axis=0))
    return Box(int(rows[0]), int(cols[0]), int(rows[-1]), int(cols[-1]))


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def _resample_axis(arr: np.ndarray, size: int, axis: int) -> np.ndarray:
    """Nearest-neighbour resample of a binary array along one axis.

    Upsampling picks the nearest source pixel for each output pixel. When
    downsampling, each source pixel is assigned to its nearest output pixel
    and an output pixel is foreground if any assigned source pixel is, so
    thin structures and the extreme rows/columns of the ROI never vanish.
    """
    n = arr.shape[axis]
    if size == n:
        return arr
    if size > n:
        src = ((np.arange(size) + 0.5) * n / size).astype(np.intp)
        return np.take(arr, np.minimum(src, n - 1), axis=axis)
    dst = ((np.arange(n) + 0.5) * size / n).astype(np.intp)
    dst = np.minimum(dst, size - 1)
    starts = np.flatnonzero(np.r_[True, dst[1:] != dst[:-1]])
    return np.maximum.reduceat(arr, starts, axis=axis)


def _centroid_column(roi: np.ndarray, centering: str) -> float:
    if centering == "top-half-centroid":
        top = roi[: roi.shape[0] // 2]
        if top.any():
            roi = top
    cols = np.nonzero(roi)[1]
    return float(cols.mean())


def normalize(frame, params: NormalizationParams = NormalizationParams()) -> np.ndarray:
    """Crop the silhouette to its ROI, scale and centre it on a fixed canvas.

    The ROI is scaled (aspect ratio preserved) so that its height equals
    ``params.target_height``, then shifted horizontally so the centroid
    column chosen by ``params.centering`` lands on ``target_width / 2``.

    Raises:
        EmptySilhouette: the frame has no foreground pixel.
        RoiTooWide: the scaled and centred ROI does not fit the canvas.
    """
    arr = as_silhouette(frame)
    box = bounding_box(arr)
    if box is None:
        raise EmptySilhouette("frame has no foreground pixels")
    th, tw = params.target_height, params.target_width
    roi = arr[box.top : box.bottom + 1, box.left : box.right + 1]

    new_w = max(1, _round_half_up(box.width * th / box.height))
    if new_w > tw:
        raise RoiTooWide(f"scaled ROI width {new_w} exceeds target width {tw}")
    scaled = _resample_axis(_resample_axis(roi, th, axis=0), new_w, axis=1)

    # pixel j spans [j, j + 1), so its centre sits at j + 0.5
    centroid = _centroid_column(scaled, params.centering) + 0.5
    offset = _round_half_up(tw / 2 - centroid)
    if offset < 0 or offset + new_w > tw:
        raise RoiTooWide(
            f"centred ROI spans columns {offset}..{offset + new_w - 1}, "
            f"outside 0..{tw - 1}"
        )
    out = np.zeros((th, tw), dtype=np.uint8)
    out[:, offset : offset + new_w] = scaled
    return out
