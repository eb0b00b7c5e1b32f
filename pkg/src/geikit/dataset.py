"""Silhouette sequences on disk, synthetic walkers and the gallery file format.

Sequences follow the CASIA-B layout ``root/<subject>/<condition>/<angle>/``
with one image per frame, ordered by file name.

Gallery files are little-endian::

    magic        4s   b"GEIG"
    version      u16  1
    entry_count  u32
    per entry:
      id_len     u16, id (UTF-8)
      cond_len   u16, condition (UTF-8)
      view_angle i16  degrees
      height     u16
      width      u16
      values     height * width float32, row-major
"""

import itertools
import os
import struct
import tempfile
from dataclasses import dataclass, replace
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DecodeError, FormatError, NoFrames, PathNotFound, SpecInvalid, VersionUnsupported
from .matching import Gallery, GalleryEntry

IMAGE_SUFFIXES = {".png", ".bmp", ".gif", ".tif", ".tiff", ".pgm", ".pbm", ".ppm", ".jpg", ".jpeg"}

MAGIC = b"GEIG"
FORMAT_VERSION = 1


@dataclass(frozen=True, eq=False)
class SilhouetteSequence:
    subject_id: str
    condition: str
    view_angle: int
    frames: np.ndarray  # (T, H, W) uint8

    def __len__(self):
        return len(self.frames)

    def with_frames(self, frames) -> "SilhouetteSequence":
        return replace(self, frames=np.asarray(frames, dtype=np.uint8))


# ---------------------------------------------------------------- loading


def angle_dir(root, subject: str, condition: str, angle) -> Path:
    base = Path(root) / subject / condition
    if isinstance(angle, str):
        return base / angle
    padded = base / f"{int(angle):03d}"
    return padded if padded.exists() else base / str(int(angle))


def _read_frame(path: Path) -> np.ndarray:
    try:
        with Image.open(path) as img:
            lum = np.asarray(img.convert("L"))
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as exc:
        raise DecodeError(path, str(exc)) from exc
    if lum.max(initial=0) <= 1:
        return (lum > 0).astype(np.uint8)
    return (lum >= 128).astype(np.uint8)


def load_frames(directory) -> np.ndarray:
    """Decode and binarize every image in ``directory``, sorted by file name."""
    directory = Path(directory)
    if not directory.is_dir():
        raise PathNotFound(f"no such sequence directory: {directory}")
    files = sorted(
        (p for p in directory.iterdir() if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES),
        key=lambda p: p.name,
    )
    if not files:
        raise NoFrames(f"no image files in {directory}")
    frames = [_read_frame(p) for p in files]
    shapes = {f.shape for f in frames}
    if len(shapes) != 1:
        raise DecodeError(directory, f"frames differ in size: {sorted(shapes)}")
    return np.stack(frames)


def load_sequence(root, subject: str, condition: str, angle) -> SilhouetteSequence:
    """Load ``root/subject/condition/angle/`` as a binary sequence.

    Pixels at or above 50% luminance are foreground; images whose values are
    only 0 and 1 are treated as already binary.
    """
    directory = angle_dir(root, subject, condition, angle)
    frames = load_frames(directory)
    return SilhouetteSequence(str(subject), str(condition), int(angle), frames)


def write_sequence(sequence: SilhouetteSequence, root) -> Path:
    """Write frames as 8-bit PNGs in the dataset layout and return the directory."""
    directory = Path(root) / sequence.subject_id / sequence.condition / f"{sequence.view_angle:03d}"
    directory.mkdir(parents=True, exist_ok=True)
    digits = max(3, len(str(len(sequence.frames) - 1)))
    for i, frame in enumerate(sequence.frames):
        Image.fromarray((frame * 255).astype(np.uint8), mode="L").save(
            directory / f"frame_{i:0{digits}d}.png"
        )
    return directory


# ------------------------------------------------------- synthetic walkers


@dataclass(frozen=True)
class SynthWalkerSpec:
    """Crude side-view walker: head and torso blocks, legs and arms as thick segments."""

    stride_period: int = 20
    torso_width: int = 18
    leg_length: int = 60
    arm_swing_amplitude: int = 8
    frame_count: int = 80
    canvas: Tuple[int, int] = (128, 88)
    seed: int = 0

    def validate(self) -> None:
        h, w = self.canvas
        if self.stride_period < 4:
            raise SpecInvalid(f"stride_period must be >= 4, got {self.stride_period}")
        if self.frame_count < self.stride_period:
            raise SpecInvalid("frame_count must be >= stride_period")
        if h < 24 or w < 12:
            raise SpecInvalid(f"canvas {h}x{w} is too small")
        if not 4 <= self.leg_length <= h - 12:
            raise SpecInvalid(f"leg_length must be in [4, {h - 12}], got {self.leg_length}")
        if self.torso_width < 2:
            raise SpecInvalid("torso_width must be >= 2")
        if self.arm_swing_amplitude < 0:
            raise SpecInvalid("arm_swing_amplitude must be >= 0")
        _, _, _, extent = _walker_geometry(self)
        if extent > w // 2 - 1:
            raise SpecInvalid(f"walker needs {2 * extent + 2} columns, canvas has {w}")


def _walker_geometry(spec: SynthWalkerSpec):
    leg_w = max(2, round(spec.torso_width * 0.4))
    stride = round(spec.leg_length * 0.35)
    arm_w = 3
    extent = max(
        spec.torso_width // 4 + stride + leg_w,
        spec.torso_width // 2 + 1 + arm_w + spec.arm_swing_amplitude,
    )
    return leg_w, stride, arm_w, extent


def _fill_segment(canvas, r0, x0, r1, x1, width):
    """Rasterize a segment row by row, ``width`` pixels wide horizontally."""
    w = canvas.shape[1]
    rows = np.arange(r0, r1 + 1)
    if r1 > r0:
        xs = x0 + (x1 - x0) * (rows - r0) / (r1 - r0)
    else:
        xs = np.full(rows.shape, float(x0))
    lefts = np.floor(xs - width / 2 + 0.5).astype(int)
    for r, left in zip(rows, lefts):
        canvas[r, max(left, 0) : min(left + width, w)] = 1


def render_walker_frame(spec: SynthWalkerSpec, phase_index: int) -> np.ndarray:
    """One frame at ``phase_index`` (mod the stride period)."""
    h, w = spec.canvas
    leg_w, stride, arm_w, _ = _walker_geometry(spec)
    phi = 2.0 * np.pi * (phase_index % spec.stride_period) / spec.stride_period
    s, c = np.sin(phi), np.cos(phi)

    frame = np.zeros((h, w), dtype=np.uint8)
    cx = w // 2
    ground = h - 1
    hip = ground - spec.leg_length
    head_h = max(3, round(0.18 * hip))
    head_w = max(3, round(spec.torso_width * 0.55))
    tw = spec.torso_width

    frame[0:head_h, cx - head_w // 2 : cx - head_w // 2 + head_w] = 1
    frame[head_h : hip + 1, cx - tw // 2 : cx - tw // 2 + tw] = 1

    # swing-phase foot lift; unequal lifts give the lower body a full-period
    # (not half-period) signature
    lift_r = int(round(0.30 * spec.leg_length * max(0.0, c)))
    lift_l = int(round(0.15 * spec.leg_length * max(0.0, -c)))
    hip_r, hip_l = cx - tw // 4, cx + tw // 4
    _fill_segment(frame, hip, hip_r, ground - lift_r, hip_r + stride * s, leg_w)
    _fill_segment(frame, hip, hip_l, ground - lift_l, hip_l - stride * s, leg_w)

    shoulder = head_h + 1
    arm_len = max(2, round(0.45 * hip))
    sh_r = cx - tw // 2 - 1 - arm_w // 2
    sh_l = cx - tw // 2 + tw + arm_w // 2
    a = spec.arm_swing_amplitude
    _fill_segment(frame, shoulder, sh_r, shoulder + arm_len, sh_r - a * s, arm_w)
    _fill_segment(frame, shoulder, sh_l, shoulder + arm_len, sh_l + a * s, arm_w)
    return frame


def generate_walker(
    spec: SynthWalkerSpec, subject_id: str = "synth", condition: str = "nm", view_angle: int = 90
) -> SilhouetteSequence:
    """Render ``spec.frame_count`` frames of a walker with an exact stride period.

    The seed only picks the starting phase, so frames are exactly periodic
    and a given seed always yields the same sequence.
    """
    spec.validate()
    p = spec.stride_period
    start = int(np.random.default_rng(spec.seed).integers(p))
    one_cycle = np.stack([render_walker_frame(spec, k) for k in range(p)])
    frames = one_cycle[(start + np.arange(spec.frame_count)) % p]
    return SilhouetteSequence(subject_id, condition, view_angle, frames)


def walker_population(count: int, seed: int = 0, **common) -> List[SynthWalkerSpec]:
    """``count`` walkers with pairwise different body geometry.

    ``common`` overrides spec fields shared by every walker (for instance
    ``frame_count`` or ``canvas``).
    """
    h, _ = common.get("canvas", SynthWalkerSpec.canvas)
    scale = h / 128  # geometry below is laid out for a 128-row canvas
    legs = sorted({round(v * scale) for v in (50, 56, 62, 68)})
    torsos = sorted({max(2, round(v * scale)) for v in (12, 16, 20, 24)})
    swings = sorted({round(v * scale) for v in (4, 8, 12)})
    periods = (16, 18, 20, 22, 24)
    combos = list(itertools.product(legs, torsos, swings))
    rng = np.random.default_rng(seed)
    if count > len(combos):
        raise SpecInvalid(f"at most {len(combos)} distinct walkers are available")
    picks = rng.permutation(len(combos))[:count]
    specs = []
    for i, k in enumerate(picks):
        leg, torso, swing = combos[k]
        fields = dict(
            stride_period=periods[i % len(periods)],
            torso_width=torso,
            leg_length=leg,
            arm_swing_amplitude=swing,
            seed=int(rng.integers(2**31)),
        )
        fields.update(common)
        if "frame_count" not in common:
            fields["frame_count"] = 4 * fields["stride_period"]
        specs.append(SynthWalkerSpec(**fields))
    return specs


# ------------------------------------------------------- gallery files


def encode_gallery(gallery: Gallery) -> bytes:
    parts = [MAGIC, struct.pack("<HI", FORMAT_VERSION, len(gallery))]
    for entry in gallery:
        sid = entry.subject_id.encode("utf-8")
        cond = entry.condition.encode("utf-8")
        if len(sid) > 0xFFFF or len(cond) > 0xFFFF:
            raise ValueError("subject id and condition must fit in 65535 bytes")
        h, w = entry.gei.shape
        if h > 0xFFFF or w > 0xFFFF:
            raise ValueError(f"GEI {h}x{w} too large for the gallery format")
        parts += [
            struct.pack("<H", len(sid)), sid,
            struct.pack("<H", len(cond)), cond,
            struct.pack("<hHH", entry.view_angle, h, w),
            entry.gei.astype("<f4", copy=False).tobytes(),
        ]
    return b"".join(parts)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int, what: str) -> bytes:
        if self.pos + n > len(self.data):
            raise FormatError(self.pos, f"truncated {what}: need {n} bytes, {len(self.data) - self.pos} left")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt: str, what: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt), what))

    def text(self, what: str) -> str:
        (n,) = self.unpack("<H", f"{what} length")
        at = self.pos
        try:
            return self.take(n, what).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError(at, f"{what} is not valid UTF-8") from exc


def decode_gallery(data: bytes) -> Gallery:
    """Parse gallery bytes; any defect raises :class:`FormatError` with its offset."""
    r = _Reader(data)
    if len(data) < 4 or data[:4] != MAGIC:
        raise FormatError(0, "bad magic, not a gallery file")
    r.pos = 4
    (version,) = r.unpack("<H", "version")
    if version != FORMAT_VERSION:
        raise VersionUnsupported(version)
    (count,) = r.unpack("<I", "entry count")
    entries = []
    for _ in range(count):
        start = r.pos
        sid = r.text("subject id")
        if not sid:
            raise FormatError(start, "empty subject id")
        cond = r.text("condition")
        angle, h, w = r.unpack("<hHH", "entry header")
        if h == 0 or w == 0:
            raise FormatError(r.pos - 4, f"invalid GEI size {h}x{w}")
        at = r.pos
        values = np.frombuffer(r.take(4 * h * w, "GEI values"), dtype="<f4")
        if not np.all((values >= 0.0) & (values <= 1.0)):
            raise FormatError(at, "GEI value outside [0, 1]")
        gei = values.astype(np.float32).reshape(h, w)
        entries.append(GalleryEntry(sid, gei, cond, angle))
    if r.pos != len(data):
        raise FormatError(r.pos, f"{len(data) - r.pos} trailing bytes")
    return Gallery(tuple(entries))


def save_gallery(gallery: Gallery, path) -> None:
    """Write atomically: a temporary file in the target directory is renamed over ``path``."""
    path = Path(path)
    data = encode_gallery(gallery)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def load_gallery(path: Union[str, Path]) -> Gallery:
    return decode_gallery(Path(path).read_bytes())
