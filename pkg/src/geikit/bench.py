"""Template-based vs GEI-based matching: image accounting and wall-clock timing.

Only matching is timed (probe-vs-gallery distance computations and the
nearest-neighbour pick). Normalization, cycle segmentation and GEI
construction happen beforehand for both methods, since the point of the
comparison is that a GEI gallery needs one image per person at match time
while a template gallery needs every frame of the cycle.
"""

import csv
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import GeiKitError, InsufficientData
from .gei import compute_gei
from .matching import gei_distance, phase_indices, template_distance
from .pipeline import extract_cycles
from .silhouette import NormalizationParams

CSV_HEADER = (
    "method",
    "persons",
    "images_per_sequence",
    "wall_time_s",
    "images_processed",
    "time_reduction_pct",
)


@dataclass(frozen=True)
class BenchConfig:
    persons: int
    images_per_sequence: int
    repetitions: int = 7
    single_threaded: bool = True

    def __post_init__(self):
        if self.persons < 1:
            raise ValueError(f"persons must be >= 1, got {self.persons}")
        if self.images_per_sequence < 2:
            raise ValueError(f"images_per_sequence must be >= 2, got {self.images_per_sequence}")
        if self.repetitions < 3:
            raise ValueError(f"repetitions must be >= 3, got {self.repetitions}")


@dataclass(frozen=True)
class BenchReport:
    method: str  # "template", "gei" or "comparison"
    persons: int
    images_per_sequence: int
    wall_time_seconds: float
    images_processed: Optional[int] = None
    time_reduction_percent: Optional[float] = None


def time_reduction_percent(t_template: float, t_gei: float) -> float:
    """``(t_template - t_gei) / t_template * 100``."""
    if t_template <= 0:
        raise ValueError(f"template time must be positive, got {t_template}")
    return (t_template - t_gei) / t_template * 100


def images_processed(method: str, persons: int, images_per_sequence: int) -> int:
    """Gallery images one identification has to visit."""
    if method == "gei":
        return persons
    if method == "template":
        return persons * images_per_sequence
    raise ValueError(f"unknown method {method!r}")


@dataclass
class _Prepared:
    template_gallery: List[np.ndarray]
    gei_gallery: List[np.ndarray]
    template_probes: List[np.ndarray]
    gei_probes: List[np.ndarray]


def prepare(config: BenchConfig, data: Sequence, params: NormalizationParams = NormalizationParams()) -> _Prepared:
    """Build both galleries and probe sets (untimed).

    Each person's first cycle is enrolled and the next cycle, when there is
    one, is the probe. Template entries keep ``images_per_sequence`` frames
    sampled evenly over the cycle.
    """
    by_subject = {}
    for seq in data:
        by_subject.setdefault(seq.subject_id, seq)
    if len(by_subject) < config.persons:
        raise InsufficientData(
            f"need {config.persons} distinct subjects, data has {len(by_subject)}"
        )
    prep = _Prepared([], [], [], [])
    k = config.images_per_sequence
    for subject in sorted(by_subject)[: config.persons]:
        try:
            cycles = extract_cycles(by_subject[subject], params)
        except GeiKitError as exc:
            raise InsufficientData(f"subject {subject}: {type(exc).__name__}: {exc}") from exc
        enrolled = cycles[0]
        probe = cycles[1] if len(cycles) > 1 else cycles[0]
        prep.template_gallery.append(enrolled.frames[phase_indices(enrolled.length, k)])
        prep.template_probes.append(probe.frames[phase_indices(probe.length, k)])
        prep.gei_gallery.append(compute_gei(enrolled).astype(np.float32))
        prep.gei_probes.append(compute_gei(probe).astype(np.float32))
    return prep


def _nearest(distance, probe, gallery) -> int:
    return int(np.argmin([distance(probe, g) for g in gallery]))


def _timed(distance, probes, gallery, single_threaded: bool) -> Tuple[float, List[int]]:
    start = time.perf_counter()
    if single_threaded:
        picks = [_nearest(distance, p, gallery) for p in probes]
    else:
        with ThreadPoolExecutor() as pool:
            picks = list(pool.map(lambda p: _nearest(distance, p, gallery), probes))
    return time.perf_counter() - start, picks


def run_comparison(
    config: BenchConfig,
    data: Sequence,
    params: NormalizationParams = NormalizationParams(),
) -> Tuple[BenchReport, BenchReport, BenchReport]:
    """Time template and GEI identification of every probe; medians over repetitions.

    Returns the template record, the GEI record and a comparison record whose
    ``wall_time_seconds`` is the time saved and whose
    ``time_reduction_percent`` is computed from the two medians.
    """
    prep = prepare(config, data, params)
    # warm-up pass outside the measurements
    _timed(template_distance, prep.template_probes[:1], prep.template_gallery, True)
    _timed(gei_distance, prep.gei_probes[:1], prep.gei_gallery, True)

    t_template, t_gei = [], []
    for _ in range(config.repetitions):
        dt, _picks = _timed(template_distance, prep.template_probes, prep.template_gallery, config.single_threaded)
        t_template.append(dt)
        dt, _picks = _timed(gei_distance, prep.gei_probes, prep.gei_gallery, config.single_threaded)
        t_gei.append(dt)
    t_m = statistics.median(t_template)
    t_g = statistics.median(t_gei)

    p, k = config.persons, config.images_per_sequence
    template = BenchReport("template", p, k, t_m, images_processed("template", p, k))
    gei = BenchReport("gei", p, k, t_g, images_processed("gei", p, k))
    comparison = BenchReport("comparison", p, k, t_m - t_g, None, time_reduction_percent(t_m, t_g))
    return template, gei, comparison


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_report(reports, path) -> Path:
    """Write reports as CSV in the order given.

    Floats are written with ``repr`` so the medians round-trip exactly and the
    reduction can be recomputed from the file.
    """
    rows = []
    for item in reports:
        rows.extend(item if isinstance(item, (tuple, list)) else [item])
    if not rows:
        raise ValueError("no reports to write")
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in rows:
            writer.writerow(
                [
                    r.method,
                    r.persons,
                    r.images_per_sequence,
                    _cell(r.wall_time_seconds),
                    _cell(r.images_processed),
                    _cell(r.time_reduction_percent),
                ]
            )
    return path


def read_report(path) -> List[dict]:
    with Path(path).open(newline="") as fh:
        return list(csv.DictReader(fh))
