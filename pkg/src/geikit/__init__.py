"""Gait Energy Image toolkit: silhouettes, gait cycles, GEIs, gallery matching."""

from .cycle import GaitCycle, PeriodEstimate, estimate_period, gait_signal, segment_cycles
from .dataset import (
    SilhouetteSequence,
    SynthWalkerSpec,
    generate_walker,
    load_gallery,
    load_sequence,
    save_gallery,
    walker_population,
)
from .gei import NoiseParams, compute_gei, expected_noisy_gei, inject_noise, inject_noise_sequence
from .matching import (
    Gallery,
    GalleryEntry,
    MatchReport,
    RateReport,
    gei_distance,
    identify,
    recognition_rate,
    template_distance,
    verify,
)
from .pipeline import extract_cycles, normalize_sequence, sequence_gei
from .silhouette import Box, NormalizationParams, bounding_box, foreground_count, normalize

__version__ = "0.1.0"
