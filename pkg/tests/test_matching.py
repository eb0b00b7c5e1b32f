import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from geikit.errors import DimensionMismatch, EmptyCycle, ZeroTested
from geikit.matching import (
    Gallery,
    GalleryEntry,
    gei_distance,
    identify,
    phase_indices,
    recognition_rate,
    template_distance,
    verify,
)

unit = st.floats(0, 1, allow_nan=False, width=32)


@st.composite
def gei_triples(draw):
    shape = (draw(st.integers(1, 6)), draw(st.integers(1, 6)))
    return tuple(draw(arrays(np.float32, shape, elements=unit)) for _ in range(3))


def test_gei_distance_examples():
    a = np.full((4, 5), 0.3)
    assert gei_distance(a, a) == 0.0
    assert gei_distance(np.zeros((3, 7)), np.ones((3, 7))) == pytest.approx(1.0)
    # sqrt(0.25 + 0.25) / sqrt(2)
    assert gei_distance(np.array([[0.5], [0.5]]), np.array([[0.0], [1.0]])) == pytest.approx(0.5)


def test_gei_distance_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        gei_distance(np.zeros((2, 3)), np.zeros((3, 2)))


@settings(max_examples=200, deadline=None)
@given(gei_triples())
def test_gei_distance_is_a_metric(triple):
    a, b, c = triple
    assert gei_distance(a, b) >= 0
    assert gei_distance(a, b) == gei_distance(b, a)
    assert gei_distance(a, a) == 0
    if not np.array_equal(a, b):
        assert gei_distance(a, b) > 0
    assert gei_distance(a, c) <= gei_distance(a, b) + gei_distance(b, c) + 1e-9


def nearest_frame_oracle(n, length):
    # slot i sits at phase i / L; take the frame whose interval [j/N, (j+1)/N) holds it
    out = []
    for i in range(length):
        phase = Fraction(i, length)
        out.append(next(j for j in range(n) if Fraction(j, n) <= phase < Fraction(j + 1, n)))
    return out


@pytest.mark.parametrize("n, length", [(4, 8), (3, 7), (8, 8), (5, 11), (1, 4)])
def test_phase_indices_match_oracle(n, length):
    assert list(phase_indices(n, length)) == nearest_frame_oracle(n, length)


def test_template_distance_identical(small_walker):
    cycle = small_walker.frames[:12]
    assert template_distance(cycle, cycle) == 0.0


def test_template_distance_one_pixel(rng):
    probe = rng.integers(0, 2, size=(6, 5, 4), dtype=np.uint8)
    gallery = probe.copy()
    gallery[3, 2, 1] ^= 1
    expected = (1 / 6) * (1 / math.sqrt(5 * 4))
    assert template_distance(probe, gallery) == pytest.approx(expected, rel=1e-12)


def test_template_distance_repeated_frames(rng):
    probe = rng.integers(0, 2, size=(4, 6, 5), dtype=np.uint8)
    gallery = np.repeat(probe, 2, axis=0)
    assert template_distance(probe, gallery) == 0.0
    assert template_distance(gallery, probe) == 0.0


def test_template_distance_brute_force(rng):
    probe = rng.integers(0, 2, size=(5, 4, 3), dtype=np.uint8)
    gallery = rng.integers(0, 2, size=(7, 4, 3), dtype=np.uint8)
    idx = nearest_frame_oracle(5, 7)
    total = 0.0
    for i in range(7):
        diff = probe[idx[i]].astype(float) - gallery[i]
        total += math.sqrt((diff**2).sum() / 12)
    assert template_distance(probe, gallery) == pytest.approx(total / 7, rel=1e-12)


def test_template_distance_errors():
    with pytest.raises(DimensionMismatch):
        template_distance(np.zeros((3, 4, 4)), np.zeros((3, 4, 5)))
    with pytest.raises(EmptyCycle):
        template_distance(np.zeros((0, 4, 4)), np.zeros((3, 4, 4)))


def _entry(sid, value, shape=(3, 3)):
    return GalleryEntry(sid, np.full(shape, value, dtype=np.float32))


def test_gallery_entry_validation():
    with pytest.raises(ValueError):
        _entry("", 0.5)
    with pytest.raises(ValueError):
        _entry("a", 1.5)
    e = GalleryEntry("a", np.full((2, 2), 0.25))
    assert e.gei.dtype == np.float32
    assert e == _entry("a", 0.25, (2, 2))
    assert e != _entry("b", 0.25, (2, 2))


def test_gallery_enroll_is_copy_on_write():
    g0 = Gallery()
    g1 = g0.enroll(_entry("a", 0.1))
    assert len(g0) == 0 and len(g1) == 1
    assert g1[0].subject_id == "a"


def test_identify_self_match():
    gallery = Gallery((_entry("a", 0.1), _entry("b", 0.6)))
    report = identify(gallery[1].gei, gallery, threshold=0.0)
    assert report.identified == "b"
    assert report.ranked[0] == ("b", 0.0)
    assert report.decision == "IDENTIFIED b"


def test_identify_empty_gallery():
    report = identify(np.zeros((3, 3)), Gallery(), threshold=1.0)
    assert report.rejected and report.ranked == ()
    assert report.decision == "REJECTED"


def test_identify_threshold_rejects_but_keeps_ranking():
    gallery = Gallery((_entry("far", 0.4), _entry("near", 0.3)))
    report = identify(np.zeros((3, 3)), gallery, threshold=0.2)
    assert report.rejected
    assert [sid for sid, _ in report.ranked] == ["near", "far"]
    assert [d for _, d in report.ranked] == pytest.approx([0.3, 0.4])
    assert report.threshold_used == 0.2


def test_identify_ties_broken_by_subject_id():
    gallery = Gallery((_entry("zed", 0.5), _entry("amy", 0.5), _entry("kim", 0.5)))
    report = identify(np.full((3, 3), 0.5), gallery)
    assert [sid for sid, _ in report.ranked] == ["amy", "kim", "zed"]
    assert report.identified == "amy"


def test_identify_rejects_wrong_dimensions():
    with pytest.raises(DimensionMismatch):
        identify(np.zeros((2, 2)), Gallery((_entry("a", 0.1),)))
    with pytest.raises(ValueError):
        identify(np.zeros((3, 3)), Gallery(), threshold=-1)


def test_verify_is_single_entry_identification():
    entry = _entry("a", 0.2)
    assert verify(np.full((3, 3), 0.25), entry, 0.1).identified == "a"
    assert verify(np.full((3, 3), 0.9), entry, 0.1).rejected


@settings(max_examples=50, deadline=None)
@given(
    values=st.lists(unit, min_size=1, max_size=8),
    probe=unit,
    thresholds=st.tuples(unit, unit),
    random=st.randoms(use_true_random=False),
)
def test_identify_permutation_invariance_and_monotonicity(values, probe, thresholds, random):
    entries = [_entry(f"s{i}", v, (2, 2)) for i, v in enumerate(values)]
    shuffled = entries[:]
    random.shuffle(shuffled)
    q = np.full((2, 2), probe, dtype=np.float32)
    lo, hi = sorted(thresholds)
    a = identify(q, Gallery(entries), lo)
    b = identify(q, Gallery(shuffled), lo)
    assert a == b
    if a.identified is not None:
        assert identify(q, Gallery(entries), hi).identified == a.identified


@settings(max_examples=30, deadline=None)
@given(st.lists(arrays(np.float32, (3, 4), elements=unit), min_size=1, max_size=6))
def test_rank1_self_match(geis):
    gallery = Gallery(tuple(GalleryEntry(f"id{i}", g) for i, g in enumerate(geis)))
    for i, entry in enumerate(gallery):
        report = identify(entry.gei, gallery, 0.0)
        assert report.ranked[0][1] == 0.0
        # duplicates share distance 0; the tie resolves by id, which must still be an exact copy
        assert np.array_equal(gallery[[e.subject_id for e in gallery].index(report.identified)].gei, entry.gei)


@pytest.mark.parametrize(
    "tested, recognized, shown",
    [(9, 5, 55.55), (23, 13, 56.52), (35, 21, 60.00)],
)
def test_recognition_rate_table_rows(tested, recognized, shown):
    report = recognition_rate(tested, recognized)
    assert report.rate_2dp() == shown
    assert report.rate == recognized * 100 / tested


def test_recognition_rate_35_21_is_exactly_60():
    assert recognition_rate(35, 21, trained=45).rate == 60.0


def test_recognition_rate_errors():
    with pytest.raises(ZeroTested):
        recognition_rate(0, 0)
    with pytest.raises(ValueError):
        recognition_rate(5, 6)
