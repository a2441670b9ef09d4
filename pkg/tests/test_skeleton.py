import numpy as np
import pytest

from foldplan.errors import EmptyMask
from foldplan.raster import BinaryMask
from foldplan.skeleton import neighbor_counts, thin

from oracles import flood_components, flood_holes


def _thin_bits(bits):
    return thin(BinaryMask(bits)).bits


def test_horizontal_bar_thins_to_single_line():
    bits = np.zeros((9, 20), dtype=bool)
    bits[3:6, 2:18] = True
    out = _thin_bits(bits)
    rows = np.unique(np.nonzero(out)[0])
    assert len(rows) == 1
    assert out.sum() >= 12


def test_single_pixel_survives():
    bits = np.zeros((5, 5), dtype=bool)
    bits[2, 2] = True
    out = _thin_bits(bits)
    assert out.sum() == 1 and out[2, 2]


def test_two_pixel_domino_keeps_both():
    # both pixels are endpoints, neither may be deleted
    bits = np.zeros((5, 5), dtype=bool)
    bits[2, 2] = bits[2, 3] = True
    out = _thin_bits(bits)
    assert out.sum() == 2


def test_ring_stays_a_ring():
    bits = np.zeros((20, 20), dtype=bool)
    yy, xx = np.mgrid[0:20, 0:20]
    d2 = (yy - 10) ** 2 + (xx - 10) ** 2
    bits[(d2 <= 64) & (d2 >= 16)] = True
    out = _thin_bits(bits)
    assert flood_components(out, 8) == 1
    assert flood_holes(out) == 1
    assert not (neighbor_counts(out)[out] < 2).any()


def test_empty_mask_raises():
    with pytest.raises(EmptyMask):
        thin(BinaryMask(np.zeros((4, 4), dtype=bool)))


def test_skeleton_is_subset(blob_corpus):
    for bits in blob_corpus[:30]:
        out = _thin_bits(bits)
        assert not (out & ~bits).any()


def test_idempotent(blob_corpus):
    for bits in blob_corpus[:30]:
        once = _thin_bits(bits)
        twice = _thin_bits(once)
        assert np.array_equal(once, twice)


def test_no_2x2_block_survives(blob_corpus):
    for bits in blob_corpus[:30]:
        out = _thin_bits(bits)
        blocks = out[:-1, :-1] & out[:-1, 1:] & out[1:, :-1] & out[1:, 1:]
        assert not blocks.any()


def test_topology_preserved(blob_corpus):
    for bits in blob_corpus[:30]:
        out = _thin_bits(bits)
        assert flood_components(out, 8) == flood_components(bits, 8)
        assert flood_holes(out) == flood_holes(bits)


def test_diagonal_stroke_keeps_endpoints():
    bits = np.zeros((30, 30), dtype=bool)
    for i in range(24):
        bits[3 + i, 3 + i] = True
        bits[3 + i, 4 + i] = True
        bits[4 + i, 3 + i] = True
    out = _thin_bits(bits)
    assert flood_components(out, 8) == 1
    ends = (neighbor_counts(out) == 1) & out
    assert ends.sum() == 2


def test_neighbor_counts_matches_census(blob_corpus):
    from oracles import degree_census

    bits = blob_corpus[0]
    out = _thin_bits(bits)
    census = degree_census(out)
    counts = neighbor_counts(out)
    for (y, x), n in census.items():
        assert counts[y, x] == n
