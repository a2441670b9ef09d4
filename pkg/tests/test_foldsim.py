import numpy as np
import pytest

from foldplan.errors import DegenerateFold, OffGarment
from foldplan.foldsim import FoldMap, apply_fold, carry_forward, simulate_plan
from foldplan.plan import ResolvedAction
from foldplan.raster import BinaryMask
from foldplan.synth import SynthParams, reference_plan, synth_garment

from oracles import naive_fold


def _rect(w=100, h=50):
    bits = np.zeros((h, w), dtype=bool)
    bits[:, :] = True
    return BinaryMask(bits)


def _act(pick, place, h=10.0):
    return ResolvedAction(pick_node=0, place_node=1, pick=pick, place=place, mid_height=h)


def test_even_span_fold_keeps_the_line_column():
    # pick+place x sum is even: the fold line runs through pixel column 50,
    # which stays put, so the result is 51 columns, not 50.
    r = apply_fold(_rect(), _act((90, 25), (10, 25)))
    assert r.mask.area == 51 * 50 == 2550
    assert r.moved_area == 49 * 50
    assert r.clipped_area == 0
    cols = np.unique(np.nonzero(r.mask.bits)[1])
    assert cols.min() == 0 and cols.max() == 50


def test_odd_span_fold_halves_exactly():
    r = apply_fold(_rect(), _act((99, 25), (0, 25)))
    assert r.mask.area == 2500 == _rect().area // 2
    assert r.overlap_area == 2500
    assert r.clipped_area == 0


def test_quarter_fold_sequence():
    r1 = apply_fold(_rect(), _act((99, 25), (0, 25)))
    r2 = apply_fold(r1.mask, _act((25, 37), (25, 12)))
    assert r2.mask.area == 1250


def test_matches_naive_reflection_oracle(blob_corpus):
    rng = np.random.default_rng(7)
    checked = 0
    for bits in blob_corpus[:25]:
        ys, xs = np.nonzero(bits)
        for _ in range(4):
            i, j = rng.integers(0, len(xs), size=2)
            pick = (int(xs[i]), int(ys[i]))
            place = (int(xs[j]), int(ys[j]))
            if pick == place:
                continue
            got = apply_fold(BinaryMask(bits), _act(pick, place)).mask.bits
            want = naive_fold(bits, pick, place)
            assert np.array_equal(got, want)
            checked += 1
    assert checked >= 80


def test_pick_maps_exactly_to_place():
    rng = np.random.default_rng(11)
    for _ in range(50):
        pick = tuple(int(v) for v in rng.integers(0, 200, size=2))
        place = tuple(int(v) for v in rng.integers(0, 200, size=2))
        if pick == place:
            continue
        assert FoldMap(pick=pick, place=place).map_point(pick) == place


def test_points_on_fold_line_stay():
    fmap = FoldMap(pick=(90, 25), place=(10, 25))
    for y in (0, 10, 49):
        assert fmap.map_point((50, y)) == (50, y)
    assert fmap.sidedness(np.array([50]), np.array([25]))[0] == 0


def test_place_side_is_untouched():
    fmap = FoldMap(pick=(90, 25), place=(10, 25))
    assert fmap.map_point((3, 7)) == (3, 7)


def test_lattice_exact_reflection():
    fmap = FoldMap(pick=(99, 10), place=(0, 10))
    assert fmap.map_point((99, 3)) == (0, 3)
    assert fmap.map_point((51, 3)) == (48, 3)


def test_degenerate_and_off_garment_errors():
    with pytest.raises(DegenerateFold):
        apply_fold(_rect(), _act((10, 10), (10, 10)))
    with pytest.raises(OffGarment):
        apply_fold(_rect(), _act((150, 10), (10, 10)))


def test_clipping_counts_out_of_canvas_landings():
    bits = np.zeros((20, 20), dtype=bool)
    bits[:, :] = True
    # Fold line near the left edge: most of the sheet reflects off-canvas.
    r = apply_fold(BinaryMask(bits), _act((19, 10), (-17, 10)))
    assert r.clipped_area > 0
    assert r.mask.area + r.clipped_area + r.overlap_area == 20 * 20


def test_area_accounting_identity(blob_corpus):
    rng = np.random.default_rng(13)
    for bits in blob_corpus[:15]:
        ys, xs = np.nonzero(bits)
        i, j = rng.integers(0, len(xs), size=2)
        pick = (int(xs[i]), int(ys[i]))
        place = (int(xs[j]), int(ys[j]))
        if pick == place:
            continue
        r = apply_fold(BinaryMask(bits), _act(pick, place))
        stationary = bits.sum() - r.moved_area
        landed_inside = r.moved_area - r.clipped_area
        # landed pixels can collide with each other under rounding, so
        # only the stationary side gives a hard lower bound
        assert r.mask.area <= stationary + landed_inside
        assert r.mask.area >= stationary
        assert r.overlap_area <= min(stationary, landed_inside)


def test_fold_line_direction_is_perpendicular():
    r = apply_fold(_rect(), _act((90, 25), (10, 25)))
    (px, py), (ux, uy) = r.fold_line
    assert (px, py) == (50.0, 25.0)
    assert ux * (90 - 10) + uy * 0 == pytest.approx(0.0)
    assert np.hypot(ux, uy) == pytest.approx(1.0)


def test_result_to_dict_keys():
    r = apply_fold(_rect(), _act((99, 25), (0, 25)))
    doc = r.to_dict()
    assert set(doc) == {"fold_line", "moved_area", "overlap_area", "clipped_area", "area"}
    assert doc["area"] == 2500


def test_carry_forward_composes_maps():
    m1 = FoldMap(pick=(99, 25), place=(0, 25))
    m2 = FoldMap(pick=(25, 37), place=(25, 12))
    assert carry_forward((99, 49), [m1, m2]) == (0, 0)
    assert carry_forward((10, 10), [m1, m2]) == (10, 10)


def test_simulate_plan_shrinks_each_step():
    for cls in ("trousers", "long-sleeve-top"):
        garment = synth_garment(SynthParams(garment_class=cls))
        plan = reference_plan(cls)
        results = simulate_plan(garment.mask(), plan)
        assert len(results) == len(plan)
        areas = [r.mask.area for r in results]
        prev = garment.mask().area
        for a in areas:
            assert a < prev
            prev = a


def test_simulate_plan_resolves_on_original_graph():
    # Second fold's pick comes from the unfolded garment; after the first
    # fold it must be carried through the first fold map, or it would sit
    # off the folded stack entirely for trousers.
    garment = synth_garment(SynthParams(garment_class="trousers"))
    plan = reference_plan("trousers")
    results = simulate_plan(garment.mask(), plan)
    assert all(r.mask.area > 0 for r in results)
    assert len(results) == 2
