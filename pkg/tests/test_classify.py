import numpy as np
import pytest

from foldplan.classify import (
    DescriptorLibrary,
    GraphDescriptor,
    descriptor,
    knn_classify,
    leave_one_out_accuracy,
    load_library,
    save_library,
    shuffled_label_control,
)
from foldplan.errors import EmptyLibrary, MalformedDocument
from foldplan.graph import extract_graph
from foldplan.raster import BinaryMask
from foldplan.synth import SynthParams, synth_mask


def _bar_graph(x0=10, y0=10, length=30):
    bits = np.zeros((y0 + 20, x0 + length + 10), dtype=bool)
    bits[y0, x0 : x0 + length] = True
    return extract_graph(BinaryMask(bits), min_spur_len=0.0)


def test_two_node_bar_descriptor():
    d = descriptor(_bar_graph())
    assert d.node_count == 2
    assert d.endpoint_count == 2
    assert d.junction_count == 0
    assert d.degree_histogram == (2, 0, 0, 0, 0, 0)
    assert d.positions == ((0.0, 0.0), (1.0, 0.0))
    # single edge: min == median == max == length/diagonal == 1
    assert d.edge_length_quantiles == pytest.approx((1.0, 1.0, 1.0))


def test_vector_is_fixed_width_36():
    d = descriptor(_bar_graph())
    assert d.vector().shape == (36,)
    big = descriptor(extract_graph(synth_mask(SynthParams(garment_class="long-sleeve-top"))))
    assert big.vector().shape == (36,)


def test_descriptor_translation_and_scale_invariant():
    a = descriptor(_bar_graph(x0=10, y0=10, length=30))
    b = descriptor(_bar_graph(x0=50, y0=25, length=30))
    c = descriptor(_bar_graph(x0=10, y0=10, length=90))
    assert np.allclose(a.vector(), b.vector())
    assert np.allclose(a.vector(), c.vector())


def test_descriptor_separates_classes():
    vs = {}
    for cls in ("trousers", "short-sleeve-top", "long-sleeve-top"):
        g = extract_graph(synth_mask(SynthParams(garment_class=cls)))
        vs[cls] = descriptor(g).vector()
    assert not np.allclose(vs["trousers"], vs["short-sleeve-top"])
    assert not np.allclose(vs["trousers"], vs["long-sleeve-top"])


def test_knn_trivial_majority():
    d0 = descriptor(_bar_graph())
    lib = DescriptorLibrary(entries=((d0, "bar"), (d0, "bar"), (d0, "rod")))
    label, votes = knn_classify(d0, lib, k=3)
    assert label == "bar"
    assert votes[0].votes == 2


def test_knn_exact_match_gets_infinite_weight():
    d0 = descriptor(_bar_graph())
    lib = DescriptorLibrary(entries=((d0, "bar"),))
    label, votes = knn_classify(d0, lib, k=1)
    assert label == "bar"
    assert votes[0].inverse_distance == float("inf")


def test_knn_tie_breaks_by_inverse_distance_then_label():
    base = descriptor(_bar_graph())
    v = base.vector()

    def shifted(dx):
        return GraphDescriptor(
            node_count=base.node_count,
            endpoint_count=base.endpoint_count,
            junction_count=base.junction_count,
            degree_histogram=base.degree_histogram,
            positions=base.positions,
            edge_length_quantiles=(
                base.edge_length_quantiles[0] + dx,
                base.edge_length_quantiles[1],
                base.edge_length_quantiles[2],
            ),
        )

    # one vote each: "near" at distance 0.1, "far" at 0.2 -> near wins
    lib = DescriptorLibrary(entries=((shifted(0.1), "near"), (shifted(0.2), "far")))
    label, _ = knn_classify(base, lib, k=2)
    assert label == "near"

    # equal distance, equal votes -> lexicographic order decides
    lib2 = DescriptorLibrary(entries=((shifted(0.1), "zeta"), (shifted(-0.1), "alpha")))
    label2, _ = knn_classify(base, lib2, k=2)
    assert label2 == "alpha"


def test_knn_argument_validation():
    d0 = descriptor(_bar_graph())
    with pytest.raises(EmptyLibrary):
        knn_classify(d0, DescriptorLibrary(entries=()), k=1)
    lib = DescriptorLibrary(entries=((d0, "bar"),))
    with pytest.raises(ValueError):
        knn_classify(d0, lib, k=0)
    with pytest.raises(ValueError):
        knn_classify(d0, lib, k=2)


def test_library_jsonl_roundtrip(tmp_path):
    d0 = descriptor(_bar_graph())
    d1 = descriptor(extract_graph(synth_mask(SynthParams(garment_class="trousers"))))
    lib = DescriptorLibrary(entries=((d0, "bar"), (d1, "trousers")))
    p = tmp_path / "lib.jsonl"
    save_library(lib, p)
    back = load_library(p)
    assert len(back) == 2
    assert back.labels() == ["bar", "trousers"]
    for (da, la), (db, lb) in zip(lib.entries, back.entries):
        assert la == lb
        assert np.allclose(da.vector(), db.vector())


def test_library_rejects_malformed_line(tmp_path):
    p = tmp_path / "lib.jsonl"
    p.write_text('{"label": "x"}\n')
    with pytest.raises(MalformedDocument):
        load_library(p)


def test_leave_one_out_perfect_on_clean_classes():
    entries = []
    for cls in ("trousers", "short-sleeve-top", "long-sleeve-top"):
        for seed in range(3):
            g = extract_graph(synth_mask(SynthParams(garment_class=cls, jitter=1.5, seed=seed)))
            entries.append((descriptor(g), cls))
    lib = DescriptorLibrary(entries=tuple(entries))
    assert leave_one_out_accuracy(lib, k=3) == 1.0


def test_leave_one_out_needs_two_entries():
    d0 = descriptor(_bar_graph())
    with pytest.raises(EmptyLibrary):
        leave_one_out_accuracy(DescriptorLibrary(entries=((d0, "bar"),)))


def test_shuffled_control_is_deterministic_per_seed():
    entries = []
    for cls in ("trousers", "short-sleeve-top", "long-sleeve-top"):
        for seed in range(4):
            g = extract_graph(synth_mask(SynthParams(garment_class=cls, jitter=1.5, seed=seed)))
            entries.append((descriptor(g), cls))
    lib = DescriptorLibrary(entries=tuple(entries))
    a = shuffled_label_control(lib, k=3, seed=7)
    b = shuffled_label_control(lib, k=3, seed=7)
    assert a == b
    assert 0.0 <= a <= 1.0
