"""Annotation scoring, aggregation, and the bundled dataset."""
from importlib import resources

import pytest

from potamp.errors import DatasetError
from potamp.sim import AnnotationEntry, PlacementDataset, aggregate_annotations, score_annotation

MULTIPORT_ENTRY = AnnotationEntry(
    object_label="multiport hub",
    room_label="kitchen",
    correct=("carpet", "fridge", "table", "counter", "sink"),
    incorrect=("chest", "cooktop", "microwave", "dishwasher", "stove"),
    implausible=("oven", "shelf", "top cabinet", "chair", "bottom cabinet"),
    annotator=0,
)


def test_multiport_hub_scores_exact():
    scores = score_annotation(MULTIPORT_ENTRY)
    assert scores == {
        "carpet": 15, "fridge": 14, "table": 13, "counter": 12, "sink": 11,
        "chest": -15, "cooktop": -14, "microwave": -13, "dishwasher": -12,
        "stove": -11,
    }


def test_single_correct_surface_base_case():
    entry = AnnotationEntry("thing", "room", ("spot",), (), (), 0)
    assert score_annotation(entry) == {"spot": 1}


def test_empty_incorrect_list_only_positive_scores():
    entry = AnnotationEntry("thing", "room", ("a", "b"), (), (), 0)
    scores = score_annotation(entry)
    assert all(v > 0 for v in scores.values())


def test_duplicate_surface_across_lists_rejected():
    with pytest.raises(DatasetError):
        AnnotationEntry("thing", "room", ("a",), ("a",), (), 0)


def test_aggregate_identical_annotators_keeps_ranking():
    entries = [
        AnnotationEntry("o", "r", ("a", "b"), ("c",), (), k) for k in range(10)
    ]
    probs = aggregate_annotations(entries)
    assert probs["a"] > probs["b"] > probs["c"]
    assert sum(probs.values()) == pytest.approx(1.0)


def test_aggregate_majority_implausible_removed():
    entries = []
    for k in range(10):
        if k < 6:
            entries.append(AnnotationEntry("o", "r", ("a", "b"), (), ("x",), k))
        else:
            entries.append(AnnotationEntry("o", "r", ("a", "b", "x"), (), (), k))
    probs = aggregate_annotations(entries)
    assert "x" not in probs


def test_aggregate_reversed_rankings_cancel_to_uniform():
    entries = [
        AnnotationEntry("o", "r", ("a", "b"), (), (), 0),
        AnnotationEntry("o", "r", ("b", "a"), (), (), 1),
    ]
    probs = aggregate_annotations(entries)
    assert probs["a"] == pytest.approx(probs["b"])


def test_aggregate_rejects_mixed_pairs():
    entries = [
        AnnotationEntry("o", "r1", ("a",), (), (), 0),
        AnnotationEntry("o", "r2", ("a",), (), (), 1),
    ]
    with pytest.raises(DatasetError):
        aggregate_annotations(entries)


def test_bundled_dataset_loads_and_covers_layouts():
    path = resources.files("potamp.data") / "annotations.jsonl"
    ds = PlacementDataset.load(str(path))
    assert len(ds.room_labels) >= 8
    for room in ds.room_labels:
        assert len(ds.surfaces_for_room(room)) >= 4
    assert len(ds.object_labels) >= 30
    probs = ds.placement_probs("apple", "kitchen")
    assert probs and abs(sum(probs.values()) - 1.0) < 1e-9
    # the aggregation keeps the designed affinity: apples lean to the table
    assert probs["table"] == max(probs.values())
