"""Placement-annotation dataset: per (object, room) surface rankings from
multiple annotators, scored and aggregated into placement probabilities."""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path

from ..errors import DatasetError


@dataclass(frozen=True)
class AnnotationEntry:
    object_label: str
    room_label: str
    correct: tuple[str, ...]  # ranked most to least likely
    incorrect: tuple[str, ...]  # ranked least to most likely
    implausible: tuple[str, ...]
    annotator: int

    def __post_init__(self):
        listed = list(self.correct) + list(self.incorrect) + list(self.implausible)
        if len(listed) != len(set(listed)):
            raise DatasetError(
                f"duplicate surface across lists for {self.object_label}/{self.room_label}")

    @property
    def num_surfaces(self) -> int:
        return len(self.correct) + len(self.incorrect) + len(self.implausible)


def score_annotation(entry: AnnotationEntry, n: int | None = None) -> dict[str, int]:
    """Integer score per ranked surface.

    The most likely correct surface scores n, descending by one per rank; the
    least likely incorrect surface scores -n, ascending by one. Implausible
    surfaces receive no score here; the majority rule handles them during
    aggregation.
    """
    if n is None:
        n = entry.num_surfaces
    scores: dict[str, int] = {}
    for i, label in enumerate(entry.correct):
        scores[label] = n - i
    for i, label in enumerate(entry.incorrect):
        scores[label] = -n + i
    return scores


def summed_scores(entries: list[AnnotationEntry]) -> dict[str, float]:
    """Raw annotator score sums with majority-implausible surfaces removed."""
    if not entries:
        raise DatasetError("no annotations to aggregate")
    key = (entries[0].object_label, entries[0].room_label)
    for e in entries:
        if (e.object_label, e.room_label) != key:
            raise DatasetError("aggregation mixes object-room pairs")

    totals: dict[str, float] = defaultdict(float)
    implausible_votes: dict[str, int] = defaultdict(int)
    for entry in entries:
        for label, score in score_annotation(entry).items():
            totals[label] += score
        for label in entry.implausible:
            implausible_votes[label] += 1
            totals.setdefault(label, 0.0)

    half = len(entries) / 2.0
    kept = {label: total for label, total in totals.items()
            if implausible_votes.get(label, 0) <= half}
    if not kept:
        raise DatasetError(f"all surfaces removed for {key}")
    return kept


def aggregate_annotations(entries: list[AnnotationEntry]) -> dict[str, float]:
    """Combine one object-room pair's annotations into placement probabilities.

    Scores are summed across annotators; surfaces a strict majority called
    implausible are dropped; surviving sums are min-max normalized to [0, 1]
    and then renormalized into a probability vector.
    """
    kept = summed_scores(entries)
    values = list(kept.values())
    lo, hi = min(values), max(values)
    if hi - lo < 1e-12:
        normed = {label: 1.0 for label in kept}
    else:
        normed = {label: (v - lo) / (hi - lo) for label, v in kept.items()}
    total = sum(normed.values())
    if total <= 0:
        # every survivor sat at the minimum; fall back to uniform
        return {label: 1.0 / len(normed) for label in normed}
    return {label: v / total for label, v in normed.items()}


class PlacementDataset:
    """All annotation entries, grouped and aggregated for sampling."""

    def __init__(self, entries: list[AnnotationEntry]):
        if not entries:
            raise DatasetError("empty dataset")
        self.entries = list(entries)
        self._by_pair: dict[tuple[str, str], list[AnnotationEntry]] = defaultdict(list)
        for e in self.entries:
            self._by_pair[(e.object_label, e.room_label)].append(e)
        self._aggregated: dict[tuple[str, str], dict[str, float]] = {
            pair: aggregate_annotations(group)
            for pair, group in self._by_pair.items()
        }
        self._raw: dict[tuple[str, str], dict[str, float]] = {
            pair: summed_scores(group) for pair, group in self._by_pair.items()
        }

    @classmethod
    def load(cls, path: str | Path) -> "PlacementDataset":
        entries = []
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                doc = json.loads(line)
                entries.append(AnnotationEntry(
                    object_label=doc["object"],
                    room_label=doc["room"],
                    correct=tuple(doc.get("correct", [])),
                    incorrect=tuple(doc.get("incorrect", [])),
                    implausible=tuple(doc.get("implausible", [])),
                    annotator=int(doc.get("annotator", 0)),
                ))
        return cls(entries)

    def save(self, path: str | Path) -> None:
        with open(path, "w") as fh:
            for e in self.entries:
                fh.write(json.dumps({
                    "object": e.object_label,
                    "room": e.room_label,
                    "correct": list(e.correct),
                    "incorrect": list(e.incorrect),
                    "implausible": list(e.implausible),
                    "annotator": e.annotator,
                }) + "\n")

    # ------------------------------------------------------------- lookups
    @property
    def room_labels(self) -> list[str]:
        return sorted({e.room_label for e in self.entries})

    @property
    def object_labels(self) -> list[str]:
        return sorted({e.object_label for e in self.entries})

    def surfaces_for_room(self, room_label: str) -> list[str]:
        labels: set[str] = set()
        for (obj, room), agg in self._aggregated.items():
            if room == room_label:
                labels.update(agg)
        return sorted(labels)

    def placement_probs(self, object_label: str, room_label: str) -> dict[str, float]:
        return dict(self._aggregated.get((object_label, room_label), {}))

    def object_weights_for_surface(self, room_label: str, surface_label: str) -> dict[str, float]:
        """How strongly each object belongs on (room, surface), for sampling.

        Uses raw annotator score sums so an object's borderline secondary
        room loses the surface to objects that genuinely live there.
        """
        out = {}
        for (obj, room), raw in self._raw.items():
            if room == room_label and surface_label in raw:
                score = raw[surface_label]
                if score > 0:
                    out[obj] = score
        return out

    def room_weights_for_object(self, object_label: str) -> dict[str, float]:
        """Relative mass of each room for an object, from raw score peaks."""
        out = {}
        for (obj, room), raw in self._raw.items():
            if obj == object_label and raw:
                peak = max(raw.values())
                if peak > 0:
                    out[room] = peak
        return out
