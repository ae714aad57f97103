"""Deterministic mock-provider behaviors derived from a placement dataset.

The multiple-choice weights peak on the dataset's aggregated placement
probabilities, and mock embeddings mimic use-description embeddings: objects
of the same kind (per the bundled category profiles) come out nearly
parallel, unrelated kinds nearly orthogonal, with a small placement-profile
component separating same-kind pairs. This is the offline stand-in for a
live model with household common sense.
"""
from __future__ import annotations

import json
from importlib import resources

import numpy as np

from ..priors.provider import MockBehavior
from ..sim.dataset import PlacementDataset


def load_bundled_categories() -> dict[str, str]:
    path = resources.files("potamp.data") / "profiles.json"
    with open(str(path)) as fh:
        return json.load(fh)["categories"]


def dataset_mock_behavior(dataset: PlacementDataset,
                          lgbu_mode: str = "mcqa",
                          categories: dict[str, str] | None = None) -> MockBehavior:
    if categories is None:
        try:
            categories = load_bundled_categories()
        except FileNotFoundError:
            categories = {}
    cat_names = sorted(set(categories.values()))
    cat_index = {c: i for i, c in enumerate(cat_names)}

    rooms = dataset.room_labels
    vocab: list[tuple[str, str]] = []
    for room in rooms:
        for surf in dataset.surfaces_for_room(room):
            vocab.append((room, surf))
    index = {pair: i for i, pair in enumerate(vocab)}

    mcqa_weights: dict = {}
    descriptions: dict = {}
    embeddings: dict = {}
    lgbu_weights: dict = {}
    for obj in dataset.object_labels:
        room_w = dataset.room_weights_for_object(obj)
        mcqa_weights[("room", obj)] = dict(room_w)
        surf_w: dict[str, float] = {}
        profile = np.zeros(len(vocab))
        for room, weight in room_w.items():
            probs = dataset.placement_probs(obj, room)
            for surf, p in probs.items():
                label = f"{surf} in the {room}"
                surf_w[label] = weight * p
                profile[index[(room, surf)]] = weight * p
        mcqa_weights[("surface", obj)] = surf_w
        lgbu_weights[obj] = dict(surf_w)
        lgbu_weights[obj].update(room_w)

        category = categories.get(obj)
        text = (f"A {obj} is a {category or 'household'} item used during "
                f"everyday routines. People reach for a {obj} where it "
                f"usually belongs. It is normally stored in its customary spot.")
        descriptions[obj] = text
        # same-kind objects embed nearly parallel, unrelated kinds nearly
        # orthogonal; a small placement-profile component breaks ties inside
        # a kind without letting loose cross-kind affinities drag the search
        cat_part = np.zeros(max(len(cat_names), 1))
        if category in cat_index:
            cat_part[cat_index[category]] = 1.0
        prof_norm = np.linalg.norm(profile)
        prof_part = profile / prof_norm if prof_norm > 0 else profile
        vec = np.concatenate([0.95 * cat_part, 0.3122 * prof_part])
        norm = np.linalg.norm(vec)
        if norm > 0:
            embeddings[text] = (vec / norm).tolist()

    return MockBehavior(
        mcqa_weights=mcqa_weights,
        descriptions=descriptions,
        embeddings=embeddings,
        lgbu_mode=lgbu_mode,
        lgbu_weights=lgbu_weights,
    )
