#!/usr/bin/env python3
"""Regenerate the bundled data fixtures (deterministic).

Produces:
  src/potamp/data/annotations.jsonl   synthetic placement-annotation dataset
  src/potamp/data/priors_cache.jsonl  replay cache covering the test labels
"""
from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from potamp.sim.dataset import AnnotationEntry, PlacementDataset  # noqa: E402

DATA_DIR = ROOT / "src" / "potamp" / "data"

ROOMS = {
    "kitchen": ["table", "counter", "fridge_top", "sink_area"],
    "living_room": ["coffee_table", "sofa_shelf", "tv_stand", "bookshelf"],
    "bedroom": ["bed_stand", "dresser_top", "bedroom_desk", "nightstand"],
    "bathroom": ["vanity", "cabinet_top", "shelf_unit", "laundry_basket"],
    "garage": ["workbench", "tool_rack", "storage_shelf", "bin_top"],
    "office": ["office_desk", "file_cabinet", "side_table", "monitor_stand"],
    "pantry": ["pantry_shelf", "storage_rack", "canned_rack", "jar_shelf"],
    "hallway": ["console_table", "coat_rack", "shoe_rack", "key_tray"],
}

# one shared ranked preference list per category: objects of a kind live in
# the same spots, which is what makes co-location evidence informative
CATEGORY_PREFS = {
    "fruit": ("kitchen", ["table", "counter", "fridge_top"]),
    "tool": ("garage", ["workbench", "tool_rack", "storage_shelf"]),
    "dish": ("kitchen", ["counter", "sink_area", "table"]),
    "toiletry": ("bathroom", ["vanity", "shelf_unit", "cabinet_top"]),
    "reading": ("living_room", ["bookshelf", "coffee_table", "sofa_shelf"]),
    "desk_gear": ("office", ["office_desk", "side_table", "file_cabinet"]),
    "electronics": ("living_room", ["tv_stand", "coffee_table", "sofa_shelf"]),
    "clothing": ("bedroom", ["dresser_top", "bed_stand", "nightstand"]),
    "snack": ("pantry", ["pantry_shelf", "storage_rack", "canned_rack"]),
    "entry_gear": ("hallway", ["key_tray", "console_table", "coat_rack"]),
    "misc": ("garage", ["storage_shelf", "bin_top", "workbench"]),
}

# object -> (category, secondary room)
OBJECTS = {
    "apple": ("fruit", "pantry"),
    "banana": ("fruit", "pantry"),
    "orange": ("fruit", "pantry"),
    "pear": ("fruit", "pantry"),
    "screwdriver": ("tool", "office"),
    "wrench": ("tool", "office"),
    "hammer": ("tool", "hallway"),
    "pliers": ("tool", "office"),
    "mug": ("dish", "office"),
    "plate": ("dish", "pantry"),
    "bowl": ("dish", "pantry"),
    "cup": ("dish", "bathroom"),
    "toothbrush": ("toiletry", "bedroom"),
    "soap_bar": ("toiletry", "kitchen"),
    "shampoo_bottle": ("toiletry", "bedroom"),
    "towel": ("toiletry", "bedroom"),
    "novel": ("reading", "bedroom"),
    "magazine": ("reading", "office"),
    "notebook": ("reading", "bedroom"),
    "textbook": ("reading", "office"),
    "charger": ("electronics", "office"),
    "headphones": ("electronics", "office"),
    "tablet": ("electronics", "office"),
    "remote_control": ("electronics", "bedroom"),
    "socks_pair": ("clothing", "bathroom"),
    "tshirt": ("clothing", "bathroom"),
    "scarf": ("clothing", "hallway"),
    "hat": ("clothing", "hallway"),
    "pen": ("desk_gear", "kitchen"),
    "stapler": ("desk_gear", "living_room"),
    "scissors": ("desk_gear", "kitchen"),
    "tape_roll": ("desk_gear", "garage"),
    "cracker_box": ("snack", "kitchen"),
    "cereal_box": ("snack", "kitchen"),
    "chip_bag": ("snack", "living_room"),
    "cookie_jar": ("snack", "kitchen"),
    "flashlight": ("misc", "garage"),
    "umbrella": ("misc", "garage"),
    "keys": ("entry_gear", "office"),
    "wallet": ("entry_gear", "bedroom"),
}

NUM_ANNOTATORS = 10


def jitter_ranking(rng, ranking):
    out = list(ranking)
    for i in range(len(out) - 1):
        if rng.random() < 0.25:
            out[i], out[i + 1] = out[i + 1], out[i]
    return out


def entries_for(rng, obj, room, ranked_surfaces, strength, support=1.0):
    """strength: how many surfaces count as correct; support: fraction of
    annotators who agree the placement is plausible at all. Dissenters rank
    everything incorrect, which drags the raw scores down the way borderline
    rooms look in real annotation data."""
    all_surfaces = ROOMS[room]
    correct_base = ranked_surfaces[:strength]
    rest = [s for s in all_surfaces if s not in correct_base]
    entries = []
    for annotator in range(NUM_ANNOTATORS):
        agrees = rng.random() < support
        if agrees:
            correct = jitter_ranking(rng, correct_base)
            incorrect = jitter_ranking(rng, rest[::-1])  # least likely first
        else:
            correct = []
            incorrect = jitter_ranking(rng, rest[::-1]) + \
                jitter_ranking(rng, correct_base[::-1])
        implausible = []
        if incorrect and rng.random() < 0.25:
            implausible.append(incorrect.pop(0))
        entries.append(AnnotationEntry(
            object_label=obj,
            room_label=room,
            correct=tuple(correct),
            incorrect=tuple(incorrect),
            implausible=tuple(implausible),
            annotator=annotator,
        ))
    return entries


def build_dataset() -> PlacementDataset:
    rng = np.random.default_rng(20_240_817)
    entries = []
    for obj, (category, secondary) in OBJECTS.items():
        primary, ranked = CATEGORY_PREFS[category]
        entries += entries_for(rng, obj, primary, ranked, strength=3)
        sec_surfaces = list(ROOMS[secondary])
        rng.shuffle(sec_surfaces)
        entries += entries_for(rng, obj, secondary, sec_surfaces, strength=1,
                               support=0.35)
    return PlacementDataset(entries)


def main() -> None:
    import json

    DATA_DIR.mkdir(parents=True, exist_ok=True)
    dataset = build_dataset()
    out = DATA_DIR / "annotations.jsonl"
    dataset.save(out)
    print(f"wrote {out} ({len(dataset.entries)} entries)")

    categories = {obj: cat for obj, (cat, _) in OBJECTS.items()}
    cat_out = DATA_DIR / "profiles.json"
    with open(cat_out, "w") as fh:
        json.dump({"categories": categories}, fh, indent=2, sort_keys=True)
    print(f"wrote {cat_out} ({len(categories)} objects)")


if __name__ == "__main__":
    main()
