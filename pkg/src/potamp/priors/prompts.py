"""Prompt templates for location priors, use descriptions, the co-location
gate, and observation-conditioned belief replacement."""
from __future__ import annotations

import string
from dataclasses import dataclass

from ..errors import ConfigurationError


@dataclass(frozen=True)
class McqaQuery:
    """Multiple-choice location question for one object."""

    object_name: str
    options: tuple[tuple[str, str], ...]  # (letter, location label)
    level: str  # "room" | "surface"

    def __post_init__(self):
        if self.level not in ("room", "surface"):
            raise ConfigurationError(f"unknown query level {self.level!r}")
        n = len(self.options)
        if not 2 <= n <= 26:
            raise ConfigurationError("between 2 and 26 options required")
        expected = tuple(string.ascii_uppercase[:n])
        if tuple(letter for letter, _ in self.options) != expected:
            raise ConfigurationError("option letters must be consecutive capitals from A")

    @property
    def letters(self) -> tuple[str, ...]:
        return tuple(letter for letter, _ in self.options)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for _, label in self.options)


def make_query(object_name: str, labels, level: str) -> McqaQuery:
    options = tuple(
        (string.ascii_uppercase[i], label) for i, label in enumerate(labels)
    )
    return McqaQuery(object_name, options, level)


def build_mcqa_prompt(query: McqaQuery) -> str:
    lines = [f"Predict the location of a {query.object_name}."]
    lines += [f"({letter}) {label}" for letter, label in query.options]
    lines.append("Return the letter that represents the location:")
    return "\n".join(lines)


def build_describe_prompt(object_name: str) -> str:
    return f"Explain the common use of a {object_name} in three sentences."


TOGGLE_SYSTEM_PROMPT = (
    "You will be given an object that commonly appears in a typical household "
    "environment. Using common sense, determine if the object tends to be "
    "distributed throughout a typical household, such as doorknobs and light "
    "switches."
)


def build_toggle_messages(object_name: str) -> list[dict]:
    return [
        {"role": "system", "content": TOGGLE_SYSTEM_PROMPT},
        {"role": "user", "content": f"The following is the object: {object_name}"},
    ]


LGBU_SYSTEM_PROMPT = (
    "You will receive:\n"
    "- Current belief about where an object might be located.\n"
    "- observation_location: the location that was just inspected.\n"
    "- visibility: how much of the location was visible. 0 means not visible "
    "at all, 1 means fully visible.\n"
    "- result: whether the object was found there.\n"
    "- co_detected: other objects found at the same location.\n"
    "Based on this information and common sense, predict where the object is "
    "most likely to be now. Choose the most likely location from the given "
    "options."
)


def build_lgbu_messages(
    object_name: str,
    belief_text: str,
    observation_location: str,
    visibility: float,
    result: str,
    co_detected: str,
    query: McqaQuery,
) -> list[dict]:
    options_text = " ".join(f"({letter}) {label}" for letter, label in query.options)
    user = (
        f"Current belief about {object_name}: {belief_text}\n"
        f"observation_location: {observation_location}\n"
        f"visibility: {visibility:.2f}\n"
        f"result: {result}\n"
        f"co_detected: {co_detected}\n"
        f"Given this information, where is {object_name} most likely to be? "
        f"{options_text}"
    )
    return [
        {"role": "system", "content": LGBU_SYSTEM_PROMPT},
        {"role": "user", "content": user},
    ]
