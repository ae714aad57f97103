"""Operations built on top of a provider: location priors, use descriptions,
pairwise similarity, the co-location gate, and belief replacement."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass

import numpy as np

from ..belief import SimilarityMatrix
from ..errors import ProviderError
from .prompts import (
    McqaQuery,
    build_describe_prompt,
    build_lgbu_messages,
    build_mcqa_prompt,
    build_toggle_messages,
    make_query,
)
from .provider import BaseProvider

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PriorRecord:
    query: McqaQuery
    option_logprobs: tuple[float, ...]
    prior: np.ndarray
    provider_id: str
    timestamp: float


def logprobs_to_prior(option_logprobs) -> np.ndarray:
    """Numerically stable softmax over option logprobs, order preserved."""
    vals = np.asarray(option_logprobs, dtype=float)
    if vals.size < 2:
        raise ProviderError("need at least two options")
    finite = np.isfinite(vals)
    if not finite.any():
        raise ProviderError("all option logprobs are -inf")
    shifted = vals - vals[finite].max()
    ex = np.where(finite, np.exp(shifted), 0.0)
    return ex / ex.sum()


def _generate_prior(object_name: str, labels, level: str,
                    provider: BaseProvider) -> PriorRecord:
    query = make_query(object_name, labels, level)
    prompt = build_mcqa_prompt(query)
    messages = [{"role": "user", "content": prompt}]
    logprobs = provider.next_token_logprobs("mcqa", messages, list(query.letters))
    ordered = tuple(logprobs[letter] for letter in query.letters)
    prior = logprobs_to_prior(ordered)
    return PriorRecord(query, ordered, prior, provider.provider_id, time.time())


def generate_room_prior(object_name: str, room_labels, provider: BaseProvider) -> PriorRecord:
    return _generate_prior(object_name, room_labels, "room", provider)


def generate_surface_prior(object_name: str, surface_labels, provider: BaseProvider) -> PriorRecord:
    return _generate_prior(object_name, surface_labels, "surface", provider)


def describe_object_uses(object_name: str, provider: BaseProvider) -> str:
    messages = [{"role": "user", "content": build_describe_prompt(object_name)}]
    text = provider.complete("describe", messages)
    if not text or not text.strip():
        raise ProviderError(f"empty use description for {object_name}")
    return text


def embed_description(object_name: str, provider: BaseProvider) -> np.ndarray:
    text = describe_object_uses(object_name, provider)
    vec = np.asarray(provider.embed(text), dtype=float)
    norm = np.linalg.norm(vec)
    if norm <= 0:
        raise ProviderError(f"zero-norm embedding for {object_name}")
    return vec / norm


def similarity(object_j: str, object_k: str, provider: BaseProvider) -> float:
    """Cosine similarity of the two objects' use-description embeddings."""
    if object_j == object_k:
        return 1.0
    ej = embed_description(object_j, provider)
    ek = embed_description(object_k, provider)
    return float(np.clip(ej @ ek, -1.0, 1.0))


def colocation_toggle(object_name: str, provider: BaseProvider) -> bool:
    """True when co-location evidence should be used for this object.

    The provider is asked whether the object tends to be distributed through
    a household; "True" (distributed) disables co-location. Anything other
    than a strict True/False answer falls back to enabled, with a warning.
    """
    messages = build_toggle_messages(object_name)
    reply = provider.complete("toggle", messages)
    answer = reply.strip().rstrip(".")
    if answer == "True":
        return False
    if answer == "False":
        return True
    log.warning("unparseable co-location gate reply %r for %s; leaving enabled",
                reply, object_name)
    return True


def build_similarity_matrix(object_labels, provider: BaseProvider) -> SimilarityMatrix:
    """Pairwise description-embedding cosines plus per-object gates."""
    labels = list(object_labels)
    embeds = [embed_description(label, provider) for label in labels]
    k = len(labels)
    sim = np.eye(k)
    for i in range(k):
        for j in range(i + 1, k):
            val = float(np.clip(embeds[i] @ embeds[j], -1.0, 1.0))
            sim[i, j] = sim[j, i] = val
    toggle = np.array([colocation_toggle(label, provider) for label in labels])
    return SimilarityMatrix(sim, toggle)


def lgbu_update(
    object_name: str,
    belief_text: str,
    observation_location: str,
    visibility: float,
    result: str,
    co_detected: str,
    labels,
    provider: BaseProvider,
    level: str = "room",
) -> np.ndarray:
    """Replacement categorical over `labels` predicted from the observation.

    Unlike the Bayes update this does not multiply into the previous belief;
    the returned vector replaces it outright.
    """
    query = make_query(object_name, labels, level)
    messages = build_lgbu_messages(
        object_name, belief_text, observation_location, visibility, result,
        co_detected, query,
    )
    logprobs = provider.next_token_logprobs("lgbu", messages, list(query.letters))
    ordered = tuple(logprobs[letter] for letter in query.letters)
    return logprobs_to_prior(ordered)
