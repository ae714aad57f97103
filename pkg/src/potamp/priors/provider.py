"""Language-model providers: live HTTP, cached replay, and deterministic mock.

All three expose the same three primitives so the rest of the system never
knows which one it is talking to:

  next_token_logprobs(kind, messages, options) -> {option: logprob}
  complete(kind, messages) -> text
  embed(text) -> list[float]
"""
from __future__ import annotations

import hashlib
import math
import os
import time
from dataclasses import dataclass, field

import httpx
import numpy as np

from ..errors import ConfigurationError, MissingPriorError, ProviderError
from .cache import ResponseCache, cache_key

MISSING_OPTION_LOGPROB = -20.0


@dataclass
class ProviderConfig:
    mode: str = "mock"  # live | replay | mock
    base_url: str = "http://localhost:8000/v1"
    model: str = "mock-model"
    embed_model: str = "mock-embed"
    api_key_env: str = "POTAMP_API_KEY"
    cache_path: str | None = None
    temperature: float = 0.0
    max_retries: int = 3
    backoff: float = 0.5

    def __post_init__(self):
        if self.mode not in ("live", "replay", "mock"):
            raise ConfigurationError(f"unknown provider mode {self.mode!r}")


class BaseProvider:
    def __init__(self, config: ProviderConfig):
        self.config = config
        self.cache = ResponseCache(config.cache_path)

    @property
    def provider_id(self) -> str:
        return f"{self.config.mode}:{self.config.model}"

    def _key(self, kind: str, prompt) -> str:
        return cache_key(kind, self.config.model, prompt)

    def next_token_logprobs(self, kind: str, messages, options) -> dict[str, float]:
        raise NotImplementedError

    def complete(self, kind: str, messages) -> str:
        raise NotImplementedError

    def embed(self, text: str) -> list[float]:
        raise NotImplementedError


class LiveProvider(BaseProvider):
    """Talks to a chat-completions + embeddings HTTP API and records every
    response into the cache. Retries with exponential backoff."""

    def __init__(self, config: ProviderConfig, transport: httpx.BaseTransport | None = None):
        super().__init__(config)
        headers = {}
        api_key = os.environ.get(config.api_key_env, "")
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        self._client = httpx.Client(
            base_url=config.base_url, headers=headers, timeout=30.0,
            transport=transport,
        )

    def _post(self, path: str, payload: dict) -> dict:
        last = None
        for attempt in range(self.config.max_retries):
            try:
                resp = self._client.post(path, json=payload)
                resp.raise_for_status()
                return resp.json()
            except (httpx.HTTPError, ValueError) as exc:
                last = exc
                if attempt + 1 < self.config.max_retries:
                    time.sleep(self.config.backoff * (2**attempt))
        raise ProviderError(f"request to {path} failed after "
                            f"{self.config.max_retries} attempts: {last}")

    def next_token_logprobs(self, kind: str, messages, options) -> dict[str, float]:
        key = self._key(kind, messages)
        cached = self.cache.get(key)
        if cached is not None:
            return {opt: cached["logprobs"].get(opt, MISSING_OPTION_LOGPROB)
                    for opt in options}
        body = self._post(
            "/chat/completions",
            {
                "model": self.config.model,
                "messages": messages,
                "temperature": self.config.temperature,
                "max_tokens": 1,
                "logprobs": True,
                "top_logprobs": 20,
            },
        )
        try:
            entries = body["choices"][0]["logprobs"]["content"][0]["top_logprobs"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderError(f"response missing token logprobs: {exc}")
        by_token: dict[str, float] = {}
        for entry in entries:
            token = str(entry["token"])
            lp = float(entry["logprob"])
            # tokenizers may or may not carry a leading space on the letter
            stripped = token.strip()
            if stripped and (stripped not in by_token or lp > by_token[stripped]):
                by_token[stripped] = lp
        out = {opt: by_token.get(opt, MISSING_OPTION_LOGPROB) for opt in options}
        self.cache.put({
            "key_hash": key,
            "kind": kind,
            "prompt": messages,
            "response": None,
            "logprobs": out,
            "timestamp": time.time(),
        })
        return out

    def complete(self, kind: str, messages) -> str:
        key = self._key(kind, messages)
        cached = self.cache.get(key)
        if cached is not None:
            return cached["response"]
        body = self._post(
            "/chat/completions",
            {
                "model": self.config.model,
                "messages": messages,
                "temperature": self.config.temperature,
            },
        )
        try:
            text = body["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderError(f"malformed completion response: {exc}")
        if not isinstance(text, str) or not text.strip():
            raise ProviderError("empty completion response")
        self.cache.put({
            "key_hash": key,
            "kind": kind,
            "prompt": messages,
            "response": text,
            "timestamp": time.time(),
        })
        return text

    def embed(self, text: str) -> list[float]:
        key = self._key("embed", text)
        cached = self.cache.get(key)
        if cached is not None:
            return list(cached["embedding"])
        body = self._post(
            "/embeddings",
            {"model": self.config.embed_model, "input": text},
        )
        try:
            vec = body["data"][0]["embedding"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderError(f"malformed embedding response: {exc}")
        vec = [float(v) for v in vec]
        self.cache.put({
            "key_hash": key,
            "kind": "embed",
            "prompt": text,
            "response": None,
            "embedding": vec,
            "timestamp": time.time(),
        })
        return vec


class ReplayProvider(BaseProvider):
    """Serves responses from the cache only; never touches the network."""

    def __init__(self, config: ProviderConfig):
        super().__init__(config)
        if not config.cache_path:
            raise ConfigurationError("replay mode needs a cache path")

    def _lookup(self, kind: str, prompt) -> dict:
        key = self._key(kind, prompt)
        rec = self.cache.get(key)
        if rec is None:
            raise MissingPriorError(key, f"(kind={kind}, model={self.config.model})")
        return rec

    def next_token_logprobs(self, kind: str, messages, options) -> dict[str, float]:
        rec = self._lookup(kind, messages)
        return {opt: rec["logprobs"].get(opt, MISSING_OPTION_LOGPROB)
                for opt in options}

    def complete(self, kind: str, messages) -> str:
        return self._lookup(kind, messages)["response"]

    def embed(self, text: str) -> list[float]:
        return list(self._lookup("embed", text)["embedding"])


def _hash_unit_vector(text: str, dim: int = 16) -> list[float]:
    h = hashlib.sha256(text.encode()).digest()
    vals = np.frombuffer((h * ((dim * 8) // len(h) + 1))[: dim * 8],
                         dtype=np.uint64).astype(float)
    vals = vals / np.float64(2**64) - 0.5
    norm = float(np.linalg.norm(vals))
    return (vals / norm).tolist()


@dataclass
class MockBehavior:
    """Deterministic scripted answers for the mock provider.

    mcqa_weights: (level, object) -> {label: weight}; unlisted queries fall
    back to uniform. lgbu_mode "echo" peaks the replacement belief on the
    location that was just inspected, which forever chases its own tail.
    """

    mcqa_weights: dict = field(default_factory=dict)
    descriptions: dict = field(default_factory=dict)
    distributed_objects: set = field(default_factory=set)
    toggle_responses: dict = field(default_factory=dict)
    embeddings: dict = field(default_factory=dict)
    lgbu_mode: str = "mcqa"  # mcqa | echo
    lgbu_weights: dict = field(default_factory=dict)


class MockProvider(BaseProvider):
    """Fully deterministic in-process provider; optionally records responses
    to the cache so replay fixtures can be generated from it."""

    def __init__(self, config: ProviderConfig, behavior: MockBehavior | None = None):
        super().__init__(config)
        self.behavior = behavior or MockBehavior()

    @staticmethod
    def _parse_mcqa(messages) -> tuple[str, list[tuple[str, str]]]:
        text = messages[-1]["content"]
        lines = text.splitlines()
        first = lines[0]
        obj = first.replace("Predict the location of a ", "").rstrip(".")
        options = []
        for line in lines[1:-1]:
            if line.startswith("(") and ") " in line:
                letter, label = line[1:].split(") ", 1)
                options.append((letter, label))
        return obj, options

    @staticmethod
    def _parse_lgbu(messages) -> tuple[str, str, list[tuple[str, str]]]:
        text = messages[-1]["content"]
        obs_loc = ""
        obj = ""
        for line in text.splitlines():
            if line.startswith("observation_location: "):
                obs_loc = line.split(": ", 1)[1]
            if line.startswith("Current belief about "):
                obj = line.split("Current belief about ", 1)[1].split(":", 1)[0]
        options = []
        tail = text.rsplit("most likely to be? ", 1)[-1]
        for piece in tail.split("("):
            if ") " in piece:
                letter, label = piece.split(") ", 1)
                options.append((letter.strip(), label.strip()))
        return obj, obs_loc, options

    def _weights_to_logprobs(self, weights: dict, options: list[tuple[str, str]]):
        raw = np.array([max(float(weights.get(label, 0.0)), 0.0)
                        for _, label in options])
        # real next-token distributions never starve a listed option below a
        # couple percent of the favorite, so neither does the mock
        floor = 0.02 * raw.max() if raw.max() > 0 else 1.0
        raw = np.maximum(raw, floor)
        probs = raw / raw.sum()
        return {letter: float(np.log(p)) for (letter, _), p in zip(options, probs)}

    def next_token_logprobs(self, kind: str, messages, options) -> dict[str, float]:
        if kind == "lgbu":
            obj, obs_loc, parsed = self._parse_lgbu(messages)
            if self.behavior.lgbu_mode == "echo":
                weights = {label: (1.0 if label == obs_loc else 1e-6)
                           for _, label in parsed}
            else:
                weights = self.behavior.lgbu_weights.get(obj)
                if weights is None:
                    weights = self.behavior.mcqa_weights.get(("lgbu", obj), {})
        else:
            obj, parsed = self._parse_mcqa(messages)
            labels = [label for _, label in parsed]
            cand_room = self.behavior.mcqa_weights.get(("room", obj), {})
            cand_surf = self.behavior.mcqa_weights.get(("surface", obj), {})
            room_hits = sum(1 for lab in labels if lab in cand_room)
            surf_hits = sum(1 for lab in labels if lab in cand_surf)
            weights = cand_room if room_hits >= surf_hits else cand_surf
        logprobs = self._weights_to_logprobs(weights or {}, parsed)
        out = {opt: logprobs.get(opt, MISSING_OPTION_LOGPROB) for opt in options}
        self.cache.put({
            "key_hash": self._key(kind, messages),
            "kind": kind,
            "prompt": messages,
            "response": None,
            "logprobs": out,
            "timestamp": 0.0,
        })
        return out

    def complete(self, kind: str, messages) -> str:
        text = messages[-1]["content"]
        if kind == "describe":
            obj = text.replace("Explain the common use of a ", "").split(" in three")[0]
            reply = self.behavior.descriptions.get(
                obj,
                f"A {obj} is commonly used around the household. "
                f"It helps with everyday tasks involving a {obj}. "
                f"Many homes keep a {obj} somewhere convenient.",
            )
        elif kind == "toggle":
            obj = text.replace("The following is the object: ", "")
            if obj in self.behavior.toggle_responses:
                reply = self.behavior.toggle_responses[obj]
            else:
                reply = "True" if obj in self.behavior.distributed_objects else "False"
        else:
            reply = self.behavior.descriptions.get(text, "ok")
        self.cache.put({
            "key_hash": self._key(kind, messages),
            "kind": kind,
            "prompt": messages,
            "response": reply,
            "timestamp": 0.0,
        })
        return reply

    def embed(self, text: str) -> list[float]:
        vec = self.behavior.embeddings.get(text)
        if vec is None:
            vec = _hash_unit_vector(text)
        vec = [float(v) for v in vec]
        self.cache.put({
            "key_hash": self._key("embed", text),
            "kind": "embed",
            "prompt": text,
            "response": None,
            "embedding": vec,
            "timestamp": 0.0,
        })
        return vec


def make_provider(config: ProviderConfig, behavior: MockBehavior | None = None,
                  transport=None) -> BaseProvider:
    if config.mode == "live":
        return LiveProvider(config, transport=transport)
    if config.mode == "replay":
        return ReplayProvider(config)
    return MockProvider(config, behavior)
