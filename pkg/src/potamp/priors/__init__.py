from .cache import ResponseCache, cache_key
from .prompts import (
    McqaQuery,
    build_describe_prompt,
    build_lgbu_messages,
    build_mcqa_prompt,
    build_toggle_messages,
    make_query,
)
from .provider import (
    BaseProvider,
    LiveProvider,
    MockBehavior,
    MockProvider,
    ProviderConfig,
    ReplayProvider,
    make_provider,
)
from .service import (
    PriorRecord,
    build_similarity_matrix,
    colocation_toggle,
    describe_object_uses,
    embed_description,
    generate_room_prior,
    generate_surface_prior,
    lgbu_update,
    logprobs_to_prior,
    similarity,
)

__all__ = [
    "BaseProvider",
    "LiveProvider",
    "McqaQuery",
    "MockBehavior",
    "MockProvider",
    "PriorRecord",
    "ProviderConfig",
    "ReplayProvider",
    "ResponseCache",
    "build_describe_prompt",
    "build_lgbu_messages",
    "build_mcqa_prompt",
    "build_similarity_matrix",
    "build_toggle_messages",
    "cache_key",
    "colocation_toggle",
    "describe_object_uses",
    "embed_description",
    "generate_room_prior",
    "generate_surface_prior",
    "lgbu_update",
    "logprobs_to_prior",
    "make_provider",
    "make_query",
    "similarity",
]
