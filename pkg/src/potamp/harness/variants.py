"""The six evaluated method variants: prior source x belief-update mode."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import ConfigurationError

_LEGAL = {
    "baseline": ("uniform", "bayes"),
    "co_model": ("uniform", "bayes+comodel"),
    "lgbu": ("uniform", "lgbu"),
    "mcqa": ("mcqa", "bayes"),
    "mcqa_co_model": ("mcqa", "bayes+comodel"),
    "mcqa_lgbu": ("mcqa", "lgbu"),
}


@dataclass(frozen=True)
class VariantConfig:
    name: str
    prior_source: str  # uniform | mcqa
    update_mode: str  # bayes | bayes+comodel | lgbu

    def __post_init__(self):
        combo = _LEGAL.get(self.name)
        if combo is None:
            raise ConfigurationError(
                f"unknown variant {self.name!r}; choose from {sorted(_LEGAL)}")
        if combo != (self.prior_source, self.update_mode):
            raise ConfigurationError(
                f"variant {self.name} must pair {combo[0]} priors with "
                f"{combo[1]} updates")

    @property
    def uses_provider(self) -> bool:
        return self.prior_source == "mcqa" or self.update_mode in (
            "bayes+comodel", "lgbu")

    @property
    def uses_comodel(self) -> bool:
        return self.update_mode == "bayes+comodel"


def variant(name: str) -> VariantConfig:
    source, mode = _LEGAL[name]
    return VariantConfig(name, source, mode)


ALL_VARIANTS = tuple(variant(name) for name in _LEGAL)
BAYES_VARIANTS = tuple(v for v in ALL_VARIANTS if v.update_mode != "lgbu")
