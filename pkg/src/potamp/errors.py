"""Exception types shared across the package."""


class PotampError(Exception):
    """Base class for package errors."""


class ConfigurationError(PotampError):
    """Invalid environment, layout, or run configuration."""


class ContractViolation(PotampError):
    """Caller broke an operation precondition (e.g. mask length mismatch)."""


class DegenerateUpdateError(PotampError):
    """A Bayes update produced zero total mass; caller may re-seed that level."""


class ProviderError(PotampError):
    """Language-model provider failure (network, auth, malformed response)."""


class MissingPriorError(ProviderError):
    """Replay cache does not contain the requested record."""

    def __init__(self, key: str, detail: str = ""):
        self.key = key
        super().__init__(f"missing cached record for {key} {detail}".strip())


class DatasetError(PotampError):
    """Malformed placement-annotation data."""


class GenerationError(PotampError):
    """Environment sampling could not produce a feasible layout."""
