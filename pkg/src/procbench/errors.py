"""Exception types shared across the package."""


class ProcbenchError(Exception):
    """Base class for package-specific failures."""


class ConfigError(ProcbenchError, ValueError):
    """Invalid environment, level-set, or wrapper configuration."""


class EpisodeFinishedError(ProcbenchError, RuntimeError):
    """A finished episode was stepped without a reset."""


class LevelFormatError(ProcbenchError, ValueError):
    """A level document failed to parse or validate.

    ``path`` names the offending field (dotted), or "" for document-level
    problems such as truncated JSON.
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path or '<document>'}: {message}")
        self.path = path


class InfeasibleError(ProcbenchError, ValueError):
    """A protocol request cannot be satisfied (e.g. more distinct seeds
    than the 32-bit seed space holds)."""
