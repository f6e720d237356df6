"""Exception types shared across the package."""


class CheartError(Exception):
    """Base class for package-specific failures."""


class GeometryError(CheartError):
    """Phantom geometry does not fit the requested grid."""


class DatasetFormatError(CheartError):
    """Dataset directory is malformed, truncated or of an unknown version."""


class CheckpointError(CheartError):
    """Checkpoint archive is malformed or inconsistent with the request."""


class ShapeError(CheartError):
    """Input array dimensions do not match what the model was built for."""


class RolloutError(CheartError):
    """Latent rollout produced a non-finite state."""

    def __init__(self, step: int, message: str = ""):
        self.step = step
        super().__init__(message or f"non-finite latent state at rollout step {step}")


class TrainingError(CheartError):
    """Training aborted (typically a non-finite loss)."""
