"""Custom errors for readrank operations."""

from pathlib import Path


class ReadRankError(Exception):
    """Base error class for readrank issues"""

    def __init__(self, message: str = "An error occurred in readrank"):
        super().__init__(message)

    def __str__(self):
        return f"[{self.__class__.__name__}] {self.args[0] if self.args else ''}"


class InputFormatError(ReadRankError):
    """Error raised when an input file does not follow its expected format."""

    def __init__(
        self,
        message: str,
        path: str | Path | None = None,
        line_number: int | None = None,
    ):
        self.path = str(path) if path is not None else None
        self.line_number = line_number
        location = ""
        if self.path:
            location += f" in {self.path}"
        if line_number is not None:
            location += f", line {line_number}"
        super().__init__(f"{message}{location}")


class ResourceMissingError(ReadRankError):
    """Error raised when a feature group needs a resource that was not supplied."""

    def __init__(self, resource: str, needed_by: str | None = None):
        self.resource = resource
        message = f"Missing resource: {resource}."
        if needed_by:
            message += f" Required by the '{needed_by}' features."
        super().__init__(message)


class SchemaMismatchError(ReadRankError):
    """Error raised when features were built with a schema the model was not trained on."""

    def __init__(self, expected: str, found: str):
        self.expected = expected
        self.found = found
        super().__init__(
            f"Feature schema mismatch: model expects {expected[:12]}, got {found[:12]}."
        )


class BinningError(ReadRankError):
    """Error raised when a feature cannot be binned (constant or never fitted)."""

    def __init__(self, feature: str, reason: str):
        self.feature = feature
        super().__init__(f"Cannot bin feature '{feature}': {reason}.")


class TrainingDivergedError(ReadRankError):
    """Error raised when the training loss stops being finite."""

    def __init__(self, epoch: int, loss: float):
        self.epoch = epoch
        self.loss = loss
        super().__init__(
            f"Loss became {loss} at epoch {epoch}. "
            "Lower the learning rate or check the features for extreme values."
        )


class UndefinedMetricError(ReadRankError):
    """Error raised when a statistic is undefined for the given inputs."""


class ModelFileError(ReadRankError):
    """Error raised when a model or language model file cannot be read."""

    def __init__(self, path: str | Path, reason: str):
        self.path = str(path)
        super().__init__(f"Cannot read {path}: {reason}.")
