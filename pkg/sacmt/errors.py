"""Exception hierarchy for sacmt."""

from typing import Optional


class SacmtError(Exception):
    """Base class for all pipeline errors."""

    pass


class CorpusError(SacmtError):
    """Raised for malformed datasets, unknown labels and invalid splits."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class TextPrepError(SacmtError):
    """Raised when text cannot be normalized or encoded."""

    pass


class SkipGramError(SacmtError):
    """Raised when skip-gram training has nothing to train on."""

    pass


class NumericError(SacmtError):
    """Raised for non-finite values and dimension mismatches."""

    pass


class TrainingError(SacmtError):
    """Raised when training diverges."""

    def __init__(self, message: str, epoch: int, batch: int):
        super().__init__(f"{message} (epoch {epoch}, batch {batch})")
        self.epoch = epoch
        self.batch = batch


class PairingError(SacmtError):
    """Raised when a class has no admissible partner sentence."""

    pass


class ClassifyError(SacmtError):
    """Raised when centroids or metrics cannot be computed."""

    pass


class BaselineError(SacmtError):
    """Raised by the averaged skip-gram baseline."""

    pass


class ArtifactError(SacmtError):
    """Raised when a JSON artifact cannot be parsed."""

    pass


class ModelFileError(ArtifactError):
    """Base class for model file problems."""

    pass


class ModelVersionError(ModelFileError):
    """Model file was written by an incompatible format version."""

    pass


class ModelFormatError(ModelFileError):
    """Model file is truncated, corrupted or fails its checksum."""

    pass


class ModelShapeError(ModelFileError):
    """Parameter arrays disagree with the declared dimensions."""

    pass
