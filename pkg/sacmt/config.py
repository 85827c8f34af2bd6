"""Configuration management for sacmt."""

from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import BaseModel, Field, field_validator, model_validator


class SkipGramConfig(BaseModel):
    """Skip-gram with negative sampling hyperparameters."""

    dim: int = Field(default=100, description="Embedding dimension k")
    window: int = Field(default=5, description="Context window radius")
    negatives: int = Field(default=5, description="Negative samples per context pair")
    epochs: int = Field(default=5, description="Passes over the corpus")
    lr: float = Field(default=0.025, description="Initial learning rate, linearly decayed")
    min_lr_ratio: float = Field(
        default=1e-4, description="Final learning rate as a fraction of lr"
    )
    min_count: int = Field(default=1, description="Drop words rarer than this")
    seed: int = Field(default=1, description="Random seed")
    resample_negatives: bool = Field(
        default=False,
        description="Draw fresh negatives every epoch instead of once per run",
    )

    @field_validator("dim", "window", "epochs", "min_count")
    @classmethod
    def validate_positive(cls, v: int) -> int:
        """Validate counts are at least 1."""
        if v < 1:
            raise ValueError("must be >= 1")
        return v

    @field_validator("negatives")
    @classmethod
    def validate_negatives(cls, v: int) -> int:
        """Validate negative sample count."""
        if v < 0:
            raise ValueError("negatives must be >= 0")
        return v

    @field_validator("lr")
    @classmethod
    def validate_lr(cls, v: float) -> float:
        """Validate learning rate."""
        if v < 0:
            raise ValueError("lr must be >= 0")
        return v


class ClusterConfig(BaseModel):
    """Transliteration variant clustering."""

    tau: float = Field(default=0.6, description="Similarity threshold for an edge")
    vocabulary: str = Field(
        default="train",
        description="Words to cluster: 'train' (training corpus) or 'all'",
    )

    @field_validator("tau")
    @classmethod
    def validate_tau(cls, v: float) -> float:
        """Validate tau is positive."""
        if v <= 0:
            raise ValueError("tau must be > 0")
        return v

    @field_validator("vocabulary")
    @classmethod
    def validate_vocabulary(cls, v: str) -> str:
        """Validate vocabulary scope."""
        if v not in ("train", "all"):
            raise ValueError("vocabulary must be 'train' or 'all'")
        return v


class TrainConfig(BaseModel):
    """Siamese network and training loop hyperparameters."""

    margin: float = Field(default=0.5, description="Contrastive margin m in (0, 1)")
    d: int = Field(default=128, description="Sentiment space dimension")
    h: int = Field(default=64, description="LSTM hidden size per direction")
    e: int = Field(default=64, description="Trigram embedding size")
    lr: float = Field(
        default=0.01,
        description="Step size; tuned for batch_size 32 since the batch loss is a sum",
    )
    batch_size: int = Field(default=32, description="Pairs per gradient step")
    epochs: int = Field(default=30, description="Number of epochs")
    seed: int = Field(default=0, description="Seed for initialization and shuffling")
    clip_norm: float = Field(default=5.0, description="Global gradient norm clip; 0 disables")
    pairs_per_sentence: int = Field(
        default=1, description="Positive (and negative) partners per left sentence"
    )
    resample_pairs: bool = Field(
        default=False, description="Resample partners every epoch"
    )

    @field_validator("margin")
    @classmethod
    def validate_margin(cls, v: float) -> float:
        """Validate margin is strictly between 0 and 1."""
        if not 0.0 < v < 1.0:
            raise ValueError("margin must be strictly between 0 and 1")
        return v

    @field_validator("d", "h", "e", "batch_size", "pairs_per_sentence")
    @classmethod
    def validate_positive(cls, v: int) -> int:
        """Validate sizes are at least 1."""
        if v < 1:
            raise ValueError("must be >= 1")
        return v

    @field_validator("epochs")
    @classmethod
    def validate_epochs(cls, v: int) -> int:
        """Validate epoch count."""
        if v < 0:
            raise ValueError("epochs must be >= 0")
        return v

    @field_validator("lr", "clip_norm")
    @classmethod
    def validate_non_negative(cls, v: float) -> float:
        """Validate non-negative reals."""
        if v < 0:
            raise ValueError("must be >= 0")
        return v


class ClassifyConfig(BaseModel):
    """Inference rule over the sentiment space."""

    rule: str = Field(default="centroid", description="'centroid' or 'knn'")
    k: int = Field(default=5, description="Neighbours for the knn rule")
    fallback: str = Field(
        default="neutral",
        description="Class for zero sentence vectors: a label or 'majority'",
    )

    @field_validator("rule")
    @classmethod
    def validate_rule(cls, v: str) -> str:
        """Validate inference rule."""
        if v not in ("centroid", "knn"):
            raise ValueError("rule must be 'centroid' or 'knn'")
        return v

    @field_validator("k")
    @classmethod
    def validate_k(cls, v: int) -> int:
        """Validate k."""
        if v < 1:
            raise ValueError("k must be >= 1")
        return v

    @field_validator("fallback")
    @classmethod
    def validate_fallback(cls, v: str) -> str:
        """Validate fallback class."""
        v = v.lower()
        if v not in ("negative", "neutral", "positive", "majority"):
            raise ValueError("fallback must be a label or 'majority'")
        return v


class BaselineConfig(BaseModel):
    """Averaged skip-gram vectors + logistic regression."""

    l2: float = Field(default=0.001, description="L2 regularization coefficient")
    lr: float = Field(default=0.5, description="Gradient descent step size")
    epochs: int = Field(default=300, description="Full-batch gradient steps")
    seed: int = Field(default=0, description="Seed for weight initialization")

    @field_validator("l2", "lr")
    @classmethod
    def validate_non_negative(cls, v: float) -> float:
        """Validate non-negative reals."""
        if v < 0:
            raise ValueError("must be >= 0")
        return v


class SplitConfig(BaseModel):
    """Stratified train/dev/test split."""

    train: float = Field(default=0.8, description="Train fraction")
    dev: float = Field(default=0.1, description="Dev fraction")
    test: float = Field(default=0.1, description="Test fraction")

    @model_validator(mode="after")
    def validate_ratios(self) -> "SplitConfig":
        """Validate ratios are positive and sum to 1."""
        ratios = (self.train, self.dev, self.test)
        if any(r <= 0 for r in ratios):
            raise ValueError("split ratios must be positive")
        if abs(sum(ratios) - 1.0) > 1e-9:
            raise ValueError("split ratios must sum to 1")
        return self


class RunConfig(BaseModel):
    """Main application configuration."""

    mode: str = Field(default="sentiment", description="'sentiment' or 'emoji' alignment")
    seed: Optional[int] = Field(default=None, description="Master seed for training commands")
    no_preprocess: bool = Field(
        default=False, description="Skip transliteration variant merging"
    )
    skipgram: SkipGramConfig = Field(default_factory=SkipGramConfig)
    clusters: ClusterConfig = Field(default_factory=ClusterConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    classify: ClassifyConfig = Field(default_factory=ClassifyConfig)
    baseline: BaselineConfig = Field(default_factory=BaselineConfig)
    split: SplitConfig = Field(default_factory=SplitConfig)

    @field_validator("mode")
    @classmethod
    def validate_mode(cls, v: str) -> str:
        """Validate alignment mode."""
        if v not in ("sentiment", "emoji"):
            raise ValueError("mode must be 'sentiment' or 'emoji'")
        return v

    def seeded(self) -> "RunConfig":
        """
        Propagate the master seed into every stage config.

        Raises:
            ValueError: If no seed was given
        """
        if self.seed is None:
            raise ValueError("a seed is required for training commands")
        data = self.model_dump()
        data["skipgram"]["seed"] = self.seed
        data["train"]["seed"] = self.seed
        data["baseline"]["seed"] = self.seed
        return RunConfig(**data)


def load_config(config_path: Path) -> RunConfig:
    """
    Load and validate configuration from a YAML or JSON file.

    Args:
        config_path: Path to sacmt.yml / sacmt.json

    Returns:
        Validated RunConfig instance

    Raises:
        FileNotFoundError: If config file doesn't exist
        yaml.YAMLError: If config is not valid YAML/JSON
        ValueError: If config validation fails
    """
    if not config_path.exists():
        raise FileNotFoundError(f"Config file not found: {config_path}")

    with open(config_path, "r", encoding="utf-8") as f:
        config_data = yaml.safe_load(f)

    if config_data is None:
        raise ValueError(f"Empty config file: {config_path}")
    if not isinstance(config_data, dict):
        raise ValueError(f"Config file must hold a mapping: {config_path}")

    return RunConfig(**config_data)


def find_config(directory: Path) -> Optional[Path]:
    """
    Find a config file in a directory.

    Args:
        directory: Directory to search

    Returns:
        Path to config file, or None if not found
    """
    candidates = [
        directory / "sacmt.yml",
        directory / "sacmt.yaml",
        directory / "sacmt.json",
    ]

    for candidate in candidates:
        if candidate.exists():
            return candidate

    return None


def merge_overrides(base: RunConfig, overrides: Dict[str, Any]) -> RunConfig:
    """
    Apply command-line values on top of a config.

    Keys are dotted paths ("train.margin", "seed"); None values mean the flag
    was not given and are ignored.

    Examples:
        >>> cfg = merge_overrides(RunConfig(), {"train.margin": 0.3, "seed": None})
        >>> cfg.train.margin
        0.3
    """
    data = base.model_dump()
    for dotted, value in overrides.items():
        if value is None:
            continue
        target = data
        *parents, leaf = dotted.split(".")
        for key in parents:
            target = target[key]
        target[leaf] = value
    return RunConfig(**data)
