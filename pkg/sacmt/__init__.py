"""SACMT: siamese contrastive sentiment analysis for code-mixed text."""

__version__ = "0.1.0"
