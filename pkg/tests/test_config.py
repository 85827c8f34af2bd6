"""Tests for config module."""

import pytest
import yaml
from pydantic import ValidationError

from sacmt.config import (
    ClassifyConfig,
    ClusterConfig,
    RunConfig,
    SplitConfig,
    TrainConfig,
    find_config,
    load_config,
    merge_overrides,
)


class TestDefaults:
    """Tests for default values."""

    def test_train_defaults(self):
        """Test the network and loop defaults."""
        cfg = TrainConfig()

        assert (cfg.margin, cfg.d, cfg.h, cfg.e) == (0.5, 128, 64, 64)
        assert (cfg.lr, cfg.batch_size, cfg.clip_norm) == (0.01, 32, 5.0)
        assert cfg.resample_pairs is False

    def test_run_defaults(self):
        """Test the top-level defaults."""
        cfg = RunConfig()

        assert cfg.mode == "sentiment"
        assert cfg.seed is None
        assert cfg.clusters.tau == 0.6
        assert cfg.clusters.vocabulary == "train"
        assert cfg.skipgram.dim == 100
        assert cfg.baseline.l2 == 0.001
        assert cfg.classify.rule == "centroid"


class TestValidation:
    """Tests for config validators."""

    @pytest.mark.parametrize("margin", [0.0, 1.0, -0.2, 1.5])
    def test_margin_open_interval(self, margin):
        """Test that the margin must lie strictly inside (0, 1)."""
        with pytest.raises(ValidationError):
            TrainConfig(margin=margin)

    def test_tau_positive(self):
        """Test that tau must be positive."""
        with pytest.raises(ValidationError):
            ClusterConfig(tau=0.0)

    def test_vocabulary_scope(self):
        """Test the cluster vocabulary choices."""
        with pytest.raises(ValidationError):
            ClusterConfig(vocabulary="test")

    def test_mode(self):
        """Test the alignment modes."""
        with pytest.raises(ValidationError):
            RunConfig(mode="bilingual")

    def test_rule(self):
        """Test the inference rules."""
        with pytest.raises(ValidationError):
            ClassifyConfig(rule="svm")

    def test_fallback_case_insensitive(self):
        """Test that the fallback label is lowercased."""
        assert ClassifyConfig(fallback="Positive").fallback == "positive"

    def test_split_ratios(self):
        """Test that split ratios sum to 1."""
        with pytest.raises(ValidationError):
            SplitConfig(train=0.7, dev=0.1, test=0.1)


class TestSeeded:
    """Tests for RunConfig.seeded."""

    def test_propagates_seed(self):
        """Test that the master seed reaches every stage."""
        cfg = RunConfig(seed=42).seeded()

        assert cfg.skipgram.seed == cfg.train.seed == cfg.baseline.seed == 42

    def test_missing_seed(self):
        """Test that training commands need a seed."""
        with pytest.raises(ValueError, match="seed"):
            RunConfig().seeded()


class TestLoadConfig:
    """Tests for load_config function."""

    def test_yaml(self, tmp_path):
        """Test loading nested YAML."""
        path = tmp_path / "sacmt.yml"
        path.write_text(
            yaml.safe_dump({"seed": 3, "train": {"margin": 0.3, "epochs": 2}, "clusters": {"tau": 0.8}}),
            encoding="utf-8",
        )

        cfg = load_config(path)

        assert cfg.seed == 3
        assert cfg.train.margin == 0.3
        assert cfg.train.epochs == 2
        assert cfg.clusters.tau == 0.8

    def test_json(self, tmp_path):
        """Test that JSON files load too."""
        path = tmp_path / "sacmt.json"
        path.write_text('{"mode": "emoji"}', encoding="utf-8")

        assert load_config(path).mode == "emoji"

    def test_missing(self, tmp_path):
        """Test a missing file."""
        with pytest.raises(FileNotFoundError):
            load_config(tmp_path / "sacmt.yml")

    def test_empty(self, tmp_path):
        """Test an empty file."""
        path = tmp_path / "sacmt.yml"
        path.write_text("", encoding="utf-8")

        with pytest.raises(ValueError, match="Empty"):
            load_config(path)

    def test_not_a_mapping(self, tmp_path):
        """Test a file holding a list."""
        path = tmp_path / "sacmt.yml"
        path.write_text("- 1\n- 2\n", encoding="utf-8")

        with pytest.raises(ValueError, match="mapping"):
            load_config(path)

    def test_invalid_value(self, tmp_path):
        """Test that validation errors surface."""
        path = tmp_path / "sacmt.yml"
        path.write_text("train:\n  margin: 2\n", encoding="utf-8")

        with pytest.raises(ValidationError):
            load_config(path)


class TestFindConfig:
    """Tests for find_config function."""

    def test_none(self, tmp_path):
        """Test a directory without config."""
        assert find_config(tmp_path) is None

    def test_prefers_yml(self, tmp_path):
        """Test candidate order."""
        (tmp_path / "sacmt.json").write_text("{}", encoding="utf-8")
        (tmp_path / "sacmt.yml").write_text("seed: 1\n", encoding="utf-8")

        assert find_config(tmp_path) == tmp_path / "sacmt.yml"


class TestMergeOverrides:
    """Tests for merge_overrides function."""

    def test_dotted_keys(self):
        """Test nested overrides."""
        cfg = merge_overrides(RunConfig(), {"train.margin": 0.3, "clusters.tau": 0.9, "seed": 5})

        assert cfg.train.margin == 0.3
        assert cfg.clusters.tau == 0.9
        assert cfg.seed == 5

    def test_none_ignored(self):
        """Test that unset flags keep the base values."""
        base = RunConfig(seed=7)
        assert merge_overrides(base, {"seed": None, "train.lr": None}) == base

    def test_validates(self):
        """Test that overrides are validated."""
        with pytest.raises(ValidationError):
            merge_overrides(RunConfig(), {"train.margin": 1.0})
