"""Command-line interface for sacmt."""

import json
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence

import typer
import yaml
from rich.markup import escape
from rich.table import Table

from . import __version__
from .artifacts import read_json, require_object, write_json
from .config import RunConfig, find_config, load_config, merge_overrides
from .errors import SacmtError
from .log import configure_logging, stderr_console as console

app = typer.Typer(
    name="sacmt",
    help="Sentiment analysis of code-mixed text with a siamese BiLSTM network",
    add_completion=False,
)


def version_callback(value: bool):
    """Show version and exit."""
    if value:
        console.print(f"sacmt version {__version__}")
        raise typer.Exit()


@app.callback()
def main_callback(
    ctx: typer.Context,
    config: Optional[Path] = typer.Option(
        None,
        "--config",
        "-c",
        help="YAML/JSON config file (default: sacmt.yml in the working directory)",
    ),
    verbose: bool = typer.Option(False, "--verbose", help="Log debug output"),
    version: bool = typer.Option(
        None,
        "--version",
        callback=version_callback,
        is_eager=True,
        help="Show version and exit",
    ),
):
    """sacmt - siamese sentiment analysis for code-mixed text."""
    configure_logging(verbose)
    ctx.obj = {"config": config}


def _base_config(ctx: typer.Context) -> RunConfig:
    path = (ctx.obj or {}).get("config") or find_config(Path.cwd())
    return load_config(path) if path else RunConfig()


def _config(ctx: typer.Context, overrides: Dict[str, Any], seeded: bool = False) -> RunConfig:
    """Defaults < config file < command-line flags; training commands need a seed."""
    with _pipeline_errors():
        cfg = merge_overrides(_base_config(ctx), overrides)
    if seeded:
        if cfg.seed is None:
            raise typer.BadParameter(
                "a seed is required (or set 'seed' in the config file)", ctx=ctx, param_hint="'--seed'"
            )
        cfg = cfg.seeded()
    return cfg


@contextmanager
def _pipeline_errors() -> Iterator[None]:
    """Report pipeline failures as 'Error: ...' with exit code 1."""
    try:
        yield
    except (SacmtError, ValueError, OSError, yaml.YAMLError) as e:
        console.print(f"[red]Error: {escape(str(e))}[/red]", markup=True, highlight=False)
        raise typer.Exit(code=1)


def _emit(summary: Dict[str, Any]) -> None:
    """The one-line JSON summary on stdout."""
    typer.echo(json.dumps(summary, sort_keys=True, ensure_ascii=False))


def _print_text(text: str) -> None:
    console.print(text, markup=False, highlight=False)


def _load(paths: Sequence[Path]):
    from .corpus import load_dataset

    return [load_dataset(p) for p in paths]


SEED_OPTION = typer.Option(None, "--seed", "-s", help="Random seed (required for training)")


@app.command()
def stats(
    ctx: typer.Context,
    datasets: List[Path] = typer.Argument(..., help="TSV datasets (id, label, text)"),
    emoji_map: Optional[Path] = typer.Option(
        None, "--emoji-map", help="Also show the class distribution after emoji relabeling"
    ),
):
    """
    Show word, char-trigram and class statistics per dataset.
    """
    from .corpus import (
        EmojiMap,
        class_distribution,
        corpus_stats,
        format_distribution_table,
        relabel_by_emoji,
    )

    with _pipeline_errors():
        _config(ctx, {})
        corpora = _load(datasets)
        all_stats = [corpus_stats(c) for c in corpora]

        table = Table(title="Dataset statistics")
        for column, style in (("Datasets", "cyan"), ("Words", None), ("Char-trigrams", None)):
            table.add_column(column, style=style)
        for column in ("Positive", "Neutral", "Negative"):
            table.add_column(column, justify="right")
        for s in all_stats:
            p = s.to_dict()["percentages"]
            table.add_row(s.name, str(s.words), str(s.char_trigrams), f"{p['positive']}%", f"{p['neutral']}%", f"{p['negative']}%")
        console.print(table)

        summary: Dict[str, Any] = {"command": "stats", "datasets": [s.to_dict() for s in all_stats]}
        if emoji_map is not None:
            emojis = EmojiMap.load(emoji_map)
            distributions = {}
            for corpus in corpora:
                relabeled = relabel_by_emoji(corpus, emojis)
                distributions[corpus.name] = class_distribution(relabeled.corpus)
            _print_text(format_distribution_table(emojis, distributions))
            summary["emoji_distribution"] = {
                name: {c.label: v for c, v in dist.items()} for name, dist in distributions.items()
            }
        _emit(summary)


@app.command()
def skipgram(
    ctx: typer.Context,
    corpora: List[Path] = typer.Argument(..., help="TSV datasets to train on"),
    out: Path = typer.Option(..., "--out", "-o", help="Output embeddings JSON"),
    seed: Optional[int] = SEED_OPTION,
    dim: Optional[int] = typer.Option(None, "--dim", help="Embedding dimension"),
    window: Optional[int] = typer.Option(None, "--window", help="Context window radius"),
    negatives: Optional[int] = typer.Option(None, "--negatives", help="Negative samples"),
    epochs: Optional[int] = typer.Option(None, "--epochs", help="Passes over the corpus"),
):
    """
    Train skip-gram word vectors with negative sampling.
    """
    from .skipgram import train_skipgram

    cfg = _config(
        ctx,
        {
            "seed": seed,
            "skipgram.dim": dim,
            "skipgram.window": window,
            "skipgram.negatives": negatives,
            "skipgram.epochs": epochs,
        },
        seeded=True,
    )
    with _pipeline_errors():
        sentences = [s for c in _load(corpora) for s in c]
        emb = train_skipgram(sentences, cfg.skipgram)
        emb.save(out)
        _emit({"command": "skipgram", "words": len(emb), "dim": emb.dim, "loss": emb.history, "out": str(out)})


def _embeddings_for(ctx: typer.Context, embeddings: Optional[Path], corpora, cfg_overrides: Dict[str, Any]):
    """Load vectors from a file, or train them (which needs a seed)."""
    from .skipgram import WordEmbeddings, train_skipgram

    if embeddings is not None:
        return _config(ctx, cfg_overrides), WordEmbeddings.load(embeddings)
    cfg = _config(ctx, cfg_overrides, seeded=True)
    return cfg, train_skipgram([s for c in corpora for s in c], cfg.skipgram)


@app.command()
def cluster(
    ctx: typer.Context,
    corpora: List[Path] = typer.Argument(..., help="TSV datasets whose words are clustered"),
    out: Path = typer.Option(..., "--out", "-o", help="Output cluster map JSON (word -> canonical)"),
    embeddings: Optional[Path] = typer.Option(
        None, "--embeddings", "-e", help="Skip-gram vectors (trained on the corpora when omitted)"
    ),
    tau: Optional[float] = typer.Option(None, "--tau", help="Similarity threshold"),
    report: Optional[Path] = typer.Option(None, "--report", help="Write the cluster report here"),
    seed: Optional[int] = SEED_OPTION,
):
    """
    Cluster transliteration variants into canonical spellings.
    """
    from .variants import cluster_variants, format_cluster_report, save_cluster_report, word_frequencies

    with _pipeline_errors():
        loaded = _load(corpora)
        cfg, emb = _embeddings_for(ctx, embeddings, loaded, {"seed": seed, "clusters.tau": tau})
        cluster_map = cluster_variants(word_frequencies(loaded), emb, cfg.clusters.tau)
        cluster_map.save(out)
        if report is not None:
            save_cluster_report(cluster_map, report)
        _print_text(format_cluster_report(cluster_map))
        _emit(
            {
                "command": "cluster",
                "words": len(cluster_map),
                "clusters": len(cluster_map.clusters),
                "merged": len(cluster_map.merged()),
                "out": str(out),
            }
        )


@app.command()
def preprocess(
    ctx: typer.Context,
    corpus: Path = typer.Argument(..., help="TSV dataset to rewrite"),
    out: Path = typer.Option(..., "--out", "-o", help="Rewritten TSV dataset"),
    embeddings: Optional[Path] = typer.Option(
        None, "--embeddings", "-e", help="Skip-gram vectors (trained on the corpus when omitted)"
    ),
    tau: Optional[float] = typer.Option(None, "--tau", help="Similarity threshold"),
    map_out: Optional[Path] = typer.Option(None, "--map-out", help="Also write the cluster map"),
    report: Optional[Path] = typer.Option(None, "--report", help="Write the cluster report here"),
    seed: Optional[int] = SEED_OPTION,
):
    """
    Merge transliteration variants in a dataset.
    """
    from .corpus import save_dataset
    from .pipeline import distinct_tokens, preprocess_pipeline
    from .variants import format_cluster_report, save_cluster_report

    with _pipeline_errors():
        (loaded,) = _load([corpus])
        cfg, emb = _embeddings_for(ctx, embeddings, [loaded], {"seed": seed, "clusters.tau": tau})
        result = preprocess_pipeline(loaded, emb, cfg.clusters.tau)
        save_dataset(result.corpus, out)
        if map_out is not None:
            result.cluster_map.save(map_out)
        if report is not None:
            save_cluster_report(result.cluster_map, report)
        _print_text(format_cluster_report(result.cluster_map))
        _emit(
            {
                "command": "preprocess",
                "sentences": len(result.corpus),
                "tokens_before": distinct_tokens([loaded]),
                "tokens_after": distinct_tokens([result.corpus]),
                "merged": len(result.cluster_map.merged()),
                "out": str(out),
            }
        )


@app.command()
def train(
    ctx: typer.Context,
    left: Path = typer.Argument(..., help="Training TSV dataset (left twin, also the anchors)"),
    out: Path = typer.Option(..., "--out", "-o", help="Output model file"),
    partner: List[Path] = typer.Option(
        [], "--partner", "-p", help="Partner dataset(s) for the right twin; repeat to mix corpora"
    ),
    seed: Optional[int] = SEED_OPTION,
    mode: Optional[str] = typer.Option(None, "--mode", help="'sentiment' or 'emoji' alignment"),
    emoji_map: Optional[Path] = typer.Option(None, "--emoji-map", help="Emoji -> label JSON (emoji mode)"),
    no_preprocess: Optional[bool] = typer.Option(
        None, "--no-preprocess/--preprocess", help="Skip (or force) transliteration variant merging"
    ),
    margin: Optional[float] = typer.Option(None, "--margin", "-m", help="Contrastive margin in (0, 1)"),
    d: Optional[int] = typer.Option(None, "--d", help="Sentiment space dimension"),
    h: Optional[int] = typer.Option(None, "--h", help="LSTM hidden size"),
    e: Optional[int] = typer.Option(None, "--e", help="Trigram embedding size"),
    lr: Optional[float] = typer.Option(None, "--lr", help="Learning rate"),
    batch_size: Optional[int] = typer.Option(None, "--batch-size", help="Pairs per step"),
    epochs: Optional[int] = typer.Option(None, "--epochs", help="Training epochs"),
    tau: Optional[float] = typer.Option(None, "--tau", help="Variant clustering threshold"),
    pairs_per_sentence: Optional[int] = typer.Option(
        None, "--pairs-per-sentence", help="Positive (and negative) partners per sentence"
    ),
    history: Optional[Path] = typer.Option(None, "--history", help="Write per-epoch losses as JSON"),
):
    """
    Train the siamese network and write a model file.
    """
    from .corpus import EmojiMap
    from .hashing import short_hash
    from .pipeline import train_sacmt
    from .siamese import save_model

    cfg = _config(
        ctx,
        {
            "seed": seed,
            "mode": mode,
            "no_preprocess": no_preprocess,
            "train.margin": margin,
            "train.d": d,
            "train.h": h,
            "train.e": e,
            "train.lr": lr,
            "train.batch_size": batch_size,
            "train.epochs": epochs,
            "train.pairs_per_sentence": pairs_per_sentence,
            "clusters.tau": tau,
        },
        seeded=True,
    )
    if cfg.mode == "emoji" and emoji_map is None:
        raise typer.BadParameter("required with --mode emoji", ctx=ctx, param_hint="'--emoji-map'")

    with _pipeline_errors():
        (left_corpus,) = _load([left])
        partners = _load(partner)
        emojis = EmojiMap.load(emoji_map) if emoji_map is not None else None
        outcome = train_sacmt(left_corpus, partners, cfg, emojis)
        checksum = save_model(outcome.model.params, cfg.train, outcome.model.vocab, out, outcome.model.clusters)
        if history is not None:
            write_json(history, {"loss": outcome.history})
        console.print(f"[green]Wrote model {out} ({short_hash(checksum)})[/green]")
        _emit(
            {
                "command": "train",
                "pairs": outcome.pairs,
                "trigrams": outcome.model.vocab.size,
                "merged_variants": len(outcome.model.clusters),
                "dropped": outcome.dropped,
                "final_loss": outcome.history[-1] if outcome.history else None,
                "checksum": checksum,
                "out": str(out),
            }
        )


@app.command(name="eval")
def evaluate(
    ctx: typer.Context,
    model: Path = typer.Option(..., "--model", help="Model file from 'train'"),
    anchors: Path = typer.Option(..., "--anchors", help="Labeled sentences defining the class centroids"),
    test: Path = typer.Option(..., "--test", help="Labeled test dataset"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write metrics JSON"),
    rule: Optional[str] = typer.Option(None, "--rule", help="'centroid' or 'knn'"),
    k: Optional[int] = typer.Option(None, "--k", help="Neighbours for the knn rule"),
    fallback: Optional[str] = typer.Option(None, "--fallback", help="Class for zero vectors, or 'majority'"),
    name: Optional[str] = typer.Option(None, "--name", help="Row name in report tables"),
    table: bool = typer.Option(False, "--table", help="Print the metrics table"),
):
    """
    Evaluate a model with the nearest-centroid (or k-NN) rule.
    """
    from .classify import format_metrics_table
    from .pipeline import evaluate_sacmt
    from .siamese import load_model

    with _pipeline_errors():
        cfg = _config(ctx, {"classify.rule": rule, "classify.k": k, "classify.fallback": fallback})
        loaded = load_model(model)
        anchor_corpus, test_corpus = _load([anchors, test])
        metrics = evaluate_sacmt(loaded, anchor_corpus, test_corpus, cfg.classify)
        metrics.extra["name"] = name or "SACMT"
        if out is not None:
            write_json(out, metrics.to_dict())
        if table:
            _print_text(format_metrics_table({metrics.extra["name"]: metrics}))
        _emit({"command": "eval", **metrics.to_dict()})


@app.command(name="baseline-asv")
def baseline_asv(
    ctx: typer.Context,
    train_path: Path = typer.Option(..., "--train", help="Training TSV dataset"),
    test: Path = typer.Option(..., "--test", help="Test TSV dataset"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write metrics JSON"),
    model_out: Optional[Path] = typer.Option(None, "--model-out", help="Write logistic regression weights"),
    seed: Optional[int] = SEED_OPTION,
    l2: Optional[float] = typer.Option(None, "--l2", help="L2 regularization coefficient"),
    no_preprocess: Optional[bool] = typer.Option(
        None, "--no-preprocess/--preprocess", help="Skip (or force) transliteration variant merging"
    ),
    name: Optional[str] = typer.Option(None, "--name", help="Row name in report tables"),
    table: bool = typer.Option(False, "--table", help="Print the metrics table"),
):
    """
    Averaged skip-gram vectors + logistic regression baseline.
    """
    from .classify import format_metrics_table
    from .pipeline import run_asv_baseline

    cfg = _config(ctx, {"seed": seed, "baseline.l2": l2, "no_preprocess": no_preprocess}, seeded=True)
    with _pipeline_errors():
        train_corpus, test_corpus = _load([train_path, test])
        outcome = run_asv_baseline(train_corpus, test_corpus, cfg)
        outcome.metrics.extra["name"] = name or "ASV"
        if out is not None:
            write_json(out, outcome.metrics.to_dict())
        if model_out is not None:
            outcome.model.save(model_out)
        if table:
            _print_text(format_metrics_table({outcome.metrics.extra["name"]: outcome.metrics}))
        _emit({"command": "baseline-asv", **outcome.metrics.to_dict()})


@app.command()
def embed(
    ctx: typer.Context,
    corpus: Path = typer.Argument(..., help="TSV dataset to embed"),
    model: Path = typer.Option(..., "--model", help="Model file from 'train'"),
    out: Path = typer.Option(..., "--out", "-o", help="Output JSON {id: vector}"),
):
    """
    Write the sentiment vector of every sentence.
    """
    from .pipeline import rewrite_for_model
    from .siamese import load_model

    with _pipeline_errors():
        _config(ctx, {})
        loaded = load_model(model)
        (sentences,) = _load([corpus])
        sentences = rewrite_for_model(loaded, sentences)
        vectors = {s.id: loaded.embed(s).tolist() for s in sentences}
        write_json(out, {"d": loaded.params.dims[0], "vectors": vectors})
        _emit({"command": "embed", "sentences": len(vectors), "out": str(out)})


@app.command()
def split(
    ctx: typer.Context,
    corpus: Path = typer.Argument(..., help="TSV dataset to split"),
    out_dir: Path = typer.Option(..., "--out-dir", help="Directory for train/dev/test TSV files"),
    seed: Optional[int] = SEED_OPTION,
    train_ratio: Optional[float] = typer.Option(None, "--train", help="Train fraction"),
    dev_ratio: Optional[float] = typer.Option(None, "--dev", help="Dev fraction"),
    test_ratio: Optional[float] = typer.Option(None, "--test", help="Test fraction"),
):
    """
    Stratified train/dev/test split.
    """
    from .corpus import save_dataset, split as split_corpus

    cfg = _config(
        ctx,
        {"seed": seed, "split.train": train_ratio, "split.dev": dev_ratio, "split.test": test_ratio},
        seeded=True,
    )
    with _pipeline_errors():
        (loaded,) = _load([corpus])
        ratios = (cfg.split.train, cfg.split.dev, cfg.split.test)
        parts = split_corpus(loaded, ratios, cfg.seed)
        sizes = {}
        for part_name, part in zip(("train", "dev", "test"), parts):
            save_dataset(part, out_dir / f"{part_name}.tsv")
            sizes[part_name] = len(part)
        _emit({"command": "split", "sizes": sizes, "out_dir": str(out_dir)})


@app.command()
def synth(
    ctx: typer.Context,
    kind: str = typer.Argument(..., help="'separable', 'variants' or 'emoji'"),
    out_dir: Path = typer.Option(..., "--out-dir", help="Output directory"),
    seed: Optional[int] = SEED_OPTION,
    n: int = typer.Option(100, "--n", help="Size: sentences per class, repeats, or sentences"),
):
    """
    Generate synthetic datasets for smoke runs.
    """
    from .corpus import save_dataset
    from .synthetic import emoji_corpus, separable_corpora, variant_corpus

    cfg = _config(ctx, {"seed": seed}, seeded=True)
    if kind not in ("separable", "variants", "emoji"):
        raise typer.BadParameter(f"unknown kind: {kind}", ctx=ctx, param_hint="KIND")

    with _pipeline_errors():
        written: Dict[str, int] = {}
        if kind == "separable":
            train_test = {
                "train": separable_corpora(n, cfg.seed),
                "test": separable_corpora(max(1, (3 * n) // 10), cfg.seed + 1),
            }
            for part, (mixed, english) in train_test.items():
                for corpus in (mixed, english):
                    path = out_dir / f"{corpus.name}_{part}.tsv"
                    save_dataset(corpus, path)
                    written[path.name] = len(corpus)
        elif kind == "variants":
            for part, part_seed in (("train", cfg.seed), ("test", cfg.seed + 1)):
                corpus = variant_corpus(n, part_seed)
                save_dataset(corpus, out_dir / f"variants_{part}.tsv")
                written[f"variants_{part}.tsv"] = len(corpus)
        else:
            corpus, emojis = emoji_corpus(n, cfg.seed)
            save_dataset(corpus, out_dir / "emoji.tsv")
            write_json(out_dir / "emoji_map.json", emojis.to_dict())
            written["emoji.tsv"] = len(corpus)
        _emit({"command": "synth", "kind": kind, "files": written, "out_dir": str(out_dir)})


@app.command()
def report(
    ctx: typer.Context,
    metrics_files: List[Path] = typer.Argument(..., help="Metrics JSON files from eval/baseline-asv"),
    layout: str = typer.Option(
        "metrics", "--layout", help="'metrics', 'preprocess' (pairs: with, without) or 'emoji' (pairs: tags, emoji)"
    ),
    baseline: List[str] = typer.Option([], "--baseline", help="Row names treated as baselines"),
):
    """
    Render metrics files as comparison tables.
    """
    from .classify import Metrics, format_metrics_table, format_paired_table

    if layout not in ("metrics", "preprocess", "emoji"):
        raise typer.BadParameter(f"unknown layout: {layout}", ctx=ctx, param_hint="--layout")
    if layout != "metrics" and len(metrics_files) % 2:
        raise typer.BadParameter(
            "paired layouts need an even number of metrics files", ctx=ctx, param_hint="METRICS_FILES"
        )

    with _pipeline_errors():
        rows = []
        for path in metrics_files:
            data = require_object(read_json(path), path)
            try:
                rows.append((str(data.get("name") or path.stem), Metrics.from_dict(data)))
            except (KeyError, TypeError) as err:
                raise ValueError(f"{path} is not a metrics file: {err}") from err

        if layout == "metrics":
            text = format_metrics_table(dict(rows), baselines=baseline)
        elif layout == "preprocess":
            paired = {rows[i][0]: (rows[i][1], rows[i + 1][1]) for i in range(0, len(rows), 2)}
            text = format_paired_table(paired, "With preprocessing", "Without preprocessing")
        else:
            paired = {rows[i][0]: (rows[i][1], rows[i + 1][1]) for i in range(0, len(rows), 2)}
            text = format_paired_table(paired, "Sentiment tags", "Emoji", compact=True)
        _print_text(text)
        _emit({"command": "report", "layout": layout, "rows": [name for name, _ in rows], "table": text})


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the CLI and return its exit code.

    0 on success, 1 on a pipeline error, 2 on a usage error (no command,
    unknown flag, missing seed).
    """
    args = list(sys.argv[1:] if argv is None else argv)
    if not args:
        # typer's rich help would print to stdout.
        typer.echo(
            "Usage: sacmt [OPTIONS] COMMAND [ARGS]...\n"
            "Try 'sacmt --help' for help.\n\n"
            "Error: Missing command.",
            err=True,
        )
        return 2
    command = typer.main.get_command(app)
    try:
        command.main(args=args, prog_name="sacmt", standalone_mode=True)
    except SystemExit as e:
        if e.code is None:
            return 0
        return e.code if isinstance(e.code, int) else 1
    return 0


def main():
    """Entry point for the CLI."""
    sys.exit(run())


if __name__ == "__main__":
    main()
