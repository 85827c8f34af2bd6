"""Twin BiLSTM encoders with shared parameters and contrastive training."""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .artifacts import read_json, write_json
from .config import TrainConfig
from .corpus import LabeledCorpus, Sentiment
from .errors import (
    ArtifactError,
    ModelFormatError,
    ModelShapeError,
    ModelVersionError,
    NumericError,
    PairingError,
    TextPrepError,
    TrainingError,
)
from .hashing import compute_payload_hash
from .numcore import (
    LstmParams,
    ProjectionParams,
    bilstm_backward,
    bilstm_trace,
    clip_by_global_norm,
    cosine_grad,
    cosine_sim,
    init_embedding,
    project,
    project_backward,
)
from .textprep import TrigramSeq, TrigramVocab, encode

logger = logging.getLogger(__name__)

MODEL_FORMAT = "sacmt-model"
MODEL_VERSION = 1


@dataclass
class SiameseParams:
    """The single parameter set read by both twins."""

    embedding: np.ndarray
    forward_lstm: LstmParams
    backward_lstm: LstmParams
    projection: ProjectionParams

    def __post_init__(self):
        e = self.embedding.shape[1]
        h = self.forward_lstm.hidden_dim
        if self.forward_lstm.input_dim != e or self.backward_lstm.input_dim != e:
            raise NumericError("LSTM input size does not match the embedding size")
        if self.backward_lstm.hidden_dim != h or self.projection.W.shape[1] != 2 * h:
            raise NumericError("hidden sizes of the encoder and projection disagree")

    @property
    def dims(self) -> Tuple[int, int, int]:
        """(d, h, e)"""
        return (self.projection.output_dim, self.forward_lstm.hidden_dim, self.embedding.shape[1])

    def named_arrays(self) -> List[Tuple[str, np.ndarray]]:
        """Every trainable array in a fixed order."""
        return [
            ("embedding", self.embedding),
            ("forward.W_x", self.forward_lstm.W_x),
            ("forward.W_h", self.forward_lstm.W_h),
            ("forward.b", self.forward_lstm.b),
            ("backward.W_x", self.backward_lstm.W_x),
            ("backward.W_h", self.backward_lstm.W_h),
            ("backward.b", self.backward_lstm.b),
            ("projection.W", self.projection.W),
            ("projection.b", self.projection.b),
        ]

    def flatten(self) -> np.ndarray:
        return np.concatenate([a.ravel() for _, a in self.named_arrays()])

    def assign_flat(self, theta: np.ndarray) -> None:
        """Overwrite every array in place from a flat vector."""
        arrays = self.named_arrays()
        if sum(a.size for _, a in arrays) != theta.size:
            raise NumericError("flat parameter vector has the wrong length")
        offset = 0
        for _, a in arrays:
            a[...] = theta[offset : offset + a.size].reshape(a.shape)
            offset += a.size

    def copy(self) -> "SiameseParams":
        return SiameseParams(
            self.embedding.copy(),
            LstmParams(self.forward_lstm.W_x.copy(), self.forward_lstm.W_h.copy(), self.forward_lstm.b.copy()),
            LstmParams(self.backward_lstm.W_x.copy(), self.backward_lstm.W_h.copy(), self.backward_lstm.b.copy()),
            ProjectionParams(self.projection.W.copy(), self.projection.b.copy()),
        )

    def zeros_like(self) -> "SiameseParams":
        p = self.copy()
        p.assign_flat(np.zeros(p.flatten().size))
        return p

    @classmethod
    def init(cls, vocab_size: int, d: int, h: int, e: int, seed: int) -> "SiameseParams":
        """Seeded initialization for a vocab of n trigrams (table has n + 1 rows)."""
        rng = np.random.default_rng(seed)
        return cls(
            init_embedding(vocab_size + 1, e, rng),
            LstmParams.init(e, h, rng),
            LstmParams.init(e, h, rng),
            ProjectionParams.init(d, h, rng),
        )


@dataclass(frozen=True)
class Pair:
    """A training pair; y = +1 iff both sentences carry the same class."""

    left: TrigramSeq
    right: TrigramSeq
    y: int
    left_label: Optional[Sentiment] = None
    right_label: Optional[Sentiment] = None
    left_id: str = ""
    right_id: str = ""

    def __post_init__(self):
        if self.y not in (-1, 1):
            raise PairingError(f"pair label must be -1 or +1, got {self.y}")


# Forward pass --------------------------------------------------------------------------


def forward(p: SiameseParams, seq: TrigramSeq) -> np.ndarray:
    """Sentiment vector s = project(bilstm_encode(seq)); element-wise >= 0."""
    trace = bilstm_trace(p.forward_lstm, p.backward_lstm, p.embedding, seq)
    return project(p.projection, trace.forward.final, trace.backward.final)


class SiameseNetwork:
    """Two twins over one parameter set; left and right are the same function."""

    def __init__(self, params: SiameseParams):
        self.params = params

    def left(self, seq: TrigramSeq) -> np.ndarray:
        return forward(self.params, seq)

    def right(self, seq: TrigramSeq) -> np.ndarray:
        return forward(self.params, seq)

    def similarity(self, a: TrigramSeq, b: TrigramSeq) -> float:
        return cosine_sim(self.left(a), self.right(b))


def energy(p: SiameseParams, c: TrigramSeq, r: TrigramSeq) -> float:
    """Euclidean distance between the two sentiment vectors (diagnostic only)."""
    return float(np.linalg.norm(forward(p, c) - forward(p, r)))


# Loss ----------------------------------------------------------------------------------


def pair_loss(a_i: np.ndarray, a_j: np.ndarray, y: int, m: float) -> float:
    """
    Contrastive cosine loss.

    1 - cos(a_i, a_j) for y = +1; max(0, cos(a_i, a_j) - m) for y = -1.
    """
    cos = cosine_sim(a_i, a_j)
    if y == 1:
        return 1.0 - cos
    return max(0.0, cos - m)


def _pair_loss_grad(cos: float, y: int, m: float) -> float:
    """d loss / d cos; the hinge is inactive at cos == m."""
    if y == 1:
        return -1.0
    return 1.0 if cos > m else 0.0


def batch_loss(p: SiameseParams, pairs: Sequence[Pair], m: float) -> float:
    """Sum of pair losses over the batch."""
    if not pairs:
        raise PairingError("batch must contain at least one pair")
    return math.fsum(pair_loss(forward(p, pair.left), forward(p, pair.right), pair.y, m) for pair in pairs)


def _accumulate_sequence_grad(
    p: SiameseParams, grads: SiameseParams, trace, ds: np.ndarray
) -> None:
    fw, bw = trace.forward.final, trace.backward.final
    g_proj, dfw, dbw = project_backward(p.projection, fw, bw, ds)
    grads.projection.W += g_proj.W
    grads.projection.b += g_proj.b
    g_fw, g_bw = bilstm_backward(p.forward_lstm, p.backward_lstm, trace, dfw, dbw, grads.embedding)
    for target, g in ((grads.forward_lstm, g_fw), (grads.backward_lstm, g_bw)):
        target.W_x += g.W_x
        target.W_h += g.W_h
        target.b += g.b


def batch_loss_and_grad(
    p: SiameseParams, pairs: Sequence[Pair], m: float
) -> Tuple[float, SiameseParams]:
    """
    Batch loss and its gradient with respect to the shared parameters.

    Both twins' contributions accumulate into the same gradient arrays,
    in batch order.
    """
    losses, grads = _pair_terms(p, pairs, m)
    return math.fsum(losses), grads


def _pair_terms(
    p: SiameseParams, pairs: Sequence[Pair], m: float
) -> Tuple[List[float], SiameseParams]:
    if not pairs:
        raise PairingError("batch must contain at least one pair")

    grads = p.zeros_like()
    losses: List[float] = []
    for pair in pairs:
        left = bilstm_trace(p.forward_lstm, p.backward_lstm, p.embedding, pair.left)
        right = bilstm_trace(p.forward_lstm, p.backward_lstm, p.embedding, pair.right)
        a_i = project(p.projection, left.forward.final, left.backward.final)
        a_j = project(p.projection, right.forward.final, right.backward.final)

        cos = cosine_sim(a_i, a_j)
        losses.append(1.0 - cos if pair.y == 1 else max(0.0, cos - m))

        dcos = _pair_loss_grad(cos, pair.y, m)
        if dcos == 0.0:
            continue
        da_i, da_j = cosine_grad(a_i, a_j)
        _accumulate_sequence_grad(p, grads, left, dcos * da_i)
        _accumulate_sequence_grad(p, grads, right, dcos * da_j)

    return losses, grads


# Pair construction ---------------------------------------------------------------------


def make_pairs(
    left: LabeledCorpus,
    right: LabeledCorpus,
    vocab: TrigramVocab,
    seed: int,
    per_sentence: int = 1,
) -> List[Pair]:
    """
    Align each left sentence with same-class (+1) and different-class (-1)
    right sentences, sampled uniformly.

    Each left sentence gets ``per_sentence`` positives and as many
    negatives, so the output has 2 * per_sentence * |left| pairs. A sentence
    never pairs with itself (identity is (source, id)), which makes
    left = right the monolingual setting.

    Raises:
        PairingError: If some left class has no admissible partner in right
    """
    rng = np.random.default_rng(seed)
    right_by_class = right.by_class()
    encoded: Dict[Tuple[str, str], TrigramSeq] = {}

    def seq_of(sentence) -> TrigramSeq:
        if sentence.key not in encoded:
            try:
                encoded[sentence.key] = encode(sentence, vocab)
            except TextPrepError as e:
                raise PairingError(str(e)) from e
        return encoded[sentence.key]

    pairs: List[Pair] = []
    for sentence in left:
        same = [s for s in right_by_class[sentence.label] if s.key != sentence.key]
        other = [s for c, group in right_by_class.items() if c != sentence.label for s in group]
        if not same:
            raise PairingError(f"no same-class partner for class {sentence.label.label}")
        if not other:
            raise PairingError(f"no different-class partner for class {sentence.label.label}")

        for _ in range(per_sentence):
            partner = same[int(rng.integers(len(same)))]
            pairs.append(
                Pair(seq_of(sentence), seq_of(partner), 1, sentence.label, partner.label, sentence.id, partner.id)
            )
            partner = other[int(rng.integers(len(other)))]
            pairs.append(
                Pair(seq_of(sentence), seq_of(partner), -1, sentence.label, partner.label, sentence.id, partner.id)
            )
    return pairs


# Training ------------------------------------------------------------------------------


@dataclass
class TrainResult:
    params: SiameseParams
    history: List[float] = field(default_factory=list)


def train(
    p: SiameseParams,
    pairs: Sequence[Pair],
    cfg: TrainConfig,
    resample: Optional[Callable[[int], Sequence[Pair]]] = None,
) -> TrainResult:
    """
    Mini-batch gradient descent on the summed contrastive loss.

    Pairs are shuffled every epoch by a generator seeded from cfg.seed;
    gradients are clipped by global norm. The input parameters are not
    modified.

    Args:
        p: Initial parameters
        pairs: Training pairs
        cfg: Training configuration
        resample: Optional epoch -> pairs callback for epochs after the first

    Returns:
        Trained parameters and the total training loss of every epoch

    Raises:
        TrainingError: If a batch loss or gradient is not finite
    """
    if not pairs:
        raise PairingError("no training pairs")

    params = p.copy()
    theta = params.flatten()
    rng = np.random.default_rng(cfg.seed)
    history: List[float] = []

    for epoch in range(cfg.epochs):
        if resample is not None and epoch > 0:
            pairs = resample(epoch)
        order = rng.permutation(len(pairs))
        epoch_losses: List[float] = []

        for batch_index, start in enumerate(range(0, len(pairs), cfg.batch_size)):
            batch = [pairs[int(k)] for k in order[start : start + cfg.batch_size]]
            losses, grads = _pair_terms(params, batch, cfg.margin)
            g = grads.flatten()
            if not np.all(np.isfinite(losses)) or not np.all(np.isfinite(g)):
                raise TrainingError("non-finite loss", epoch=epoch, batch=batch_index)
            g, _ = clip_by_global_norm(g, cfg.clip_norm)
            theta -= cfg.lr * g
            params.assign_flat(theta)
            epoch_losses.extend(losses)

        epoch_loss = math.fsum(epoch_losses)
        if history and epoch_loss == history[-1]:
            logger.warning(
                "epoch %d/%d loss %.6f unchanged from the previous epoch; the encoder may have collapsed",
                epoch + 1,
                cfg.epochs,
                epoch_loss,
            )
        history.append(epoch_loss)
        logger.info("epoch %d/%d loss %.6f", epoch + 1, cfg.epochs, epoch_loss)

    return TrainResult(params=params, history=history)


# Model file ----------------------------------------------------------------------------


@dataclass
class SacmtModel:
    """Everything needed to embed new sentences."""

    params: SiameseParams
    config: TrainConfig
    vocab: TrigramVocab
    clusters: Dict[str, str] = field(default_factory=dict)

    @property
    def network(self) -> SiameseNetwork:
        return SiameseNetwork(self.params)

    def embed(self, sentence) -> np.ndarray:
        return forward(self.params, encode(sentence, self.vocab))


def _param_payload(params: SiameseParams) -> Dict[str, Dict[str, list]]:
    return {name: {"shape": list(a.shape), "data": a.ravel().tolist()} for name, a in params.named_arrays()}


def save_model(
    params: SiameseParams,
    cfg: TrainConfig,
    vocab: TrigramVocab,
    path: Path,
    clusters: Optional[Dict[str, str]] = None,
) -> str:
    """
    Atomically write a versioned model file.

    Floats are written with their shortest round-trip repr, so a load
    reproduces every parameter bit for bit.

    Returns:
        Checksum of the parameter payload
    """
    d, h, e = params.dims
    payload = _param_payload(params)
    checksum = compute_payload_hash(payload)
    write_json(
        path,
        {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "d": d,
            "h": h,
            "e": e,
            "config": cfg.model_dump(),
            "vocab": vocab.to_dict(),
            "clusters": {w: c for w, c in sorted((clusters or {}).items()) if w != c},
            "params": payload,
            "checksum": checksum,
        },
    )
    return checksum


def load_model(path: Path) -> SacmtModel:
    """
    Load a model file; d, h and e are read from the file.

    Raises:
        ModelFormatError: Truncated, corrupted or checksum mismatch
        ModelVersionError: Unsupported format version
        ModelShapeError: Arrays disagree with the declared dimensions
    """
    try:
        data = read_json(path)
    except ArtifactError as e:
        raise ModelFormatError(str(e)) from e
    if not isinstance(data, dict) or data.get("format") != MODEL_FORMAT:
        raise ModelFormatError(f"{path} is not a sacmt model file")
    if data.get("version") != MODEL_VERSION:
        raise ModelVersionError(f"unsupported model version {data.get('version')} (expected {MODEL_VERSION})")

    try:
        d, h, e = int(data["d"]), int(data["h"]), int(data["e"])
        payload = data["params"]
        checksum = data["checksum"]
        vocab = TrigramVocab.from_dict(data["vocab"])
        cfg = TrainConfig(**data["config"])
        clusters = dict(data.get("clusters", {}))
    except (KeyError, TypeError, ValueError, TextPrepError) as err:
        raise ModelFormatError(f"malformed model file {path}: {err}") from err

    if compute_payload_hash(payload) != checksum:
        raise ModelFormatError(f"checksum mismatch in {path}")

    expected = {
        "embedding": (vocab.size + 1, e),
        "forward.W_x": (4 * h, e),
        "forward.W_h": (4 * h, h),
        "forward.b": (4 * h,),
        "backward.W_x": (4 * h, e),
        "backward.W_h": (4 * h, h),
        "backward.b": (4 * h,),
        "projection.W": (d, 2 * h),
        "projection.b": (d,),
    }
    arrays: Dict[str, np.ndarray] = {}
    for name, shape in expected.items():
        entry = payload.get(name) if isinstance(payload, dict) else None
        if entry is None:
            raise ModelFormatError(f"missing parameter array {name}")
        if not isinstance(entry, dict) or not isinstance(entry.get("shape", []), list):
            raise ModelFormatError(f"malformed parameter array {name} in {path}")
        if tuple(entry.get("shape", ())) != shape:
            raise ModelShapeError(f"{name} has shape {entry.get('shape')}, expected {list(shape)}")
        try:
            values = np.asarray(entry.get("data", []), dtype=np.float64)
        except (TypeError, ValueError) as err:
            raise ModelFormatError(f"malformed parameter array {name} in {path}: {err}") from err
        if values.size != int(np.prod(shape)):
            raise ModelShapeError(f"{name} holds {values.size} values, expected {int(np.prod(shape))}")
        arrays[name] = values.reshape(shape)

    params = SiameseParams(
        arrays["embedding"],
        LstmParams(arrays["forward.W_x"], arrays["forward.W_h"], arrays["forward.b"]),
        LstmParams(arrays["backward.W_x"], arrays["backward.W_h"], arrays["backward.b"]),
        ProjectionParams(arrays["projection.W"], arrays["projection.b"]),
    )
    return SacmtModel(params=params, config=cfg, vocab=vocab, clusters=clusters)
