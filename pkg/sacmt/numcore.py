"""
Numeric kernel: LSTM recurrences, bidirectional encoding, ReLU projection
and cosine similarity, each with a hand-derived backward pass.

All arrays are float64. Gate blocks are stacked in the order
input, forget, output, candidate.
"""

from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from .errors import NumericError
from .textprep import TrigramSeq

NORM_EPS = 1e-12
# Denominator floor of the per-coordinate relative error in finite_diff_check.
REL_ERROR_FLOOR = 1e-8


def sigmoid(z: np.ndarray) -> np.ndarray:
    # Split by sign so large |z| never overflows exp.
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _check_finite(name: str, *arrays: np.ndarray) -> None:
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise NumericError(f"non-finite values in {name}")


@dataclass
class LstmParams:
    """One LSTM direction: W_x (4h x e), W_h (4h x h), b (4h)."""

    W_x: np.ndarray
    W_h: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        four_h, e = self.W_x.shape
        if four_h % 4 or self.W_h.shape != (four_h, four_h // 4) or self.b.shape != (four_h,):
            raise NumericError(
                f"inconsistent LSTM shapes: W_x {self.W_x.shape}, W_h {self.W_h.shape}, b {self.b.shape}"
            )

    @property
    def input_dim(self) -> int:
        return self.W_x.shape[1]

    @property
    def hidden_dim(self) -> int:
        return self.W_h.shape[1]

    @classmethod
    def zeros(cls, e: int, h: int) -> "LstmParams":
        return cls(np.zeros((4 * h, e)), np.zeros((4 * h, h)), np.zeros(4 * h))

    @classmethod
    def init(cls, e: int, h: int, rng: np.random.Generator, forget_bias: float = 1.0) -> "LstmParams":
        """Uniform in [-1/sqrt(h), 1/sqrt(h)], forget-gate bias set to forget_bias."""
        bound = 1.0 / np.sqrt(h)
        p = cls(
            rng.uniform(-bound, bound, size=(4 * h, e)),
            rng.uniform(-bound, bound, size=(4 * h, h)),
            np.zeros(4 * h),
        )
        p.b[h : 2 * h] = forget_bias
        return p


@dataclass
class ProjectionParams:
    """Dense layer W (d x 2h) and bias b (d) in front of the ReLU."""

    W: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        if self.W.ndim != 2 or self.b.shape != (self.W.shape[0],):
            raise NumericError(f"inconsistent projection shapes: W {self.W.shape}, b {self.b.shape}")

    @property
    def output_dim(self) -> int:
        return self.W.shape[0]

    @classmethod
    def zeros(cls, d: int, h: int) -> "ProjectionParams":
        return cls(np.zeros((d, 2 * h)), np.zeros(d))

    @classmethod
    def init(cls, d: int, h: int, rng: np.random.Generator, bias: float = 0.1) -> "ProjectionParams":
        bound = 1.0 / np.sqrt(2 * h)
        return cls(rng.uniform(-bound, bound, size=(d, 2 * h)), np.full(d, bias))


def init_embedding(rows: int, e: int, rng: np.random.Generator) -> np.ndarray:
    """Trigram embedding table, uniform in [-0.1, 0.1]; row 0 is UNK."""
    return rng.uniform(-0.1, 0.1, size=(rows, e))


# LSTM ----------------------------------------------------------------------------------


def lstm_step(
    p: LstmParams, x_t: np.ndarray, h_prev: np.ndarray, c_prev: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """
    One LSTM recurrence.

    c = f * c_prev + i * g and h = o * tanh(c), with sigmoid gates i, f, o
    and tanh candidate g.

    Raises:
        NumericError: On non-finite inputs or shape mismatch
    """
    _check_finite("lstm_step input", x_t, h_prev, c_prev)
    h = p.hidden_dim
    if x_t.shape != (p.input_dim,) or h_prev.shape != (h,) or c_prev.shape != (h,):
        raise NumericError("lstm_step input shapes do not match parameters")
    h_t, c_t, _ = _lstm_cell(p, x_t, h_prev, c_prev)
    return h_t, c_t


def _lstm_cell(p: LstmParams, x_t, h_prev, c_prev):
    h = p.hidden_dim
    z = p.W_x @ x_t + p.W_h @ h_prev + p.b
    gates = np.empty(4 * h)
    gates[: 3 * h] = sigmoid(z[: 3 * h])
    gates[3 * h :] = np.tanh(z[3 * h :])
    i, f, o, g = gates[:h], gates[h : 2 * h], gates[2 * h : 3 * h], gates[3 * h :]
    c_t = f * c_prev + i * g
    h_t = o * np.tanh(c_t)
    return h_t, c_t, gates


@dataclass
class LstmTrace:
    """Cached activations of one forward pass; hs[0], cs[0] are the zero state."""

    xs: np.ndarray
    hs: np.ndarray
    cs: np.ndarray
    gates: np.ndarray

    @property
    def final(self) -> np.ndarray:
        return self.hs[-1]


def lstm_forward(p: LstmParams, xs: np.ndarray) -> LstmTrace:
    """Run an LSTM from the zero state over rows of xs (L x e)."""
    L = xs.shape[0]
    if L < 1:
        raise NumericError("cannot encode an empty sequence")
    h = p.hidden_dim
    hs = np.zeros((L + 1, h))
    cs = np.zeros((L + 1, h))
    gates = np.zeros((L, 4 * h))
    for t in range(L):
        hs[t + 1], cs[t + 1], gates[t] = _lstm_cell(p, xs[t], hs[t], cs[t])
    return LstmTrace(xs, hs, cs, gates)


def lstm_backward(p: LstmParams, trace: LstmTrace, dh_final: np.ndarray) -> Tuple[LstmParams, np.ndarray]:
    """
    Backpropagation through time from a gradient on the final hidden state.

    Returns:
        (parameter gradients, gradient w.r.t. each input row)
    """
    h = p.hidden_dim
    L = trace.xs.shape[0]
    grads = LstmParams.zeros(p.input_dim, h)
    dxs = np.zeros_like(trace.xs)
    dh = dh_final.copy()
    dc = np.zeros(h)

    for t in range(L - 1, -1, -1):
        i = trace.gates[t, :h]
        f = trace.gates[t, h : 2 * h]
        o = trace.gates[t, 2 * h : 3 * h]
        g = trace.gates[t, 3 * h :]
        tc = np.tanh(trace.cs[t + 1])

        dc = dc + dh * o * (1.0 - tc * tc)
        dz = np.concatenate(
            [
                dc * g * i * (1.0 - i),
                dc * trace.cs[t] * f * (1.0 - f),
                dh * tc * o * (1.0 - o),
                dc * i * (1.0 - g * g),
            ]
        )

        grads.W_x += np.outer(dz, trace.xs[t])
        grads.W_h += np.outer(dz, trace.hs[t])
        grads.b += dz
        dxs[t] = p.W_x.T @ dz
        dh = p.W_h.T @ dz
        dc = dc * f

    return grads, dxs


# Bidirectional encoder + projection ----------------------------------------------------


@dataclass
class BiLstmTrace:
    ids: np.ndarray
    forward: LstmTrace
    backward: LstmTrace


def bilstm_trace(
    fw_params: LstmParams, bw_params: LstmParams, emb: np.ndarray, seq: TrigramSeq
) -> BiLstmTrace:
    ids = np.asarray(seq.ids, dtype=np.int64)
    if ids.size == 0:
        raise NumericError("cannot encode an empty sequence")
    if ids.min() < 0 or ids.max() >= emb.shape[0]:
        raise NumericError("trigram id outside the embedding table")
    xs = emb[ids]
    return BiLstmTrace(ids, lstm_forward(fw_params, xs), lstm_forward(bw_params, xs[::-1]))


def bilstm_encode(
    fw_params: LstmParams, bw_params: LstmParams, emb: np.ndarray, seq: TrigramSeq
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Encode a trigram sequence twice: forward over the original order and
    backward over the reversed order, with independent parameters.

    Returns:
        (final forward hidden state, final backward hidden state)
    """
    trace = bilstm_trace(fw_params, bw_params, emb, seq)
    return trace.forward.final, trace.backward.final


def bilstm_backward(
    fw_params: LstmParams,
    bw_params: LstmParams,
    trace: BiLstmTrace,
    dfw: np.ndarray,
    dbw: np.ndarray,
    demb: np.ndarray,
) -> Tuple[LstmParams, LstmParams]:
    """Backprop both directions; embedding gradients are added into demb in place."""
    g_fw, dxs_fw = lstm_backward(fw_params, trace.forward, dfw)
    g_bw, dxs_bw = lstm_backward(bw_params, trace.backward, dbw)
    np.add.at(demb, trace.ids, dxs_fw)
    np.add.at(demb, trace.ids[::-1], dxs_bw)
    return g_fw, g_bw


def project(p: ProjectionParams, fw: np.ndarray, bw: np.ndarray) -> np.ndarray:
    """s = max(0, W [fw, bw] + b)."""
    return np.maximum(0.0, p.W @ np.concatenate([fw, bw]) + p.b)


def project_backward(
    p: ProjectionParams, fw: np.ndarray, bw: np.ndarray, ds: np.ndarray
) -> Tuple[ProjectionParams, np.ndarray, np.ndarray]:
    """
    Gradient of project; the ReLU passes gradient only where its input is > 0.

    Returns:
        (parameter gradients, d fw, d bw)
    """
    u = np.concatenate([fw, bw])
    z = p.W @ u + p.b
    dz = np.where(z > 0.0, ds, 0.0)
    du = p.W.T @ dz
    h = fw.shape[0]
    return ProjectionParams(np.outer(dz, u), dz), du[:h], du[h:]


# Cosine --------------------------------------------------------------------------------


def cosine_sim(a: np.ndarray, b: np.ndarray) -> float:
    """
    u.v / (|u| |v|), clipped to [-1, 1]; 0 if either norm is below 1e-12.

    Raises:
        NumericError: On dimension mismatch
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise NumericError(f"dimension mismatch: {a.shape} vs {b.shape}")
    aa = float(np.dot(a, a))
    bb = float(np.dot(b, b))
    if np.sqrt(aa) < NORM_EPS or np.sqrt(bb) < NORM_EPS:
        return 0.0
    # sqrt(aa * aa) == aa in IEEE arithmetic, so cos(a, a) is exactly 1.
    return float(min(1.0, max(-1.0, float(np.dot(a, b)) / np.sqrt(aa * bb))))


def cosine_grad(a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Gradient of cosine_sim w.r.t. a and b; zero where a norm vanishes."""
    na = float(np.sqrt(np.dot(a, a)))
    nb = float(np.sqrt(np.dot(b, b)))
    if na < NORM_EPS or nb < NORM_EPS:
        return np.zeros_like(a), np.zeros_like(b)
    cos = float(np.dot(a, b)) / (na * nb)
    da = b / (na * nb) - cos * a / (na * na)
    db = a / (na * nb) - cos * b / (nb * nb)
    return da, db


# Gradient utilities --------------------------------------------------------------------


def clip_by_global_norm(grads: np.ndarray, max_norm: float) -> Tuple[np.ndarray, float]:
    """
    Rescale a flat gradient so its L2 norm is at most max_norm.

    Returns:
        (clipped gradient, norm before clipping)
    """
    norm = float(np.sqrt(np.dot(grads, grads)))
    if max_norm > 0 and norm > max_norm:
        return grads * (max_norm / norm), norm
    return grads, norm


def finite_diff_check(
    loss_fn: Callable[[np.ndarray], float],
    grad_fn: Callable[[np.ndarray], np.ndarray],
    theta: np.ndarray,
    eps: float = 1e-6,
) -> float:
    """
    Compare an analytic gradient to central differences over every coordinate.

    Args:
        loss_fn: Scalar loss of the flat parameter vector
        grad_fn: Analytic gradient of loss_fn
        theta: Point to check at (not modified)
        eps: Step, in [1e-7, 1e-3]

    Returns:
        Largest coordinate-wise |g_a - g_n| / max(1e-8, |g_a| + |g_n|)

    Raises:
        ValueError: If eps is out of range
        NumericError: If the loss is not finite

    Examples:
        >>> err = finite_diff_check(lambda t: float(t @ t), lambda t: 2 * t, np.array([1.0, 2.0]))
        >>> err < 1e-8
        True
    """
    if not 1e-7 <= eps <= 1e-3:
        raise ValueError("eps must lie in [1e-7, 1e-3]")

    theta = np.array(theta, dtype=np.float64)
    analytic = np.asarray(grad_fn(theta.copy()), dtype=np.float64)
    if analytic.shape != theta.shape:
        raise NumericError("gradient shape does not match parameters")

    numeric = np.zeros_like(theta)
    shifted = theta.copy()
    for k in range(theta.size):
        shifted[k] = theta[k] + eps
        f_plus = loss_fn(shifted)
        shifted[k] = theta[k] - eps
        f_minus = loss_fn(shifted)
        shifted[k] = theta[k]
        if not (np.isfinite(f_plus) and np.isfinite(f_minus)):
            raise NumericError(f"non-finite loss at coordinate {k}")
        numeric[k] = (f_plus - f_minus) / (2.0 * eps)

    if theta.size == 0:
        return 0.0
    scale = np.maximum(REL_ERROR_FLOOR, np.abs(analytic) + np.abs(numeric))
    return float(np.max(np.abs(analytic - numeric) / scale))
