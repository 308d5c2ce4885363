"""Minimal decoder-only transformer with trace capture and manual backprop.

Architecture: learned token + position embeddings feeding pre-norm blocks
(norm -> causal multi-head attention -> residual; norm -> GELU feed-forward
-> residual), a final layer norm, and an untied LM head. The feed-forward
sublayer output of each block, captured *before* it is added back to the
residual stream, is the supervision interface used everywhere else in the
package.

All math is float64; checkpoints round to float32 on disk. Forward and
backward are hand-written numpy so gradients exist for the network
parameters, for the captured per-layer interface values, and (on request)
for selected internal activations. Reverse-mode correctness is pinned by
finite-difference tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import checkpoint
from .errors import ConfigError, EmptyMask, NumericalError, ShapeError, TokenRangeError

LN_EPS = 1e-5
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8
_GELU_C = math.sqrt(2.0 / math.pi)


# ---------------------------------------------------------------------------
# configuration and parameters


@dataclass(frozen=True)
class LmConfig:
    n_layers: int
    hidden_dim: int
    n_heads: int
    vocab_size: int
    max_seq: int
    seed: int

    def __post_init__(self):
        if self.n_layers < 1:
            raise ConfigError("n_layers must be >= 1")
        if self.vocab_size < 2:
            raise ConfigError("vocab_size must be >= 2")
        if self.n_heads < 1 or self.hidden_dim % self.n_heads != 0:
            raise ConfigError("hidden_dim must be divisible by n_heads")
        if self.max_seq < 1:
            raise ConfigError("max_seq must be >= 1")

    @property
    def ffn_dim(self) -> int:
        return 4 * self.hidden_dim

    @property
    def head_dim(self) -> int:
        return self.hidden_dim // self.n_heads

    def to_dict(self) -> dict:
        return {
            "n_layers": self.n_layers,
            "hidden_dim": self.hidden_dim,
            "n_heads": self.n_heads,
            "vocab_size": self.vocab_size,
            "max_seq": self.max_seq,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LmConfig":
        return cls(**{k: int(d[k]) for k in ("n_layers", "hidden_dim", "n_heads", "vocab_size", "max_seq", "seed")})


def param_shapes(config: LmConfig) -> dict[str, tuple[int, ...]]:
    """Canonical parameter names and shapes, in construction order."""
    d, f, v = config.hidden_dim, config.ffn_dim, config.vocab_size
    shapes: dict[str, tuple[int, ...]] = {
        "tok_emb": (v, d),
        "pos_emb": (config.max_seq, d),
    }
    for i in range(config.n_layers):
        p = f"block{i}."
        shapes[p + "ln1.g"] = (d,)
        shapes[p + "ln1.b"] = (d,)
        shapes[p + "attn.wq"] = (d, d)
        shapes[p + "attn.wk"] = (d, d)
        shapes[p + "attn.wv"] = (d, d)
        shapes[p + "attn.wo"] = (d, d)
        shapes[p + "ln2.g"] = (d,)
        shapes[p + "ln2.b"] = (d,)
        shapes[p + "ffn.w1"] = (d, f)
        shapes[p + "ffn.b1"] = (f,)
        shapes[p + "ffn.w2"] = (f, d)
        shapes[p + "ffn.b2"] = (d,)
    shapes["final_ln.g"] = (d,)
    shapes["final_ln.b"] = (d,)
    shapes["lm_head"] = (d, v)
    return shapes


def block_param_names(config: LmConfig, layer: int) -> tuple[str, ...]:
    """All parameter names of block ``layer`` (1-based depth index)."""
    if not 1 <= layer <= config.n_layers:
        raise ConfigError(f"layer {layer} outside 1..{config.n_layers}")
    prefix = f"block{layer - 1}."
    return tuple(n for n in param_shapes(config) if n.startswith(prefix))


class LmParams:
    """Model parameters: a config plus a name -> float64 array mapping."""

    def __init__(self, config: LmConfig, tensors: dict[str, np.ndarray]):
        self.config = config
        self.tensors = tensors

    def copy(self) -> "LmParams":
        return LmParams(self.config, {k: v.copy() for k, v in self.tensors.items()})

    def checksum(self) -> str:
        """Content hash at checkpoint (float32) precision."""
        return checkpoint.blob_checksum(self.tensors)

    @property
    def param_count(self) -> int:
        return sum(t.size for t in self.tensors.values())

    def save(self, path_prefix, extra_metadata: dict | None = None):
        meta = {"kind": "lm-checkpoint", "config": self.config.to_dict()}
        if extra_metadata:
            meta.update(extra_metadata)
        return checkpoint.save(path_prefix, self.tensors, meta)

    @classmethod
    def load(cls, path_prefix) -> "LmParams":
        tensors, meta = checkpoint.load(path_prefix)
        return cls(LmConfig.from_dict(meta["config"]), tensors)


def init_lm(config: LmConfig) -> LmParams:
    """Deterministic initialization: same seed, bitwise-identical parameters."""
    rng = np.random.default_rng(config.seed)
    scale = 0.02
    out_scale = scale / math.sqrt(2.0 * config.n_layers)
    tensors: dict[str, np.ndarray] = {}
    for name, shape in param_shapes(config).items():
        leaf = name.rsplit(".", 1)[-1]
        if leaf in ("g",):
            tensors[name] = np.ones(shape)
        elif leaf in ("b", "b1", "b2"):
            tensors[name] = np.zeros(shape)
        elif leaf in ("wo", "w2"):
            tensors[name] = rng.normal(0.0, out_scale, shape)
        else:
            tensors[name] = rng.normal(0.0, scale, shape)
    return LmParams(config, tensors)


# ---------------------------------------------------------------------------
# batches and traces


@dataclass
class TokenBatch:
    """Token-level batch: inputs, next-token targets, and the supervised mask."""

    input_ids: np.ndarray
    target_ids: np.ndarray
    supervised_mask: np.ndarray

    def __post_init__(self):
        self.input_ids = np.asarray(self.input_ids, dtype=np.int64)
        self.target_ids = np.asarray(self.target_ids, dtype=np.int64)
        self.supervised_mask = np.asarray(self.supervised_mask, dtype=bool)
        if not (self.input_ids.shape == self.target_ids.shape == self.supervised_mask.shape):
            raise ShapeError("input_ids, target_ids, supervised_mask must share one shape")
        if self.input_ids.ndim != 2:
            raise ShapeError("token batches are 2-D (examples x positions)")

    @property
    def n_examples(self) -> int:
        return self.input_ids.shape[0]

    @property
    def seq_len(self) -> int:
        return self.input_ids.shape[1]

    def rows(self, idx) -> "TokenBatch":
        return TokenBatch(self.input_ids[idx], self.target_ids[idx], self.supervised_mask[idx])

    def validate_for(self, config: LmConfig):
        if self.input_ids.min() < 0 or self.input_ids.max() >= config.vocab_size:
            raise TokenRangeError("input token id outside vocabulary")
        if self.target_ids.min() < 0 or self.target_ids.max() >= config.vocab_size:
            raise TokenRangeError("target token id outside vocabulary")
        if self.seq_len > config.max_seq:
            raise ShapeError(f"sequence length {self.seq_len} exceeds max_seq {config.max_seq}")

    def flat_targets(self) -> np.ndarray:
        return self.target_ids.reshape(-1)

    def flat_mask(self) -> np.ndarray:
        return self.supervised_mask.reshape(-1)


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(a)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class LayerTrace:
    """Frozen snapshot of one forward pass, flattened to token rows.

    ``per_layer[i]`` is block i's feed-forward output before residual
    addition (the supervision interface), ``final_hidden`` the post-norm
    state that multiplies the LM head, ``logits`` the head output.
    """

    per_layer: tuple[np.ndarray, ...]
    final_hidden: np.ndarray
    logits: np.ndarray
    batch_size: int
    seq_len: int

    @property
    def n_tokens(self) -> int:
        return self.batch_size * self.seq_len

    def interface(self, layer: int) -> np.ndarray:
        """Supervision-interface capture for 1-based block index ``layer``."""
        return self.per_layer[layer - 1]


# ---------------------------------------------------------------------------
# forward / backward primitives


def _layernorm_fwd(x, g, b):
    mu = x.mean(axis=-1, keepdims=True)
    xc = x - mu
    var = (xc * xc).mean(axis=-1, keepdims=True)
    inv = 1.0 / np.sqrt(var + LN_EPS)
    xhat = xc * inv
    return g * xhat + b, (xhat, inv, g)


def _layernorm_bwd(dy, cache):
    xhat, inv, g = cache
    dg = np.sum(dy * xhat, axis=tuple(range(dy.ndim - 1)))
    db = np.sum(dy, axis=tuple(range(dy.ndim - 1)))
    dxhat = dy * g
    m1 = dxhat.mean(axis=-1, keepdims=True)
    m2 = (dxhat * xhat).mean(axis=-1, keepdims=True)
    dx = inv * (dxhat - m1 - xhat * m2)
    return dx, dg, db


def _gelu_fwd(x):
    t = np.tanh(_GELU_C * (x + 0.044715 * x**3))
    return 0.5 * x * (1.0 + t), t


def _gelu_bwd(dy, x, t):
    dt = _GELU_C * (1.0 + 3.0 * 0.044715 * x * x) * (1.0 - t * t)
    return dy * (0.5 * (1.0 + t) + 0.5 * x * dt)


def _proj_fwd(x, w):
    # (B, T, in) @ (in, out) as a single GEMM
    b, t, din = x.shape
    return (x.reshape(b * t, din) @ w).reshape(b, t, w.shape[1])


def _proj_bwd(dy, x, w):
    b, t, dout = dy.shape
    dyf = dy.reshape(b * t, dout)
    xf = x.reshape(b * t, x.shape[2])
    return (dyf @ w.T).reshape(x.shape), xf.T @ dyf


def _split_heads(x, n_heads):
    b, t, d = x.shape
    return x.reshape(b, t, n_heads, d // n_heads).transpose(0, 2, 1, 3)


def _merge_heads(x):
    b, h, t, dh = x.shape
    return x.transpose(0, 2, 1, 3).reshape(b, t, h * dh)


def _attention_fwd(a, p, prefix, n_heads):
    wq, wk, wv, wo = (p[prefix + s] for s in ("attn.wq", "attn.wk", "attn.wv", "attn.wo"))
    q = _split_heads(_proj_fwd(a, wq), n_heads)
    k = _split_heads(_proj_fwd(a, wk), n_heads)
    v = _split_heads(_proj_fwd(a, wv), n_heads)
    t = a.shape[1]
    scores = q @ k.transpose(0, 1, 3, 2) / math.sqrt(q.shape[-1])
    scores = np.where(np.tril(np.ones((t, t), dtype=bool)), scores, -np.inf)
    scores -= scores.max(axis=-1, keepdims=True)
    e = np.exp(scores)
    attn = e / e.sum(axis=-1, keepdims=True)
    ctx = _merge_heads(attn @ v)
    out = _proj_fwd(ctx, wo)
    return out, (a, q, k, v, attn, ctx)


def _attention_bwd(dout, cache, p, prefix, n_heads, grads):
    a, q, k, v, attn, ctx = cache
    wq, wk, wv, wo = (p[prefix + s] for s in ("attn.wq", "attn.wk", "attn.wv", "attn.wo"))
    dctx, dwo = _proj_bwd(dout, ctx, wo)
    grads[prefix + "attn.wo"] += dwo
    dctx_h = _split_heads(dctx, n_heads)
    dattn = dctx_h @ v.transpose(0, 1, 3, 2)
    dv = attn.transpose(0, 1, 3, 2) @ dctx_h
    # softmax backward; masked entries have attn == 0 so they stay silent
    dscores = attn * (dattn - np.sum(dattn * attn, axis=-1, keepdims=True))
    dscores /= math.sqrt(q.shape[-1])
    dq = dscores @ k
    dk = dscores.transpose(0, 1, 3, 2) @ q
    da = np.zeros_like(a)
    for dmat, w, name in ((dq, wq, "attn.wq"), (dk, wk, "attn.wk"), (dv, wv, "attn.wv")):
        dx, dw = _proj_bwd(_merge_heads(dmat), a, w)
        grads[prefix + name] += dw
        da += dx
    return da, dctx


def _forward(params: LmParams, input_ids: np.ndarray, keep_cache: bool):
    """Run the network; returns (logits, per-layer captures, final hidden, cache)."""
    cfg = params.config
    p = params.tensors
    b, t = input_ids.shape
    x = p["tok_emb"][input_ids] + p["pos_emb"][:t][None, :, :]
    per_layer = []
    block_caches = []
    for i in range(cfg.n_layers):
        prefix = f"block{i}."
        a_in, ln1_cache = _layernorm_fwd(x, p[prefix + "ln1.g"], p[prefix + "ln1.b"])
        attn_out, attn_cache = _attention_fwd(a_in, p, prefix, cfg.n_heads)
        x1 = x + attn_out
        f_in, ln2_cache = _layernorm_fwd(x1, p[prefix + "ln2.g"], p[prefix + "ln2.b"])
        h_pre = _proj_fwd(f_in, p[prefix + "ffn.w1"]) + p[prefix + "ffn.b1"]
        h_act, gelu_t = _gelu_fwd(h_pre)
        h = _proj_fwd(h_act, p[prefix + "ffn.w2"]) + p[prefix + "ffn.b2"]
        per_layer.append(h)
        x = x1 + h
        if keep_cache:
            block_caches.append((ln1_cache, attn_cache, ln2_cache, f_in, h_pre, gelu_t, h_act))
    final_hidden, final_cache = _layernorm_fwd(x, p["final_ln.g"], p["final_ln.b"])
    logits = _proj_fwd(final_hidden, p["lm_head"])
    cache = (input_ids, block_caches, final_cache, final_hidden) if keep_cache else None
    return logits, per_layer, final_hidden, cache


def _backward(params: LmParams, cache, d_logits, d_per_layer, collect_internals=False):
    """Reverse pass. ``d_per_layer`` maps 0-based block index to the direct
    gradient seed on that block's captured interface value."""
    cfg = params.config
    p = params.tensors
    input_ids, block_caches, final_cache, final_hidden = cache
    b, t = input_ids.shape
    grads = {name: np.zeros_like(arr) for name, arr in p.items()}
    interface_grads: list[np.ndarray | None] = [None] * cfg.n_layers
    internals: dict[tuple[str, int], np.ndarray] = {}

    dfinal, d_head = _proj_bwd(d_logits, final_hidden, p["lm_head"])
    grads["lm_head"] += d_head
    dx, dg, db = _layernorm_bwd(dfinal, final_cache)
    grads["final_ln.g"] += dg
    grads["final_ln.b"] += db

    for i in reversed(range(cfg.n_layers)):
        prefix = f"block{i}."
        ln1_cache, attn_cache, ln2_cache, f_in, h_pre, gelu_t, h_act = block_caches[i]
        dh = dx + d_per_layer[i] if i in d_per_layer else dx.copy()
        interface_grads[i] = dh
        # feed-forward
        dh_act, dw2 = _proj_bwd(dh, h_act, p[prefix + "ffn.w2"])
        grads[prefix + "ffn.w2"] += dw2
        grads[prefix + "ffn.b2"] += dh.sum(axis=(0, 1))
        if collect_internals:
            internals[("ffn_hidden", i)] = dh_act
        dh_pre = _gelu_bwd(dh_act, h_pre, gelu_t)
        df_in, dw1 = _proj_bwd(dh_pre, f_in, p[prefix + "ffn.w1"])
        grads[prefix + "ffn.w1"] += dw1
        grads[prefix + "ffn.b1"] += dh_pre.sum(axis=(0, 1))
        dx1_from_ln2, dg2, db2 = _layernorm_bwd(df_in, ln2_cache)
        grads[prefix + "ln2.g"] += dg2
        grads[prefix + "ln2.b"] += db2
        dx1 = dx + dx1_from_ln2
        # attention
        da_in, dctx = _attention_bwd(dx1, attn_cache, p, prefix, cfg.n_heads, grads)
        if collect_internals:
            internals[("attn_context", i)] = dctx
        dx0_from_ln1, dg1, db1 = _layernorm_bwd(da_in, ln1_cache)
        grads[prefix + "ln1.g"] += dg1
        grads[prefix + "ln1.b"] += db1
        dx = dx1 + dx0_from_ln1

    np.add.at(grads["tok_emb"], input_ids, dx)
    grads["pos_emb"][:t] += dx.sum(axis=0)
    return grads, interface_grads, internals


# ---------------------------------------------------------------------------
# public operations


def forward_with_trace(params: LmParams, batch: TokenBatch) -> LayerTrace:
    """Forward pass capturing the supervision interface of every block.

    The returned trace holds frozen copies: mutating the model afterwards
    never changes a trace already in hand.
    """
    batch.validate_for(params.config)
    logits, per_layer, final_hidden, _ = _forward(params, batch.input_ids, keep_cache=False)
    b, t = batch.input_ids.shape
    d = params.config.hidden_dim
    return LayerTrace(
        per_layer=tuple(_frozen(h.reshape(b * t, d)) for h in per_layer),
        final_hidden=_frozen(final_hidden.reshape(b * t, d)),
        logits=_frozen(logits.reshape(b * t, params.config.vocab_size)),
        batch_size=b,
        seq_len=t,
    )


def forward_logits(params: LmParams, batch: TokenBatch) -> np.ndarray:
    """Logits only, shape (examples, positions, vocab); used by evaluation."""
    batch.validate_for(params.config)
    logits, _, _, _ = _forward(params, batch.input_ids, keep_cache=False)
    return logits


def softmax_rows(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def cross_entropy(logits_flat, targets_flat, mask_flat) -> tuple[float, np.ndarray]:
    """Mean token-level cross-entropy over supervised positions plus its
    logit gradient (zero rows at unsupervised positions)."""
    if not mask_flat.any():
        raise EmptyMask("no supervised positions")
    z = logits_flat - logits_flat.max(axis=-1, keepdims=True)
    logsumexp = np.log(np.exp(z).sum(axis=-1))
    rows = np.arange(logits_flat.shape[0])
    nll = logsumexp - z[rows, targets_flat]
    n_sup = int(mask_flat.sum())
    loss = float(nll[mask_flat].sum() / n_sup)
    probs = softmax_rows(logits_flat)
    dlogits = probs
    dlogits[rows, targets_flat] -= 1.0
    dlogits *= mask_flat[:, None] / n_sup
    return loss, dlogits


def lm_loss(trace: LayerTrace, batch: TokenBatch) -> float:
    loss, _ = cross_entropy(np.asarray(trace.logits), batch.flat_targets(), batch.flat_mask())
    return loss


@dataclass
class LossSeeds:
    """A scalar loss plus its direct gradients on traced values.

    ``d_logits`` is (tokens, vocab) or None; ``d_per_layer`` maps 0-based
    block index to a (tokens, hidden) seed on that block's captured
    interface value.
    """

    value: float
    d_logits: np.ndarray | None = None
    d_per_layer: dict[int, np.ndarray] = field(default_factory=dict)


LossSpec = Callable[[LayerTrace, TokenBatch], LossSeeds]


def cross_entropy_spec(trace: LayerTrace, batch: TokenBatch) -> LossSeeds:
    loss, dlogits = cross_entropy(np.asarray(trace.logits), batch.flat_targets(), batch.flat_mask())
    return LossSeeds(value=loss, d_logits=dlogits)


@dataclass
class BackwardResult:
    loss: float
    grads: dict[str, np.ndarray]
    interface_grads: list[np.ndarray]
    internals: dict[tuple[str, int], np.ndarray]
    trace: LayerTrace


def backward(params: LmParams, batch: TokenBatch, loss_spec: LossSpec,
             collect_internals: bool = False) -> BackwardResult:
    """Gradients of an arbitrary traced-value loss for every parameter.

    ``loss_spec`` sees the frozen trace and returns the loss value plus its
    direct gradients on the traced values; this function chains them
    through the full network. ``interface_grads`` holds the total gradient
    at every block's supervision interface (flattened to token rows).
    """
    batch.validate_for(params.config)
    logits, per_layer, final_hidden, cache = _forward(params, batch.input_ids, keep_cache=True)
    b, t = batch.input_ids.shape
    cfg = params.config
    trace = LayerTrace(
        per_layer=tuple(_frozen(h.reshape(b * t, cfg.hidden_dim)) for h in per_layer),
        final_hidden=_frozen(final_hidden.reshape(b * t, cfg.hidden_dim)),
        logits=_frozen(logits.reshape(b * t, cfg.vocab_size)),
        batch_size=b,
        seq_len=t,
    )
    seeds = loss_spec(trace, batch)
    if not math.isfinite(seeds.value):
        raise NumericalError(f"loss is not finite: {seeds.value}")
    d_logits = np.zeros_like(logits)
    if seeds.d_logits is not None:
        d_logits = np.asarray(seeds.d_logits).reshape(logits.shape)
    d_per_layer = {
        i: np.asarray(g).reshape(b, t, cfg.hidden_dim) for i, g in seeds.d_per_layer.items()
    }
    grads, iface, internals = _backward(params, cache, d_logits, d_per_layer, collect_internals)
    iface_flat = [g.reshape(b * t, cfg.hidden_dim) for g in iface]
    return BackwardResult(seeds.value, grads, iface_flat, internals, trace)


# ---------------------------------------------------------------------------
# optimization


@dataclass(frozen=True)
class TrainConfig:
    steps: int
    batch_size: int
    learning_rate: float
    seed: int = 0

    def __post_init__(self):
        if self.steps < 0 or self.batch_size < 1 or self.learning_rate <= 0:
            raise ConfigError("steps >= 0, batch_size >= 1, learning_rate > 0 required")

    def to_dict(self) -> dict:
        return {
            "steps": self.steps,
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
            "seed": self.seed,
        }


class Adam:
    """Adam with fixed (beta1, beta2, eps) over a named tensor subset."""

    def __init__(self, names, learning_rate: float, weight_decay: float = 0.0):
        self.names = tuple(names)
        self.lr = learning_rate
        self.weight_decay = weight_decay
        self.t = 0
        self.m: dict[str, np.ndarray] = {}
        self.v: dict[str, np.ndarray] = {}

    def step(self, tensors: dict[str, np.ndarray], grads: dict[str, np.ndarray]):
        self.t += 1
        b1c = 1.0 - ADAM_BETA1**self.t
        b2c = 1.0 - ADAM_BETA2**self.t
        for name in self.names:
            g = grads[name]
            if name not in self.m:
                self.m[name] = np.zeros_like(g)
                self.v[name] = np.zeros_like(g)
            self.m[name] = ADAM_BETA1 * self.m[name] + (1.0 - ADAM_BETA1) * g
            self.v[name] = ADAM_BETA2 * self.v[name] + (1.0 - ADAM_BETA2) * g * g
            update = (self.m[name] / b1c) / (np.sqrt(self.v[name] / b2c) + ADAM_EPS)
            if self.weight_decay:
                update = update + self.weight_decay * tensors[name]
            tensors[name] -= self.lr * update


@dataclass
class TrainReport:
    losses: list[float]

    @property
    def steps(self) -> int:
        return len(self.losses)

    @property
    def final_loss(self) -> float:
        return self.losses[-1] if self.losses else float("nan")


def train(params: LmParams, dataset: TokenBatch, optimizer_config: TrainConfig,
          trainable_mask: set[str] | None = None,
          loss_spec: LossSpec = cross_entropy_spec) -> TrainReport:
    """Optimize the masked parameter subset in place.

    Gradients are computed for every parameter; the optimizer touches only
    names in ``trainable_mask`` (None means all), so everything outside the
    mask stays bitwise identical. A non-finite loss aborts with
    NumericalError before any update, leaving the last good state in place.
    """
    if dataset.n_examples == 0:
        raise ConfigError("dataset is empty")
    dataset.validate_for(params.config)
    if trainable_mask is None:
        trainable = tuple(params.tensors)
    else:
        unknown = set(trainable_mask) - set(params.tensors)
        if unknown:
            raise ConfigError(f"unknown parameters in trainable_mask: {sorted(unknown)}")
        trainable = tuple(n for n in params.tensors if n in trainable_mask)
    opt = Adam(trainable, optimizer_config.learning_rate)
    rng = np.random.default_rng(optimizer_config.seed)
    losses: list[float] = []
    order = np.array([], dtype=np.int64)
    cursor = 0
    for _ in range(optimizer_config.steps):
        if cursor + optimizer_config.batch_size > order.size:
            order = rng.permutation(dataset.n_examples)
            cursor = 0
        idx = order[cursor : cursor + optimizer_config.batch_size]
        cursor += optimizer_config.batch_size
        result = backward(params, dataset.rows(idx), loss_spec)
        losses.append(result.loss)
        if trainable:
            opt.step(params.tensors, result.grads)
    return TrainReport(losses=losses)
