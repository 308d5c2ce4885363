"""Independent oracles shared by the test suite.

Everything here deliberately avoids the library's vectorized code paths:
finite differences for gradients, scalar Python loops for forwards.
"""

from __future__ import annotations

import math

import numpy as np


def finite_diff_grads(params, loss_value_fn, names=None, step=1e-5):
    """Central finite differences of ``loss_value_fn(params)`` w.r.t. every
    element of the named tensors. Mutates and restores in place."""
    out = {}
    for name in names if names is not None else list(params.tensors):
        arr = params.tensors[name]
        grad = np.zeros_like(arr)
        flat = arr.reshape(-1)
        gflat = grad.reshape(-1)
        for j in range(flat.size):
            orig = flat[j]
            flat[j] = orig + step
            up = loss_value_fn(params)
            flat[j] = orig - step
            down = loss_value_fn(params)
            flat[j] = orig
            gflat[j] = (up - down) / (2.0 * step)
        out[name] = grad
    return out


def assert_grads_close(analytic, numeric, rel_tol=1e-4, abs_floor=1e-7):
    """Elementwise |a - n| <= rel_tol * max(|a|, |n|) + abs_floor."""
    for name, a in analytic.items():
        if name not in numeric:
            continue
        n = numeric[name]
        bound = rel_tol * np.maximum(np.abs(a), np.abs(n)) + abs_floor
        bad = np.abs(a - n) > bound
        assert not bad.any(), (
            f"{name}: {int(bad.sum())} of {a.size} gradient entries exceed tolerance; "
            f"worst diff {np.abs(a - n).max():.3e}"
        )


def scalar_layernorm(x, g, b, eps=1e-5):
    d = len(x)
    mu = sum(x) / d
    var = sum((xi - mu) ** 2 for xi in x) / d
    inv = 1.0 / math.sqrt(var + eps)
    return [g[i] * (x[i] - mu) * inv + b[i] for i in range(d)]


def scalar_gelu(x):
    c = math.sqrt(2.0 / math.pi)
    return 0.5 * x * (1.0 + math.tanh(c * (x + 0.044715 * x**3)))


def scalar_matvec(w_rows_by_cols, x):
    """x (len rows) times matrix (rows x cols) -> list of cols entries."""
    rows = len(w_rows_by_cols)
    cols = len(w_rows_by_cols[0])
    return [sum(x[r] * w_rows_by_cols[r][c] for r in range(rows)) for c in range(cols)]


def scalar_forward_logits(params, input_ids):
    """Pure-Python scalar re-implementation of the forward pass for a
    single-head model; returns logits as nested lists."""
    cfg = params.config
    assert cfg.n_heads == 1
    p = {k: v.tolist() for k, v in params.tensors.items()}
    d = cfg.hidden_dim
    t_len = len(input_ids)
    x = [
        [p["tok_emb"][input_ids[t]][i] + p["pos_emb"][t][i] for i in range(d)]
        for t in range(t_len)
    ]
    for layer in range(cfg.n_layers):
        pre = f"block{layer}."
        a_in = [scalar_layernorm(x[t], p[pre + "ln1.g"], p[pre + "ln1.b"]) for t in range(t_len)]
        q = [scalar_matvec(p[pre + "attn.wq"], a_in[t]) for t in range(t_len)]
        k = [scalar_matvec(p[pre + "attn.wk"], a_in[t]) for t in range(t_len)]
        v = [scalar_matvec(p[pre + "attn.wv"], a_in[t]) for t in range(t_len)]
        ctx = []
        for t in range(t_len):
            scores = []
            for s in range(t + 1):
                scores.append(sum(q[t][i] * k[s][i] for i in range(d)) / math.sqrt(d))
            m = max(scores)
            exps = [math.exp(sc - m) for sc in scores]
            z = sum(exps)
            weights = [e / z for e in exps]
            ctx.append([sum(weights[s] * v[s][i] for s in range(t + 1)) for i in range(d)])
        attn_out = [scalar_matvec(p[pre + "attn.wo"], ctx[t]) for t in range(t_len)]
        x1 = [[x[t][i] + attn_out[t][i] for i in range(d)] for t in range(t_len)]
        f_in = [scalar_layernorm(x1[t], p[pre + "ln2.g"], p[pre + "ln2.b"]) for t in range(t_len)]
        h = []
        for t in range(t_len):
            hidden = scalar_matvec(p[pre + "ffn.w1"], f_in[t])
            hidden = [scalar_gelu(hidden[j] + p[pre + "ffn.b1"][j]) for j in range(len(hidden))]
            out = scalar_matvec(p[pre + "ffn.w2"], hidden)
            h.append([out[i] + p[pre + "ffn.b2"][i] for i in range(d)])
        x = [[x1[t][i] + h[t][i] for i in range(d)] for t in range(t_len)]
    final = [scalar_layernorm(x[t], p["final_ln.g"], p["final_ln.b"]) for t in range(t_len)]
    return [scalar_matvec(p["lm_head"], final[t]) for t in range(t_len)]


def scalar_softmax_ce(logits_row, target):
    m = max(logits_row)
    exps = [math.exp(z - m) for z in logits_row]
    total = sum(exps)
    return -math.log(exps[target] / total)
