#!/usr/bin/env python3
"""Reference transformer encoder layer computed with numpy.

Writes weights and outputs (with and without positional encodings) to
tests/oracles/transformer_oracle.inc, which test_nn.cpp includes.
Regenerate with:
    python3 tests/oracles/transformer_oracle.py
"""
import os

import numpy as np

T, D, HEADS, D_FF = 3, 8, 2, 16
LN_EPS = 1e-5


def weights(rows, cols, salt):
    k = np.arange(rows * cols, dtype=np.float64) + salt
    return np.sin(k * 0.7 + 0.3).reshape(rows, cols) * 0.5


def softmax_rows(a):
    m = a.max(axis=1, keepdims=True)
    e = np.exp(a - m)
    return e / e.sum(axis=1, keepdims=True)


def layer_norm(x, g, b):
    mu = x.mean(axis=1, keepdims=True)
    var = ((x - mu) ** 2).mean(axis=1, keepdims=True)
    return (x - mu) / np.sqrt(var + LN_EPS) * g + b


def positional(t, d):
    pe = np.zeros((t, d))
    for pos in range(t):
        for i in range(0, d, 2):
            angle = pos / (10000.0 ** (i / d))
            pe[pos, i] = np.sin(angle)
            if i + 1 < d:
                pe[pos, i + 1] = np.cos(angle)
    return pe


def encoder_layer(x, p):
    q = x @ p["wq"] + p["bq"]
    k = x @ p["wk"] + p["bk"]
    v = x @ p["wv"] + p["bv"]
    dh = D // HEADS
    ctx = []
    for h in range(HEADS):
        sl = slice(h * dh, (h + 1) * dh)
        att = softmax_rows(q[:, sl] @ k[:, sl].T / np.sqrt(dh))
        ctx.append(att @ v[:, sl])
    attended = np.hstack(ctx) @ p["wo"] + p["bo"]
    n1 = layer_norm(x + attended, p["ln1g"], p["ln1b"])
    ff = np.maximum(n1 @ p["w1"] + p["b1"], 0.0) @ p["w2"] + p["b2"]
    return layer_norm(n1 + ff, p["ln2g"], p["ln2b"])


def main():
    p = {
        "wq": weights(D, D, 0), "bq": weights(1, D, 200),
        "wk": weights(D, D, 64), "bk": weights(1, D, 208),
        "wv": weights(D, D, 128), "bv": weights(1, D, 216),
        "wo": weights(D, D, 192), "bo": weights(1, D, 224),
        "ln1g": weights(1, D, 232) + 1.0, "ln1b": weights(1, D, 240),
        "w1": weights(D, D_FF, 300), "b1": weights(1, D_FF, 428),
        "w2": weights(D_FF, D, 436), "b2": weights(1, D, 564),
        "ln2g": weights(1, D, 572) + 1.0, "ln2b": weights(1, D, 580),
    }
    x = weights(T, D, 999) * 2.0

    items = [(name, p[name]) for name in
             ["wq", "bq", "wk", "bk", "wv", "bv", "wo", "bo", "ln1g", "ln1b",
              "w1", "b1", "w2", "b2", "ln2g", "ln2b"]]
    items += [("x", x), ("y_plain", encoder_layer(x, p)),
              ("y_positional", encoder_layer(x + positional(T, D), p))]
    out_path = os.path.join(os.path.dirname(__file__), "transformer_oracle.inc")
    with open(out_path, "w") as f:
        f.write("// generated by tests/oracles/transformer_oracle.py; do not edit\n")
        for name, arr in items:
            flat = ", ".join(f"{v:.17g}" for v in arr.flatten())
            f.write(f"const tgif::Tensor kTf_{name} = tgif::Tensor::matrix("
                    f"{arr.shape[0]}, {arr.shape[1]}, {{{flat}}});\n")
    print(f"wrote {out_path}")


if __name__ == "__main__":
    main()
