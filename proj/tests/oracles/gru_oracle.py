#!/usr/bin/env python3
"""Reference GRU sequence computed with numpy.

Writes weights and per-step hidden states to tests/oracles/gru_oracle.inc,
which test_nn.cpp includes. Regenerate with:
    python3 tests/oracles/gru_oracle.py
"""
import os

import numpy as np

IN, H, T = 3, 4, 5


def weights(rows, cols, salt):
    # deterministic, irrational-ish values independent of any library RNG
    k = np.arange(rows * cols, dtype=np.float64) + salt
    return np.sin(k * 0.7 + 0.3).reshape(rows, cols) * 0.5


def sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def main():
    wz, uz, bz = weights(IN, H, 0), weights(H, H, 50), weights(1, H, 100)
    wr, ur, br = weights(IN, H, 7), weights(H, H, 57), weights(1, H, 107)
    wh, uh, bh = weights(IN, H, 13), weights(H, H, 63), weights(1, H, 113)
    x = weights(T, IN, 29) * 2.0

    h = np.zeros((1, H))
    outs = []
    for t in range(T):
        xt = x[t : t + 1]
        z = sigmoid(xt @ wz + h @ uz + bz)
        r = sigmoid(xt @ wr + h @ ur + br)
        cand = np.tanh(xt @ wh + (r * h) @ uh + bh)
        h = (1.0 - z) * h + z * cand
        outs.append(h.copy())

    out_path = os.path.join(os.path.dirname(__file__), "gru_oracle.inc")
    with open(out_path, "w") as f:
        f.write("// generated by tests/oracles/gru_oracle.py; do not edit\n")
        for name, arr in [("wz", wz), ("uz", uz), ("bz", bz), ("wr", wr), ("ur", ur),
                          ("br", br), ("wh", wh), ("uh", uh), ("bh", bh), ("x", x),
                          ("h_out", np.vstack(outs))]:
            flat = ", ".join(f"{v:.17g}" for v in arr.flatten())
            f.write(f"const tgif::Tensor kGru_{name} = tgif::Tensor::matrix("
                    f"{arr.shape[0]}, {arr.shape[1]}, {{{flat}}});\n")
    print(f"wrote {out_path}")


if __name__ == "__main__":
    main()
