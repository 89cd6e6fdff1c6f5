#!/usr/bin/env python3
"""Probability that two uniformly placed tags hear each other (N = 2).

With an isotropic exciter, the link n -> m is alive iff d_{E,n} * d_{n,m} <= eps,
so the pair is connected iff max(d_E1, d_E2) * d_12 <= eps. Placement is
uniform on [0, S]^2 conditioned on every distance (tag-tag and tag-exciter)
being at least the minimum spacing. Estimated by plain Monte Carlo.
"""
import math
import sys

import numpy as np

C = 299792458.0
LAM = C / 868e6
K0 = 0.4
PE = 10 ** 3.3 * 1e-3
PS = 1e-8
GE = 10 ** 0.4
EPS = LAM**2 / (4 * math.pi) ** 2 * K0 * math.sqrt(PE * GE / PS)
D_MIN = 2 * 0.17**2 / LAM


def estimate(side, ex, samples, seed=1, chunk=10_000_000):
    rng = np.random.default_rng(seed)
    hit = valid = 0
    left = samples
    while left > 0:
        n = min(chunk, left)
        left -= n
        p = rng.uniform(0.0, side, size=(n, 4))
        de1 = np.hypot(p[:, 0] - ex[0], p[:, 1] - ex[1])
        de2 = np.hypot(p[:, 2] - ex[0], p[:, 3] - ex[1])
        d12 = np.hypot(p[:, 0] - p[:, 2], p[:, 1] - p[:, 3])
        ok = (de1 >= D_MIN) & (de2 >= D_MIN) & (d12 >= D_MIN)
        valid += int(ok.sum())
        hit += int((ok & (np.maximum(de1, de2) * d12 <= EPS)).sum())
    return hit / valid, valid


if __name__ == "__main__":
    side = float(sys.argv[1]) if len(sys.argv) > 1 else 30.0
    samples = int(float(sys.argv[2])) if len(sys.argv) > 2 else 200_000_000
    p, n = estimate(side, (0.0, 3.0), samples)
    se = math.sqrt(p * (1 - p) / n)
    print(f"S_a={side} p={p:.6e} se={se:.2e} eps={EPS:.6f} d_min={D_MIN:.6f}")
