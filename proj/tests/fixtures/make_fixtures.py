#!/usr/bin/env python3
"""Builds the metric and fit fixture datasets with prescribed summary statistics.

Net-force fixtures: per component, errors take two magnitudes chosen so MAE and
RMSE hit their targets, and each truth is placed so every floored symmetric
percentage term equals the target sMAPE.

Fit fixtures: residuals orthogonal to the regressors keep the least-squares
coefficients exact while a scale factor sets the centered R^2.
"""
import csv
import math
import pathlib

import numpy as np

HERE = pathlib.Path(__file__).resolve().parent

NET = {
    "husky": {"x": (1.25, 2.10, 12.96), "y": (3.42, 5.64, 56.19), "z": (4.38, 7.75, 2.99)},
    "warthog": {"x": (52.87, 112.86, 12.98), "y": (53.28, 76.70, 54.84), "z": (67.61, 117.31, 11.77)},
}
N_NET = 400

DRAG = [(0.1016, 29, 49.2, 0.995), (0.2032, 14, 108.3, 0.991), (0.254, 14, 157.7, 0.980)]
VERT = [(0.1016, 29, 280.0, -12.0, 0.96), (0.2032, 14, 543.0, -20.0, 0.95), (0.254, 14, 784.0, -25.0, 0.94)]


def two_level_errors(mae, rmse, n):
    """k errors of size a and n-k of size b with mean a/b mix = mae and rms = rmse."""
    k = int(n * 0.5 * mae * mae / (rmse * rmse))
    p = k / n
    # b = (mae - p a) / (1 - p); p a^2 + (1 - p) b^2 = rmse^2
    A = p + p * p / (1 - p)
    B = -2 * p * mae / (1 - p)
    C = mae * mae / (1 - p) - rmse * rmse
    a = (-B + math.sqrt(B * B - 4 * A * C)) / (2 * A)
    b = (mae - p * a) / (1 - p)
    assert a > 0 and b > 0
    return [a] * k + [b] * (n - k)


def net_fixture(stats, n, seed):
    rng = np.random.default_rng(seed)
    pred, truth = [], []
    for mae, rmse, smape in stats:
        errs = two_level_errors(mae, rmse, n)
        c = 100.0 / smape  # (|p| + |t|) / 2 = c e gives a term of exactly smape
        signs = rng.choice([-1.0, 1.0], size=n)
        side = rng.choice([-1.0, 1.0], size=n)
        t_col, p_col = [], []
        for e, s, d in zip(errs, signs, side):
            assert c * e >= 1.0, "floor would engage"
            # Same-sign pair: (|t| + |t + s e|)/2 = |t| + s e/2 = c e.
            mag = c * e - s * e / 2
            t_col.append(d * mag)
            p_col.append(d * (mag + s * e))
        truth.append(t_col)
        pred.append(p_col)
    return list(zip(*pred)), list(zip(*truth))


def orthogonal_residual(X, rng, weight):
    u = weight * rng.standard_normal(X.shape[0])
    coef, *_ = np.linalg.lstsq(X, u, rcond=None)
    return u - X @ coef


def scale_for_r2(y0, u, r2):
    """s >= 0 with 1 - s^2 |u|^2 / SS_tot(y0 + s u) = r2 (u orthogonal to the fit space)."""
    lo, hi = 0.0, 1.0
    def f(s):
        y = y0 + s * u
        return 1 - s * s * (u @ u) / np.sum((y - y.mean()) ** 2) - r2
    while f(hi) > 0:
        hi *= 2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if f(mid) > 0 else (lo, mid)
    return 0.5 * (lo + hi)


def speeds(n, rng):
    return np.sort(rng.uniform(0.52, 3.8, size=n))


def main():
    for i, (veh, comps) in enumerate(NET.items()):
        pred, truth = net_fixture([comps[c] for c in "xyz"], N_NET, 100 + i)
        with open(HERE / f"net_force_{veh}.csv", "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["pred_x", "pred_y", "pred_z", "true_x", "true_y", "true_z"])
            for p, t in zip(pred, truth):
                w.writerow([repr(float(v)) for v in (*p, *t)])

    rng = np.random.default_rng(7)
    rows = []
    for (d, n, c, r2), (_, _, f0, cl, r2z) in zip(DRAG, VERT):
        v = speeds(n, rng)
        x = v * v
        u = orthogonal_residual(x[:, None], rng, x)
        fx = c * x + scale_for_r2(c * x, u, r2) * u
        X = np.column_stack([np.ones(n), x])
        uz = orthogonal_residual(X, rng, np.ones(n))
        fz = f0 + cl * x + scale_for_r2(f0 + cl * x, uz, r2z) * uz
        for vi, xi, a, b in zip(v, x, fx, fz):
            rows.append((d, vi, xi, a, b))
    with open(HERE / "validation_points.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["depth", "speed", "v2", "fx", "fz"])
        for r in rows:
            w.writerow([repr(float(v)) for v in r])


if __name__ == "__main__":
    main()
