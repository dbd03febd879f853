"""Brute-force reference implementations, deliberately written without
touching the package's vectorized code paths."""
import math

import numpy as np


def hamilton_16(a, b):
    """Quaternion product by expanding all 16 basis products."""
    # basis multiplication table: e_i * e_j = sign * e_k
    table = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    out = [0.0] * 4
    for i in range(4):
        for j in range(4):
            s, k = table[(i, j)]
            out[k] += s * a[i] * b[j]
    return out


def rodrigues(axis, angle, v):
    """Rotate 3-vector ``v`` by ``angle`` about unit ``axis``."""
    u = np.asarray(axis, float)
    v = np.asarray(v, float)
    c, s = math.cos(angle), math.sin(angle)
    return v * c + np.cross(u, v) * s + u * np.dot(u, v) * (1 - c)


def clamp_get(img, y, x):
    h, w = img.shape[:2]
    return img[min(max(y, 0), h - 1), min(max(x, 0), w - 1)]


def naive_correlate(img, kernel):
    """Double-loop 3x3 correlation with clamped borders."""
    h, w = img.shape
    out = np.zeros((h, w))
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for r in range(3):
                for c in range(3):
                    acc += kernel[r][c] * clamp_get(img, y + r - 1, x + c - 1)
            out[y, x] = acc
    return out


PREWITT_V = [[1, 1, 1], [0, 0, 0], [-1, -1, -1]]
PREWITT_H = [[1, 0, -1], [1, 0, -1], [1, 0, -1]]


def fixpoint_hysteresis(m, high_frac, low_frac):
    """Mark strong pixels, then repeatedly promote weak 8-neighbors until
    nothing changes."""
    mmax = m.max()
    if mmax <= 0:
        return np.zeros(m.shape, bool)
    strong = m >= high_frac * mmax
    weak = (m >= low_frac * mmax) & ~strong
    marked = strong.copy()
    h, w = m.shape
    while True:
        grown = marked.copy()
        for y in range(h):
            for x in range(w):
                if marked[y, x]:
                    continue
                if not weak[y, x]:
                    continue
                for dy in (-1, 0, 1):
                    for dx in (-1, 0, 1):
                        yy, xx = y + dy, x + dx
                        if 0 <= yy < h and 0 <= xx < w and marked[yy, xx]:
                            grown[y, x] = True
        if (grown == marked).all():
            return marked
        marked = grown


def naive_confusion(pred, gt, r):
    """Per-pixel loops; tolerance by explicit Chebyshev neighborhood search."""
    h, w = pred.shape

    def near(mask, y, x):
        for yy in range(max(0, y - r), min(h, y + r + 1)):
            for xx in range(max(0, x - r), min(w, x + r + 1)):
                if mask[yy, xx]:
                    return True
        return False

    tp = fp = fn = 0
    for y in range(h):
        for x in range(w):
            if pred[y, x]:
                if near(gt, y, x):
                    tp += 1
                else:
                    fp += 1
            elif gt[y, x] and not near(pred, y, x):
                fn += 1
    return tp, h * w - tp - fp - fn, fp, fn


def brute_covariance(pixels):
    g = [tuple(p) for p in pixels.reshape(-1, 3)]
    b = len(g)
    mu = [sum(p[i] for p in g) / b for i in range(3)]
    cov = [[0.0] * 3 for _ in range(3)]
    for p in g:
        d = [p[i] - mu[i] for i in range(3)]
        for i in range(3):
            for j in range(3):
                cov[i][j] += d[i] * d[j]
    return np.array(mu), np.array(cov) / b
