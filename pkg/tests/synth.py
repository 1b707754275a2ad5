"""Synthetic shift/scale datasets with known shape classes."""

import numpy as np

from fcshape.series import Dataset


def templates(p=64):
    t = np.arange(p)
    sine = np.sin(2 * np.pi * t / p)
    square = np.sign(np.sin(2 * np.pi * 2 * t / p) + 1e-9)
    triangle = 2 * np.abs(((4 * t / p) % 1) - 0.5)
    return [sine, square, triangle]


def shifted_scaled(seed=0, copies=20, p=64, max_shift=None, circular=True):
    """``copies`` randomly shifted (|s| <= p/4) and scaled (0.5..2) copies per template."""
    rng = np.random.default_rng(seed)
    max_shift = p // 4 if max_shift is None else max_shift
    X, labels = [], []
    for cls, T in enumerate(templates(p), start=1):
        for _ in range(copies):
            s = int(rng.integers(-max_shift, max_shift + 1))
            a = rng.uniform(0.5, 2.0)
            if circular:
                X.append(a * np.roll(T, s))
            else:
                shifted = np.zeros(p)
                if s >= 0:
                    shifted[s:] = T[: p - s]
                else:
                    shifted[: p + s] = T[-s:]
                X.append(a * shifted)
            labels.append(cls)
    return Dataset.from_raw(np.array(X), labels, name=f"synthetic-{seed}")


def gaussian_blobs(seed=0, n_per=15, gap=20.0, sigma=1.0, p=2):
    rng = np.random.default_rng(seed)
    a = rng.normal(0.0, sigma, size=(n_per, p))
    b = rng.normal(gap, sigma, size=(n_per, p))
    X = np.vstack([a, b])
    labels = [1] * n_per + [2] * n_per
    return Dataset(X, labels, name="blobs")


def random_dataset(seed, n=30, p=5, c_true=3):
    rng = np.random.default_rng(seed)
    centers = rng.normal(0, 3, size=(c_true, p))
    lab = rng.integers(0, c_true, size=n)
    X = centers[lab] + rng.normal(0, 1, size=(n, p))
    return Dataset(X, lab + 1, name=f"random-{seed}")
