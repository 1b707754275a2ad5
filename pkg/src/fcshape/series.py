"""Time series containers, z-normalization and UCR-format ingestion."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np


class InvalidSeriesError(ValueError):
    """Raised for series that cannot be normalized (fewer than two samples)."""


class ParseError(ValueError):
    """Raised when a UCR file is malformed. Carries the offending line number."""

    def __init__(self, path, lineno, message):
        self.path = str(path)
        self.lineno = lineno
        super().__init__(f"{self.path}:{lineno}: {message}")


def z_normalize(x):
    """Return ``x`` shifted to zero mean and scaled to unit population std.

    A constant series has no shape and maps to the all-zero series.

    Parameters
    ----------
    x : array_like, shape (p,) or (n, p)
        One series, or a stack of series normalized row by row.

    Returns
    -------
    numpy.ndarray
        Float array of the same shape.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] < 2:
        raise InvalidSeriesError(f"series length must be >= 2, got {x.shape[-1]}")
    mu = x.mean(axis=-1, keepdims=True)
    centered = x - mu
    sd = np.sqrt(np.mean(centered**2, axis=-1, keepdims=True))
    # rows whose spread is at rounding level of their magnitude count as constant
    scale = np.maximum(np.abs(mu), np.max(np.abs(x), axis=-1, keepdims=True))
    flat = sd <= 1e-13 * np.maximum(scale, 1.0)
    out = np.divide(centered, sd, out=np.zeros_like(centered), where=~flat)
    return out


@dataclass(frozen=True)
class Dataset:
    """``n`` equal-length series stored row-wise in ``X`` (shape ``(n, p)``).

    ``labels`` are contiguous integers ``1..c_true`` or ``None``.
    """

    X: np.ndarray
    labels: np.ndarray | None = None
    name: str = "dataset"

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        if X.ndim != 2:
            raise InvalidSeriesError("dataset must be a 2-D array of series")
        n, p = X.shape
        if n < 2:
            raise InvalidSeriesError(f"dataset needs at least 2 series, got {n}")
        if p < 2:
            raise InvalidSeriesError(f"series length must be >= 2, got {p}")
        X.setflags(write=False)
        object.__setattr__(self, "X", X)
        if self.labels is not None:
            labels = np.array(self.labels, dtype=int)
            if labels.shape != (n,):
                raise InvalidSeriesError(
                    f"expected {n} labels, got {labels.shape[0] if labels.ndim else 0}"
                )
            labels.setflags(write=False)
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    @property
    def n_classes(self) -> int:
        if self.labels is None:
            raise ValueError(f"dataset {self.name!r} has no labels")
        return len(np.unique(self.labels))

    @classmethod
    def from_raw(cls, X, labels=None, name="dataset"):
        """Build a dataset, z-normalizing every row and remapping labels."""
        X = z_normalize(np.asarray(X, dtype=float))
        if labels is not None:
            labels = remap_labels(labels)
        return cls(X=X, labels=labels, name=name)


def remap_labels(labels):
    """Map arbitrary labels to ``1..c`` in order of first appearance."""
    mapping = {}
    out = np.empty(len(labels), dtype=int)
    for k, lab in enumerate(labels):
        if lab not in mapping:
            mapping[lab] = len(mapping) + 1
        out[k] = mapping[lab]
    return out


def _parse_label(token):
    value = float(token)
    if value != int(value):
        raise ValueError(f"class label {token!r} is not an integer")
    return int(value)


def _read_records(path):
    with open(path, "r", newline="") as fh:
        text = fh.read()
    lines = text.splitlines()
    sep = None
    rows = []
    width = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if sep is None:
            sep = "\t" if "\t" in line else ","
        fields = line.split(sep)
        try:
            label = _parse_label(fields[0])
            values = [float(f) for f in fields[1:]]
        except ValueError as exc:
            raise ParseError(path, lineno, f"non-numeric field ({exc})") from None
        if width is None:
            width = len(values)
            if width < 2:
                raise ParseError(path, lineno, "a record needs a label and >= 2 values")
        elif len(values) != width:
            raise ParseError(
                path, lineno, f"expected {width} values, found {len(values)}"
            )
        rows.append((label, values, lineno))
    if not rows:
        raise ParseError(path, 0, "no records")
    return rows, width


def load_ucr(path, merge=None, name=None):
    """Load a UCR-format file, optionally concatenated with a second one.

    Each non-empty line holds an integer class label followed by the samples,
    separated by commas or tabs (detected per file). Every series is
    z-normalized individually, so the order of merging does not matter.

    Raises
    ------
    ParseError
        On ragged rows, non-numeric fields, or a length mismatch between the
        two merged files.
    """
    rows, width = _read_records(path)
    if merge is not None:
        extra, width2 = _read_records(merge)
        if width2 != width:
            raise ParseError(
                merge, extra[0][2], f"series length {width2} differs from {width} in {path}"
            )
        rows = rows + extra
    labels = [r[0] for r in rows]
    X = np.array([r[1] for r in rows], dtype=float)
    if name is None:
        name = os.path.splitext(os.path.basename(str(path)))[0]
        for suffix in ("_TRAIN", "_TEST"):
            if name.endswith(suffix):
                name = name[: -len(suffix)]
    return Dataset.from_raw(X, labels, name=name)
