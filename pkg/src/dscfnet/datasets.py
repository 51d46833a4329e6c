"""Labelled datasets: CSV ingestion/emission and synthetic Gaussian blobs.

The on-disk format is one sample per row, ``label,f0,f1,...,f_{D-1}``, no
header. In memory the feature matrix is stored columns-as-samples (``D x N``).
"""

import csv
from dataclasses import dataclass, field

import numpy as np


class ParseError(ValueError):
    pass


class EmptyDataset(ValueError):
    pass


@dataclass
class Dataset:
    X: np.ndarray
    labels: np.ndarray
    label_names: list = field(default_factory=list)

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=int)
        if self.X.ndim != 2 or self.X.shape[1] != self.labels.size:
            raise ValueError("X must be D x N with one label per column")
        if np.any(self.X < 0):
            raise ValueError("features must be nonnegative")
        if self.labels.size and set(np.unique(self.labels)) != set(range(self.class_count)):
            raise ValueError("labels must be contiguous 0..K-1")
        if not self.label_names:
            self.label_names = list(range(self.class_count))

    @property
    def class_count(self):
        return int(self.labels.max()) + 1 if self.labels.size else 0

    @property
    def feature_dim(self):
        return self.X.shape[0]

    @property
    def n_samples(self):
        return self.X.shape[1]


def _parse_label(tok):
    try:
        return int(tok)
    except ValueError:
        try:
            f = float(tok)
        except ValueError:
            return tok
        return int(f) if f.is_integer() else f


def load_dataset(path):
    """Read a dataset CSV.

    Raw labels (integers or strings) are compacted to contiguous ids in
    sorted order; ``Dataset.label_names[i]`` is the raw label of id ``i``.

    Raises
    ------
    ParseError
        Row arity mismatch, non-numeric or negative feature (1-based row
        number in the message).
    EmptyDataset
        No data rows.
    """
    raw_labels, rows = [], []
    width = None
    with open(path, newline="") as fh:
        for lineno, rec in enumerate(csv.reader(fh), start=1):
            if not rec or all(not t.strip() for t in rec):
                continue
            if len(rec) < 2:
                raise ParseError(f"row {lineno}: expected label and at least one feature")
            if width is None:
                width = len(rec)
            elif len(rec) != width:
                raise ParseError(f"row {lineno}: expected {width} fields, got {len(rec)}")
            try:
                feats = [float(t) for t in rec[1:]]
            except ValueError:
                raise ParseError(f"row {lineno}: non-numeric feature") from None
            if not all(np.isfinite(feats)):
                raise ParseError(f"row {lineno}: non-finite feature")
            if min(feats) < 0:
                raise ParseError(f"row {lineno}: negative feature")
            raw_labels.append(_parse_label(rec[0].strip()))
            rows.append(feats)
    if not rows:
        raise EmptyDataset(f"{path}: no samples")
    names = sorted(set(raw_labels), key=lambda v: (isinstance(v, str), v))
    index = {v: i for i, v in enumerate(names)}
    labels = np.array([index[v] for v in raw_labels], dtype=int)
    return Dataset(np.array(rows).T, labels, names)


def save_dataset(dataset, path):
    """Write ``dataset`` as CSV with raw labels and full-precision floats."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for j in range(dataset.n_samples):
            name = dataset.label_names[dataset.labels[j]]
            w.writerow([name] + [repr(float(v)) for v in dataset.X[:, j]])


def generate_synthetic(n_classes, per_class, dim, separation=10.0, spread=10.0, seed=0):
    """Nonnegative Gaussian blobs with well-separated class means.

    Means are drawn uniformly from ``[3 spread, (3 + 2 separation) spread]^dim``
    and rejection-sampled until every pair is at least ``separation * spread``
    apart. Samples are ``mean + spread * N(0, I)`` clamped at zero. The
    default spread gives pixel-like intensities (tens to a few hundred).
    """
    if min(n_classes, per_class, dim) < 1:
        raise ValueError("n_classes, per_class and dim must be positive")
    if not (separation > 0 and spread > 0):
        raise ValueError("separation and spread must be positive")
    rng = np.random.default_rng(seed)
    min_gap = separation * spread
    means = []
    attempts = 0
    while len(means) < n_classes:
        m = spread * (3.0 + rng.uniform(0.0, 2.0 * separation, dim))
        if all(np.linalg.norm(m - q) >= min_gap for q in means):
            means.append(m)
        attempts += 1
        if attempts > 10000 * n_classes:
            raise RuntimeError("could not place class means; lower separation")
    blocks = [means[k][:, None] + spread * rng.standard_normal((dim, per_class)) for k in range(n_classes)]
    X = np.maximum(np.concatenate(blocks, axis=1), 0.0)
    labels = np.repeat(np.arange(n_classes), per_class)
    return Dataset(X, labels)
