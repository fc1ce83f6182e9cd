"""Reference measures to compare against the normalized dimension:
PCA variance spectra, average absolute column correlation, and k-means
clustering of rows. All operate on dense copies, so they are meant for
the subset sizes used in comparison studies (about 1000 rows).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import BinaryDataset
from .errors import DegenerateDataError
from .streams import derive_rng


@dataclass(eq=False)
class PcaSummary:
    """Eigenvalue spectrum of the column covariance (divisor N-1).

    Eigenvalues are sorted descending with small negative roundoff
    clamped to 0; their sum equals the total variance (covariance trace)
    up to roundoff.
    """

    eigenvalues: np.ndarray
    total_variance: float
    eigenvectors: np.ndarray | None = None  # columns matching eigenvalues

    def components_for(self, frac: float) -> int:
        """Smallest component count explaining at least ``frac`` of the variance."""
        if not 0.0 < frac <= 1.0:
            raise ValueError(f"frac must be in (0, 1], got {frac}")
        cum = np.cumsum(self.eigenvalues)
        ratios = cum / cum[-1]
        # tiny slack so an exact fraction like 18/20 is not missed to roundoff
        return int(np.searchsorted(ratios, frac - 1e-12, side="left")) + 1

    def explained_by(self, m: int) -> float:
        """Fraction of the variance carried by the top m components."""
        if m < 0:
            raise ValueError("m must be >= 0")
        m = min(m, self.eigenvalues.size)
        return float(self.eigenvalues[:m].sum() / self.total_variance)

    def to_tsv(self) -> str:
        lines = [f"# total_variance={self.total_variance:.12g}"]
        lines.extend(f"{i}\t{v:.12g}" for i, v in enumerate(self.eigenvalues))
        return "\n".join(lines) + "\n"


def pca_summary(ds: BinaryDataset) -> PcaSummary:
    """Full eigen-decomposition of the column-centered covariance."""
    if ds.n_rows < 2:
        raise ValueError("PCA needs at least two rows")
    x = ds.to_dense().astype(float)
    xc = x - x.mean(axis=0)
    cov = xc.T @ xc / (ds.n_rows - 1)
    total = float(np.trace(cov))
    if total <= 0.0:
        raise DegenerateDataError("zero total variance: all columns constant")
    w, v = np.linalg.eigh(cov)
    w = w[::-1].copy()
    v = v[:, ::-1].copy()
    if w.size and w.min() < -1e-8 * max(total, 1.0):
        raise ArithmeticError(f"eigen-decomposition produced eigenvalue {w.min()}")
    np.clip(w, 0.0, None, out=w)
    return PcaSummary(w, total, v)


def avg_abs_correlation(ds: BinaryDataset) -> float:
    """Mean absolute Pearson correlation over unordered column pairs.

    Pairs involving a constant column are excluded from both the sum and
    the denominator.
    """
    if ds.n_cols < 2:
        raise ValueError("need at least two columns")
    x = ds.to_dense().astype(float)
    keep = np.flatnonzero(x.std(axis=0) > 0.0)
    if keep.size < 2:
        raise DegenerateDataError("no column pair with both columns non-constant")
    c = np.corrcoef(x[:, keep], rowvar=False)
    iu = np.triu_indices(keep.size, k=1)
    return float(np.clip(np.mean(np.abs(c[iu])), 0.0, 1.0))


@dataclass(eq=False)
class Clustering:
    """k-means result on rows viewed as real 0/1 vectors.

    ``objective`` is the sum of squared Euclidean distances of each row
    to its assigned centroid, recomputed from the final assignment.
    """

    k: int
    assignments: np.ndarray
    centroids: np.ndarray
    objective: float
    n_iter: int

    def assignments_text(self) -> str:
        return "".join(f"{int(a)}\n" for a in self.assignments)


def _sq_dists(x: np.ndarray, cent: np.ndarray) -> np.ndarray:
    d2 = (
        (x * x).sum(axis=1)[:, None]
        - 2.0 * (x @ cent.T)
        + (cent * cent).sum(axis=1)[None, :]
    )
    return np.maximum(d2, 0.0)


def _plusplus_init(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = x.shape[0]
    cent = np.empty((k, x.shape[1]))
    cent[0] = x[int(rng.integers(n))]
    d2 = ((x - cent[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total > 0.0:
            i = int(rng.choice(n, p=d2 / total))
        else:
            i = int(rng.integers(n))
        cent[j] = x[i]
        d2 = np.minimum(d2, ((x - cent[j]) ** 2).sum(axis=1))
    return cent


def kmeans(ds: BinaryDataset, k: int, seed: int = 0, max_iter: int = 100) -> Clustering:
    """Lloyd's algorithm with plus-plus seeding, deterministic in ``seed``.

    Assignment ties break toward the lowest cluster id; a cluster left
    empty is reseeded to the point currently farthest from its own
    centroid. Stops at an assignment fixpoint or after ``max_iter``
    rounds.
    """
    if not 1 <= k <= ds.n_rows:
        raise ValueError(f"k must be in [1, {ds.n_rows}], got {k}")
    x = ds.to_dense().astype(float)
    n = x.shape[0]
    rng = derive_rng(seed, "kmeans")
    cent = _plusplus_init(x, k, rng)
    prev_labels = None
    prev_obj = math.inf
    labels = np.zeros(n, dtype=np.int64)
    rounds = 0
    for rounds in range(1, max_iter + 1):
        d2 = _sq_dists(x, cent)
        labels = np.argmin(d2, axis=1)
        point_d2 = d2[np.arange(n), labels]
        for cid in range(k):
            if not np.any(labels == cid):
                far = int(np.argmax(point_d2))
                cent[cid] = x[far]
                labels[far] = cid
                point_d2[far] = 0.0
        obj = float(point_d2.sum())
        assert obj <= prev_obj + 1e-9 * (1.0 + abs(prev_obj)), "objective increased"
        prev_obj = obj
        if prev_labels is not None and np.array_equal(labels, prev_labels):
            break
        prev_labels = labels.copy()
        for cid in range(k):
            cent[cid] = x[labels == cid].mean(axis=0)
    final_obj = float(_sq_dists(x, cent)[np.arange(n), labels].sum())
    return Clustering(k, labels.astype(np.int64), cent, final_obj, rounds)
