"""Distribution of the L1 distance between two random rows of a dataset.

The central object is the interpolated CDF f with f(r) = P(Z < r) at the
integers r = 0..K+1 and linear interpolation in between, where Z is the
distance between two rows drawn uniformly at random (ordered pairs,
self-pairs included). Estimators provided:

  exact_cdf           all N^2 ordered pairs, sparse-intersection counting
  sampled_cdf         pairs against (or within) a uniform row subset
  independent_mc_cdf  Monte Carlo under an independent-columns model
  binomial_model      exact CDF when all columns share one margin
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.special import gammaln

from .dataset import BinaryDataset, MarginProfile, _require_kind
from .errors import EmptyDatasetError
from .streams import derive_rng


@dataclass(eq=False)
class DistanceCdf:
    """Interpolated distance CDF on a dataset with ``n_cols`` columns.

    ``f_int[r]`` = P(Z < r) for r = 0..n_cols+1; always starts at 0,
    ends at 1 and is nondecreasing. ``basis`` records how the estimate
    was obtained, ``pair_count`` how many pairs or samples back it
    (0 for analytic models).
    """

    n_cols: int
    f_int: np.ndarray
    basis: str
    pair_count: int

    def __post_init__(self):
        self.f_int = np.asarray(self.f_int, dtype=float)
        if self.f_int.shape != (self.n_cols + 2,):
            raise ValueError("f_int must have n_cols + 2 entries")
        if self.f_int[0] != 0.0 or self.f_int[-1] != 1.0:
            raise ValueError("f_int must start at 0 and end at 1")
        if np.any(np.diff(self.f_int) < 0):
            raise ValueError("f_int must be nondecreasing")

    # -- evaluation ---------------------------------------------------

    def evaluate(self, x: float) -> float:
        """f(x) for real 0 <= x <= n_cols + 1 (linear between integers)."""
        if not 0.0 <= x <= self.n_cols + 1:
            raise ValueError(f"x={x} outside [0, {self.n_cols + 1}]")
        return float(np.interp(x, np.arange(self.n_cols + 2), self.f_int))

    def evaluate_many(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if xs.size and (xs.min() < 0.0 or xs.max() > self.n_cols + 1):
            raise ValueError("grid outside the CDF support")
        return np.interp(xs, np.arange(self.n_cols + 2), self.f_int)

    def inverse(self, a: float) -> float:
        """Smallest x with f(x) >= a; the leftmost preimage on plateaus."""
        if not 0.0 < a <= 1.0:
            raise ValueError(f"quantile level must be in (0, 1], got {a}")
        idx = int(np.searchsorted(self.f_int, a, side="left"))
        lo, hi = self.f_int[idx - 1], self.f_int[idx]
        return (idx - 1) + (a - lo) / (hi - lo)

    def mean_var(self) -> tuple[float, float]:
        """Mean and variance of the integer distance distribution."""
        pmf = np.diff(self.f_int)
        k = np.arange(self.n_cols + 1, dtype=float)
        mu = float(np.dot(k, pmf))
        var = float(np.dot((k - mu) ** 2, pmf))
        return mu, max(var, 0.0)

    def to_tsv(self) -> str:
        """Two-column (r, f(r)) table with the basis as a comment header."""
        lines = [f"# basis={self.basis}\tpair_count={self.pair_count}\tn_cols={self.n_cols}"]
        lines.extend(f"{r}\t{v:.12g}" for r, v in enumerate(self.f_int))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Pair-counting estimators
# ---------------------------------------------------------------------------

def _to_csr(rows, n_cols):
    lens = np.fromiter((r.size for r in rows), dtype=np.int64, count=len(rows))
    indptr = np.concatenate(([0], np.cumsum(lens)))
    if len(rows) and lens.sum():
        indices = np.concatenate(rows)
    else:
        indices = np.empty(0, dtype=np.int64)
    data = np.ones(indices.size, dtype=np.int32)
    mat = sparse.csr_matrix((data, indices, indptr), shape=(len(rows), n_cols))
    return mat, lens


def _distance_counts(a, lens_a, bt, lens_b, n_cols, block_size):
    """Histogram of |x - y| over all (row of a) x (row of b) ordered pairs.

    Cost is dominated by sparse intersection products, i.e. proportional
    to the number of 1s rather than the dense matrix size.
    """
    counts = np.zeros(n_cols + 1, dtype=np.int64)
    n_a = a.shape[0]
    for start in range(0, n_a, block_size):
        stop = min(start + block_size, n_a)
        inter = (a[start:stop] @ bt).toarray()
        d = lens_a[start:stop, None] + lens_b[None, :] - 2 * inter
        counts += np.bincount(d.ravel(), minlength=n_cols + 1)
    return counts


def _cdf_from_counts(n_cols, counts, basis, pair_count) -> DistanceCdf:
    total = int(counts.sum())
    f_int = np.concatenate(([0.0], np.cumsum(counts) / total))
    f_int[-1] = 1.0
    return DistanceCdf(n_cols, f_int, basis, pair_count)


def exact_cdf(ds: BinaryDataset, block_size: int = 512) -> DistanceCdf:
    """Exact CDF over all N^2 ordered row pairs, self-pairs included.

    ``block_size`` only controls memory; integer pair counts are merged
    before the final division, so the result is identical for any value.
    """
    if ds.n_rows == 0:
        raise EmptyDatasetError("distance distribution of an empty dataset")
    a, lens = _to_csr(ds.rows, ds.n_cols)
    bt = a.T.tocsr()
    counts = _distance_counts(a, lens, bt, lens, ds.n_cols, block_size)
    return _cdf_from_counts(
        ds.n_cols, counts, f"exact-pairs(n={ds.n_rows})", ds.n_rows**2
    )


SAMPLE_MODES = ("row-vs-sample", "sample-vs-sample")


def sampled_cdf(ds: BinaryDataset, mode: str, m: int, seed: int,
                block_size: int = 512) -> DistanceCdf:
    """CDF estimated against a uniform m-row subset (without replacement).

    row-vs-sample pairs every row with the subset; sample-vs-sample pairs
    the subset with itself. With m = N either mode reproduces exact_cdf
    bit for bit.
    """
    if mode not in SAMPLE_MODES:
        raise ValueError(f"mode must be one of {SAMPLE_MODES}, got {mode!r}")
    if ds.n_rows == 0:
        raise EmptyDatasetError("distance distribution of an empty dataset")
    if not 1 <= m <= ds.n_rows:
        raise ValueError(f"sample size must be in [1, {ds.n_rows}], got {m}")
    rng = derive_rng(seed, "distance-sample")
    keep = rng.permutation(ds.n_rows)[:m]
    srows = [ds.rows[i] for i in keep]
    b, lens_b = _to_csr(srows, ds.n_cols)
    bt = b.T.tocsr()
    if mode == "row-vs-sample":
        a, lens_a = _to_csr(ds.rows, ds.n_cols)
        counts = _distance_counts(a, lens_a, bt, lens_b, ds.n_cols, block_size)
        pairs = ds.n_rows * m
        basis = f"row-vs-sample(n={ds.n_rows}, m={m})"
    else:
        counts = _distance_counts(b, lens_b, bt, lens_b, ds.n_cols, block_size)
        pairs = m * m
        basis = f"sample-vs-sample(m={m})"
    return _cdf_from_counts(ds.n_cols, counts, basis, pairs)


# ---------------------------------------------------------------------------
# Independent-columns models
# ---------------------------------------------------------------------------

def disagreement_probs(profile: MarginProfile) -> np.ndarray:
    """Per-column probability 2p(1-p) that two random rows disagree,
    assuming independent columns."""
    _require_kind(profile, "margin")
    p = profile.values
    return 2.0 * p * (1.0 - p)


def independent_mc_cdf(profile: MarginProfile, n_samples: int, seed: int) -> DistanceCdf:
    """Empirical CDF of the distance under independent columns with the
    given margins, from ``n_samples`` Monte Carlo draws."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    q = disagreement_probs(profile)
    k = q.size
    rng = derive_rng(seed, "independent-mc")
    counts = np.zeros(k + 1, dtype=np.int64)
    block = max(1, (1 << 20) // max(k, 1))
    done = 0
    while done < n_samples:
        b = min(block, n_samples - done)
        z = (rng.random((b, k)) < q).sum(axis=1)
        counts += np.bincount(z, minlength=k + 1)
        done += b
    return _cdf_from_counts(k, counts, f"independent-mc(n_samples={n_samples})", n_samples)


def _compensated_cumsum(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    total = 0.0
    carry = 0.0
    for i, v in enumerate(a):
        y = v - carry
        t = total + y
        carry = (t - total) - y
        total = t
        out[i] = total
    return out


def binomial_model(n_trials: int, p: float) -> DistanceCdf:
    """Exact distance CDF for ``n_trials`` independent columns, each with
    margin p: the distance is binomial with per-trial probability 2p(1-p).

    Terms are computed in log space from log-factorials and accumulated
    with compensated summation (plain cumsum beyond 2^15 trials, where
    the roundoff is still far below 1e-12).
    """
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    q = 2.0 * p * (1.0 - p)
    if q == 0.0:
        f_int = np.concatenate(([0.0], np.ones(n_trials + 1)))
    else:
        k = np.arange(n_trials + 1)
        log_pmf = (
            gammaln(n_trials + 1)
            - gammaln(k + 1)
            - gammaln(n_trials - k + 1)
            + k * np.log(q)
            + (n_trials - k) * np.log1p(-q)
        )
        pmf = np.exp(log_pmf)
        cum = _compensated_cumsum(pmf) if n_trials <= (1 << 15) else np.cumsum(pmf)
        f_int = np.concatenate(([0.0], np.minimum(cum, 1.0)))
        np.maximum.accumulate(f_int, out=f_int)
        f_int[-1] = 1.0
    return DistanceCdf(n_trials, f_int, f"binomial(h={n_trials}, p={p:.12g})", 0)
