"""Correlation dimension of binary data and its normalized variant.

The correlation dimension is the least-squares slope of (log r, log f(r))
over a radius range, with f the interpolated CDF of pairwise L1
distances. Radii are given either directly (``cd_at_radii``) or through
quantile levels of f (``cd_at_quantiles``; the radii are truncated below
at 1 to avoid misbehavior on extremely sparse data).

Raw slopes are hard to compare across datasets, so ``normalized_cd``
converts them to an equivalent number of independent 0/1 columns: first a
margin s is matched so that the independent model with the dataset's own
column count reproduces the dimension of its column-shuffled reference,
then the column count h is matched so the model at (h, s) reproduces the
dataset's dimension. Natural logarithms throughout.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .dataset import BinaryDataset, MarginProfile, margins
from .distances import (
    DistanceCdf,
    binomial_model,
    disagreement_probs,
    exact_cdf,
    independent_mc_cdf,
    sampled_cdf,
)
from .errors import (
    DegenerateDataError,
    DegenerateRangeError,
    InsufficientMassError,
    NoRootError,
    SaturationError,
)
from .streams import derive_seed

# Monte Carlo noise in a reference dimension can push the margin-matching
# target slightly above the model's value at s = 0.5 (its maximum) for
# data whose margins already sit near 0.5; targets within this factor of
# the maximum are clamped to s = 0.5 instead of failing.
_MARGIN_SLACK = 1.05


@dataclass
class DimConfig:
    """Shared knobs for the dimension estimators.

    alpha1, alpha2: quantile levels bounding the fitted radius range.
    grid_n: number of grid intervals in the log-log fit.
    sample_m: above this row count, pair sums use a row sample this big.
    ind_samples: Monte Carlo draws for independent-columns references.
    seed: master seed; every random choice is derived from it.
    search_tol: bisection tolerance for the matched margin.
    h_max: cap for the matched column-count search.
    """

    alpha1: float = 0.25
    alpha2: float = 0.75
    grid_n: int = 50
    sample_m: int = 10_000
    ind_samples: int = 10_000
    seed: int = 0
    search_tol: float = 1e-6
    h_max: int = 1 << 20

    def __post_init__(self):
        if not 0.0 < self.alpha1 < self.alpha2 < 1.0:
            raise ValueError("need 0 < alpha1 < alpha2 < 1")
        if self.grid_n < 1:
            raise ValueError("grid_n must be >= 1")
        if self.sample_m < 1 or self.ind_samples < 1:
            raise ValueError("sample sizes must be >= 1")
        if self.search_tol <= 0:
            raise ValueError("search_tol must be positive")
        if self.h_max < 1:
            raise ValueError("h_max must be >= 1")


@dataclass(eq=False)
class DimensionEstimate:
    """A fitted correlation dimension.

    ``points`` holds the (log r, log f(r)) pairs on the uniform grid of
    grid_n + 1 radii from r1 to r2; ``slope`` is their ordinary
    least-squares slope and is recomputable from ``points``.
    """

    slope: float
    intercept: float
    r1: float
    r2: float
    grid_n: int
    points: np.ndarray

    def as_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "r1": self.r1,
            "r2": self.r2,
            "grid_n": self.grid_n,
            "points": [[float(x), float(y)] for x, y in self.points],
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=indent)

    def points_tsv(self) -> str:
        lines = ["log_r\tlog_f"]
        lines.extend(f"{x:.12g}\t{y:.12g}" for x, y in self.points)
        return "\n".join(lines) + "\n"


@dataclass
class NormalizedResult:
    """Outcome of the normalized-dimension matching.

    h: matched number of independent columns (the normalized dimension).
    s: matched margin for the independent model.
    cd_data / cd_ind: dimension of the data and of its independent
    reference; cd_matched: model dimension achieved at (h, s).
    ncd_estimate: closed-form shortcut (cd_data / cd_ind)^2 * n_cols.
    """

    h: int
    s: float
    cd_data: float
    cd_ind: float
    cd_matched: float
    ncd_estimate: float

    def as_dict(self) -> dict:
        return {
            "h": self.h,
            "s": self.s,
            "cd_data": self.cd_data,
            "cd_ind": self.cd_ind,
            "cd_matched": self.cd_matched,
            "ncd_estimate": self.ncd_estimate,
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=indent)


# ---------------------------------------------------------------------------
# Slope fits
# ---------------------------------------------------------------------------

def cd_at_radii(cdf: DistanceCdf, r1: float, r2: float, grid_n: int) -> DimensionEstimate:
    """Least-squares slope of (log r, log f(r)) on grid_n + 1 radii
    uniformly spanning [r1, r2]."""
    if grid_n < 1:
        raise ValueError("grid_n must be >= 1")
    if r1 <= 0.0:
        raise ValueError(f"r1 must be positive, got {r1}")
    if r2 > cdf.n_cols + 1:
        raise ValueError(f"r2={r2} beyond the CDF support {cdf.n_cols + 1}")
    if r1 >= r2:
        raise DegenerateRangeError(f"radius range [{r1}, {r2}] is empty")
    if cdf.evaluate(r1) <= 0.0:
        raise InsufficientMassError(f"f({r1}) = 0: no pairs below the lower radius")
    r = np.linspace(r1, r2, grid_n + 1)
    x = np.log(r)
    y = np.log(cdf.evaluate_many(r))
    slope, intercept = np.polyfit(x, y, 1)
    return DimensionEstimate(
        float(slope), float(intercept), float(r1), float(r2), grid_n,
        np.column_stack([x, y]),
    )


def cd_at_quantiles(cdf: DistanceCdf, alpha1: float, alpha2: float,
                    grid_n: int) -> DimensionEstimate:
    """Dimension with radii at the alpha1 and alpha2 quantiles of f,
    truncated below at 1."""
    if not 0.0 < alpha1 < alpha2 < 1.0:
        raise ValueError("need 0 < alpha1 < alpha2 < 1")
    raw1 = cdf.inverse(alpha1)
    raw2 = cdf.inverse(alpha2)
    r1 = max(raw1, 1.0)
    r2 = max(raw2, 1.0)
    if r2 <= r1:
        raise DegenerateRangeError(
            f"quantile radii collapsed: inverse({alpha1})={raw1:.6g}, "
            f"inverse({alpha2})={raw2:.6g} truncate to [{r1}, {r2}]"
        )
    return cd_at_radii(cdf, r1, r2, grid_n)


def dimension_of(cdf: DistanceCdf, cfg: DimConfig) -> float:
    """cd_at_quantiles under a config; returns just the slope."""
    return cd_at_quantiles(cdf, cfg.alpha1, cfg.alpha2, cfg.grid_n).slope


# ---------------------------------------------------------------------------
# Closed forms for independent columns
# ---------------------------------------------------------------------------

def slope_constant(alpha: float) -> float:
    """Constant relating the dimension of independent data to mu/sigma of
    its distance distribution: |ln((1-alpha)/alpha)| / (2 |Phi^-1(alpha)|),
    about 0.815 at alpha = 1/4. Symmetric in alpha <-> 1-alpha."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if alpha == 0.5:
        raise ValueError("slope constant is undefined at alpha = 0.5")
    return abs(math.log((1.0 - alpha) / alpha)) / (2.0 * abs(float(ndtri(alpha))))


def independent_cd_approx(profile: MarginProfile, alpha: float) -> float:
    """Closed-form dimension approximation for independent columns with
    the given margins, at quantile levels (alpha, 1-alpha):
    slope_constant(alpha) * sum(q) / sqrt(sum(q (1-q))) with q = 2p(1-p)."""
    q = disagreement_probs(profile)
    sum_q = float(q.sum())
    if sum_q == 0.0:
        raise DegenerateDataError("all margins are 0 or 1: distances are a point mass")
    return slope_constant(alpha) * sum_q / math.sqrt(float((q * (1.0 - q)).sum()))


def ncd_from_ratio(cd_data: float, cd_ind: float, n_cols: int) -> float:
    """Closed-form normalized-dimension estimate (cd_data/cd_ind)^2 * n_cols."""
    if cd_ind <= 0.0:
        raise ValueError(f"reference dimension must be positive, got {cd_ind}")
    return (cd_data / cd_ind) ** 2 * n_cols


def independent_model_cd(n_cols_model: int, p: float, cfg: DimConfig) -> float:
    """Dimension of the uniform independent model (n_cols_model columns of
    margin p), from its exact binomial distance CDF. No Monte Carlo."""
    if n_cols_model < 1:
        raise ValueError("the model needs at least one column")
    if not 0.0 < p < 1.0:
        raise ValueError(f"margin must be in (0, 1), got {p}")
    return dimension_of(binomial_model(n_cols_model, p), cfg)


def cd_at_mean_radii(profile: MarginProfile, c1: float, c2: float,
                     cfg: DimConfig) -> tuple[float, float]:
    """Dimension of an independent-columns model fitted between c1*mu and
    c2*mu, where mu = sum(2p(1-p)) is the model's mean distance.

    Returns (mu, slope). Uses the exact binomial CDF when all margins are
    equal, Monte Carlo otherwise. A lower radius below 1 is clamped to 1
    with a warning.
    """
    if not 0.0 < c1 < c2 <= 1.0:
        raise ValueError("need 0 < c1 < c2 <= 1")
    q = disagreement_probs(profile)
    mu = float(q.sum())
    if mu == 0.0:
        raise DegenerateDataError("all margins are 0 or 1: mean distance is 0")
    k = len(profile)
    if c2 * mu > k:
        raise ValueError(f"upper radius {c2 * mu:.6g} exceeds the column count {k}")
    r1, r2 = c1 * mu, c2 * mu
    if r1 < 1.0:
        warnings.warn(f"lower radius {r1:.6g} below 1; clamped", stacklevel=2)
        r1 = 1.0
    if r2 <= r1:
        raise DegenerateRangeError(f"radius range [{r1}, {r2}] collapsed after clamping")
    p = profile.values
    if np.ptp(p) == 0.0:
        cdf = binomial_model(k, float(p[0]))
    else:
        cdf = independent_mc_cdf(profile, cfg.ind_samples, derive_seed(cfg.seed, "mean-radii"))
    return mu, cd_at_radii(cdf, r1, r2, cfg.grid_n).slope


# ---------------------------------------------------------------------------
# Normalized dimension
# ---------------------------------------------------------------------------

def data_cdf(ds: BinaryDataset, cfg: DimConfig) -> DistanceCdf:
    """Distance CDF of a dataset under the config's estimator rule: exact
    pair enumeration up to sample_m rows, row-vs-sample above."""
    if ds.n_rows <= cfg.sample_m:
        return exact_cdf(ds)
    return sampled_cdf(ds, "row-vs-sample", cfg.sample_m, derive_seed(cfg.seed, "data-sample"))


def _model_cd_or_none(n_cols_model: int, p: float, cfg: DimConfig) -> float | None:
    """independent_model_cd, with a collapsed radius range read as
    'dimension below anything measurable'."""
    try:
        return independent_model_cd(n_cols_model, p, cfg)
    except DegenerateRangeError:
        return None


def _match_margin(n_cols: int, target: float, cfg: DimConfig) -> float:
    """Bisection for s in (0, 0.5] with model(n_cols, s) = target.

    The model dimension is nondecreasing in s on (0, 0.5]; degenerate
    evaluations at tiny s count as below the target.
    """
    hi = 0.5
    v_hi = _model_cd_or_none(n_cols, hi, cfg)
    if v_hi is None:
        raise NoRootError(
            f"independent model is degenerate even at s=0.5 (n_cols={n_cols})",
            target=target, n_cols=n_cols,
        )
    if target > v_hi:
        if target <= v_hi * _MARGIN_SLACK:
            return 0.5
        raise NoRootError(
            f"target dimension {target:.6g} above the model maximum {v_hi:.6g} at s=0.5",
            target=target, model_max=v_hi, n_cols=n_cols,
        )
    lo = None
    s = 0.5
    while lo is None:
        s /= 2.0
        if s < 1e-12:
            raise NoRootError(
                f"target dimension {target:.6g} not bracketed above s=1e-12",
                target=target, n_cols=n_cols,
            )
        v = _model_cd_or_none(n_cols, s, cfg)
        if v is None or v <= target:
            lo = s
        else:
            hi = s
    while hi - lo > cfg.search_tol:
        mid = 0.5 * (lo + hi)
        v = _model_cd_or_none(n_cols, mid, cfg)
        if v is None or v < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _match_columns(target: float, s: float, cfg: DimConfig) -> tuple[int, float]:
    """Integer search for h minimizing |model(h, s) - target|.

    Doubles h until the model crosses the target, then bisects; ties
    break toward the smaller h. The model dimension is nondecreasing
    in h for fixed s.
    """
    v = _model_cd_or_none(1, s, cfg)
    if v is not None and v >= target:
        return 1, v
    lo, v_lo = 1, v
    h = 1
    while True:
        if h >= cfg.h_max:
            raise SaturationError(
                f"column search hit h_max={cfg.h_max} below target {target:.6g}"
            )
        h = min(2 * h, cfg.h_max)
        v = _model_cd_or_none(h, s, cfg)
        if v is not None and v >= target:
            hi, v_hi = h, v
            break
        lo, v_lo = h, v
    while hi - lo > 1:
        mid = (lo + hi) // 2
        v = _model_cd_or_none(mid, s, cfg)
        if v is not None and v >= target:
            hi, v_hi = mid, v
        else:
            lo, v_lo = mid, v
    if v_lo is not None and abs(v_lo - target) <= abs(v_hi - target):
        return lo, v_lo
    return hi, v_hi


def normalized_cd_from(cd_data: float, cd_ind: float, n_cols: int,
                       cfg: DimConfig) -> NormalizedResult:
    """Normalized dimension from already-computed data and reference
    dimensions: match the margin against cd_ind, then the column count
    against cd_data."""
    s = _match_margin(n_cols, cd_ind, cfg)
    h, cd_matched = _match_columns(cd_data, s, cfg)
    return NormalizedResult(
        h=h, s=s, cd_data=cd_data, cd_ind=cd_ind, cd_matched=cd_matched,
        ncd_estimate=ncd_from_ratio(cd_data, cd_ind, n_cols),
    )


def normalized_cd(ds: BinaryDataset, cfg: DimConfig | None = None) -> NormalizedResult:
    """Normalized correlation dimension of a dataset.

    For data with independent columns the result is close to the actual
    column count, regardless of sparsity; dependency structure pulls it
    down.
    """
    cfg = cfg if cfg is not None else DimConfig()
    cd_data = dimension_of(data_cdf(ds, cfg), cfg)
    prof = margins(ds)
    ind_cdf = independent_mc_cdf(prof, cfg.ind_samples, derive_seed(cfg.seed, "ind-reference"))
    cd_ind = dimension_of(ind_cdf, cfg)
    return normalized_cd_from(cd_data, cd_ind, ds.n_cols, cfg)
