"""Reproducible synthetic experiments.

Each experiment generates seeded datasets, measures dimensions, and
returns plot-ready rows plus summary statistics. Re-running a spec with
the same seed yields byte-identical output. Replicate counts and sizes
default to desk scale (tens of datasets, 2000 rows); raise them via the
spec to match larger studies.
"""
from __future__ import annotations

import json
import statistics
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import stats as sstats

from .baselines import avg_abs_correlation, kmeans, pca_summary
from .dataset import (
    BinaryDataset,
    MarginProfile,
    gen_independent,
    gen_markov,
    load,
    random_profile,
    random_subset,
    t_measure,
)
from .dimension import DimConfig, data_cdf, dimension_of, normalized_cd
from .errors import BindimError
from .streams import derive_seed

EXPERIMENT_NAMES = (
    "indep-box",
    "slope-musigma",
    "grid-n",
    "cd-vs-mu",
    "markov",
    "ncd-vs-sparsity",
    "ncd-vs-estimate",
    "pca-subsets",
    "cluster-dims",
)

_DEFAULT_REPLICATES = {
    "indep-box": 20,
    "slope-musigma": 50,
    "grid-n": 50,
    "cd-vs-mu": 50,
    "markov": 50,
    "ncd-vs-sparsity": 30,
    "ncd-vs-estimate": 25,
    "pca-subsets": 50,
    "cluster-dims": 5,
}

# real-data hooks: <name>.dat (fimi) looked up under a data directory
KNOWN_DATASETS = (
    "accidents", "courses", "kosarak", "paleo",
    "pos", "retail", "webview-1", "webview-2",
)


@dataclass
class ExperimentSpec:
    """Parameters of one experiment run; unset replicates use per-name defaults."""

    name: str
    replicates: int | None = None
    n_cols: int = 100
    n_rows: int = 2000
    seed: int = 0
    k_list: tuple[int, ...] = (50, 100, 150, 200)  # indep-box only
    n_clusters: int = 3                            # cluster-dims only
    subset_rows: int = 1000                        # pca-subsets only
    subset_cols: int = 50                          # pca-subsets only
    data_dir: str | None = None                    # real-data variants

    def __post_init__(self):
        if self.name not in EXPERIMENT_NAMES:
            raise ValueError(
                f"unknown experiment {self.name!r}; choose from {', '.join(EXPERIMENT_NAMES)}"
            )

    @property
    def n_replicates(self) -> int:
        return self.replicates if self.replicates is not None else _DEFAULT_REPLICATES[self.name]


def fmt_value(value) -> str:
    if value is None:
        return "NA"
    if isinstance(value, float):
        return format(value, ".10g")
    return str(value)


@dataclass
class ExperimentResult:
    name: str
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def to_tsv(self) -> str:
        lines = ["\t".join(self.columns)]
        lines.extend("\t".join(fmt_value(v) for v in row) for row in self.rows)
        lines.extend(f"# {key}\t{fmt_value(val)}" for key, val in self.summary.items())
        return "\n".join(lines) + "\n"

    def to_json(self, indent: int | None = None) -> str:
        payload = {
            "name": self.name,
            "columns": list(self.columns),
            "rows": [list(r) for r in self.rows],
            "summary": self.summary,
        }
        return json.dumps(payload, sort_keys=True, indent=indent)


# ---------------------------------------------------------------------------
# Seeded dataset builders
# ---------------------------------------------------------------------------

def _random_independent(n_cols: int, n_rows: int, seed: int):
    prof = random_profile(n_cols, "margin", derive_seed(seed, "profile"))
    return gen_independent(n_cols, n_rows, prof, derive_seed(seed, "cells")), prof


def _random_markov(n_cols: int, n_rows: int, seed: int):
    prof = random_profile(n_cols, "reversal", derive_seed(seed, "profile"))
    return gen_markov(n_cols, n_rows, prof, derive_seed(seed, "cells")), prof


def _rep_cfg(spec: ExperimentSpec, *tags) -> DimConfig:
    return DimConfig(seed=derive_seed(spec.seed, spec.name, *tags))


def _ols_slope(xs, ys) -> tuple[float, float]:
    slope, intercept = np.polyfit(np.asarray(xs, float), np.asarray(ys, float), 1)
    return float(slope), float(intercept)


# ---------------------------------------------------------------------------
# Experiment bodies
# ---------------------------------------------------------------------------

def _run_indep_box(spec: ExperimentSpec) -> ExperimentResult:
    """Normalized dimension of independent data for several column counts."""
    res = ExperimentResult(spec.name, ("k", "rep", "ncd"))
    per_k: dict[int, list[int]] = {}
    for k in spec.k_list:
        for rep in range(spec.n_replicates):
            seed = derive_seed(spec.seed, spec.name, k, rep)
            ds, _ = _random_independent(k, spec.n_rows, seed)
            ncd = normalized_cd(ds, _rep_cfg(spec, k, rep, "cfg")).h
            res.rows.append((k, rep, ncd))
            per_k.setdefault(k, []).append(ncd)
    for k in spec.k_list:
        res.summary[f"median_ncd_k{k}"] = float(statistics.median(per_k[k]))
    return res


def _run_slope_musigma(spec: ExperimentSpec) -> ExperimentResult:
    """Dimension of independent data against mu/sigma of its distances."""
    res = ExperimentResult(spec.name, ("rep", "mu_over_sigma", "cd"))
    xs, ys = [], []
    for rep in range(spec.n_replicates):
        seed = derive_seed(spec.seed, spec.name, rep)
        ds, _ = _random_independent(spec.n_cols, spec.n_rows, seed)
        cfg = _rep_cfg(spec, rep, "cfg")
        cdf = data_cdf(ds, cfg)
        mu, var = cdf.mean_var()
        ratio = mu / np.sqrt(var)
        cd = dimension_of(cdf, cfg)
        res.rows.append((rep, float(ratio), cd))
        xs.append(ratio)
        ys.append(cd)
    slope, intercept = _ols_slope(xs, ys)
    res.summary["fitted_slope"] = slope
    res.summary["fitted_intercept"] = intercept
    return res


def _run_grid_n(spec: ExperimentSpec) -> ExperimentResult:
    """Dimension with a 1-interval grid versus the default 50-interval grid."""
    res = ExperimentResult(spec.name, ("rep", "cd_n1", "cd_n50"))
    worst = 0.0
    for rep in range(spec.n_replicates):
        seed = derive_seed(spec.seed, spec.name, rep)
        ds, _ = _random_independent(spec.n_cols, spec.n_rows, seed)
        cfg_seed = derive_seed(spec.seed, spec.name, rep, "cfg")
        cdf = data_cdf(ds, DimConfig(seed=cfg_seed))
        cd1 = dimension_of(cdf, DimConfig(grid_n=1, seed=cfg_seed))
        cd50 = dimension_of(cdf, DimConfig(grid_n=50, seed=cfg_seed))
        res.rows.append((rep, cd1, cd50))
        worst = max(worst, abs(cd50 - cd1) / cd1)
    res.summary["max_rel_gap"] = worst
    return res


def _run_cd_vs_mu(spec: ExperimentSpec) -> ExperimentResult:
    """Dimension of independent data against the mean pairwise distance."""
    res = ExperimentResult(spec.name, ("rep", "mu", "cd"))
    xs, ys = [], []
    for rep in range(spec.n_replicates):
        seed = derive_seed(spec.seed, spec.name, rep)
        ds, _ = _random_independent(spec.n_cols, spec.n_rows, seed)
        cfg = _rep_cfg(spec, rep, "cfg")
        cdf = data_cdf(ds, cfg)
        mu, _ = cdf.mean_var()
        cd = dimension_of(cdf, cfg)
        res.rows.append((rep, float(mu), cd))
        xs.append(mu)
        ys.append(cd)
    res.summary["pearson_mu_cd"] = float(np.corrcoef(xs, ys)[0, 1])
    res.summary["fitted_slope"] = _ols_slope(xs, ys)[0]
    return res


def _run_markov(spec: ExperimentSpec) -> ExperimentResult:
    """Dimension of chain-generated data against its correlation measure t."""
    res = ExperimentResult(spec.name, ("rep", "t", "cd"))
    ts, cds = [], []
    for rep in range(spec.n_replicates):
        seed = derive_seed(spec.seed, spec.name, rep)
        ds, prof = _random_markov(spec.n_cols, spec.n_rows, seed)
        cfg = _rep_cfg(spec, rep, "cfg")
        cd = dimension_of(data_cdf(ds, cfg), cfg)
        t = t_measure(prof)
        res.rows.append((rep, t, cd))
        ts.append(t)
        cds.append(cd)
    rho = sstats.spearmanr(ts, cds).statistic
    res.summary["spearman_t_cd"] = float(rho)
    return res


def _run_ncd_vs_sparsity(spec: ExperimentSpec) -> ExperimentResult:
    """Normalized dimension against the mean distance (sparsity proxy)."""
    res = ExperimentResult(spec.name, ("rep", "mu", "ncd"))
    xs, ys = [], []
    for rep in range(spec.n_replicates):
        seed = derive_seed(spec.seed, spec.name, rep)
        ds, _ = _random_independent(spec.n_cols, spec.n_rows, seed)
        cfg = _rep_cfg(spec, rep, "cfg")
        mu, _ = data_cdf(ds, cfg).mean_var()
        ncd = normalized_cd(ds, cfg).h
        res.rows.append((rep, float(mu), ncd))
        xs.append(mu)
        ys.append(ncd)
    res.summary["pearson_mu_ncd"] = float(np.corrcoef(xs, ys)[0, 1])
    return res


def _run_ncd_vs_estimate(spec: ExperimentSpec) -> ExperimentResult:
    """Matched normalized dimension against its closed-form ratio estimate,
    on independent and on chain-correlated data."""
    res = ExperimentResult(spec.name, ("kind", "rep", "ncd_estimate", "ncd"))
    within = 0
    total = 0
    for kind, maker in (("indep", _random_independent), ("markov", _random_markov)):
        for rep in range(spec.n_replicates):
            seed = derive_seed(spec.seed, spec.name, kind, rep)
            ds, _ = maker(spec.n_cols, spec.n_rows, seed)
            cfg = _rep_cfg(spec, kind, rep, "cfg")
            try:
                out = normalized_cd(ds, cfg)
            except BindimError:
                res.rows.append((kind, rep, None, None))
                continue
            res.rows.append((kind, rep, out.ncd_estimate, out.h))
            total += 1
            if abs(out.h - out.ncd_estimate) / spec.n_cols <= 0.15:
                within += 1
    res.summary["frac_within_15pct_of_k"] = within / total if total else None
    return res


def _subset_measures(ds: BinaryDataset, cfg: DimConfig):
    k = ds.n_cols
    ncd = normalized_cd(ds, cfg).h
    pca90 = pca_summary(ds).components_for(0.9)
    corr = avg_abs_correlation(ds)
    return ncd / k, pca90 / k, corr


def _run_pca_subsets(spec: ExperimentSpec) -> ExperimentResult:
    """Normalized dimension versus PCA component count and average
    correlation over random row/column subsets."""
    res = ExperimentResult(spec.name, ("dataset", "rep", "ncd_over_k", "pca90_over_k", "avg_corr"))
    if spec.data_dir is None:
        base = _synthetic_correlated_base(spec)
        bases = [("synthetic", base)]
    else:
        bases = []
        for name in KNOWN_DATASETS:
            path = Path(spec.data_dir) / f"{name}.dat"
            if path.is_file():
                bases.append((name, load(path, "fimi")))
            else:
                res.rows.append((name, None, "SKIPPED", "SKIPPED", "SKIPPED"))
    for ds_name, base in bases:
        triples = []
        for rep in range(spec.n_replicates):
            seed = derive_seed(spec.seed, spec.name, ds_name, rep)
            sub = random_subset(base, "rows", min(spec.subset_rows, base.n_rows),
                                derive_seed(seed, "rows"))
            sub = random_subset(sub, "cols", min(spec.subset_cols, base.n_cols),
                                derive_seed(seed, "cols"))
            cfg = _rep_cfg(spec, ds_name, rep, "cfg")
            try:
                triple = _subset_measures(sub, cfg)
            except BindimError:
                res.rows.append((ds_name, rep, None, None, None))
                continue
            res.rows.append((ds_name, rep, *triple))
            triples.append(triple)
        if len(triples) >= 3:
            arr = np.asarray(triples)
            res.summary[f"{ds_name}_pearson_ncd_pca"] = float(np.corrcoef(arr[:, 0], arr[:, 1])[0, 1])
            res.summary[f"{ds_name}_pearson_ncd_corr"] = float(np.corrcoef(arr[:, 0], arr[:, 2])[0, 1])
    return res


def _synthetic_correlated_base(spec: ExperimentSpec) -> BinaryDataset:
    k = max(spec.n_cols, 2 * spec.subset_cols)
    n = max(spec.n_rows, 2 * spec.subset_rows)
    seed = derive_seed(spec.seed, spec.name, "base")
    ds, _ = _random_markov(k, n, seed)
    return ds


def _mixture_dataset(spec: ExperimentSpec, rep: int):
    """Block mixture: each component is dense on its own column band and
    sparse elsewhere, so k-means has real structure to recover."""
    k_comp = spec.n_clusters
    band = max(spec.n_cols // k_comp, 2)
    n_cols = band * k_comp
    rows_per = max(spec.n_rows // k_comp, 2)
    parts = []
    for c in range(k_comp):
        rng_seed = derive_seed(spec.seed, spec.name, rep, "component", c)
        prof = random_profile(band, "margin", rng_seed)
        # lift the band margins away from 0 so every component is nondegenerate
        values = np.full(n_cols, 0.01)
        values[c * band:(c + 1) * band] = 0.1 + 0.6 * prof.values
        parts.append(gen_independent(n_cols, rows_per, MarginProfile(values),
                                     derive_seed(rng_seed, "cells")))
    rows = [r for part in parts for r in part.rows]
    return BinaryDataset(n_cols, rows)


def _run_cluster_dims(spec: ExperimentSpec) -> ExperimentResult:
    """Dimensions of k-means clusters versus the whole dataset."""
    res = ExperimentResult(spec.name, ("rep", "part", "n_rows", "cd", "ncd"))
    whole_cds, mean_cluster_cds = [], []
    if spec.data_dir is not None:
        return _run_cluster_dims_real(spec, res)
    for rep in range(spec.n_replicates):
        ds = _mixture_dataset(spec, rep)
        clustering = kmeans(ds, spec.n_clusters, derive_seed(spec.seed, spec.name, rep, "kmeans"))
        cluster_cds, cluster_ncds = [], []
        for cid in range(spec.n_clusters):
            members = [ds.rows[i] for i in np.flatnonzero(clustering.assignments == cid)]
            part = BinaryDataset(ds.n_cols, members)
            cd, ncd = _part_dims(part, _rep_cfg(spec, rep, "cluster", cid))
            res.rows.append((rep, f"cluster{cid}", part.n_rows, cd, ncd))
            if cd is not None:
                cluster_cds.append(cd)
            if ncd is not None:
                cluster_ncds.append(ncd)
        if cluster_cds:
            res.rows.append((rep, "average", None, float(np.mean(cluster_cds)),
                             float(np.mean(cluster_ncds)) if cluster_ncds else None))
        whole_cd, whole_ncd = _part_dims(ds, _rep_cfg(spec, rep, "whole"))
        res.rows.append((rep, "whole", ds.n_rows, whole_cd, whole_ncd))
        if whole_cd is not None and cluster_cds:
            whole_cds.append(whole_cd)
            mean_cluster_cds.append(float(np.mean(cluster_cds)))
    if len(whole_cds) >= 3:
        res.summary["pearson_whole_vs_mean_cluster_cd"] = float(
            np.corrcoef(mean_cluster_cds, whole_cds)[0, 1]
        )
    return res


def _run_cluster_dims_real(spec: ExperimentSpec, res: ExperimentResult) -> ExperimentResult:
    for name in KNOWN_DATASETS:
        path = Path(spec.data_dir) / f"{name}.dat"
        if not path.is_file():
            res.rows.append((name, "SKIPPED", None, None, None))
            continue
        ds = load(path, "fimi")
        clustering = kmeans(ds, spec.n_clusters, derive_seed(spec.seed, spec.name, name, "kmeans"))
        for cid in range(spec.n_clusters):
            members = [ds.rows[i] for i in np.flatnonzero(clustering.assignments == cid)]
            part = BinaryDataset(ds.n_cols, members)
            cd, ncd = _part_dims(part, _rep_cfg(spec, name, "cluster", cid))
            res.rows.append((name, f"cluster{cid}", part.n_rows, cd, ncd))
        cd, ncd = _part_dims(ds, _rep_cfg(spec, name, "whole"))
        res.rows.append((name, "whole", ds.n_rows, cd, ncd))
    return res


def _part_dims(ds: BinaryDataset, cfg: DimConfig):
    try:
        cd = dimension_of(data_cdf(ds, cfg), cfg)
    except BindimError:
        return None, None
    try:
        ncd = normalized_cd(ds, cfg).h
    except BindimError:
        return cd, None
    return cd, ncd


_RUNNERS = {
    "indep-box": _run_indep_box,
    "slope-musigma": _run_slope_musigma,
    "grid-n": _run_grid_n,
    "cd-vs-mu": _run_cd_vs_mu,
    "markov": _run_markov,
    "ncd-vs-sparsity": _run_ncd_vs_sparsity,
    "ncd-vs-estimate": _run_ncd_vs_estimate,
    "pca-subsets": _run_pca_subsets,
    "cluster-dims": _run_cluster_dims,
}


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Run one named experiment; output is deterministic in the spec."""
    return _RUNNERS[spec.name](spec)
