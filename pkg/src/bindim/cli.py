"""Command-line interface.

Subcommands: dim, ncd, report, gen, pca, corr, cluster, experiment.
Output is TSV on stdout (JSON with --json) and is byte-identical across
repeated invocations with the same flags and seed. Exit codes: 0 success,
1 structured computation error, 2 usage or format error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .baselines import avg_abs_correlation, kmeans, pca_summary
from .dataset import (
    FORMATS,
    MarginProfile,
    dumps,
    gen_independent,
    gen_markov,
    load,
    random_profile,
)
from .dimension import DimConfig, cd_at_quantiles, data_cdf, normalized_cd
from .errors import BindimError, FormatError
from .experiments import EXPERIMENT_NAMES, ExperimentSpec, fmt_value, run_experiment
from .reports import DatasetReport, dataset_report
from .streams import derive_seed


def _add_input_args(p):
    p.add_argument("--format", choices=FORMATS, default="fimi", help="input file format")
    p.add_argument("--cols", type=int, default=None,
                   help="raise the inferred column count to this value")


def _add_dim_args(p):
    p.add_argument("--alpha1", type=float, default=0.25)
    p.add_argument("--alpha2", type=float, default=0.75)
    p.add_argument("--grid", type=int, default=50, help="grid intervals for the slope fit")
    p.add_argument("--sample", type=int, default=10_000,
                   help="row-sample size used above this many rows")
    p.add_argument("--seed", type=int, default=0)


def _cfg_from_args(args) -> DimConfig:
    return DimConfig(
        alpha1=args.alpha1,
        alpha2=args.alpha2,
        grid_n=args.grid,
        sample_m=args.sample,
        ind_samples=getattr(args, "ind_samples", 10_000),
        seed=args.seed,
        search_tol=getattr(args, "tol", 1e-6),
        h_max=getattr(args, "h_max", 1 << 20),
    )


def _load_dataset(args, path=None):
    path = Path(path if path is not None else args.file)
    if not path.is_file():
        raise FormatError(f"no such file: {path}")
    return load(path, args.format, args.cols)


def _print_tsv(columns, rows):
    sys.stdout.write("\t".join(columns) + "\n")
    for row in rows:
        sys.stdout.write("\t".join(fmt_value(v) for v in row) + "\n")


def _print_json(payload):
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_dim(args) -> int:
    ds = _load_dataset(args)
    cfg = _cfg_from_args(args)
    cdf = data_cdf(ds, cfg)
    est = cd_at_quantiles(cdf, cfg.alpha1, cfg.alpha2, cfg.grid_n)
    if args.points:
        Path(args.points).write_text(est.points_tsv(), encoding="utf-8")
    name = Path(args.file).name
    if args.json:
        payload = est.as_dict()
        payload.update(name=name, n_rows=ds.n_rows, n_cols=ds.n_cols, basis=cdf.basis)
        if not args.points:
            del payload["points"]
        _print_json(payload)
    else:
        _print_tsv(
            ("name", "n_rows", "n_cols", "r1", "r2", "cd"),
            [(name, ds.n_rows, ds.n_cols, est.r1, est.r2, est.slope)],
        )
    return 0


def _cmd_ncd(args) -> int:
    ds = _load_dataset(args)
    cfg = _cfg_from_args(args)
    res = normalized_cd(ds, cfg)
    name = Path(args.file).name
    if args.json:
        payload = res.as_dict()
        payload.update(name=name, n_rows=ds.n_rows, n_cols=ds.n_cols)
        _print_json(payload)
    else:
        _print_tsv(
            ("name", "n_rows", "n_cols", "ncd", "s", "cd_data", "cd_ind",
             "cd_matched", "ncd_estimate"),
            [(name, ds.n_rows, ds.n_cols, res.h, res.s, res.cd_data,
              res.cd_ind, res.cd_matched, res.ncd_estimate)],
        )
    return 0


def _cmd_report(args) -> int:
    reports = []
    for path in args.files:
        ds = _load_dataset(args, path)
        reports.append(dataset_report(ds, _cfg_from_args(args), Path(path).name))
    if args.json:
        _print_json([rep.as_dict(args.timings) for rep in reports])
    else:
        _print_tsv(DatasetReport.header(args.timings),
                   [rep.row(args.timings) for rep in reports])
    return 0


def _cmd_gen(args) -> int:
    if args.p is not None and not 0.0 <= args.p <= 1.0:
        raise ValueError("--p must lie in [0, 1]")
    kind = "margin" if args.kind == "indep" else "reversal"
    if args.p is not None:
        profile = MarginProfile([args.p] * args.k, kind)
    else:
        profile = random_profile(args.k, kind, derive_seed(args.seed, "gen-profile"))
    cell_seed = derive_seed(args.seed, "gen-cells")
    if args.kind == "indep":
        ds = gen_independent(args.k, args.n, profile, cell_seed)
    else:
        ds = gen_markov(args.k, args.n, profile, cell_seed)
    text = dumps(ds, args.fmt)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_pca(args) -> int:
    ds = _load_dataset(args)
    summary = pca_summary(ds)
    components = summary.components_for(args.frac)
    name = Path(args.file).name
    if args.eigenvalues:
        Path(args.eigenvalues).write_text(summary.to_tsv(), encoding="utf-8")
    if args.json:
        _print_json({
            "name": name,
            "n_rows": ds.n_rows,
            "n_cols": ds.n_cols,
            "frac": args.frac,
            "components": components,
            "total_variance": summary.total_variance,
            "eigenvalues": [float(v) for v in summary.eigenvalues],
        })
    else:
        _print_tsv(("name", "n_rows", "n_cols", "frac", "components"),
                   [(name, ds.n_rows, ds.n_cols, args.frac, components)])
    return 0


def _cmd_corr(args) -> int:
    ds = _load_dataset(args)
    value = avg_abs_correlation(ds)
    name = Path(args.file).name
    if args.json:
        _print_json({"name": name, "n_rows": ds.n_rows, "n_cols": ds.n_cols,
                     "avg_abs_correlation": value})
    else:
        _print_tsv(("name", "n_rows", "n_cols", "avg_abs_correlation"),
                   [(name, ds.n_rows, ds.n_cols, value)])
    return 0


def _cmd_cluster(args) -> int:
    ds = _load_dataset(args)
    result = kmeans(ds, args.k, args.seed)
    if args.json:
        _print_json({
            "k": result.k,
            "objective": result.objective,
            "n_iter": result.n_iter,
            "assignments": [int(a) for a in result.assignments],
        })
    else:
        sys.stdout.write(result.assignments_text())
    return 0


def _cmd_experiment(args) -> int:
    spec = ExperimentSpec(
        name=args.name,
        replicates=args.replicates,
        n_cols=args.k,
        n_rows=args.n,
        seed=args.seed,
        k_list=tuple(int(v) for v in args.k_list.split(",")) if args.k_list else (50, 100, 150, 200),
        n_clusters=args.clusters,
        subset_rows=args.subset_rows,
        subset_cols=args.subset_cols,
        data_dir=args.data_dir,
    )
    result = run_experiment(spec)
    sys.stdout.write(result.to_json(indent=2) + "\n" if args.json else result.to_tsv())
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bindim",
        description="Correlation dimension and normalized correlation dimension "
                    "of sparse binary datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim", help="correlation dimension of a dataset file")
    p.add_argument("file")
    _add_input_args(p)
    _add_dim_args(p)
    p.add_argument("--points", default=None, help="write the fitted log-log points to this TSV")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_dim)

    p = sub.add_parser("ncd", help="normalized correlation dimension of a dataset file")
    p.add_argument("file")
    _add_input_args(p)
    _add_dim_args(p)
    p.add_argument("--ind-samples", dest="ind_samples", type=int, default=10_000)
    p.add_argument("--tol", type=float, default=1e-6, help="margin bisection tolerance")
    p.add_argument("--h-max", dest="h_max", type=int, default=1 << 20)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_ncd)

    p = sub.add_parser("report", help="summary rows for one or more dataset files")
    p.add_argument("files", nargs="+")
    _add_input_args(p)
    _add_dim_args(p)
    p.add_argument("--ind-samples", dest="ind_samples", type=int, default=10_000)
    p.add_argument("--timings", action="store_true",
                   help="append wall-clock time (breaks byte-for-byte reproducibility)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("gen", help="generate a synthetic dataset")
    p.add_argument("kind", choices=("indep", "markov"))
    p.add_argument("--k", type=int, required=True, help="number of columns")
    p.add_argument("--n", type=int, required=True, help="number of rows")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", type=float, default=None,
                   help="constant margin (indep) or flip probability (markov); "
                        "random profile when omitted")
    p.add_argument("--out", default=None, help="output path (stdout when omitted)")
    p.add_argument("--fmt", choices=FORMATS, default="fimi")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("pca", help="PCA components needed for a variance fraction")
    p.add_argument("file")
    _add_input_args(p)
    p.add_argument("--frac", type=float, default=0.9)
    p.add_argument("--eigenvalues", default=None, help="write the spectrum to this TSV")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_pca)

    p = sub.add_parser("corr", help="average absolute column correlation")
    p.add_argument("file")
    _add_input_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_corr)

    p = sub.add_parser("cluster", help="k-means cluster assignments, one id per line")
    p.add_argument("file")
    _add_input_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("experiment", help="run a named synthetic experiment")
    p.add_argument("name", choices=EXPERIMENT_NAMES)
    p.add_argument("--replicates", type=int, default=None)
    p.add_argument("--k", type=int, default=100, help="columns per generated dataset")
    p.add_argument("--n", type=int, default=2000, help="rows per generated dataset")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k-list", default=None, help="comma-separated column counts (indep-box)")
    p.add_argument("--clusters", type=int, default=3)
    p.add_argument("--subset-rows", type=int, default=1000)
    p.add_argument("--subset-cols", type=int, default=50)
    p.add_argument("--data-dir", default=None,
                   help="directory of real datasets; missing files are reported as SKIPPED")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"bindim: format error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"bindim: usage error: {exc}", file=sys.stderr)
        return 2
    except BindimError as exc:
        print(f"bindim: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
