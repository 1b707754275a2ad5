"""Command-line interface: ``fcshape cluster|benchmark|validate|stats|plot``.

Exit codes: 0 success, 2 configuration/usage error, 3 input parse error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import io as fio
from . import plots
from .clusterers import ALGORITHMS, ClusterConfig, ConfigError, run
from .series import InvalidSeriesError, ParseError, load_ucr
from .significance import friedman, wilcoxon_signed_rank
from .validity import evaluate

log = logging.getLogger("fcshape")

DATA_DIR_ENV = "FCSHAPE_DATA_DIR"
EXIT_CONFIG = 2
EXIT_PARSE = 3
METRICS = ("ri", "ari", "nmi", "vi")
MIN_OPTIMAL = {"vi"}


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _config(args, c):
    return ClusterConfig(
        c=c,
        m=args.m,
        max_iter=args.max_iter,
        epsilon=args.tol,
        seed=args.seed,
        init=args.init,
        sbd_unsquared=args.sbd_unsquared,
    )


def _load(path, merge=None):
    try:
        return load_ucr(path, merge=merge)
    except (ParseError, InvalidSeriesError) as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    except OSError as exc:
        raise CliError(f"cannot read {exc.filename}: {exc.strerror}", EXIT_PARSE) from None


def cmd_cluster(args):
    data = _load(args.input, args.merge)
    c = args.clusters
    if c is None:
        if data.labels is None:
            raise CliError("--clusters is required for unlabeled data", EXIT_CONFIG)
        c = data.n_classes
    try:
        result = run(args.algorithm, data, _config(args, c))
    except ConfigError as exc:
        raise CliError(str(exc), EXIT_CONFIG) from None
    text = fio.RunArtifact.from_result(result, data.name).to_json()
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    return 0


# ---------------------------------------------------------------- benchmark


def discover_datasets(data_dir):
    """``[(name, path, merge_path_or_None)]`` sorted by name.

    Subdirectories holding ``*_TRAIN*`` and ``*_TEST*`` files (the UCR archive
    layout) become one merged dataset each; loose files pair up the same way
    by prefix, and any other file is a dataset on its own.
    """
    found = {}

    def add_files(files, default_name=None):
        groups = {}
        for f in sorted(files):
            base = os.path.basename(f)
            stem = os.path.splitext(base)[0]
            for tag in ("_TRAIN", "_TEST"):
                if stem.endswith(tag):
                    groups.setdefault(stem[: -len(tag)], {})[tag] = f
                    break
            else:
                groups.setdefault(stem, {})["single"] = f
        for name, parts in groups.items():
            if "_TRAIN" in parts or "_TEST" in parts:
                first = parts.get("_TRAIN") or parts.get("_TEST")
                second = parts.get("_TEST") if "_TRAIN" in parts else None
                found[default_name or name] = (first, second)
            else:
                found[name] = (parts["single"], None)

    entries = sorted(os.listdir(data_dir))
    loose = []
    for e in entries:
        full = os.path.join(data_dir, e)
        if os.path.isdir(full):
            files = [
                os.path.join(full, f)
                for f in os.listdir(full)
                if os.path.isfile(os.path.join(full, f)) and not f.startswith(".")
                and ("_TRAIN" in f or "_TEST" in f)
            ]
            if files:
                add_files(files, default_name=e)
        elif not e.startswith(".") and not e.endswith((".json", ".md")):
            loose.append(full)
    add_files(loose)
    return [(name, *found[name]) for name in sorted(found)]


def _one_run(task):
    name, X, labels, algorithm, run_idx, seed, cfg_kwargs = task
    from .series import Dataset

    data = Dataset(X, labels, name)
    cfg = ClusterConfig(c=data.n_classes, seed=seed, **cfg_kwargs)
    result = run(algorithm, data, cfg)
    report = evaluate(result.labels, data.labels)
    return {
        "dataset": name,
        "algorithm": algorithm,
        "run": run_idx,
        "seed": seed,
        "ri": report.ri,
        "ari": report.ari,
        "nmi": report.nmi,
        "vi": report.vi,
        "iterations": result.iterations,
        "cpu_seconds": result.elapsed_seconds,
    }


def grand_averages(records, algorithms):
    rows = []
    for a in algorithms:
        recs = [r for r in records if r["algorithm"] == a]
        if not recs:
            continue
        rows.append((a, *(float(np.mean([r[m] for r in recs])) for m in METRICS), len(recs)))
    return rows


def cmd_benchmark(args):
    data_dir = args.data_dir or os.environ.get(DATA_DIR_ENV)
    if not data_dir:
        raise CliError(f"--data-dir not given and ${DATA_DIR_ENV} unset", EXIT_CONFIG)
    if not os.path.isdir(data_dir):
        raise CliError(f"data directory not found: {data_dir}", EXIT_CONFIG)
    algorithms = [a.strip() for a in args.algorithms.split(",") if a.strip()]
    for a in algorithms:
        if a not in ALGORITHMS:
            raise CliError(f"unknown algorithm {a!r}", EXIT_CONFIG)
    if args.runs < 1:
        raise CliError("--runs must be positive", EXIT_CONFIG)

    cfg_kwargs = dict(
        m=args.m,
        max_iter=args.max_iter,
        epsilon=args.tol,
        init=args.init,
        sbd_unsquared=args.sbd_unsquared,
    )
    manifest = {"data_dir": os.path.abspath(data_dir), "datasets": [], "skipped": []}
    tasks = []
    for name, path, merge in discover_datasets(data_dir):
        try:
            data = load_ucr(path, merge=merge, name=name)
            if data.labels is None or data.n_classes >= data.n:
                raise InvalidSeriesError("needs ground-truth labels with fewer classes than series")
        except (ParseError, InvalidSeriesError, OSError) as exc:
            log.warning("skipping %s: %s", name, exc)
            manifest["skipped"].append({"dataset": name, "reason": str(exc)})
            continue
        manifest["datasets"].append({"dataset": name, "n": data.n, "p": data.p, "c": data.n_classes})
        for algorithm, r in itertools.product(algorithms, range(1, args.runs + 1)):
            tasks.append((name, data.X, data.labels, algorithm, r, args.seed + r, cfg_kwargs))

    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(_one_run, tasks, chunksize=1))
    else:
        records = [_one_run(t) for t in tasks]
    # deterministic reduce: dataset, then requested algorithm order, then run
    order = {a: i for i, a in enumerate(algorithms)}
    records.sort(key=lambda r: (r["dataset"], order[r["algorithm"]], r["run"]))
    if args.no_timing:
        for r in records:
            r["cpu_seconds"] = 0.0

    if args.output in (None, "-"):
        fio.write_records(sys.stdout, records)
    else:
        with open(args.output, "w", newline="") as fh:
            fio.write_records(fh, records)
    manifest_path = args.manifest or (
        None if args.output in (None, "-") else args.output + ".manifest.json"
    )
    if manifest_path:
        with open(manifest_path, "w") as fh:
            json.dump(manifest, fh, indent=1)
            fh.write("\n")

    if args.summary:
        out = sys.stderr if args.output in (None, "-") else sys.stdout
        print("algorithm,ri,ari,nmi,vi,records", file=out)
        for a, ri, ari, nmi, vi, count in grand_averages(records, algorithms):
            print(f"{a},{ri:.3f},{ari:.3f},{nmi:.3f},{vi:.3f},{count}", file=out)
        if any(r["cpu_seconds"] for r in records):
            print("algorithm,mean_cpu_seconds", file=out)
            for a in algorithms:
                secs = [r["cpu_seconds"] for r in records if r["algorithm"] == a]
                if secs:
                    print(f"{a},{np.mean(secs):.2f}", file=out)
    return 0


# ----------------------------------------------------------------- validate


def read_labels(path):
    """Labels from a run artifact, a UCR file (first column) or a plain list."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_PARSE) from None
    if text.lstrip().startswith("{"):
        try:
            return list(fio.RunArtifact.from_json(text).labels)
        except (ValueError, KeyError) as exc:
            raise CliError(f"{path}: {exc}", EXIT_PARSE) from None
    lines = [ln for ln in text.splitlines() if ln.strip()]
    try:
        if len(lines) > 1 and len(lines[0].replace("\t", ",").split(",")) > 1:
            return [int(float(ln.replace("\t", ",").split(",")[0])) for ln in lines]
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError as exc:
        raise CliError(f"{path}: bad label ({exc})", EXIT_PARSE) from None


def cmd_validate(args):
    truth = read_labels(args.labels)
    part = read_labels(args.partition)
    if len(truth) != len(part):
        raise CliError(
            f"partition has {len(part)} labels but ground truth has {len(truth)}", EXIT_PARSE
        )
    wanted = [m.strip() for m in args.indices.split(",") if m.strip()]
    for m in wanted:
        if m not in METRICS:
            raise CliError(f"unknown index {m!r}", EXIT_CONFIG)
    report = evaluate(part, truth).as_dict()
    for m in wanted:
        print(f"{m} {report[m]:.6f}")
    return 0


# -------------------------------------------------------------------- stats


def _read_results(path):
    try:
        return fio.read_records(path)
    except fio.SchemaError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_PARSE) from None
    except (ValueError, KeyError) as exc:
        raise CliError(f"{path}: malformed record ({exc})", EXIT_PARSE) from None


def _algorithm_order(records):
    seen = []
    for r in records:
        if r["algorithm"] not in seen:
            seen.append(r["algorithm"])
    return seen


def cmd_stats(args):
    records = _read_results(args.results)
    means = fio.per_dataset_means(records, args.metric)
    algos = _algorithm_order(records)
    if len(algos) < 2:
        raise CliError("need results for at least 2 algorithms", EXIT_CONFIG)
    sign = -1.0 if args.metric in MIN_OPTIMAL else 1.0
    if args.test == "wilcoxon":
        print(f"# metric={args.metric} alpha={args.alpha}")
        print("Method,R+,R-,p-value,n")
        for a, b in itertools.combinations(algos, 2):
            common = sorted(set(means[a]) & set(means[b]))
            sa = [sign * means[a][d] for d in common]
            sb = [sign * means[b][d] for d in common]
            w = wilcoxon_signed_rank(sa, sb, alpha=args.alpha)
            print(f"{a} vs {b},{w.r_plus:g},{w.r_minus:g},{w.p_value:.3e},{w.n_effective}")
        return 0
    common = sorted(set.intersection(*(set(means[a]) for a in algos)))
    if len(common) < 2:
        raise CliError("friedman needs at least 2 datasets shared by all algorithms", EXIT_CONFIG)
    table = np.array([[means[a][d] for a in algos] for d in common])
    res = friedman(table, alpha=args.alpha, higher_is_better=args.metric not in MIN_OPTIMAL)
    print(f"# metric={args.metric} alpha={args.alpha} datasets={res.n}")
    print("algorithm,avg_rank")
    for a, rank in sorted(zip(algos, res.avg_ranks), key=lambda t: t[1]):
        print(f"{a},{rank:.4f}")
    print(f"statistic,{res.statistic:.6g}")
    print(f"p-value,{res.p_value:.3e}")
    return 0


# --------------------------------------------------------------------- plot


def cmd_plot(args):
    prefix = args.output
    if args.kind == "scatter":
        if not (args.results and args.x_algorithm and args.y_algorithm):
            raise CliError("scatter needs --results, --x-algorithm and --y-algorithm", EXIT_CONFIG)
        means = fio.per_dataset_means(_read_results(args.results), args.metric)
        for a in (args.x_algorithm, args.y_algorithm):
            if a not in means:
                raise CliError(f"algorithm {a!r} not in {args.results}", EXIT_CONFIG)
        rows, counts = plots.scatter_points(means[args.x_algorithm], means[args.y_algorithm])
        with open(prefix + ".tsv", "w") as fh:
            fh.write(f"dataset\t{args.x_algorithm}\t{args.y_algorithm}\n")
            for d, x, y in rows:
                fh.write(f"{d}\t{x!r}\t{y!r}\n")
        lo = 0.0 if args.metric != "vi" else min([0.0] + [min(x, y) for _, x, y in rows])
        hi = 1.0 if args.metric != "vi" else max([1.0] + [max(x, y) for _, x, y in rows])
        if args.metric == "ari":
            lo = min([0.0] + [min(x, y) for _, x, y in rows])
        with open(prefix + ".svg", "w") as fh:
            fh.write(plots.scatter_svg(rows, args.x_algorithm, args.y_algorithm, lo, hi))
        print(f"above {counts['above']}")
        print(f"on {counts['on']}")
        print(f"below {counts['below']}")
        return 0
    if not args.artifact:
        raise CliError("trace needs --artifact", EXIT_CONFIG)
    try:
        art = fio.RunArtifact.load(args.artifact)
    except (ValueError, KeyError, OSError) as exc:
        raise CliError(f"{args.artifact}: {exc}", EXIT_PARSE) from None
    with open(prefix + ".tsv", "w") as fh:
        fh.write("iteration\tJ\n")
        for i, j in enumerate(art.objective_trace, start=1):
            fh.write(f"{i}\t{j!r}\n")
    with open(prefix + ".svg", "w") as fh:
        fh.write(plots.trace_svg(art.objective_trace, f"{art.algorithm} {art.dataset}".strip()))
    return 0


# ------------------------------------------------------------------- parser


def _add_run_options(p):
    p.add_argument("--m", type=float, default=2.0, help="fuzzifier (default 2)")
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-6, help="termination tolerance")
    p.add_argument(
        "--init", choices=("sample-prototypes", "random-assignment"), default="sample-prototypes"
    )
    p.add_argument(
        "--sbd-unsquared",
        action="store_true",
        help="treat SBD as an unsquared distance in the membership update",
    )


def build_parser():
    parser = argparse.ArgumentParser(prog="fcshape", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="cluster one dataset and write a run artifact")
    p.add_argument("--input", required=True)
    p.add_argument("--merge", help="second UCR file appended to --input")
    p.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    p.add_argument("--clusters", type=int, help="default: number of distinct labels")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="artifact path (default stdout)")
    _add_run_options(p)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("benchmark", help="repeated runs over a directory of UCR datasets")
    p.add_argument("--data-dir", help=f"default ${DATA_DIR_ENV}")
    p.add_argument("--algorithms", default="kshape,fcs+,fcs++")
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--seed", type=int, default=0, help="run r uses seed + r")
    p.add_argument(
        "--clusters-from-labels",
        action="store_true",
        default=True,
        help="c = number of ground-truth classes (always on)",
    )
    p.add_argument("--output", help="CSV path (default stdout)")
    p.add_argument("--manifest", help="JSON record of used/skipped datasets")
    p.add_argument("--summary", action="store_true", help="print grand averages")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument(
        "--no-timing", action="store_true", help="write cpu_seconds as 0.00 (reproducible CSV)"
    )
    _add_run_options(p)
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("validate", help="external validity of a partition")
    p.add_argument("--labels", required=True, help="ground truth labels")
    p.add_argument("--partition", required=True, help="run artifact or label list")
    p.add_argument("--indices", default="ri,ari,nmi,vi")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("stats", help="significance tests over benchmark results")
    p.add_argument("--results", required=True)
    p.add_argument("--test", choices=("wilcoxon", "friedman"), required=True)
    p.add_argument("--metric", choices=METRICS, default="ri")
    p.add_argument("--alpha", type=float, default=0.05)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("plot", help="scatter or objective-trace plot data")
    p.add_argument("--kind", choices=("scatter", "trace"), required=True)
    p.add_argument("--results")
    p.add_argument("--x-algorithm")
    p.add_argument("--y-algorithm")
    p.add_argument("--metric", choices=METRICS, default="ri")
    p.add_argument("--artifact")
    p.add_argument("--output", required=True, help="output prefix for .tsv and .svg")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    try:
        return args.func(args)
    except CliError as exc:
        print(f"fcshape {args.command}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
