"""Command-line entry point: ``interp-learn <subcommand> [options]``.

Global options (``--seed``, ``--threads``, ``--config``, ``--out``, ``--svg``)
go before or after the subcommand.  A ``--config`` file is a YAML or JSON
mapping of option names (dashes or underscores) to values; explicit flags
override it.

Exit status: 0 on success, 2 on invalid configuration, 3 on numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path

import numpy as np
import yaml

from .dataset import LabeledDataset, read_points_csv
from .estimators import EstimatorConfig, plugin_classify
from .exceptions import ConfigError, InterpLearnError, NumericalError
from .graph_ssl import LabeledGraph, read_edge_list, read_labels, solve_graph_interpolant
from .harness import (
    ExperimentSpec,
    adversarial_density,
    fit_rate,
    hull_miss_mass,
    laplace1d_interpolant,
    mc_disagreement,
    mc_mse,
    pert1d_expectation,
    simplex_noise_demo,
)
from .synthetic import SyntheticProblem, make_rng, sample_dataset

log = logging.getLogger("interp_learn")

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _int_list(text):
    if isinstance(text, (list, tuple)):
        return [int(v) for v in text]
    return [int(v) for v in str(text).replace(",", " ").split()]


def _add_global(p, suppress):
    default = argparse.SUPPRESS if suppress else None
    p.add_argument("--seed", type=int, default=default if suppress else 0,
                   help="master seed (unsigned 64-bit)")
    p.add_argument("--threads", type=int, default=default if suppress else 1)
    p.add_argument("--config", default=default, help="YAML/JSON key-value config file")
    p.add_argument("--out", default=default, help="output file (default: stdout)")
    p.add_argument("--svg", default=default, help="also draw the result CSV as an SVG line plot")
    p.add_argument("-v", "--verbose", action="store_true",
                   default=argparse.SUPPRESS if suppress else False)


def _add_problem(p):
    g = p.add_argument_group("problem")
    g.add_argument("--dim", type=int, default=2)
    g.add_argument("--domain", choices=["cube", "ball", "simplex"], default="cube")
    g.add_argument("--eta", choices=["constant", "linear_boundary", "lipschitz_sine"],
                   default="constant")
    g.add_argument("--p", type=float, default=0.2, help="constant eta value")
    g.add_argument("--h", type=float, default=0.1, help="hard margin of linear_boundary")
    g.add_argument("--amplitude", type=float, default=0.3)
    g.add_argument("--frequency", type=float, default=1.0)


def _add_estimator(p):
    g = p.add_argument_group("estimator")
    g.add_argument("--scheme", choices=["simplicial", "winn", "hilbert", "knn"], default="winn")
    g.add_argument("--k", type=int, default=None)
    g.add_argument("--weight", choices=["power", "neglog"], default="power")
    g.add_argument("--delta", type=float, default=None)
    g.add_argument("--alpha", type=float, default=1.0)
    g.add_argument("--outside-value", type=float, default=0.5)


def _add_mc(p, single_n):
    if single_n:
        p.add_argument("--n", type=int, default=1000)
    else:
        p.add_argument("--n-list", type=_int_list, default=[256, 512, 1024, 2048])
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--test-points", type=int, default=200)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    _add_global(common, suppress=True)
    parser = argparse.ArgumentParser(prog="interp-learn", description=__doc__.splitlines()[0])
    _add_global(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="sample a dataset as CSV")
    _add_problem(p)
    p.add_argument("--n", type=int, default=1000)

    p = sub.add_parser("predict", parents=[common], help="fit on a dataset CSV, predict query CSV")
    p.add_argument("--train", required=False)
    p.add_argument("--queries", required=False)
    _add_estimator(p)

    for name, help_ in [("mse", "Monte Carlo regression error"),
                        ("risk", "Monte Carlo classification risk")]:
        p = sub.add_parser(name, parents=[common], help=help_)
        _add_problem(p)
        _add_estimator(p)
        _add_mc(p, single_n=True)

    p = sub.add_parser("rates", parents=[common], help="error over n_list with a log-log fit")
    _add_problem(p)
    _add_estimator(p)
    _add_mc(p, single_n=False)
    p.add_argument("--statistic", choices=["mse", "risk", "disagreement"], default="mse")

    p = sub.add_parser("adversarial", parents=[common], help="density of the disagreement set")
    _add_problem(p)
    _add_estimator(p)
    p.add_argument("--n", type=int, default=5000)
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--grid", type=int, default=50)
    p.add_argument("--repeats", type=int, default=1, help="number of seeds averaged")
    p.add_argument("--grid-only", action="store_true",
                   help="do not use training points as disagreement candidates")

    p = sub.add_parser("simplex-demo", parents=[common], help="noisy-simplex volume fractions")
    p.add_argument("--dims", type=_int_list, default=[2, 3, 4])
    p.add_argument("--samples", type=int, default=10**6)

    p = sub.add_parser("hull-miss", parents=[common], help="mass outside the sample hull")
    _add_problem(p)
    _add_mc(p, single_n=False)

    p = sub.add_parser("ssl", parents=[common], help="graph-Laplacian interpolation")
    p.add_argument("--edges", required=False, help="edge list file with 'i j w' lines")
    p.add_argument("--labels", required=False, help="labels file with 'i y' lines")
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--n", type=int, default=None, help="vertex count (default: max id + 1)")

    for name in ("laplace1d", "pert1d"):
        p = sub.add_parser(name, parents=[common], help=f"{name} interpolant on a grid")
        p.add_argument("--data", required=False, help="CSV with columns x0,y")
        p.add_argument("--grid", type=int, default=200)
        if name == "laplace1d":
            p.add_argument("--kappa", type=float, default=1e-3)
    return parser, sub


def _load_config(path):
    try:
        data = yaml.safe_load(Path(path).read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a key/value mapping")
    return {str(k).replace("-", "_"): v for k, v in data.items()}


def parse_args(argv):
    parser, sub = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        cfg = _load_config(args.config)
        sp = sub.choices[args.command]
        known = {a.dest for a in sp._actions} | {a.dest for a in parser._actions}
        unknown = sorted(set(cfg) - known - {"command"})
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        if "n_list" in cfg:
            cfg["n_list"] = _int_list(cfg["n_list"])
        if "dims" in cfg:
            cfg["dims"] = _int_list(cfg["dims"])
        glob = {"seed", "threads", "out", "svg", "verbose"}
        sp.set_defaults(**{k: v for k, v in cfg.items() if k not in glob})
        parser.set_defaults(**{k: v for k, v in cfg.items() if k in glob})
        args = parser.parse_args(argv)
    if args.seed < 0 or args.seed >= 2**64:
        raise ConfigError("--seed must be an unsigned 64-bit integer")
    if args.threads < 1:
        raise ConfigError("--threads must be at least 1")
    return args


def _problem(a):
    return SyntheticProblem(dim=a.dim, domain=a.domain, eta_kind=a.eta, p=a.p, h=a.h,
                            amplitude=a.amplitude, frequency=a.frequency)


def _estimator(a):
    return EstimatorConfig(scheme=a.scheme, k=a.k, weight=a.weight, delta=a.delta,
                           alpha=a.alpha, outside_hull_value=a.outside_value)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _require(a, *names):
    missing = [n for n in names if getattr(a, n, None) in (None, "")]
    if missing:
        raise ConfigError("missing required option(s): " + ", ".join("--" + m for m in missing))


def cmd_gen(a):
    return sample_dataset(_problem(a), a.n, make_rng(a.seed)).to_csv(), None


def cmd_predict(a):
    _require(a, "train", "queries")
    data = LabeledDataset.from_csv(Path(a.train))
    Q = read_points_csv(Path(a.queries))
    est = _estimator(a).make().fit(data.points, data.labels)
    eta = np.asarray(est.predict(Q), dtype=float)
    header = [f"x{j}" for j in range(Q.shape[1])] + ["eta_hat", "f_hat"]
    rows = [list(map(float, q)) + [float(e), int(f)] for q, e, f in zip(Q, eta, plugin_classify(eta))]
    return _csv(header, rows), None


def _spec(a, n_list):
    return ExperimentSpec(_problem(a), _estimator(a), tuple(n_list), a.trials, a.test_points, a.seed)


def cmd_mse(a):
    res = mc_mse(_spec(a, [a.n]), threads=a.threads)
    e = res.estimates[0]
    return res.to_csv(), f"mse = {e.mean:.6g} +/- {e.stderr:.2g} ({e.trials} trials)"


def cmd_risk(a):
    res = mc_disagreement(_spec(a, [a.n]), threads=a.threads)
    r, dis = res.series["risk"][0], res.series["disagreement"][0]
    msg = (f"risk = {r.mean:.6g} +/- {r.stderr:.2g}; "
           f"disagreement = {dis.mean:.6g} +/- {dis.stderr:.2g} ({r.trials} trials)")
    return res.to_csv("risk"), msg


def cmd_rates(a):
    spec = _spec(a, a.n_list)
    if a.statistic == "mse":
        res = mc_mse(spec, threads=a.threads)
    else:
        res = mc_disagreement(spec, threads=a.threads)
    text = res.to_csv(a.statistic)
    pts = [(e.n, e.mean) for e in res.series[a.statistic] if e.trials and e.mean > 0]
    if len(pts) >= 2:
        fit = fit_rate(pts)
        msg = f"slope = {fit.slope:.4f}  intercept = {fit.intercept:.4f}  R^2 = {fit.r2:.4f}"
    else:
        msg = "slope = n/a (fewer than two positive estimates)"
    return text, msg


def cmd_adversarial(a):
    rows = []
    for r in range(a.repeats):
        res = adversarial_density(_problem(a), _estimator(a), a.n, a.epsilon, a.grid,
                                  seed=a.seed + r, include_training=not a.grid_only)
        rows.append([a.seed + r, res.covered_fraction, res.adversarial_mass])
    cov = float(np.mean([r[1] for r in rows]))
    mass = float(np.mean([r[2] for r in rows]))
    return (_csv(["seed", "covered_fraction", "adversarial_mass"], rows),
            f"mean covered_fraction = {cov:.4f}  mean adversarial_mass = {mass:.4f}")


def cmd_simplex_demo(a):
    rows = []
    for d in a.dims:
        s, nn = simplex_noise_demo(d, a.samples, seed=a.seed)
        rows.append([d, s, nn, 2.0 ** -d])
    return _csv(["d", "simplicial_fraction", "nn_fraction", "analytic_simplicial"], rows), None


def cmd_hull_miss(a):
    prob = _problem(a)
    rows = []
    for n in a.n_list:
        e = hull_miss_mass(prob, n, a.trials, a.seed, a.test_points)
        rows.append([e.n, e.mean, e.stderr, e.trials])
    return _csv(["n", "mean", "stderr", "trials"], rows), None


def cmd_ssl(a):
    _require(a, "edges", "labels")
    W = read_edge_list(a.edges, n=a.n)
    ids, ys = read_labels(a.labels)
    graph = LabeledGraph(W, ids, ys, a.kappa)
    return solve_graph_interpolant(graph).to_csv(), None


def _data_1d(a):
    _require(a, "data")
    data = LabeledDataset.from_csv(Path(a.data))
    if data.dim != 1:
        raise ConfigError("1-D commands need a dataset with a single coordinate")
    x = data.points[:, 0]
    return x, data.labels, np.linspace(x.min(), x.max(), a.grid)


def cmd_laplace1d(a):
    x, y, grid = _data_1d(a)
    vals = laplace1d_interpolant(x, y, a.kappa, grid)
    return _csv(["x", "eta_hat"], [[float(g), float(v)] for g, v in zip(grid, vals)]), None


def cmd_pert1d(a):
    x, y, grid = _data_1d(a)
    vals = pert1d_expectation(x, y, grid)
    return _csv(["x", "eta_hat"], [[float(g), float(v)] for g, v in zip(grid, vals)]), None


COMMANDS = {
    "gen": cmd_gen,
    "predict": cmd_predict,
    "mse": cmd_mse,
    "risk": cmd_risk,
    "rates": cmd_rates,
    "adversarial": cmd_adversarial,
    "simplex-demo": cmd_simplex_demo,
    "hull-miss": cmd_hull_miss,
    "ssl": cmd_ssl,
    "laplace1d": cmd_laplace1d,
    "pert1d": cmd_pert1d,
}


def write_svg(csv_text, path, title=""):
    """Static line plot of the first column against the value columns."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = list(csv.reader(io.StringIO(csv_text)))
    header, body = rows[0], np.array(rows[1:], dtype=float)
    fig, ax = plt.subplots(figsize=(6, 4))
    skip = {"stderr", "trials", "seed"}
    for j, name in enumerate(header[1:], start=1):
        if name in skip:
            continue
        ax.plot(body[:, 0], body[:, j], marker="o", label=name)
    if header[0] == "n" and np.all(body[:, 0] > 0) and np.all(body[:, 1] > 0):
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel(header[0])
    ax.legend()
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parse_args(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        text, message = COMMANDS[args.command](args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except InterpLearnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.out:
        Path(args.out).write_text(text)
        if message:
            print(message)
    else:
        sys.stdout.write(text)
        if message:
            print(message, file=sys.stderr)
    if args.svg:
        write_svg(text, args.svg, title=args.command)
    return 0


if __name__ == "__main__":
    sys.exit(main())
