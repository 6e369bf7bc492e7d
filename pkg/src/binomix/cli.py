"""Command-line front end.

Subcommands: estimate, ci, lepski, diff, sim1, sim2, coverage,
bernstein-check.  Outputs are CSV (with ``#``-prefixed metadata lines) or
JSON, written atomically; identical inputs, flags and seed give
byte-identical files.  Exit codes: 0 success, 1 usage error, 2 data
error, 3 numerical failure.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys
import tempfile

import click
import numpy as np

from . import __version__, densdiff, lepski, oracle, simlab
from .estimator import (BinomialSample, DataError, confidence_interval,
                        harmonic_mean, kde_grid)
from .kernels import (SUPPORTED_LEGENDRE_ORDERS, build_epanechnikov,
                      build_legendre_kernel)
from .simlab import NumericalError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


# ---------------------------------------------------------------------------
# input parsing


def parse_input(path: str) -> BinomialSample:
    """Read a CSV with required columns successes,trials and an optional
    group column; reject malformed rows with their row number."""
    try:
        fh = open(path, "r", newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.DictReader(_skip_comments(fh))
        if reader.fieldnames is None:
            raise DataError(f"{path}: empty file")
        cols = [c.strip() for c in reader.fieldnames]
        for required in ("successes", "trials"):
            if required not in cols:
                raise DataError(f"{path}: missing required column {required!r}")
        has_group = "group" in cols
        xs, ts, gs = [], [], []
        for lineno, row in enumerate(reader, start=2):
            xs.append(_int_field(row, "successes", path, lineno))
            ts.append(_int_field(row, "trials", path, lineno))
            if has_group:
                gs.append(_int_field(row, "group", path, lineno))
        if not xs:
            raise DataError(f"{path}: no data rows")
    try:
        sample = BinomialSample(np.array(xs), np.array(ts),
                                np.array(gs) if has_group else None)
    except DataError as exc:
        raise DataError(f"{path}: {exc}") from exc
    click.echo(
        f"# read {sample.n} records from {path}: harmonic mean trials "
        f"{harmonic_mean(sample.trials):.4f}, trials range "
        f"[{sample.trials.min()}, {sample.trials.max()}]",
        err=True)
    return sample


def parse_two_group(path: str, mode: str) -> densdiff.TwoGroupSample:
    """Two-group input: successes,trials,group; in true-proportion mode a
    ``value`` column may replace the count columns."""
    try:
        fh = open(path, "r", newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.DictReader(_skip_comments(fh))
        if reader.fieldnames is None:
            raise DataError(f"{path}: empty file")
        cols = [c.strip() for c in reader.fieldnames]
        if "group" not in cols:
            raise DataError(f"{path}: missing required column 'group'")
        use_values = mode == "true" and "value" in cols
        if not use_values:
            for required in ("successes", "trials"):
                if required not in cols:
                    raise DataError(
                        f"{path}: missing required column {required!r}")
        vals, xs, ts, gs = [], [], [], []
        for lineno, row in enumerate(reader, start=2):
            gs.append(_int_field(row, "group", path, lineno))
            if use_values:
                vals.append(_float_field(row, "value", path, lineno))
            else:
                xs.append(_int_field(row, "successes", path, lineno))
                ts.append(_int_field(row, "trials", path, lineno))
        if not gs:
            raise DataError(f"{path}: no data rows")
    try:
        if use_values:
            return densdiff.TwoGroupSample.from_proportions(vals, gs)
        if mode == "true":
            x = np.array(xs)
            t = np.array(ts)
            if np.any(t < 1):
                raise DataError("every record needs at least one trial")
            return densdiff.TwoGroupSample.from_proportions(x / t, gs)
        return densdiff.TwoGroupSample.from_counts(xs, ts, gs)
    except DataError as exc:
        raise DataError(f"{path}: {exc}") from exc


def _skip_comments(fh):
    for line in fh:
        if not line.lstrip().startswith("#"):
            yield line


def _int_field(row: dict, col: str, path: str, lineno: int) -> int:
    raw = (row.get(col) or "").strip()
    try:
        return int(raw)
    except ValueError:
        raise DataError(
            f"{path}: row {lineno}: column {col!r} is not an integer: "
            f"{raw!r}") from None


def _float_field(row: dict, col: str, path: str, lineno: int) -> float:
    raw = (row.get(col) or "").strip()
    try:
        return float(raw)
    except ValueError:
        raise DataError(
            f"{path}: row {lineno}: column {col!r} is not a number: "
            f"{raw!r}") from None


# ---------------------------------------------------------------------------
# output


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_output(path: str | None, columns, rows, meta: dict,
                 fmt: str) -> None:
    """Write rows atomically as CSV (metadata in # comments) or JSON."""
    if fmt == "csv":
        buf = io.StringIO()
        for key, val in meta.items():
            buf.write(f"# {key}: {val}\n")
        buf.write(",".join(columns) + "\n")
        for row in rows:
            buf.write(",".join(_fmt(row[c]) for c in columns) + "\n")
        text = buf.getvalue()
    else:
        payload = {"meta": meta,
                   "rows": [{c: row[c] for c in columns} for row in rows]}
        text = json.dumps(payload, indent=2, default=_json_default) + "\n"
    _write_atomic(path, text)


def write_json(path: str | None, payload: dict) -> None:
    _write_atomic(path, json.dumps(payload, indent=2,
                                   default=_json_default) + "\n")


def _json_default(v):
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    raise TypeError(f"not JSON serializable: {type(v)}")


def _write_atomic(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".binomix-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _meta(command: str, seed=None, **kwargs) -> dict:
    meta = {"binomix": __version__, "command": command}
    if seed is not None:
        meta["seed"] = seed
    meta.update(kwargs)
    return meta


# ---------------------------------------------------------------------------
# flag helpers


def _parse_grid(spec: str) -> list[float]:
    """Either 'start:stop:step' (inclusive, step sign inferred) or a
    comma-separated list."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise click.BadParameter(f"bad grid spec {spec!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise click.BadParameter("grid step must be positive")
        count = int(round((stop - start) / step))
        vals = [start + k * step for k in range(count + 1)]
        return [round(v, 12) for v in vals if min(start, stop) - 1e-12 <= v <= max(start, stop) + 1e-12]
    try:
        return [float(p) for p in spec.split(",") if p.strip()]
    except ValueError:
        raise click.BadParameter(f"bad grid spec {spec!r}") from None


def _parse_bandwidth_grid(spec: str) -> lepski.BandwidthGrid:
    """Comma list (descending) or geometric spec 'geo:start:ratio:count'."""
    if spec.startswith("geo:"):
        parts = spec.split(":")
        if len(parts) != 4:
            raise click.BadParameter(f"bad geometric grid spec {spec!r}")
        try:
            return lepski.BandwidthGrid.geometric(
                float(parts[1]), float(parts[2]), int(parts[3]))
        except ValueError as exc:
            raise click.BadParameter(str(exc)) from None
    try:
        return lepski.BandwidthGrid(tuple(float(p) for p in spec.split(",")
                                          if p.strip()))
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


def _make_kernel(kernel: str, order: int | None):
    if kernel == "epanechnikov":
        if order not in (None, 2):
            raise click.BadParameter(
                "--kernel-order applies to the legendre family")
        return build_epanechnikov()
    if order is None:
        raise click.BadParameter("--kernel legendre needs --kernel-order")
    try:
        return build_legendre_kernel(order)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


def _parse_density(spec: str) -> oracle.DensitySpec:
    if spec == "uniform":
        return oracle.uniform_density()
    if spec == "nonsmooth":
        return oracle.nonsmooth_density()
    if spec.startswith("beta:"):
        try:
            a, b = (float(p) for p in spec[5:].split(","))
        except ValueError:
            raise click.BadParameter(f"bad density spec {spec!r}") from None
        return oracle.beta_density(a, b)
    raise click.BadParameter(f"bad density spec {spec!r}")


def _read_config(path: str) -> dict:
    """key = value lines; '#' comments and blank lines ignored."""
    out = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise DataError(f"{path}: line {lineno}: expected key = value")
                key, val = line.split("=", 1)
                out[key.strip()] = val.strip()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    return out


_kernel_opts = [
    click.option("--kernel", type=click.Choice(["epanechnikov", "legendre"]),
                 default="epanechnikov", show_default=True),
    click.option("--kernel-order", type=int, default=None,
                 help=f"even order for the legendre family, one of "
                      f"{SUPPORTED_LEGENDRE_ORDERS}"),
]


def _with(opts):
    def deco(fn):
        for opt in reversed(opts):
            fn = opt(fn)
        return fn
    return deco


@click.group()
@click.version_option(__version__)
def cli():
    """Mixing-density estimation from binomial counts with heterogeneous
    trial sizes."""


@cli.command()
@click.option("--input", "input_path", required=True,
              type=click.Path(dir_okay=False))
@_with(_kernel_opts)
@click.option("--h", "bandwidth", type=float, required=True)
@click.option("--grid", "grid_spec", default="0.05:0.95:0.05",
              show_default=True, help="evaluation points: a:b:step or comma list")
@click.option("--clamp-nonneg", is_flag=True,
              help="replace negative density estimates with 0")
@click.option("--out", "out_path", type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
def estimate(input_path, kernel, kernel_order, bandwidth, grid_spec,
             clamp_nonneg, out_path, fmt):
    """KDE of the mixing density over a grid of points."""
    k = _make_kernel(kernel, kernel_order)
    sample = parse_input(input_path)
    us = _parse_grid(grid_spec)
    vals = kde_grid(sample, k, bandwidth, us, clamp_nonneg=clamp_nonneg)
    rows = [{"u": u, "estimate": v} for u, v in zip(us, vals)]
    write_output(out_path, ["u", "estimate"], rows,
                 _meta("estimate", input=input_path, kernel=k.family,
                       h=bandwidth, clamp=clamp_nonneg), fmt)


@cli.command()
@click.option("--input", "input_path", required=True,
              type=click.Path(dir_okay=False))
@_with(_kernel_opts)
@click.option("--h", "bandwidth", type=float, required=True)
@click.option("--grid", "grid_spec", default="0.05:0.95:0.05",
              show_default=True)
@click.option("--alpha", type=float, default=0.05, show_default=True)
@click.option("--clamp-nonneg", is_flag=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
def ci(input_path, kernel, kernel_order, bandwidth, grid_spec, alpha,
       clamp_nonneg, out_path, fmt):
    """Pointwise undersmoothed confidence intervals over a grid."""
    k = _make_kernel(kernel, kernel_order)
    sample = parse_input(input_path)
    rows = []
    for u in _parse_grid(grid_spec):
        r = confidence_interval(sample, k, bandwidth, u, alpha=alpha,
                                clamp_nonneg=clamp_nonneg)
        rows.append({"u": u, "estimate": r.estimate, "se": r.se,
                     "ci_lo": r.ci_lo, "ci_hi": r.ci_hi})
    write_output(out_path, ["u", "estimate", "se", "ci_lo", "ci_hi"], rows,
                 _meta("ci", input=input_path, kernel=k.family, h=bandwidth,
                       alpha=alpha), fmt)


@cli.command(name="lepski")
@click.option("--input", "input_path", required=True,
              type=click.Path(dir_okay=False))
@_with(_kernel_opts)
@click.option("--grid", "grid_spec", default="geo:0.5:0.9:10",
              show_default=True,
              help="descending comma list or geo:start:ratio:count")
@click.option("--alpha", type=float, default=0.05, show_default=True)
@click.option("--boot-reps", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--point", "u", type=float, default=0.5, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False))
def lepski_cmd(input_path, kernel, kernel_order, grid_spec, alpha, boot_reps,
               seed, u, out_path):
    """Bandwidth selection; emits a JSON trace plus the selection."""
    k = _make_kernel(kernel, kernel_order)
    sample = parse_input(input_path)
    grid = _parse_bandwidth_grid(grid_spec)
    cfg = lepski.LepskiConfig(u=u, alpha=alpha, bootstrap_reps=boot_reps,
                              seed=seed)
    res = lepski.lepski_select(sample, k, grid, cfg)
    payload = {
        "meta": _meta("lepski", seed=seed, input=input_path, kernel=k.family,
                      alpha=alpha, boot_reps=boot_reps, point=u),
        "trace": [{"h": e.h, "statistic": e.statistic, "critical": e.critical,
                   "rejected": bool(e.rejected), "trivial": e.trivial}
                  for e in res.trace],
        "selected": res.selected,
        "all_rejected": res.all_rejected,
        "first_rejection_index": res.first_rejection_index,
    }
    write_json(out_path, payload)


@cli.command()
@click.option("--input", "input_path", required=True,
              type=click.Path(dir_okay=False))
@click.option("--mode", type=click.Choice(["true", "binomial"]),
              default="binomial", show_default=True)
@click.option("--tune", type=click.Choice(["joint", "separate", "fixed"]),
              default="joint", show_default=True)
@click.option("--h", "bandwidth", type=float, default=None,
              help="bandwidth for --tune fixed")
@click.option("--kernel-order", type=int, default=2, show_default=True,
              help="kernel order for --tune fixed")
@click.option("--grid-h", default="0.2:2:0.1", show_default=True)
@click.option("--grid-order", default="2,4,6,8", show_default=True)
@click.option("--grid", "grid_spec", default="0.05:0.95:0.05",
              show_default=True, help="evaluation points")
@click.option("--eps", type=float, default=0.05, show_default=True,
              help="group-share positivity margin")
@click.option("--seed", type=int, required=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
def diff(input_path, mode, tune, bandwidth, kernel_order, grid_h, grid_order,
         grid_spec, eps, seed, out_path, fmt):
    """Two-group density difference (group 1 minus group 0) over a grid."""
    sample = parse_two_group(input_path, mode)
    estimator_fn = (densdiff.diff_kde_true if mode == "true"
                    else densdiff.diff_kde_binomial)
    meta_extra = {}
    if tune == "fixed":
        if bandwidth is None:
            raise click.BadParameter("--tune fixed needs --h")
        pair = densdiff.TuningPair(bandwidth, kernel_order)
        kernel_by_u = lambda u: estimator_fn(
            sample, densdiff.kernel_for_order(pair.order), pair.h, u)
        meta_extra = {"h": pair.h, "kernel_order": pair.order}
    else:
        tuning_grid = densdiff.make_grid(_parse_grid(grid_h),
                                         [int(o) for o in grid_order.split(",")])
        if tune == "joint":
            pair, _ = densdiff.select_tuning_joint(sample, tuning_grid, seed,
                                                   eps)
            kernel_by_u = lambda u: estimator_fn(
                sample, densdiff.kernel_for_order(pair.order), pair.h, u)
            meta_extra = {"h": pair.h, "kernel_order": pair.order}
        else:
            (p1, p0), _ = densdiff.select_tuning_separate(sample, tuning_grid,
                                                          seed, eps)
            kernel_by_u = lambda u: densdiff.diff_kde_separate(sample, p1, p0, u)
            meta_extra = {"h_group1": p1.h, "order_group1": p1.order,
                          "h_group0": p0.h, "order_group0": p0.order}
    rows = [{"u": u, "tau_hat": kernel_by_u(u)} for u in _parse_grid(grid_spec)]
    write_output(out_path, ["u", "tau_hat"], rows,
                 _meta("diff", seed=seed, input=input_path, mode=mode,
                       tune=tune, **meta_extra), fmt)


@cli.command()
@click.option("--config", "config_path", type=click.Path(dir_okay=False),
              help="key = value file overriding the flags")
@click.option("--n", type=int, default=200, show_default=True)
@click.option("--targets", default="30:100:5", show_default=True,
              help="target harmonic means: a:b:step or comma list")
@click.option("--reps", type=int, default=300, show_default=True)
@click.option("--h", "bandwidth", type=float, default=None,
              help="bandwidth; default n**(-1/5)")
@click.option("--seed", type=int, required=True)
@click.option("--point", "u", type=float, default=0.5, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
def sim1(config_path, n, targets, reps, bandwidth, seed, u, out_path, fmt):
    """Heterogeneity-gain study: KDE vs clipped baseline."""
    if config_path:
        cfgmap = _read_config(config_path)
        n = int(cfgmap.get("n", n))
        targets = cfgmap.get("targets", targets)
        reps = int(cfgmap.get("reps", reps))
        bandwidth = (float(cfgmap["h"]) if "h" in cfgmap else bandwidth)
        seed = int(cfgmap.get("seed", seed))
        u = float(cfgmap.get("point", u))
    cfg = simlab.Sim1Config(n=n, targets=tuple(_parse_grid(targets)),
                            replications=reps, h=bandwidth, seed=seed, u=u)
    rows = simlab.run_sim1(cfg)
    write_output(out_path, ["t_tilde", "estimator", "bias", "se"], rows,
                 _meta("sim1", seed=seed, n=n, reps=reps,
                       h=cfg.bandwidth(), point=u), fmt)


@cli.command()
@click.option("--config", "config_path", type=click.Path(dir_okay=False))
@click.option("--n-list", default="500,2000", show_default=True)
@click.option("--reps", type=int, default=200, show_default=True)
@click.option("--grid-h", default="0.2:2:0.1", show_default=True)
@click.option("--grid-order", default="2,4,6,8", show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--point", "u", type=float, default=0.5, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
def sim2(config_path, n_list, reps, grid_h, grid_order, seed, u, out_path,
         fmt):
    """Joint vs separate tuning for the density difference."""
    if config_path:
        cfgmap = _read_config(config_path)
        n_list = cfgmap.get("n_list", n_list)
        reps = int(cfgmap.get("reps", reps))
        grid_h = cfgmap.get("grid_h", grid_h)
        grid_order = cfgmap.get("grid_order", grid_order)
        seed = int(cfgmap.get("seed", seed))
        u = float(cfgmap.get("point", u))
    cfg = simlab.Sim2Config(
        n_list=tuple(int(x) for x in n_list.split(",")),
        replications=reps,
        h_grid=tuple(_parse_grid(grid_h)),
        order_grid=tuple(int(o) for o in grid_order.split(",")),
        seed=seed, u=u)
    rows = simlab.run_sim2(cfg)
    write_output(out_path, ["n", "method", "bias", "se"], rows,
                 _meta("sim2", seed=seed, reps=reps, point=u), fmt)


@cli.command()
@click.option("--config", "config_path", type=click.Path(dir_okay=False))
@click.option("--n", type=int, default=300, show_default=True)
@click.option("--t", "t_const", type=int, default=3000, show_default=True)
@click.option("--h", "bandwidth", type=float, default=0.08, show_default=True)
@click.option("--reps", type=int, default=500, show_default=True)
@click.option("--alpha", type=float, default=0.05, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
def coverage(config_path, n, t_const, bandwidth, reps, alpha, seed, out_path,
             fmt):
    """Empirical CI coverage under the Beta(2,2) homogeneous-trials DGP."""
    if config_path:
        cfgmap = _read_config(config_path)
        n = int(cfgmap.get("n", n))
        t_const = int(cfgmap.get("t", t_const))
        bandwidth = float(cfgmap.get("h", bandwidth))
        reps = int(cfgmap.get("reps", reps))
        alpha = float(cfgmap.get("alpha", alpha))
        seed = int(cfgmap.get("seed", seed))
    rate = simlab.run_coverage(n, t_const, bandwidth, reps, seed, alpha=alpha)
    rows = [{"n": n, "t": t_const, "h": bandwidth, "coverage": rate}]
    write_output(out_path, ["n", "t", "h", "coverage"], rows,
                 _meta("coverage", seed=seed, reps=reps, alpha=alpha), fmt)


@cli.command(name="bernstein-check")
@click.option("--density", "density_spec", default="beta:2,2",
              show_default=True, help="beta:a,b | uniform | nonsmooth")
@click.option("--t-grid", default="10,25,50,100,250", show_default=True)
@click.option("--h-grid", default="0.1,0.15,0.2,0.3", show_default=True)
@click.option("--u-grid", default="0.3,0.5,0.7", show_default=True)
@_with(_kernel_opts)
@click.option("--out", "out_path", type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
def bernstein_check(density_spec, t_grid, h_grid, u_grid, kernel,
                    kernel_order, out_path, fmt):
    """Exact Bernstein error of K_h against its bound, per configuration."""
    density = _parse_density(density_spec)
    k = _make_kernel(kernel, kernel_order)
    sp = oracle.grid_smoothness(density)
    rows = []
    for t in (int(v) for v in t_grid.split(",")):
        for h in (float(v) for v in h_grid.split(",")):
            for u in (float(v) for v in u_grid.split(",")):
                f = oracle.kernel_hat(k, h, u)
                exact = oracle.bernstein_error_exact(density=density, t=t,
                                                     f=f,
                                                     breakpoints=f.breakpoints)
                bound = oracle.mean_bernstein_bound(
                    f, density, [t], smoothness=sp,
                    breakpoints=f.breakpoints)
                rows.append({
                    "density": density.name, "t": t, "h": h, "u": u,
                    "exact_error": abs(exact), "bound": bound,
                    "ratio": abs(exact) / bound if bound > 0 else 0.0,
                    "pass": abs(exact) <= bound,
                })
    write_output(out_path,
                 ["density", "t", "h", "u", "exact_error", "bound", "ratio",
                  "pass"],
                 rows, _meta("bernstein-check", density=density.name,
                             kernel=k.family), fmt)


def main(argv=None) -> int:
    """Entry point with the documented exit-code mapping."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("error: aborted", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return EXIT_USAGE
    except DataError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_DATA
    except NumericalError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_NUMERICAL
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
