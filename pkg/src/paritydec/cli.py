"""Command-line interface: simulation, threshold estimation, inspection."""

from __future__ import annotations

import json
import sys

import click
import numpy as np

from .clusters import PostconditionError, build_clusters, correction_2d
from .code import ParityCode, parse_qubit
from .experiments import (ExperimentPoint, LOWER_BOUND_STRATEGY,
                          NoCrossingError, bootstrap_threshold,  # noqa: F401
                          estimate_threshold, render_csv, render_json,
                          run_curve, write_points)
from .graph_builders import match_2d
from .noise_sim import MODEL_CODE_CAPACITY, MODEL_PHENOMENOLOGICAL
from .postprocess import post_process
from .symmetry import SymmetryLayout

_MODELS = (MODEL_CODE_CAPACITY, MODEL_PHENOMENOLOGICAL)
_STRATEGIES = ("mwpm", "ism", "random")


def _parse_floats(text: str, name: str) -> list[float]:
    """Parse '0.05,0.1' lists or 'lo:hi:count' linear ranges."""
    try:
        if ":" in text:
            lo, hi, count = text.split(":")
            values = np.linspace(float(lo), float(hi), int(count))
            return [float(v) for v in values]
        return [float(v) for v in text.split(",") if v]
    except ValueError as exc:
        raise click.UsageError(f"cannot parse --{name} {text!r}: {exc}")


def _check_probs(values: list[float], name: str) -> list[float]:
    if not values:
        raise click.UsageError(f"--{name} needs at least one value")
    for v in values:
        if not (0.0 < v < 0.5):
            raise click.UsageError(f"--{name} {v} outside (0, 0.5)")
    return values


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read config {path}: {exc}")
    if not isinstance(cfg, dict):
        raise click.UsageError("config file must hold a JSON object")
    return cfg


def _merged(flag_value, cfg: dict, key: str, default):
    """Flag wins over config file; config wins over the default."""
    if flag_value is not None:
        return flag_value
    if key in cfg:
        return cfg[key]
    return default


@click.group()
def main() -> None:
    """Parity-code decoding and Monte-Carlo benchmarking."""


def _simulate_points(distance, p_values, q, rounds, model, strategy,
                     post_process_on, trials, lower_bound) -> list[ExperimentPoint]:
    if model == MODEL_CODE_CAPACITY:
        if q:
            raise click.UsageError("--q requires --model phenomenological")
        eff_rounds = 1
    else:
        eff_rounds = rounds if rounds is not None else distance
        if strategy == "random" and not lower_bound:
            raise click.UsageError(
                "--strategy random is defined for code capacity only")
    name = LOWER_BOUND_STRATEGY if lower_bound else strategy
    try:
        return [ExperimentPoint(model, name, post_process_on, distance,
                                eff_rounds, p, q, trials)
                for p in p_values]
    except ValueError as exc:
        raise click.UsageError(str(exc))


_shared_options = [
    click.option("--q", type=float, default=None,
                 help="Measurement flip probability (phenomenological)."),
    click.option("--rounds", type=int, default=None,
                 help="Measurement rounds (default: distance)."),
    click.option("--model", type=click.Choice(_MODELS), default=None),
    click.option("--strategy", type=click.Choice(_STRATEGIES), default=None),
    click.option("--post-process", "post_process_flag",
                 type=click.Choice(["on", "off"]), default=None),
    click.option("--trials", type=int, default=None),
    click.option("--seed", type=int, default=None),
    click.option("--out", type=click.Path(dir_okay=False), default=None),
    click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
                 default=None),
    click.option("--workers", type=int, default=None,
                 envvar="PARITYDEC_WORKERS"),
    click.option("--target-failures", type=int, default=None,
                 help="Early-stop once this many failures accumulate."),
    click.option("--lower-bound", is_flag=True, default=False,
                 help="Tally the optimal-decoder lower bound instead of "
                      "decoding."),
    click.option("--config", "config_path", type=click.Path(exists=False),
                 default=None, help="JSON config with the same keys as the "
                                    "flags; flags take precedence."),
]


def _with_shared_options(fn):
    for opt in reversed(_shared_options):
        fn = opt(fn)
    return fn


@main.command()
@click.option("--distance", type=int, default=None)
@click.option("--p", "p_text", type=str, default=None,
              help="Comma list ('0.05,0.1') or range ('0.01:0.1:10').")
@_with_shared_options
def simulate(distance, p_text, q, rounds, model, strategy, post_process_flag,
             trials, seed, out, fmt, workers, target_failures, lower_bound,
             config_path) -> None:
    """Monte-Carlo failure-rate curve over a set of error rates."""
    cfg = _load_config(config_path)
    distance = _merged(distance, cfg, "distance", None)
    if distance is None:
        raise click.UsageError("--distance is required")
    p_text = _merged(p_text, cfg, "p", None)
    if p_text is None:
        raise click.UsageError("--p is required")
    p_values = (_parse_floats(str(p_text), "p")
                if not isinstance(p_text, list) else [float(v) for v in p_text])
    _check_probs(p_values, "p")
    q = float(_merged(q, cfg, "q", 0.0))
    rounds = _merged(rounds, cfg, "rounds", None)
    model = _merged(model, cfg, "model", MODEL_CODE_CAPACITY)
    strategy = _merged(strategy, cfg, "strategy", "mwpm")
    pp_on = _merged(post_process_flag, cfg, "post_process", "on") == "on"
    trials = int(_merged(trials, cfg, "trials", 1000))
    seed = int(_merged(seed, cfg, "seed", 0))
    out = _merged(out, cfg, "out", None)
    fmt = _merged(fmt, cfg, "format", "csv")
    workers = int(_merged(workers, cfg, "workers", 1))
    if model not in _MODELS:
        raise click.UsageError(f"unknown model {model!r}")
    if strategy not in _STRATEGIES:
        raise click.UsageError(f"unknown strategy {strategy!r}")

    points = _simulate_points(int(distance), p_values, q, rounds, model,
                              strategy, pp_on, trials, lower_bound)
    try:
        curve = run_curve(points, seed, workers=workers,
                          target_failures=target_failures)
    except (PostconditionError, AssertionError) as exc:
        click.echo(f"internal consistency failure: {exc}", err=True)
        sys.exit(1)
    if out:
        write_points(out, curve, fmt)
        click.echo(f"wrote {len(curve)} rows to {out}")
    else:
        click.echo(render_csv(curve) if fmt == "csv" else render_json(curve),
                   nl=False)


@main.command()
@click.option("--distances", type=str, default=None,
              help="Comma list of code distances, e.g. '5,7,9'.")
@click.option("--p-grid", "p_grid_text", type=str, default=None,
              help="Common p grid (comma list or lo:hi:count range).")
@click.option("--curves-out", type=click.Path(dir_okay=False), default=None,
              help="Also write the underlying curve points here.")
@_with_shared_options
def threshold(distances, p_grid_text, curves_out, q, rounds, model, strategy,
              post_process_flag, trials, seed, out, fmt, workers,
              target_failures, lower_bound, config_path) -> None:
    """Estimate failure-rate crossings for adjacent code distances."""
    cfg = _load_config(config_path)
    distances = _merged(distances, cfg, "distances", None)
    if distances is None:
        raise click.UsageError("--distances is required")
    if isinstance(distances, str):
        try:
            d_list = [int(v) for v in distances.split(",") if v]
        except ValueError as exc:
            raise click.UsageError(f"bad --distances: {exc}")
    else:
        d_list = [int(v) for v in distances]
    if len(d_list) < 2 or sorted(set(d_list)) != d_list:
        raise click.UsageError(
            "--distances needs at least two strictly increasing values")
    p_grid_text = _merged(p_grid_text, cfg, "p_grid", None)
    if p_grid_text is None:
        raise click.UsageError("--p-grid is required")
    p_values = (_parse_floats(str(p_grid_text), "p-grid")
                if not isinstance(p_grid_text, list)
                else [float(v) for v in p_grid_text])
    _check_probs(p_values, "p-grid")
    q = float(_merged(q, cfg, "q", 0.0))
    rounds = _merged(rounds, cfg, "rounds", None)
    model = _merged(model, cfg, "model", MODEL_CODE_CAPACITY)
    strategy = _merged(strategy, cfg, "strategy", "mwpm")
    pp_on = _merged(post_process_flag, cfg, "post_process", "on") == "on"
    trials = int(_merged(trials, cfg, "trials", 1000))
    seed = int(_merged(seed, cfg, "seed", 0))
    out = _merged(out, cfg, "out", None)
    workers = int(_merged(workers, cfg, "workers", 1))

    points = []
    for d in d_list:
        points.extend(_simulate_points(d, p_values, q, rounds, model,
                                       strategy, pp_on, trials, lower_bound))
    try:
        curve = run_curve(points, seed, workers=workers,
                          target_failures=target_failures)
    except (PostconditionError, AssertionError) as exc:
        click.echo(f"internal consistency failure: {exc}", err=True)
        sys.exit(1)
    if curves_out:
        write_points(curves_out, curve, "csv")

    per_d = {d: curve[i * len(p_values):(i + 1) * len(p_values)]
             for i, d in enumerate(d_list)}
    lines = ["d_low,d_high,p_cross,bracket_low,bracket_high"]
    for d_low, d_high in zip(d_list, d_list[1:]):
        try:
            est = estimate_threshold(per_d[d_low], per_d[d_high])
            lines.append(f"{d_low},{d_high},{est.p_cross!r},"
                         f"{est.bracket[0]!r},{est.bracket[1]!r}")
            click.echo(f"d={d_low} vs d={d_high}: crossing at "
                       f"p={est.p_cross:.4f} in "
                       f"[{est.bracket[0]:.4f}, {est.bracket[1]:.4f}]")
        except NoCrossingError as exc:
            lines.append(f"{d_low},{d_high},,,")
            click.echo(f"d={d_low} vs d={d_high}: no crossing ({exc})")
    if out:
        from .experiments import _atomic_write
        _atomic_write(out, "\n".join(lines) + "\n")
        click.echo(f"wrote estimates to {out}")


@main.command()
@click.option("--distance", type=int, required=True)
@click.option("--error", "error_ids", type=str, multiple=True,
              help="Qubit ids to flip (qU.V / baseK); repeatable or comma "
                   "separated.")
@click.option("--strategy", type=click.Choice(_STRATEGIES), default="mwpm")
@click.option("--post-process", "post_process_flag",
              type=click.Choice(["on", "off"]), default="on")
@click.option("--seed", type=int, default=0,
              help="Seed for the random strategy.")
def inspect(distance, error_ids, strategy, post_process_flag, seed) -> None:
    """Describe a code, or trace the decoding of a chosen error."""
    try:
        code = ParityCode(distance)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    layout = SymmetryLayout(code)
    trace: dict = {
        "d": code.d,
        "n_qubits": code.n_qubits,
        "n_stabilizers": code.n_stabilizers,
        "n_logical": code.n_logical,
    }
    click.echo(f"parity code d={code.d}: {code.n_qubits} qubits, "
               f"{code.n_stabilizers} stabilizers, {code.n_logical} logical "
               f"lines (plus the base line)")

    ids = [token for chunk in error_ids for token in chunk.split(",") if token]
    if not ids:
        click.echo(json.dumps(trace, indent=2))
        return
    error = np.zeros(code.n_qubits, dtype=bool)
    for token in ids:
        try:
            qubit = parse_qubit(token)
            error[code.qubit_index[qubit]] ^= True
        except (ValueError, KeyError):
            raise click.UsageError(f"invalid qubit id {token!r} for d="
                                   f"{code.d}")
    syndrome = code.syndrome(error)
    trace["error"] = sorted(q.label for q in code.qubits_from_vector(error))
    trace["syndrome"] = [s.label for s in code.stabilizers_from_vector(syndrome)]
    click.echo(f"error: {' '.join(trace['error'])}")
    click.echo(f"syndrome: {' '.join(trace['syndrome']) or '(clean)'} "
               f"({int(syndrome.sum())} defects)")

    rng = np.random.default_rng(seed)
    try:
        outcome = match_2d(code, layout, syndrome, strategy, rng=rng)
        correction = correction_2d(code, layout, outcome, syndrome)
    except (PostconditionError, AssertionError) as exc:
        click.echo(f"internal consistency failure: {exc}", err=True)
        sys.exit(1)

    trace["pairs"] = []
    click.echo(f"matched pairs (total weight {outcome.total_weight:g}):")
    for path in outcome.paths:
        click.echo(f"  {path.u.label} -- {path.v.label}  weight {path.weight:g}")
        trace["pairs"].append({"u": path.u.label, "v": path.v.label,
                               "weight": float(path.weight)})

    def quarter(point):  # embedding coordinates in lattice units
        return (int(point[0]) // 4, int(point[1]) // 4)

    trace["clusters"] = []
    clusters = build_clusters(layout, outcome)
    click.echo(f"clusters: {len(clusters)}")
    for k, cluster in enumerate(clusters):
        locs = sorted({loc.label for path in cluster.paths
                       for loc, _t in path.members})
        segs = [tuple(map(quarter, layout.segment_endpoints(s)))
                for s in np.flatnonzero(cluster.contour)]
        interior = sorted(q.label
                          for q in code.qubits_from_vector(
                              layout.interior(cluster.contour)))
        click.echo(f"  cluster {k}: locations {' '.join(locs)}")
        click.echo(f"    contour: {segs}")
        click.echo(f"    interior: {' '.join(interior) or '(empty)'}")
        trace["clusters"].append({"locations": locs,
                                  "contour": [[list(a), list(b)]
                                              for a, b in segs],
                                  "interior": interior})

    pp_cycles = 0
    final = correction
    if post_process_flag == "on":
        report = post_process(code, correction)
        final, pp_cycles = report.result, report.cycles
    trace["correction"] = sorted(q.label
                                 for q in code.qubits_from_vector(correction))
    trace["pp_cycles"] = pp_cycles
    trace["final_correction"] = sorted(
        q.label for q in code.qubits_from_vector(final))
    click.echo(f"correction: {' '.join(trace['correction']) or '(empty)'}")
    click.echo(f"post-processing cycles: {pp_cycles}")
    click.echo(f"final correction: "
               f"{' '.join(trace['final_correction']) or '(empty)'}")
    click.echo(json.dumps(trace, indent=2))


if __name__ == "__main__":
    main()
