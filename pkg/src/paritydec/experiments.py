"""Monte-Carlo campaigns: failure-rate curves, thresholds, persistence.

Determinism contract: trial ``t`` of grid point ``k`` under master seed
``s`` always uses ``numpy.random.default_rng([s, k, t])``, trials are
aggregated in fixed blocks of :data:`BLOCK_SIZE`, and early stopping cuts
at the first block boundary where the target failure count is reached —
so results are byte-identical for any worker count.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .code import ParityCode
from .noise_sim import (MODEL_CODE_CAPACITY, NoiseConfig, lower_bound_trial,
                        run_trial, sample_error)
from .symmetry import SymmetryLayout

BLOCK_SIZE = 250
Z95 = 1.959963984540054  # two-sided 95% normal quantile

CSV_COLUMNS = ("model", "strategy", "post_process", "d", "rounds", "p", "q",
               "trials", "failures", "failure_rate", "ci_low", "ci_high",
               "avg_pp_cycles", "seed")

LOWER_BOUND_STRATEGY = "lower-bound"


class NoCrossingError(RuntimeError):
    """The two failure-rate curves do not cross on the sampled grid."""


@dataclass(frozen=True)
class ExperimentPoint:
    """One grid point of a Monte-Carlo campaign."""

    model: str
    strategy: str  # decoder strategy or "lower-bound"
    post_process: bool
    d: int
    rounds: int
    p: float
    q: float
    trials: int

    def __post_init__(self):
        if self.trials <= 0:
            raise ValueError("trials must be positive")
        if not (0.0 < self.p < 0.5):
            raise ValueError(f"p={self.p} outside (0, 0.5)")
        # full model/strategy validation happens in NoiseConfig / decode
        NoiseConfig(self.model, self.p, self.q,
                    None if self.model == MODEL_CODE_CAPACITY else self.rounds)


@dataclass
class CurvePoint:
    model: str
    strategy: str
    post_process: bool
    d: int
    rounds: int
    p: float
    q: float
    trials: int
    failures: int
    failure_rate: float
    ci_low: float
    ci_high: float
    avg_pp_cycles: float
    seed: int

    def row(self) -> dict:
        vals = {c: getattr(self, c) for c in CSV_COLUMNS}
        vals["post_process"] = "on" if self.post_process else "off"
        return vals


@dataclass
class ThresholdEstimate:
    d_pair: tuple[int, int]
    p_cross: float
    bracket: tuple[float, float]


def wilson_interval(failures: int, trials: int,
                    z: float = Z95) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    phat = failures / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials
                         + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@functools.lru_cache(maxsize=None)
def _code_and_layout(d: int) -> tuple[ParityCode, SymmetryLayout]:
    code = ParityCode(d)
    return code, SymmetryLayout(code)


def _run_block(point: ExperimentPoint, master_seed: int, point_index: int,
               start: int, stop: int, engine: str) -> tuple[int, int, int]:
    """Trials [start, stop) of one grid point: (trials, failures, pp_sum)."""
    code, layout = _code_and_layout(point.d)
    cfg = NoiseConfig(point.model, point.p, point.q,
                      None if point.model == MODEL_CODE_CAPACITY
                      else point.rounds)
    failures = 0
    pp_sum = 0
    for t in range(start, stop):
        rng = np.random.default_rng([master_seed, point_index, t])
        if point.strategy == LOWER_BOUND_STRATEGY:
            error = sample_error(code, point.p, rng)
            if lower_bound_trial(code, error):
                failures += 1
        else:
            record = run_trial(code, layout, cfg, point.strategy,
                               point.post_process, rng, engine=engine)
            failures += record.failed
            pp_sum += record.pp_cycles
    return stop - start, failures, pp_sum


def run_point(point: ExperimentPoint, master_seed: int, point_index: int = 0,
              *, workers: int = 1, target_failures: int | None = None,
              engine: str = "fast") -> CurvePoint:
    """Run one grid point, deterministically for any worker count.

    With ``target_failures`` set, stops at the first 250-trial block
    boundary where the cumulative failure count reaches the target.
    """
    bounds = [(b, min(b + BLOCK_SIZE, point.trials))
              for b in range(0, point.trials, BLOCK_SIZE)]
    results: list[tuple[int, int, int]] = []

    def stop_index() -> int | None:
        cum = 0
        for i, (_n, fails, _pp) in enumerate(results):
            cum += fails
            if target_failures is not None and cum >= target_failures:
                return i
        return None

    if workers <= 1:
        for start, stop in bounds:
            results.append(_run_block(point, master_seed, point_index,
                                      start, stop, engine))
            if stop_index() is not None:
                break
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for batch0 in range(0, len(bounds), workers):
                batch = bounds[batch0:batch0 + workers]
                futs = [pool.submit(_run_block, point, master_seed,
                                    point_index, b[0], b[1], engine)
                        for b in batch]
                results.extend(f.result() for f in futs)
                if stop_index() is not None:
                    break
    cut = stop_index()
    if cut is not None:
        results = results[:cut + 1]

    trials = sum(r[0] for r in results)
    failures = sum(r[1] for r in results)
    pp_sum = sum(r[2] for r in results)
    ci_low, ci_high = wilson_interval(failures, trials)
    return CurvePoint(point.model, point.strategy, point.post_process,
                      point.d, point.rounds, point.p, point.q, trials,
                      failures, failures / trials, ci_low, ci_high,
                      pp_sum / trials, master_seed)


def run_curve(points: list[ExperimentPoint], master_seed: int, *,
              workers: int = 1, target_failures: int | None = None,
              engine: str = "fast") -> list[CurvePoint]:
    """Run a list of grid points; point index = list position."""
    if not points:
        raise ValueError("empty experiment grid")
    return [run_point(pt, master_seed, k, workers=workers,
                      target_failures=target_failures, engine=engine)
            for k, pt in enumerate(points)]


# --------------------------------------------------------------------------
# threshold estimation
# --------------------------------------------------------------------------

def _log_odds(failures: int, trials: int) -> float:
    """Smoothed empirical log odds (half-count continuity correction)."""
    return math.log((failures + 0.5) / (trials - failures + 0.5))


def estimate_threshold(points_a: list[CurvePoint],
                       points_b: list[CurvePoint]) -> ThresholdEstimate:
    """Crossing of two failure-rate curves sampled on a common p grid.

    Interpolates log odds linearly in p and bisects the difference within
    the first sign-changing grid interval.
    """
    pa = sorted(points_a, key=lambda c: c.p)
    pb = sorted(points_b, key=lambda c: c.p)
    ps = [c.p for c in pa]
    if ps != [c.p for c in pb]:
        raise ValueError("curves must share a common p grid")
    if len(ps) < 2:
        raise ValueError("need at least two grid points")
    d_pair = (pa[0].d, pb[0].d)
    ya = [_log_odds(c.failures, c.trials) for c in pa]
    yb = [_log_odds(c.failures, c.trials) for c in pb]
    g = [a - b for a, b in zip(ya, yb)]

    for i in range(len(ps) - 1):
        g0, g1 = g[i], g[i + 1]
        if g0 == 0.0:
            return ThresholdEstimate(d_pair, ps[i], (ps[i], ps[i + 1]))
        if g0 * g1 < 0.0:
            lo, hi = ps[i], ps[i + 1]

            def gap(p: float) -> float:
                frac = (p - ps[i]) / (ps[i + 1] - ps[i])
                return g0 + frac * (g1 - g0)

            for _ in range(80):
                mid = 0.5 * (lo + hi)
                if gap(lo) * gap(mid) <= 0.0:
                    hi = mid
                else:
                    lo = mid
            return ThresholdEstimate(d_pair, 0.5 * (lo + hi),
                                     (ps[i], ps[i + 1]))
    if g[-1] == 0.0:
        return ThresholdEstimate(d_pair, ps[-1], (ps[-2], ps[-1]))
    raise NoCrossingError(
        f"no crossing for d={d_pair} on p grid {ps}: log-odds gaps {g}")


def bootstrap_threshold(points_a: list[CurvePoint],
                        points_b: list[CurvePoint], *, n_boot: int = 200,
                        seed: int = 0) -> tuple[ThresholdEstimate, float,
                                                np.ndarray]:
    """Parametric bootstrap of the crossing: (estimate, sigma, samples).

    Resamples each point's failure count from Binomial(trials, rate) and
    re-estimates the crossing; samples without a crossing are dropped (at
    most 50% may drop, else the bracket is considered unstable).
    """
    estimate = estimate_threshold(points_a, points_b)
    rng = np.random.default_rng(seed)
    samples = []
    for _ in range(n_boot):
        def resample(points):
            out = []
            for c in points:
                fails = int(rng.binomial(c.trials, c.failure_rate))
                out.append(CurvePoint(c.model, c.strategy, c.post_process,
                                      c.d, c.rounds, c.p, c.q, c.trials,
                                      fails, fails / c.trials, 0.0, 1.0,
                                      c.avg_pp_cycles, c.seed))
            return out

        try:
            samples.append(estimate_threshold(resample(points_a),
                                              resample(points_b)).p_cross)
        except NoCrossingError:
            continue
    if len(samples) < n_boot // 2:
        raise NoCrossingError(
            f"bootstrap unstable: only {len(samples)}/{n_boot} resamples cross")
    arr = np.asarray(samples)
    return estimate, float(arr.std()), arr


# --------------------------------------------------------------------------
# persistence
# --------------------------------------------------------------------------

def _format_value(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render_csv(points: list[CurvePoint]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for pt in points:
        row = pt.row()
        writer.writerow([_format_value(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def render_json(points: list[CurvePoint]) -> str:
    return json.dumps([pt.row() for pt in points], indent=2) + "\n"


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_points(path: str, points: list[CurvePoint],
                 fmt: str = "csv") -> None:
    """Write curve points as CSV or JSON, atomically."""
    if fmt == "csv":
        _atomic_write(path, render_csv(points))
    elif fmt == "json":
        _atomic_write(path, render_json(points))
    else:
        raise ValueError(f"unknown format {fmt!r}")
