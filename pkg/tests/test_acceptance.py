"""End-to-end validation gates for the decoder stack.

Each test exercises one shipping criterion at full statistical volume and
prints a single ``ACCEPTANCE nn [...]: PASS/FAIL`` line.  The whole file is
expensive (roughly two and a half hours on one core, dominated by the
faulty-measurement threshold scans); run it with ``pytest
tests/test_acceptance.py -v -s`` to watch progress lines as curves fill in.
"""

from __future__ import annotations

import math
import time
from contextlib import contextmanager
from functools import lru_cache

import numpy as np
from click.testing import CliRunner

from paritydec.cli import main as cli_main
from paritydec.clusters import correction_2d
from paritydec.code import ParityCode
from paritydec.experiments import (CurvePoint, ExperimentPoint,
                                   bootstrap_threshold, estimate_threshold,
                                   run_point, wilson_interval)
from paritydec.graph_builders import match_2d
from paritydec.matching_engine import (
    brute_force_min_weight_perfect_matching, min_weight_perfect_matching)
from paritydec.noise_sim import (MODEL_CODE_CAPACITY, MODEL_PHENOMENOLOGICAL,
                                 NoiseConfig, adjudicate, decode,
                                 lower_bound_trial, sample_error)
from paritydec.postprocess import overlap_threshold, post_process
from paritydec.symmetry import SymmetryLayout, Virtual

# ---------------------------------------------------------------------------
# tunables (sized so every statistical gate holds with a >= 3-sigma margin)
# ---------------------------------------------------------------------------

CC_DISTANCES = (5, 7, 9, 11, 13)
CC_TRIALS = 10_000
CC_GRID_MWPM = (0.10, 0.14, 0.18, 0.22, 0.26, 0.30, 0.34, 0.38)
CC_GRID_ISM = (0.06,) + CC_GRID_MWPM

# The d={9,11,13} crossings all sit within ~0.013 of each other around
# p~0.32, so those curves get a finer grid and 10x the trials there;
# otherwise ordering two crossings that close is a coin flip.
CC_FINE_DISTANCES = (9, 11, 13)
CC_FINE_POINTS = (0.30, 0.32, 0.34)
CC_TRIALS_FINE = 100_000

# p-ranges (inclusive) bracketing each curve-pair crossing; picked from pilot
# runs so the sign change sits comfortably inside the window.  The top-pair
# windows differ per strategy: the minimized matching crossings cluster near
# p~0.32 (bracketed tightly by the fine grid above), while the per-symmetry
# strategy crosses lower (~0.30) on its coarse grid and needs wider brackets.
CC_SLICE_ON_MWPM = {(5, 7): (0.18, 0.34), (7, 9): (0.18, 0.34),
                    (9, 11): (0.30, 0.34), (11, 13): (0.30, 0.34)}
CC_SLICE_ON_ISM = {(5, 7): (0.18, 0.34), (7, 9): (0.18, 0.34),
                   (9, 11): (0.22, 0.38), (11, 13): (0.22, 0.38)}
CC_SLICE_OFF_MWPM = {(5, 7): (0.10, 0.22), (7, 9): (0.14, 0.26),
                     (9, 11): (0.18, 0.30), (11, 13): (0.18, 0.30)}
CC_SLICE_OFF_ISM = {(5, 7): (0.06, 0.18), (7, 9): (0.10, 0.22),
                    (9, 11): (0.10, 0.22), (11, 13): (0.14, 0.26)}

EXT_DISTANCES = (25, 31)
EXT_GRID = (0.34, 0.38, 0.42, 0.46)
EXT_TRIALS = 10_000

C3_TRIALS = 10_000
C7_TRIALS = 100_000

PHEN_DISTANCES = (7, 9, 11)
PHEN_GRID_MWPM = (0.03, 0.04, 0.05, 0.065)
PHEN_TRIALS_MWPM = {0.03: 6000, 0.04: 6000, 0.05: 5000, 0.065: 3000}
PHEN_GRID_ISM = (0.03, 0.045, 0.06)
PHEN_TRIALS_ISM = {0.03: 3000, 0.045: 3000, 0.06: 3000}

C9_TRIALS = 12_000
C10_TRIALS = 20_000


@contextmanager
def _gate(num: int, name: str, info: dict):
    """Wrap one criterion; always emit exactly one PASS/FAIL summary line."""
    t0 = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"\nACCEPTANCE {num:02d} [{name}]: FAIL "
              f"({time.perf_counter() - t0:.1f}s)", flush=True)
        raise
    extra = ", ".join(f"{k}={v}" for k, v in info.items())
    print(f"\nACCEPTANCE {num:02d} [{name}]: PASS "
          f"({time.perf_counter() - t0:.1f}s"
          f"{'; ' + extra if extra else ''})", flush=True)


@lru_cache(maxsize=None)
def _cl(d: int) -> tuple[ParityCode, SymmetryLayout]:
    code = ParityCode(d)
    return code, SymmetryLayout(code)


# ---------------------------------------------------------------------------
# 1. structural invariants of the code family
# ---------------------------------------------------------------------------

def test_acceptance_01_structural_invariants():
    info = {}
    with _gate(1, "structural invariants d=2..15", info):
        t0 = time.perf_counter()
        for d in range(2, 16):
            code, layout = ParityCode(d), None
            layout = SymmetryLayout(code)
            assert code.n_qubits == d * (d + 1) // 2
            assert code.n_stabilizers == code.n_qubits - d
            weights = [len(code.support(s)) for s in code.stabilizers]
            assert all(w in (3, 4) for w in weights)
            assert sum(1 for w in weights if w == 3) == d - 1

            lines = code.logical_lines.astype(np.int64)
            assert lines.shape == (d + 1, code.n_qubits)
            assert (lines.sum(axis=1) == d).all()
            inter = lines @ lines.T
            iu = np.triu_indices(d + 1, k=1)
            assert (inter[iu] == 1).all()
            for k in range(d + 1):
                assert not code.syndrome(code.logical_lines[k]).any()
            assert not (lines.sum(axis=0) % 2).any()

            # every symmetry is closed once its two boundary virtuals join in
            for a in range(1, d + 1):
                total = np.zeros(code.n_qubits, dtype=bool)
                for stab in layout.hook_stabilizers(a):
                    for q in code.support(stab):
                        total[code.qubit_index[q]] ^= True
                total ^= layout.virtual_support_vector(Virtual("s", a))
                total ^= layout.virtual_support_vector(Virtual("e", a))
                assert not total.any(), f"d={d} symmetry {a} not closed"
        elapsed = time.perf_counter() - t0
        assert elapsed < 10.0, f"structural sweep took {elapsed:.1f}s"
        info["elapsed"] = f"{elapsed:.2f}s"


# ---------------------------------------------------------------------------
# 2. matching engine against exhaustive enumeration
# ---------------------------------------------------------------------------

def test_acceptance_02_matching_vs_brute_force():
    info = {}
    with _gate(2, "matching equals brute force on 200 random graphs", info):
        t0 = time.perf_counter()
        rng = np.random.default_rng(20_202)
        for _ in range(200):
            n = 2 * int(rng.integers(1, 7))          # 2..12 nodes
            perm = [int(x) for x in rng.permutation(n)]
            edges = {}
            for i in range(0, n, 2):                 # plant a perfect matching
                u, v = sorted((perm[i], perm[i + 1]))
                edges[(u, v)] = int(rng.integers(1, 50))
            for _ in range(int(rng.integers(0, 2 * n + 1))):
                u, v = sorted(int(x) for x in
                              rng.choice(n, size=2, replace=False))
                edges.setdefault((u, v), int(rng.integers(1, 50)))
            elist = [(u, v, w) for (u, v), w in edges.items()]
            _, total = min_weight_perfect_matching(n, elist)
            _, expected = brute_force_min_weight_perfect_matching(n, elist)
            assert total == expected, (n, elist)
        elapsed = time.perf_counter() - t0
        assert elapsed < 30.0, f"200 graphs took {elapsed:.1f}s"
        info["elapsed"] = f"{elapsed:.2f}s"


# ---------------------------------------------------------------------------
# 3. decoder postconditions under heavy random noise
# ---------------------------------------------------------------------------

def test_acceptance_03_postcondition_sweep():
    info = {}
    with _gate(3, "zero postcondition violations in random-noise sweep", info):
        violations = 0
        decodes = 0
        for d in (5, 7, 9, 11):
            code, layout = _cl(d)
            thr = overlap_threshold(d)
            lines = code.logical_lines.astype(np.int64)
            for pi, p in enumerate((0.05, 0.2, 0.4)):
                for t in range(C3_TRIALS):
                    rng = np.random.default_rng([30_000 + d, pi, t])
                    error = sample_error(code, p, rng)
                    syndrome = code.syndrome(error)
                    for strategy in ("mwpm", "ism", "random"):
                        decodes += 1
                        try:
                            outcome = match_2d(code, layout, syndrome,
                                               strategy, rng=rng)
                            corr = correction_2d(code, layout, outcome,
                                                 syndrome)
                            adjudicate(code, error, corr)
                            report = post_process(code, corr)
                            if (code.syndrome(report.result)
                                    != syndrome).any():
                                violations += 1
                                continue
                            adjudicate(code, error, report.result)
                            overlaps = lines @ report.result.astype(np.int64)
                            if int(overlaps.max()) >= thr:
                                violations += 1
                        except Exception:
                            violations += 1
        assert violations == 0, f"{violations} violations in {decodes} decodes"
        info["decodes"] = decodes


# ---------------------------------------------------------------------------
# 4. exact handling of every possible single fault
# ---------------------------------------------------------------------------

def test_acceptance_04_single_fault_exactness():
    info = {}
    with _gate(4, "every single fault handled exactly", info):
        n_data = n_meas = 0
        # d=2 is excluded from the data sweep: its three single-qubit errors
        # share one syndrome, so no decoder can invert more than one of them
        # (a distance-2 code detects a single error but cannot correct it).
        for d in range(3, 16):
            code, layout = _cl(d)
            cc = NoiseConfig(MODEL_CODE_CAPACITY, 0.1)
            for k in range(code.n_qubits):
                error = np.zeros(code.n_qubits, dtype=bool)
                error[k] = True
                corr, _ = decode(code, layout, cc, "mwpm", True,
                                 code.syndrome(error))
                assert (corr == error).all(), (d, code.qubits[k].label)
                n_data += 1

        for d in range(2, 16):
            code, layout = _cl(d)
            phen = NoiseConfig(MODEL_PHENOMENOLOGICAL, 0.05, q=0.05, rounds=d)
            rounds = phen.effective_rounds(code.d)
            for t in range(rounds - 1):
                for s in range(code.n_stabilizers):
                    det = np.zeros((rounds, code.n_stabilizers), dtype=bool)
                    det[t, s] = True
                    det[t + 1, s] = True
                    corr, _ = decode(code, layout, phen, "mwpm", True, det)
                    assert not corr.any(), (d, t, code.stabilizers[s].label)
                    n_meas += 1
        info.update(data_faults=n_data, measurement_faults=n_meas)


# ---------------------------------------------------------------------------
# 5 + 6. ideal-measurement threshold campaign (shared between two gates)
# ---------------------------------------------------------------------------

def _paired_tallies(d: int, p: float, trials: int, strategy: str,
                    seed: int, subkey: int) -> tuple[CurvePoint, CurvePoint]:
    """Match once per trial; tally failures with and without minimization."""
    code, layout = _cl(d)
    fails_on = fails_off = cycles = 0
    for t in range(trials):
        rng = np.random.default_rng([seed, subkey, t])
        error = sample_error(code, p, rng)
        syndrome = code.syndrome(error)
        outcome = match_2d(code, layout, syndrome, strategy, rng=rng)
        corr = correction_2d(code, layout, outcome, syndrome)
        fails_off += adjudicate(code, error, corr).failed
        report = post_process(code, corr)
        fails_on += adjudicate(code, error, report.result).failed
        cycles += report.cycles

    def mk(pp: bool, fails: int) -> CurvePoint:
        lo, hi = wilson_interval(fails, trials)
        return CurvePoint(MODEL_CODE_CAPACITY, strategy, pp, d, 1, p, 0.0,
                          trials, fails, fails / trials, lo, hi,
                          cycles / trials if pp else 0.0, seed)

    return mk(True, fails_on), mk(False, fails_off)


def _points_plan(strategy: str, d: int) -> list[tuple[float, int]]:
    """Sorted (p, trials) plan for one curve."""
    grid = CC_GRID_MWPM if strategy == "mwpm" else CC_GRID_ISM
    plan = {p: CC_TRIALS for p in grid}
    if strategy == "mwpm" and d in CC_FINE_DISTANCES:
        for p in CC_FINE_POINTS:
            plan[p] = CC_TRIALS_FINE
    return sorted(plan.items())


@lru_cache(maxsize=None)
def _cc_campaign() -> dict:
    """Failure-rate curves for both strategies, with and without
    minimization, on their pilot-chosen p grids."""
    curves = {}
    for si, strategy in enumerate(("mwpm", "ism")):
        for d in CC_DISTANCES:
            on, off = [], []
            for p, trials in _points_plan(strategy, d):
                subkey = 10_000 * si + int(round(1000 * p))
                a, b = _paired_tallies(d, p, trials, strategy,
                                       50_000 + d, subkey)
                on.append(a)
                off.append(b)
                print(f"  [curve] {strategy:4s} d={d:2d} p={p:.2f} "
                      f"on={a.failure_rate:.4f} off={b.failure_rate:.4f} "
                      f"({trials} trials)", flush=True)
            curves[strategy, d] = {"on": on, "off": off}
    return curves


def _cross(curves: dict, strategy: str, pair: tuple[int, int], state: str,
           p_lo: float, p_hi: float) -> tuple[list, list]:
    a = [c for c in curves[strategy, pair[0]][state]
         if p_lo - 1e-9 <= c.p <= p_hi + 1e-9]
    b = [c for c in curves[strategy, pair[1]][state]
         if p_lo - 1e-9 <= c.p <= p_hi + 1e-9]
    common = {c.p for c in a} & {c.p for c in b}
    return ([c for c in a if c.p in common],
            [c for c in b if c.p in common])


def test_acceptance_05_threshold_growth_with_distance():
    info = {}
    with _gate(5, "crossings grow with distance and saturate high", info):
        curves = _cc_campaign()
        xs = []
        for pair in ((5, 7), (7, 9), (9, 11), (11, 13)):
            a, b = _cross(curves, "mwpm", pair, "on",
                          *CC_SLICE_ON_MWPM[pair])
            est = estimate_threshold(a, b)
            xs.append(est.p_cross)
            print(f"  [cross] mwpm {pair}: {est.p_cross:.4f} "
                  f"bracket {est.bracket}", flush=True)

        ext = {}
        for d in EXT_DISTANCES:
            pts = []
            for pi, p in enumerate(EXT_GRID):
                a, _ = _paired_tallies(d, p, EXT_TRIALS, "mwpm",
                                       55_000 + d, pi)
                pts.append(a)
                print(f"  [curve] mwpm d={d} p={p:.2f} "
                      f"on={a.failure_rate:.4f}", flush=True)
            ext[d] = pts
        big = estimate_threshold(ext[EXT_DISTANCES[0]],
                                 ext[EXT_DISTANCES[1]]).p_cross
        print(f"  [cross] mwpm {EXT_DISTANCES}: {big:.4f}", flush=True)

        assert all(xs[i + 1] >= xs[i] for i in range(3)), xs
        assert xs[-1] >= 0.30, xs
        assert big >= 0.35, big
        info["crossings"] = "[" + ", ".join(f"{x:.3f}" for x in xs) + "]"
        info[f"d{EXT_DISTANCES[0]}/{EXT_DISTANCES[1]}"] = f"{big:.3f}"


def test_acceptance_06_minimization_raises_thresholds():
    info = {}
    with _gate(6, "minimization raises every crossing", info):
        curves = _cc_campaign()
        worst_sigmas = math.inf
        for strategy, on_slices, off_slices in (
                ("mwpm", CC_SLICE_ON_MWPM, CC_SLICE_OFF_MWPM),
                ("ism", CC_SLICE_ON_ISM, CC_SLICE_OFF_ISM)):
            for pair in ((5, 7), (7, 9), (9, 11), (11, 13)):
                a_on, b_on = _cross(curves, strategy, pair, "on",
                                    *on_slices[pair])
                a_off, b_off = _cross(curves, strategy, pair, "off",
                                      *off_slices[pair])
                est_on, sig_on, _ = bootstrap_threshold(a_on, b_on, seed=61)
                est_off, sig_off, _ = bootstrap_threshold(a_off, b_off,
                                                          seed=62)
                gap = est_on.p_cross - est_off.p_cross
                print(f"  [gap] {strategy:4s} {pair}: "
                      f"on={est_on.p_cross:.4f}+-{sig_on:.4f} "
                      f"off={est_off.p_cross:.4f}+-{sig_off:.4f} "
                      f"gap={gap:.4f}", flush=True)
                assert gap >= 0.0, (strategy, pair, gap)
                if strategy == "ism":
                    sig = math.hypot(sig_on, sig_off)
                    assert gap > 3.0 * sig, (pair, gap, sig)
                    worst_sigmas = min(worst_sigmas, gap / sig)
        info["min_ism_gap_sigmas"] = f"{worst_sigmas:.1f}"


# ---------------------------------------------------------------------------
# 7. proximity to the optimal-decoder lower bound
# ---------------------------------------------------------------------------

def test_acceptance_07_lower_bound_proximity():
    info = {}
    with _gate(7, "failure rate within 1.5x of the lower bound", info):
        code, layout = _cl(11)
        cfg = NoiseConfig(MODEL_CODE_CAPACITY, 0.1)
        ratios = []
        for p in (0.10, 0.125, 0.15):
            f_dec = f_lb = 0
            for t in range(C7_TRIALS):
                rng = np.random.default_rng([70_000, int(p * 1000), t])
                error = sample_error(code, p, rng)
                f_lb += lower_bound_trial(code, error)
                corr, _ = decode(code, layout, cfg, "mwpm", True,
                                 code.syndrome(error))
                f_dec += adjudicate(code, error, corr).failed
            assert f_lb > 0, f"no lower-bound failures at p={p}"
            ratio = f_dec / f_lb
            assert ratio <= 1.5, (p, f_dec, f_lb)
            ratios.append(f"p={p}:{ratio:.3f}")
        info["ratios"] = " ".join(ratios)


# ---------------------------------------------------------------------------
# 8 + 9. faulty-measurement campaigns
# ---------------------------------------------------------------------------

def _phen_curves(strategy: str, grid: tuple, trials_by_p: dict,
                 seed_base: int) -> dict:
    out = {}
    for d in PHEN_DISTANCES:
        pts = []
        for pi, p in enumerate(grid):
            point = ExperimentPoint(MODEL_PHENOMENOLOGICAL, strategy, True,
                                    d, d, p, p, trials_by_p[p])
            cp = run_point(point, seed_base + d, pi, workers=1)
            pts.append(cp)
            print(f"  [phen] {strategy:4s} d={d:2d} p=q={p:<5} "
                  f"rate={cp.failure_rate:.4f} ({cp.trials} trials)",
                  flush=True)
        out[d] = pts
    return out


def test_acceptance_08_faulty_measurement_thresholds():
    info = {}
    with _gate(8, "faulty-measurement crossings in band", info):
        t0 = time.perf_counter()
        ism = _phen_curves("ism", PHEN_GRID_ISM, PHEN_TRIALS_ISM, 81_000)
        ism_elapsed = time.perf_counter() - t0
        i79 = estimate_threshold(ism[7], ism[9]).p_cross
        i911 = estimate_threshold(ism[9], ism[11]).p_cross
        assert ism_elapsed < 1800.0, f"reduced scan took {ism_elapsed:.0f}s"

        mwpm = _phen_curves("mwpm", PHEN_GRID_MWPM, PHEN_TRIALS_MWPM, 80_000)
        c79 = estimate_threshold(mwpm[7], mwpm[9]).p_cross
        c911 = estimate_threshold(mwpm[9], mwpm[11]).p_cross
        assert 0.03 <= c79 <= 0.08, c79
        assert 0.03 <= c911 <= 0.08, c911
        assert c911 >= c79, (c79, c911)
        info["mwpm_crossings"] = f"[{c79:.4f}, {c911:.4f}]"
        info["ism_crossings"] = f"[{i79:.4f}, {i911:.4f}]"
        info["ism_scan"] = f"{ism_elapsed:.0f}s"


def test_acceptance_09_subthreshold_suppression():
    info = {}
    with _gate(9, "failure rate drops with distance at p=q=3%", info):
        pts = {}
        for d in PHEN_DISTANCES:
            point = ExperimentPoint(MODEL_PHENOMENOLOGICAL, "ism", True,
                                    d, d, 0.03, 0.03, C9_TRIALS)
            pts[d] = run_point(point, 90_000 + d, 0, workers=1)
            print(f"  [phen] ism  d={d:2d} p=q=0.03  "
                  f"rate={pts[d].failure_rate:.4f}", flush=True)

        def sig_diff(a: CurvePoint, b: CurvePoint) -> float:
            return math.sqrt(
                a.failure_rate * (1 - a.failure_rate) / a.trials
                + b.failure_rate * (1 - b.failure_rate) / b.trials)

        r7, r9, r11 = pts[7], pts[9], pts[11]
        assert (r7.failure_rate - r9.failure_rate
                > 3.0 * sig_diff(r7, r9)), (r7, r9)
        assert (r9.failure_rate - r11.failure_rate
                > 3.0 * sig_diff(r9, r11)), (r9, r11)
        info["rates"] = (f"[{r7.failure_rate:.4f}, {r9.failure_rate:.4f}, "
                         f"{r11.failure_rate:.4f}]")


# ---------------------------------------------------------------------------
# 10. minimization stays cheap below threshold
# ---------------------------------------------------------------------------

def test_acceptance_10_minimization_cycle_budget():
    info = {}
    with _gate(10, "minimization cycle counts stay small", info):
        worst = 0.0
        for d in (11, 13, 15):
            for pi, p in enumerate((0.10, 0.15, 0.20)):
                point = ExperimentPoint(MODEL_CODE_CAPACITY, "mwpm", True,
                                        d, 1, p, 0.0, C10_TRIALS)
                cp = run_point(point, 100_000 + d, pi, workers=1)
                assert cp.avg_pp_cycles < 2.0, (d, p, cp.avg_pp_cycles)
                worst = max(worst, cp.avg_pp_cycles)

        ds = (5, 7, 9, 11, 13, 15, 17, 19)
        vals = []
        for d in ds:
            point = ExperimentPoint(MODEL_CODE_CAPACITY, "mwpm", True,
                                    d, 1, 0.10, 0.0, C10_TRIALS)
            cp = run_point(point, 101_000 + d, 0, workers=1)
            vals.append(cp.avg_pp_cycles)
            print(f"  [cycles] d={d:2d} p=0.10 avg={cp.avg_pp_cycles:.4f}",
                  flush=True)
        peak = int(np.argmax(vals))
        assert peak <= 2, (ds, vals)
        for i in range(peak, len(vals) - 1):
            tol = 3.0 * math.sqrt((vals[i] + vals[i + 1]) / C10_TRIALS
                                  + 1e-12)
            assert vals[i + 1] <= vals[i] + tol, (ds[i + 1], vals)
        info["worst_avg"] = f"{worst:.3f}"
        info["shape"] = "[" + ", ".join(f"{v:.4f}" for v in vals) + "]"


# ---------------------------------------------------------------------------
# 11. identical output regardless of worker count
# ---------------------------------------------------------------------------

def test_acceptance_11_worker_count_invariance(tmp_path):
    info = {}
    with _gate(11, "byte-identical output across worker counts", info):
        runner = CliRunner()
        base = ["simulate", "--distance", "5", "--p", "0.12,0.2",
                "--trials", "600", "--seed", "4242", "--strategy", "mwpm",
                "--post-process", "on"]
        out1 = tmp_path / "w1.csv"
        out2 = tmp_path / "w2.csv"
        r1 = runner.invoke(cli_main, base + ["--out", str(out1),
                                             "--workers", "1"])
        r2 = runner.invoke(cli_main, base + ["--out", str(out2),
                                             "--workers", "2"])
        assert r1.exit_code == 0, r1.output
        assert r2.exit_code == 0, r2.output
        b1, b2 = out1.read_bytes(), out2.read_bytes()
        assert b1 and b1 == b2
        info["bytes"] = len(b1)
