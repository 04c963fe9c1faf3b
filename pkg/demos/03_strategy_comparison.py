"""
Comparing matching strategies under random noise
================================================

Three ways to pair up defects, from strongest to weakest:

* ``mwpm``   -- global minimum-weight perfect matching over all symmetries;
* ``ism``    -- independent symmetry matching: each symmetry solves its own
  cheap one-dimensional problem (much faster, slightly weaker);
* ``random`` -- pair defects uniformly at random (a sanity floor).

Each decode is tallied twice, with and without line minimization, from the
same matching, so the comparison is paired sample-by-sample.
"""

import time

import numpy as np

from paritydec import (ParityCode, SymmetryLayout, adjudicate, correction_2d,
                       match_2d, post_process, sample_error)

d = 7
code = ParityCode(d)
layout = SymmetryLayout(code)
trials = 2000
strategies = ("mwpm", "ism", "random")

print(f"d={d}, {trials} trials per point, iid qubit flips\n")
header = f"{'p':>5}  {'strategy':>8}  {'bare':>7}  {'minimized':>9}  {'ms/trial':>8}"
print(header)
print("-" * len(header))

for p in (0.08, 0.16):
    for strategy in strategies:
        fails_bare = fails_min = 0
        t0 = time.perf_counter()
        for t in range(trials):
            # One generator per (p, strategy, trial) keeps every tally
            # reproducible and lets strategies see identical error samples.
            rng = np.random.default_rng([17, int(p * 100), t])
            error = sample_error(code, p, rng)
            syndrome = code.syndrome(error)
            outcome = match_2d(code, layout, syndrome, strategy, rng=rng)
            correction = correction_2d(code, layout, outcome, syndrome)
            fails_bare += adjudicate(code, error, correction).failed
            report = post_process(code, correction)
            fails_min += adjudicate(code, error, report.result).failed
        ms = 1000 * (time.perf_counter() - t0) / trials
        print(f"{p:>5}  {strategy:>8}  {fails_bare / trials:>7.4f}  "
              f"{fails_min / trials:>9.4f}  {ms:>8.2f}")
    print()

print("Bare rates order as mwpm < ism << random, and the gaps widen with the")
print("noise.  Line minimization rescues so many shots that at this size it")
print("nearly levels the field -- which is what makes the cheap strategies")
print("usable in practice.  At larger d and near threshold the ordering")
print("reasserts itself (see the threshold demo).")
