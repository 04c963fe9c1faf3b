"""Matching graph builders: 2D/3D gadgets, fast paths, strategy semantics."""

import math

import numpy as np
import pytest

from paritydec import (NoiseConfig, ParityCode, SymmetryLayout, Virtual,
                       match_2d, match_3d, run_rounds, weight_3d)
from paritydec.graph_builders import (hook_role_position, log_likelihood_ratio,
                                      match_ism_2d, match_mwpm_2d_fast,
                                      match_mwpm_2d_reference,
                                      match_mwpm_3d_fast,
                                      match_mwpm_3d_reference, match_random_2d)

from conftest import qubit_labels, qubit_vec, random_syndrome


def contour_of(outcome):
    segs = None
    for path in outcome.paths:
        segs = path.segments.copy() if segs is None else segs ^ path.segments
    return segs


def assert_valid_matching(code, layout, syndrome, outcome):
    """Every strategy must produce a contour whose interior explains the
    syndrome exactly."""
    segs = contour_of(outcome)
    if segs is None:
        assert not syndrome.any()
        return
    corr = layout.interior(segs)
    assert np.array_equal(code.syndrome(corr), syndrome)
    assert math.isclose(outcome.total_weight,
                        sum(p.weight for p in outcome.paths),
                        rel_tol=0, abs_tol=1e-9)


def test_log_likelihood_ratio_values():
    assert math.isclose(log_likelihood_ratio(0.1), math.log(9.0))
    assert log_likelihood_ratio(0.5) == 0.0
    assert math.isinf(log_likelihood_ratio(0.0))
    for bad in (-0.1, 0.6, 1.0):
        with pytest.raises(ValueError):
            log_likelihood_ratio(bad)


def test_weight_3d_values():
    assert math.isclose(weight_3d(1, 0, 0.1, 0.1), 2.1972245773362196)
    assert math.isclose(weight_3d(2, 3, 0.1, 0.2),
                        2 * math.log(9.0) + 3 * math.log(4.0))
    assert weight_3d(0, 0, 0.1, 0.1) == 0.0


def test_hook_role_position_matches_layout(layout5):
    for stab in layout5.code.stabilizers:
        for a in (stab.i, stab.j):
            assert hook_role_position(stab, a) == layout5.hook_position(a, stab)


def test_single_bulk_error_gives_square_contour(code5, layout5):
    syndrome = code5.syndrome(qubit_vec(code5, ["q2.4"]))
    outcome = match_mwpm_2d_fast(code5, layout5, syndrome)
    assert outcome.total_weight == 4
    assert len(outcome.paths) == 4
    assert all(p.weight == 1 for p in outcome.paths)
    corr = layout5.interior(contour_of(outcome))
    assert qubit_labels(code5, corr) == {"q2.4"}


def test_single_corner_error_routes_through_chain(code5, layout5):
    syndrome = code5.syndrome(qubit_vec(code5, ["base1"]))
    outcome = match_mwpm_2d_fast(code5, layout5, syndrome)
    # S1.5 exits symmetry 1 at the end (cost 1) and symmetry 5 at the start
    # (cost 1); the two activated virtuals are chain neighbors (cost 1)
    assert outcome.total_weight == 3
    corr = layout5.interior(contour_of(outcome))
    assert qubit_labels(code5, corr) == {"base1"}


def test_fast_matches_reference_totals():
    rng = np.random.default_rng(42)
    for d in range(2, 8):
        code = ParityCode(d)
        layout = SymmetryLayout(code)
        for _ in range(25):
            _, syndrome = random_syndrome(code, rng)
            fast = match_mwpm_2d_fast(code, layout, syndrome)
            ref = match_mwpm_2d_reference(code, layout, syndrome)
            assert fast.total_weight == ref.total_weight
            assert_valid_matching(code, layout, syndrome, fast)
            assert_valid_matching(code, layout, syndrome, ref)


def test_fast_join_decomposition_consistency(code5, layout5):
    rng = np.random.default_rng(9)
    for _ in range(40):
        _, syndrome = random_syndrome(code5, rng)
        outcome = match_mwpm_2d_fast(code5, layout5, syndrome)
        # each defect role appears in exactly one path
        seen = {}
        for path in outcome.paths:
            for role in (path.u, path.v):
                if not isinstance(role.loc, Virtual):
                    key = (role.loc, role.sym)
                    assert key not in seen
                    seen[key] = path
        defects = [code5.stabilizers[k] for k in np.flatnonzero(syndrome)]
        assert len(seen) == 2 * len(defects)


def test_ism_engines_agree_per_symmetry():
    rng = np.random.default_rng(17)
    for d in (3, 5, 6):
        code = ParityCode(d)
        layout = SymmetryLayout(code)
        for _ in range(30):
            _, syndrome = random_syndrome(code, rng)
            fast = match_ism_2d(code, layout, syndrome, engine="fast")
            ref = match_ism_2d(code, layout, syndrome, engine="reference")

            def by_sym(outcome):
                tot: dict[int, float] = {}
                for p in outcome.paths:
                    if p.u.sym is not None:
                        tot[p.u.sym] = tot.get(p.u.sym, 0) + p.weight
                return tot

            assert by_sym(fast) == by_sym(ref)
            assert_valid_matching(code, layout, syndrome, fast)
            assert_valid_matching(code, layout, syndrome, ref)


def test_strategy_quality_ordering(code5, layout5):
    """mwpm is never beaten; ism never beats mwpm; random never beats either
    on expectation — and every strategy still explains the syndrome."""
    rng = np.random.default_rng(31)
    worse_random = 0
    for _ in range(40):
        _, syndrome = random_syndrome(code5, rng)
        mwpm = match_mwpm_2d_fast(code5, layout5, syndrome)
        ism = match_ism_2d(code5, layout5, syndrome)
        rand = match_random_2d(code5, layout5, syndrome, rng)
        assert mwpm.total_weight <= ism.total_weight
        assert mwpm.total_weight <= rand.total_weight
        worse_random += rand.total_weight > mwpm.total_weight
        assert_valid_matching(code5, layout5, syndrome, rand)
    assert worse_random > 0


def test_ism_can_be_strictly_worse_than_mwpm(code5, layout5):
    """Per-symmetry optimization is greedy relative to the global optimum;
    this frozen instance shows a strict gap."""
    from paritydec.clusters import correction_2d
    from paritydec import post_process

    error = qubit_vec(code5, ["q1.3", "q1.4", "q3.5", "q4.5"])
    syndrome = code5.syndrome(error)
    mwpm = match_mwpm_2d_fast(code5, layout5, syndrome)
    ism = match_ism_2d(code5, layout5, syndrome)
    assert mwpm.total_weight == 11
    assert ism.total_weight == 15
    corr_ism = correction_2d(code5, layout5, ism, syndrome)
    assert qubit_labels(code5, corr_ism) == {
        "base1", "base2", "base3", "base4", "q1.3", "q1.4", "q1.5", "q2.5"}
    # line minimization halves the heavier correction
    report = post_process(code5, corr_ism)
    assert report.cycles == 2
    assert qubit_labels(code5, report.result) == {"base1", "base5",
                                                  "q1.2", "q2.5"}


def test_random_strategy_is_seed_deterministic(code5, layout5):
    _, syndrome = random_syndrome(code5, np.random.default_rng(1))
    a = match_random_2d(code5, layout5, syndrome, np.random.default_rng(77))
    b = match_random_2d(code5, layout5, syndrome, np.random.default_rng(77))
    assert a.total_weight == b.total_weight
    assert [(p.u.label, p.v.label) for p in a.paths] == \
        [(p.u.label, p.v.label) for p in b.paths]


def test_dispatcher_validation(code5, layout5):
    syndrome = np.zeros(code5.n_stabilizers, dtype=bool)
    with pytest.raises(ValueError):
        match_2d(code5, layout5, syndrome, "random")  # needs an rng
    with pytest.raises(ValueError):
        match_2d(code5, layout5, syndrome, "unknown")
    detectors = np.zeros((2, code5.n_stabilizers), dtype=bool)
    with pytest.raises(ValueError):
        match_3d(code5, layout5, detectors, 0.1, 0.1, "random")
    with pytest.raises(ValueError):
        match_3d(code5, layout5, detectors, 0.1, 0.1, "unknown")


def test_3d_fast_matches_reference_totals():
    rng = np.random.default_rng(8)
    for d in (3, 4, 5):
        code = ParityCode(d)
        layout = SymmetryLayout(code)
        cfg = NoiseConfig(model="phenomenological", p=0.08, q=0.08)
        for _ in range(10):
            detectors, _ = run_rounds(code, cfg, rng)
            fast = match_mwpm_3d_fast(code, layout, detectors, 0.08, 0.08)
            ref = match_mwpm_3d_reference(code, layout, detectors, 0.08, 0.08)
            assert math.isclose(fast.total_weight, ref.total_weight,
                                rel_tol=0, abs_tol=1e-6), (d, fast.total_weight,
                                                           ref.total_weight)


def test_3d_measurement_error_matches_in_time(code5, layout5):
    """A lone flipped measurement produces two detectors at the same location
    in consecutive rounds; both strategies must pair them time-like."""
    detectors = np.zeros((5, code5.n_stabilizers), dtype=bool)
    s = code5.stabilizer_index[code5.stabilizers[4]]
    detectors[1, s] = detectors[2, s] = True
    for strategy in ("mwpm", "ism"):
        outcome = match_3d(code5, layout5, detectors, 0.05, 0.05, strategy)
        real = [p for p in outcome.paths if p.segments.any()]
        assert real == []
        pairs = [(p.u, p.v) for p in outcome.paths
                 if not isinstance(p.u.loc, Virtual)]
        # the defect has one role per owning symmetry; each matches in time
        assert len(pairs) == 2
        assert {u.sym for u, _ in pairs} == {2, 3}
        for u, v in pairs:
            assert u.loc == v.loc
            assert u.sym == v.sym
            assert {u.t, v.t} == {1, 2}


def test_3d_weights_scale_with_probabilities(code5, layout5):
    """Lower q makes time-like moves costlier, so totals must not decrease."""
    rng = np.random.default_rng(12)
    cfg = NoiseConfig(model="phenomenological", p=0.1, q=0.1)
    detectors, _ = run_rounds(code5, cfg, rng)
    base = match_mwpm_3d_fast(code5, layout5, detectors, 0.1, 0.1)
    tighter = match_mwpm_3d_fast(code5, layout5, detectors, 0.1, 0.02)
    assert tighter.total_weight >= base.total_weight - 1e-9
