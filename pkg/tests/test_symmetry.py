"""Symmetry layout: hooks, chain, virtual supports, planar geometry."""

import numpy as np
import pytest

from paritydec import ParityCode, SymmetryLayout, Virtual, parse_qubit, parse_stabilizer

from conftest import qubit_labels


def test_symmetry_members_order(layout5):
    members = layout5.symmetry_members(3)
    assert [m.label for m in members] == [
        "V3s", "S1.3", "S2.3", "S3.4", "S3.5", "V3e"]
    for pos, m in enumerate(members):
        assert layout5.hook_position(3, m) == pos


def test_hook_position_closed_form():
    for d in (2, 4, 6, 9):
        layout = SymmetryLayout(ParityCode(d))
        for stab in layout.code.stabilizers:
            i, j = layout.owning_symmetries(stab)
            assert layout.hook_position(i, stab) == j - 1
            assert layout.hook_position(j, stab) == i
            # every stabilizer occupies an interior position on both hooks
            assert 1 <= layout.hook_position(i, stab) <= d - 1
            assert 1 <= layout.hook_position(j, stab) <= d - 1


def test_hook_position_rejects_non_members(layout5):
    with pytest.raises(ValueError):
        layout5.hook_position(2, parse_stabilizer("S1.3"))
    with pytest.raises(ValueError):
        layout5.hook_position(2, Virtual("s", 3))
    with pytest.raises(ValueError):
        layout5.hook_stabilizers(6)


def test_hook_distance(layout5):
    assert layout5.distance_2d(3, parse_stabilizer("S1.3"),
                               parse_stabilizer("S3.5")) == 3
    assert layout5.distance_2d(3, Virtual("s", 3), Virtual("e", 3)) == 5


def test_chain_order_and_distance(layout5):
    chain = layout5.chain_members
    assert [v.label for v in chain] == [
        "V1s", "V2s", "V3s", "V4s", "V5s", "V1e", "V2e", "V3e", "V4e", "V5e"]
    for c, v in enumerate(chain):
        assert layout5.chain_position(v) == c
    assert layout5.chain_distance(Virtual("s", 2), Virtual("e", 2)) == 5


def test_pinned_virtual_supports_d5(layout5):
    def sup(kind, a):
        return {q.label for q in layout5.virtual_support(Virtual(kind, a))}

    assert sup("s", 1) == {"q1.2"}
    assert sup("s", 3) == {"q1.3", "q1.4"}
    assert sup("s", 5) == {"q1.5", "base1"}
    assert sup("e", 2) == {"base2", "base3"}
    assert sup("e", 5) == {"base5"}


def test_symmetry_parity_closure():
    """The members of each symmetry, virtuals included, cover every qubit an
    even number of times, so defects always come in pairs per symmetry."""
    for d in range(2, 9):
        code = ParityCode(d)
        layout = SymmetryLayout(code)
        for a in range(1, d + 1):
            total = np.zeros(code.n_qubits, dtype=bool)
            for stab in layout.hook_stabilizers(a):
                for q in code.support(stab):
                    total[code.qubit_index[q]] ^= True
            total ^= layout.virtual_support_vector(Virtual("s", a))
            total ^= layout.virtual_support_vector(Virtual("e", a))
            assert not total.any(), f"d={d} symmetry {a} is not closed"


def test_single_error_flips_adjacent_pair_per_symmetry():
    """Within any symmetry, a single-qubit error flips either nothing or two
    members at consecutive hook positions."""
    for d in (3, 5, 7):
        code = ParityCode(d)
        layout = SymmetryLayout(code)
        for q in code.qubits:
            k = code.qubit_index[q]
            for a in range(1, d + 1):
                positions = [layout.hook_position(a, s) for s in code.toggles(q)
                             if a in (s.i, s.j)]
                for kind in ("s", "e"):
                    v = Virtual(kind, a)
                    if layout.virtual_support_vector(v)[k]:
                        positions.append(layout.hook_position(a, v))
                positions.sort()
                assert len(positions) in (0, 2)
                if positions:
                    assert positions[1] == positions[0] + 1


def test_embedding_points(layout5):
    assert layout5.stabilizer_point(parse_stabilizer("S2.4")) == (8, 16)
    assert layout5.virtual_point(Virtual("s", 3)) == (0, 12)
    assert layout5.virtual_point(Virtual("e", 2)) == (8, 24)
    # hook nodes coincide with the embedded member points
    for a in range(1, 6):
        members = layout5.symmetry_members(a)
        for t, m in enumerate(members):
            want = (layout5.virtual_point(m) if isinstance(m, Virtual)
                    else layout5.stabilizer_point(m))
            assert layout5.hook_point(a, t) == want
    # chain nodes coincide with the embedded virtual points
    for c, v in enumerate(layout5.chain_members):
        assert layout5.chain_point(c) == layout5.virtual_point(v)


def test_hook_path_has_single_diagonal_step(layout5):
    for a in range(1, 6):
        steps = []
        for t in range(5):
            (x1, y1), (x2, y2) = layout5.hook_point(a, t), layout5.hook_point(a, t + 1)
            steps.append((x2 - x1, y2 - y1))
        diagonals = [s for s in steps if s[0] and s[1]]
        assert diagonals == [(4, 4)]
        assert steps.index((4, 4)) == a - 1


def test_segment_id_roundtrip(layout5):
    d = layout5.d
    assert layout5.n_segments == d * d + 2 * d - 1
    for a in range(1, d + 1):
        for t in range(d):
            sid = layout5.hook_segment_id(a, t)
            assert layout5.segment_endpoints(sid) == (
                layout5.hook_point(a, t), layout5.hook_point(a, t + 1))
    for c in range(2 * d - 1):
        sid = layout5.chain_segment_id(c)
        assert layout5.segment_endpoints(sid) == (
            layout5.chain_point(c), layout5.chain_point(c + 1))


def test_elementary_contours_enclose_their_qubit():
    for d in range(2, 9):
        layout = SymmetryLayout(ParityCode(d))
        contours = layout.elementary_contours
        enclosed = layout.interior(contours.T.astype(np.uint8))
        assert np.array_equal(enclosed, np.eye(layout.code.n_qubits, dtype=bool))


def test_elementary_contours_are_closed(layout5):
    """Every segment endpoint on an elementary contour has even degree."""
    for row in layout5.elementary_contours:
        degree: dict[tuple[int, int], int] = {}
        for sid in np.flatnonzero(row):
            for pt in layout5.segment_endpoints(int(sid)):
                degree[pt] = degree.get(pt, 0) + 1
        assert all(v % 2 == 0 for v in degree.values())


def test_interior_is_linear(layout5):
    rng = np.random.default_rng(7)
    for _ in range(20):
        c1 = rng.integers(0, 2, layout5.n_segments).astype(bool)
        c2 = rng.integers(0, 2, layout5.n_segments).astype(bool)
        lhs = layout5.interior(np.logical_xor(c1, c2))
        rhs = np.logical_xor(layout5.interior(c1), layout5.interior(c2))
        assert np.array_equal(lhs, rhs)


def test_interior_of_contour_sum_matches_qubit_set(layout5):
    code = layout5.code
    vec = code.vector_from_qubits([parse_qubit(x)
                                   for x in ("q2.4", "base3", "q1.5")])
    contour = np.logical_xor.reduce(layout5.elementary_contours[vec], axis=0)
    assert qubit_labels(code, layout5.interior(contour)) == {"q2.4", "base3", "q1.5"}
