"""Symmetries of the parity code: hooks, virtual boundaries, chain, geometry.

Each logical index ``a`` induces a symmetry: the ``d-1`` stabilizers
``S_{min(a,b),max(a,b)}`` form a hook through the grid, and every single-qubit
error flips an even number of members of the extended set {hook a} ∪
{virtual start/end supports of a}.  Defect matching happens along these hooks
(positions 1..d-1) with two virtual boundary members at positions 0 and d.
The 2d virtual members of all symmetries are linked in a fixed chain order
(all starts, then all ends).

The planar embedding stores integer coordinates scaled by 4 so that all
point-in-region tests (even/odd ray crossings) are exact integer arithmetic.
Hook paths are rectilinear except for exactly one diagonal step between
positions ``a-1`` and ``a``; the chain runs down the left edge, takes one
diagonal corner step, and continues along the bottom edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .code import ParityCode, Qubit, Stabilizer


@dataclass(frozen=True, order=True)
class Virtual:
    """Virtual boundary member of symmetry ``a``; kind 's' (start) or 'e' (end)."""

    kind: str
    a: int

    def __post_init__(self) -> None:
        if self.kind not in ("s", "e"):
            raise ValueError(f"virtual kind must be 's' or 'e', got {self.kind!r}")

    @property
    def label(self) -> str:
        return f"V{self.a}{'s' if self.kind == 's' else 'e'}"

    def __repr__(self) -> str:
        return self.label


Location = Stabilizer | Virtual


class SymmetryLayout:
    """Hook/chain structure and exact planar geometry for one code."""

    def __init__(self, code: ParityCode):
        self.code = code
        self.d = code.d

    # ----- hooks -----

    def hook_stabilizers(self, a: int) -> tuple[Stabilizer, ...]:
        """Members of symmetry ``a`` ordered by hook position (1..d-1)."""
        self._check_sym(a)
        members = [Stabilizer(min(a, b), max(a, b))
                   for b in range(1, self.d + 1) if b != a]
        return tuple(sorted(members, key=lambda s: self.hook_position(a, s)))

    def symmetry_members(self, a: int) -> tuple[Location, ...]:
        """Virtual start, hook stabilizers in position order, virtual end."""
        return (Virtual("s", a), *self.hook_stabilizers(a), Virtual("e", a))

    def hook_position(self, a: int, member: Location) -> int:
        """Position of a member along hook ``a`` (0..d)."""
        self._check_sym(a)
        if isinstance(member, Virtual):
            if member.a != a:
                raise ValueError(f"{member} does not belong to symmetry {a}")
            return 0 if member.kind == "s" else self.d
        if a == member.i:
            b = member.j
        elif a == member.j:
            b = member.i
        else:
            raise ValueError(f"{member} does not belong to symmetry {a}")
        return b if b < a else b - 1

    def owning_symmetries(self, stab: Stabilizer) -> tuple[int, int]:
        return (stab.i, stab.j)

    def distance_2d(self, a: int, m1: Location, m2: Location) -> int:
        """Matching distance along hook ``a``: absolute position difference."""
        return abs(self.hook_position(a, m1) - self.hook_position(a, m2))

    # ----- chain -----

    @cached_property
    def chain_members(self) -> tuple[Virtual, ...]:
        """All 2d virtuals in chain order: starts 1..d then ends 1..d."""
        return tuple([Virtual("s", a) for a in range(1, self.d + 1)]
                     + [Virtual("e", a) for a in range(1, self.d + 1)])

    def chain_position(self, v: Virtual) -> int:
        return (v.a - 1) if v.kind == "s" else (self.d + v.a - 1)

    def chain_distance(self, v1: Virtual, v2: Virtual) -> int:
        return abs(self.chain_position(v1) - self.chain_position(v2))

    # ----- virtual supports -----

    def virtual_support(self, v: Virtual) -> tuple[Qubit, ...]:
        """Qubits whose errors flip the defect parity read at this virtual."""
        a, d = v.a, self.d
        if v.kind == "s":
            if a == 1:
                qs = [Qubit(1, 2)]
            elif a < d:
                qs = [Qubit(1, a), Qubit(1, a + 1)]
            else:
                qs = [Qubit(1, d), Qubit(1, 1)]
        else:
            if a < d:
                qs = [Qubit(a, a), Qubit(a + 1, a + 1)]
            else:
                qs = [Qubit(d, d)]
        return tuple(sorted(qs))

    def virtual_support_vector(self, v: Virtual) -> np.ndarray:
        vec = np.zeros(self.code.n_qubits, dtype=bool)
        for q in self.virtual_support(v):
            vec[self.code.qubit_index[q]] = True
        return vec

    # ----- planar embedding (all coordinates scaled x4) -----

    def stabilizer_point(self, stab: Stabilizer) -> tuple[int, int]:
        return (4 * stab.i, 4 * stab.j)

    def virtual_point(self, v: Virtual) -> tuple[int, int]:
        if v.kind == "s":
            return (0, 4 * v.a)
        return (4 * v.a, 4 * (self.d + 1))

    def qubit_point(self, q: Qubit) -> tuple[int, int]:
        """Interior sample point of the qubit's cell.

        Every cell is nudged towards its upper-left grid point except the
        corner cell (1, d), whose region is cut off by the chain's corner
        diagonal and must be sampled below it.
        """
        cu, cv = self.code.qubit_cell(q)
        if (cu, cv) == (1, self.d):
            return (4 * cu - 1, 4 * cv + 1)
        return (4 * cu - 3, 4 * cv + 3)

    def hook_point(self, a: int, t: int) -> tuple[int, int]:
        """Embedded point of hook ``a`` at position ``t`` (0..d)."""
        self._check_sym(a)
        if not (0 <= t <= self.d):
            raise ValueError(f"hook position {t} out of range")
        if t == 0:
            return (0, 4 * a)
        if t <= a - 1:
            return (4 * t, 4 * a)
        if t <= self.d - 1:
            return (4 * a, 4 * (t + 1))
        return (4 * a, 4 * (self.d + 1))

    def chain_point(self, c: int) -> tuple[int, int]:
        """Embedded point of chain node ``c`` (0..2d-1)."""
        if not (0 <= c <= 2 * self.d - 1):
            raise ValueError(f"chain index {c} out of range")
        if c < self.d:
            return (0, 4 * (c + 1))
        return (4 * (c - self.d + 1), 4 * (self.d + 1))

    # ----- segment universe -----
    # hook segment (a, t): between hook positions t and t+1, id (a-1)*d + t
    # chain segment c: between chain nodes c and c+1, id d*d + c

    @property
    def n_hook_segments(self) -> int:
        return self.d * self.d

    @property
    def n_chain_segments(self) -> int:
        return 2 * self.d - 1

    @property
    def n_segments(self) -> int:
        return self.n_hook_segments + self.n_chain_segments

    def hook_segment_id(self, a: int, t: int) -> int:
        return (a - 1) * self.d + t

    def chain_segment_id(self, c: int) -> int:
        return self.d * self.d + c

    def segment_endpoints(self, seg_id: int) -> tuple[tuple[int, int], tuple[int, int]]:
        if seg_id < self.n_hook_segments:
            a, t = divmod(seg_id, self.d)
            a += 1
            return (self.hook_point(a, t), self.hook_point(a, t + 1))
        c = seg_id - self.n_hook_segments
        return (self.chain_point(c), self.chain_point(c + 1))

    # ----- exact interior tests -----

    @staticmethod
    def _ray_crosses(p1: tuple[int, int], p2: tuple[int, int],
                     pt: tuple[int, int]) -> bool:
        """Does the +x ray from ``pt`` cross segment ``p1 - p2``?

        Segments are axis-aligned or slope +1 diagonals with even scaled
        coordinates; query points have odd scaled coordinates, so no
        degenerate incidences can occur and integer comparisons are exact.
        """
        (x1, y1), (x2, y2) = p1, p2
        xq, yq = pt
        if y1 == y2:
            return False
        if x1 == x2:
            ylo, yhi = (y1, y2) if y1 < y2 else (y2, y1)
            return x1 > xq and ylo < yq < yhi
        (xl, yl) = p1 if y1 < y2 else p2
        (xh, yh) = p2 if y1 < y2 else p1
        if not (yl < yq < yh):
            return False
        return xl + (yq - yl) > xq

    @cached_property
    def crossing_matrix(self) -> np.ndarray:
        """Boolean (n_qubits, n_segments): +x ray from qubit crosses segment.

        The interior of any closed contour, expressed as a boolean segment
        vector ``c``, is then ``crossing_matrix @ c`` over GF(2).
        """
        n_q, n_s = self.code.n_qubits, self.n_segments
        M = np.zeros((n_q, n_s), dtype=bool)
        pts = [self.qubit_point(q) for q in self.code.qubits]
        for s in range(n_s):
            p1, p2 = self.segment_endpoints(s)
            for k, pt in enumerate(pts):
                M[k, s] = self._ray_crosses(p1, p2, pt)
        return M

    def interior(self, contour: np.ndarray) -> np.ndarray:
        """Qubits enclosed by a segment-vector contour (even/odd rule)."""
        return (self.crossing_matrix @ contour.astype(np.uint8)) % 2 == 1

    # ----- elementary cells -----

    @cached_property
    def elementary_contours(self) -> np.ndarray:
        """Boolean (n_qubits, n_segments): minimal closed contour per qubit.

        Row ``k`` bounds exactly the region containing qubit ``k``; the
        segments are found from the defining parity law: within each symmetry
        the flipped members (including virtual ends) of a single-qubit error
        always occupy one adjacent position pair {t, t+1}, contributing the
        hook segment between them, and a boundary qubit lies in the supports
        of exactly one adjacent chain pair, contributing that chain segment.
        """
        code, d = self.code, self.d
        H = code.parity_check_matrix
        out = np.zeros((code.n_qubits, self.n_segments), dtype=bool)
        vsup = {v: self.virtual_support_vector(v) for v in self.chain_members}
        for k, q in enumerate(code.qubits):
            for a in range(1, d + 1):
                positions = [self.hook_position(a, stab)
                             for stab in code.toggles(q)
                             if a in (stab.i, stab.j)]
                if vsup[Virtual("s", a)][k]:
                    positions.append(0)
                if vsup[Virtual("e", a)][k]:
                    positions.append(d)
                if positions:
                    positions.sort()
                    assert len(positions) == 2 and positions[1] == positions[0] + 1
                    out[k, self.hook_segment_id(a, positions[0])] = True
            chain = self.chain_members
            for c in range(2 * d - 1):
                if vsup[chain[c]][k] and vsup[chain[c + 1]][k]:
                    out[k, self.chain_segment_id(c)] = True
        return out

    # ----- misc -----

    def _check_sym(self, a: int) -> None:
        if not (1 <= a <= self.d):
            raise ValueError(f"symmetry index {a} out of range 1..{self.d}")
