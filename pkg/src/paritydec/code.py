"""Triangular parity code: qubit layout, stabilizers, logical lines.

A distance-``d`` code has ``n = d(d+1)/2`` physical qubits ``q_{u,v}``
(``1 <= u <= v <= d``), where the diagonal qubits ``q_{k,k}`` are the base
qubits hosting the ``d`` logical qubits.  The ``d(d-1)/2`` stabilizers
``S_{i,j}`` (``i < j``) are the parity constraints; every off-diagonal qubit
carries the parity of logical pair ``(u, v)``.

Geometry convention: stabilizer ``S_{i,j}`` sits at grid point ``(i, j)``
and its support is read off the (up to) four unit cells at that point,
clipped to the upper-triangle domain.  Cell ``(u, v)`` holds ``q_{u,v+1}``
for ``v < d`` and ``base_u`` for ``v = d``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True, order=True)
class Qubit:
    """Physical qubit ``q_{row,col}``; ``row == col`` marks a base qubit."""

    row: int
    col: int

    def __post_init__(self) -> None:
        if not (1 <= self.row <= self.col):
            raise ValueError(f"invalid qubit indices {(self.row, self.col)}")

    @property
    def is_base(self) -> bool:
        return self.row == self.col

    @property
    def label(self) -> str:
        if self.is_base:
            return f"base{self.row}"
        return f"q{self.row}.{self.col}"

    def __repr__(self) -> str:
        return self.label


@dataclass(frozen=True, order=True)
class Stabilizer:
    """Parity constraint ``S_{i,j}`` with ``1 <= i < j``."""

    i: int
    j: int

    def __post_init__(self) -> None:
        if not (1 <= self.i < self.j):
            raise ValueError(f"invalid stabilizer indices {(self.i, self.j)}")

    @property
    def label(self) -> str:
        return f"S{self.i}.{self.j}"

    def __repr__(self) -> str:
        return self.label


_QUBIT_RE = re.compile(r"^(?:q(\d+)\.(\d+)|base(\d+))$")
_STAB_RE = re.compile(r"^[sS](\d+)\.(\d+)$")


def parse_qubit(text: str) -> Qubit:
    """Parse ``"qU.V"`` or ``"baseK"`` into a :class:`Qubit`."""
    m = _QUBIT_RE.match(text.strip())
    if not m:
        raise ValueError(f"cannot parse qubit label {text!r}")
    if m.group(3) is not None:
        k = int(m.group(3))
        return Qubit(k, k)
    return Qubit(int(m.group(1)), int(m.group(2)))


def parse_stabilizer(text: str) -> Stabilizer:
    """Parse ``"SI.J"`` into a :class:`Stabilizer`."""
    m = _STAB_RE.match(text.strip())
    if not m:
        raise ValueError(f"cannot parse stabilizer label {text!r}")
    return Stabilizer(int(m.group(1)), int(m.group(2)))


class ParityCode:
    """All static structure of the distance-``d`` parity code."""

    def __init__(self, d: int):
        if d < 2:
            raise ValueError("distance must be at least 2")
        self.d = d
        self.qubits: tuple[Qubit, ...] = tuple(
            Qubit(u, v) for u in range(1, d + 1) for v in range(u, d + 1))
        self.stabilizers: tuple[Stabilizer, ...] = tuple(
            Stabilizer(i, j) for i in range(1, d + 1) for j in range(i + 1, d + 1))
        self.qubit_index = {q: k for k, q in enumerate(self.qubits)}
        self.stabilizer_index = {s: k for k, s in enumerate(self.stabilizers)}

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    @property
    def n_stabilizers(self) -> int:
        return len(self.stabilizers)

    @property
    def n_logical(self) -> int:
        return self.d

    # ----- structure -----

    def cell_qubit(self, u: int, v: int) -> Qubit:
        """Qubit assigned to unit cell ``(u, v)`` of the grid."""
        if not (1 <= u <= v <= self.d):
            raise ValueError(f"cell {(u, v)} outside domain")
        if v < self.d:
            return Qubit(u, v + 1)
        return Qubit(u, u)

    def qubit_cell(self, q: Qubit) -> tuple[int, int]:
        """Inverse of :meth:`cell_qubit`."""
        if q.is_base:
            return (q.row, self.d)
        return (q.row, q.col - 1)

    def support(self, stab: Stabilizer) -> tuple[Qubit, ...]:
        """Qubits checked by ``stab`` (weight 3 on the two boundary families)."""
        out = set()
        for u in (stab.i, stab.i + 1):
            for v in (stab.j - 1, stab.j):
                if u <= v:
                    out.add(self.cell_qubit(u, v))
        return tuple(sorted(out))

    @cached_property
    def parity_check_matrix(self) -> np.ndarray:
        """Boolean matrix ``H`` of shape (n_stabilizers, n_qubits)."""
        H = np.zeros((self.n_stabilizers, self.n_qubits), dtype=bool)
        for s, stab in enumerate(self.stabilizers):
            for q in self.support(stab):
                H[s, self.qubit_index[q]] = True
        return H

    def toggles(self, q: Qubit) -> tuple[Stabilizer, ...]:
        """Stabilizers flipped by an error on ``q``."""
        col = self.parity_check_matrix[:, self.qubit_index[q]]
        return tuple(self.stabilizers[s] for s in np.flatnonzero(col))

    # ----- logical lines -----

    @cached_property
    def logical_lines(self) -> np.ndarray:
        """Boolean matrix of shape (d+1, n_qubits); row 0 is the base line."""
        L = np.zeros((self.d + 1, self.n_qubits), dtype=bool)
        for k in range(1, self.d + 1):
            L[0, self.qubit_index[Qubit(k, k)]] = True
        for m in range(1, self.d + 1):
            for j in range(1, self.d + 1):
                L[m, self.qubit_index[Qubit(min(m, j), max(m, j))]] = True
        return L

    def line(self, m: int) -> np.ndarray:
        """Qubit vector of line ``m`` (0 = base line, 1..d = logical lines)."""
        if not (0 <= m <= self.d):
            raise ValueError(f"line index {m} out of range 0..{self.d}")
        return self.logical_lines[m].copy()

    def line_qubits(self, m: int) -> tuple[Qubit, ...]:
        return tuple(self.qubits[k] for k in np.flatnonzero(self.logical_lines[m]))

    @staticmethod
    def logical_weight(d: int, k: int) -> int:
        """Weight of the symmetric difference of any ``k`` of the d+1 lines."""
        return k * (d + 1 - k)

    @staticmethod
    def logical_class_count(d: int, k: int) -> int:
        """Number of ways to pick ``k`` of the d+1 lines."""
        return math.comb(d + 1, k)

    # ----- vectors -----

    def vector_from_qubits(self, qubits) -> np.ndarray:
        """Boolean error vector with 1s at the given qubits."""
        v = np.zeros(self.n_qubits, dtype=bool)
        for q in qubits:
            v[self.qubit_index[q]] ^= True
        return v

    def qubits_from_vector(self, vec: np.ndarray) -> tuple[Qubit, ...]:
        return tuple(self.qubits[k] for k in np.flatnonzero(vec))

    def stabilizers_from_vector(self, vec: np.ndarray) -> tuple[Stabilizer, ...]:
        return tuple(self.stabilizers[k] for k in np.flatnonzero(vec))

    def syndrome(self, error: np.ndarray) -> np.ndarray:
        """Boolean syndrome vector ``H @ error`` over GF(2)."""
        return (self.parity_check_matrix @ error.astype(np.uint8)) % 2 == 1

    @cached_property
    def _base_indices(self) -> np.ndarray:
        return np.array(
            [self.qubit_index[Qubit(k, k)] for k in range(1, self.d + 1)])

    def decompose_logical(self, vec: np.ndarray) -> np.ndarray:
        """Coefficients over lines 1..d of a zero-syndrome vector.

        Line ``m`` is the only one of lines 1..d containing ``base_m``, so the
        coefficient vector is just the restriction to the base qubits; the
        reconstruction is then checked, and a vector outside the span of the
        lines is rejected.
        """
        vec = vec.astype(bool)
        coeffs = vec[self._base_indices]
        recon = (coeffs @ self.logical_lines[1:].astype(np.uint8)) % 2 == 1
        if not np.array_equal(recon, vec):
            raise ValueError("vector is not a combination of logical lines")
        return coeffs
