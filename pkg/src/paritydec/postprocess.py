"""Second decoder step: iterative single-line weight minimization.

A correction that covers at least ⌈(d+1)/2⌉ qubits of some logical line is
replaced by its symmetric difference with that line (which flips the
corresponding logical class and strictly lowers the correction weight).
The loop repeats until every line overlap is below the threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .code import ParityCode


@dataclass
class PostProcessReport:
    result: np.ndarray  # bool over qubits
    cycles: int


def overlap_threshold(d: int) -> int:
    """Minimum line overlap that triggers a line flip: ⌈(d+1)/2⌉."""
    return (d + 2) // 2


def post_process(code: ParityCode, correction: np.ndarray) -> PostProcessReport:
    """Minimize line content of ``correction`` (syndrome-preserving).

    Each cycle XORs in the line of maximum overlap (ties: smallest line
    index, with the base line indexed 0).  Every flip strictly decreases the
    correction weight, so the loop terminates in at most |correction| cycles.
    """
    lines = code.logical_lines.astype(np.int64)
    c = correction.copy()
    threshold = overlap_threshold(code.d)
    cycles = 0
    while True:
        overlaps = lines @ c.astype(np.int64)
        m = int(np.argmax(overlaps))
        if overlaps[m] < threshold:
            break
        c ^= code.logical_lines[m]
        cycles += 1
    return PostProcessReport(c, cycles)


def post_process_slices(code: ParityCode,
                        slices: np.ndarray) -> tuple[np.ndarray, int]:
    """Apply line minimization to each round's qubit set independently."""
    out = slices.copy()
    total = 0
    for t in range(slices.shape[0]):
        if out[t].any():
            report = post_process(code, out[t])
            out[t] = report.result
            total += report.cycles
    return out, total
