"""Noise sampling, detector formation, end-to-end decoding, adjudication.

Two noise models:

* ``code-capacity``: a single iid data-flip pattern, measured perfectly.
* ``phenomenological``: ``rounds`` measurement rounds; before every round
  each qubit flips with probability ``p`` (errors accumulate), and each
  stabilizer outcome flips with probability ``q`` except in the final round,
  which is noiseless.  Detectors mark outcome changes between consecutive
  rounds (round 0 compares against the trivial all-clear reference).

``decode`` runs the full two-step pipeline (matching → clusters → interior
→ optional line minimization) and ``adjudicate`` classifies the residual.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clusters import PostconditionError, correction_2d, correction_3d
from .code import ParityCode
from .graph_builders import (STRATEGIES_2D, STRATEGIES_3D, match_2d, match_3d)
from .postprocess import post_process
from .symmetry import SymmetryLayout

MODEL_CODE_CAPACITY = "code-capacity"
MODEL_PHENOMENOLOGICAL = "phenomenological"
MODELS = (MODEL_CODE_CAPACITY, MODEL_PHENOMENOLOGICAL)


@dataclass(frozen=True)
class NoiseConfig:
    """Noise model parameters.

    ``rounds=None`` means the model default (= code distance) for the
    phenomenological model.  ``p=0`` is permitted so that deterministic
    fault-injection runs can reuse the same plumbing; Monte-Carlo entry
    points require ``p > 0``.
    """

    model: str
    p: float
    q: float = 0.0
    rounds: int | None = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown noise model {self.model!r}")
        if not (0.0 <= self.p <= 0.5):
            raise ValueError(f"p={self.p} outside [0, 0.5]")
        if self.model == MODEL_CODE_CAPACITY:
            if self.q:
                raise ValueError("code-capacity model has no measurement noise")
        else:
            if not (0.0 <= self.q < 0.5):
                raise ValueError(f"q={self.q} outside [0, 0.5)")
            if self.rounds is not None and self.rounds < 1:
                raise ValueError("rounds must be >= 1")

    def effective_rounds(self, d: int) -> int:
        if self.model == MODEL_CODE_CAPACITY:
            return 1
        return d if self.rounds is None else self.rounds


@dataclass
class TrialRecord:
    failed: bool
    logical_flips: np.ndarray  # d bits over the line basis
    pp_cycles: int = 0
    defect_count: int = 0


def sample_error(code: ParityCode, p: float,
                 rng: np.random.Generator) -> np.ndarray:
    """iid qubit flip pattern with per-qubit probability p."""
    return rng.random(code.n_qubits) < p


def run_rounds(code: ParityCode, cfg: NoiseConfig, rng: np.random.Generator,
               *, inject_data: dict[int, np.ndarray] | None = None,
               inject_meas: dict[int, np.ndarray] | None = None
               ) -> tuple[np.ndarray, np.ndarray]:
    """Simulate repeated noisy measurement; returns (detectors, final error).

    ``detectors`` has shape (rounds, n_stabilizers).  ``inject_data[t]`` /
    ``inject_meas[t]`` XOR deterministic faults into round t (data flips are
    applied before that round's measurement).
    """
    if cfg.model != MODEL_PHENOMENOLOGICAL:
        raise ValueError("run_rounds requires the phenomenological model")
    rounds = cfg.effective_rounds(code.d)
    error = np.zeros(code.n_qubits, dtype=bool)
    prev = np.zeros(code.n_stabilizers, dtype=bool)
    detectors = np.zeros((rounds, code.n_stabilizers), dtype=bool)
    for t in range(rounds):
        if cfg.p:
            error ^= rng.random(code.n_qubits) < cfg.p
        if inject_data and t in inject_data:
            error = error ^ inject_data[t]
        outcome = code.syndrome(error)
        if cfg.q and t < rounds - 1:
            outcome ^= rng.random(code.n_stabilizers) < cfg.q
        if inject_meas and t in inject_meas:
            outcome = outcome ^ inject_meas[t]
        detectors[t] = outcome ^ prev
        prev = outcome
    return detectors, error


def final_round_syndrome(detectors: np.ndarray) -> np.ndarray:
    """Accumulated final-round syndrome: the per-stabilizer detector XOR."""
    return np.logical_xor.reduce(detectors, axis=0)


def decode(code: ParityCode, layout: SymmetryLayout, cfg: NoiseConfig,
           strategy: str, post_process_flag: bool,
           observation: np.ndarray, *,
           rng: np.random.Generator | None = None,
           engine: str = "fast") -> tuple[np.ndarray, int]:
    """Two-step decode; returns (correction, post-processing cycles).

    ``observation`` is the syndrome vector (code capacity) or the detector
    array (phenomenological).  A one-round noiseless-measurement run reduces
    exactly to the code-capacity pipeline.
    """
    if cfg.model == MODEL_CODE_CAPACITY:
        if strategy not in STRATEGIES_2D:
            raise ValueError(f"unknown strategy {strategy!r}")
        return _decode_2d(code, layout, observation, strategy,
                          post_process_flag, rng, engine)

    if strategy not in STRATEGIES_3D:
        raise ValueError(
            f"strategy {strategy!r} is not defined for the "
            f"phenomenological model")
    rounds = cfg.effective_rounds(code.d)
    if observation.shape != (rounds, code.n_stabilizers):
        raise ValueError("detector array shape does not match rounds")
    if rounds == 1:
        # the single round is noiseless, so this is the code-capacity problem
        return _decode_2d(code, layout, observation[0], strategy,
                          post_process_flag, rng, engine)
    outcome = match_3d(code, layout, observation, cfg.p, cfg.q, strategy,
                       engine=engine)
    _slices, cumulative, pp_cycles = correction_3d(
        code, layout, outcome, rounds, final_round_syndrome(observation),
        post_process=post_process_flag)
    return cumulative, pp_cycles


def _decode_2d(code, layout, syndrome, strategy, post_process_flag, rng,
               engine) -> tuple[np.ndarray, int]:
    outcome = match_2d(code, layout, syndrome, strategy, engine=engine,
                       rng=rng)
    correction = correction_2d(code, layout, outcome, syndrome)
    if not post_process_flag:
        return correction, 0
    report = post_process(code, correction)
    return report.result, report.cycles


def adjudicate(code: ParityCode, true_error: np.ndarray,
               correction: np.ndarray, *, pp_cycles: int = 0,
               defect_count: int = 0) -> TrialRecord:
    """Classify the residual error as logical line flips.

    The residual must be syndrome-free (otherwise the decoder broke its
    contract) and always decomposes over the line basis.
    """
    residual = true_error ^ correction
    if code.syndrome(residual).any():
        raise PostconditionError("residual error has a nonzero syndrome")
    flips = code.decompose_logical(residual)
    failed = bool(residual.any())
    assert failed == bool(flips.any())
    return TrialRecord(failed, flips, pp_cycles, defect_count)


def lower_bound_trial(code: ParityCode, true_error: np.ndarray) -> bool:
    """Failure at the optimal-decoder lower bound: some line is half covered."""
    overlaps = code.logical_lines.astype(np.int64) @ true_error.astype(np.int64)
    return bool(overlaps.max() >= (code.d + 2) // 2)


def run_trial(code: ParityCode, layout: SymmetryLayout, cfg: NoiseConfig,
              strategy: str, post_process_flag: bool,
              rng: np.random.Generator, *, engine: str = "fast"
              ) -> TrialRecord:
    """Sample noise, decode, adjudicate — one Monte-Carlo trial."""
    if cfg.model == MODEL_CODE_CAPACITY:
        error = sample_error(code, cfg.p, rng)
        syndrome = code.syndrome(error)
        correction, pp_cycles = decode(code, layout, cfg, strategy,
                                       post_process_flag, syndrome,
                                       rng=rng, engine=engine)
        defects = int(syndrome.sum())
    else:
        detectors, error = run_rounds(code, cfg, rng)
        correction, pp_cycles = decode(code, layout, cfg, strategy,
                                       post_process_flag, detectors,
                                       rng=rng, engine=engine)
        defects = int(detectors.sum())
    return adjudicate(code, error, correction, pp_cycles=pp_cycles,
                      defect_count=defects)
