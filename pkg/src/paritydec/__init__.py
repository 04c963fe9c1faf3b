"""Decoder and Monte-Carlo benchmarking suite for the triangular parity code.

The package builds the code (qubits, stabilizers, logical lines), decodes
syndromes by symmetry-based matching plus single-line post-processing, and
reproduces failure-rate and threshold experiments under both perfect and
faulty measurements.
"""

from .code import (ParityCode, Qubit, Stabilizer, parse_qubit,
                   parse_stabilizer)
from .symmetry import SymmetryLayout, Virtual
from .matching_engine import (brute_force_min_weight_perfect_matching,
                              min_weight_perfect_matching)
from .graph_builders import (MatchedPath, MatchingOutcome, Role,
                             defects_from_syndrome, match_2d, match_3d,
                             weight_3d)
from .clusters import (Cluster, PostconditionError, build_clusters,
                       correction_2d, correction_3d, project_cluster)
from .postprocess import (PostProcessReport, overlap_threshold, post_process,
                          post_process_slices)
from .noise_sim import (MODEL_CODE_CAPACITY, MODEL_PHENOMENOLOGICAL,
                        NoiseConfig, TrialRecord, adjudicate, decode,
                        final_round_syndrome, lower_bound_trial, run_rounds,
                        run_trial, sample_error)
from .experiments import (CurvePoint, ExperimentPoint, NoCrossingError,
                          ThresholdEstimate, bootstrap_threshold,
                          estimate_threshold, render_csv, render_json,
                          run_curve, run_point, wilson_interval, write_points)

__version__ = "0.1.0"

__all__ = [
    "ParityCode", "Qubit", "Stabilizer", "parse_qubit", "parse_stabilizer",
    "SymmetryLayout", "Virtual",
    "min_weight_perfect_matching", "brute_force_min_weight_perfect_matching",
    "MatchedPath", "MatchingOutcome", "Role", "defects_from_syndrome",
    "match_2d", "match_3d", "weight_3d",
    "Cluster", "PostconditionError", "build_clusters", "correction_2d",
    "correction_3d", "project_cluster",
    "PostProcessReport", "overlap_threshold", "post_process",
    "post_process_slices",
    "MODEL_CODE_CAPACITY", "MODEL_PHENOMENOLOGICAL", "NoiseConfig",
    "TrialRecord", "adjudicate", "decode", "final_round_syndrome",
    "lower_bound_trial", "run_rounds", "run_trial", "sample_error",
    "CurvePoint", "ExperimentPoint", "NoCrossingError", "ThresholdEstimate",
    "bootstrap_threshold", "estimate_threshold", "render_csv", "render_json",
    "run_curve", "run_point", "wilson_interval", "write_points",
    "__version__",
]
