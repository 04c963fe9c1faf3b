import numpy as np
import pytest

from paritydec import ParityCode, SymmetryLayout


@pytest.fixture(scope="session")
def code5():
    return ParityCode(5)


@pytest.fixture(scope="session")
def layout5(code5):
    return SymmetryLayout(code5)


@pytest.fixture(scope="session")
def small_codes():
    """Codes plus layouts for the exhaustive structural range."""
    out = {}
    for d in range(2, 9):
        code = ParityCode(d)
        out[d] = (code, SymmetryLayout(code))
    return out


def random_syndrome(code, rng, p=0.25):
    error = rng.random(code.n_qubits) < p
    return error, code.syndrome(error)


def qubit_vec(code, labels):
    from paritydec import parse_qubit
    vec = np.zeros(code.n_qubits, dtype=bool)
    for label in labels:
        vec[code.qubit_index[parse_qubit(label)]] = True
    return vec


def stab_labels(code, vec):
    return {s.label for s in code.stabilizers_from_vector(vec)}


def qubit_labels(code, vec):
    return {q.label for q in code.qubits_from_vector(vec)}
