"""
Anatomy of the triangular parity code
=====================================

A distance-``d`` parity code stores d logical bits in d(d+1)/2 physical
qubits arranged on a triangular patch of a square lattice.  This script
builds a small instance and prints the pieces everything else is made of:
qubits, plaquette stabilizers, and the d+1 logical lines.
"""

import numpy as np

from paritydec import ParityCode, SymmetryLayout, Virtual

# Build the distance-5 code: 15 qubits, 10 stabilizers, 6 logical lines.
d = 5
code = ParityCode(d)
layout = SymmetryLayout(code)

print(f"distance d={d}: {code.n_qubits} qubits, "
      f"{code.n_stabilizers} stabilizers, "
      f"{code.logical_lines.shape[0]} logical lines")

# The qubits live on a triangle: q{u}.{v} with u <= v, where the diagonal
# entries q{k}.{k} are called base qubits (printed as base{k}).
print("\nqubit layout (row u, column v):")
for u in range(1, d + 1):
    row = [q.label for q in code.qubits if q.row == u]
    print("   " * (u - 1) + "  ".join(f"{lab:>6}" for lab in row))

# Each stabilizer touches 3 or 4 qubits.  Exactly d-1 of them have weight 3;
# those sit along the diagonal edge of the triangle.
print("\nstabilizer supports:")
for stab in code.stabilizers:
    qubits = ", ".join(q.label for q in code.support(stab))
    print(f"  {stab.label}: [{qubits}]")

weights = np.array([len(code.support(s)) for s in code.stabilizers])
print(f"\nweight census: {np.sum(weights == 3)} weight-3, "
      f"{np.sum(weights == 4)} weight-4")

# The d+1 logical lines each cover d qubits, every pair of lines shares
# exactly one qubit, and every line commutes with all stabilizers.
lines = code.logical_lines.astype(np.int64)
print("\nlogical lines:")
for k in range(d + 1):
    members = ", ".join(q.label for q, v in zip(code.qubits, code.logical_lines[k]) if v)
    print(f"  line {k}: [{members}]")

overlap = lines @ lines.T
assert (overlap[np.triu_indices(d + 1, k=1)] == 1).all()
print("\nevery pair of lines overlaps in exactly one qubit: confirmed")
assert all(not code.syndrome(code.logical_lines[k]).any() for k in range(d + 1))
print("every line is invisible to every stabilizer: confirmed")

# Decoding is organised around d symmetries.  Symmetry a threads a path of
# stabilizers ("hooks") between two boundary anchors, the virtual defects
# V{a}s and V{a}e.  Members of a symmetry cover every qubit an even number
# of times, which is why defects always show up in pairs.
print("\nsymmetry membership:")
for a in range(1, d + 1):
    hooks = ", ".join(s.label for s in layout.hook_stabilizers(a))
    print(f"  symmetry {a}: V{a}s -> [{hooks}] -> V{a}e")

for a in range(1, d + 1):
    total = np.zeros(code.n_qubits, dtype=bool)
    for stab in layout.hook_stabilizers(a):
        for q in code.support(stab):
            total[code.qubit_index[q]] ^= True
    total ^= layout.virtual_support_vector(Virtual("s", a))
    total ^= layout.virtual_support_vector(Virtual("e", a))
    assert not total.any()
print("each symmetry (with its two virtual anchors) is parity-closed: confirmed")
