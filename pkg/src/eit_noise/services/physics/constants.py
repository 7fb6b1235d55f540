from __future__ import annotations

import numpy as np

# State-vector index convention.
S1M, S1P, S2M, S2P, S12, S12P, W1, W2, A1, A1D, A2, A2D = range(12)
N_VARS = 12
ATOMIC = slice(0, 8)
FIELDS = slice(8, 12)

STATE_LABELS = ("s1m", "s1p", "s2m", "s2p", "s12", "s12p", "w1", "w2", "a1", "a1d", "a2", "a2d")

# Each variable's conjugate partner; the inversions are self-conjugate.
CONJUGATE_INDEX = (S1P, S1M, S2P, S2M, S12P, S12, W1, W2, A1D, A1, A2D, A2)

# Levels: |0> excited, |1> pump ground state, |2> probe ground state.
EXCITED, GROUND1, GROUND2 = 0, 1, 2


def sigma(i: int, j: int) -> np.ndarray:
    """Single-atom transition operator |i><j|."""
    op = np.zeros((3, 3), dtype=complex)
    op[i, j] = 1.0
    return op


# Single-atom operators whose collective sums are the eight atomic variables.
ATOMIC_OPERATORS: tuple[np.ndarray, ...] = (
    sigma(1, 0),
    sigma(0, 1),
    sigma(2, 0),
    sigma(0, 2),
    sigma(2, 1),
    sigma(1, 2),
    sigma(0, 0) - sigma(1, 1),
    sigma(0, 0) - sigma(2, 2),
)

IDENTITY3 = np.eye(3, dtype=complex)


def conjugation_permutation() -> np.ndarray:
    """Permutation matrix P swapping every variable with its conjugate partner."""
    perm = np.zeros((N_VARS, N_VARS))
    for index, partner in enumerate(CONJUGATE_INDEX):
        perm[index, partner] = 1.0
    return perm


P_CONJ = conjugation_permutation()
