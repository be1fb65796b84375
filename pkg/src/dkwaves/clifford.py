"""Dirac matrices, Lorentz generators and their two-sided action on bispinor matrices.

A Dirac-Kaehler field value is a 4x4 complex matrix ``U`` whose row index
transforms as one bispinor and whose column index as another.  A generator
acting on the pair is ``A (x) I + I (x) A``; with row-major vectorisation,
``(A (x) B) vec(U) = vec(A U B^T)``, so the first factor multiplies from the
left and the second one from the right through its transpose.

The representation is the spinor (Weyl) one::

    gamma^0 = [[0, I], [I, 0]],   gamma^k = [[0, -s_k], [s_k, 0]]

in which ``sigma^{12}`` is diagonal.  It is frozen: all sign conventions
downstream (D-function patterns, parity matrix, gauge rotation) are certified
against it by the test-suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "ETA",
    "PARITY_MATRIX",
    "GammaBasis",
    "bilateral_generator",
    "build_gamma_basis",
    "first_index_action",
    "gamma",
    "kron_action",
    "norm",
    "parity_matrix_action",
    "second_index_action",
    "sigma",
]

ETA = np.diag([1.0, -1.0, -1.0, -1.0])

# Anti-diagonal matrix with -1 entries; acts on both bispinor indices under reflection.
PARITY_MATRIX = -np.fliplr(np.eye(4, dtype=complex))

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True)
class GammaBasis:
    """The four Dirac matrices and the generators ``sigma[a][b] = [g^a, g^b] / 4``."""

    gamma: tuple[np.ndarray, ...]
    sigma: np.ndarray  # shape (4, 4, 4, 4): sigma[a, b] is a 4x4 matrix

    def anticommutator(self, a: int, b: int) -> np.ndarray:
        ga, gb = self.gamma[a], self.gamma[b]
        return ga @ gb + gb @ ga


@lru_cache(maxsize=1)
def build_gamma_basis() -> GammaBasis:
    zero = np.zeros((2, 2), dtype=complex)
    one = np.eye(2, dtype=complex)
    gammas = [np.block([[zero, one], [one, zero]])]
    gammas += [np.block([[zero, -s], [s, zero]]) for s in _PAULI]
    sig = np.zeros((4, 4, 4, 4), dtype=complex)
    for a in range(4):
        for b in range(4):
            sig[a, b] = 0.25 * (gammas[a] @ gammas[b] - gammas[b] @ gammas[a])
    for g in gammas:
        g.setflags(write=False)
    sig.setflags(write=False)
    return GammaBasis(gamma=tuple(gammas), sigma=sig)


def gamma(a: int) -> np.ndarray:
    return build_gamma_basis().gamma[a]


def sigma(a: int, b: int) -> np.ndarray:
    return build_gamma_basis().sigma[a, b]


def norm(A: np.ndarray) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(A))


def first_index_action(A: np.ndarray, U: np.ndarray) -> np.ndarray:
    """``(A (x) I) U``: the row (first bispinor) index is transformed."""
    return A @ U


def second_index_action(A: np.ndarray, U: np.ndarray) -> np.ndarray:
    """``(I (x) A) U``: the column (second bispinor) index is transformed."""
    return U @ A.T


def kron_action(A: np.ndarray, B: np.ndarray, U: np.ndarray) -> np.ndarray:
    """``(A (x) B) U = A U B^T``."""
    return A @ U @ B.T


def bilateral_generator(a: int, b: int, U: np.ndarray) -> np.ndarray:
    """Apply ``J^{ab} = sigma^{ab} (x) I + I (x) sigma^{ab}`` to a bispinor matrix.

    Raises
    ------
    ValueError
        If ``a == b`` (the generator vanishes identically and is never meant).
    """
    if a == b:
        raise ValueError(f"bilateral generator needs distinct axes, got a=b={a}")
    s = sigma(a, b)
    return s @ U + U @ s.T


def parity_matrix_action(U: np.ndarray) -> np.ndarray:
    """Matrix part of the reflection operator, ``Pi U Pi^T``.

    The coordinate part (theta -> pi - theta, phi -> phi + pi) is applied by
    the caller; see :func:`dkwaves.fields.parity_check`.
    """
    return PARITY_MATRIX @ U @ PARITY_MATRIX.T
