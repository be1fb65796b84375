"""Radial system on the constant-curvature spatial sphere and the obstruction to the
fermion-type substitution.

With ``a = sqrt(J(J+1))`` and ``Delta = lambda = +1`` the four functions obey::

    K' = -(a/sin x) M - (e+m) L
    L' = +(a/sin x) N + (e-m) K
    M' = -cot(x) M - (a/sin x) K - (e+m) N
    N' = +cot(x) N + (a/sin x) L + (e-m) M

Inserting ``K = f/sqrt(J+1), M = f/sqrt(J)`` (and the same for L, N with g),
the K-equation gives ``f'`` the coefficient ``(J+1)/sin x`` and the M-equation
``cot x + J/sin x``.  Their difference ``(1 - cos x)/sin x = tan(x/2)`` is the
gap; on flat space, where ``sin x -> r`` and ``cot x -> 1/r``, it is zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .radial import RadialParams, closed_form_regular, rk4_path

__all__ = [
    "CurvedRadialParams",
    "ScanRow",
    "curved_rhs",
    "dynamical_witness",
    "analytic_gap",
    "flat_obstruction_gap",
    "flat_rhs",
    "obstruction_gap",
    "obstruction_gap_pair",
    "scan",
]

_POLE_EPS = 1e-12


@dataclass(frozen=True)
class CurvedRadialParams:
    epsilon: float
    mass: float
    J: int

    def __post_init__(self):
        if self.J < 1:
            raise DomainError(f"need J >= 1, got J={self.J}")


def _check_chi(chi: float) -> None:
    if not 0 < chi < math.pi or math.sin(chi) < _POLE_EPS:
        raise DomainError(f"chi must lie strictly inside (0, pi), got {chi}")


def curved_rhs(params: CurvedRadialParams, chi: float, y: Sequence[float]) -> np.ndarray:
    """Derivatives ``(K', L', M', N')`` on the sphere."""
    _check_chi(chi)
    return _rhs(params, 1.0 / math.sin(chi), 1.0 / math.tan(chi), y)


def flat_rhs(params: CurvedRadialParams, r: float, y: Sequence[float]) -> np.ndarray:
    """The same system with ``sin x -> r`` and ``cot x -> 1/r``."""
    if r <= 0:
        raise DomainError(f"radius must be positive, got r={r}")
    return _rhs(params, 1.0 / r, 1.0 / r, y)


def _rhs(params: CurvedRadialParams, inv_sin: float, cot: float, y) -> np.ndarray:
    K, L, M, N = y
    a = math.sqrt(params.J * (params.J + 1)) * inv_sin
    ep, em = params.epsilon + params.mass, params.epsilon - params.mass
    return np.array([
        -a * M - ep * L,
        a * N + em * K,
        -cot * M - a * K - ep * N,
        cot * N + a * L + em * M,
    ])


def _substitution(J: int, f: float, g: float) -> np.ndarray:
    cK, cM = 1 / math.sqrt(J + 1), 1 / math.sqrt(J)
    return np.array([cK * f, cK * g, cM * f, cM * g])


def _gap_from(rhs, J: int, f: float, g: float) -> tuple[float, float]:
    """Disagreement between the two implied ``f'`` (and ``g'``), per unit of f (g)."""
    dK, dL, dM, dN = rhs(_substitution(J, f, g))
    sK, sM = math.sqrt(J + 1), math.sqrt(J)
    return (sM * dM - sK * dK) / f, (sK * dL - sM * dN) / g


def obstruction_gap(J: int, chi: float, epsilon: float = 1.25, mass: float = 0.75,
                    sample: tuple[float, float] = (0.8, -0.35)) -> float:
    """Coefficient gap measured by substituting the ansatz into the curved system.

    Evaluated on an arbitrary nonzero ``(f, g)`` sample; the value does not
    depend on the sample, on J, or on the energy and mass.
    """
    params = CurvedRadialParams(epsilon, mass, J)
    gap_f, _ = _gap_from(lambda y: curved_rhs(params, chi, y), J, *sample)
    return float(gap_f)


def obstruction_gap_pair(J: int, chi: float, epsilon: float = 1.25, mass: float = 0.75,
                         sample: tuple[float, float] = (0.8, -0.35)) -> tuple[float, float]:
    """Gap read from the (K, M) pair and from the (L, N) pair."""
    params = CurvedRadialParams(epsilon, mass, J)
    gap_f, gap_g = _gap_from(lambda y: curved_rhs(params, chi, y), J, *sample)
    return float(gap_f), float(gap_g)


def flat_obstruction_gap(J: int, r: float, epsilon: float = 1.25, mass: float = 0.75,
                         sample: tuple[float, float] = (0.8, -0.35)) -> float:
    params = CurvedRadialParams(epsilon, mass, J)
    gap_f, _ = _gap_from(lambda y: flat_rhs(params, r, y), J, *sample)
    return float(gap_f)


def analytic_gap(chi: float) -> float:
    _check_chi(chi)
    return (1 - math.cos(chi)) / math.sin(chi)


def dynamical_witness(params: CurvedRadialParams, chis: Sequence[float], step: float = 1e-3,
                      fd_step: float = 1e-3) -> np.ndarray:
    """Residual of the (M, N) equations along a trajectory of the (K, L) pair.

    The pair ``(f, g)`` is integrated with the K- and L-equations under the
    ansatz, starting from the flat regular solution near the origin.  At each
    requested ``chi`` the M- and N-equations are evaluated with five-point
    derivatives of the trajectory; the returned value is their residual norm
    divided by the norm of ``(M, N)``.
    """
    chis = np.asarray(chis, dtype=float)
    if chis.size == 0:
        return chis
    for c in chis:
        _check_chi(float(c))
    if np.any(np.diff(chis) <= 0):
        raise DomainError("chi values must be strictly increasing")
    J = params.J
    k = J + 1
    ep, em = params.epsilon + params.mass, params.epsilon - params.mass

    def pair_rhs(x, y):
        s = math.sin(x)
        return np.array([-k * y[0] / s - ep * y[1], k * y[1] / s + em * y[0]])

    chi0 = min(0.05, float(chis[0]) / 2)
    flat = closed_form_regular(RadialParams(params.epsilon, params.mass, k))
    y = np.array(flat(chi0))
    x = chi0
    sJ = math.sqrt(J)
    a = math.sqrt(J * (J + 1))
    out = []
    for target in chis:
        n = max(1, math.ceil((target - x) / step))
        _, ys = rk4_path(pair_rhs, x, y, float(target), n)
        x, y = float(target), ys[-1]
        h = min(fd_step, x / 4, (math.pi - x) / 4)
        pts = {}
        for j in (-2, -1, 1, 2):
            _, yy = rk4_path(pair_rhs, x, y, x + j * h, 4)
            pts[j] = yy[-1]
        dy = (pts[-2] - 8 * pts[-1] + 8 * pts[1] - pts[2]) / (12 * h)
        f, g = y
        s, cot = math.sin(x), 1 / math.tan(x)
        M, N = f / sJ, g / sJ
        dM, dN = dy[0] / sJ, dy[1] / sJ
        K, L = f / math.sqrt(J + 1), g / math.sqrt(J + 1)
        res_M = dM + cot * M + a / s * K + ep * N
        res_N = dN - cot * N - a / s * L - em * M
        out.append(math.hypot(res_M, res_N) / math.hypot(M, N))
    return np.array(out)


@dataclass(frozen=True)
class ScanRow:
    chi: float
    gap: float
    gap_analytic: float
    tan_half_chi: float
    dynamical_residual: float


def scan(params: CurvedRadialParams, chis: Sequence[float]) -> list[ScanRow]:
    """Gap, closed form, ``tan(chi/2)`` and dynamical witness on a sorted grid."""
    chis = sorted(float(c) for c in chis)
    witness = dynamical_witness(params, chis)
    return [ScanRow(c, obstruction_gap(params.J, c, params.epsilon, params.mass),
                    analytic_gap(c), math.tan(c / 2), float(w))
            for c, w in zip(chis, witness)]
