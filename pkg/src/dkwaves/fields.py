"""Boson (Dirac-Kaehler) and Dirac spherical waves, their operator residuals and parity.

A boson wave with ``J >= 1`` has the form::

    U = exp(-i eps t) / (r sqrt 2) * rowmult[i] * T[i, k] * D^J_{-M, s_ik}(phi, theta, 0)

with row multipliers ``(f+ig, f-ig, Delta (f-ig), Delta (f+ig))``, the angular
pattern ``s_ik`` of :data:`ANGULAR_PATTERN`, and a real coefficient table
``T`` fixed by the family (see :func:`coefficient_table`).  For ``J = 0`` the
same layout holds with ``D = 1`` and the radial pair ``(M, N)`` of the
``kappa = 1`` system.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import clifford
from .errors import DomainError, InvalidSpecError
from .radial import RadialParams, closed_form_regular, kappa_for
from .wigner import doubled, wigner_D

__all__ = [
    "ANGULAR_PATTERN",
    "BosonModeSpec",
    "DiracModeSpec",
    "SpacetimePoint",
    "coefficient_table",
    "dirac_radial",
    "dk_operator",
    "dk_residual",
    "eval_Psi",
    "eval_U",
    "expected_parity",
    "parity_check",
    "sigma_action_check",
    "sigma_operator",
]

# second index s of D^J_{-M, s} at each matrix position
ANGULAR_PATTERN = np.array([[-1, 0, -1, 0], [0, 1, 0, 1], [-1, 0, -1, 0], [0, 1, 0, 1]])

FieldFunc = Callable[[float, float, float, float], np.ndarray]
RadialFunc = Callable[[float], tuple]


@dataclass(frozen=True)
class SpacetimePoint:
    t: float
    r: float
    theta: float
    phi: float

    def __post_init__(self):
        if not self.r > 0:
            raise DomainError(f"radius must be positive, got r={self.r}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.t, self.r, self.theta, self.phi)

    def shifted(self, axis: int, h: float) -> "SpacetimePoint":
        x = list(self.as_tuple())
        x[axis] += h
        return SpacetimePoint(*x)


def _check_sign(name: str, v: int) -> None:
    if v not in (1, -1):
        raise InvalidSpecError(f"{name} must be +1 or -1, got {v!r}")


@dataclass(frozen=True)
class BosonModeSpec:
    epsilon: float
    J: int
    M: int
    delta_sign: int = 1
    lambda_sign: int = 1
    kind: str = "I"
    mass: float = 0.75

    def __post_init__(self):
        _check_sign("delta_sign", self.delta_sign)
        _check_sign("lambda_sign", self.lambda_sign)
        if self.kind not in ("I", "II", "J0"):
            raise InvalidSpecError(f"kind must be I, II or J0, got {self.kind!r}")
        if self.J < 0 or int(self.J) != self.J:
            raise InvalidSpecError(f"J must be a non-negative integer, got {self.J}")
        if (self.kind == "J0") != (self.J == 0):
            raise InvalidSpecError(f"kind {self.kind} is incompatible with J={self.J}; "
                                   "J = 0 requires kind J0 and kinds I/II require J >= 1")
        if abs(self.M) > self.J or int(self.M) != self.M:
            raise InvalidSpecError(f"M must be an integer with |M| <= J, got M={self.M}, J={self.J}")

    @property
    def radial_params(self) -> RadialParams:
        return RadialParams(self.epsilon, self.mass, kappa_for(self.kind, self.J),
                            self.lambda_sign, self.delta_sign)


@dataclass(frozen=True)
class DiracModeSpec:
    epsilon: float
    j: Fraction | float
    m: Fraction | float
    delta: int = 1
    channel: int = 1
    mass: float = 0.75

    def __post_init__(self):
        _check_sign("delta", self.delta)
        j2, m2 = doubled(self.j), doubled(self.m)
        if j2 < 1 or j2 % 2 != 1:
            raise InvalidSpecError(f"j must be a positive half-odd integer, got {self.j}")
        if abs(m2) > j2 or m2 % 2 != 1:
            raise InvalidSpecError(f"m must be half-odd with |m| <= j, got m={self.m}")
        if self.channel not in (1, 2, 3, 4):
            raise InvalidSpecError(f"channel must be 1..4, got {self.channel}")

    @property
    def radial_params(self) -> RadialParams:
        return RadialParams(self.epsilon, self.mass, (doubled(self.j) + 1) // 2, 1, self.delta)


def coefficient_table(kind: str, J: int, lambda_sign: int) -> np.ndarray:
    """Real coefficients multiplying row functions and D-functions."""
    lam = lambda_sign
    if kind == "J0":
        return np.array([[0, lam, 0, 1], [lam, 0, 1, 0], [0, 1, 0, lam], [1, 0, lam, 0]], dtype=float)
    if kind == "I":
        cK, cM = 1 / math.sqrt(J + 1), 1 / math.sqrt(J)
    elif kind == "II":
        cK, cM = 1 / math.sqrt(J), -1 / math.sqrt(J + 1)
    else:
        raise InvalidSpecError(f"unknown kind {kind!r}")
    return np.array([
        [lam * cK, lam * cM, cK, cM],
        [lam * cM, lam * cK, cM, cK],
        [cK, cM, lam * cK, lam * cM],
        [cM, cK, lam * cM, lam * cK],
    ])


def _row_multipliers(f: float, g: float, sign: int) -> np.ndarray:
    plus, minus = f + 1j * g, f - 1j * g
    return np.array([plus, minus, sign * minus, sign * plus]) / math.sqrt(2)


def angular_matrix(J: int, M: int, theta: float, phi: float) -> np.ndarray:
    """``D^J_{-M, s_ik}`` laid out on :data:`ANGULAR_PATTERN` (all ones for J = 0)."""
    if J == 0:
        return np.ones((4, 4), dtype=complex)
    d = np.array([complex(wigner_D(J, -M, s, phi, theta)) for s in (-1, 0, 1)])
    return d[ANGULAR_PATTERN + 1]


def eval_U(spec: BosonModeSpec, p: SpacetimePoint, radial: RadialFunc | None = None) -> np.ndarray:
    """Boson wave value at ``p``; ``radial`` overrides the closed-form ``(f, g)``."""
    if p.r <= 0:
        raise DomainError(f"radius must be positive, got r={p.r}")
    if radial is None:
        radial = closed_form_regular(spec.radial_params)
    f, g = radial(p.r)
    rows = _row_multipliers(f, g, spec.delta_sign)
    table = coefficient_table(spec.kind, spec.J, spec.lambda_sign)
    ang = angular_matrix(spec.J, spec.M, p.theta, p.phi)
    return np.exp(-1j * spec.epsilon * p.t) / p.r * rows[:, None] * table * ang


def dirac_radial(spec: DiracModeSpec) -> RadialFunc:
    return closed_form_regular(spec.radial_params)


def eval_Psi(spec: DiracModeSpec, p: SpacetimePoint, radial: RadialFunc | None = None) -> np.ndarray:
    """Dirac spherical wave as a 4-vector."""
    if p.r <= 0:
        raise DomainError(f"radius must be positive, got r={p.r}")
    if radial is None:
        radial = dirac_radial(spec)
    F, G = radial(p.r)
    rows = _row_multipliers(F, G, spec.delta)
    d = [complex(wigner_D(spec.j, -spec.m, s, p.phi, p.theta)) for s in (-0.5, 0.5)]
    return np.exp(-1j * spec.epsilon * p.t) / p.r * rows * np.array(d * 2)


def embed_Psi(spec: DiracModeSpec, p: SpacetimePoint, radial: RadialFunc | None = None) -> np.ndarray:
    """4x4 matrix carrying the Dirac wave in column ``channel``."""
    out = np.zeros((4, 4), dtype=complex)
    out[:, spec.channel - 1] = eval_Psi(spec, p, radial)
    return out


# --- operators ---

def _check_regular(p: SpacetimePoint, h: float) -> None:
    if h <= 0:
        raise DomainError(f"step must be positive, got h={h}")
    if p.r < 10 * h or math.sin(p.theta) < 10 * h:
        raise DomainError(f"point (r={p.r}, theta={p.theta}) is within 10h of a coordinate singularity")


def _memo(radial: RadialFunc) -> RadialFunc:
    # a stencil revisits each radius several times
    return functools.lru_cache(maxsize=16)(radial)


def _partials(field: FieldFunc, p: SpacetimePoint, h: float) -> list[np.ndarray]:
    x = p.as_tuple()
    out = []
    for i in range(4):
        hi, lo = list(x), list(x)
        hi[i] += h
        lo[i] -= h
        out.append((field(*hi) - field(*lo)) / (2 * h))
    return out


def sigma_operator(U: np.ndarray, dU_theta: np.ndarray, dU_phi: np.ndarray, theta: float) -> np.ndarray:
    """Angular operator given the field and its angular partials."""
    g1, g2 = clifford.gamma(1), clifford.gamma(2)
    J12 = clifford.bilateral_generator(1, 2, U)
    return 1j * g1 @ dU_theta + g2 @ (1j * dU_phi + 1j * math.cos(theta) * J12) / math.sin(theta)


def dk_operator(field: FieldFunc, p: SpacetimePoint, mass: float, h: float = 1e-4) -> np.ndarray:
    """Master operator applied to ``field(t, r, theta, phi)`` at ``p`` by central differences."""
    _check_regular(p, h)
    g0, g1, g2, g3 = (clifford.gamma(a) for a in range(4))
    U = field(*p.as_tuple())
    dt, dr, dth, dph = _partials(field, p, h)
    radial_part = g3 @ dr + (g1 @ clifford.bilateral_generator(3, 1, U)
                             + g2 @ clifford.bilateral_generator(3, 2, U)) / p.r
    return (1j * g0 @ dt + 1j * radial_part
            + sigma_operator(U, dth, dph, p.theta) / p.r - mass * U)


def dk_residual(spec: BosonModeSpec, p: SpacetimePoint, h: float = 1e-4,
                radial: RadialFunc | None = None, relative: bool = True) -> float:
    """Frobenius norm of the master operator on the wave, divided by ``norm(U)`` if relative."""
    if radial is None:
        radial = closed_form_regular(spec.radial_params)
    radial = _memo(radial)

    def field(t, r, th, ph):
        return eval_U(spec, SpacetimePoint(t, r, th, ph), radial)

    res = clifford.norm(dk_operator(field, p, spec.mass, h))
    if not relative:
        return res
    scale = clifford.norm(field(*p.as_tuple()))
    return res / scale if scale > 0 else res


def sigma_action_check(J: int, M: int, theta: float, phi: float,
                       f: np.ndarray | None = None, h: float = 1e-6) -> float:
    """Residual of the angular operator acting on the generic substitution.

    ``f`` holds constant placeholders for the sixteen radial functions
    (all ones by default).  The expected result is ``i sqrt(J(J+1))`` times
    the matrix whose row i carries the radial functions of row ``4-i`` with
    signs ``(-, +, +, -)`` and keeps its own D-functions.
    """
    if J < 1:
        raise DomainError("the angular action is only nontrivial for J >= 1")
    if math.sin(theta) < 10 * h:
        raise DomainError(f"theta={theta} is too close to a pole")
    F = np.ones((4, 4), dtype=complex) if f is None else np.asarray(f, dtype=complex)

    def U(th, ph):
        return F * angular_matrix(J, M, th, ph)

    dth = (U(theta + h, phi) - U(theta - h, phi)) / (2 * h)
    dph = (U(theta, phi + h) - U(theta, phi - h)) / (2 * h)
    lhs = sigma_operator(U(theta, phi), dth, dph, theta)
    swapped = np.array([-1, 1, 1, -1])[:, None] * F[::-1]
    rhs = 1j * math.sqrt(J * (J + 1)) * swapped * angular_matrix(J, M, theta, phi)
    return clifford.norm(lhs - rhs)


def expected_parity(J: int, delta_sign: int) -> int:
    """Reflection eigenvalue: ``(-1)^J`` for Delta = +1, ``(-1)^(J+1)`` for Delta = -1."""
    return (-1) ** J if delta_sign == 1 else (-1) ** (J + 1)


def parity_check(spec: BosonModeSpec, p: SpacetimePoint) -> tuple[int, float]:
    """Eigenvalue sign and relative mismatch of the reflected wave."""
    U = eval_U(spec, p)
    mirrored = SpacetimePoint(p.t, p.r, math.pi - p.theta, p.phi + math.pi)
    PU = clifford.parity_matrix_action(eval_U(spec, mirrored))
    scale = clifford.norm(U)
    mismatch = {s: clifford.norm(PU - s * U) / scale for s in (1, -1)}
    sign = min(mismatch, key=mismatch.get)
    return sign, mismatch[sign]
