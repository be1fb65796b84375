"""Radial systems: the eight-function system, its lambda reduction, the unified
two-component kernel with spherical-Bessel closed forms, and the J = 0 system.

Every two-component system is written with a signed index ``kappa``::

    f' = -kappa f / r - (eps + m) g
    g' = +kappa g / r + (eps - m) f

Type I boson waves use ``kappa = J + 1``, type II ``kappa = -J``, J = 0 waves
``kappa = 1`` and Dirac waves ``kappa = j + 1/2``.  The mass that enters is
the signed one, ``delta * lambda * m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import spherical_jn

from .errors import DomainError, InvalidSpecError, UnsupportedRegimeError

__all__ = [
    "RadialOctet",
    "RadialPair",
    "RadialParams",
    "RadialTrajectory",
    "closed_form_regular",
    "convergence_order",
    "effective_mass",
    "four_system_lhs",
    "integrate_radial",
    "j0_system_residual",
    "kappa_for",
    "octet_from_pair",
    "octet_residual",
    "rk4_path",
    "unified_lhs",
    "unified_rhs",
]

Func = Callable[[float], float]


def _sign(name: str, value: int) -> int:
    if value not in (1, -1):
        raise InvalidSpecError(f"{name} must be +1 or -1, got {value!r}")
    return int(value)


def effective_mass(mass: float, delta_sign: int = 1, lambda_sign: int = 1) -> float:
    """Signed mass ``delta * lambda * m`` entering the reduced systems."""
    return _sign("delta_sign", delta_sign) * _sign("lambda_sign", lambda_sign) * mass


def kappa_for(kind: str, J: int) -> int:
    """Radial index of a boson family: I -> J+1, II -> -J, J0 -> 1."""
    if kind == "I":
        return J + 1
    if kind == "II":
        return -J
    if kind == "J0":
        return 1
    raise InvalidSpecError(f"unknown kind {kind!r}")


@dataclass(frozen=True)
class RadialParams:
    epsilon: float
    mass: float
    kappa: int
    lambda_sign: int = 1
    delta_sign: int = 1

    def __post_init__(self):
        _sign("lambda_sign", self.lambda_sign)
        _sign("delta_sign", self.delta_sign)

    @property
    def signed_mass(self) -> float:
        return effective_mass(self.mass, self.delta_sign, self.lambda_sign)

    @property
    def momentum(self) -> float:
        return math.sqrt(self.epsilon ** 2 - self.mass ** 2)


def unified_rhs(params: RadialParams, r: float, pair: Sequence[float]) -> tuple[float, float]:
    if r <= 0:
        raise DomainError(f"radius must be positive, got r={r}")
    f, g = pair
    k, eps, m = params.kappa, params.epsilon, params.signed_mass
    return (-k * f / r - (eps + m) * g, k * g / r + (eps - m) * f)


def unified_lhs(kappa: int, epsilon: float, mass: float, f: float, df: float,
                g: float, dg: float, r: float) -> tuple[float, float]:
    """Left sides ``(f' + kappa f/r + (eps+m) g, g' - kappa g/r - (eps-m) f)``."""
    return (df + kappa * f / r + (epsilon + mass) * g,
            dg - kappa * g / r - (epsilon - mass) * f)


@dataclass(frozen=True)
class RadialPair:
    """Closed-form regular solution of the unified system."""

    kappa: int
    epsilon: float
    mass: float  # signed

    @property
    def momentum(self) -> float:
        return math.sqrt(self.epsilon ** 2 - self.mass ** 2)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        p = self.momentum
        scale = p / (self.epsilon + self.mass)
        if self.kappa > 0:
            f = r * spherical_jn(self.kappa, p * r)
            g = -scale * r * spherical_jn(self.kappa - 1, p * r)
        else:
            n = -self.kappa
            f = r * spherical_jn(n - 1, p * r)
            g = scale * r * spherical_jn(n, p * r)
        if f.ndim == 0:
            return float(f), float(g)
        return f, g

    def f(self, r):
        return self(r)[0]

    def g(self, r):
        return self(r)[1]


def closed_form_regular(params: RadialParams) -> RadialPair:
    """Regular spherical-Bessel solution of the unified system (scattering regime)."""
    if params.kappa == 0:
        raise DomainError("kappa = 0 is not a radial index")
    if params.mass < 0:
        raise DomainError(f"mass must be non-negative, got {params.mass}")
    if params.epsilon <= params.mass:
        raise UnsupportedRegimeError(
            f"closed forms need epsilon > mass, got epsilon={params.epsilon}, mass={params.mass}")
    return RadialPair(params.kappa, params.epsilon, params.signed_mass)


# --- fixed-step RK4 ---

def rk4_path(rhs: Callable[[float, np.ndarray], np.ndarray], x0: float, y0, x1: float,
             n_steps: int) -> tuple[np.ndarray, np.ndarray]:
    """Classic RK4 with ``n_steps`` equal steps from x0 to x1; returns (xs, ys)."""
    if n_steps < 1:
        raise DomainError("need at least one step")
    h = (x1 - x0) / n_steps
    xs = x0 + h * np.arange(n_steps + 1)
    xs[-1] = x1
    y = np.array(y0, dtype=float)
    ys = np.empty((n_steps + 1, y.size))
    ys[0] = y
    for i in range(n_steps):
        x = xs[i]
        k1 = rhs(x, y)
        k2 = rhs(x + h / 2, y + h / 2 * k1)
        k3 = rhs(x + h / 2, y + h / 2 * k2)
        k4 = rhs(x + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        ys[i + 1] = y
    return xs, ys


@dataclass(frozen=True)
class RadialTrajectory:
    r: np.ndarray
    f: np.ndarray
    g: np.ndarray

    def deviation(self, pair: RadialPair) -> float:
        """Sup-norm distance to a closed form on the trajectory grid."""
        f, g = pair(self.r)
        return float(max(np.max(np.abs(self.f - f)), np.max(np.abs(self.g - g))))


def integrate_radial(params: RadialParams, r0: float, r1: float, step: float,
                     init: Sequence[float]) -> RadialTrajectory:
    if not 0 < r0 < r1:
        raise DomainError(f"need 0 < r0 < r1, got r0={r0}, r1={r1}")
    if step <= 0 or step >= r1 - r0:
        raise DomainError(f"step must lie in (0, r1 - r0), got {step}")
    k, ep, em = params.kappa, params.epsilon + params.signed_mass, params.epsilon - params.signed_mass
    n = max(1, round((r1 - r0) / step))
    h = (r1 - r0) / n
    rs = r0 + h * np.arange(n + 1)
    rs[-1] = r1
    fs, gs = np.empty(n + 1), np.empty(n + 1)
    f, g = (float(v) for v in init)
    fs[0], gs[0] = f, g
    # scalar loop: same scheme as rk4_path, without per-stage array allocation
    for i in range(n):
        r = r0 + i * h
        rm, re = r + h / 2, r + h
        k1f, k1g = -k * f / r - ep * g, k * g / r + em * f
        f2, g2 = f + h / 2 * k1f, g + h / 2 * k1g
        k2f, k2g = -k * f2 / rm - ep * g2, k * g2 / rm + em * f2
        f3, g3 = f + h / 2 * k2f, g + h / 2 * k2g
        k3f, k3g = -k * f3 / rm - ep * g3, k * g3 / rm + em * f3
        f4, g4 = f + h * k3f, g + h * k3g
        k4f, k4g = -k * f4 / re - ep * g4, k * g4 / re + em * f4
        f += h / 6 * (k1f + 2 * k2f + 2 * k3f + k4f)
        g += h / 6 * (k1g + 2 * k2g + 2 * k3g + k4g)
        fs[i + 1], gs[i + 1] = f, g
    return RadialTrajectory(rs, fs, gs)


def convergence_order(params: RadialParams, r0: float, r1: float, step: float) -> float:
    """Observed order from deviations at ``step`` and ``step/2`` against the closed form."""
    pair = closed_form_regular(params)
    init = pair(r0)
    e1 = integrate_radial(params, r0, r1, step, init).deviation(pair)
    e2 = integrate_radial(params, r0, r1, step / 2, init).deviation(pair)
    return math.log2(e1 / e2)


# --- eight-function system and its lambda reduction ---

_OCTET_NAMES = ("K", "L", "M", "N", "A", "B", "C", "D")


@dataclass(frozen=True)
class RadialOctet:
    K: Func
    L: Func
    M: Func
    N: Func
    A: Func
    B: Func
    C: Func
    D: Func

    def values(self, r: float) -> dict[str, float]:
        return {n: float(getattr(self, n)(r)) for n in _OCTET_NAMES}

    def derivatives(self, r: float, h: float = 1e-5) -> dict[str, float]:
        return {n: (float(getattr(self, n)(r + h)) - float(getattr(self, n)(r - h))) / (2 * h)
                for n in _OCTET_NAMES}

    @classmethod
    def zero(cls) -> "RadialOctet":
        z = lambda r: 0.0  # noqa: E731
        return cls(*([z] * 8))


def octet_equations(J: int, epsilon: float, mass: float, v: dict, dv: dict, r: float) -> np.ndarray:
    """The eight left sides; ``mass`` is already signed by the parity label."""
    a = math.sqrt(J * (J + 1))
    e, m = epsilon, mass
    K, L, M, N, A, B, C, D = (v[n] for n in _OCTET_NAMES)
    dK, dL, dM, dN, dA, dB, dC, dD = (dv[n] for n in _OCTET_NAMES)
    return np.array([
        e * K - dL + a / r * N - m * A,
        e * L + dK + a / r * M + m * B,
        e * A - dB + a / r * D - m * K,
        e * B + dA + a / r * C + m * L,
        e * M - dN + N / r + a / r * L - m * C,
        e * N + dM + M / r + a / r * K + m * D,
        e * C - dD + D / r + a / r * B - m * M,
        e * D + dC + C / r + a / r * A + m * N,
    ])


def octet_residual(J: int, params: RadialParams, octet: RadialOctet, r: float,
                   h: float = 1e-5) -> float:
    """Max absolute residual of the eight equations at ``r``.

    The parity label enters as ``m -> delta * m``; the constraint label is
    carried by the octet itself.  Derivatives are central differences.
    """
    if r <= 0 or r - h <= 0:
        raise DomainError(f"radius must be positive, got r={r}")
    if J < 1:
        raise DomainError("the eight-function system needs J >= 1")
    mass = params.delta_sign * params.mass
    res = octet_equations(J, params.epsilon, mass, octet.values(r), octet.derivatives(r, h), r)
    return float(np.max(np.abs(res)))


def octet_from_pair(J: int, kind: str, lambda_sign: int, f: Func, g: Func) -> RadialOctet:
    """Octet from the constraint ``(A, B, C, D) = lambda (K, L, M, N)`` and substitution I or II."""
    lam = _sign("lambda_sign", lambda_sign)
    if J < 1:
        raise DomainError("substitutions I and II need J >= 1")
    if kind == "I":
        cK, cM = 1 / math.sqrt(J + 1), 1 / math.sqrt(J)
    elif kind == "II":
        cK, cM = 1 / math.sqrt(J), -1 / math.sqrt(J + 1)
    else:
        raise InvalidSpecError(f"kind must be 'I' or 'II', got {kind!r}")

    def scaled(fn, c):
        return lambda r: c * fn(r)

    K, L, M, N = scaled(f, cK), scaled(g, cK), scaled(f, cM), scaled(g, cM)
    return RadialOctet(K, L, M, N, scaled(K, lam), scaled(L, lam), scaled(M, lam), scaled(N, lam))


def four_system_lhs(J: int, epsilon: float, mass: float, v: Sequence[float],
                    dv: Sequence[float], r: float) -> np.ndarray:
    """Left sides of the reduced four-function system for (K, L, M, N)."""
    a = math.sqrt(J * (J + 1))
    K, L, M, N = v
    dK, dL, dM, dN = dv
    return np.array([
        dK + a / r * M + (epsilon + mass) * L,
        dL - a / r * N - (epsilon - mass) * K,
        dM + M / r + a / r * K + (epsilon + mass) * N,
        dN - N / r - a / r * L - (epsilon - mass) * M,
    ])


# --- J = 0 ---

def j0_system_residual(delta_sign: int, lambda_sign: int | None, params: RadialParams,
                       funcs: Sequence[Func], r: float, h: float = 1e-5) -> float:
    """Max residual of the four J = 0 equations for ``(M, N, C, D)``.

    ``delta_sign = -1`` flips the mass.  When ``lambda_sign`` is given the
    reduction ``C = lambda M, D = lambda N`` is checked as well.
    """
    if r <= 0 or r - h <= 0:
        raise DomainError(f"radius must be positive, got r={r}")
    m = _sign("delta_sign", delta_sign) * params.mass
    e = params.epsilon
    M, N, C, D = (float(fn(r)) for fn in funcs)
    dM, dN, dC, dD = ((float(fn(r + h)) - float(fn(r - h))) / (2 * h) for fn in funcs)
    res = [
        e * M - dN + N / r - m * C,
        e * N + dM + M / r + m * D,
        e * C - dD + D / r - m * M,
        e * D + dC + C / r + m * N,
    ]
    if lambda_sign is not None:
        lam = _sign("lambda_sign", lambda_sign)
        res += [C - lam * M, D - lam * N]
    return float(max(abs(x) for x in res))
