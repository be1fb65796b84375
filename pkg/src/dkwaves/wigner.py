"""Wigner D-functions with vanishing third Euler angle, and their identities.

Convention: ``D^J_{m,s}(phi, theta, 0) = exp(-i m phi) d^J_{m,s}(theta)`` with
the standard (Condon-Shortley) small-d function

    d^J_{m,s}(t) = sum_k (-1)^(k+m-s) sqrt((J+m)!(J-m)!(J+s)!(J-s)!)
                   / ((J+s-k)! k! (J-m-k)! (m-s+k)!)
                   * cos(t/2)^(2J+s-m-2k) * sin(t/2)^(m-s+2k)

Half-integer indices are passed as floats (or ``Fraction``); they are
validated by doubling to an integer.  The third-angle-free D-functions in the
boson solutions are always ``D^J_{-M, s}``; the module works with the full
first index so that the half-integer ones used by the Dirac waves share the
same code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real

import numpy as np

from .errors import DomainError

__all__ = [
    "COUPLING_FACTORS",
    "SPLIT_COUPLINGS",
    "Coupling",
    "coupling_expand",
    "derivative_identity_residual",
    "doubled",
    "half_angle_factor",
    "identity_sides",
    "small_d",
    "wigner_D",
]

# factorials of 0..40 as floats; larger arguments go through lgamma
_FACT_MAX = 40
_FACT = tuple(float(math.factorial(n)) for n in range(_FACT_MAX + 1))


def doubled(x: Real) -> int:
    """Return ``2x`` as an int, raising if ``x`` is not a half-integer."""
    two_x = 2 * float(x)
    n = round(two_x)
    if abs(two_x - n) > 1e-9:
        raise DomainError(f"{x!r} is not an integer or half-integer")
    return int(n)


def _check_indices(J2: int, a2: int, b2: int) -> None:
    if J2 < 0:
        raise DomainError(f"J must be non-negative, got {J2 / 2}")
    if abs(a2) > J2 or abs(b2) > J2:
        raise DomainError(f"|m|, |s| must not exceed J: J={J2 / 2}, m={a2 / 2}, s={b2 / 2}")
    if (J2 - a2) % 2 or (J2 - b2) % 2:
        raise DomainError(f"J-m and J-s must be integers: J={J2 / 2}, m={a2 / 2}, s={b2 / 2}")


def _small_d_sum(J2: int, a2: int, b2: int, theta):
    jpm, jmm = (J2 + a2) // 2, (J2 - a2) // 2
    jps, jms = (J2 + b2) // 2, (J2 - b2) // 2
    dm = (a2 - b2) // 2
    c = np.cos(np.asarray(theta, dtype=float) / 2)
    s = np.sin(np.asarray(theta, dtype=float) / 2)
    k_lo, k_hi = max(0, -dm), min(jps, jmm)
    total = np.zeros_like(c)
    if J2 <= _FACT_MAX:
        pref = math.sqrt(_FACT[jpm] * _FACT[jmm] * _FACT[jps] * _FACT[jms])
        for k in range(k_lo, k_hi + 1):
            den = _FACT[jps - k] * _FACT[k] * _FACT[jmm - k] * _FACT[dm + k]
            sign = -1.0 if (k + dm) % 2 else 1.0
            total = total + sign / den * c ** (J2 - 2 * k - dm) * s ** (2 * k + dm)
        return pref * total
    lg = math.lgamma
    log_pref = 0.5 * (lg(jpm + 1) + lg(jmm + 1) + lg(jps + 1) + lg(jms + 1))
    for k in range(k_lo, k_hi + 1):
        log_w = log_pref - (lg(jps - k + 1) + lg(k + 1) + lg(jmm - k + 1) + lg(dm + k + 1))
        sign = -1.0 if (k + dm) % 2 else 1.0
        total = total + sign * math.exp(log_w) * c ** (J2 - 2 * k - dm) * s ** (2 * k + dm)
    return total


def _jacobi(n: int, a: int, b: int, x):
    """Jacobi polynomial ``P_n^{(a,b)}(x)`` by the three-term recurrence."""
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev
    p = (a + 1) + (a + b + 2) * (x - 1) / 2
    for k in range(2, n + 1):
        s = 2 * k + a + b
        c1 = 2 * k * (k + a + b) * (s - 2)
        c2 = (s - 1) * (s * (s - 2) * x + a * a - b * b)
        c3 = 2 * (k + a - 1) * (k + b - 1) * s
        p_prev, p = p, (c2 * p - c3 * p_prev) / c1
    return p


def _small_d_jacobi(J2: int, a2: int, b2: int, theta):
    # row index m = a2/2, column index s = b2/2
    jpm, jmm = (J2 + a2) // 2, (J2 - a2) // 2
    jps, jms = (J2 + b2) // 2, (J2 - b2) // 2
    dm = (a2 - b2) // 2
    k = min(jps, jms, jpm, jmm)
    if k == jps:
        a, lam = dm, dm
    elif k == jms:
        a, lam = -dm, 0
    elif k == jpm:
        a, lam = -dm, 0
    else:
        a, lam = dm, dm
    b = J2 - 2 * k - a
    # extended precision where the platform has it; the result is rounded once
    t = np.asarray(theta, dtype=np.longdouble)
    ratio = np.longdouble(math.comb(J2 - k, k + a)) / np.longdouble(math.comb(k + b, b))
    sign = -1 if lam % 2 else 1
    out = sign * np.sqrt(ratio) * np.sin(t / 2) ** a * np.cos(t / 2) ** b * _jacobi(k, a, b, np.cos(t))
    return out.astype(float)


def small_d(J: Real, m1: Real, m2: Real, theta, method: str = "jacobi"):
    """Wigner small-d function ``d^J_{m1,m2}(theta)``; ``theta`` may be an array.

    ``method="jacobi"`` (default) evaluates the Jacobi-polynomial form through
    its three-term recurrence, which keeps the relative error near machine
    precision for every J.  ``method="sum"`` evaluates the defining finite
    sum over k; the alternating terms cancel, so its absolute error grows to
    ~1e-14 around theta = pi/2 at J = 8.
    """
    J2, a2, b2 = doubled(J), doubled(m1), doubled(m2)
    _check_indices(J2, a2, b2)
    if method == "jacobi":
        out = _small_d_jacobi(J2, a2, b2, theta)
    elif method == "sum":
        out = _small_d_sum(J2, a2, b2, theta)
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(out) if np.ndim(out) == 0 else out


def wigner_D(J: Real, m: Real, s: Real, phi, theta):
    """``D^J_{m,s}(phi, theta, 0) = exp(-i m phi) d^J_{m,s}(theta)``."""
    d = small_d(J, m, s, theta)
    return np.exp(-1j * float(m) * np.asarray(phi, dtype=float)) * d


def _D_or_zero(J2: int, a2: int, b2: int, phi, theta):
    """D-function on doubled indices, zero where an index is out of range."""
    if J2 < 0 or abs(a2) > J2 or abs(b2) > J2:
        return 0.0 * np.asarray(theta, dtype=float) + 0j
    return np.exp(-0.5j * a2 * np.asarray(phi, dtype=float)) * _small_d_jacobi(J2, a2, b2, theta)


# --- derivative / recurrence identities for D^J_{-M, s}, s in {-1, 0, +1} ---

_POLE_EPS = 1e-8


def identity_sides(kind: int, J: int, M: int, theta: float, phi: float, h: float = 1e-6):
    """Left and right sides of one of the six first-order identities.

    ``D_s`` below abbreviates ``D^J_{-M,s}(phi, theta, 0)``; with
    ``a = sqrt(J(J+1))`` and ``b = sqrt((J-1)(J+2))``:

    ====  ==========================================  ========================
    kind  left side                                   right side
    ====  ==========================================  ========================
    1     d/dtheta D_{-1}                             (b D_{-2} - a D_0) / 2
    2     (-M + cos t)/sin t * D_{-1}                 (-b D_{-2} - a D_0) / 2
    3     d/dtheta D_{+1}                             (a D_0 - b D_{+2}) / 2
    4     (-M - cos t)/sin t * D_{+1}                 (-a D_0 - b D_{+2}) / 2
    5     d/dtheta D_0                                (a D_{-1} - a D_{+1}) / 2
    6     -M / sin t * D_0                            (-a D_{-1} - a D_{+1}) / 2
    ====  ==========================================  ========================

    The theta-derivative is a central difference with step ``h`` so the
    check never reuses the identity it verifies.
    """
    if kind not in range(1, 7):
        raise DomainError(f"identity kind must be 1..6, got {kind}")
    if J < 1 or abs(M) > J:
        raise DomainError(f"need J >= 1 and |M| <= J, got J={J}, M={M}")
    sin_t = math.sin(theta)
    if sin_t < _POLE_EPS or math.sin(theta - h) < _POLE_EPS or math.sin(theta + h) < _POLE_EPS:
        raise DomainError(f"theta={theta} is too close to a pole")
    J2, m2 = 2 * J, -2 * M

    def D(s: int, t: float = theta) -> complex:
        return complex(_D_or_zero(J2, m2, 2 * s, phi, t))

    t_hi, t_lo = theta + h, theta - h

    def dtheta(s: int) -> complex:
        # divide by the representable step, not 2h
        return (D(s, t_hi) - D(s, t_lo)) / (t_hi - t_lo)

    a = math.sqrt(J * (J + 1))
    b = math.sqrt((J - 1) * (J + 2))
    cos_t = math.cos(theta)
    if kind == 1:
        return dtheta(-1), 0.5 * (b * D(-2) - a * D(0))
    if kind == 2:
        return (-M + cos_t) / sin_t * D(-1), 0.5 * (-b * D(-2) - a * D(0))
    if kind == 3:
        return dtheta(1), 0.5 * (a * D(0) - b * D(2))
    if kind == 4:
        return (-M - cos_t) / sin_t * D(1), 0.5 * (-a * D(0) - b * D(2))
    if kind == 5:
        return dtheta(0), 0.5 * (a * D(-1) - a * D(1))
    return -M / sin_t * D(0), 0.5 * (-a * D(-1) - a * D(1))


def derivative_identity_residual(kind: int, J: int, M: int, theta: float, phi: float,
                                 h: float = 1e-6) -> float:
    lhs, rhs = identity_sides(kind, J, M, theta, phi, h)
    return abs(lhs - rhs)


# --- products of spin-1/2 half-angle factors with integer-J D-functions ---

# name -> (sign, m1, s1): factor == sign * D^{1/2}_{m1, s1}(phi, theta, 0)
COUPLING_FACTORS = {
    "cos+": (1.0, -0.5, -0.5),  # cos(theta/2) exp(+i phi/2)
    "cos-": (1.0, 0.5, 0.5),    # cos(theta/2) exp(-i phi/2)
    "sin+": (1.0, -0.5, 0.5),   # sin(theta/2) exp(+i phi/2)
    "sin-": (-1.0, 0.5, -0.5),  # sin(theta/2) exp(-i phi/2)
}

# The eight (factor, s) products met when the gauge rotation acts on a boson solution.
SPLIT_COUPLINGS = (
    ("cos+", 0), ("cos+", 1), ("sin-", 0), ("sin-", 1),
    ("cos-", -1), ("cos-", 0), ("sin+", -1), ("sin+", 0),
)


def half_angle_factor(name: str, theta, phi):
    """Evaluate one of the four half-angle factors by its closed form."""
    if name not in COUPLING_FACTORS:
        raise DomainError(f"unknown factor {name!r}; expected one of {sorted(COUPLING_FACTORS)}")
    trig = np.cos if name.startswith("cos") else np.sin
    phase = 0.5j if name.endswith("+") else -0.5j
    return trig(np.asarray(theta) / 2) * np.exp(phase * np.asarray(phi))


def _cg_half(J2: int, m2: int, ms2: int, j2: int) -> float:
    """Clebsch-Gordan ``<J m; 1/2 ms | j, m+ms>`` on doubled indices, j = J +- 1/2."""
    if abs(m2) > J2 or abs(m2 + ms2) > j2:
        return 0.0
    denom = J2 + 1  # 2J + 1
    if j2 == J2 + 1:
        num = (J2 + m2 + 2) if ms2 > 0 else (J2 - m2 + 2)
        return math.sqrt(num / 2 / denom)
    if j2 == J2 - 1:
        if ms2 > 0:
            return -math.sqrt((J2 - m2) / 2 / denom)
        return math.sqrt((J2 + m2) / 2 / denom)
    raise DomainError("coupling to spin 1/2 only reaches j = J +- 1/2")


@dataclass(frozen=True)
class Coupling:
    """``factor * D^J_{-M,s} = c_minus * D^{J-1/2}_{m,s'} + c_plus * D^{J+1/2}_{m,s'}``."""

    factor: str
    J: int
    M: int
    s: int
    c_minus: float
    c_plus: float
    m: float        # first index of both targets
    s_target: float  # second index of both targets

    def parts(self, theta, phi):
        """The ``j = J - 1/2`` and ``j = J + 1/2`` terms of the right-hand side."""
        m2, s2 = doubled(self.m), doubled(self.s_target)
        hi = self.c_plus * _D_or_zero(2 * self.J + 1, m2, s2, phi, theta)
        lo = 0.0 * hi
        if self.J >= 1 and self.c_minus != 0:
            lo = self.c_minus * _D_or_zero(2 * self.J - 1, m2, s2, phi, theta)
        return lo, hi

    def evaluate(self, theta, phi):
        """Right-hand side, evaluated from the half-integer D-functions."""
        lo, hi = self.parts(theta, phi)
        return lo + hi

    def residual(self, theta, phi) -> float:
        lhs = half_angle_factor(self.factor, theta, phi) * _D_or_zero(
            2 * self.J, -2 * self.M, 2 * self.s, phi, theta)
        return float(np.max(np.abs(lhs - self.evaluate(theta, phi))))


def coupling_expand(factor: str, s: int, J: int, M: int) -> Coupling:
    """Expand ``factor * D^J_{-M,s}`` over ``D^{J-1/2}`` and ``D^{J+1/2}``.

    For ``factor='cos+'`` the coefficients reduce to

    * ``s = 0``:  ``c_minus = sqrt(J (J-M)) / (2J+1)``,
      ``c_plus = sqrt((J+1)(J+M+1)) / (2J+1)``
    * ``s = +1``: ``c_minus = sqrt((J+1)(J-M)) / (2J+1)``,
      ``c_plus = sqrt(J (J+M+1)) / (2J+1)``

    and those two are returned from the closed forms; every other case is
    assembled from spin-1/2 Clebsch-Gordan products.
    """
    if factor not in COUPLING_FACTORS:
        raise DomainError(f"unknown factor {factor!r}; expected one of {sorted(COUPLING_FACTORS)}")
    if s not in (-1, 0, 1):
        raise DomainError(f"s must be -1, 0 or +1, got {s}")
    if J < 0 or abs(M) > J:
        raise DomainError(f"need J >= 0 and |M| <= J, got J={J}, M={M}")
    if J == 0 and s != 0:
        raise DomainError("J = 0 admits only s = 0")
    sign, m1, s1 = COUPLING_FACTORS[factor]
    m_t, s_t = m1 - M, s1 + s
    if factor == "cos+" and s in (0, 1):
        w = 2 * J + 1
        if s == 0:
            c_minus = math.sqrt(J * (J - M)) / w
            c_plus = math.sqrt((J + 1) * (J + M + 1)) / w
        else:
            c_minus = math.sqrt((J + 1) * (J - M)) / w
            c_plus = math.sqrt(J * (J + M + 1)) / w
        return Coupling(factor, J, M, s, c_minus, c_plus, m_t, s_t)
    J2, m12, s12 = 2 * J, doubled(m1), doubled(s1)
    coeffs = []
    for j2 in (J2 - 1, J2 + 1):
        if j2 < 0 or abs(2 * s_t) > j2:
            coeffs.append(0.0)
            continue
        coeffs.append(sign * _cg_half(J2, -2 * M, m12, j2) * _cg_half(J2, 2 * s, s12, j2))
    return Coupling(factor, J, M, s, coeffs[0], coeffs[1], m_t, s_t)
