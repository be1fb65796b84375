"""Gauge rotation of boson waves into four Dirac columns, and the boson->fermion expansions.

The rotation acts on the second bispinor index, ``V = (I (x) S) U = U S^T``
with ``S = diag(B, B)`` and::

    B = [[ cos(t/2) e^{-i p/2}, -sin(t/2) e^{-i p/2}],
         [ sin(t/2) e^{+i p/2},  cos(t/2) e^{+i p/2}]]

so that ``B_ab = D^{1/2}_{m_a, m_b}(p, t, 0)`` with ``m = (+1/2, -1/2)``.  The
columns of ``V`` then obey four independent Dirac equations, and each half of
the split ``V = V^(J-1/2) + V^(J+1/2)`` is a combination of Dirac spherical
waves with ``j = J -+ 1/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import clifford
from .errors import DomainError, InvalidSpecError, UnimplementedCaseError
from .fields import (ANGULAR_PATTERN, BosonModeSpec, DiracModeSpec, FieldFunc,
                     SpacetimePoint, _check_regular, _memo, _partials, coefficient_table,
                     eval_Psi, eval_U)
from .radial import closed_form_regular
from .wigner import _D_or_zero, coupling_expand

__all__ = [
    "EXPANSION_CASES",
    "ExpansionReport",
    "GaugeMatrix",
    "SplitPair",
    "cancellation_residual",
    "connection",
    "dirac_operator",
    "dirac_residual",
    "dirac_split_residual",
    "expansion_coefficients",
    "gauge_B",
    "radial_bundles",
    "sign_grid",
    "split_half_integer",
    "table_form",
    "transform_to_V",
    "verify_expansion",
]

ORDERINGS = ("second-index", "first-index")


@dataclass(frozen=True)
class GaugeMatrix:
    B: np.ndarray
    S: np.ndarray

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.B))

    def unitarity_defect(self) -> float:
        return clifford.norm(self.B @ self.B.conj().T - np.eye(2))


def gauge_B(theta: float, phi: float) -> GaugeMatrix:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    u = np.exp(-0.5j * phi)
    B = np.array([[c * u, -s * u], [s / u, c / u]])
    z = np.zeros((2, 2))
    return GaugeMatrix(B, np.block([[B, z], [z, B]]))


def connection(alpha: str, theta: float) -> np.ndarray:
    """Spinor connection of the spherical tetrad, component ``alpha``."""
    if alpha in ("t", "r"):
        return np.zeros((4, 4), dtype=complex)
    if alpha == "theta":
        return clifford.sigma(3, 1)
    if alpha == "phi":
        return math.sin(theta) * clifford.sigma(3, 2) + math.cos(theta) * clifford.sigma(1, 2)
    raise DomainError(f"unknown coordinate {alpha!r}")


def cancellation_residual(theta: float, phi: float, h: float = 1e-6,
                          gamma: Callable[[str, float], np.ndarray] | None = None) -> float:
    """``max_alpha norm(S Gamma_alpha S^-1 + S d_alpha S^-1)``; ``gamma`` overrides the connection."""
    if math.sin(theta) < 10 * h:
        raise DomainError(f"theta={theta} is too close to a pole")
    gamma = connection if gamma is None else gamma

    def S_inv(th, ph):
        return np.linalg.inv(gauge_B(th, ph).S)

    S = gauge_B(theta, phi).S
    derivs = {
        "t": np.zeros((4, 4)),
        "r": np.zeros((4, 4)),
        "theta": (S_inv(theta + h, phi) - S_inv(theta - h, phi)) / (2 * h),
        "phi": (S_inv(theta, phi + h) - S_inv(theta, phi - h)) / (2 * h),
    }
    return max(clifford.norm(S @ gamma(a, theta) @ S_inv(theta, phi) + S @ d)
               for a, d in derivs.items())


def transform_to_V(U: np.ndarray, theta: float, phi: float, ordering: str = "second-index",
                   inverse: bool = False) -> np.ndarray:
    S = gauge_B(theta, phi).S
    if inverse:
        S = np.linalg.inv(S)
    if ordering == "second-index":
        return clifford.second_index_action(S, U)
    if ordering == "first-index":
        return clifford.first_index_action(S, U)
    raise InvalidSpecError(f"ordering must be one of {ORDERINGS}, got {ordering!r}")


def dirac_operator(field: FieldFunc, p: SpacetimePoint, mass: float, h: float = 1e-4) -> np.ndarray:
    """Dirac operator of the spherical tetrad applied to every column of ``field``."""
    _check_regular(p, h)
    g = [clifford.gamma(a) for a in range(4)]
    V = field(*p.as_tuple())
    dt, dr, dth, dph = _partials(field, p, h)
    return (1j * g[0] @ dt + 1j * g[3] @ dr
            + 1j * g[1] @ (dth + connection("theta", p.theta) @ V) / p.r
            + 1j * g[2] @ (dph + connection("phi", p.theta) @ V) / (p.r * math.sin(p.theta))
            - mass * V)


def _column_norms(res: np.ndarray, V: np.ndarray) -> list[float]:
    # a column that vanishes identically is measured against the whole matrix
    total = float(np.linalg.norm(V))
    out = []
    for k in range(V.shape[1]):
        scale = float(np.linalg.norm(V[:, k]))
        if scale <= 1e-12 * total:
            scale = total
        r = float(np.linalg.norm(res[:, k]))
        out.append(r / scale if scale > 0 else r)
    return out


def dirac_split_residual(spec: BosonModeSpec, p: SpacetimePoint, h: float = 1e-4,
                         ordering: str = "second-index") -> list[float]:
    """Relative Dirac residual of each column of the rotated boson wave."""
    radial = _memo(closed_form_regular(spec.radial_params))

    def field(t, r, th, ph):
        U = eval_U(spec, SpacetimePoint(t, r, th, ph), radial)
        return transform_to_V(U, th, ph, ordering)

    return _column_norms(dirac_operator(field, p, spec.mass, h), field(*p.as_tuple()))


def dirac_residual(spec: DiracModeSpec, p: SpacetimePoint, h: float = 1e-4) -> float:
    """Relative Dirac residual of a single spherical Dirac wave."""

    def field(t, r, th, ph):
        return eval_Psi(spec, SpacetimePoint(t, r, th, ph))[:, None]

    return _column_norms(dirac_operator(field, p, spec.mass, h), field(*p.as_tuple()))[0]


# --- half-integer split ---

# (row, col) of B inside a block -> (sign, coupling factor name)
_B_FACTORS = {
    (0, 0): (1.0, "cos-"),
    (0, 1): (-1.0, "sin-"),
    (1, 0): (1.0, "sin+"),
    (1, 1): (1.0, "cos+"),
}


@dataclass(frozen=True)
class SplitPair:
    V_minus: np.ndarray
    V_plus: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.V_minus + self.V_plus


def _amplitudes(spec: BosonModeSpec, p: SpacetimePoint, radial=None) -> np.ndarray:
    """The wave with its D-functions stripped off."""
    if radial is None:
        radial = closed_form_regular(spec.radial_params)
    f, g = radial(p.r)
    plus, minus = f + 1j * g, f - 1j * g
    d = spec.delta_sign
    rows = np.array([plus, minus, d * minus, d * plus])
    pref = np.exp(-1j * spec.epsilon * p.t) / (p.r * math.sqrt(2))
    return pref * rows[:, None] * coefficient_table(spec.kind, spec.J, spec.lambda_sign)


def split_half_integer(spec: BosonModeSpec, p: SpacetimePoint, radial=None) -> SplitPair:
    """Split the rotated wave into its ``j = J - 1/2`` and ``j = J + 1/2`` parts.

    Each entry ``sum_l U_il S_kl`` is a sum of half-angle factors times
    ``D^J_{-M,s}``, expanded term by term with :func:`coupling_expand`.
    For ``J = 0`` the lower part is identically zero.
    """
    R = _amplitudes(spec, p, radial)
    pattern = ANGULAR_PATTERN if spec.J > 0 else np.zeros((4, 4), dtype=int)
    V_minus = np.zeros((4, 4), dtype=complex)
    V_plus = np.zeros((4, 4), dtype=complex)
    cache: dict = {}
    for i in range(4):
        for k in range(4):
            block = (k // 2) * 2
            for l in (block, block + 1):
                if R[i, l] == 0:
                    continue
                sign, name = _B_FACTORS[(k % 2, l % 2)]
                key = (name, int(pattern[i, l]))
                if key not in cache:
                    cache[key] = coupling_expand(name, key[1], spec.J, spec.M)
                cp = cache[key]
                lo, hi = cp.parts(p.theta, p.phi)
                V_minus[i, k] += sign * R[i, l] * lo
                V_plus[i, k] += sign * R[i, l] * hi
    return SplitPair(V_minus, V_plus)


def radial_bundles(spec: BosonModeSpec, r: float, branch: str) -> tuple[complex, complex]:
    """Radial combinations ``(H+, H-)`` carried by the rows of one half of the split."""
    J = spec.J
    if J < 1:
        raise DomainError("radial bundles need J >= 1")
    f, g = closed_form_regular(spec.radial_params)(r)
    table = coefficient_table(spec.kind, J, 1)
    cK, cM = table[0, 0], table[0, 1]
    P, Q = cK * (f + 1j * g), cM * (f + 1j * g)
    Pb, Qb = cK * (f - 1j * g), cM * (f - 1j * g)
    w = math.sqrt(J * (J + 1)) / (2 * J + 1)
    if branch == "minus":
        a, b = math.sqrt(J + 1), -math.sqrt(J)
    elif branch == "plus":
        a, b = math.sqrt(J), math.sqrt(J + 1)
    else:
        raise InvalidSpecError(f"branch must be 'plus' or 'minus', got {branch!r}")
    return w * (a * P + b * Q), w * (a * Pb + b * Qb)


# slot signs of the table form; rows scale by (H+, H-, Delta H-, Delta H+)
_TABLE_SIGNS = {
    # entries are (lambda power, sign) per position
    "minus": [[(1, 1), (1, -1), (0, 1), (0, -1)],
              [(1, -1), (1, 1), (0, -1), (0, 1)],
              [(0, 1), (0, -1), (1, 1), (1, -1)],
              [(0, -1), (0, 1), (1, -1), (1, 1)]],
    "plus": [[(1, 1), (1, 1), (0, 1), (0, 1)],
             [(1, 1), (1, 1), (0, 1), (0, 1)],
             [(0, 1), (0, 1), (1, 1), (1, 1)],
             [(0, 1), (0, 1), (1, 1), (1, 1)]],
}


def table_form(spec: BosonModeSpec, p: SpacetimePoint, branch: str) -> np.ndarray:
    """One half of the split written through ``H+-`` and the angular slots."""
    J, M = spec.J, spec.M
    n = J * (J + 1)
    if branch == "minus":
        j, w_up, w_dn = J - 0.5, (J + M) / n, (J - M) / n
    else:
        j, w_up, w_dn = J + 0.5, (J - M + 1) / n, (J + M + 1) / n
    def Dj(m, s):
        # zero outside the index range; its weight vanishes there anyway
        return complex(_D_or_zero(round(2 * j), round(2 * m), round(2 * s), p.phi, p.theta))

    omega = math.sqrt(w_up) * Dj(-M + 0.5, -0.5)
    xi = math.sqrt(w_dn) * Dj(-M - 0.5, -0.5)
    upsilon = math.sqrt(w_up) * Dj(-M + 0.5, 0.5)
    zeta = math.sqrt(w_dn) * Dj(-M - 0.5, 0.5)
    slots = np.array([[omega, xi, omega, xi], [upsilon, zeta, upsilon, zeta]] * 2)
    hp, hm = radial_bundles(spec, p.r, branch)
    d, lam = spec.delta_sign, spec.lambda_sign
    rows = np.array([hp, hm, d * hm, d * hp])
    signs = np.array([[s * lam ** e for e, s in row] for row in _TABLE_SIGNS[branch]])
    pref = np.exp(-1j * spec.epsilon * p.t) / (p.r * math.sqrt(2))
    return pref * rows[:, None] * signs * slots


# --- expansions over Dirac waves ---

def expansion_coefficients(J: int, M: int, branch: str) -> tuple[float, float]:
    """``(alpha, beta)`` for the upper branch, ``(rho, sigma)`` for the lower one."""
    if J < 1 or abs(M) > J:
        raise DomainError(f"need J >= 1 and |M| <= J, got J={J}, M={M}")
    n = J * (J + 1)
    if branch == "plus":
        return math.sqrt((J - M + 1) / n), math.sqrt((J + M + 1) / n)
    if branch == "minus":
        return math.sqrt((J + M) / n), math.sqrt((J - M) / n)
    raise InvalidSpecError(f"branch must be 'plus' or 'minus', got {branch!r}")


# (branch, Delta, lambda) -> (Dirac parity label, column factors multiplying (c1, c2, c1, c2))
EXPANSION_CASES: dict[tuple[str, int, int], tuple[int, tuple[complex, ...]]] = {
    ("plus", 1, 1): (1, (1, 1, 1, 1)),
    ("plus", -1, -1): (1, (-1, -1, 1, 1)),
    ("plus", 1, -1): (-1, (-1, -1, 1, 1)),
    ("plus", -1, 1): (-1, (1, 1, 1, 1)),
    ("minus", 1, 1): (-1, (1j, -1j, 1j, -1j)),
    ("minus", -1, -1): (-1, (-1j, 1j, 1j, -1j)),
    ("minus", 1, -1): (1, (-1j, 1j, 1j, -1j)),
    ("minus", -1, 1): (1, (1j, -1j, 1j, -1j)),
    ("zero", 1, 1): (1, (1, 1, 1, 1)),
    ("zero", -1, -1): (1, (-1, -1, 1, 1)),
    ("zero", 1, -1): (-1, (-1, -1, 1, 1)),
    ("zero", -1, 1): (-1, (1, 1, 1, 1)),
}

_BRANCH_OF_KIND = {"I": "plus", "II": "minus", "J0": "zero"}


@dataclass(frozen=True)
class ExpansionReport:
    case: tuple[str, int, int]
    j: float
    delta: int
    coefficients: tuple[float, float]
    column_residuals: tuple[float, ...]
    scale: float = 1.0

    @property
    def max_residual(self) -> float:
        return max(self.column_residuals)

    @property
    def relative_residual(self) -> float:
        return self.max_residual / self.scale if self.scale > 0 else self.max_residual


def verify_expansion(spec: BosonModeSpec, p: SpacetimePoint, radial=None) -> ExpansionReport:
    """Compare the nonzero half of the split with its expansion over Dirac waves."""
    branch = _BRANCH_OF_KIND[spec.kind]
    key = (branch, spec.delta_sign, spec.lambda_sign)
    if key not in EXPANSION_CASES:
        raise UnimplementedCaseError(f"no expansion is known for case {key}")
    delta, factors = EXPANSION_CASES[key]
    if radial is None:
        radial = closed_form_regular(spec.radial_params)
    split = split_half_integer(spec, p, radial)
    J, M = spec.J, spec.M
    if branch == "zero":
        j, coeffs = 0.5, (1.0, 1.0)
        target, psi_radial = split.V_plus, radial
    elif branch == "plus":
        j, coeffs = J + 0.5, expansion_coefficients(J, M, "plus")
        target, psi_radial = split.V_plus, radial
    else:
        j, coeffs = J - 0.5, expansion_coefficients(J, M, "minus")
        target = split.V_minus

        def psi_radial(r):
            f, g = radial(r)
            return g, -f

    residuals = []
    for k in range(4):
        m = M - 0.5 if k % 2 == 0 else M + 0.5
        if coeffs[k % 2] == 0:
            expected = np.zeros(4)  # m lies outside the j multiplet
        else:
            dspec = DiracModeSpec(spec.epsilon, j, m, delta, k + 1, spec.mass)
            expected = factors[k] * coeffs[k % 2] * eval_Psi(dspec, p, psi_radial)
        residuals.append(float(np.linalg.norm(target[:, k] - expected)))
    return ExpansionReport(key, j, delta, coeffs, tuple(residuals), clifford.norm(target))


def sign_grid(spec: BosonModeSpec, p: SpacetimePoint) -> np.ndarray:
    """Entrywise sign of the nonzero half relative to the parity-even Dirac structure.

    Entry ``(i, k)`` is the sign of ``V[i, k] / (phase * |c_k| * Psi_k[i])`` where
    ``Psi_k`` is the Dirac wave built with parity label +1 and ``phase`` is 1 for
    the upper branch and ``i`` for the lower one.
    """
    branch = _BRANCH_OF_KIND[spec.kind]
    radial = closed_form_regular(spec.radial_params)
    split = split_half_integer(spec, p, radial)
    J, M = spec.J, spec.M
    if branch == "minus":
        target, j, coeffs, phase = split.V_minus, J - 0.5, expansion_coefficients(J, M, "minus"), 1j

        def psi_radial(r):
            f, g = radial(r)
            return g, -f
    else:
        target, psi_radial, phase = split.V_plus, radial, 1
        j = J + 0.5
        coeffs = expansion_coefficients(J, M, "plus") if J > 0 else (1.0, 1.0)
    grid = np.zeros((4, 4), dtype=int)
    for k in range(4):
        m = M - 0.5 if k % 2 == 0 else M + 0.5
        if coeffs[k % 2] == 0:
            continue
        ref = eval_Psi(DiracModeSpec(spec.epsilon, j, m, 1, k + 1, spec.mass), p, psi_radial)
        ratio = target[:, k] / (phase * coeffs[k % 2] * ref)
        grid[:, k] = np.sign(ratio.real).astype(int)
    return grid
