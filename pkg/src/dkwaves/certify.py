"""Registry of numerical certificates, each a named sweep returning its worst residual."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import clifford, curved, fermion_map, fields, radial, wigner

__all__ = ["CHECKS", "Check", "CheckResult", "CertifyConfig", "run_checks"]


@dataclass(frozen=True)
class CertifyConfig:
    J_max: int = 3
    points: int = 4
    seed: int = 0
    h: float = 1e-4
    epsilon: float = 1.25
    mass: float = 0.75


@dataclass(frozen=True)
class Check:
    name: str
    tag: str
    tolerance: float
    run: Callable[[CertifyConfig, np.random.Generator], float]


@dataclass(frozen=True)
class CheckResult:
    name: str
    tag: str
    max_residual: float | None
    tolerance: float
    passed: bool
    error: str | None = None

    def as_dict(self) -> dict:
        out = {"name": self.name, "tag": self.tag, "max_residual": self.max_residual,
               "tolerance": self.tolerance, "verdict": "pass" if self.passed else "fail"}
        if self.error is not None:
            out["error"] = self.error
        return out


def _angles(rng, n):
    return zip(rng.uniform(0.3, math.pi - 0.3, n), rng.uniform(0, 2 * math.pi, n))


def _points(rng, n):
    return [fields.SpacetimePoint(float(t), float(r), float(th), float(ph))
            for t, r, th, ph in zip(rng.uniform(0, 1, n), rng.uniform(1, 5, n),
                                    rng.uniform(0.4, 2.7, n), rng.uniform(0, 2 * math.pi, n))]


def _boson_specs(cfg: CertifyConfig, rng, kinds=("I", "II"), with_j0=True):
    out = []
    for J in range(1, cfg.J_max + 1):
        for kind in kinds:
            for d in (1, -1):
                for lam in (1, -1):
                    M = int(rng.integers(-J, J + 1))
                    out.append(fields.BosonModeSpec(cfg.epsilon, J, M, d, lam, kind, cfg.mass))
    if with_j0:
        out += [fields.BosonModeSpec(cfg.epsilon, 0, 0, d, lam, "J0", cfg.mass)
                for d in (1, -1) for lam in (1, -1)]
    return out


def _clifford(cfg, rng):
    basis = clifford.build_gamma_basis()
    return max(float(np.abs(basis.anticommutator(a, b) - 2 * clifford.ETA[a, b] * np.eye(4)).max())
               for a in range(4) for b in range(4))


def _kron(cfg, rng):
    worst = 0.0
    for a, b in ((0, 1), (0, 2), (0, 3), (1, 2), (3, 1), (3, 2)):
        s = clifford.sigma(a, b)
        big = np.kron(s, np.eye(4)) + np.kron(np.eye(4), s)
        for _ in range(cfg.points):
            U = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            oracle = (big @ U.reshape(16)).reshape(4, 4)
            worst = max(worst, clifford.norm(clifford.bilateral_generator(a, b, U) - oracle))
    return worst


def _identities(cfg, rng):
    worst = 0.0
    for J in range(1, max(cfg.J_max, 1) + 1):
        for M in range(-J, J + 1):
            for th, ph in _angles(rng, cfg.points):
                for kind in range(1, 7):
                    worst = max(worst, wigner.derivative_identity_residual(kind, J, M, th, ph))
    return worst


def _coupling(cfg, rng):
    worst = 0.0
    for J in range(0, cfg.J_max + 1):
        for M in range(-J, J + 1):
            for name, s in wigner.SPLIT_COUPLINGS:
                if J == 0 and s != 0:
                    continue
                c = wigner.coupling_expand(name, s, J, M)
                for th, ph in _angles(rng, cfg.points):
                    worst = max(worst, c.residual(th, ph))
    return worst


def _angular(cfg, rng):
    worst = 0.0
    for J in range(1, cfg.J_max + 1):
        for M in range(-J, J + 1):
            for th, ph in _angles(rng, 1):
                F = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
                worst = max(worst, fields.sigma_action_check(J, M, th, ph, F))
    return worst


def _master(cfg, rng):
    return max(fields.dk_residual(s, p, cfg.h) for s in _boson_specs(cfg, rng)
               for p in _points(rng, cfg.points))


def _parity(cfg, rng):
    worst = 0.0
    for s in _boson_specs(cfg, rng):
        for p in _points(rng, cfg.points):
            sign, mismatch = fields.parity_check(s, p)
            if sign != fields.expected_parity(s.J, s.delta_sign):
                return math.inf
            worst = max(worst, mismatch)
    return worst


def _radial(cfg, rng):
    worst = 0.0
    for k in (1, -1, 2, -2, 3):
        params = radial.RadialParams(cfg.epsilon, cfg.mass, k)
        pair = radial.closed_form_regular(params)
        traj = radial.integrate_radial(params, 0.1, 20.0, 1e-3, pair(0.1))
        worst = max(worst, traj.deviation(pair))
    return worst


def _octet(cfg, rng):
    worst = 0.0
    for J in range(1, cfg.J_max + 1):
        for kind in ("I", "II"):
            for d in (1, -1):
                for lam in (1, -1):
                    params = radial.RadialParams(cfg.epsilon, cfg.mass, radial.kappa_for(kind, J), lam, d)
                    pair = radial.closed_form_regular(params)
                    octet = radial.octet_from_pair(J, kind, lam, pair.f, pair.g)
                    for r in rng.uniform(0.5, 10, cfg.points):
                        worst = max(worst, radial.octet_residual(J, params, octet, float(r)))
    return worst


def _j0(cfg, rng):
    worst = 0.0
    for d in (1, -1):
        for lam in (1, -1):
            params = radial.RadialParams(cfg.epsilon, cfg.mass, 1, lam, d)
            pair = radial.closed_form_regular(params)
            funcs = (pair.f, pair.g, lambda r, l=lam: l * pair.f(r), lambda r, l=lam: l * pair.g(r))
            for r in rng.uniform(0.5, 10, cfg.points):
                worst = max(worst, radial.j0_system_residual(d, lam, params, funcs, float(r)))
    return worst


def _cancellation(cfg, rng):
    grid = np.linspace(0.05, math.pi - 0.05, 20)
    phis = np.linspace(0, 2 * math.pi, 20, endpoint=False)
    return max(fermion_map.cancellation_residual(float(t), float(p)) for t in grid for p in phis)


def _splitting(cfg, rng):
    return max(max(fermion_map.dirac_split_residual(s, p, cfg.h))
               for s in _boson_specs(cfg, rng) for p in _points(rng, max(1, cfg.points // 2)))


def _type_selection(cfg, rng):
    worst = 0.0
    for s in _boson_specs(cfg, rng, with_j0=False):
        for p in _points(rng, cfg.points):
            split = fermion_map.split_half_integer(s, p)
            worst = max(worst, clifford.norm(split.V_minus if s.kind == "I" else split.V_plus))
    return worst


def _expansion(kind):
    def run(cfg, rng):
        specs = [s for s in _boson_specs(cfg, rng, kinds=(kind,) if kind != "J0" else (),
                                         with_j0=kind == "J0")]
        return max(fermion_map.verify_expansion(s, p).max_residual
                   for s in specs for p in _points(rng, cfg.points))
    return run


def _coefficients(cfg, rng):
    worst = 0.0
    for J in range(1, cfg.J_max + 1):
        n = J * (J + 1)
        for M in range(-J, J + 1):
            a, b = fermion_map.expansion_coefficients(J, M, "plus")
            rho, sig = fermion_map.expansion_coefficients(J, M, "minus")
            # norm identities: alpha^2 + beta^2 = 2(J+1)/n, rho^2 + sigma^2 = 2J/n
            worst = max(worst, abs(a * a + b * b - 2 * (J + 1) / n), abs(rho * rho + sig * sig - 2 * J / n))
    return worst


def _curved(cfg, rng):
    worst = 0.0
    for J in range(1, 6):
        for chi in rng.uniform(0.05, math.pi - 0.05, cfg.points):
            worst = max(worst, abs(curved.obstruction_gap(J, float(chi), cfg.epsilon, cfg.mass)
                                   - math.tan(chi / 2)))
    return worst


CHECKS: tuple[Check, ...] = (
    Check("clifford-relations", "clifford-anticommutator", 0.0, _clifford),
    Check("bilateral-kron-equivalence", "bilateral-generator-kronecker", 1e-13, _kron),
    Check("d-derivative-identities", "wigner-first-order-identities", 1e-9, _identities),
    Check("half-integer-coupling", "half-angle-coupling", 1e-11, _coupling),
    Check("angular-operator-action", "angular-operator-row-swap", 1e-8, _angular),
    Check("master-equation", "dirac-kaehler-master-equation", 1e-6, _master),
    Check("parity-eigenvalue", "reflection-eigenvalue", 1e-10, _parity),
    Check("radial-closed-form-vs-rk4", "spherical-bessel-closed-form", 1e-8, _radial),
    Check("octet-reduction", "eight-function-reduction", 1e-8, _octet),
    Check("j0-radial-system", "scalar-sector-radial-system", 1e-8, _j0),
    Check("connection-cancellation", "spinor-connection-cancellation", 1e-9, _cancellation),
    Check("dirac-splitting", "four-dirac-column-splitting", 1e-6, _splitting),
    Check("type-selection", "half-integer-type-selection", 1e-12, _type_selection),
    Check("expansion-j-plus-half", "upper-branch-expansion", 1e-10, _expansion("I")),
    Check("expansion-j-minus-half", "lower-branch-expansion", 1e-10, _expansion("II")),
    Check("expansion-j-zero", "scalar-sector-expansion", 1e-10, _expansion("J0")),
    Check("expansion-coefficients", "expansion-coefficient-closed-forms", 1e-13, _coefficients),
    Check("curved-obstruction-gap", "curved-space-substitution-gap", 1e-12, _curved),
)


def _run_one(check: Check, cfg: CertifyConfig, index: int, tolerance: float | None) -> CheckResult:
    # one independent stream per check, so worker scheduling never changes the draws
    rng = np.random.default_rng([cfg.seed, index])
    tol = check.tolerance if tolerance is None else tolerance
    try:
        value = float(check.run(cfg, rng))
    except Exception as exc:  # recorded per check, never fatal for the sweep
        return CheckResult(check.name, check.tag, None, tol, False, f"{type(exc).__name__}: {exc}")
    return CheckResult(check.name, check.tag, value, tol, value <= tol)


def run_checks(cfg: CertifyConfig, tolerance: float | None = None, workers: int = 1,
               only: tuple[str, ...] | None = None) -> list[CheckResult]:
    selected = [(i, c) for i, c in enumerate(CHECKS) if only is None or c.name in only]
    if workers <= 1:
        return [_run_one(c, cfg, i, tolerance) for i, c in selected]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda ic: _run_one(ic[1], cfg, ic[0], tolerance), selected))
