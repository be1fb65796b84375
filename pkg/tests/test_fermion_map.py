import math

import numpy as np
import pytest

from dkwaves import clifford, fermion_map as fm, fields
from dkwaves.errors import DomainError, InvalidSpecError
from dkwaves.fields import BosonModeSpec, DiracModeSpec, SpacetimePoint
from dkwaves.radial import closed_form_regular

from conftest import random_points

P0 = SpacetimePoint(0.2, 2.3, 1.1, 0.5)
SIGNS = [(1, 1), (1, -1), (-1, 1), (-1, -1)]

# entrywise signs of each nonzero half relative to parity-even Dirac waves
REFERENCE_GRIDS = {
    ("I", 1, 1): ["++++", "++++", "++++", "++++"],
    ("I", 1, -1): ["--++", "--++", "++--", "++--"],
    ("I", -1, 1): ["++++", "++++", "----", "----"],
    ("I", -1, -1): ["--++", "--++", "--++", "--++"],
    ("II", 1, 1): ["+-+-", "+-+-", "-+-+", "-+-+"],
    ("II", 1, -1): ["-++-", "-++-", "-++-", "-++-"],
    ("II", -1, 1): ["+-+-", "+-+-", "+-+-", "+-+-"],
    ("II", -1, -1): ["-++-", "-++-", "+--+", "+--+"],
}


def test_gauge_matrix_is_special_unitary():
    for th, ph in [(0.3, 0.1), (1.5, 4.0), (2.9, 6.0)]:
        g = fm.gauge_B(th, ph)
        assert g.unitarity_defect() < 1e-15
        assert abs(g.det - 1) < 1e-15


def test_gauge_matrix_is_spin_half_rotation():
    from dkwaves.wigner import wigner_D
    th, ph = 0.9, 2.2
    B = fm.gauge_B(th, ph).B
    ms = (0.5, -0.5)
    oracle = np.array([[wigner_D(0.5, a, b, ph, th) for b in ms] for a in ms])
    assert np.allclose(B, oracle, atol=1e-15)


def test_connection_cancellation_grid():
    ths = np.linspace(0.05, math.pi - 0.05, 20)
    phs = np.linspace(0, 2 * math.pi, 20, endpoint=False)
    assert max(fm.cancellation_residual(t, p) for t in ths for p in phs) < 1e-9


def test_polar_connection_with_sigma12_does_not_cancel():
    def gamma(alpha, theta):
        return clifford.sigma(1, 2) if alpha == "theta" else fm.connection(alpha, theta)

    assert fm.cancellation_residual(1.0, 0.3, gamma=gamma) > 0.5


def test_connection_rejects_unknown_axis():
    with pytest.raises(DomainError):
        fm.connection("x", 1.0)


@pytest.mark.parametrize("kind", ["I", "II"])
@pytest.mark.parametrize("J", [1, 2, 3])
@pytest.mark.parametrize("delta,lam", SIGNS)
def test_every_column_solves_dirac(kind, J, delta, lam, rng):
    spec = BosonModeSpec(1.25, J, int(rng.integers(-J, J + 1)), delta, lam, kind)
    for p in random_points(rng, 2):
        assert max(fm.dirac_split_residual(spec, p)) < 1e-6


@pytest.mark.parametrize("delta,lam", SIGNS)
def test_j0_columns_solve_dirac(delta, lam):
    spec = BosonModeSpec(1.25, 0, 0, delta, lam, "J0")
    assert max(fm.dirac_split_residual(spec, P0)) < 1e-6


def test_first_index_rotation_does_not_split():
    spec = BosonModeSpec(1.25, 2, 1)
    assert max(fm.dirac_split_residual(spec, P0, ordering="first-index")) > 1e-2


def test_transposed_sign_gauge_matrix_does_not_split():
    spec = BosonModeSpec(1.25, 2, 1)
    radial = closed_form_regular(spec.radial_params)

    def field(t, r, th, ph):
        c, s, u = math.cos(th / 2), math.sin(th / 2), np.exp(-0.5j * ph)
        B = np.array([[c * u, s * u], [-s / u, c / u]])
        S = np.kron(np.eye(2), B)
        return fields.eval_U(spec, SpacetimePoint(t, r, th, ph), radial) @ S.T

    res = fm.dirac_operator(field, P0, spec.mass)
    assert clifford.norm(res) / clifford.norm(field(*P0.as_tuple())) > 1e-2


def test_unknown_ordering():
    with pytest.raises(InvalidSpecError):
        fm.transform_to_V(np.eye(4), 1.0, 0.0, ordering="diagonal")


def test_inverse_transform_round_trips(rng):
    U = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    V = fm.transform_to_V(U, 1.0, 0.3)
    assert np.allclose(fm.transform_to_V(V, 1.0, 0.3, inverse=True), U)


@pytest.mark.parametrize("kind,J", [("I", 1), ("I", 3), ("II", 1), ("II", 2), ("J0", 0)])
def test_split_is_complete(kind, J, rng):
    for M in range(-J, J + 1):
        spec = BosonModeSpec(1.25, J, M, 1, -1, kind)
        for p in random_points(rng, 2):
            V = fm.transform_to_V(fields.eval_U(spec, p), p.theta, p.phi)
            assert clifford.norm(fm.split_half_integer(spec, p).total - V) < 1e-13 * clifford.norm(V)


@pytest.mark.parametrize("kind", ["I", "II"])
@pytest.mark.parametrize("J", [1, 2, 3])
@pytest.mark.parametrize("delta,lam", SIGNS)
def test_type_selection(kind, J, delta, lam, rng):
    for M in range(-J, J + 1):
        spec = BosonModeSpec(1.25, J, M, delta, lam, kind)
        split = fm.split_half_integer(spec, random_points(rng, 1)[0])
        vanishing = split.V_minus if kind == "I" else split.V_plus
        surviving = split.V_plus if kind == "I" else split.V_minus
        assert clifford.norm(vanishing) < 1e-12
        assert clifford.norm(surviving) > 1e-3


@pytest.mark.parametrize("kind,branch", [("I", "plus"), ("II", "minus")])
@pytest.mark.parametrize("J", [1, 2, 3])
def test_table_form_reproduces_split(kind, branch, J, rng):
    for M in range(-J, J + 1):
        for delta, lam in SIGNS:
            spec = BosonModeSpec(1.25, J, M, delta, lam, kind)
            p = random_points(rng, 1)[0]
            split = fm.split_half_integer(spec, p)
            half = split.V_plus if branch == "plus" else split.V_minus
            assert clifford.norm(fm.table_form(spec, p, branch) - half) < 1e-13


@pytest.mark.parametrize("kind", ["I", "II", "J0"])
@pytest.mark.parametrize("delta,lam", SIGNS)
def test_expansion_identities(kind, delta, lam, rng):
    Js = [0] if kind == "J0" else [1, 2, 3]
    for J in Js:
        for M in range(-J, J + 1):
            spec = BosonModeSpec(1.25, J, M, delta, lam, kind)
            for p in random_points(rng, 3):
                rep = fm.verify_expansion(spec, p)
                assert rep.max_residual < 1e-10


def test_expansion_labels():
    # (Delta, lambda) -> Dirac parity label, per branch
    assert fm.EXPANSION_CASES[("plus", 1, -1)][0] == -1
    assert fm.EXPANSION_CASES[("minus", 1, 1)][0] == -1
    assert fm.EXPANSION_CASES[("minus", -1, 1)][0] == 1
    assert len(fm.EXPANSION_CASES) == 12


@pytest.mark.parametrize("key", sorted(REFERENCE_GRIDS))
def test_sign_grids(key):
    kind, delta, lam = key
    grid = fm.sign_grid(BosonModeSpec(1.25, 2, 0, delta, lam, kind), P0)
    expected = np.array([[1 if ch == "+" else -1 for ch in row] for row in REFERENCE_GRIDS[key]])
    assert np.array_equal(grid, expected)


@pytest.mark.parametrize("J", [1, 2, 4])
def test_expansion_coefficients_match_measured_ratio(J):
    # |V_ik / Psi_ik| read off the split, independent of the closed forms
    p = SpacetimePoint(0.0, 1.9, 1.3, 0.2)
    for kind, branch in (("I", "plus"), ("II", "minus")):
        for M in range(-J, J + 1):
            spec = BosonModeSpec(1.25, J, M, 1, 1, kind)
            radial = closed_form_regular(spec.radial_params)
            split = fm.split_half_integer(spec, p, radial)
            half = split.V_plus if branch == "plus" else split.V_minus
            j = J + 0.5 if branch == "plus" else J - 0.5
            psi_radial = radial if branch == "plus" else (lambda r: (radial(r)[1], -radial(r)[0]))
            c = fm.expansion_coefficients(J, M, branch)
            for k in (0, 1):
                m = M - 0.5 if k == 0 else M + 0.5
                if abs(m) > j:
                    assert c[k] == 0
                    continue
                delta = fm.EXPANSION_CASES[(branch, 1, 1)][0]
                psi = fields.eval_Psi(DiracModeSpec(1.25, j, m, delta, k + 1), p, psi_radial)
                i = int(np.argmax(np.abs(psi)))
                assert abs(abs(half[i, k] / psi[i]) - c[k]) < 1e-13


def test_expansion_coefficients_closed_forms():
    for J in range(1, 6):
        n = J * (J + 1)
        for M in range(-J, J + 1):
            a, b = fm.expansion_coefficients(J, M, "plus")
            r, s = fm.expansion_coefficients(J, M, "minus")
            assert a * a + b * b == pytest.approx(2 * (J + 1) / n, abs=1e-14)
            assert r * r + s * s == pytest.approx(2 * J / n, abs=1e-14)


def test_expansion_coefficients_reject_bad_input():
    with pytest.raises(DomainError):
        fm.expansion_coefficients(0, 0, "plus")
    with pytest.raises(InvalidSpecError):
        fm.expansion_coefficients(1, 0, "middle")


def test_unshifted_numerator_fails_upper_expansion():
    # alpha with J-M-1 in place of J-M+1 breaks the J=2, M=0 expansion
    J, M = 2, 0
    spec = BosonModeSpec(1.25, J, M)
    split = fm.split_half_integer(spec, P0)
    psi = fields.eval_Psi(DiracModeSpec(1.25, J + 0.5, M - 0.5, 1, 1), P0)
    wrong = math.sqrt((J - M - 1) / (J * (J + 1)))
    good = fm.expansion_coefficients(J, M, "plus")[0]
    assert np.linalg.norm(split.V_plus[:, 0] - good * psi) < 1e-12
    assert np.linalg.norm(split.V_plus[:, 0] - wrong * psi) > 1e-3
