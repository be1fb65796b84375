import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from dkwaves import wigner
from dkwaves.errors import DomainError


def rotation_oracle(J2, theta):
    """``exp(-i theta J_y)`` in the basis m = J, J-1, ..., -J built from ladder operators."""
    ms = [Fraction(J2, 2) - k for k in range(J2 + 1)]
    j = Fraction(J2, 2)
    Jp = np.zeros((J2 + 1, J2 + 1))
    for k in range(1, J2 + 1):  # <m+1| J+ |m>
        m = ms[k]
        Jp[k - 1, k] = math.sqrt(float(j * (j + 1) - m * (m + 1)))
    Jy = (Jp - Jp.T) / 2j
    return ms, expm(-1j * theta * Jy)


@pytest.mark.parametrize("J2", [1, 2, 3, 4, 7, 10, 16])
def test_small_d_matches_rotation_matrix_oracle(J2):
    theta = 1.234
    ms, R = rotation_oracle(J2, theta)
    for a, m1 in enumerate(ms):
        for b, m2 in enumerate(ms):
            got = wigner.small_d(Fraction(J2, 2), m1, m2, theta)
            assert abs(got - R[a, b].real) < 1e-12
            assert abs(R[a, b].imag) < 1e-12


@settings(max_examples=80, deadline=None)
@given(J2=st.integers(0, 24), data=st.data(), theta=st.floats(0, math.pi))
def test_jacobi_and_sum_paths_agree(J2, data, theta):
    a2 = data.draw(st.sampled_from(range(-J2, J2 + 1, 2)))
    b2 = data.draw(st.sampled_from(range(-J2, J2 + 1, 2)))
    J, m1, m2 = Fraction(J2, 2), Fraction(a2, 2), Fraction(b2, 2)
    x = wigner.small_d(J, m1, m2, theta, method="jacobi")
    y = wigner.small_d(J, m1, m2, theta, method="sum")
    assert abs(x - y) < 1e-11


@pytest.mark.parametrize("J", [Fraction(1, 2), 1, Fraction(5, 2), 4])
def test_symmetry_and_orthogonality(J, rng):
    J2 = int(2 * J)
    ms = [Fraction(J2, 2) - k for k in range(J2 + 1)]
    for theta in rng.uniform(0, math.pi, 3):
        d = np.array([[wigner.small_d(J, a, b, theta) for b in ms] for a in ms])
        assert np.allclose(d @ d.T, np.eye(J2 + 1), atol=1e-13)
        for i, a in enumerate(ms):
            for k, b in enumerate(ms):
                assert abs(d[i, k] - (-1) ** int(a - b) * d[k, i]) < 1e-13


def test_wigner_D_phase_convention():
    J, m, s, phi, theta = 2, 1, -1, 0.7, 0.9
    assert np.isclose(wigner.wigner_D(J, m, s, phi, theta),
                      np.exp(-1j * m * phi) * wigner.small_d(J, m, s, theta))


def test_spin_half_closed_form():
    t = 0.8
    assert np.isclose(wigner.small_d(0.5, 0.5, 0.5, t), math.cos(t / 2))
    assert np.isclose(wigner.small_d(0.5, 0.5, -0.5, t), -math.sin(t / 2))
    assert np.isclose(wigner.small_d(0.5, -0.5, 0.5, t), math.sin(t / 2))


@pytest.mark.parametrize("bad", [(1, 2, 0), (1, 0.5, 0.5), (0.5, 0.5, 0), (-1, 0, 0)])
def test_invalid_indices_raise(bad):
    with pytest.raises(DomainError):
        wigner.small_d(*bad, 0.3)


@pytest.mark.parametrize("kind", range(1, 7))
@pytest.mark.parametrize("J", [1, 2, 5])
def test_derivative_identities(kind, J, rng):
    for M in range(-J, J + 1):
        for th, ph in zip(rng.uniform(0.2, 2.9, 5), rng.uniform(0, 6.28, 5)):
            assert wigner.derivative_identity_residual(kind, J, M, th, ph) < 1e-9


def test_identity_near_pole_is_rejected():
    with pytest.raises(DomainError):
        wigner.identity_sides(1, 2, 0, 1e-9, 0.0)


def test_identity_with_wrong_b_constant_fails():
    # b = sqrt((J-1)(J+2)); replacing it by sqrt(J(J+1)) breaks the first identity
    J, M, th, ph = 3, 1, 1.0, 0.3
    lhs, rhs = wigner.identity_sides(1, J, M, th, ph)
    D = lambda s: complex(wigner.wigner_D(J, -M, s, ph, th))  # noqa: E731
    a = math.sqrt(J * (J + 1))
    wrong = 0.5 * (a * D(-2) - a * D(0))
    assert abs(lhs - rhs) < 1e-9
    assert abs(lhs - wrong) > 1e-3


@pytest.mark.parametrize("name,s", wigner.SPLIT_COUPLINGS)
@pytest.mark.parametrize("J", range(0, 7))
def test_coupling_expansions(name, s, J, rng):
    if J == 0 and s != 0:
        pytest.skip("J = 0 admits only s = 0")
    for M in range(-J, J + 1):
        c = wigner.coupling_expand(name, s, J, M)
        th, ph = rng.uniform(0.05, 3.1, 8), rng.uniform(0, 6.28, 8)
        assert c.residual(th, ph) < 1e-11


@pytest.mark.parametrize("J", range(1, 7))
def test_unreduced_normalisation_is_off_by_sqrt_2J_plus_1(J, rng):
    # coefficients written with the square root over the whole fraction
    th, ph = rng.uniform(0.3, 2.8), rng.uniform(0, 6.28)
    for s in (0, 1):
        for M in range(-J, J + 1):
            good = wigner.coupling_expand("cos+", s, J, M)
            if s == 0:
                lo2, hi2 = J * (J - M), (J + 1) * (J + M + 1)
            else:
                lo2, hi2 = (J + 1) * (J - M), J * (J + M + 1)
            raw_lo, raw_hi = math.sqrt(lo2 / (2 * J + 1)), math.sqrt(hi2 / (2 * J + 1))
            assert math.isclose(raw_lo, good.c_minus * math.sqrt(2 * J + 1), abs_tol=1e-15)
            assert math.isclose(raw_hi, good.c_plus * math.sqrt(2 * J + 1), rel_tol=1e-14)
            raw = wigner.Coupling("cos+", J, M, s, raw_lo, raw_hi, good.m, good.s_target)
            assert raw.residual(th, ph) > 1e-3


@pytest.mark.parametrize("name,s", wigner.SPLIT_COUPLINGS)
def test_coefficients_match_least_squares_fit(name, s, rng):
    # fit lhs over the two half-integer D-functions on sampled angles
    J = 3
    th, ph = rng.uniform(0.1, 3.0, 40), rng.uniform(0, 6.28, 40)
    for M in range(-J, J + 1):
        c = wigner.coupling_expand(name, s, J, M)
        lhs = wigner.half_angle_factor(name, th, ph) * wigner.wigner_D(J, -M, s, ph, th)
        basis = []
        for j in (J - 0.5, J + 0.5):
            ok = abs(c.m) <= j and abs(c.s_target) <= j
            basis.append(wigner.wigner_D(j, c.m, c.s_target, ph, th) if ok else np.zeros_like(th))
        A = np.stack(basis, axis=1)
        fit = np.linalg.lstsq(A, lhs, rcond=None)[0]
        assert abs(fit[0] - c.c_minus) < 1e-12
        assert abs(fit[1] - c.c_plus) < 1e-12


def test_half_angle_factor_matches_spin_half_D():
    th, ph = 1.1, 0.6
    for name, (sign, m1, s1) in wigner.COUPLING_FACTORS.items():
        assert np.isclose(wigner.half_angle_factor(name, th, ph), sign * wigner.wigner_D(0.5, m1, s1, ph, th))


def test_coupling_rejects_bad_input():
    with pytest.raises(DomainError):
        wigner.coupling_expand("tan+", 0, 1, 0)
    with pytest.raises(DomainError):
        wigner.coupling_expand("cos+", 1, 0, 0)
    with pytest.raises(DomainError):
        wigner.coupling_expand("cos+", 0, 1, 2)
