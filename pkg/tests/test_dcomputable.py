import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from genconc.concurrence import eof_from_d, gen_concurrence_d, spectrum_structure
from genconc.dcomputable import (
    DComputableParams,
    SymFamilyParams,
    amplitude_matrix,
    bracket_form,
    build_A,
    build_A4_sym,
    build_J,
    d_closed_form,
    d_sym_closed,
    family_project,
    norm_form,
    normalize_params,
    random_params,
    verify_identities,
)
from genconc.errors import DegenerateInputError, DomainError, NotInFamilyError, ValidationError
from genconc.states import eof_pure, make_pure

R2 = 2**-0.5


def rec(k, a=0, c=0, d=0, **ladder):
    pairs = [(ladder.get(f"b{i}", 0), ladder.get(f"c{i}", 0)) for i in range(1, k + 1)]
    return DComputableParams(a, c, d, tuple(pairs))


def char_poly_eigs(nrm, br2):
    """Roots of lambda^2 - ||A|| lambda + |[A]|^2."""
    disc = np.sqrt(max(nrm * nrm - 4 * br2, 0.0))
    return (nrm + disc) / 2, (nrm - disc) / 2


def test_build_J_displayed():
    np.testing.assert_array_equal(build_J(1), [[0, 1], [-1, 0]])
    np.testing.assert_array_equal(
        build_J(2), [[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]]
    )
    with pytest.raises(DomainError):
        build_J(0)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_build_J_structure(k):
    j = build_J(k)
    assert j.shape == (2**k, 2**k)
    np.testing.assert_array_equal(j.T @ j, np.eye(2**k))
    assert set(np.unique(j)) <= {-1.0, 0.0, 1.0}
    assert np.all(np.count_nonzero(j, axis=0) == 1) and np.all(np.count_nonzero(j, axis=1) == 1)
    # signed anti-diagonal
    assert np.all(np.fliplr(j) == np.diag(np.diag(np.fliplr(j))))


def test_build_J8_recursion():
    j4 = build_J(2)
    z = np.zeros((4, 4))
    np.testing.assert_array_equal(build_J(3), np.block([[z, j4], [j4.T, z]]))


def test_A4_matches_display():
    a, c, d, b1, c1 = 1, 2, 3, 4, 5
    want = [[0, b1, a, -c], [-b1, 0, c, d], [-a, -c, 0, -c1], [c, -d, c1, 0]]
    np.testing.assert_array_equal(amplitude_matrix(rec(1, a, c, d, b1=b1, c1=c1)), want)
    psi = build_A(rec(1, b1=0.5, c1=0.5), normalize=False)
    np.testing.assert_allclose(psi.a, [[0, .5, 0, 0], [-.5, 0, 0, 0], [0, 0, 0, -.5], [0, 0, .5, 0]])


def test_A8_unnormalized_spectrum():
    # ||A|| = 1/2, [A] = -1/4: (lambda^2 - lambda/2 + 1/16)^4 -> every eigenvalue 1/4
    a = amplitude_matrix(rec(2, b2=0.5, c2=0.5))
    assert a.shape == (8, 8)
    np.testing.assert_allclose(np.linalg.eigvalsh(a @ a.conj().T), [0.25] * 8, atol=1e-15)


def test_degenerate_params():
    with pytest.raises(DegenerateInputError):
        build_A(rec(2))
    with pytest.raises(DegenerateInputError):
        build_A4_sym(SymFamilyParams())
    with pytest.raises(ValidationError):
        DComputableParams.from_vector([1, 2, 3, 4, 5], k=2)


def test_bracket_examples():
    assert bracket_form(rec(1, b1=0.5, c1=0.5)) == pytest.approx(0.25)
    x = 0.3 + 0.1j
    assert bracket_form(rec(2, b2=x, c2=x)) == pytest.approx(-x * x)
    assert bracket_form(rec(3)) == 0


def test_norm_examples():
    assert norm_form(rec(1, b1=0.5, c1=0.5)) == pytest.approx(0.5)
    assert norm_form(rec(2, b2=0.5, c2=0.5)) == pytest.approx(0.5)
    assert norm_form(rec(2)) == 0


def test_d_closed_form_examples():
    assert d_closed_form(rec(1, b1=0.5, c1=0.5)) == pytest.approx(1)
    with pytest.raises(ValidationError):
        d_closed_form(rec(2, b2=0.5, c2=0.5))
    s = 1 / (2 * np.sqrt(2))
    assert d_closed_form(rec(2, b2=s, c2=s)) == pytest.approx(1)
    assert d_closed_form(normalize_params(rec(2, a=1, b2=1))) == 0


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_norm_recursion_against_char_poly(rng, k):
    for _ in range(20):
        p = random_params("recursive", k, rng, normalize=False)
        a = amplitude_matrix(p)
        w = np.linalg.eigvalsh(a @ a.conj().T)
        l1, l2 = char_poly_eigs(norm_form(p), abs(bracket_form(p)) ** 2)
        scale = w.max()
        assert abs(w.max() - l1) < 1e-10 * scale
        assert abs(w.min() - l2) < 1e-10 * scale
        assert abs(np.trace(a @ a.conj().T).real - 2**k * norm_form(p)) < 1e-10 * scale * 2**k


def test_signed_recursion_is_the_right_bracket(rng):
    # The unsigned sum b_k c_k + ... + b_1 c_1 + ad + c^2 agrees for k <= 3 only.
    for k in (1, 2, 3, 4, 5):
        p = random_params("recursive", k, rng, normalize=False)
        a = amplitude_matrix(p)
        w = np.linalg.eigvalsh(a @ a.conj().T)
        g = np.sqrt(w.min() * w.max())
        unsigned = abs(p.a * p.d + p.c**2 + sum(b * c for b, c in p.ladder))
        assert abs(abs(bracket_form(p)) - g) < 1e-9 * g
        if k <= 3:
            assert abs(unsigned - g) < 1e-9 * g
        else:
            assert abs(unsigned - g) > 1e-3 * g


def test_sym_family_examples():
    cases = [
        (SymFamilyParams(b=0.5, e=0.5), 1, 2),
        (SymFamilyParams(b=R2), 0, 1),
        (SymFamilyParams(b1=0.5, c1=0.5), 1, 2),
    ]
    for p, d, e in cases:
        psi = build_A4_sym(p, normalize=False)
        s = spectrum_structure(psi)
        assert (s.mult1, s.mult2) == (2, 2)
        assert d_sym_closed(p) == pytest.approx(d, abs=1e-15)
        assert gen_concurrence_d(s) == pytest.approx(d, abs=1e-7)
        assert eof_pure(psi) == pytest.approx(e, abs=1e-12)
    assert d_sym_closed(SymFamilyParams(a1=0.5, d1=0.5)) == pytest.approx(1)
    assert d_sym_closed(SymFamilyParams(b1=0.5, c1=-0.5)) == pytest.approx(1)


def test_sym_pattern():
    a = amplitude_matrix(SymFamilyParams(1, 2, 3, 4, 5, 6))
    np.testing.assert_array_equal(np.diag(a), 0)
    np.testing.assert_array_equal(a, [[0, 5, 1, 2], [-5, 0, 3, 4], [1, 3, 0, -6], [2, 4, 6, 0]])


def test_sym_determinant_identity(rng):
    for _ in range(50):
        p = random_params("sym", 1, rng)
        a = amplitude_matrix(p)
        det = np.linalg.det(a @ a.conj().T).real
        want = abs(p.b1 * p.c1 - p.a1 * p.d1 + p.b * p.e) ** 4
        assert abs(det - want) <= 1e-9 * want
        assert d_sym_closed(p) == pytest.approx(gen_concurrence_d(spectrum_structure(make_pure(a))), abs=1e-10)


@pytest.mark.parametrize("kind,k", [("sym", 1), ("recursive", 1), ("recursive", 2), ("recursive", 3)])
def test_family_project_round_trip(rng, kind, k):
    p = random_params(kind, k, rng)
    psi = make_pure(amplitude_matrix(p))
    back = family_project(psi, k, kind, tol=1e-12)
    assert np.abs(back.as_vector() - p.as_vector()).max() < 1e-12


def test_family_project_rejects_outside():
    bell4 = make_pure(np.eye(4), normalize=True)
    with pytest.raises(NotInFamilyError) as info:
        family_project(bell4, 1, "recursive")
    assert info.value.residual == pytest.approx(1.0)


def test_family_project_linear_closure(rng):
    p1, p2 = random_params("recursive", 2, rng), random_params("recursive", 2, rng)
    mix = make_pure(amplitude_matrix(p1) + (0.3 - 0.7j) * amplitude_matrix(p2), normalize=True)
    family_project(mix, 2, "recursive", tol=1e-12)


@pytest.mark.parametrize("k,tol", [(1, 1e-9), (2, 1e-9), (3, 1e-8)])
def test_verify_identities(rng, k, tol):
    for _ in range(100):
        rep = verify_identities(random_params("recursive", k, rng, normalize=False), tol)
        assert rep.passed, rep
        assert rep.cluster_sizes in ((2**k, 2**k), (2 ** (k + 1),))


def test_verify_identities_reports_violation():
    # A matrix built with the unsigned closed form as its bracket would break the identity;
    # here we check a genuine report carries the residuals rather than raising.
    rep = verify_identities(rec(3, a=1, b1=1, b2=0.5, c3=0.2), 1e-8)
    assert rep.passed and rep.max_residual < 1e-8


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_closed_form_matches_spectrum(k, seed):
    p = random_params("recursive", k, np.random.default_rng(seed))
    psi = build_A(p, normalize=False)
    s = spectrum_structure(psi)
    n = 2**k
    assert (s.mult1, s.mult2) == (n, n)
    d = d_closed_form(p)
    assert abs(d - 2 * n * np.sqrt(s.lambda1 * s.lambda2)) < 1e-9
    assert abs(eof_from_d(d, n) - eof_pure(psi)) < 1e-8
