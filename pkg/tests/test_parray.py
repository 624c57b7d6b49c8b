"""Parameter array axioms, constructions, intertwiner, polynomials,
fingerprint.

Frozen expectations for the 4x4 Krawtchouk-type example were derived by
hand: the split products (3, 4, 3), the change-of-basis S to split form,
and the u_i(theta_j) table matching the eigenvector matrix P columnwise.
"""

import random

import pytest
from hypothesis import given, settings, strategies as st

from leonardpairs.errors import (
    InvalidParameterArrayError,
    UnsupportedFieldOperationError,
)
from leonardpairs.field import (
    FieldElement,
    PrimeField,
    QuadraticExtension,
    Rationals,
)
from leonardpairs.matrix import (
    ExactMatrix,
    SHAPE_IRREDUCIBLE_TRIDIAGONAL,
    conjugate,
    is_irreducible_tridiagonal,
    joint_intertwiner_basis,
    shape,
)
from leonardpairs.parray import (
    FAMILY_BANNAI_ITO,
    FAMILY_CHAR2,
    FAMILY_CLASSICAL,
    FAMILY_Q_TYPE,
    FAMILY_SMALL_DIAMETER,
    ParameterArray,
    affine_transform,
    check_poly_characterization,
    classify_beta,
    construct_bidiagonal,
    construct_tridiagonal,
    find_g_matrix,
    fingerprint,
    poly_u,
    poly_u_dual,
    reversal_intertwiner_systems,
    tridiagonal_products,
    validate,
)

from corpusgen import array_from_eigen_data, random_valid_array, theta_by_recurrence

Q = Rationals()

THETA = (3, 1, -1, -3)
VARPHI = (-6, -8, -6)
PHI = (6, 8, 6)

FIXTURE_A = [[0, 3, 0, 0], [1, 0, 2, 0], [0, 2, 0, 1], [0, 0, 3, 0]]
FIXTURE_P = [[1, 3, 3, 1], [1, 1, -1, -1], [1, -1, -1, 1], [1, -3, 3, -1]]
# change of basis to split form, computed by iterating A - theta_h I on the
# first primitive vector
FIXTURE_S = [[1, -3, 6, -6], [0, 1, -4, 6], [0, 0, 2, -6], [0, 0, 0, 6]]


def krawtchouk_array(field=Q) -> ParameterArray:
    return ParameterArray(field, THETA, THETA, VARPHI, PHI)


def test_lengths_checked():
    with pytest.raises(InvalidParameterArrayError):
        ParameterArray(Q, (1, 2), (1,), (), ())
    with pytest.raises(InvalidParameterArrayError):
        ParameterArray(Q, (1, 2), (3, 4), (5,), ())
    with pytest.raises(InvalidParameterArrayError):
        ParameterArray(Q, (), (), (), ())


def test_fixture_array_is_valid():
    report = validate(krawtchouk_array())
    assert report.valid
    assert [a.name for a in report.axioms] == ["PA1", "PA2", "PA3", "PA4", "PA5"]
    assert all(a.passed and a.evaluated for a in report.axioms)
    assert report.failing() == ()


def test_pa1_failure_gates_pa3_to_pa5():
    pa = ParameterArray(Q, (3, 1, 3, -3), THETA, VARPHI, PHI)
    report = validate(pa)
    assert not report.valid
    pa1 = report.axiom("PA1")
    assert not pa1.passed and pa1.first_failure == 2
    assert "theta[0] == theta[2]" in pa1.detail
    for name in ("PA3", "PA4", "PA5"):
        status = report.axiom(name)
        assert not status.evaluated and not status.passed
        assert "PA1" in status.detail
    # duplicate in the dual sequence alone also trips PA1
    dual = ParameterArray(Q, THETA, (3, 1, 1, -3), VARPHI, PHI)
    assert "theta*[1] == theta*[2]" in validate(dual).axiom("PA1").detail


def test_pa2_failure_reported_with_index():
    pa = ParameterArray(Q, THETA, THETA, (-6, 0, -6), PHI)
    report = validate(pa)
    status = report.axiom("PA2")
    assert not status.passed and status.first_failure == 2
    assert status.detail == "varphi_2 == 0"
    # PA3 is still evaluated (PA1 holds) and fails at the zero
    assert report.axiom("PA3").evaluated
    assert not report.axiom("PA3").passed

    pa = ParameterArray(Q, THETA, THETA, VARPHI, (6, 8, 0))
    assert validate(pa).axiom("PA2").detail == "phi_3 == 0"


def test_pa3_mutation_isolated():
    pa = ParameterArray(Q, THETA, THETA, (-6, -7, -6), PHI)
    report = validate(pa)
    assert report.failing() == ("PA3",)
    status = report.axiom("PA3")
    assert status.first_failure == 2
    assert "index 2" in status.detail


def test_pa4_mutation_isolated():
    pa = ParameterArray(Q, THETA, THETA, VARPHI, (6, 9, 6))
    report = validate(pa)
    assert report.failing() == ("PA4",)
    assert report.axiom("PA4").first_failure == 2


def test_pa5_failure_detected():
    # theta with unequal ratios: 5 breaks the arithmetic progression pattern
    theta = (0, 1, 2, 3, 5)
    pa = ParameterArray(Q, theta, (0, 1, 2, 3, 4), (1, 1, 1, 1), (1, 1, 1, 1))
    report = validate(pa)
    assert not report.axiom("PA5").passed
    # mismatch against the dual ratio is reported with the index
    assert "index" in report.axiom("PA5").detail


def test_small_diameter_arrays():
    d0 = ParameterArray(Q, (5,), (7,), (), ())
    assert validate(d0).valid
    assert fingerprint(d0).family == FAMILY_SMALL_DIAMETER

    d1 = ParameterArray(Q, (0, 1), (0, 1), (1,), (2,))
    assert validate(d1).valid

    d2 = ParameterArray(Q, (0, 1, 2), (0, 1, 3), (-1, -2), (1, 2))
    assert validate(d2).valid
    fp = fingerprint(d2)
    assert fp.family == FAMILY_SMALL_DIAMETER
    assert fp.beta is None and fp.beta_plus_one is None


def test_bidiagonal_construction_frozen():
    a, a_star = construct_bidiagonal(krawtchouk_array())
    assert a == ExactMatrix(
        Q, [[3, 0, 0, 0], [1, 1, 0, 0], [0, 1, -1, 0], [0, 0, 1, -3]]
    )
    assert a_star == ExactMatrix(
        Q, [[3, -6, 0, 0], [0, 1, -8, 0], [0, 0, -1, -6], [0, 0, 0, -3]]
    )


def test_split_basis_conjugation_recovers_bidiagonal_pair():
    # S^-1 A S and S^-1 A* S give exactly the canonical bidiagonal pair
    a = ExactMatrix(Q, FIXTURE_A)
    a_star = ExactMatrix.diagonal(Q, THETA)
    s = ExactMatrix(Q, FIXTURE_S)
    b, c = construct_bidiagonal(krawtchouk_array())
    assert conjugate(a, s) == b
    assert conjugate(a_star, s) == c


def test_tridiagonal_construction_frozen():
    pa = krawtchouk_array()
    products = tridiagonal_products(pa)
    assert [p.payload for p in products] == [Q.coerce(v) for v in (3, 4, 3)]

    a, a_star = construct_tridiagonal(pa)
    assert a == ExactMatrix(
        Q, [[0, 3, 0, 0], [1, 0, 4, 0], [0, 1, 0, 3], [0, 0, 1, 0]]
    )
    assert a_star == ExactMatrix.diagonal(Q, THETA)
    assert shape(a) == SHAPE_IRREDUCIBLE_TRIDIAGONAL

    # trace is basis independent, so it must match the eigenvalue sum
    assert a.trace() == Q.zero


def test_tridiagonal_d2_frozen():
    pa = ParameterArray(Q, (0, 1, 2), (0, 1, 3), (-1, -2), (1, 2))
    a, _ = construct_tridiagonal(pa)
    products = [p.payload for p in tridiagonal_products(pa)]
    assert products == [Q.coerce("2/3"), Q.coerce("1/3")]
    for i in range(3):
        assert a.entry(i, i) == Q.one
    assert a.trace() == Q.coerce(3)


def test_tridiagonal_splits():
    pa = krawtchouk_array()
    with pytest.raises(UnsupportedFieldOperationError):
        construct_tridiagonal(pa, split="symmetric")
    with pytest.raises(ValueError):
        construct_tridiagonal(pa, split="cholesky")

    # over GF(13) the products 3, 4, 3 are squares (3 = 4^2)
    f13 = PrimeField(13)
    pa13 = krawtchouk_array(f13)
    a, _ = construct_tridiagonal(pa13, split="symmetric")
    assert a == a.transpose()
    unit, _ = construct_tridiagonal(pa13, split="unit")
    for i in range(1, 4):
        assert f13.mul(a.entry(i, i - 1), a.entry(i - 1, i)) == unit.entry(i - 1, i)


def test_construct_requires_validity():
    broken = ParameterArray(Q, THETA, THETA, (-6, -7, -6), PHI)
    with pytest.raises(InvalidParameterArrayError, match="PA3"):
        construct_bidiagonal(broken)
    with pytest.raises(InvalidParameterArrayError):
        construct_tridiagonal(broken)
    with pytest.raises(InvalidParameterArrayError):
        fingerprint(broken)


def test_find_g_matrix_fixture():
    pa = krawtchouk_array()
    result = find_g_matrix(pa)
    assert result.found and not result.pencil_exhausted
    assert result.solution_dimension == 1
    b1, b2, c1, c2 = reversal_intertwiner_systems(pa)
    g = result.g
    assert b1 @ g == g @ b2
    assert c1 @ g == g @ c2

    # deterministic: a second call returns the identical matrix
    again = find_g_matrix(pa)
    assert again.g == g

    # independent dense solve spans the same one dimensional space
    naive = joint_intertwiner_basis([(b1, b2), (c1, c2)])
    assert len(naive) == 1


def test_find_g_matrix_rejects_broken_arrays():
    broken = ParameterArray(Q, THETA, THETA, (-6, -7, -6), PHI)
    result = find_g_matrix(broken)
    assert not result.found and result.g is None

    with pytest.raises(InvalidParameterArrayError):
        find_g_matrix(ParameterArray(Q, (3, 1, 3, -3), THETA, VARPHI, PHI))


def test_poly_u_matches_eigenvector_matrix():
    pa = krawtchouk_array()
    for i in range(4):
        u = poly_u(pa, i)
        assert u.degree == i
        for j in range(4):
            expected = Q.div(Q.coerce(FIXTURE_P[j][i]), Q.coerce(FIXTURE_P[0][i]))
            assert u.eval_payload(Q.coerce(THETA[j])) == expected


def test_poly_u_normalization_and_duality():
    pa = krawtchouk_array()
    theta0 = Q.coerce(THETA[0])
    theta_d = Q.coerce(THETA[-1])
    for i in range(4):
        assert poly_u(pa, i).eval_payload(theta0) == Q.one
        assert poly_u_dual(pa, i).eval_payload(theta_d) == Q.one
    assert check_poly_characterization(pa)

    with pytest.raises(ValueError):
        poly_u(pa, 5)
    with pytest.raises(ValueError):
        poly_u(pa, -1)


def test_poly_characterization_fails_on_mutation():
    broken = ParameterArray(Q, THETA, THETA, (-6, -7, -6), PHI)
    assert not check_poly_characterization(broken)
    broken4 = ParameterArray(Q, THETA, THETA, VARPHI, (6, 9, 6))
    assert not check_poly_characterization(broken4)


def test_fingerprint_classical():
    fp = fingerprint(krawtchouk_array())
    assert fp.family == FAMILY_CLASSICAL
    assert fp.beta == FieldElement(Q, Q.coerce(2))
    assert fp.beta_plus_one == FieldElement(Q, Q.coerce(3))
    assert fp.q is None and fp.q_field is None and fp.q_minimal_poly is None


def test_fingerprint_q_type_rational():
    theta = (1, 2, 4, 8, 16)
    theta_star = (16, 8, 4, 2, 1)
    pa = array_from_eigen_data(Q, theta, theta_star, Q.coerce(1))
    assert pa is not None and validate(pa).valid
    fp = fingerprint(pa)
    assert fp.family == FAMILY_Q_TYPE
    assert fp.beta == FieldElement(Q, Q.coerce("5/2"))
    assert fp.q == FieldElement(Q, Q.coerce(2))
    assert fp.q_field is None and fp.q_minimal_poly is None


def test_fingerprint_bannai_ito():
    theta = theta_by_recurrence(Q, (0, 1, 3), -1, 3)
    theta_star = theta_by_recurrence(Q, (0, 2, 5), -1, 3)
    assert theta is not None and theta_star is not None
    pa = array_from_eigen_data(Q, theta, theta_star, Q.coerce(1))
    assert pa is not None and validate(pa).valid
    fp = fingerprint(pa)
    assert fp.family == FAMILY_BANNAI_ITO
    assert fp.beta == FieldElement(Q, Q.coerce(-2))


def test_fingerprint_q_in_quadratic_extension():
    # beta = 3 makes q a root of x^2 - 3x + 1, living in Q(sqrt 5)
    theta = theta_by_recurrence(Q, (0, 1, 3), 4, 3)
    pa = array_from_eigen_data(Q, theta, theta, Q.coerce(1))
    assert pa is not None and validate(pa).valid
    fp = fingerprint(pa)
    assert fp.family == FAMILY_Q_TYPE
    assert fp.beta == FieldElement(Q, Q.coerce(3))
    assert fp.q_field == QuadraticExtension(5)
    assert str(fp.q) == "3/2+1/2*s"
    # the two quadratic roots multiply to 1
    inv = FieldElement(fp.q_field, fp.q_field.inv(fp.q.payload))
    assert str(inv) == "3/2-1/2*s"


def test_classify_beta_finite_fields():
    assert classify_beta(PrimeField(13), 2).family == FAMILY_CLASSICAL
    assert classify_beta(PrimeField(3), 1).family == FAMILY_BANNAI_ITO
    assert classify_beta(PrimeField(2), 0).family == FAMILY_CHAR2

    # over GF(7): beta = 0 gives x^2 + 1 with nonresidue discriminant
    fp = classify_beta(PrimeField(7), 0)
    assert fp.family == FAMILY_Q_TYPE
    assert fp.q is None and fp.q_field is None
    assert fp.q_minimal_poly is not None
    assert [str(c) for c in fp.q_minimal_poly.coefficients()] == ["1", "0", "1"]

    # GF(2) with beta = 1: x^2 + x + 1 has no roots in GF(2)
    fp2 = classify_beta(PrimeField(2), 1)
    assert fp2.family == FAMILY_Q_TYPE
    assert fp2.q_minimal_poly is not None

    # residue discriminant stays in the prime field: beta = 4 over GF(11)
    # solves x^2 - 4x + 1 = 0 at x in {2 + 9, 2 - 9} ... check exactly
    fp3 = classify_beta(PrimeField(11), 4)
    assert fp3.family == FAMILY_Q_TYPE
    assert fp3.q is not None
    f11 = PrimeField(11)
    q = fp3.q.payload
    assert f11.add(f11.mul(q, q), f11.add(f11.mul(f11.coerce(-4), q), f11.one)) == 0


def test_fingerprint_over_reduced_field():
    fp = fingerprint(krawtchouk_array(PrimeField(13)))
    assert fp.family == FAMILY_CLASSICAL


def test_affine_invariance_frozen():
    pa = krawtchouk_array()
    moved = affine_transform(pa, 2, 5, -3, 7)
    assert validate(moved).valid
    fp = fingerprint(moved)
    assert fp.family == FAMILY_CLASSICAL
    # products scale by a^2, diagonal entries map to a x + b
    assert [p.payload for p in tridiagonal_products(moved)] == [
        Q.coerce(v) for v in (12, 16, 12)
    ]
    a, _ = construct_tridiagonal(moved)
    for i in range(4):
        assert a.entry(i, i) == Q.coerce(5)
    with pytest.raises(ValueError):
        affine_transform(pa, 0, 1, 1, 0)


def test_reversal_closure():
    pa = krawtchouk_array()
    reversed_pa = ParameterArray(
        Q, tuple(reversed(THETA)), THETA, PHI, VARPHI
    )
    report = validate(reversed_pa)
    assert report.axiom("PA3").passed and report.axiom("PA4").passed
    assert report.valid
    assert fingerprint(reversed_pa).family == FAMILY_CLASSICAL

    theta = (1, 2, 4, 8, 16)
    pa_q = array_from_eigen_data(Q, theta, tuple(reversed(theta)), Q.coerce(1))
    rev = ParameterArray(
        Q,
        tuple(reversed(pa_q.theta)),
        pa_q.theta_star,
        pa_q.phi,
        pa_q.varphi,
    )
    assert validate(rev).valid


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=6), st.integers(min_value=0, max_value=10**9))
def test_random_valid_arrays_roundtrip(d, seed):
    rng = random.Random(seed)
    choices = [Q, PrimeField(101)] + ([PrimeField(13)] if d <= 3 else [])
    field = rng.choice(choices)
    pa = random_valid_array(field, rng, d)
    assert validate(pa).valid

    a, a_star = construct_tridiagonal(pa)
    assert is_irreducible_tridiagonal(a)
    trace = field.zero
    for t in pa.theta:
        trace = field.add(trace, t)
    assert a.trace() == trace
    assert a_star == ExactMatrix.diagonal(field, pa.theta_star)

    assert check_poly_characterization(pa)

    result = find_g_matrix(pa)
    assert result.found
    assert result.solution_dimension == 1

    if d >= 3:
        assert fingerprint(pa).family != FAMILY_SMALL_DIAMETER
