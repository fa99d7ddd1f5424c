import itertools
import random
from fractions import Fraction

import flint
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pbwkit.errors import AmbientMismatch, DimMismatch, NotPrime, ParseError
from pbwkit.exactlin import (QQ, Field, LinearSolver, Matrix, Subspace, block_matrix,
                             is_prime, kernel, rref, solve_affine, solve_matrix_equation,
                             sparse)


def brute_kernel_size(rows, p):
    """Count x in GF(p)^n with A x = 0 by enumeration."""
    n = len(rows[0])
    count = 0
    for x in itertools.product(range(p), repeat=n):
        if all(sum(a * b for a, b in zip(r, x)) % p == 0 for r in rows):
            count += 1
    return count


small_rows = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=1, max_size=4))


def test_field_basics():
    F = Field.prime(7)
    assert F(3) * F(5) == F(1)
    assert F("1/3") * F(3) == F.one
    assert QQ("2/4") == flint.fmpq(1, 2)
    assert QQ(Fraction(3, 6)) == flint.fmpq(1, 2)
    assert QQ.format(QQ("-6/4")) == "-3/2"
    assert len(F.elements()) == 7
    assert F.characteristic == 7 and QQ.characteristic == 0


@pytest.mark.parametrize("p", [1, 4, 9, 15])
def test_non_prime_modulus_rejected(p):
    with pytest.raises(NotPrime):
        Field.prime(p)


def test_bad_scalars():
    with pytest.raises(ParseError):
        QQ.parse("1/0")
    with pytest.raises(ParseError):
        QQ.parse("x")
    with pytest.raises(ValueError):
        Field.prime(3)(Fraction(1, 3))


def test_is_prime_small():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@pytest.mark.parametrize("p", [2, 3, 5])
@given(rows=small_rows)
def test_kernel_matches_enumeration(p, rows):
    F = Field.prime(p)
    m = Matrix.from_rows(F, rows)
    assert p ** kernel(m).dim == brute_kernel_size(rows, p)
    assert m.rank() + kernel(m).dim == m.ncols


@given(rows=small_rows)
def test_rank_agrees_with_flint(rows):
    m = Matrix.from_rows(QQ, rows)
    assert m.rank() == flint.fmpq_mat(rows).rank()
    assert m.rank() == m.transpose().rank()


@given(rows=small_rows)
def test_kernel_vectors_are_killed(rows):
    m = Matrix.from_rows(QQ, rows)
    for v in kernel(m).basis():
        assert m.apply(v) == {}


@given(rows=small_rows)
def test_rref_is_canonical(rows):
    m = Matrix.from_rows(QQ, rows)
    r, piv = rref(m)
    assert rref(r)[0] == r
    assert len(piv) == m.rank()
    for i, j in enumerate(piv):
        col = r.cols[j]
        assert col == {i: QQ.one}


@given(a=small_rows, b=small_rows)
def test_dimension_formula(a, b):
    n = min(len(a[0]), len(b[0]))
    A = Subspace.span(QQ, n, [r[:n] for r in a])
    B = Subspace.span(QQ, n, [r[:n] for r in b])
    assert (A + B).dim + (A & B).dim == A.dim + B.dim
    assert (A & B).is_subspace_of(A) and (A & B).is_subspace_of(B)
    assert A.is_subspace_of(A + B)


@given(rows=small_rows, seed=st.integers(0, 1000))
def test_coordinates_round_trip(rows, seed):
    W = Subspace.span(QQ, len(rows[0]), rows)
    rng = random.Random(seed)
    coeffs = [QQ(rng.randint(-3, 3)) for _ in range(W.dim)]
    v = {}
    for c, b in zip(coeffs, W.basis()):
        for i, x in b.items():
            v[i] = v.get(i, QQ.zero) + c * x
    assert W.coordinates(sparse(v)) == coeffs


def test_complement_spans_with_subspace():
    W = Subspace.span(QQ, 4, [[1, 1, 0, 0], [0, 0, 1, 1]])
    comp = Subspace.coordinate(QQ, 4, W.complement())
    assert (W + comp).dim == 4 and (W & comp).dim == 0
    with pytest.raises(ValueError):
        W.coordinates([1, 0, 0, 0])


def test_ambient_mismatch():
    with pytest.raises(AmbientMismatch):
        Subspace.zero(QQ, 2) + Subspace.zero(QQ, 3)
    with pytest.raises(AmbientMismatch):
        Subspace.span(QQ, 2, [{5: QQ.one}])
    with pytest.raises(DimMismatch):
        Matrix.identity(QQ, 2) @ Matrix.identity(QQ, 3)


@given(rows=small_rows, seed=st.integers(0, 1000))
def test_solver_consistent_rhs(rows, seed):
    m = Matrix.from_rows(QQ, rows)
    rng = random.Random(seed)
    x = [QQ(rng.randint(-3, 3)) for _ in range(m.ncols)]
    b = m.apply(x)
    y = LinearSolver(m).solve(b)
    assert y is not None and m.apply(y) == b


def test_solver_inconsistent():
    m = Matrix.from_rows(QQ, [[1, 1], [2, 2]])
    assert solve_affine(m, [1, 0]) is None
    assert solve_affine(m, [1, 2]) is not None


def test_kron_and_blocks():
    A = Matrix.from_rows(QQ, [[1, 2], [3, 4]])
    B = Matrix.from_rows(QQ, [[0, 1], [1, 0]])
    K = A.kron(B)
    assert K.entry(0 * 2 + 1, 1 * 2 + 0) == A.entry(0, 1) * B.entry(1, 0)
    # mixed product rule
    assert (A @ A).kron(B @ B) == A.kron(B) @ A.kron(B)
    M = block_matrix(QQ, [2, 2], [2], {(1, 0): A})
    assert M == Matrix.zeros(QQ, 2, 2).vstack(A)


def test_matrix_equation_commutant():
    # X commuting with a nilpotent Jordan block: polynomials in the block
    J = Matrix.from_rows(QQ, [[0, 1], [0, 0]])
    I = Matrix.identity(QQ, 2)
    part, hom = solve_matrix_equation(QQ, 2, 2, [[(J, I), (I.scale(-1), J)]])
    assert part is not None and part.is_zero()
    assert len(hom) == 2
    for X in hom:
        assert J @ X == X @ J
