import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pbwkit.algebra import (Bimodule, compute_section, cyclic_group_algebra, dual_bimodule,
                            dual_numbers, find_isomorphism, free_right_module, ground_field,
                            group_algebra, hom_space, is_projective, make_algebra,
                            quotient_bimodule, regular_bimodule, section_identities,
                            sub_bimodule, tensor_over_S, twist_left, upper_triangular)
from pbwkit.errors import (BadUnit, NotAssociative, NotAutomorphism, NotProjective,
                           RNotSubbimodule, ValidationError)
from pbwkit.exactlin import QQ, Field, Matrix, Subspace

S3 = [list(p) for p in itertools.permutations(range(3))]


def s3_table():
    idx = {tuple(p): i for i, p in enumerate(S3)}
    return [[idx[tuple(a[b[k]] for k in range(3))] for b in S3] for a in S3]


ALGEBRAS = {
    "k": lambda F: ground_field(F),
    "Z2": lambda F: cyclic_group_algebra(F, 2),
    "Z3": lambda F: cyclic_group_algebra(F, 3),
    "S3": lambda F: group_algebra(F, s3_table()),
    "dual": dual_numbers,
    "upper": upper_triangular,
}


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
@pytest.mark.parametrize("F", [QQ, Field.prime(2), Field.prime(3)], ids=str)
def test_builtin_algebras_validate(name, F):
    S = ALGEBRAS[name](F)
    S.validate()
    R = regular_bimodule(S)
    R.validate()
    assert S.is_automorphism(Matrix.identity(F, S.dim))
    assert S.opposite().opposite().mult == S.mult


def test_center_dimensions():
    assert cyclic_group_algebra(QQ, 3).center().dim == 3
    assert group_algebra(QQ, s3_table()).center().dim == 3  # conjugacy classes
    assert upper_triangular(QQ).center().dim == 1


def test_bad_structure_constants():
    one = QQ.one
    with pytest.raises(BadUnit):
        make_algebra(QQ, 2, [[{0: one}, {1: one}], [{1: one}, {}]], {1: one})
    # a b = b, b a = a, b b = a: (a b) b = a but a (b b) = a a
    with pytest.raises(NotAssociative):
        make_algebra(QQ, 3, [[{0: one}, {1: one}, {2: one}],
                             [{1: one}, {2: one}, {}],
                             [{2: one}, {1: one}, {}]], {0: one})
    assert issubclass(NotAssociative, ValidationError)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_free_tensor_dimensions(n):
    # (V (x) S) (x)_S (W (x) S) has dimension dim V * dim W * dim S for group algebras
    S = cyclic_group_algebra(QQ, 3)
    F = free_right_module(S, n)
    reg = regular_bimodule(S)
    T = tensor_over_S(F, reg)
    assert T.dim == n * S.dim
    T2 = tensor_over_S(reg, reg)
    assert T2.dim == S.dim


def test_tensor_balanced():
    S = dual_numbers(QQ)
    reg = regular_bimodule(S)
    T = tensor_over_S(reg, reg)
    eps = {1: QQ.one}
    one = {0: QQ.one}
    assert T.tensor(S.product(one, eps), one) == T.tensor(one, S.product(eps, one))
    T.bimodule.validate()


@pytest.mark.parametrize("name", ["Z2", "Z3", "S3", "dual", "upper", "k"])
def test_regular_module_sections(name):
    S = ALGEBRAS[name](QQ)
    R = regular_bimodule(S)
    for side in ("right", "left"):
        assert is_projective(R, side)
    rho = compute_section(R, "right")
    assert section_identities(R, rho) == {"unit": True, "right_linear": True,
                                          "coassociative": True}


def test_simple_module_not_projective():
    S = dual_numbers(QQ)
    zero = Matrix.zeros(QQ, 1, 1)
    simple = Bimodule(S, 1, None, [Matrix.identity(QQ, 1), zero])
    simple.validate()
    with pytest.raises(NotProjective):
        compute_section(simple, "right")
    assert not is_projective(simple)


def test_semisimple_modules_are_projective():
    # every module over kZ2 in characteristic 0 splits; sign representation
    S = cyclic_group_algebra(QQ, 2)
    sign = Bimodule(S, 1, None, [Matrix.identity(QQ, 1), Matrix.identity(QQ, 1).scale(-1)])
    rho = compute_section(sign)
    assert all(section_identities(sign, rho).values())
    # ... but not in characteristic 2
    F2 = Field.prime(2)
    S2 = cyclic_group_algebra(F2, 2)
    triv = Bimodule(S2, 1, None, [Matrix.identity(F2, 1), Matrix.identity(F2, 1)])
    assert not is_projective(triv)


def test_sub_and_quotient():
    S = dual_numbers(QQ)
    R = regular_bimodule(S)
    rad = Subspace.span(QQ, 2, [[0, 1]])
    sub, inc = sub_bimodule(R, rad)
    assert sub.dim == 1 and inc.shape == (2, 1)
    quo, Q = quotient_bimodule(R, rad)
    quo.validate()
    assert quo.dim == 1
    with pytest.raises(RNotSubbimodule):
        sub_bimodule(R, Subspace.span(QQ, 2, [[1, 0]]))


def test_frobenius_duals():
    for S in (cyclic_group_algebra(QQ, 2), dual_numbers(QQ)):
        D = dual_bimodule(S)
        D.validate()
        assert find_isomorphism(regular_bimodule(S), D) is not None
    U = upper_triangular(QQ)
    assert find_isomorphism(regular_bimodule(U), dual_bimodule(U), sides=("left",)) is None


def test_twist():
    S = cyclic_group_algebra(QQ, 3)
    # g -> g^2 is an automorphism of kZ3
    sigma = Matrix(QQ, 3, 3, [{0: QQ.one}, {2: QQ.one}, {1: QQ.one}])
    tw = twist_left(S, sigma)
    tw.validate()
    assert find_isomorphism(tw, regular_bimodule(S)) is None
    assert find_isomorphism(tw, regular_bimodule(S), sides=("right",)) is not None
    with pytest.raises(NotAutomorphism):
        twist_left(S, Matrix(QQ, 3, 3, [{0: QQ.one}, {0: QQ.one}, {2: QQ.one}]))


@given(n=st.integers(2, 4), a=st.integers(0, 3), b=st.integers(0, 3))
def test_cyclic_hom_space_dimension(n, a, b):
    # Hom_{kZn}(k(chi_a), k(chi_b)) for characters of Z_n over GF(p) with n | p - 1
    p = 13
    F = Field.prime(p)
    S = cyclic_group_algebra(F, n)
    w = F(2) ** (12 // n)  # primitive n-th root of unity mod 13
    def char(e):
        return Bimodule(S, 1, [Matrix.from_rows(F, [[w ** (e * k)]]) for k in range(n)], None)
    dim = len(hom_space(char(a), char(b), sides=("left",)))
    assert dim == (1 if (a - b) % n == 0 else 0)
