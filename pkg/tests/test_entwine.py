import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pbwkit.algebra import (Bimodule, cyclic_group_algebra, dual_numbers, ground_field,
                            regular_bimodule)
from pbwkit.entwine import (Braiding, Entwining, SmashResolution, braided_bimodule,
                            braiding_from_bimodule, check_braiding, check_relation_stability,
                            classical_presentation, extend_to_tensor, group_braiding,
                            induced_entwining, left_action_compatibility, lemma1_isomorphism,
                            smash_koszul_resolution, smash_presentation, smash_product,
                            twist_braiding)
from pbwkit.errors import (BraidingNotBijective, NotClassicallyKoszul, NotFreeRight,
                           RelationsNotStable)
from pbwkit.exactlin import QQ, Field, Matrix, Subspace
from pbwkit.quadratic import bimodule_complex, is_koszul

F = QQ
COMM = [{1: F.one, 2: -F.one}]          # xy - yx in V (x) V


def minus_one():
    S = cyclic_group_algebra(F, 2)
    I = Matrix.identity(F, 2)
    return group_braiding(S, [I, I.scale(-1)])


def dual_braiding(A, field=F):
    """Psi(1 (x) v) = v (x) 1, Psi(eps (x) v) = Av (x) eps over k[eps]."""
    D = dual_numbers(field)
    dv = A.nrows
    cols = []
    for s in range(2):
        for v in range(dv):
            if s == 0:
                cols.append({v * 2: field.one})
            else:
                cols.append({w * 2 + 1: x for w, x in A.cols[v].items()})
    return Braiding(D, dv, Matrix(field, dv * 2, 2 * dv, cols))


def test_twist_is_braiding():
    for S in (ground_field(F), cyclic_group_algebra(F, 3), dual_numbers(F)):
        br = twist_braiding(S, 2)
        rep = check_braiding(br)
        assert rep.ok and rep.info["bijective"]


def test_group_action_is_braiding():
    rep = check_braiding(minus_one())
    assert rep.ok


def test_non_unital_map_fails():
    S = cyclic_group_algebra(F, 2)
    br = minus_one()
    bad = Matrix(F, 4, 4, [dict(c) for c in br.psi.cols])
    bad.cols[0] = {0 * 2 + 1: F.one}            # Psi(1 (x) v0) = v0 (x) g
    rep = check_braiding(Braiding(S, 2, bad))
    assert rep.status_of("unital") == "fail"
    assert rep.get("unital").witness == 0


def test_extension_degree_one_and_twist():
    br = minus_one()
    assert br.extend(1) == br.psi
    tw = twist_braiding(cyclic_group_algebra(F, 2), 2)
    for n, m in enumerate(extend_to_tensor(tw, 3)):
        assert m == twist_braiding(tw.S, 2 ** n).psi


def test_extension_is_diagonal_action():
    # g.(v (x) w) = gv (x) gw, so Psi_T(g (x) x) = (rho(g) (x) rho(g)) x (x) g
    S = cyclic_group_algebra(F, 2)
    rho = [Matrix.identity(F, 2), Matrix.from_rows(F, [[0, 1], [1, 0]])]
    br = group_braiding(S, rho)
    ext = br.extend(2)
    for g in range(2):
        act = rho[g].kron(rho[g])
        for w in range(4):
            expect = {u * 2 + g: x for u, x in act.cols[w].items()}
            assert ext.cols[g * 4 + w] == expect


def test_stability_and_unstable_witness():
    br = minus_one()
    A = classical_presentation(F, 2, COMM)
    assert check_relation_stability(br, A.R) == (True, None)
    swap = Matrix.from_rows(F, [[0, 1], [1, 0]])
    brs = group_braiding(cyclic_group_algebra(F, 2), [Matrix.identity(F, 2), swap])
    xx = classical_presentation(F, 2, [{0: F.one}])
    ok, w = check_relation_stability(brs, xx.R)
    assert not ok and w[0] == 1
    with pytest.raises(RelationsNotStable):
        Entwining(brs, xx, 2)
    with pytest.raises(RelationsNotStable):
        smash_presentation(brs, [{0: F.one}])


def test_trivial_base_gives_A():
    k = ground_field(F)
    A = classical_presentation(F, 2, COMM)
    E = smash_product(induced_entwining(twist_braiding(k, 2), A, 4))
    assert [E.dim(n) for n in range(5)] == A.graded(4).dims(4)
    B = A.graded(4)
    for i in range(3):
        for j in range(3 - i):
            assert E.mult(i, j) == B.mult(i, j)


@pytest.mark.parametrize("make", [minus_one,
                                  lambda: dual_braiding(Matrix.from_rows(F, [[1, 1], [0, 1]]))])
def test_smash_product_axioms(make):
    br = make()
    A = classical_presentation(F, 2, COMM)
    ent = Entwining(br, A, 4)
    assert ent.check(3).ok
    E = smash_product(ent)
    assert E.check_associative(3) == []
    assert E.check_unit(3)
    assert [E.dim(n) for n in range(4)] == [2 * (n + 1) for n in range(4)]


def test_smash_multiplication_rule():
    # (x (x) g)(y (x) 1) = x y^g (x) g = -xy (x) g
    br = minus_one()
    A = classical_presentation(F, 2, COMM)
    E = smash_product(Entwining(br, A, 2))
    B = A.graded(2)
    x_g = {0 * 2 + 1: F.one}
    y_1 = {1 * 2 + 0: F.one}
    xy = B.multiply(1, {0: F.one}, 1, {1: F.one})
    expect = {a * 2 + 1: -c for a, c in xy.items()}
    assert E.multiply(1, x_g, 1, y_1) == expect


def test_tensor_algebra_iso_trivial_and_group():
    k = ground_field(F)
    I = Matrix.identity(F, 2)
    _, phi, rep = lemma1_isomorphism(Bimodule(k, 2, [I], [I]), 3, basis=I)
    assert rep.ok
    assert all(m == Matrix.identity(F, m.nrows) for m in phi)
    M = braided_bimodule(minus_one())
    br, phi, rep = lemma1_isomorphism(M, 3)
    assert rep.ok and rep.passed("multiplicative")
    assert check_braiding(br).ok


def test_braiding_from_bimodule_round_trip():
    br = minus_one()
    M = braided_bimodule(br)
    br2, J = braiding_from_bimodule(M, basis=Matrix.identity(F, M.dim))
    assert br2.psi == br.psi
    assert check_braiding(braiding_from_bimodule(M)[0]).ok


def test_not_free_right():
    S = dual_numbers(F)
    simple = Bimodule(S, 1, [Matrix.identity(F, 1), Matrix.zeros(F, 1, 1)],
                      [Matrix.identity(F, 1), Matrix.zeros(F, 1, 1)])
    with pytest.raises(NotFreeRight):
        braiding_from_bimodule(simple)
    with pytest.raises(NotFreeRight):
        braiding_from_bimodule(regular_bimodule(S), basis=Matrix.zeros(F, 2, 2))


@pytest.mark.parametrize("name,make,field", [
    ("trivial", lambda: twist_braiding(ground_field(F), 2), F),
    ("Z2", minus_one, F),
    ("dual", lambda: dual_braiding(Matrix.from_rows(F, [[1, 1], [0, 1]])), F),
])
def test_smash_resolution_exact(name, make, field):
    br = make()
    A = classical_presentation(field, 2, COMM)
    cx, l2 = smash_koszul_resolution(A, br, n_max=4, deg_max=4)
    assert l2.ok
    assert cx.d_squared_failures() == []
    assert cx.exactness_failures() == []


def test_trivial_base_first_column_is_koszul_bimodule_complex():
    A = classical_presentation(F, 2, COMM)
    res = SmashResolution(A, twist_braiding(ground_field(F), 2), 3, 4)
    bc = bimodule_complex(A, 4)
    for n in range(3):
        for d in range(n, 5):
            assert res.term(0, n).dim(d) == bc.dims[(n, d)]


def test_theta_composites_vanish():
    A = classical_presentation(F, 2, COMM)
    res = SmashResolution(A, minus_one(), 4, 4)
    for m in range(3):
        for d in range(2, 5):
            prod = res.restricted("koszul", m, 1, d) @ res.restricted("koszul", m, 2, d)
            assert prod.is_zero()


def test_bar_index_sign_breaks_totalisation():
    A = classical_presentation(F, 2, COMM)
    cx, _ = smash_koszul_resolution(A, minus_one(), n_max=4, deg_max=3, sign_on="bar")
    assert cx.d_squared_failures() != []


def test_left_action_commutes():
    A = classical_presentation(F, 2, COMM)
    res = SmashResolution(A, minus_one(), 3, 3)
    assert left_action_compatibility(res).ok


def test_smash_of_koszul_is_koszul():
    br = minus_one()
    P = smash_presentation(br, COMM)
    assert P.graded(4).dims(4) == [2, 4, 6, 8, 10]
    assert is_koszul(P, 4).ok


def test_resolution_preconditions():
    A = classical_presentation(F, 2, COMM)
    singular = dual_braiding(Matrix.from_rows(F, [[1, 0], [0, 0]]))
    assert check_braiding(singular).ok and not singular.bijective
    with pytest.raises(BraidingNotBijective):
        smash_koszul_resolution(A, singular, 3, 3)
    one = F.one
    bad = classical_presentation(F, 3, [{1: one, 5: one}, {0: -one, 8: one},
                                        {6: one, 0: -one}, {7: -one, 3: one}])
    with pytest.raises(NotClassicallyKoszul):
        smash_koszul_resolution(bad, twist_braiding(ground_field(F), 3), 3, 4)


def involution(seed, p):
    """A random conjugate of diag(+-1, +-1) over GF(p)."""
    Fp = Field.prime(p)
    rng = random.Random(seed)
    while True:
        P = Matrix.from_rows(Fp, [[rng.randrange(p) for _ in range(2)] for _ in range(2)])
        if P.rank() == 2:
            break
    # inverse of a 2x2 matrix
    a, b, c, d = P.entry(0, 0), P.entry(0, 1), P.entry(1, 0), P.entry(1, 1)
    det = a * d - b * c
    Pinv = Matrix.from_rows(Fp, [[d / det, -b / det], [-c / det, a / det]])
    D = Matrix.from_rows(Fp, [[rng.choice([1, -1]), 0], [0, rng.choice([1, -1])]])
    return Fp, P @ D @ Pinv


@given(seed=st.integers(0, 10 ** 6), p=st.sampled_from([3, 5, 7]))
def test_random_group_braidings(seed, p):
    Fp, g = involution(seed, p)
    S = cyclic_group_algebra(Fp, 2)
    br = group_braiding(S, [Matrix.identity(Fp, 2), g])
    assert check_braiding(br).ok and br.bijective
    for n in (2, 3):
        assert check_braiding(Braiding(S, 2 ** n, br.extend(n))).ok
    # the commutator is always stable under a linear group action
    A = classical_presentation(Fp, 2, [{1: Fp.one, 2: -Fp.one}])
    ent = Entwining(br, A, 3)
    assert ent.check(3).ok
    assert smash_product(ent).check_associative(2) == []


def test_tensor_algebra_iso_twist_is_reindexing():
    br = twist_braiding(cyclic_group_algebra(F, 2), 2)
    M = braided_bimodule(br)
    _, phi, rep = lemma1_isomorphism(M, 3, basis=Matrix.identity(F, M.dim))
    assert rep.ok
    for m in phi:
        assert all(list(c.values()) == [F.one] for c in m.cols)
        assert m.rank() == m.nrows
