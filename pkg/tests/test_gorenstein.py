import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import load, poly, skew
from pbwkit.algebra import (Bimodule, cyclic_group_algebra, dual_numbers, ground_field,
                            upper_triangular)
from pbwkit.entwine import group_braiding, smash_presentation
from pbwkit.errors import DimMismatch, EOutsideSpace
from pbwkit.exactlin import QQ, Field, Matrix
from pbwkit.gorenstein import (ExtComplex, build_U_e, check_gorenstein, check_selfinjective,
                               ext_via_koszul, extract_sigma)
from pbwkit.pbw import DeformationData, check_theorem_a
from pbwkit.quadratic import QuadraticPresentation, koszul_generators


def twisted_z3():
    """k[x,y] # GF(7)Z3 with g = diag(2, 1); det g = 2 is not 1."""
    F = Field.prime(7)
    S = cyclic_group_algebra(F, 3)
    g = Matrix.from_rows(F, [[2, 0], [0, 1]])
    br = group_braiding(S, [Matrix.identity(F, 2), g, g @ g])
    return smash_presentation(br, [{1: F.one, 2: -F.one}])


def test_selfinjective():
    assert check_selfinjective(cyclic_group_algebra(QQ, 2))
    assert check_selfinjective(cyclic_group_algebra(Field.prime(2), 2))
    assert check_selfinjective(dual_numbers(QQ))
    assert not check_selfinjective(upper_triangular(QQ))


def test_ext_polynomial_ring():
    tab = ext_via_koszul(poly(2), 3, (-4, 2))
    assert {k: v for k, v in tab.items() if v} == {(2, -2): 1}


def test_ext_skew_group_algebra(skew_q):
    tab = ext_via_koszul(skew_q, 3, (-4, 4))
    assert {k: v for k, v in tab.items() if v} == {(2, -2): 2}


def test_ext_tensor_algebra():
    S = ground_field(QQ)
    I = Matrix.identity(QQ, 2)
    free = QuadraticPresentation(S, Bimodule(S, 2, [I], [I]), [])
    tab = ext_via_koszul(free, 3, (-4, 2))
    assert all(v == 0 for (i, j), v in tab.items() if i >= 2)
    assert tab[(1, -1)] == 2


@pytest.mark.parametrize("make", [lambda: poly(2), skew])
def test_gorenstein_certificate(make):
    P = make()
    cert = check_gorenstein(P, 2, 2, (-4, 4))
    assert cert.ok and cert.selfinjective
    assert cert.report.passed("right_top_is_dual") and cert.report.passed("left_top_is_dual")
    assert not check_gorenstein(P, 2, 3, (-4, 4)).ok
    assert koszul_generators(P, 3).K[3].dim == 0


def test_ext_module_is_dual_of_S(skew_q):
    cx = ExtComplex(skew_q, 3, (-4, 4))
    ext = cx.ext_module(2, -2)
    assert ext.dim == 2
    ext.validate()
    assert cx.ext_module(2, -3).dim == 0


def test_sigma_identity_for_special_linear_action(skew_q):
    sd = extract_sigma(skew_q)
    assert sd.sigma == Matrix.identity(QQ, 2)
    assert sd.e_space.dim == 2


def test_sigma_trivial_base():
    sd = extract_sigma(poly(2))
    assert sd.sigma == Matrix.identity(QQ, 1)
    assert sd.e_space.dim == 1


def check_sigma_identity(pres, sd):
    Rmod, _ = pres.relation_module()
    S = pres.S
    for s in range(S.dim):
        lhs = Rmod.left[s].apply(sd.r0_coords)
        rhs = Rmod.act_right(sd.r0_coords, sd.sigma.cols[s])
        assert lhs == rhs
    assert S.is_automorphism(sd.sigma)


def test_twisted_sigma_recovered():
    P = twisted_z3()
    sd = extract_sigma(P)
    F = P.field
    assert sd.sigma != Matrix.identity(F, 3)
    check_sigma_identity(P, sd)
    # sigma(g) is a scalar multiple of g
    col = sd.sigma.cols[1]
    assert list(col) == [1] and col[1] in (F(2), F(4))
    assert sd.e_space.dim == 0


def test_twisted_sigma_dual_numbers():
    m = load("dual_twisted_eps")
    sd = extract_sigma(m.pres)
    assert sd.sigma == Matrix.from_rows(QQ, [[1, 0], [0, 2]])
    check_sigma_identity(m.pres, sd)
    assert sd.e_space.dim == 1 and sd.e_space.contains({1: QQ.one})


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_sigma_verified_for_any_seed(seed):
    P = skew()
    sd = extract_sigma(P, seed=seed)
    check_sigma_identity(P, sd)


def test_sigma_dimension_mismatch():
    with pytest.raises(DimMismatch):
        extract_sigma(poly(3))


@pytest.mark.parametrize("e", [{}, {0: QQ.one, 1: QQ.one}, {0: QQ.one}])
def test_U_e_agrees_with_oracle(skew_q, e):
    sd = extract_sigma(skew_q)
    defo, rep = build_U_e(skew_q, sd, e, n_max=4)
    assert rep.ok
    assert rep.passed("agreement")
    assert rep.info["oracle.filtered_dims"].increments == [2, 4, 6, 8, 10]


def test_U_e_zero_is_graded(skew_q):
    sd = extract_sigma(skew_q)
    defo, _ = build_U_e(skew_q, sd, {})
    assert defo.is_zero()


def test_U_e_outside_space():
    m = load("dual_twisted_one")
    sd = extract_sigma(m.pres)
    with pytest.raises(EOutsideSpace) as info:
        build_U_e(m.pres, sd, {0: QQ.one})
    assert info.value.witness == 1


def test_U_e_char_two():
    m = load("sympl_refl_z2_gf2")
    sd = extract_sigma(m.pres)
    F = m.pres.field
    _, rep = build_U_e(m.pres, sd, {0: F.one}, n_max=4)
    assert rep.ok and rep.status_of("oracle.pbw") == "pass"


def theta_from_e(pres, sd, e):
    Rmod, inc = pres.relation_module()
    S = pres.S
    gens = [inc.apply(Rmod.right[s].apply(sd.r0_coords)) for s in range(S.dim)]
    thetas = [S.product(e, S.basis_vector(s)) for s in range(S.dim)]
    return DeformationData.from_values(pres, gens, None, thetas)


@given(a=st.integers(-3, 3), b=st.integers(-3, 3),
       name=st.sampled_from(["dual_twisted_eps", "refl_z2_theta", "sympl_refl_z2_q"]))
def test_bimodule_theta_iff_e_in_space(a, b, name):
    pres = load(name).pres
    sd = extract_sigma(pres)
    F = pres.field
    e = {k: F(x) for k, x in enumerate((a, b)) if x}
    defo = theta_from_e(pres, sd, e)
    rep = check_theorem_a(defo, 3)
    assert rep.passed("theta_bimodule") == sd.e_space.contains(e)
