"""Finite-dimensional algebras, modules, bimodules and tensor products over them.

An algebra is given by structure constants: ``mult[i][j]`` is the sparse
coordinate vector of ``e_i * e_j``.  A (bi)module of dimension ``d`` stores one
``d x d`` matrix per basis element of the algebra for each side it has.
Right actions compose in reverse: ``right[e_i e_j] = right[j] @ right[i]``.

Tensor products over the algebra are realised as quotients of the plain
tensor product.  For ``M (x)_S N`` the basis tensor ``m_i (x) n_j`` has ambient
index ``i * dim N + j``; the quotient coordinates are the non-pivot
coordinates of the reduced relation space.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import (
    AlgebraMismatch, BadUnit, DimMismatch, NotAssociative, NotAutomorphism,
    NotProjective, RNotSubbimodule, ValidationError,
)
from .exactlin import (
    Field, Matrix, Subspace, axpy, kernel, solve_matrix_equation, sparse,
)


# ---------------------------------------------------------------- algebras

class FiniteAlgebra:
    def __init__(self, field: Field, dim: int, mult, unit, labels=None):
        self.field = field
        self.dim = dim
        self.mult = [[sparse([field(x) for x in v]) if not isinstance(v, dict) else
                      {k: field(x) for k, x in v.items() if x} for v in row] for row in mult]
        self.unit = sparse([field(x) for x in unit]) if not isinstance(unit, dict) else dict(unit)
        self.labels = list(labels) if labels else [f"e{i}" for i in range(dim)]
        # left_mats[i]: u -> e_i u ; right_mats[i]: u -> u e_i
        self.left_mats = [Matrix(field, dim, dim, [dict(self.mult[i][j]) for j in range(dim)])
                          for i in range(dim)]
        self.right_mats = [Matrix(field, dim, dim, [dict(self.mult[j][i]) for j in range(dim)])
                           for i in range(dim)]

    def product(self, u, v) -> dict:
        u = u if isinstance(u, dict) else sparse(u)
        v = v if isinstance(v, dict) else sparse(v)
        out: dict = {}
        for i, a in u.items():
            row = self.mult[i]
            for j, b in v.items():
                axpy(out, a * b, row[j])
        return out

    def basis_vector(self, i) -> dict:
        return {i: self.field.one}

    def left_of(self, u) -> Matrix:
        return _combine(self.field, self.dim, self.left_mats, u)

    def right_of(self, u) -> Matrix:
        return _combine(self.field, self.dim, self.right_mats, u)

    def opposite(self) -> "FiniteAlgebra":
        mult = [[self.mult[j][i] for j in range(self.dim)] for i in range(self.dim)]
        return FiniteAlgebra(self.field, self.dim, mult, self.unit, self.labels)

    def validate(self) -> None:
        one = self.unit
        for i in range(self.dim):
            e = {i: self.field.one}
            if self.product(one, e) != e or self.product(e, one) != e:
                raise BadUnit(f"unit does not act as identity on {self.labels[i]}", witness=i)
        for i in range(self.dim):
            for j in range(self.dim):
                ij = self.mult[i][j]
                for k in range(self.dim):
                    lhs = self.product(ij, {k: self.field.one})
                    rhs = self.product({i: self.field.one}, self.mult[j][k])
                    if lhs != rhs:
                        raise NotAssociative(
                            f"(e{i} e{j}) e{k} != e{i} (e{j} e{k})", witness=(i, j, k))

    def is_automorphism(self, sigma: Matrix) -> bool:
        if sigma.shape != (self.dim, self.dim) or sigma.rank() != self.dim:
            return False
        if sigma.apply(self.unit) != self.unit:
            return False
        for i in range(self.dim):
            for j in range(self.dim):
                if sigma.apply(self.mult[i][j]) != self.product(sigma.cols[i], sigma.cols[j]):
                    return False
        return True

    def center(self) -> Subspace:
        eqs = Matrix(self.field, 0, self.dim)
        for i in range(self.dim):
            eqs = eqs.vstack(self.right_mats[i] - self.left_mats[i])
        return kernel(eqs)

    def __repr__(self):
        return f"FiniteAlgebra(dim {self.dim} over {self.field})"


def _combine(field, n, mats, u) -> Matrix:
    u = u if isinstance(u, dict) else sparse(u)
    out = Matrix(field, n, n)
    for i, c in u.items():
        out = out + mats[i].scale(c)
    return out


def make_algebra(field: Field, dim: int, mult, unit, labels=None) -> FiniteAlgebra:
    if len(mult) != dim or any(len(r) != dim for r in mult):
        raise DimMismatch("structure constant table has the wrong size")
    alg = FiniteAlgebra(field, dim, mult, unit, labels)
    alg.validate()
    return alg


def ground_field(field: Field) -> FiniteAlgebra:
    return FiniteAlgebra(field, 1, [[{0: field.one}]], {0: field.one}, ["1"])


def group_algebra(field: Field, table, labels=None) -> FiniteAlgebra:
    """Group algebra from a multiplication table of element indices (index 0 = identity)."""
    n = len(table)
    mult = [[{table[i][j]: field.one} for j in range(n)] for i in range(n)]
    return make_algebra(field, n, mult, {0: field.one}, labels)


def cyclic_group_algebra(field: Field, n: int) -> FiniteAlgebra:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    labels = ["1"] + [f"g^{i}" if i > 1 else "g" for i in range(1, n)]
    return group_algebra(field, table, labels)


def dual_numbers(field: Field) -> FiniteAlgebra:
    one, z = field.one, {}
    mult = [[{0: one}, {1: one}], [{1: one}, z]]
    return make_algebra(field, 2, mult, {0: one}, ["1", "eps"])


def upper_triangular(field: Field) -> FiniteAlgebra:
    """Upper triangular 2x2 matrices, basis e11, e12, e22 (a path algebra of type A2)."""
    one = field.one
    z: dict = {}
    mult = [
        [{0: one}, {1: one}, z],
        [z, z, {1: one}],
        [z, z, {2: one}],
    ]
    return make_algebra(field, 3, mult, {0: one, 2: one}, ["e11", "e12", "e22"])


# ---------------------------------------------------------------- modules

class Bimodule:
    """A module over ``algebra`` with a left action, a right action, or both."""

    def __init__(self, algebra: FiniteAlgebra, dim: int, left=None, right=None, labels=None):
        self.algebra = algebra
        self.field = algebra.field
        self.dim = dim
        self.left = left
        self.right = right
        self.labels = list(labels) if labels else [f"m{i}" for i in range(dim)]
        for side in (left, right):
            if side is not None:
                if len(side) != algebra.dim or any(m.shape != (dim, dim) for m in side):
                    raise DimMismatch("action matrices have the wrong shape")

    def left_of(self, u) -> Matrix:
        return _combine(self.field, self.dim, self.left, u)

    def right_of(self, u) -> Matrix:
        return _combine(self.field, self.dim, self.right, u)

    def act_left(self, u, v) -> dict:
        u = u if isinstance(u, dict) else sparse(u)
        out: dict = {}
        for i, c in u.items():
            axpy(out, c, self.left[i].apply(v))
        return out

    def act_right(self, v, u) -> dict:
        u = u if isinstance(u, dict) else sparse(u)
        out: dict = {}
        for i, c in u.items():
            axpy(out, c, self.right[i].apply(v))
        return out

    def validate(self) -> None:
        A = self.algebra
        ident = Matrix.identity(self.field, self.dim)
        if self.left is not None:
            if self.left_of(A.unit) != ident:
                raise BadUnit("unit does not act as identity on the left")
            for i in range(A.dim):
                for j in range(A.dim):
                    if self.left_of(A.mult[i][j]) != self.left[i] @ self.left[j]:
                        raise ValidationError(f"left action not multiplicative at ({i},{j})",
                                              witness=(i, j))
        if self.right is not None:
            if self.right_of(A.unit) != ident:
                raise BadUnit("unit does not act as identity on the right")
            for i in range(A.dim):
                for j in range(A.dim):
                    if self.right_of(A.mult[i][j]) != self.right[j] @ self.right[i]:
                        raise ValidationError(f"right action not multiplicative at ({i},{j})",
                                              witness=(i, j))
        if self.left is not None and self.right is not None:
            for i in range(A.dim):
                for j in range(A.dim):
                    if self.left[i] @ self.right[j] != self.right[j] @ self.left[i]:
                        raise ValidationError(f"actions do not commute at ({i},{j})",
                                              witness=(i, j))

    def right_module(self) -> "Bimodule":
        return Bimodule(self.algebra, self.dim, None, self.right, self.labels)

    def left_module(self) -> "Bimodule":
        return Bimodule(self.algebra, self.dim, self.left, None, self.labels)

    def __repr__(self):
        sides = ("L" if self.left is not None else "") + ("R" if self.right is not None else "")
        return f"Bimodule(dim {self.dim}, sides {sides})"


def regular_bimodule(S: FiniteAlgebra) -> Bimodule:
    return Bimodule(S, S.dim, list(S.left_mats), list(S.right_mats), S.labels)


def _same_algebra(M, N):
    if M.algebra is not N.algebra and (
            M.algebra.dim != N.algebra.dim or M.algebra.mult != N.algebra.mult):
        raise AlgebraMismatch("modules over different algebras")


def free_right_module(S: FiniteAlgebra, rank: int) -> Bimodule:
    """k^rank (x) S with S acting on the right."""
    ident = Matrix.identity(S.field, rank)
    right = [ident.kron(S.right_mats[k]) for k in range(S.dim)]
    return Bimodule(S, rank * S.dim, None, right)


def check_subspace_closed(M: Bimodule, W: Subspace):
    """Witness (side, basis index of S, vector) of non-closure, or None."""
    for side, mats in (("left", M.left), ("right", M.right)):
        if mats is None:
            continue
        for k, mat in enumerate(mats):
            for w in W.basis():
                if not W.contains(mat.apply(w)):
                    return side, k, w
    return None


@dataclass
class QuotientSpace:
    """k^n / W with coordinates the non-pivot coordinates of W."""
    ambient_dim: int
    relations: Subspace
    coords: list
    projection: Matrix
    section: Matrix

    @property
    def dim(self):
        return len(self.coords)


def quotient_space(W: Subspace) -> QuotientSpace:
    F = W.field
    n = W.ambient_dim
    coords = W.complement()
    where = {c: i for i, c in enumerate(coords)}
    cols = [None] * n
    for c, i in where.items():
        cols[c] = {i: F.one}
    for p, b in zip(W.pivots, W.basis()):
        cols[p] = {where[j]: -x for j, x in b.items() if j != p}
    proj = Matrix(F, len(coords), n, cols)
    sec = Matrix(F, n, len(coords), [{c: F.one} for c in coords])
    return QuotientSpace(n, W, coords, proj, sec)


def sub_bimodule(M: Bimodule, W: Subspace) -> tuple[Bimodule, Matrix]:
    """Restrict the actions of M to W; returns (module, inclusion matrix)."""
    witness = check_subspace_closed(M, W)
    if witness is not None:
        raise RNotSubbimodule("subspace is not closed under the actions", witness=witness)
    inc = W.basis_matrix()

    def restrict(mats):
        if mats is None:
            return None
        return [Matrix(M.field, W.dim, W.dim, [_coords(W, mat.apply(b)) for b in W.basis()])
                for mat in mats]
    return Bimodule(M.algebra, W.dim, restrict(M.left), restrict(M.right)), inc


def _coords(W: Subspace, v) -> dict:
    return sparse(W.coordinates(v))


def quotient_bimodule(M: Bimodule, W: Subspace) -> tuple[Bimodule, QuotientSpace]:
    witness = check_subspace_closed(M, W)
    if witness is not None:
        raise RNotSubbimodule("subspace is not closed under the actions", witness=witness)
    Q = quotient_space(W)

    def induce(mats):
        if mats is None:
            return None
        return [Q.projection @ mat @ Q.section for mat in mats]
    return Bimodule(M.algebra, Q.dim, induce(M.left), induce(M.right)), Q


# ---------------------------------------------------------------- tensor over S

class TensorSpace:
    """M (x)_S N as a quotient of M (x)_k N, with its induced actions."""

    def __init__(self, M: Bimodule, N: Bimodule):
        _same_algebra(M, N)
        if M.right is None or N.left is None:
            raise ValidationError("tensor over S needs a right action on the left factor "
                                  "and a left action on the right factor")
        self.left_factor = M
        self.right_factor = N
        F = M.field
        dm, dn = M.dim, N.dim
        self.ambient_dim = dm * dn
        rels = []
        for k in range(M.algebra.dim):
            rm, ln = M.right[k], N.left[k]
            for i in range(dm):
                a = rm.cols[i]
                for j in range(dn):
                    v = {p * dn + j: x for p, x in a.items()}
                    for q, y in ln.cols[j].items():
                        key = i * dn + q
                        t = v.get(key)
                        t = -y if t is None else t - y
                        if t:
                            v[key] = t
                        else:
                            v.pop(key, None)
                    if v:
                        rels.append(v)
        self.relations = Subspace.span(F, self.ambient_dim, rels)
        self.quotient = quotient_space(self.relations)
        self.projection = self.quotient.projection
        self.section = self.quotient.section
        self.dim = self.quotient.dim
        self.quotient_dim = self.dim
        left = right = None
        if M.left is not None:
            idn = Matrix.identity(F, dn)
            left = [self.projection @ (M.left[k].kron(idn)) @ self.section
                    for k in range(M.algebra.dim)]
        if N.right is not None:
            idm = Matrix.identity(F, dm)
            right = [self.projection @ (idm.kron(N.right[k])) @ self.section
                     for k in range(M.algebra.dim)]
        self.bimodule = Bimodule(M.algebra, self.dim, left, right)

    def pair(self, i: int, j: int) -> dict:
        """Class of m_i (x) n_j."""
        return dict(self.projection.cols[i * self.right_factor.dim + j])

    def project(self, v: dict) -> dict:
        return self.projection.apply(v)

    def tensor(self, u, v) -> dict:
        """Class of u (x) v for vectors u in M, v in N."""
        u = u if isinstance(u, dict) else sparse(u)
        v = v if isinstance(v, dict) else sparse(v)
        dn = self.right_factor.dim
        amb = {}
        for i, a in u.items():
            for j, b in v.items():
                amb[i * dn + j] = a * b
        return self.projection.apply(amb)

    def __repr__(self):
        return f"TensorSpace({self.left_factor.dim} x {self.right_factor.dim} -> {self.dim})"


def tensor_over_S(M: Bimodule, N: Bimodule) -> TensorSpace:
    return TensorSpace(M, N)


def tensor_maps(f: Matrix, g: Matrix, source: TensorSpace, target: TensorSpace) -> Matrix:
    """The map f (x)_S g between tensor spaces (f right-, g left-linear)."""
    return target.projection @ f.kron(g) @ source.section


# ---------------------------------------------------------------- sections

def multiplication_map(X: Bimodule, side: str = "right") -> Matrix:
    """mu: X (x) S -> X (right) or S (x) X -> X (left), on the plain tensor."""
    S = X.algebra
    F = X.field
    if side == "right":
        cols = []
        for i in range(X.dim):
            for k in range(S.dim):
                cols.append(dict(X.right[k].cols[i]))
        return Matrix(F, X.dim, X.dim * S.dim, cols)
    cols = []
    for k in range(S.dim):
        for i in range(X.dim):
            cols.append(dict(X.left[k].cols[i]))
    return Matrix(F, X.dim, X.dim * S.dim, cols)


def _section_system(X: Bimodule, side: str):
    S = X.algebra
    F = X.field
    n = X.dim
    idx = Matrix.identity(F, n)
    ids = Matrix.identity(F, S.dim)
    mu = multiplication_map(X, side)
    terms = [[(mu, idx)]]
    rhs = [idx]
    for k in range(S.dim):
        if side == "right":
            acts_free = idx.kron(S.right_mats[k])
            acts_x = X.right[k]
        else:
            acts_free = S.left_mats[k].kron(idx)
            acts_x = X.left[k]
        terms.append([(acts_free, idx), (Matrix.identity(F, n * S.dim).scale(-1), acts_x)])
        rhs.append(None)
    return terms, rhs, n * S.dim, n, ids


def compute_section(X: Bimodule, side: str = "right") -> Matrix:
    """A one-sided S-linear splitting of the multiplication X (x) S -> X
    (or S (x) X -> X for ``side='left'``); raises NotProjective if none exists."""
    mats = X.right if side == "right" else X.left
    if mats is None:
        raise ValidationError(f"module has no {side} action")
    terms, rhs, nr, nc, _ = _section_system(X, side)
    part, _ = solve_matrix_equation(X.field, nr, nc, terms, rhs)
    if part is None:
        raise NotProjective(f"no {side}-linear splitting exists", witness=side)
    return part


def is_projective(X: Bimodule, side: str = "right") -> bool:
    try:
        compute_section(X, side)
    except NotProjective:
        return False
    return True


def section_identities(X: Bimodule, rho: Matrix) -> dict:
    """The three splitting identities for a right section rho: X -> X (x) S."""
    S = X.algebra
    F = X.field
    n = X.dim
    mu = multiplication_map(X, "right")
    idx = Matrix.identity(F, n)
    unit_law = (mu @ rho) == idx
    linear = all(rho @ X.right[k] == idx.kron(S.right_mats[k]) @ rho for k in range(S.dim))
    # (rho (x) id_S) rho followed by multiplying the two S factors
    rho_id = rho.kron(Matrix.identity(F, S.dim))
    reorder_cols = []
    for i in range(n):
        for a in range(S.dim):
            for b in range(S.dim):
                reorder_cols.append({i * S.dim + k: x for k, x in S.mult[a][b].items()})
    mult_ss = Matrix(F, n * S.dim, n * S.dim * S.dim, reorder_cols)
    coassoc = (mult_ss @ rho_id @ rho) == rho
    return {"unit": unit_law, "right_linear": linear, "coassociative": coassoc}


# ---------------------------------------------------------------- maps

@dataclass
class BimoduleMap:
    source: Bimodule
    target: Bimodule
    matrix: Matrix


def is_bimodule_map(f: BimoduleMap, sides=("left", "right")) -> bool:
    src, tgt, m = f.source, f.target, f.matrix
    if m.shape != (tgt.dim, src.dim):
        return False
    for k in range(src.algebra.dim):
        if "left" in sides and m @ src.left[k] != tgt.left[k] @ m:
            return False
        if "right" in sides and m @ src.right[k] != tgt.right[k] @ m:
            return False
    return True


def hom_space(M: Bimodule, N: Bimodule, sides=("left", "right")) -> list[Matrix]:
    """Basis of the maps M -> N commuting with the requested actions."""
    _same_algebra(M, N)
    F = M.field
    terms = []
    idm = Matrix.identity(F, M.dim)
    idn = Matrix.identity(F, N.dim)
    for k in range(M.algebra.dim):
        if "left" in sides:
            terms.append([(idn, M.left[k]), (N.left[k].scale(-1), idm)])
        if "right" in sides:
            terms.append([(idn, M.right[k]), (N.right[k].scale(-1), idm)])
    if not terms:
        terms = [[(Matrix(F, 0, N.dim), idm)]]
    _, basis = solve_matrix_equation(F, N.dim, M.dim, terms, [None] * len(terms))
    return basis


def hom_right_S(M: Bimodule, N: Bimodule) -> list[Matrix]:
    return hom_space(M, N, sides=("right",))


def find_isomorphism(M: Bimodule, N: Bimodule, sides=("left", "right"),
                     seed: int = 0, budget: int = 64) -> Matrix | None:
    """Search the hom space for an invertible element; None means undecided."""
    if M.dim != N.dim:
        return None
    basis = hom_space(M, N, sides)
    if not basis:
        return None if M.dim else Matrix(M.field, 0, 0)
    F = M.field
    for b in basis:
        if b.rank() == M.dim:
            return b
    rng = random.Random(seed)
    for trial in range(budget):
        bound = 2 + trial // 8
        m = Matrix(F, N.dim, M.dim)
        for b in basis:
            m = m + b.scale(F.random_scalar(rng, bound))
        if m.rank() == M.dim:
            return m
    return None


def dual_bimodule(S: FiniteAlgebra) -> Bimodule:
    """D(S) = Hom(S, k) with (s f)(t) = f(t s) and (f s)(t) = f(s t)."""
    left = [S.right_mats[k].transpose() for k in range(S.dim)]
    right = [S.left_mats[k].transpose() for k in range(S.dim)]
    return Bimodule(S, S.dim, left, right, [f"{l}*" for l in S.labels])


def twist_left(S: FiniteAlgebra, sigma: Matrix) -> Bimodule:
    """The bimodule S with left action s.x = sigma(s) x."""
    if not S.is_automorphism(sigma):
        raise NotAutomorphism("twist map is not an algebra automorphism")
    left = [S.left_of(sigma.cols[k]) for k in range(S.dim)]
    return Bimodule(S, S.dim, left, list(S.right_mats), S.labels)


def opposite_bimodule(M: Bimodule, S_op: FiniteAlgebra) -> Bimodule:
    """M viewed over the opposite algebra: sides swap."""
    return Bimodule(S_op, M.dim, M.right, M.left, M.labels)
