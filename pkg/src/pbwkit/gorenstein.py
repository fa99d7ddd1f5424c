"""Artin-Schelter Gorenstein checks in a bounded degree window, the twisting
automorphism sigma of a rank one relation bimodule, and the deformations U_e."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .algebra import (
    Bimodule, FiniteAlgebra, TensorSpace, dual_bimodule, find_isomorphism, hom_space,
    is_projective, quotient_space, sub_bimodule, tensor_maps,
)
from .errors import DimMismatch, EOutsideSpace, NoFreeGenerator, SigmaNotAutomorphism
from .exactlin import LinearSolver, Matrix, Subspace, axpy, kernel, sparse
from .pbw import DeformationData, check_theorem_a, is_pbw_up_to
from .quadratic import QuadraticPresentation, koszul_generators
from .report import VerdictReport


def check_selfinjective(S: FiniteAlgebra) -> bool:
    """D(S) projective as a left S-module."""
    return is_projective(dual_bimodule(S), "left")


# ---------------------------------------------------------------- Ext(S_B, B)

def _flatten(m: Matrix) -> dict:
    out = {}
    for c, col in enumerate(m.cols):
        for r, x in col.items():
            out[c * m.nrows + r] = x
    return out


def _unflatten(field_, v: dict, nrows: int, ncols: int) -> Matrix:
    cols = [dict() for _ in range(ncols)]
    for k, x in v.items():
        c, r = divmod(k, nrows)
        cols[c][r] = x
    return Matrix(field_, nrows, ncols, cols)


class ExtComplex:
    """Hom_S(K_i, B_{i+j}) with f -> f.d, whose cohomology is Ext^i(S_B, B)_j."""

    def __init__(self, pres: QuadraticPresentation, i_max: int, window: tuple[int, int]):
        self.pres = pres
        self.i_max = i_max
        self.window = window
        top = i_max + 1 + window[1]
        self.B = pres.graded(max(top, 1))
        self.Kd = koszul_generators(pres, i_max + 1)
        self.field = pres.field
        self._kmods = {}
        self._lifts = {}
        self._homs = {}

    def kmod(self, i):
        """(K_i as a bimodule, inclusion into T_i)."""
        if i not in self._kmods:
            T = self.pres.tensor
            K = self.Kd.K[i]
            self._kmods[i] = sub_bimodule(T.module(i), K)
        return self._kmods[i]

    def lifts(self, i):
        """For each basis vector of K_{i+1}, a preimage in K_i (x)_k M (key k * dim M + m)."""
        if i not in self._lifts:
            T, F = self.pres.tensor, self.field
            M = self.pres.M
            Kmod, inc = self.kmod(i)
            src = TensorSpace(Kmod, M)
            if i == 0:
                amb = Matrix(F, M.dim, inc.ncols * M.dim,
                             [M.left_of(inc.cols[k]).cols[m] for k in range(inc.ncols)
                              for m in range(M.dim)])
                iota = amb @ src.section
            else:
                iota = tensor_maps(inc, Matrix.identity(F, M.dim), src, T.space(i + 1))
            solver = LinearSolver(iota)
            out = []
            for kv in self.Kd.K[i + 1].basis():
                y = solver.solve(kv)
                assert y is not None, "K_{i+1} is not inside K_i (x) M"
                out.append(src.section.apply(y))
            self._lifts[i] = out
        return self._lifts[i]

    def cochains(self, i, j) -> list[Matrix]:
        key = (i, j)
        if key not in self._homs:
            n = i + j
            if n < 0 or self.Kd.K[i].dim == 0:
                self._homs[key] = []
            else:
                self._homs[key] = hom_space(self.kmod(i)[0], self.B.piece(n), ("right",))
        return self._homs[key]

    def target_dim(self, i, j):
        n = i + j
        return (self.B.dim(n) if n >= 0 else 0), self.Kd.K[i].dim

    def coboundary(self, f: Matrix, i, j) -> Matrix:
        """(f.d)(x_1 .. x_{i+1}) = f(x_1 .. x_i) x_{i+1}."""
        F, B, dm = self.field, self.B, self.pres.M.dim
        n = i + j
        mult = B.mult(n, 1)
        cols = []
        for amb in self.lifts(i):
            out: dict = {}
            for key, c in amb.items():
                k, m = divmod(key, dm)
                for b, x in f.cols[k].items():
                    axpy(out, c * x, mult.cols[b * dm + m])
            cols.append(out)
        return Matrix(F, B.dim(n + 1), len(cols), cols)

    def _images(self, i, j) -> list[dict]:
        if i + 1 > self.Kd.n_max or self.Kd.K[i + 1].dim == 0:
            return []
        return [_flatten(self.coboundary(f, i, j)) for f in self.cochains(i, j)]

    def _rank(self, vecs, n):
        return Subspace.span(self.field, n, vecs).dim if vecs else 0

    def ext_dim(self, i, j) -> int:
        C = self.cochains(i, j)
        nr1, nc1 = self.target_dim(i + 1, j) if i + 1 <= self.Kd.n_max else (0, 0)
        r_out = self._rank(self._images(i, j), nr1 * nc1)
        r_in = 0
        if i >= 1:
            nr, nc = self.target_dim(i, j)
            r_in = self._rank(self._images(i - 1, j), nr * nc)
        return len(C) - r_out - r_in

    def table(self) -> dict:
        return {(i, j): self.ext_dim(i, j)
                for i in range(self.i_max + 1)
                for j in range(self.window[0], self.window[1] + 1)}

    def ext_module(self, i, j) -> Bimodule:
        """Ext^i_j with its left S-action (s f)(x) = s f(x)."""
        F, S = self.field, self.pres.S
        if i + j < 0:
            return Bimodule(S, 0, [Matrix(F, 0, 0)] * S.dim, None)
        nr, nc = self.target_dim(i, j)
        amb = nr * nc
        C = self.cochains(i, j)
        images = [_flatten(self.coboundary(f, i, j)) for f in C] if i + 1 <= self.Kd.n_max else []
        # cocycles: combinations of C killed by the coboundary
        nr1, nc1 = self.target_dim(i + 1, j) if i + 1 <= self.Kd.n_max else (0, 0)
        dmat = Matrix(F, nr1 * nc1, len(C), images) if images else Matrix(F, 0, len(C))
        Z = kernel(dmat)
        zvecs = []
        for z in Z.basis():
            v: dict = {}
            for k, x in z.items():
                axpy(v, x, _flatten(C[k]))
            zvecs.append(v)
        bvecs = self._images(i - 1, j) if i >= 1 else []
        Q = quotient_space(Subspace.span(F, amb, bvecs))
        Zq = Subspace.span(F, Q.dim, [Q.projection.apply(v) for v in zvecs])
        piece = self.B.piece(i + j)
        left = []
        for s in range(S.dim):
            cols = []
            for zb in Zq.basis():
                f = _unflatten(F, Q.section.apply(zb), nr, nc)
                g = piece.left[s] @ f
                cols.append(sparse(Zq.coordinates(Q.projection.apply(_flatten(g)))))
            left.append(Matrix(F, Zq.dim, Zq.dim, cols))
        return Bimodule(S, Zq.dim, left, None)


def ext_via_koszul(pres: QuadraticPresentation, i_max: int = 3,
                   window: tuple[int, int] = (-4, 4)) -> dict:
    """dim Ext^i(S_B, B)_j for i <= i_max and j in the window."""
    return ExtComplex(pres, i_max, window).table()


@dataclass
class GorensteinCertificate:
    d: int
    l: int
    window: tuple
    ext_table: dict
    selfinjective: bool
    ext_table_left: dict = field(default_factory=dict)
    report: VerdictReport | None = None

    @property
    def ok(self) -> bool:
        return self.report is not None and self.report.ok


def _side_checks(rep: VerdictReport, label: str, pres, d, l, window, seed, budget):
    cx = ExtComplex(pres, d + 1, window)
    table = cx.table()
    stray = [(i, j, x) for (i, j), x in table.items() if x and not (i == d and j == -l)]
    rep.add(f"{label}_vanishing", not stray, f"Ext^i_j = 0 off (d, -l) in window {window}",
            stray[0] if stray else None)
    if window[0] <= -l <= window[1]:
        ext = cx.ext_module(d, -l)
        D = dual_bimodule(pres.S)
        D = Bimodule(pres.S, D.dim, D.left, None)
        if ext.dim != D.dim:
            rep.add(f"{label}_top_is_dual", False, "Ext^d_{-l} and D(S) differ in dimension",
                    {"dim_ext": ext.dim, "dim_D": D.dim})
        else:
            iso = find_isomorphism(ext, D, sides=("left",), seed=seed, budget=budget)
            rep.add(f"{label}_top_is_dual", True if iso is not None else None,
                    "Ext^d_{-l} isomorphic to D(S) as a left S-module")
    else:
        rep.add(f"{label}_top_is_dual", False, f"degree {-l} lies outside the window",
                {"l": l, "window": list(window)})
    return table


def check_gorenstein(pres: QuadraticPresentation, d: int = 2, l: int = 2,
                     window: tuple[int, int] = (-4, 4), seed: int = 0,
                     budget: int = 64) -> GorensteinCertificate:
    rep = VerdictReport(f"AS-Gorenstein certificate d={d}, l={l}, window {list(window)}")
    selfinj = check_selfinjective(pres.S)
    rep.add("selfinjective", selfinj, "D(S) projective as a left S-module",
            None if selfinj else "no left-linear splitting of S (x) D(S) -> D(S)")
    right = _side_checks(rep, "right", pres, d, l, window, seed, budget)
    left = _side_checks(rep, "left", pres.opposite(), d, l, window, seed, budget)
    rep.tables["ext_right"] = [(i, j, x) for (i, j), x in sorted(right.items())]
    rep.tables["ext_left"] = [(i, j, x) for (i, j), x in sorted(left.items())]
    rep.info.update({"d": d, "l": l, "window": list(window)})
    return GorensteinCertificate(d, l, tuple(window), right, selfinj, left, rep)


# ---------------------------------------------------------------- sigma and U_e

@dataclass
class SigmaData:
    sigma: Matrix
    r0: dict            # in the coordinates of M (x)_S M
    e_space: Subspace
    r0_coords: dict     # in the basis of R


def _relation_module(pres):
    Rmod, inc = pres.relation_module()
    return Rmod, inc


def extract_sigma(pres: QuadraticPresentation, seed: int = 0, budget: int = 64) -> SigmaData:
    """r0 with r0.S = R freely, sigma with s r0 = r0 sigma(s), and the space of
    e with s e = e sigma(s)."""
    S, F = pres.S, pres.field
    Rmod, inc = _relation_module(pres)
    if Rmod.dim != S.dim:
        raise DimMismatch(f"dim R = {Rmod.dim} differs from dim S = {S.dim}")
    rng = random.Random(seed)
    candidates = [{k: F.one} for k in range(Rmod.dim)]
    r = solver = None
    for trial in range(budget):
        if trial < len(candidates):
            r = candidates[trial]
        else:
            r = {k: F.random_scalar(rng, 2 + trial // 8) for k in range(Rmod.dim)}
            r = {k: x for k, x in r.items() if x}
        mat = Matrix(F, Rmod.dim, S.dim, [Rmod.right[k].apply(r) for k in range(S.dim)])
        if mat.rank() == S.dim:
            solver = LinearSolver(mat)
            break
    if solver is None:
        raise NoFreeGenerator(f"no free right generator of R found in {budget} trials")
    cols = []
    for s in range(S.dim):
        x = solver.solve(Rmod.left[s].apply(r))
        cols.append(x)
    sigma = Matrix(F, S.dim, S.dim, cols)
    if not S.is_automorphism(sigma):
        witness = None
        for a in range(S.dim):
            for b in range(S.dim):
                if sigma.apply(S.mult[a][b]) != S.product(sigma.cols[a], sigma.cols[b]):
                    witness = (a, b)
                    break
            if witness:
                break
        raise SigmaNotAutomorphism("sigma is not an algebra automorphism", witness=witness)
    eqs = Matrix(F, 0, S.dim)
    for s in range(S.dim):
        eqs = eqs.vstack(S.left_mats[s] - S.right_of(sigma.cols[s]))
    return SigmaData(sigma, inc.apply(r), kernel(eqs), dict(r))


def build_U_e(pres: QuadraticPresentation, sd: SigmaData, e, n_max: int = 4,
              n_sat: int | None = None, deg_max: int = 4):
    """U_e = T_S(M)/(r0 - e): theta(r0 s) = e s.  Returns (deformation, report)
    where the report merges the structural prediction with the oracle verdict."""
    S, F = pres.S, pres.field
    e = e if isinstance(e, dict) else sparse(e)
    if not sd.e_space.contains(e):
        bad = None
        for s in range(S.dim):
            if S.product(S.basis_vector(s), e) != S.product(e, sd.sigma.cols[s]):
                bad = s
                break
        raise EOutsideSpace("s e = e sigma(s) fails", witness=bad)
    Rmod, inc = _relation_module(pres)
    gens, thetas = [], []
    for s in range(S.dim):
        gens.append(inc.apply(Rmod.right[s].apply(sd.r0_coords)))
        thetas.append(S.product(e, S.basis_vector(s)))
    defo = DeformationData.from_values(pres, gens, None, thetas)
    rep = VerdictReport("deformation U_e")
    pred = check_theorem_a(defo, deg_max)
    oracle = is_pbw_up_to(defo, n_max, n_sat)
    rep.merge(pred, prefix="theorem_a.")
    rep.merge(oracle, prefix="oracle.")
    p, o = pred.status_of("predicted_pbw"), oracle.status_of("pbw")
    agree = None if o is None else p == o
    rep.add("agreement", agree, "structural prediction equals the oracle verdict",
            None if agree is not False else {"predicted": p, "oracle": o})
    return defo, rep
