"""Induced bimodules B (x) X (x)_base B over a graded algebra B, and the
bimodule maps between them determined by their values on generators.

``X`` is a right module over the base algebra (the degree 0 part of B, or
the ground field) concentrated in internal degree ``g``.  The degree d part
of the induced module is the direct sum over a + g + b = d of blocks
``B_a (x) (X (x)_base B_b)``; inside a block the basis element
``e_i (x) q`` has index ``i * dim(X (x) B_b) + q``.
"""

from __future__ import annotations

from .algebra import Bimodule, TensorSpace
from .errors import HomotopySolveFailed
from .exactlin import LinearSolver, Matrix, axpy


class InducedTerm:
    def __init__(self, alg, X: Bimodule, g: int, name: str = ""):
        self.alg = alg
        self.X = X
        self.g = g
        self.field = alg.field
        self.name = name
        self._spaces = {}
        self._layout = {}
        self._rmult = {}

    def space(self, b: int) -> TensorSpace:
        if b not in self._spaces:
            self._spaces[b] = TensorSpace(self.X, self.alg.piece(b))
        return self._spaces[b]

    def layout(self, d: int):
        """List of (a, b, offset, block_dim, q_dim) for internal degree d."""
        if d not in self._layout:
            out = []
            off = 0
            for a in range(d - self.g + 1):
                b = d - self.g - a
                q = self.space(b).dim
                size = self.alg.dim(a) * q
                out.append((a, b, off, size, q))
                off += size
            self._layout[d] = (out, off)
        return self._layout[d][0]

    def dim(self, d: int) -> int:
        if d < self.g:
            return 0
        self.layout(d)
        return self._layout[d][1]

    def _block(self, d, a):
        for blk in self.layout(d):
            if blk[0] == a:
                return blk
        raise KeyError((d, a))

    def element(self, d: int, a: int, a_vec: dict, xb_vec: dict) -> dict:
        """a_vec (x) xb_vec where xb_vec lies in X (x)_base B_b, b = d - g - a."""
        _, _, off, _, q = self._block(d, a)
        out = {}
        for i, x in a_vec.items():
            for k, y in xb_vec.items():
                out[off + i * q + k] = x * y
        return out

    def generator(self, x_vec: dict) -> dict:
        """1 (x) x (x) 1 in degree g."""
        ts = self.space(0)
        xb = ts.tensor(x_vec, self.alg.unit0)
        return self.element(self.g, 0, self.alg.unit0, xb)

    def pure(self, a: int, a_vec: dict, x_vec: dict, b: int, b_vec: dict) -> dict:
        ts = self.space(b)
        return self.element(a + self.g + b, a, a_vec, ts.tensor(x_vec, b_vec))

    def left_mult(self, vec: dict, d: int, c: int, u: int) -> dict:
        """e_u (in B_c) times an element of degree d."""
        out: dict = {}
        alg = self.alg
        for a, b, off, size, q in self.layout(d):
            m = alg.mult(c, a)
            da = alg.dim(a)
            _, _, noff, _, nq = self._block(d + c, a + c)
            for key in range(off, off + size):
                x = vec.get(key)
                if x is None:
                    continue
                i, k = divmod(key - off, q)
                for i2, y in m.cols[u * da + i].items():
                    nk = noff + i2 * nq + k
                    t = out.get(nk)
                    t = x * y if t is None else t + x * y
                    if t:
                        out[nk] = t
                    else:
                        del out[nk]
        return out

    def right_factor_map(self, b: int, c: int, u: int) -> Matrix:
        """X (x) B_b -> X (x) B_{b+c}, class of x (x) y -> x (x) y e_u."""
        key = (b, c, u)
        if key not in self._rmult:
            src, tgt = self.space(b), self.space(b + c)
            alg = self.alg
            m = alg.mult(b, c)
            db, dc, dbc = alg.dim(b), alg.dim(c), alg.dim(b + c)
            cols = []
            for qq in src.quotient.coords:
                x, y = divmod(qq, db)
                out: dict = {}
                for j, z in m.cols[y * dc + u].items():
                    axpy(out, z, tgt.projection.cols[x * dbc + j])
                cols.append(out)
            self._rmult[key] = Matrix(self.field, tgt.dim, src.dim, cols)
        return self._rmult[key]

    def right_mult(self, vec: dict, d: int, c: int, u: int) -> dict:
        out: dict = {}
        for a, b, off, size, q in self.layout(d):
            rm = self.right_factor_map(b, c, u)
            _, _, noff, _, nq = self._block(d + c, a)
            for key in range(off, off + size):
                x = vec.get(key)
                if x is None:
                    continue
                i, k = divmod(key - off, q)
                for k2, y in rm.cols[k].items():
                    nk = noff + i * nq + k2
                    t = out.get(nk)
                    t = x * y if t is None else t + x * y
                    if t:
                        out[nk] = t
                    else:
                        del out[nk]
        return out

    def basis_triples(self, d: int):
        """Yield (index, a, i, x, b, j): basis element e_i (x) x (x) e_j."""
        for a, b, off, size, q in self.layout(d):
            coords = self.space(b).quotient.coords
            db = self.alg.dim(b)
            for i in range(self.alg.dim(a)):
                for k, c in enumerate(coords):
                    x, j = divmod(c, db)
                    yield off + i * q + k, a, i, x, b, j


def extend_map(source: InducedTerm, target: InducedTerm, values: list, d: int) -> Matrix:
    """Matrix in degree d of the bimodule map with 1 (x) x_k (x) 1 -> values[k]."""
    cols = [None] * source.dim(d)
    cache = {}
    g = source.g
    for idx, a, i, x, b, j in source.basis_triples(d):
        key = (x, b, j)
        if key not in cache:
            v = values[x]
            cache[key] = target.right_mult(v, g, b, j) if v else {}
        w = cache[key]
        cols[idx] = target.left_mult(w, g + b, a, i) if w else {}
    return Matrix(source.field, target.dim(d), len(cols), cols)


def lift_through(diff: Matrix, rhs: list, target: InducedTerm | None = None,
                 rho: Matrix | None = None, degree: int = 0) -> list:
    """Solve diff(y_k) = rhs[k] for every k.

    ``degree`` is the internal degree of the solutions in ``target``.
    With a right section ``rho`` of the generator module (x -> sum x' (x) s),
    the raw solutions y0 are averaged to y(x) = sum y0(x') e_s, which is right
    linear in x whenever the right hand side is.
    """
    solver = LinearSolver(diff)
    raw = []
    for r in rhs:
        y = solver.solve(r)
        if y is None:
            raise HomotopySolveFailed("lifting equation has no solution")
        raw.append(y)
    if rho is None:
        return raw
    base_dim = target.alg.dim(0)
    out = []
    for k in range(len(rhs)):
        y: dict = {}
        for key, c in rho.cols[k].items():
            xp, s = divmod(key, base_dim)
            if raw[xp]:
                axpy(y, c, target.right_mult(raw[xp], degree, 0, s))
        out.append(y)
    return out
