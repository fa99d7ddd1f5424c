"""Exact linear algebra over the rationals and prime fields.

Scalars are python-flint ``fmpq`` (rationals) or ``nmod`` (residues mod p).
Vectors are dictionaries ``{coordinate: nonzero scalar}``; a matrix stores
its columns as such dictionaries, so applying a map to a vector only touches
the columns the vector uses.  Dense lists are accepted wherever a vector is
expected.

Subspaces are kept in echelon form keyed by leading coordinate.  Because the
leading coordinates and the reduced basis of a subspace are unique, equality
of subspaces is equality of their reduced bases.
"""

from __future__ import annotations

import heapq
import random
from fractions import Fraction

import flint

from .errors import AmbientMismatch, DimMismatch, NotPrime, ParseError


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Field:
    """The rationals (``p is None``) or the prime field GF(p)."""

    def __init__(self, p: int | None = None):
        if p is not None:
            p = int(p)
            if not is_prime(p):
                raise NotPrime(f"{p} is not prime", witness=p)
            if p >= 2**62:
                raise NotPrime(f"modulus {p} too large", witness=p)
        self.p = p
        self.zero = self(0)
        self.one = self(1)

    @classmethod
    def rationals(cls) -> "Field":
        return cls(None)

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(p)

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def __call__(self, x):
        if self.p is None:
            if isinstance(x, flint.fmpq):
                return x
            if isinstance(x, Fraction):
                return flint.fmpq(x.numerator, x.denominator)
            if isinstance(x, str):
                return self.parse(x)
            if isinstance(x, flint.nmod):
                raise TypeError("residue used as a rational")
            return flint.fmpq(int(x))
        if isinstance(x, flint.nmod):
            if x.modulus() != self.p:
                raise TypeError("residue with the wrong modulus")
            return x
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, (Fraction, flint.fmpq)):
            num, den = (x.numerator, x.denominator) if isinstance(x, Fraction) else (int(x.p), int(x.q))
            if den % self.p == 0:
                raise ValueError(f"denominator divisible by {self.p}")
            return flint.nmod(num, self.p) / flint.nmod(den, self.p)
        return flint.nmod(int(x), self.p)

    def parse(self, text: str):
        s = text.strip()
        try:
            if "/" in s:
                a, b = s.split("/")
                num, den = int(a), int(b)
                if den == 0:
                    raise ParseError(f"zero denominator in {text!r}")
                if self.p is None:
                    return flint.fmpq(num, den)
                return self(Fraction(num, den))
            return self(int(s))
        except ValueError as exc:
            raise ParseError(f"bad scalar {text!r}") from exc

    def format(self, x) -> str:
        if self.p is None:
            return str(x.p) if x.q == 1 else f"{x.p}/{x.q}"
        return str(int(x))

    def random_scalar(self, rng: random.Random, bound: int = 3):
        if self.p is None:
            return flint.fmpq(rng.randint(-bound, bound))
        return flint.nmod(rng.randrange(self.p), self.p)

    def elements(self):
        """All elements of a prime field, for brute force checks."""
        if self.p is None:
            raise ValueError("the rationals are infinite")
        return [flint.nmod(i, self.p) for i in range(self.p)]

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "Q" if self.p is None else f"GF({self.p})"


QQ = Field()


# ---------------------------------------------------------------- vectors

def sparse(v) -> dict:
    """Dense list or dict -> dict without zero entries."""
    if isinstance(v, dict):
        return {k: x for k, x in v.items() if x}
    return {i: x for i, x in enumerate(v) if x}


def dense(v: dict, n: int, field: Field) -> list:
    out = [field.zero] * n
    for k, x in v.items():
        out[k] = x
    return out


def axpy(v: dict, c, w: dict) -> None:
    """v += c*w in place."""
    for k, x in w.items():
        old = v.get(k)
        if old is None:
            v[k] = c * x
        else:
            t = old + c * x
            if t:
                v[k] = t
            else:
                del v[k]


def add_vec(v: dict, w: dict, c=1) -> dict:
    out = dict(v)
    axpy(out, c, w)
    return out


def scale_vec(v: dict, c) -> dict:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def random_vector(field: Field, n: int, rng: random.Random, bound: int = 3) -> dict:
    return sparse([field.random_scalar(rng, bound) for _ in range(n)])


# ---------------------------------------------------------------- matrices

class Matrix:
    """A linear map k^ncols -> k^nrows, stored by sparse columns."""

    __slots__ = ("field", "nrows", "ncols", "cols")

    def __init__(self, field: Field, nrows: int, ncols: int, cols=None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        if cols is None:
            cols = [{} for _ in range(ncols)]
        if len(cols) != ncols:
            raise DimMismatch(f"expected {ncols} columns, got {len(cols)}")
        self.cols = cols

    @classmethod
    def zeros(cls, field, nrows, ncols):
        return cls(field, nrows, ncols)

    @classmethod
    def identity(cls, field, n):
        return cls(field, n, n, [{i: field.one} for i in range(n)])

    @classmethod
    def from_rows(cls, field, rows, ncols=None):
        rows = [[field(x) for x in r] for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        cols = [{} for _ in range(ncols)]
        for i, r in enumerate(rows):
            if len(r) != ncols:
                raise DimMismatch("ragged rows")
            for j, x in enumerate(r):
                if x:
                    cols[j][i] = x
        return cls(field, len(rows), ncols, cols)

    @classmethod
    def from_columns(cls, field, nrows, cols):
        return cls(field, nrows, len(cols), [sparse(c) for c in cols])

    def rows(self) -> list[dict]:
        out = [{} for _ in range(self.nrows)]
        for j, c in enumerate(self.cols):
            for i, x in c.items():
                out[i][j] = x
        return out

    def to_rows(self) -> list[list]:
        return [dense(r, self.ncols, self.field) for r in self.rows()]

    def entry(self, i, j):
        return self.cols[j].get(i, self.field.zero)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.ncols, self.nrows, self.rows())

    def apply(self, v) -> dict:
        if not isinstance(v, dict):
            v = sparse(v)
        out: dict = {}
        cols = self.cols
        for j, x in v.items():
            axpy(out, x, cols[j])
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise DimMismatch(f"cannot compose {self.shape} with {other.shape}")
        return Matrix(self.field, self.nrows, other.ncols, [self.apply(c) for c in other.cols])

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def _check_same(self, other):
        if self.shape != other.shape:
            raise DimMismatch(f"shape {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check_same(other)
        return Matrix(self.field, self.nrows, self.ncols,
                      [add_vec(a, b) for a, b in zip(self.cols, other.cols)])

    def __sub__(self, other):
        self._check_same(other)
        minus = -self.field.one
        return Matrix(self.field, self.nrows, self.ncols,
                      [add_vec(a, b, minus) for a, b in zip(self.cols, other.cols)])

    def __neg__(self):
        return self.scale(-self.field.one)

    def scale(self, c):
        c = self.field(c)
        return Matrix(self.field, self.nrows, self.ncols, [scale_vec(a, c) for a in self.cols])

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.shape == other.shape
                and all(a == b for a, b in zip(self.cols, other.cols)))

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(self.cols)

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product; basis e_i (x) e_j has index i*dim2 + j."""
        m2, n2 = other.nrows, other.ncols
        cols = []
        for a in self.cols:
            for b in other.cols:
                c = {}
                for i, x in a.items():
                    base = i * m2
                    for k, y in b.items():
                        c[base + k] = x * y
                cols.append(c)
        return Matrix(self.field, self.nrows * m2, self.ncols * n2, cols)

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise DimMismatch("hstack row mismatch")
        return Matrix(self.field, self.nrows, self.ncols + other.ncols, self.cols + other.cols)

    def vstack(self, other):
        if self.ncols != other.ncols:
            raise DimMismatch("vstack column mismatch")
        off = self.nrows
        cols = []
        for a, b in zip(self.cols, other.cols):
            c = dict(a)
            for i, x in b.items():
                c[i + off] = x
            cols.append(c)
        return Matrix(self.field, self.nrows + other.nrows, self.ncols, cols)

    def select_columns(self, idx):
        return Matrix(self.field, self.nrows, len(idx), [self.cols[j] for j in idx])

    def rank(self) -> int:
        return Subspace.span(self.field, self.nrows, self.cols).dim

    def image(self) -> "Subspace":
        return Subspace.span(self.field, self.nrows, self.cols)

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols} over {self.field})"


def block_matrix(field, row_dims, col_dims, blocks: dict) -> Matrix:
    """Assemble from ``{(block_row, block_col): Matrix}``."""
    roff = [0]
    for d in row_dims:
        roff.append(roff[-1] + d)
    coff = [0]
    for d in col_dims:
        coff.append(coff[-1] + d)
    cols = [{} for _ in range(coff[-1])]
    for (bi, bj), m in blocks.items():
        if m.shape != (row_dims[bi], col_dims[bj]):
            raise DimMismatch(f"block {(bi, bj)} has shape {m.shape}")
        for j, c in enumerate(m.cols):
            tgt = cols[coff[bj] + j]
            axpy(tgt, field.one, {roff[bi] + i: x for i, x in c.items()})
    return Matrix(field, roff[-1], coff[-1], cols)


# ---------------------------------------------------------------- echelon core

class _Echelon:
    """Rows with distinct leading coordinates, optionally tracking how each
    row was combined from the inserted vectors."""

    def __init__(self, field: Field, track: bool = False):
        self.field = field
        self.rows: dict[int, dict] = {}
        self.track = track
        self.combos: dict[int, dict] = {}

    def reduce(self, v: dict, combo: dict | None = None):
        rows = self.rows
        if not rows:
            return v, combo
        heap = [k for k in v if k in rows]
        heapq.heapify(heap)
        while heap:
            k = heapq.heappop(heap)
            c = v.get(k)
            if c is None:
                continue
            row = rows[k]
            neg = -c
            for j, x in row.items():
                old = v.get(j)
                if old is None:
                    v[j] = neg * x
                    if j in rows:
                        heapq.heappush(heap, j)
                else:
                    t = old + neg * x
                    if t:
                        v[j] = t
                    else:
                        del v[j]
            if combo is not None:
                axpy(combo, neg, self.combos[k])
        return v, combo

    def insert(self, v: dict, tag=None):
        """Insert a vector; returns the reduced remainder (empty if dependent)
        and, when tracking, the combination expressing it."""
        v = dict(v)
        combo = {tag: self.field.one} if self.track else None
        v, combo = self.reduce(v, combo)
        if v:
            lead = min(v)
            inv = 1 / v[lead]
            if inv != 1:
                v = {k: inv * x for k, x in v.items()}
                if combo is not None:
                    combo = scale_vec(combo, inv)
            self.rows[lead] = v
            if combo is not None:
                self.combos[lead] = combo
        return v, combo

    def reduced_rows(self) -> dict[int, dict]:
        """Back substitution: every row becomes zero at all other leads."""
        out: dict[int, dict] = {}
        done = _Echelon(self.field)
        for lead in sorted(self.rows, reverse=True):
            row = dict(self.rows[lead])
            c = row.pop(lead)
            row, _ = done.reduce(row)
            row[lead] = c
            done.rows[lead] = row
            out[lead] = row
        return out


# ---------------------------------------------------------------- subspaces

class Subspace:
    """A subspace of k^ambient_dim with canonical reduced echelon basis."""

    __slots__ = ("field", "ambient_dim", "_ech", "_basis")

    def __init__(self, field: Field, ambient_dim: int, ech: _Echelon):
        self.field = field
        self.ambient_dim = ambient_dim
        self._ech = ech
        self._basis = None

    @classmethod
    def span(cls, field, ambient_dim, vectors) -> "Subspace":
        ech = _Echelon(field)
        for v in vectors:
            v = v if isinstance(v, dict) else sparse([field(x) for x in v])
            if v and max(v) >= ambient_dim:
                raise AmbientMismatch(f"vector coordinate outside k^{ambient_dim}")
            if v:
                ech.insert(v)
        return cls(field, ambient_dim, ech)

    @classmethod
    def zero(cls, field, n):
        return cls(field, n, _Echelon(field))

    @classmethod
    def full(cls, field, n):
        ech = _Echelon(field)
        ech.rows = {i: {i: field.one} for i in range(n)}
        return cls(field, n, ech)

    @classmethod
    def coordinate(cls, field, n, coords):
        ech = _Echelon(field)
        ech.rows = {i: {i: field.one} for i in coords}
        return cls(field, n, ech)

    @property
    def dim(self) -> int:
        return len(self._ech.rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._ech.rows)

    def basis(self) -> list[dict]:
        """Reduced echelon basis, ordered by pivot."""
        if self._basis is None:
            red = self._ech.reduced_rows()
            self._basis = [red[k] for k in sorted(red)]
        return self._basis

    def basis_matrix(self) -> Matrix:
        """Matrix whose columns are the basis vectors."""
        return Matrix(self.field, self.ambient_dim, self.dim, [dict(b) for b in self.basis()])

    def basis_rows(self) -> list[list]:
        return [dense(b, self.ambient_dim, self.field) for b in self.basis()]

    def reduce(self, v) -> dict:
        v = dict(v) if isinstance(v, dict) else sparse([self.field(x) for x in v])
        return self._ech.reduce(v)[0]

    def contains(self, v) -> bool:
        return not self.reduce(v)

    def coordinates(self, v) -> list:
        """Coefficients of v in basis(); raises ValueError if v is outside."""
        v = v if isinstance(v, dict) else sparse([self.field(x) for x in v])
        coeffs = [v.get(p, self.field.zero) for p in self.pivots]
        rest = dict(v)
        for c, b in zip(coeffs, self.basis()):
            if c:
                axpy(rest, -c, b)
        if rest:
            raise ValueError("vector is not in the subspace")
        return coeffs

    def _check(self, other):
        if self.ambient_dim != other.ambient_dim or self.field != other.field:
            raise AmbientMismatch(f"ambient k^{self.ambient_dim} vs k^{other.ambient_dim}")

    def sum(self, other) -> "Subspace":
        self._check(other)
        return Subspace.span(self.field, self.ambient_dim, list(self.basis()) + list(other.basis()))

    __add__ = sum

    def intersect(self, other) -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient_dim)
        if self.dim > other.dim:
            small, big = other, self
        else:
            small, big = self, other
        # x = sum c_i b_i lies in big iff sum c_i reduce_big(b_i) = 0
        images = Matrix(self.field, self.ambient_dim, small.dim,
                        [big.reduce(b) for b in small.basis()])
        ker = kernel(images)
        basis = small.basis()
        vecs = []
        for c in ker.basis():
            v: dict = {}
            for i, x in c.items():
                axpy(v, x, basis[i])
            vecs.append(v)
        return Subspace.span(self.field, self.ambient_dim, vecs)

    __and__ = intersect

    def is_subspace_of(self, other) -> bool:
        self._check(other)
        return all(other.contains(b) for b in self.basis())

    def complement(self) -> list[int]:
        """Coordinates whose standard vectors span a direct complement."""
        piv = set(self._ech.rows)
        return [i for i in range(self.ambient_dim) if i not in piv]

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim
                and self.field == other.field and self.basis() == other.basis())

    __hash__ = None

    def __repr__(self):
        return f"Subspace(dim {self.dim} in k^{self.ambient_dim} over {self.field})"


# ---------------------------------------------------------------- free functions

def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form of m (same shape) and its pivot columns."""
    row_space = Subspace.span(m.field, m.ncols, m.rows())
    basis = row_space.basis()
    rows = [dense(b, m.ncols, m.field) for b in basis]
    rows += [[m.field.zero] * m.ncols for _ in range(m.nrows - len(rows))]
    return Matrix.from_rows(m.field, rows, m.ncols), row_space.pivots


def rank(m: Matrix) -> int:
    return m.rank()


def kernel(m: Matrix) -> Subspace:
    ech = _Echelon(m.field, track=True)
    vecs = []
    for j, c in enumerate(m.cols):
        rem, combo = ech.insert(c, tag=j)
        if not rem:
            vecs.append(combo)
    return Subspace.span(m.field, m.ncols, vecs)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    return a.intersect(b)


def sum_spaces(a: Subspace, b: Subspace) -> Subspace:
    return a.sum(b)


def contains(a: Subspace, v) -> bool:
    return a.contains(v)


def complement(a: Subspace) -> list[int]:
    return a.complement()


class LinearSolver:
    """Factorises m once and solves m x = b for many right hand sides."""

    def __init__(self, m: Matrix):
        self.m = m
        self.ech = _Echelon(m.field, track=True)
        self.null = []
        for j, c in enumerate(m.cols):
            rem, combo = self.ech.insert(c, tag=j)
            if not rem:
                self.null.append(combo)

    def kernel(self) -> "Subspace":
        return Subspace.span(self.m.field, self.m.ncols, self.null)

    def solve(self, rhs) -> dict | None:
        rhs = rhs if isinstance(rhs, dict) else sparse(rhs)
        if rhs and max(rhs) >= self.m.nrows:
            raise DimMismatch("right hand side too long")
        rem, combo = self.ech.reduce(dict(rhs), {})
        if rem:
            return None
        return scale_vec(combo, -self.m.field.one)


def solve_affine(m: Matrix, rhs):
    """Some x with m x = rhs (dense list), or None when inconsistent."""
    if not isinstance(rhs, dict) and len(rhs) != m.nrows:
        raise DimMismatch(f"rhs has length {len(rhs)}, expected {m.nrows}")
    x = LinearSolver(m).solve(rhs)
    if x is None:
        return None
    return dense(x, m.ncols, m.field)


def solve_matrix_equation(field, nrows, ncols, terms, rhs: Matrix | None = None):
    """Solve sum_t A_t X B_t = C for X (nrows x ncols).

    ``terms`` is a list of lists of (A, B) pairs, one list per equation, and
    ``rhs`` a matching list of matrices (or None for homogeneous).  Returns
    (particular solution or None, list of homogeneous basis matrices).
    Unknown X[i][j] has index j*nrows + i.
    """
    nunk = nrows * ncols
    cols = [{} for _ in range(nunk)]
    rhs_vec: dict = {}
    off = 0
    for eq_index, eq in enumerate(terms):
        out_rows = None
        for A, B in eq:
            out_rows = A.nrows
            # (A X B)[:, q] = sum_j B[j, q] * A X[:, j];  X[:, j] = sum_i X_ij e_i
            for q, bcol in enumerate(B.cols):
                for j, bjq in bcol.items():
                    for i in range(nrows):
                        acol = A.cols[i]
                        if not acol:
                            continue
                        tgt = cols[j * nrows + i]
                        for r, a in acol.items():
                            key = off + q * out_rows + r
                            old = tgt.get(key)
                            val = a * bjq if old is None else old + a * bjq
                            if val:
                                tgt[key] = val
                            else:
                                tgt.pop(key, None)
            eq_cols = B.ncols
        if rhs is not None and rhs[eq_index] is not None:
            C = rhs[eq_index]
            for q, c in enumerate(C.cols):
                for r, x in c.items():
                    rhs_vec[off + q * C.nrows + r] = x
        off += out_rows * eq_cols
    system = Matrix(field, off, nunk, cols)

    def to_mat(v):
        mc = [{} for _ in range(ncols)]
        for k, x in v.items():
            mc[k // nrows][k % nrows] = x
        return Matrix(field, nrows, ncols, mc)

    solver = LinearSolver(system)
    part = solver.solve(rhs_vec)
    hom = [to_mat(b) for b in solver.kernel().basis()]
    return (to_mat(part) if part is not None else None), hom
