"""Exact linear algebra over the rationals and the Gaussian rationals.

Rational scalars are ``gmpy2.mpq`` values (always stored in lowest terms with a
positive denominator).  Gaussian rationals are :class:`CScalar`.  Matrices are
immutable row tuples; subspaces are stored by the reduced row-echelon form of a
spanning set, so two equal subspaces compare equal structurally.

Nothing in this module touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

from .errors import AmbientMismatch, ContainmentError

Scalar = type(mpq())
ZERO = mpq(0)
ONE = mpq(1)


def Q(x, den=None) -> Scalar:
    """Coerce ``x`` (int, str ``"p/q"``, Fraction, mpq) to an exact rational."""
    if den is not None:
        return mpq(x, den)
    if type(x) is Scalar:
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty rational literal")
        try:
            return mpq(s)
        except (ValueError, TypeError) as exc:
            raise ValueError(f"malformed rational literal {x!r}") from exc
    if isinstance(x, CScalar):
        if x.im:
            raise TypeError(f"{x} is not real")
        return x.re
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted")
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def _mk(re, im) -> "CScalar":
    z = object.__new__(CScalar)
    z.re = re
    z.im = im
    return z


class CScalar:
    """A Gaussian rational ``re + im*i`` with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Q(re)
        self.im = Q(im)

    @staticmethod
    def _parts(o):
        t = type(o)
        if t is CScalar:
            return o.re, o.im
        if t is Scalar:
            return o, ZERO
        if t is int:
            return mpq(o), ZERO
        if isinstance(o, Fraction):
            return Q(o), ZERO
        return None

    def __add__(self, o):
        p = self._parts(o)
        if p is None:
            return NotImplemented
        return _mk(self.re + p[0], self.im + p[1])

    __radd__ = __add__

    def __sub__(self, o):
        p = self._parts(o)
        if p is None:
            return NotImplemented
        return _mk(self.re - p[0], self.im - p[1])

    def __rsub__(self, o):
        p = self._parts(o)
        if p is None:
            return NotImplemented
        return _mk(p[0] - self.re, p[1] - self.im)

    def __mul__(self, o):
        t = type(o)
        if t is CScalar:
            a, b, c, d = self.re, self.im, o.re, o.im
            return _mk(a * c - b * d, a * d + b * c)
        p = self._parts(o)
        if p is None:
            return NotImplemented
        return _mk(self.re * p[0], self.im * p[0])

    __rmul__ = __mul__

    def __truediv__(self, o):
        p = self._parts(o)
        if p is None:
            return NotImplemented
        c, d = p
        if d == 0:
            return _mk(self.re / c, self.im / c)
        n = c * c + d * d
        a, b = self.re, self.im
        return _mk((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, o):
        p = self._parts(o)
        if p is None:
            return NotImplemented
        return _mk(*p) / self

    def __neg__(self):
        return _mk(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if k < 0:
            return (ONE / self) ** (-k)
        out = _mk(ONE, ZERO)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "CScalar":
        return _mk(self.re, -self.im)

    def norm(self) -> Scalar:
        """The rational number ``z * conj(z)``."""
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        p = self._parts(o)
        if p is None:
            return NotImplemented
        return self.re == p[0] and self.im == p[1]

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def is_real(self) -> bool:
        return not self.im

    def __repr__(self):
        return f"CScalar({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


I = _mk(ZERO, ONE)


def conj(x):
    """Complex conjugate of a scalar (rationals are returned unchanged)."""
    if type(x) is CScalar:
        return x.conjugate()
    return x


def to_scalar(x):
    """Normalize an entry: CScalar with zero imaginary part stays complex."""
    if type(x) is CScalar or type(x) is Scalar:
        return x
    if isinstance(x, complex):
        raise TypeError("floating complex values are not accepted")
    return Q(x)


def real_part(x) -> Scalar:
    return x.re if type(x) is CScalar else x


def imag_part(x) -> Scalar:
    return x.im if type(x) is CScalar else ZERO


# --------------------------------------------------------------------------
# vectors (plain tuples)


def vec(entries: Iterable) -> tuple:
    return tuple(to_scalar(x) for x in entries)


def vadd(u, v) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v) -> tuple:
    return tuple(c * a for a in v)


def vconj(v) -> tuple:
    return tuple(conj(a) for a in v)


def vre(v) -> tuple:
    return tuple(real_part(a) for a in v)


def vim(v) -> tuple:
    return tuple(imag_part(a) for a in v)


def dot(u, v):
    s = ZERO
    for a, b in zip(u, v):
        if a and b:
            s = s + a * b
    return s


def is_zero_vector(v) -> bool:
    return not any(v)


def unit(n: int, i: int) -> tuple:
    return tuple(ONE if j == i else ZERO for j in range(n))


def lin_comb(coeffs, vectors, n: int) -> tuple:
    out = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for j, a in enumerate(v):
                if a:
                    out[j] = out[j] + c * a
    return tuple(out)


# --------------------------------------------------------------------------
# matrices


class Matrix:
    """Immutable dense matrix of exact scalars acting on column vectors."""

    __slots__ = ("rows", "nrows", "ncols", "_nz")

    def __init__(self, rows: Sequence[Sequence], ncols: int | None = None):
        self.rows = tuple(tuple(r) for r in rows)
        self.nrows = len(self.rows)
        if ncols is None:
            if not self.rows:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(self.rows[0])
        self.ncols = ncols
        for r in self.rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        self._nz = None

    @classmethod
    def from_rows(cls, data, ncols: int | None = None) -> "Matrix":
        return cls([[to_scalar(x) for x in row] for row in data], ncols)

    @classmethod
    def from_columns(cls, cols, nrows: int | None = None) -> "Matrix":
        cols = [tuple(c) for c in cols]
        if not cols:
            if nrows is None:
                raise ValueError("nrows required")
            return cls([() for _ in range(nrows)], 0)
        return cls(list(zip(*cols)), len(cols))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls([(ZERO,) * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([unit(n, i) for i in range(n)], n)

    @classmethod
    def diag(cls, entries) -> "Matrix":
        entries = [to_scalar(x) for x in entries]
        n = len(entries)
        return cls([tuple(entries[i] if i == j else ZERO for j in range(n)) for i in range(n)], n)

    @classmethod
    def from_sparse(cls, nrows: int, ncols: int, entries: dict) -> "Matrix":
        rows = [[ZERO] * ncols for _ in range(nrows)]
        for (i, j), v in entries.items():
            if v:
                rows[i][j] = v
        return cls(rows, ncols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, idx):
        if isinstance(idx, tuple):
            i, j = idx
            return self.rows[i][j]
        return self.rows[idx]

    def nonzero(self):
        """Per-row lists of ``(column, value)`` for nonzero entries (cached)."""
        if self._nz is None:
            self._nz = [[(j, a) for j, a in enumerate(r) if a] for r in self.rows]
        return self._nz

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> "Matrix":
        if self.nrows == 0:
            return Matrix([() for _ in range(self.ncols)], 0)
        return Matrix(list(zip(*self.rows)), self.nrows)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise AmbientMismatch(f"cannot multiply {self.shape} by {other.shape}")
            bnz = other.nonzero()
            n = other.ncols
            out = []
            for arow in self.nonzero():
                acc = [ZERO] * n
                for k, a in arow:
                    for j, b in bnz[k]:
                        acc[j] = acc[j] + a * b
                out.append(acc)
            return Matrix(out, n)
        v = tuple(other)
        if len(v) != self.ncols:
            raise AmbientMismatch(f"cannot apply {self.shape} matrix to length-{len(v)} vector")
        out = []
        for arow in self.nonzero():
            s = ZERO
            for k, a in arow:
                b = v[k]
                if b:
                    s = s + a * b
            out.append(s)
        return tuple(out)

    def apply(self, v) -> tuple:
        return self @ v

    def apply_sparse(self, v: dict) -> dict:
        """Apply to a sparse vector ``{index: value}``; returns a sparse vector."""
        cols = self._sparse_columns()
        out: dict = {}
        for k, b in v.items():
            for i, a in cols[k]:
                s = out.get(i, ZERO) + a * b
                if s:
                    out[i] = s
                else:
                    out.pop(i, None)
        return out

    def _sparse_columns(self):
        cols = [[] for _ in range(self.ncols)]
        for i, row in enumerate(self.nonzero()):
            for j, a in row:
                cols[j].append((i, a))
        return cols

    def _binary(self, other, op) -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            raise AmbientMismatch(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix([tuple(op(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)], self.ncols)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __neg__(self):
        return Matrix([tuple(-a for a in r) for r in self.rows], self.ncols)

    def scale(self, c) -> "Matrix":
        c = to_scalar(c)
        return Matrix([tuple(c * a for a in r) for r in self.rows], self.ncols)

    def __mul__(self, c):
        if isinstance(c, Matrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Matrix":
        if self.nrows != self.ncols:
            raise AmbientMismatch("power of a non-square matrix")
        if k < 0:
            return inverse(self) ** (-k)
        out = Matrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            k >>= 1
            if k:
                base = base @ base
        return out

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.rows[i][j] == self.rows[j][i] for i in range(self.nrows) for j in range(i)
        )

    def is_diagonal(self) -> bool:
        return self.is_square() and all(
            not a for i, r in enumerate(self.rows) for j, a in enumerate(r) if i != j
        )

    def is_complex(self) -> bool:
        return any(type(a) is CScalar and a.im for r in self.rows for a in r)

    def conjugate(self) -> "Matrix":
        return Matrix([vconj(r) for r in self.rows], self.ncols)

    def real(self) -> "Matrix":
        return Matrix([vre(r) for r in self.rows], self.ncols)

    def imag(self) -> "Matrix":
        return Matrix([vim(r) for r in self.rows], self.ncols)

    def trace(self):
        s = ZERO
        for i in range(min(self.nrows, self.ncols)):
            s = s + self.rows[i][i]
        return s

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix([tuple(self.rows[i][j] for j in cols) for i in rows], len(cols))

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise AmbientMismatch("row count mismatch")
        return Matrix([a + b for a, b in zip(self.rows, other.rows)], self.ncols + other.ncols)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise AmbientMismatch("column count mismatch")
        return Matrix(self.rows + other.rows, self.ncols)

    def kron(self, other: "Matrix") -> "Matrix":
        rows = []
        for r in self.rows:
            for s in other.rows:
                rows.append(tuple(a * b if a and b else ZERO for a in r for b in s))
        return Matrix(rows, self.ncols * other.ncols)

    def to_lists(self) -> list[list]:
        return [list(r) for r in self.rows]

    def __repr__(self):
        body = "; ".join(" ".join(str(a) for a in r) for r in self.rows)
        return f"Matrix({self.nrows}x{self.ncols}: [{body}])"


def outer(u, v) -> Matrix:
    return Matrix([tuple(a * b if a and b else ZERO for b in v) for a in u], len(v))


# --------------------------------------------------------------------------
# elimination


def _rref_rows(rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """In-place Gauss-Jordan elimination; returns nonzero rows and pivots."""
    pivots: list[int] = []
    nrows = len(rows)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        lead = prow[c]
        if lead != 1:
            inv = ONE / lead
            prow = [a * inv if a else a for a in prow]
            prow[c] = ONE
            rows[r] = prow
        nz = [j for j in range(c + 1, ncols) if prow[j]]
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if f:
                for j in nz:
                    row[j] = row[j] - f * prow[j]
                row[c] = ZERO
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def rref(M: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form and pivot columns; zero rows are kept at the bottom."""
    rows = [list(r) for r in M.rows]
    red, pivots = _rref_rows(rows, M.ncols)
    full = [tuple(r) for r in red] + [(ZERO,) * M.ncols] * (M.nrows - len(red))
    return Matrix(full, M.ncols), pivots


def rank(M: Matrix) -> int:
    _, pivots = _rref_rows([list(r) for r in M.rows], M.ncols)
    return len(pivots)


def _nullspace_rows(red: list[list], pivots: list[int], ncols: int) -> list[tuple]:
    pivset = set(pivots)
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(red, pivots):
            a = row[f]
            if a:
                v[p] = -a
        out.append(tuple(v))
    return out


def kernel(M: Matrix) -> "Subspace":
    """Right kernel ``{v : M v = 0}``."""
    red, pivots = _rref_rows([list(r) for r in M.rows], M.ncols)
    return Subspace.span(_nullspace_rows(red, pivots, M.ncols), M.ncols)


def image(M: Matrix) -> "Subspace":
    """Column space of ``M``."""
    return Subspace.span(M.T.rows, M.nrows)


def inverse(M: Matrix) -> Matrix:
    if not M.is_square():
        raise AmbientMismatch("inverse of a non-square matrix")
    n = M.nrows
    aug = [list(r) + list(unit(n, i)) for i, r in enumerate(M.rows)]
    red, pivots = _rref_rows(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("matrix is singular")
    return Matrix([tuple(r[n:]) for r in red], n)


def det(M: Matrix):
    if not M.is_square():
        raise AmbientMismatch("determinant of a non-square matrix")
    rows = [list(r) for r in M.rows]
    n = M.nrows
    d = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            d = -d
        p = rows[c][c]
        d = d * p
        for i in range(c + 1, n):
            f = rows[i][c]
            if f:
                f = f / p
                for j in range(c, n):
                    rows[i][j] = rows[i][j] - f * rows[c][j]
    return d


def solve(M: Matrix, b) -> tuple | None:
    """One solution ``x`` of ``M x = b``, or ``None`` when inconsistent."""
    n = M.ncols
    aug = [list(r) + [to_scalar(bi)] for r, bi in zip(M.rows, b)]
    red, pivots = _rref_rows(aug, n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = [ZERO] * n
    for row, p in zip(red, pivots):
        x[p] = row[n]
    return tuple(x)


# --------------------------------------------------------------------------
# subspaces


class Subspace:
    """A subspace of ``K^ambient`` stored by its reduced row-echelon basis."""

    __slots__ = ("basis", "pivots", "ambient")

    def __init__(self, basis: tuple, pivots: tuple, ambient: int):
        self.basis = basis
        self.pivots = pivots
        self.ambient = ambient

    @classmethod
    def span(cls, vectors, ambient: int) -> "Subspace":
        rows = [list(v) for v in vectors]
        for r in rows:
            if len(r) != ambient:
                raise AmbientMismatch(f"vector of length {len(r)} in ambient dimension {ambient}")
        red, pivots = _rref_rows(rows, ambient)
        return cls(tuple(tuple(r) for r in red), tuple(pivots), ambient)

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls((), (), ambient)

    @classmethod
    def full(cls, ambient: int) -> "Subspace":
        return cls(tuple(unit(ambient, i) for i in range(ambient)), tuple(range(ambient)), ambient)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def matrix(self) -> Matrix:
        return Matrix(self.basis, self.ambient)

    def is_complex(self) -> bool:
        return any(type(a) is CScalar and a.im for r in self.basis for a in r)

    def _check(self, other: "Subspace"):
        if self.ambient != other.ambient:
            raise AmbientMismatch(f"ambient dimensions {self.ambient} and {other.ambient} differ")

    def reduce(self, v) -> list:
        """Remainder of ``v`` after eliminating the pivot coordinates."""
        w = list(v)
        if len(w) != self.ambient:
            raise AmbientMismatch(f"vector of length {len(w)} in ambient dimension {self.ambient}")
        for row, p in zip(self.basis, self.pivots):
            f = w[p]
            if f:
                for j, a in enumerate(row):
                    if a:
                        w[j] = w[j] - f * a
        return w

    def contains(self, v) -> bool:
        return not any(self.reduce(v))

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def coordinates(self, v) -> tuple:
        """Coordinates of ``v`` in the echelon basis; raises if ``v`` is outside."""
        if not self.contains(v):
            raise ContainmentError("vector does not lie in the subspace")
        return tuple(to_scalar(v[p]) for p in self.pivots)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.basis + other.basis, self.ambient)

    def annihilator(self) -> "Subspace":
        """``{w : sum_j b_j w_j = 0 for all basis b}`` (bilinear, no conjugation)."""
        if not self.basis:
            return Subspace.full(self.ambient)
        return kernel(self.matrix())

    def __and__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient)
        if self.dim == self.ambient:
            return other
        if other.dim == other.ambient:
            return self
        rows = self.annihilator().basis + other.annihilator().basis
        if not rows:
            return Subspace.full(self.ambient)
        return kernel(Matrix(rows, self.ambient))

    intersect = __and__

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(b) for b in self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def conjugate(self) -> "Subspace":
        return Subspace.span([vconj(b) for b in self.basis], self.ambient)

    def image_under(self, M: Matrix) -> "Subspace":
        return Subspace.span([M @ b for b in self.basis], M.nrows)

    def complement_in(self, other: "Subspace") -> list[tuple]:
        """Vectors of ``other``'s basis completing a basis of ``self`` to one of ``other``."""
        if not self <= other:
            raise ContainmentError("subspace is not contained in the target")
        current = self
        extra = []
        for b in other.basis:
            if not current.contains(b):
                extra.append(b)
                current = current + Subspace.span([b], self.ambient)
        return extra

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


def subspace_sum(A: Subspace, B: Subspace) -> Subspace:
    return A + B


def subspace_intersect(A: Subspace, B: Subspace) -> Subspace:
    return A & B


def contains(A: Subspace, v) -> bool:
    return A.contains(v)


def quotient_dims(A: Subspace, B: Subspace) -> int:
    """``dim B - dim A`` after verifying ``A ⊆ B``."""
    if A.ambient != B.ambient:
        raise AmbientMismatch(f"ambient dimensions {A.ambient} and {B.ambient} differ")
    if not A <= B:
        raise ContainmentError("first subspace is not contained in the second")
    return B.dim - A.dim


class EchelonBuilder:
    """Incrementally maintained reduced echelon basis over sparse vectors.

    Used for closure computations where vectors arrive one at a time.
    """

    def __init__(self, ambient: int):
        self.ambient = ambient
        self.rows: dict[int, dict] = {}

    def reduce(self, v: dict) -> dict:
        w = dict(v)
        for p in [p for p in w if p in self.rows]:
            f = w.get(p)
            if not f:
                continue
            for j, a in self.rows[p].items():
                s = w.get(j, ZERO) - f * a
                if s:
                    w[j] = s
                else:
                    w.pop(j, None)
        return w

    def add(self, v: dict) -> dict | None:
        """Insert ``v``; returns the new normalized row or ``None`` if dependent."""
        w = self.reduce(v)
        if not w:
            return None
        p = min(w)
        inv = ONE / w[p]
        w = {j: a * inv for j, a in w.items()}
        for row in self.rows.values():
            f = row.get(p)
            if f:
                for j, a in w.items():
                    s = row.get(j, ZERO) - f * a
                    if s:
                        row[j] = s
                    else:
                        row.pop(j, None)
        self.rows[p] = w
        return w

    @property
    def dim(self) -> int:
        return len(self.rows)

    def subspace(self) -> Subspace:
        basis = []
        pivots = sorted(self.rows)
        for p in pivots:
            row = [ZERO] * self.ambient
            for j, a in self.rows[p].items():
                row[j] = a
            basis.append(tuple(row))
        return Subspace(tuple(basis), tuple(pivots), self.ambient)


def to_sparse(v) -> dict:
    return {i: a for i, a in enumerate(v) if a}


def from_sparse(v: dict, n: int) -> tuple:
    out = [ZERO] * n
    for i, a in v.items():
        out[i] = a
    return tuple(out)


def fmt(x) -> str | list:
    """JSON-friendly rendering: rationals as ``"p/q"``, complex as ``[re, im]``."""
    if type(x) is CScalar:
        return [str(x.re), str(x.im)]
    return str(x)


def fmt_vec(v) -> list:
    return [fmt(a) for a in v]


def fmt_matrix(M: Matrix) -> list:
    return [fmt_vec(r) for r in M.rows]


def parse_scalar(obj):
    """Inverse of :func:`fmt`."""
    if isinstance(obj, (list, tuple)):
        if len(obj) != 2:
            raise ValueError(f"complex entry must be [re, im], got {obj!r}")
        return _mk(Q(obj[0]), Q(obj[1]))
    if isinstance(obj, int) and not isinstance(obj, bool):
        return mpq(obj)
    if isinstance(obj, str):
        return Q(obj)
    raise ValueError(f"malformed scalar {obj!r}")


def parse_matrix(obj) -> Matrix:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise ValueError("matrix must be a non-empty list of rows")
    return Matrix([[parse_scalar(a) for a in r] for r in obj])
