"""Rational quadratic spaces.

A :class:`QuadSpace` is ``Q^n`` with a symmetric Gram matrix; ``q(u, v) = u^T G v``
is extended complex-bilinearly (never sesquilinearly) to Gaussian-rational
vectors, and ``q(v)`` means ``q(v, v)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from gmpy2 import mpq

from .errors import (
    DegenerateRestriction,
    IsotropyViolation,
    NotFoundWithinBound,
    PreconditionError,
    SignatureMismatch,
)
from .exact import (
    ONE,
    ZERO,
    Matrix,
    Q,
    Scalar,
    Subspace,
    det,
    dot,
    kernel,
    lin_comb,
    parse_scalar,
    rank,
    real_part,
    unit,
    vadd,
    vconj,
    vec,
    vscale,
    vsub,
)

DEFAULT_HEIGHT_BOUND = 10


@dataclass(frozen=True)
class QuadSpace:
    gram: Matrix
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if not self.gram.is_symmetric():
            raise ValueError("Gram matrix must be square and symmetric")
        if self.labels is not None and len(self.labels) != self.gram.nrows:
            raise ValueError("one label per basis vector required")

    @classmethod
    def from_gram(cls, rows, labels=None) -> "QuadSpace":
        return cls(Matrix.from_rows(rows), tuple(labels) if labels else None)

    @property
    def dim(self) -> int:
        return self.gram.nrows

    def q(self, u, v=None):
        """Bilinear value ``q(u, v)``; ``q(u)`` is ``q(u, u)``."""
        if v is None:
            v = u
        return dot(u, self.gram @ v)

    def hermitian(self, x):
        """``q(x, conj x)``, a rational number for Gaussian-rational ``x``."""
        return real_part(self.q(x, vconj(x)))

    def is_nondegenerate(self) -> bool:
        return rank(self.gram) == self.dim

    def restrict(self, basis: Sequence[Sequence]) -> "QuadSpace":
        """Form on the span of ``basis`` (rows in ambient coordinates)."""
        B = Matrix(basis, self.dim)
        return QuadSpace(B @ self.gram @ B.T)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"b{i}"


def diagonal_preset(dim: int) -> QuadSpace:
    """``diag(1, 1, 1, -1, ..., -1)``: signature ``(3, dim - 3)``."""
    if dim < 3:
        raise PreconditionError("diagonal preset needs dim >= 3")
    return QuadSpace(Matrix.diag([1, 1, 1] + [-1] * (dim - 3)))


def hyperbolic_preset(dim: int) -> QuadSpace:
    """Sum of hyperbolic planes (plus ``<1>`` in odd dimension).

    Basis order is ``e1, e1', e2, e2', ...`` with ``q(e_i, e_i') = 1``, and a
    final ``e_{l+1}`` of norm 1 when ``dim`` is odd.
    """
    if dim < 1:
        raise PreconditionError("dimension must be positive")
    l = dim // 2
    entries = {}
    labels = []
    for i in range(l):
        entries[(2 * i, 2 * i + 1)] = ONE
        entries[(2 * i + 1, 2 * i)] = ONE
        labels += [f"e{i + 1}", f"e{i + 1}'"]
    if dim % 2:
        entries[(dim - 1, dim - 1)] = ONE
        labels.append(f"e{l + 1}")
    return QuadSpace(Matrix.from_sparse(dim, dim, entries), tuple(labels))


PRESETS = {"diagonal": diagonal_preset, "hyperbolic": hyperbolic_preset}


def load_gram(path: str | Path) -> QuadSpace:
    """Read a Gram matrix from JSON (list of rows) or whitespace-separated text.

    Entries are integers or ``"p/q"`` strings.  Raises ``ValueError`` with a
    diagnostic on malformed input.
    """
    text = Path(path).read_text(encoding="utf-8")
    stripped = text.strip()
    if not stripped:
        raise ValueError(f"{path}: empty Gram file")
    if stripped[0] in "[{":
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
        if isinstance(data, dict):
            data = data.get("gram")
        if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
            raise ValueError(f"{path}: expected a non-empty list of rows")
        try:
            rows = [[parse_scalar(a) for a in r] for r in data]
        except ValueError as exc:
            raise ValueError(f"{path}: {exc}") from exc
    else:
        rows = []
        for lineno, line in enumerate(stripped.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                rows.append([Q(tok.strip('",')) for tok in line.replace(",", " ").split()])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError(f"{path}: Gram matrix must be square, got {n} rows of lengths {[len(r) for r in rows]}")
    if any(getattr(a, "im", 0) for r in rows for a in r):
        raise ValueError(f"{path}: Gram entries must be rational")
    M = Matrix(rows, n)
    if not M.is_symmetric():
        raise ValueError(f"{path}: Gram matrix is not symmetric")
    return QuadSpace(M)


# --------------------------------------------------------------------------
# diagonalization and signature


def diagonalize(gram: Matrix) -> tuple[list[Scalar], Matrix]:
    """Congruence diagonalization: returns ``(d, P)`` with ``P G P^T = diag(d)``.

    Rows of ``P`` form a ``q``-orthogonal basis.  Only symmetric row/column
    operations over ``Q`` are used.
    """
    n = gram.nrows
    G = [list(r) for r in gram.rows]
    P = [list(unit(n, i)) for i in range(n)]

    def add_multiple(i, j, f):
        # basis vector i += f * basis vector j
        for k in range(n):
            G[i][k] = G[i][k] + f * G[j][k]
        for k in range(n):
            G[k][i] = G[k][i] + f * G[k][j]
        for k in range(n):
            P[i][k] = P[i][k] + f * P[j][k]

    def swap(i, j):
        G[i], G[j] = G[j], G[i]
        for row in G:
            row[i], row[j] = row[j], row[i]
        P[i], P[j] = P[j], P[i]

    for i in range(n):
        if not G[i][i]:
            j = next((j for j in range(i + 1, n) if G[j][j]), None)
            if j is not None:
                swap(i, j)
            else:
                j = next((j for j in range(i + 1, n) if G[i][j]), None)
                if j is None:
                    continue
                add_multiple(i, j, ONE)
        p = G[i][i]
        for j in range(i + 1, n):
            if G[j][i]:
                add_multiple(j, i, -G[j][i] / p)
    return [G[i][i] for i in range(n)], Matrix(P, n)


def signature(Q_: QuadSpace) -> tuple[int, int, int]:
    """``(positive, negative, zero)`` inertia counts of the Gram matrix."""
    d, _ = diagonalize(Q_.gram)
    return (sum(1 for x in d if x > 0), sum(1 for x in d if x < 0), sum(1 for x in d if x == 0))


def orthogonal_basis(Q_: QuadSpace) -> tuple[list[Scalar], list[tuple]]:
    """A ``q``-orthogonal basis and the norms of its vectors."""
    d, P = diagonalize(Q_.gram)
    return d, list(P.rows)


# --------------------------------------------------------------------------
# isotropic vectors


def _integer_gram(gram: Matrix) -> list[list[int]]:
    den = 1
    for r in gram.rows:
        for a in r:
            den = math.lcm(den, int(a.denominator))
    return [[int(a * den) for a in r] for r in gram.rows]


def _coordinate_values(h: int) -> list[int]:
    out = []
    for k in range(1, h + 1):
        out += [k, -k]
    return out + [0]


def _shell_search(G: list[list[int]], h: int):
    """First isotropic integer vector with max-norm exactly ``h``.

    Candidates are visited lexicographically, each coordinate running through
    ``1, -1, 2, -2, ..., h, -h, 0``; the first nonzero coordinate is positive.
    """
    n = len(G)
    values = _coordinate_values(h)
    x = [0] * n
    # partial[k] = G applied to x restricted to coordinates < k, as a list
    gx = [0] * n

    def rec(k: int, value: int, seen_nonzero: bool, hit: bool):
        if k == n:
            if value == 0 and seen_nonzero and hit:
                return tuple(x)
            return None
        for c in values:
            if not seen_nonzero and c < 0:
                continue
            if c == 0 and not hit and k == n - 1:
                continue
            # adding c*e_k: q grows by 2 c (G x)_k + c^2 G_kk
            new_value = value + 2 * c * gx[k] + c * c * G[k][k] if c else value
            if c:
                x[k] = c
                row = G[k]
                for j in range(n):
                    if row[j]:
                        gx[j] += c * row[j]
            found = rec(k + 1, new_value, seen_nonzero or c != 0, hit or abs(c) == h)
            if c:
                row = G[k]
                for j in range(n):
                    if row[j]:
                        gx[j] -= c * row[j]
                x[k] = 0
            if found is not None:
                return found
        return None

    return rec(0, 0, False, False)


def find_isotropic(Q_: QuadSpace, height_bound: int = DEFAULT_HEIGHT_BOUND) -> tuple:
    """Least nonzero integer vector with ``q(v) = 0`` and entries bounded by ``height_bound``.

    Vectors are ordered by max-norm first, then by the per-coordinate order
    ``1 < -1 < 2 < -2 < ... < 0``.  Raises :class:`NotFoundWithinBound` when
    the box holds no isotropic vector.
    """
    if Q_.dim == 0:
        raise PreconditionError("zero-dimensional space has no nonzero vectors")
    pos, neg, zero = signature(Q_)
    if zero == 0 and (pos == 0 or neg == 0):
        raise PreconditionError("form is definite: no isotropic vector exists")
    G = _integer_gram(Q_.gram)
    for h in range(1, height_bound + 1):
        found = _shell_search(G, h)
        if found is not None:
            return vec(found)
    raise NotFoundWithinBound("isotropic vector", height_bound)


def hyperbolic_complete(Q_: QuadSpace, v0) -> tuple[tuple, tuple]:
    """Vectors ``v1, v2`` with ``q(v1) = 1``, ``q(v2) = -1``, ``q(v1, v2) = 0``, ``v0 = (v1 + v2)/2``."""
    v0 = vec(v0)
    if not any(v0):
        raise IsotropyViolation("zero vector")
    if Q_.q(v0) != 0:
        raise IsotropyViolation(f"q(v0) = {Q_.q(v0)} is not zero")
    Gv0 = Q_.gram @ v0
    j = next((j for j, a in enumerate(Gv0) if a), None)
    if j is None:
        raise DegenerateRestriction("v0 lies in the radical of the form")
    w = vscale(ONE / (2 * Gv0[j]), unit(Q_.dim, j))
    f = vsub(w, vscale(Q_.q(w), v0))
    return vadd(v0, f), vsub(v0, f)


# --------------------------------------------------------------------------
# orthogonal complements


@dataclass(frozen=True)
class Embedding:
    """A subspace given by an echelon basis, with coordinate maps both ways."""

    subspace: Subspace

    @property
    def matrix(self) -> Matrix:
        """Ambient-by-k matrix sending subspace coordinates to ambient vectors."""
        return self.subspace.matrix().T if self.subspace.dim else Matrix.zeros(self.subspace.ambient, 0)

    def to_ambient(self, y) -> tuple:
        return lin_comb(y, self.subspace.basis, self.subspace.ambient)

    def coords(self, x) -> tuple:
        return self.subspace.coordinates(x)


def orthogonal_complement(Q_: QuadSpace, S: Subspace) -> tuple[QuadSpace, Embedding]:
    """The form on ``S^perp`` together with its embedding into the ambient space."""
    if S.ambient != Q_.dim:
        raise PreconditionError("subspace and quadratic space have different ambient dimension")
    if S.dim:
        restricted = Q_.restrict(S.basis)
        if det(restricted.gram) == 0:
            raise DegenerateRestriction("q restricted to the subspace is degenerate")
        perp = kernel(S.matrix() @ Q_.gram)
    else:
        perp = Subspace.full(Q_.dim)
    emb = Embedding(perp)
    return Q_.restrict(perp.basis), emb


# --------------------------------------------------------------------------
# Witt decomposition


@dataclass(frozen=True)
class HyperbolicBasis:
    """Hyperbolic pairs ``(e_i, e_i')`` plus an optional odd vector.

    ``last`` is ``e_{l+1}``; when its norm is not a rational square it is kept
    unnormalized and ``last_norm`` records ``s^2`` for the formal scale ``s``
    with ``e_{l+1} = last / s``.  ``anisotropic`` lists an orthogonal basis of
    whatever part of the space carries no rational hyperbolic pair beyond the
    odd vector.  ``first_index`` is 0 for Mukai-extended indexing and 1 otherwise.
    """

    space: QuadSpace
    pairs: tuple[tuple[tuple, tuple], ...]
    last: tuple | None = None
    last_norm: Scalar = ONE
    anisotropic: tuple[tuple, ...] = ()
    first_index: int = 1

    @property
    def kind(self) -> str:
        return "B" if self.space.dim % 2 else "D"

    @property
    def rank(self) -> int:
        return len(self.pairs)

    @property
    def is_split(self) -> bool:
        return not self.anisotropic and self.rank == self.space.dim // 2

    @property
    def needs_sqrt(self) -> bool:
        return self.last is not None and self.last_norm != 1

    def e(self, i: int) -> tuple:
        return self.pairs[i - self.first_index][0]

    def f(self, i: int) -> tuple:
        return self.pairs[i - self.first_index][1]

    def indices(self) -> range:
        return range(self.first_index, self.first_index + self.rank)

    def validate(self) -> list[str]:
        """Names of violated defining relations (empty when valid)."""
        q = self.space.q
        bad = []
        vecs = [v for p in self.pairs for v in p]
        for a, (e, f) in enumerate(self.pairs):
            if q(e) != 0 or q(f) != 0:
                bad.append(f"pair {a} not isotropic")
            for b, (e2, f2) in enumerate(self.pairs):
                want = ONE if a == b else ZERO
                if q(e, f2) != want:
                    bad.append(f"q(e{a}, f{b}) != {want}")
                if a != b and (q(e, e2) != 0 or q(f, f2) != 0):
                    bad.append(f"pairs {a},{b} not orthogonal")
        extra = ([self.last] if self.last is not None else []) + list(self.anisotropic)
        for w in extra:
            if any(q(w, v) for v in vecs):
                bad.append("odd/anisotropic part not orthogonal to pairs")
        if self.last is not None and q(self.last) != self.last_norm:
            bad.append("last vector norm mismatch")
        return bad

    @classmethod
    def standard(cls, Q_: QuadSpace) -> "HyperbolicBasis":
        """The evident basis of :func:`hyperbolic_preset`."""
        n = Q_.dim
        pairs = tuple((unit(n, 2 * i), unit(n, 2 * i + 1)) for i in range(n // 2))
        last = unit(n, n - 1) if n % 2 else None
        hb = cls(Q_, pairs, last)
        if hb.validate():
            raise PreconditionError("space is not a standard hyperbolic preset")
        return hb


def _rational_sqrt(x: Scalar) -> Scalar | None:
    if x <= 0:
        return None
    num, den = int(x.numerator), int(x.denominator)
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return mpq(rn, rd)
    return None


def witt_basis(Q_: QuadSpace, height_bound: int = DEFAULT_HEIGHT_BOUND) -> HyperbolicBasis:
    """Split off rational hyperbolic planes until the rest is anisotropic.

    Raises :class:`NotFoundWithinBound` when an indefinite remainder of
    dimension at least 5 (necessarily isotropic) yields no vector in the box.
    """
    if not Q_.is_nondegenerate():
        raise DegenerateRestriction("witt_basis needs a nondegenerate form")
    n = Q_.dim
    C = Subspace.full(n)
    pairs = []
    while C.dim >= 2:
        sub = Q_.restrict(C.basis)
        pos, neg, _ = signature(sub)
        if pos == 0 or neg == 0:
            break
        try:
            y = find_isotropic(sub, height_bound)
        except NotFoundWithinBound:
            if C.dim >= 5:
                raise
            break
        e = lin_comb(y, C.basis, n)
        Ge = Q_.gram @ e
        c = next(b for b in C.basis if dot(b, Ge))
        f = vscale(ONE / dot(c, Ge), c)
        f = vsub(f, vscale(Q_.q(f) / 2, e))
        pairs.append((e, f))
        constraints = Matrix([Q_.gram @ e, Q_.gram @ f], n)
        C = C & kernel(constraints)
    rest = Q_.restrict(C.basis) if C.dim else None
    last = None
    last_norm = ONE
    anis: list[tuple] = []
    if rest is not None:
        d, P = diagonalize(rest.gram)
        vectors = [lin_comb(row, C.basis, n) for row in P.rows]
        if n % 2 and len(vectors) == 1:
            w = vectors[0]
            norm = Q_.q(w)
            r = _rational_sqrt(norm)
            if r is not None:
                last = vscale(ONE / r, w)
            else:
                last, last_norm = w, norm
        else:
            anis = vectors
    return HyperbolicBasis(Q_, tuple(pairs), last, last_norm, tuple(anis))


# --------------------------------------------------------------------------
# the maximally unipotent N


def _primitive_integer(v) -> tuple:
    den = 1
    for a in v:
        den = math.lcm(den, int(a.denominator))
    ints = [int(a * den) for a in v]
    g = 0
    for a in ints:
        g = math.gcd(g, a)
    g = g or 1
    return vec(a // g for a in ints)


@dataclass(frozen=True)
class DegenerationDatum:
    """Everything produced by :func:`degeneration_data`.

    ``h``, ``v0`` .. ``v3`` are in ambient coordinates of ``space``;
    ``vh`` is the form on ``h^perp`` with ``embedding`` into ``space``;
    ``N`` acts on ``vh`` and ``v0_h``, ``v3_h`` are ``v0``, ``v3`` in ``vh`` coordinates.
    """

    space: QuadSpace
    h: tuple
    v0: tuple
    v1: tuple
    v2: tuple
    v3: tuple
    vh: QuadSpace
    embedding: Embedding
    N: "object"
    v0_h: tuple = field(default=())
    v3_h: tuple = field(default=())


def degeneration_data(Q_: QuadSpace, height_bound: int = DEFAULT_HEIGHT_BOUND) -> DegenerationDatum:
    """Construct ``h`` and a nilpotent ``N = v0 ∧ v3`` in ``so(h^perp)`` of index 3."""
    from .lie import bivector

    if Q_.dim < 5:
        raise SignatureMismatch(f"need dim >= 5, got {Q_.dim}")
    sig = signature(Q_)
    if sig != (3, Q_.dim - 3, 0):
        raise SignatureMismatch(f"need signature (3, {Q_.dim - 3}), got {sig[:2]} with {sig[2]} null")
    v0 = find_isotropic(Q_, height_bound)
    v1, v2 = hyperbolic_complete(Q_, v0)
    Vp, emb = orthogonal_complement(Q_, Subspace.span([v1, v2], Q_.dim))
    d, P = diagonalize(Vp.gram)
    positive = [emb.to_ambient(P.rows[i]) for i in range(len(d)) if d[i] > 0]
    if len(positive) < 2:
        raise SignatureMismatch("complement of the hyperbolic plane has fewer than two positive directions")
    v3 = _primitive_integer(positive[0])
    h = _primitive_integer(positive[1])
    vh, hemb = orthogonal_complement(Q_, Subspace.span([h], Q_.dim))
    v0_h = hemb.coords(v0)
    v3_h = hemb.coords(v3)
    N = bivector(vh, v0_h, v3_h)
    return DegenerationDatum(Q_, h, v0, v1, v2, v3, vh, hemb, N, v0_h, v3_h)


def validate_degeneration(datum: DegenerationDatum) -> list[str]:
    """Names of violated invariants of a :class:`DegenerationDatum` (empty when valid)."""
    q = datum.space.q
    bad = []
    checks = {
        "q(h) > 0": q(datum.h) > 0,
        "q(v0) = 0": q(datum.v0) == 0,
        "q(v1) = 1": q(datum.v1) == 1,
        "q(v2) = -1": q(datum.v2) == -1,
        "q(v1, v2) = 0": q(datum.v1, datum.v2) == 0,
        "v0 = (v1 + v2)/2": vscale(mpq(1, 2), vadd(datum.v1, datum.v2)) == datum.v0,
        "q(v3) > 0": q(datum.v3) > 0,
        "q(v3, h) = 0": q(datum.v3, datum.h) == 0,
    }
    bad += [k for k, ok in checks.items() if not ok]
    A = datum.N.matrix
    A2 = A @ A
    if not (A2 @ A).is_zero():
        bad.append("N^3 = 0")
    if A2.is_zero():
        bad.append("N^2 != 0")
    if rank(A) != 2:
        bad.append("rank N = 2")
    if rank(A2) != 1:
        bad.append("rank N^2 = 1")
    if not datum.N.is_orthogonal():
        bad.append("N in so(V^h)")
    qh = datum.vh.q
    im = Subspace.span(A.T.rows, datum.vh.dim)
    if Subspace.span([datum.v0_h, datum.v3_h], datum.vh.dim) != im:
        bad.append("Im N = <v0, v3>")
    if Subspace.span(A2.T.rows, datum.vh.dim) != Subspace.span([datum.v0_h], datum.vh.dim):
        bad.append("Im N^2 = <v0>")
    g = [[qh(a, b) for b in (datum.v0_h, datum.v3_h)] for a in (datum.v0_h, datum.v3_h)]
    if not (g[0][0] == 0 and g[0][1] == 0 and g[1][0] == 0 and g[1][1] > 0):
        bad.append("Gram on Im N = [[0,0],[0,+]]")
    return bad


def image_gram(datum: DegenerationDatum) -> list[list[Scalar]]:
    """Gram matrix of ``q`` on ``Im N`` in the basis ``(v0, v3)``."""
    qh = datum.vh.q
    b = (datum.v0_h, datum.v3_h)
    return [[qh(x, y) for y in b] for x in b]
