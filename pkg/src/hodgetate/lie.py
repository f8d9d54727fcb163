"""The orthogonal Lie algebra ``so(V, q)`` in the bivector model, with weights.

Bivectors act by ``(a ∧ b) v = q(b, v) a - q(a, v) b``; as a matrix on column
vectors this is ``(a b^T - b a^T) G``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from .errors import AmbientMismatch, PreconditionError
from .exact import (
    ONE,
    ZERO,
    Matrix,
    Q,
    Scalar,
    inverse,
    outer,
    real_part,
    to_scalar,
    unit,
    vec,
    vim,
    vre,
)
from .quadspace import HyperbolicBasis, QuadSpace

HALF = mpq(1, 2)


@dataclass(frozen=True, eq=False)
class SOElement:
    """An element of ``so(V, q)`` given by its action matrix."""

    ambient: QuadSpace
    matrix: Matrix
    terms: tuple = ()

    @property
    def dim(self) -> int:
        return self.ambient.dim

    def __call__(self, v) -> tuple:
        return self.matrix @ v

    apply = __call__

    def _same(self, other: "SOElement"):
        if self.ambient.gram != other.ambient.gram:
            raise AmbientMismatch("elements of different orthogonal algebras")

    def __add__(self, other: "SOElement") -> "SOElement":
        self._same(other)
        return SOElement(self.ambient, self.matrix + other.matrix, self.terms + other.terms)

    def __sub__(self, other: "SOElement") -> "SOElement":
        return self + (-other)

    def __neg__(self) -> "SOElement":
        return self.scale(-ONE)

    def scale(self, c) -> "SOElement":
        c = to_scalar(c)
        return SOElement(self.ambient, self.matrix.scale(c), tuple((a, b, c * t) for a, b, t in self.terms))

    def __mul__(self, c):
        if isinstance(c, SOElement):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SOElement):
            return NotImplemented
        return self.ambient.gram == other.ambient.gram and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def is_orthogonal(self) -> bool:
        """``A^T G + G A = 0`` exactly."""
        G = self.ambient.gram
        return (self.matrix.T @ G + G @ self.matrix).is_zero()

    def power(self, k: int) -> Matrix:
        return self.matrix ** k

    def bivector_coefficients(self) -> Matrix:
        """Antisymmetric ``B`` with ``A = B G``, so ``A = sum_{i<j} B_ij e_i ∧ e_j``."""
        return self.matrix @ inverse(self.ambient.gram)

    def nilpotency_index(self, limit: int | None = None) -> int | None:
        """Least ``m`` with ``A^m = 0`` (``None`` if not nilpotent)."""
        return nilpotency_index(self.matrix, limit)


def nilpotency_index(A: Matrix, limit: int | None = None) -> int | None:
    n = A.nrows
    limit = n if limit is None else limit
    P = Matrix.identity(n)
    for m in range(0, limit + 1):
        if P.is_zero():
            return m
        P = P @ A
    return None


def bivector(Q_: QuadSpace, a, b) -> SOElement:
    """The element ``a ∧ b``: ``v ↦ q(b, v) a - q(a, v) b``."""
    a, b = vec(a), vec(b)
    if len(a) != Q_.dim or len(b) != Q_.dim:
        raise AmbientMismatch("bivector factors must lie in the quadratic space")
    M = (outer(a, b) - outer(b, a)) @ Q_.gram
    return SOElement(Q_, M, ((a, b, ONE),))


def from_matrix(Q_: QuadSpace, A: Matrix) -> SOElement:
    """Wrap an action matrix, checking infinitesimal orthogonality."""
    el = SOElement(Q_, A)
    if not el.is_orthogonal():
        raise PreconditionError("matrix is not in so(V, q)")
    return el


def bracket(A: SOElement, B: SOElement) -> SOElement:
    A._same(B)
    return SOElement(A.ambient, A.matrix @ B.matrix - B.matrix @ A.matrix)


def so_basis(Q_: QuadSpace) -> list[SOElement]:
    """``e_i ∧ e_j`` for ``i < j`` in the coordinate basis; a basis of ``so(V, q)`` for nondegenerate ``q``."""
    n = Q_.dim
    return [bivector(Q_, unit(n, i), unit(n, j)) for i in range(n) for j in range(i + 1, n)]


# --------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class WeightVector:
    """Rational coordinates in the basis ``ε_first, ε_first+1, ...``."""

    coords: tuple
    first_index: int = 1

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Q(c) if not isinstance(c, Scalar) else c for c in self.coords))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def _check(self, other: "WeightVector"):
        if self.rank != other.rank or self.first_index != other.first_index:
            raise AmbientMismatch("weights for different Cartan subalgebras")

    def __add__(self, other):
        self._check(other)
        return WeightVector(tuple(a + b for a, b in zip(self.coords, other.coords)), self.first_index)

    def __sub__(self, other):
        self._check(other)
        return WeightVector(tuple(a - b for a, b in zip(self.coords, other.coords)), self.first_index)

    def __neg__(self):
        return WeightVector(tuple(-a for a in self.coords), self.first_index)

    def __mul__(self, c):
        c = Q(c)
        return WeightVector(tuple(c * a for a in self.coords), self.first_index)

    __rmul__ = __mul__

    def __getitem__(self, i: int):
        """Coefficient of ``ε_i`` (absolute index)."""
        return self.coords[i - self.first_index]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coords):
            if c:
                parts.append(f"{c}*eps{i + self.first_index}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coords]


def epsilon(i: int, rank: int, first_index: int = 1) -> WeightVector:
    coords = [ZERO] * rank
    coords[i - first_index] = ONE
    return WeightVector(tuple(coords), first_index)


def _check_kind(kind: str, l: int):
    if kind not in ("B", "D"):
        raise PreconditionError(f"unknown type {kind!r}; expected 'B' or 'D'")
    if l < 1:
        raise PreconditionError("rank must be positive")
    if kind == "D" and l < 2:
        raise PreconditionError("type D needs l >= 2")


def roots_and_weights(kind: str, l: int, extended: bool = False) -> tuple[list[WeightVector], list[WeightVector]]:
    """Positive roots and fundamental weights of type ``B`` or ``D``.

    With ``extended=True`` coordinates are ``ε_0 .. ε_l`` (rank ``l + 1``) and
    the fundamental weights are indexed ``ϖ_0 .. ϖ_l``; otherwise the
    coordinates are ``ε_1 .. ε_l``.
    """
    _check_kind(kind, l)
    first = 0 if extended else 1
    idx = list(range(first, l + 1))
    r = len(idx)
    if kind == "D" and r < 2:
        raise PreconditionError("type D needs at least two coordinates")
    eps = {i: epsilon(i, r, first) for i in idx}
    roots = []
    if kind == "B":
        roots += [eps[i] for i in idx]
    for a, i in enumerate(idx):
        for j in idx[a + 1:]:
            roots.append(eps[i] - eps[j])
            roots.append(eps[i] + eps[j])
    zero = WeightVector((ZERO,) * r, first)
    weights = []
    acc = zero
    partial = []
    for i in idx:
        acc = acc + eps[i]
        partial.append(acc)
    if kind == "B":
        weights = partial[:-1] + [partial[-1] * HALF]
    else:
        top = partial[-2]
        weights = partial[:-2] + [(top - eps[l]) * HALF, (top + eps[l]) * HALF]
    return roots, weights


def simple_roots(kind: str, l: int, extended: bool = False) -> list[WeightVector]:
    _check_kind(kind, l)
    first = 0 if extended else 1
    idx = list(range(first, l + 1))
    r = len(idx)
    eps = {i: epsilon(i, r, first) for i in idx}
    out = [eps[idx[a]] - eps[idx[a + 1]] for a in range(r - 1)]
    out.append(eps[l] if kind == "B" else eps[idx[-2]] + eps[l])
    return out


def fundamental_to_epsilon(a: Sequence, kind: str, extended: bool = False) -> WeightVector:
    """``sum a_i ϖ_i`` in ε-coordinates."""
    _, weights = roots_and_weights(kind, len(a) - (1 if extended else 0), extended)
    if len(a) != len(weights):
        raise PreconditionError("one coefficient per fundamental weight")
    acc = WeightVector((ZERO,) * weights[0].rank, weights[0].first_index)
    for c, w in zip(a, weights):
        acc = acc + w * Q(c)
    return acc


def xi1_of_highest_weight(a: Sequence, kind: str) -> Scalar:
    """Scalar by which ``ξ_1`` acts on a highest weight vector of weight ``sum a_i ϖ_i``."""
    a = list(a)
    for c in a:
        if isinstance(c, (float, bool)) or Q(c) < 0 or Q(c).denominator != 1:
            raise PreconditionError("fundamental-weight coefficients must be nonnegative integers")
    return fundamental_to_epsilon(a, kind)[1]


# --------------------------------------------------------------------------
# Cartan subalgebra and root vectors


def _hb_kind(HB: HyperbolicBasis) -> str:
    if HB.kind == "B" and HB.last is None:
        raise PreconditionError("odd-dimensional basis lacks its last vector")
    if HB.anisotropic:
        raise PreconditionError("root data needs a split hyperbolic basis")
    return HB.kind


def _hb_l(HB: HyperbolicBasis) -> int:
    return HB.rank - 1 if HB.first_index == 0 else HB.rank


def cartan_basis(HB: HyperbolicBasis) -> list[SOElement]:
    """``ξ_i = e_i ∧ e_i'`` in index order."""
    return [bivector(HB.space, HB.e(i), HB.f(i)) for i in HB.indices()]


def positive_roots(HB: HyperbolicBasis) -> list[WeightVector]:
    return roots_and_weights(_hb_kind(HB), _hb_l(HB), HB.first_index == 0)[0]


def fundamental_weights(HB: HyperbolicBasis) -> list[WeightVector]:
    return roots_and_weights(_hb_kind(HB), _hb_l(HB), HB.first_index == 0)[1]


def root_vector(HB: HyperbolicBasis, root: WeightVector) -> SOElement:
    """A root vector for ``root`` (positive or negative) in the bivector realization."""
    kind = _hb_kind(HB)
    if root.rank != HB.rank or root.first_index != HB.first_index:
        raise PreconditionError("root does not match the Cartan subalgebra")
    support = [(i + HB.first_index, c) for i, c in enumerate(root.coords) if c]
    ok = all(abs(c) == 1 for _, c in support)
    bv = lambda a, b: bivector(HB.space, a, b)  # noqa: E731
    if ok and len(support) == 1 and kind == "B":
        i, c = support[0]
        return bv(HB.e(i) if c > 0 else HB.f(i), HB.last)
    if ok and len(support) == 2:
        (i, s), (j, t) = support
        if s > 0 and t < 0:
            return bv(HB.e(i), HB.f(j))
        if s > 0 and t > 0:
            return bv(HB.e(i), HB.e(j))
        if s < 0 and t < 0:
            return bv(HB.f(i), HB.f(j))
        return bv(HB.e(j), HB.f(i))
    raise PreconditionError(f"{root} is not a root of type {kind}")


def chevalley_generators(HB: HyperbolicBasis) -> list[SOElement]:
    """Root vectors for ``±`` the simple roots; they generate ``so`` as a Lie algebra."""
    simple = simple_roots(_hb_kind(HB), _hb_l(HB), HB.first_index == 0)
    return [root_vector(HB, a) for a in simple] + [root_vector(HB, -a) for a in simple]


def eigenvalue(A: Matrix, v) -> Scalar | None:
    """``λ`` with ``A v = λ v``, or ``None`` if ``v`` is zero or not an eigenvector."""
    v = tuple(v)
    k = next((i for i, a in enumerate(v) if a), None)
    if k is None:
        return None
    w = A @ v
    lam = w[k] / v[k]
    if any(wi != lam * vi for wi, vi in zip(w, v)):
        return None
    return lam


def weight_of(HB: HyperbolicBasis, v, cartan: Sequence[SOElement] | None = None) -> WeightVector | None:
    """Simultaneous ``ξ``-eigenvalues of ``v``; ``None`` when ``v`` is not a weight vector."""
    cartan = cartan_basis(HB) if cartan is None else cartan
    out = []
    for xi in cartan:
        lam = eigenvalue(xi.matrix, v)
        if lam is None:
            return None
        out.append(lam)
    return WeightVector(tuple(out), HB.first_index)


# --------------------------------------------------------------------------
# Mukai extension and the Weil operator


@dataclass(frozen=True)
class MukaiSpace:
    """``Ṽ = <e0> ⊕ V ⊕ <e4>`` with basis order ``e0, V..., e4`` and ``q̃(e0, e4) = 1``."""

    base: QuadSpace
    space: QuadSpace
    embedding: Matrix
    Xi: SOElement = field(repr=False)

    @property
    def e0(self) -> tuple:
        return unit(self.space.dim, 0)

    @property
    def e4(self) -> tuple:
        return unit(self.space.dim, self.space.dim - 1)

    def embed_vector(self, v) -> tuple:
        return (ZERO,) + tuple(v) + (ZERO,)

    def embed_element(self, A: SOElement) -> SOElement:
        n = self.base.dim
        rows = [(ZERO,) * (n + 2)]
        rows += [(ZERO,) + tuple(r) + (ZERO,) for r in A.matrix.rows]
        rows += [(ZERO,) * (n + 2)]
        return SOElement(self.space, Matrix(rows, n + 2))

    def extended_basis(self, HB: HyperbolicBasis) -> HyperbolicBasis:
        """Hyperbolic basis of ``Ṽ`` with pair ``(e4, e0)`` at index 0, so ``ξ_0 = Ξ``."""
        if HB.space.gram != self.base.gram:
            raise AmbientMismatch("basis belongs to another space")
        pairs = ((self.e4, self.e0),) + tuple((self.embed_vector(e), self.embed_vector(f)) for e, f in HB.pairs)
        last = self.embed_vector(HB.last) if HB.last is not None else None
        anis = tuple(self.embed_vector(w) for w in HB.anisotropic)
        return HyperbolicBasis(self.space, pairs, last, HB.last_norm, anis, first_index=0)


def mukai_extend(Q_: QuadSpace) -> MukaiSpace:
    n = Q_.dim
    N = n + 2
    entries = {(0, N - 1): ONE, (N - 1, 0): ONE}
    for i in range(n):
        for j in range(n):
            if Q_.gram[i, j]:
                entries[(i + 1, j + 1)] = Q_.gram[i, j]
    labels = None
    if Q_.labels:
        labels = ("e0",) + Q_.labels + ("e4",)
    space = QuadSpace(Matrix.from_sparse(N, N, entries), labels)
    emb = Matrix([unit(n, i - 1) if 1 <= i <= n else (ZERO,) * n for i in range(N)], n)
    Xi = bivector(space, unit(N, N - 1), unit(N, 0))
    return MukaiSpace(Q_, space, emb, Xi)


def weil_operator(Q_: QuadSpace, x) -> SOElement:
    """Rational operator acting by ``2i`` on ``x``, ``-2i`` on ``conj x`` and ``0`` on their complement."""
    x = vec(x)
    if Q_.q(x) != 0:
        raise PreconditionError("period point must satisfy q(x) = 0")
    h = real_part(Q_.hermitian(x))
    if h <= 0:
        raise PreconditionError("period point must satisfy q(x, conj x) > 0")
    a, b = vre(x), vim(x)
    return bivector(Q_, a, b).scale(2 / Q_.q(a))


__all__ = [
    "SOElement",
    "WeightVector",
    "MukaiSpace",
    "HyperbolicBasis",
    "bivector",
    "bracket",
    "from_matrix",
    "so_basis",
    "cartan_basis",
    "roots_and_weights",
    "simple_roots",
    "positive_roots",
    "fundamental_weights",
    "fundamental_to_epsilon",
    "root_vector",
    "chevalley_generators",
    "weight_of",
    "eigenvalue",
    "mukai_extend",
    "weil_operator",
    "xi1_of_highest_weight",
    "nilpotency_index",
    "epsilon",
]

