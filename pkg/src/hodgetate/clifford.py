"""Clifford algebras ``Cl(V, q)`` with ``v w + w v = 2 q(v, w)``.

Elements are dense coefficient tuples over the monomial basis
``e_S = e_{s1} ⋯ e_{sk}`` (``s1 < ... < sk``), indexed by the bitmask of
``S``.  Generators are the coordinate vectors of the quadratic space, whose
Gram matrix need not be diagonal.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import CapExceeded
from .exact import ONE, ZERO, Matrix, to_scalar
from .lie import HALF, SOElement
from .quadspace import QuadSpace
from .reps import RepModule

CLIFFORD_CAP = 12


def _popcount(x: int) -> int:
    return bin(x).count("1")


class CliffordAlgebra:
    def __init__(self, Q_: QuadSpace):
        if Q_.dim > CLIFFORD_CAP:
            raise CapExceeded("Clifford algebra ambient dimension", Q_.dim, CLIFFORD_CAP)
        self.space = Q_
        self.n = Q_.dim
        self.size = 1 << self.n
        self.G = [list(r) for r in Q_.gram.rows]
        self.orthogonal = Q_.gram.is_diagonal()
        self._right = lru_cache(maxsize=None)(self._right_uncached)
        self._basis_products: dict = {}
        self._traces: dict = {}

    # basis products -------------------------------------------------------

    def _right_uncached(self, S: int, i: int) -> tuple:
        """``e_S · e_i`` as a tuple of ``(mask, coeff)``."""
        bit = 1 << i
        if S == 0:
            return ((bit, ONE),)
        top = S.bit_length() - 1
        if i > top:
            return ((S | bit, ONE),)
        rest = S ^ (1 << top)
        if i == top:
            g = self.G[i][i]
            return ((rest, g),) if g else ()
        # e_rest e_top e_i = -e_rest e_i e_top + 2 q(e_top, e_i) e_rest
        out: dict = {}
        for T, c in self._right(rest, i):
            # every index in T is below top, so appending e_top keeps the word sorted
            out[T | (1 << top)] = out.get(T | (1 << top), ZERO) - c
        g = self.G[top][i]
        if g:
            out[rest] = out.get(rest, ZERO) + 2 * g
        return tuple((T, c) for T, c in out.items() if c)

    def basis_product(self, S: int, T: int) -> tuple:
        """``e_S · e_T`` as ``(mask, coeff)`` pairs."""
        key = (S, T)
        hit = self._basis_products.get(key)
        if hit is not None:
            return hit
        if self.orthogonal:
            sign = 0
            for i in range(self.n):
                if T >> i & 1:
                    sign += _popcount(S >> (i + 1))
            c = -ONE if sign % 2 else ONE
            common = S & T
            for i in range(self.n):
                if common >> i & 1:
                    c = c * self.G[i][i]
            res = ((S ^ T, c),) if c else ()
        else:
            cur = {S: ONE}
            for i in range(self.n):
                if T >> i & 1:
                    nxt: dict = {}
                    for U, a in cur.items():
                        for V, b in self._right(U, i):
                            nxt[V] = nxt.get(V, ZERO) + a * b
                    cur = {U: a for U, a in nxt.items() if a}
            res = tuple(sorted(cur.items()))
        self._basis_products[key] = res
        return res

    # elements ------------------------------------------------------------

    def zero(self) -> tuple:
        return (ZERO,) * self.size

    def one(self) -> tuple:
        return self.monomial(0)

    def monomial(self, S: int, c=ONE) -> tuple:
        out = [ZERO] * self.size
        out[S] = to_scalar(c)
        return tuple(out)

    def vector(self, v) -> tuple:
        out = [ZERO] * self.size
        for i, a in enumerate(v):
            out[1 << i] = to_scalar(a)
        return tuple(out)

    def mul(self, x, y) -> tuple:
        out = [ZERO] * self.size
        ys = [(T, b) for T, b in enumerate(y) if b]
        for S, a in enumerate(x):
            if not a:
                continue
            for T, b in ys:
                for U, c in self.basis_product(S, T):
                    out[U] += a * b * c
        return tuple(out)

    def add(self, x, y) -> tuple:
        return tuple(a + b for a, b in zip(x, y))

    def sub(self, x, y) -> tuple:
        return tuple(a - b for a, b in zip(x, y))

    def scale(self, c, x) -> tuple:
        return tuple(c * a for a in x)

    def commutator(self, x, y) -> tuple:
        return self.sub(self.mul(x, y), self.mul(y, x))

    def bar(self, x) -> tuple:
        """Reversal anti-involution extending the identity on generators."""
        out = [ZERO] * self.size
        for S, a in enumerate(x):
            if not a:
                continue
            if self.orthogonal:
                k = _popcount(S)
                out[S] += -a if (k * (k - 1) // 2) % 2 else a
                continue
            cur = {0: a}
            for i in reversed(range(self.n)):
                if S >> i & 1:
                    nxt: dict = {}
                    for U, c in cur.items():
                        for V, b in self._right(U, i):
                            nxt[V] = nxt.get(V, ZERO) + c * b
                    cur = nxt
            for U, c in cur.items():
                out[U] += c
        return tuple(out)

    def left_matrix(self, x) -> Matrix:
        """Matrix of ``y ↦ x y`` on the monomial basis."""
        rows = [[ZERO] * self.size for _ in range(self.size)]
        xs = [(S, a) for S, a in enumerate(x) if a]
        for T in range(self.size):
            for S, a in xs:
                for U, c in self.basis_product(S, T):
                    rows[U][T] += a * c
        return Matrix(rows, self.size)

    def _basis_trace(self, S: int):
        t = self._traces.get(S)
        if t is None:
            if self.orthogonal:
                t = to_scalar(self.size) if S == 0 else ZERO
            else:
                t = ZERO
                for T in range(self.size):
                    for U, c in self.basis_product(S, T):
                        if U == T:
                            t += c
            self._traces[S] = t
        return t

    def trace(self, x):
        """Trace of left multiplication by ``x``."""
        t = ZERO
        for S, a in enumerate(x):
            if a:
                t += a * self._basis_trace(S)
        return t

    def label(self, S: int) -> str:
        if S == 0:
            return "1"
        return "".join(f"e{i}" for i in range(self.n) if S >> i & 1)

    def lift(self, A: SOElement) -> tuple:
        """Clifford element ``sum_{i<j} B_ij (e_i e_j - e_j e_i)/4`` with ``A = B G``."""
        B = A.bivector_coefficients()
        out = self.zero()
        quarter = HALF * HALF
        for i in range(self.n):
            for j in range(i + 1, self.n):
                c = B[i, j]
                if c:
                    ei, ej = self.monomial(1 << i), self.monomial(1 << j)
                    term = self.sub(self.mul(ei, ej), self.mul(ej, ei))
                    out = self.add(out, self.scale(c * quarter, term))
        return out


def clifford(Q_: QuadSpace) -> CliffordAlgebra:
    return CliffordAlgebra(Q_)


def spin_action(CA: CliffordAlgebra) -> tuple[RepModule, callable]:
    """``CA`` as a module by left multiplication with lifted elements, and the lift."""
    labels = [CA.label(S) for S in range(CA.size)]
    mod = RepModule(CA.space, CA.size, labels, lambda A: CA.left_matrix(CA.lift(A)), name="Cl")
    return mod, CA.lift
