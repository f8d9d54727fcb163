"""Weight filtrations, nilpotent orbits and limit mixed Hodge structures.

Filtrations are dictionaries of :class:`Subspace` objects over ``Q`` or the
Gaussian rationals.  Complex conjugation is the coordinatewise one, so the
rational structure is the standard lattice of coordinates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from gmpy2 import mpq

from .clifford import CliffordAlgebra
from .errors import IndexMismatch, NotAnOrbit, NotNilpotent, PreconditionError, PurityFailure
from .exact import (
    I,
    ONE,
    ZERO,
    CScalar,
    Matrix,
    Subspace,
    conj,
    imag_part,
    image,
    inverse,
    kernel,
    lin_comb,
    real_part,
    solve,
    to_scalar,
    vadd,
    vconj,
    vscale,
)
from .lie import SOElement, nilpotency_index
from .quadspace import QuadSpace

# --------------------------------------------------------------------------
# nilpotent endomorphisms


def _as_matrix(A) -> Matrix:
    return A.matrix if isinstance(A, SOElement) else A


def unipotency_index(A) -> int:
    """Least ``m`` with ``A^m = 0``; raises :class:`NotNilpotent` otherwise."""
    M = _as_matrix(A)
    m = nilpotency_index(M)
    if m is None:
        raise NotNilpotent("endomorphism is not nilpotent")
    return m


def nilpotent_exp(A, z) -> Matrix:
    """``sum_j z^j A^j / j!`` (a finite sum)."""
    M = _as_matrix(A)
    m = unipotency_index(M)
    z = to_scalar(z)
    out = Matrix.identity(M.nrows)
    P = Matrix.identity(M.nrows)
    coef = ONE
    for j in range(1, m):
        P = P @ M
        coef = coef * z / j
        out = out + P.scale(coef)
    return out


# --------------------------------------------------------------------------
# weight filtrations


@dataclass(frozen=True)
class WeightFiltration:
    """``W_k`` for ``low <= k <= high``; ``W_{low-1} = 0`` and ``W_high`` is everything."""

    center: int
    ambient: int
    pieces: dict = field(hash=False)

    @property
    def low(self) -> int:
        return min(self.pieces)

    @property
    def high(self) -> int:
        return max(self.pieces)

    def __getitem__(self, k: int) -> Subspace:
        if not self.pieces or k > self.high:
            return Subspace.full(self.ambient)
        if k < self.low:
            return Subspace.zero(self.ambient)
        return self.pieces[k]

    def gr_dim(self, k: int) -> int:
        return self[k].dim - self[k - 1].dim

    def gr_dims(self, low: int | None = None, high: int | None = None) -> dict[int, int]:
        low = self.low if low is None else low
        high = self.high if high is None else high
        return {k: self.gr_dim(k) for k in range(low, high + 1)}

    def is_increasing(self) -> bool:
        return all(self[k - 1] <= self[k] for k in range(self.low, self.high + 1))

    def image_under(self, g: Matrix) -> "WeightFiltration":
        return WeightFiltration(self.center, self.ambient, {k: S.image_under(g) for k, S in self.pieces.items()})


def _weight_pieces(A: Matrix, center: int) -> dict[int, Subspace]:
    n = A.nrows
    if n == 0:
        return {center: Subspace.zero(0)}
    m = unipotency_index(A) - 1
    if m == 0:
        return {center: Subspace.full(n)}
    Am = A ** m
    K = kernel(Am)
    Im = image(Am)
    pieces = {center + m: Subspace.full(n), center + m - 1: K, center - m: Im}
    C = Im.complement_in(K)
    if C:
        # induced map on K / Im in the basis C
        basis = list(C) + list(Im.basis)
        B = Matrix.from_columns(basis, n)
        cols = []
        for c in C:
            y = solve(B, A @ c)
            cols.append(y[: len(C)])
        Abar = Matrix.from_columns(cols, len(C))
        inner = _weight_pieces(Abar, center)
        for k, S in inner.items():
            if center - m < k < center + m - 1:
                up = Subspace.span([lin_comb(y, C, n) for y in S.basis], n)
                pieces[k] = up + Im
    for k in range(center - m + 1, center + m - 1):
        if k not in pieces:
            below = max(j for j in pieces if j < k)
            pieces[k] = pieces[below]
    return pieces


def weight_filtration(A, center: int = 0) -> WeightFiltration:
    """The monodromy weight filtration of a nilpotent ``A`` centred at ``center``.

    Top level: ``W_{c+m-1} = ker A^m`` and ``W_{c-m} = im A^m`` for ``A^(m+1) = 0 ≠ A^m``;
    the middle is the filtration of the induced map on ``ker A^m / im A^m``.
    """
    M = _as_matrix(A)
    return WeightFiltration(center, M.nrows, _weight_pieces(M, center))


def filtration_axioms_hold(A, W: WeightFiltration) -> bool:
    """``A W_k ⊆ W_{k-2}`` and ``A^j : gr_{c+j} → gr_{c-j}`` bijective for ``j >= 0``."""
    M = _as_matrix(A)
    for k in range(W.low - 1, W.high + 2):
        if not W[k].image_under(M) <= W[k - 2]:
            return False
    c = W.center
    P = Matrix.identity(M.nrows)
    for j in range(0, max(W.high - c, c - W.low) + 2):
        if j:
            P = P @ M
        src, low_src = W[c + j], W[c + j - 1]
        dst, low_dst = W[c - j], W[c - j - 1]
        if src.dim - low_src.dim != dst.dim - low_dst.dim:
            return False
        # injective on gr: P(v) ∈ W_{c-j-1} only for v ∈ W_{c+j-1}
        comp = low_src.complement_in(src)
        if comp:
            imgs = Subspace.span([P @ v for v in comp], M.nrows) + low_dst
            if imgs.dim - low_dst.dim != len(comp):
                return False
            if not imgs <= dst:
                return False
    return True


# --------------------------------------------------------------------------
# Hodge filtrations and mixed Hodge structures


@dataclass(frozen=True)
class HodgeFiltration:
    """Decreasing ``F^p`` for ``low <= p <= high``; ``F^low`` is everything, ``F^(high+1) = 0``."""

    ambient: int
    pieces: dict = field(hash=False)

    @property
    def low(self) -> int:
        return min(self.pieces)

    @property
    def high(self) -> int:
        return max(self.pieces)

    def __getitem__(self, p: int) -> Subspace:
        if not self.pieces or p < self.low:
            return Subspace.full(self.ambient)
        if p > self.high:
            return Subspace.zero(self.ambient)
        return self.pieces[p]

    def is_decreasing(self) -> bool:
        return all(self[p + 1] <= self[p] for p in range(self.low - 1, self.high + 1))

    def dims(self) -> dict[int, int]:
        return {p: self[p].dim for p in range(self.low, self.high + 1)}


@dataclass(frozen=True)
class MixedHodge:
    W: WeightFiltration
    F: HodgeFiltration

    @property
    def dim(self) -> int:
        return self.W.ambient

    def weights(self) -> range:
        return range(self.W.low, self.W.high + 1)

    def induced(self, p: int, m: int) -> Subspace:
        """``F^p ∩ W_m + W_{m-1}``: the induced ``F^p gr_m`` lifted to ``W_m``."""
        return (self.F[p] & self.W[m]) + self.W[m - 1]

    def _p_range(self, m: int) -> range:
        lo, hi = self.F.low, self.F.high
        return range(min(lo, m - hi) - 1, max(hi, m - lo) + 2)

    def purity_defects(self) -> list[str]:
        """Weights and degrees where ``F^p ⊕ conj F^(m-p+1) = gr_m`` fails."""
        bad = []
        if not self.W.is_increasing():
            bad.append("W not increasing")
        if not self.F.is_decreasing():
            bad.append("F not decreasing")
        for m in self.weights():
            Wm, Wm1 = self.W[m], self.W[m - 1]
            if Wm.dim == Wm1.dim:
                continue
            for p in self._p_range(m):
                A = self.induced(p, m)
                B = self.induced(m - p + 1, m).conjugate()
                if (A + B) != Wm:
                    bad.append(f"gr_{m}: F^{p} + conj F^{m - p + 1} is not everything")
                elif (A & B) != Wm1:
                    bad.append(f"gr_{m}: F^{p} ∩ conj F^{m - p + 1} is not zero")
        return bad

    def is_mhs(self) -> bool:
        return not self.purity_defects()

    def require_mhs(self):
        bad = self.purity_defects()
        if bad:
            raise PurityFailure("; ".join(bad))

    def hodge_numbers(self) -> dict[tuple[int, int], int]:
        """Nonzero ``h^{p,q} = dim F^p gr_{p+q} - dim F^{p+1} gr_{p+q}``."""
        out = {}
        for m in self.weights():
            if self.W.gr_dim(m) == 0:
                continue
            for p in self._p_range(m):
                h = self.induced(p, m).dim - self.induced(p + 1, m).dim
                if h:
                    out[(p, m - p)] = h
        return out

    def is_hodge_tate(self) -> bool:
        return all(p == q for (p, q) in self.hodge_numbers())

    def restrict(self, k: int) -> "MixedHodge":
        """The sub-structure on ``W_k``, in coordinates of the echelon basis of ``W_k``."""
        top = self.W[k]

        def coords(S: Subspace) -> Subspace:
            if S.dim == 0:
                return Subspace.zero(top.dim)
            return Subspace.span([top.coordinates(b) for b in S.basis], top.dim)

        Wp = {j: coords(self.W[j]) for j in range(self.W.low, k + 1)} if k >= self.W.low else {k: Subspace.zero(top.dim)}
        Fp = {p: coords(self.F[p] & top) for p in range(self.F.low, self.F.high + 1)}
        return MixedHodge(WeightFiltration(self.W.center, top.dim, Wp), HodgeFiltration(top.dim, Fp))


def hodge_numbers(M: MixedHodge) -> dict[tuple[int, int], int]:
    return M.hodge_numbers()


def is_mhs(M: MixedHodge) -> bool:
    return M.is_mhs()


def is_hodge_tate(M: MixedHodge) -> bool:
    return M.is_hodge_tate()


def is_semipure(M: MixedHodge, k: int) -> bool:
    """Whether the restriction to ``W_{k-1}`` is a Hodge-Tate mixed Hodge structure."""
    sub = M.restrict(k - 1)
    return sub.is_mhs() and sub.is_hodge_tate()


def hodge_table(numbers: dict) -> list[list[int]]:
    """``[[p, q, h], ...]`` sorted by ``(p, q)``, for reports."""
    return [[p, q, h] for (p, q), h in sorted(numbers.items())]


# --------------------------------------------------------------------------
# nilpotent orbits


@dataclass(frozen=True)
class NilpotentOrbitDatum:
    space: QuadSpace
    N: SOElement
    x0: tuple

    def __post_init__(self):
        if self.space.q(self.x0) != 0:
            raise PreconditionError("x0 must lie on the quadric q(x) = 0")


@dataclass(frozen=True)
class OrbitResult:
    """Coefficients of ``q(e^{itN}x0, conj) = a + b t + c t^2`` and the verdict."""

    accepted: bool
    a: object
    b: object
    c: object
    t0: object | None
    index: int

    def __bool__(self):
        return self.accepted


def orbit_polynomial(datum: NilpotentOrbitDatum) -> tuple:
    """``(a, b, c)`` with ``q(e^{itN}x0, conj(e^{itN}x0)) = a + b t + c t^2`` when ``N^3 = 0``."""
    q = datum.space.q
    x = datum.x0
    xb = vconj(x)
    Nx, Nxb = datum.N(x), datum.N(xb)
    a = real_part(q(x, xb))
    b = -2 * imag_part(q(Nx, xb))
    c = 2 * real_part(q(Nx, Nxb))
    return a, b, c


def orbit_value(datum: NilpotentOrbitDatum, t) -> object:
    """``q(y, conj y)`` for ``y = e^{itN} x0``, computed directly from the exponential."""
    E = nilpotent_exp(datum.N, I * to_scalar(t))
    y = E @ datum.x0
    return real_part(datum.space.hermitian(y))


def orbit_test(datum: NilpotentOrbitDatum) -> OrbitResult:
    """Whether ``t ↦ e^{itN} x0`` eventually lies in the period domain.

    For ``N^2 ≠ 0`` this is exactly ``q(N x0, N conj x0) > 0``.  When
    ``N^2 = 0`` that quantity vanishes identically on isotropic images and the
    verdict is read from the linear coefficient instead.  Raises
    :class:`IndexMismatch` unless ``N^3 = 0``.
    """
    idx = unipotency_index(datum.N)
    if idx > 3:
        raise IndexMismatch(f"orbit test needs N^3 = 0, got index {idx}")
    a, b, c = orbit_polynomial(datum)
    if idx == 3:
        accepted = c > 0
    elif c:
        accepted = c > 0
    elif b:
        accepted = b > 0
    else:
        accepted = a > 0
    t0 = None
    if accepted:
        if c:
            t0 = 1 + max(abs(a), abs(b)) / c
        elif b:
            t0 = max(ZERO, -a / b)
        else:
            t0 = ZERO
    return OrbitResult(accepted, a, b, c, t0, idx)


def confirm_orbit(datum: NilpotentOrbitDatum, result: OrbitResult, offsets=(1, 10, 100)) -> bool:
    """Evaluate the hermitian norm at ``t0 + offset`` directly; all must be positive."""
    if not result.accepted:
        return False
    return all(orbit_value(datum, result.t0 + d) > 0 for d in offsets)


def sample_quadric_point(space: QuadSpace, isotropic, rng: random.Random, height: int = 3) -> tuple:
    """A random Gaussian-rational ``x`` with ``q(x) = 0``.

    Draws ``y`` with bounded numerators and denominators, then moves along
    the isotropic direction: ``x = y - q(y) / (2 q(y, v)) v``.  Resamples when
    ``q(y, v) = 0``.
    """
    n = space.dim
    while True:
        y = tuple(
            CScalar(mpq(rng.randint(-height, height), rng.randint(1, height)),
                    mpq(rng.randint(-height, height), rng.randint(1, height)))
            for _ in range(n)
        )
        s = space.q(y, isotropic)
        if not s:
            continue
        t = -space.q(y) / (2 * s)
        x = vadd(y, vscale(t, isotropic))
        if any(a for a in x):
            return x


def k3_limit_mhs(datum: NilpotentOrbitDatum, check_orbit: bool = True) -> MixedHodge:
    """``(W(N) centred at 2, F)`` with ``F^2 = <x0>``, ``F^1 = x0^perp``, ``F^0`` everything."""
    if check_orbit and not orbit_test(datum):
        raise NotAnOrbit("(N, x0) is not a nilpotent orbit")
    n = datum.space.dim
    W = weight_filtration(datum.N, 2)
    x = datum.x0
    F2 = Subspace.span([x], n)
    F1 = kernel(Matrix([datum.space.gram @ x], n))
    F = HodgeFiltration(n, {0: Subspace.full(n), 1: F1, 2: F2})
    return MixedHodge(W, F)


def pure_k3_structure(space: QuadSpace, x) -> MixedHodge:
    """The weight-2 Hodge structure of a period point, with trivial weight filtration."""
    n = space.dim
    W = WeightFiltration(2, n, {2: Subspace.full(n)})
    F = HodgeFiltration(n, {0: Subspace.full(n), 1: kernel(Matrix([space.gram @ x], n)), 2: Subspace.span([x], n)})
    return MixedHodge(W, F)


# --------------------------------------------------------------------------
# Kuga-Satake limits


@dataclass(frozen=True)
class OrthogonalFrame:
    """A ``q``-orthogonal basis of a space, with coordinate changes both ways.

    Columns of ``T`` are the new basis vectors in old coordinates.
    """

    space: QuadSpace
    diagonal: QuadSpace
    T: Matrix
    T_inv: Matrix

    def vector(self, v) -> tuple:
        return self.T_inv @ v

    def element(self, A: SOElement) -> SOElement:
        return SOElement(self.diagonal, self.T_inv @ A.matrix @ self.T)


def orthogonal_frame(space: QuadSpace) -> OrthogonalFrame:
    from .quadspace import diagonalize

    d, P = diagonalize(space.gram)
    T = P.T
    return OrthogonalFrame(space, QuadSpace(Matrix.diag(d)), T, inverse(T))


def ks_limit_mhs(CA: CliffordAlgebra, datum: NilpotentOrbitDatum, check_orbit: bool = True) -> MixedHodge:
    """``(W(lift N) centred at -1, F)`` on ``Cl``, with ``F^0 = x0 · Cl`` and ``F^-1`` everything.

    ``datum`` must live on ``CA.space``.
    """
    if datum.space.gram != CA.space.gram:
        raise PreconditionError("orbit datum and Clifford algebra use different spaces")
    if check_orbit and not orbit_test(datum):
        raise NotAnOrbit("(N, x0) is not a nilpotent orbit")
    L = CA.left_matrix(CA.lift(datum.N))
    W = weight_filtration(L, -1)
    X = CA.left_matrix(CA.vector(datum.x0))
    F0 = image(X)
    F = HodgeFiltration(CA.size, {-1: Subspace.full(CA.size), 0: F0})
    return MixedHodge(W, F)


# --------------------------------------------------------------------------
# polarization


class Polarization:
    """``ω(x, y) = Tr(x a bar(y))`` with ``a = a1 a2`` on a Clifford algebra."""

    def __init__(self, CA: CliffordAlgebra, a1, a2):
        q = CA.space.q
        if not (q(a1) > 0 and q(a2) > 0 and q(a1, a2) == 0):
            raise PreconditionError("need q(a1) > 0, q(a2) > 0 and q(a1, a2) = 0")
        self.CA = CA
        self.a = CA.mul(CA.vector(a1), CA.vector(a2))
        self._gram = None

    def __call__(self, x, y):
        CA = self.CA
        return CA.trace(CA.mul(CA.mul(x, self.a), CA.bar(y)))

    def gram(self) -> Matrix:
        """``Ω[S][T] = ω(e_S, e_T)`` on the monomial basis."""
        if self._gram is None:
            CA = self.CA
            rows = []
            for S in range(CA.size):
                xa = CA.mul(CA.monomial(S), self.a)
                row = []
                for T in range(CA.size):
                    row.append(CA.trace(CA.mul(xa, CA.bar(CA.monomial(T)))))
                rows.append(row)
            self._gram = Matrix(rows, CA.size)
        return self._gram

    def invariance_defect(self, A: SOElement) -> Matrix:
        """``L^T Ω + Ω L`` for ``L`` = left multiplication by ``lift(A)``; zero iff invariant."""
        L = self.CA.left_matrix(self.CA.lift(A))
        O = self.gram()
        return L.T @ O + O @ L


def ks_polarization(CA: CliffordAlgebra, a1, a2) -> Polarization:
    return Polarization(CA, a1, a2)


def hermitian_inertia(H: Matrix) -> tuple[int, int, int]:
    """``(positive, negative, zero)`` inertia of a Gaussian-rational Hermitian matrix."""
    n = H.nrows
    M = [list(r) for r in H.rows]
    for i in range(n):
        for j in range(n):
            if M[i][j] != conj(M[j][i]):
                raise PreconditionError("matrix is not Hermitian")

    def add(i, j, lam):
        # basis vector i += lam * basis vector j
        for k in range(n):
            M[i][k] = M[i][k] + conj(lam) * M[j][k]
        for k in range(n):
            M[k][i] = M[k][i] + lam * M[k][j]

    diag = []
    alive = list(range(n))
    while alive:
        i = alive[0]
        if not real_part(M[i][i]):
            j = next((j for j in alive if real_part(M[j][j])), None)
            if j is None:
                j = next((j for j in alive[1:] if M[i][j]), None)
                if j is None:
                    diag.append(ZERO)
                    alive.pop(0)
                    continue
                lam = ONE if real_part(M[i][j]) else I
                add(i, j, lam)
            else:
                M[i], M[j] = M[j], M[i]
                for row in M:
                    row[i], row[j] = row[j], row[i]
        p = real_part(M[i][i])
        for j in alive[1:]:
            if M[j][i]:
                lam = -M[j][i] / p
                add(j, i, conj(lam))
        diag.append(p)
        alive.pop(0)
    return (sum(1 for d in diag if d > 0), sum(1 for d in diag if d < 0), sum(1 for d in diag if d == 0))


def hodge_form_inertia(P: Polarization, F0: Subspace) -> tuple[str, tuple[int, int, int]]:
    """Inertia of the Hermitian form ``ω(y, conj z)`` (or ``i`` times it) on ``F0``.

    Returns which of the two is Hermitian, ``"omega"`` or ``"i*omega"``, and
    its ``(positive, negative, zero)`` counts.
    """
    O = P.gram()
    B = list(F0.basis)
    rows = []
    for y in B:
        Oy = O.T @ y  # (Ω^T y)_T = sum_S y_S Ω[S][T]
        rows.append([sum((a * conj(b) for a, b in zip(Oy, z) if a and b), ZERO) for z in B])
    G = Matrix(rows, len(B))
    if G == G.T.conjugate():
        return "omega", hermitian_inertia(G)
    iG = G.scale(I)
    return "i*omega", hermitian_inertia(iG)
