"""Finite-dimensional ``so(V, q)``-modules built functorially from the standard one.

A :class:`RepModule` knows how to turn an :class:`SOElement` into an action
matrix on its own basis.  Symmetric powers use monomials in sorted index
words, exterior powers sorted subsets; tensor products use the row-major
ordering of pairs.  Everything is exact and deterministic.
"""

from __future__ import annotations

from itertools import combinations, combinations_with_replacement
from math import comb
from typing import Callable, Iterable, Sequence

from .errors import CapExceeded, ContainmentError, PreconditionError
from .exact import (
    ONE,
    ZERO,
    EchelonBuilder,
    Matrix,
    Subspace,
    from_sparse,
    kernel,
    solve,
    to_sparse,
    vec,
)
from .lie import (
    HALF,
    HyperbolicBasis,
    MukaiSpace,
    SOElement,
    WeightVector,
    cartan_basis,
    positive_roots,
    root_vector,
)
from .quadspace import QuadSpace

TENSOR_CAP = 20000
QUARTER = HALF * HALF


class RepModule:
    """A module over ``so(algebra)`` with a labelled basis and an action map.

    ``parent`` and ``subspace`` are set for submodules: the basis is then the
    echelon basis of ``subspace`` inside ``parent``.
    """

    def __init__(
        self,
        algebra: QuadSpace,
        dim: int,
        labels: Sequence[str],
        action: Callable[[SOElement], Matrix],
        *,
        name: str = "",
        parent: "RepModule | None" = None,
        subspace: Subspace | None = None,
    ):
        self.algebra = algebra
        self.dim = dim
        self.labels = tuple(labels)
        self._action = action
        self._cache: dict = {}
        self.name = name
        self.parent = parent
        self.subspace = subspace

    def act(self, A: SOElement) -> Matrix:
        if A.ambient.gram != self.algebra.gram:
            raise PreconditionError("element of a different orthogonal algebra")
        key = A.matrix
        M = self._cache.get(key)
        if M is None:
            M = self._action(A)
            self._cache[key] = M
        return M

    def __repr__(self):
        return f"RepModule({self.name or '?'}, dim={self.dim})"

    def respects_bracket(self, A: SOElement, B: SOElement) -> bool:
        from .lie import bracket

        a, b = self.act(A), self.act(B)
        return self.act(bracket(A, B)) == a @ b - b @ a

    def index_of(self, label: str) -> int:
        return self.labels.index(label)


def _check_cap(what: str, size: int):
    if size > TENSOR_CAP:
        raise CapExceeded(what, size, TENSOR_CAP)


def standard_rep(Q_: QuadSpace) -> RepModule:
    labels = Q_.labels or tuple(f"b{i}" for i in range(Q_.dim))
    return RepModule(Q_, Q_.dim, labels, lambda A: A.matrix, name="V")


def trivial_rep(Q_: QuadSpace, dim: int = 1) -> RepModule:
    zero = Matrix.zeros(dim, dim)
    return RepModule(Q_, dim, [f"t{i}" for i in range(dim)], lambda A: zero, name="trivial")


def dual(R: RepModule) -> RepModule:
    return RepModule(
        R.algebra, R.dim, [f"{s}*" for s in R.labels], lambda A: -R.act(A).T,
        name=f"({R.name})*",
    )


def _kron_sum(X: Matrix, Y: Matrix) -> Matrix:
    """``X ⊗ 1 + 1 ⊗ Y`` built sparsely."""
    m, n = X.nrows, Y.nrows
    rows = [[ZERO] * (m * n) for _ in range(m * n)]
    xnz, ynz = X.nonzero(), Y.nonzero()
    for i in range(m):
        for k, a in xnz[i]:
            for j in range(n):
                rows[i * n + j][k * n + j] += a
        for j in range(n):
            r = rows[i * n + j]
            for k, b in ynz[j]:
                r[i * n + k] += b
    return Matrix(rows, m * n)


def tensor(R1: RepModule, R2: RepModule) -> RepModule:
    if R1.algebra.gram != R2.algebra.gram:
        raise PreconditionError("tensor factors over different algebras")
    _check_cap("tensor product", R1.dim * R2.dim)
    labels = [f"{a}⊗{b}" for a in R1.labels for b in R2.labels]
    return RepModule(
        R1.algebra, R1.dim * R2.dim, labels, lambda A: _kron_sum(R1.act(A), R2.act(A)),
        name=f"{R1.name}⊗{R2.name}",
    )


def tensor_vector(u, v) -> tuple:
    return tuple(a * b if a and b else ZERO for a in u for b in v)


def direct_sum(R1: RepModule, R2: RepModule) -> RepModule:
    if R1.algebra.gram != R2.algebra.gram:
        raise PreconditionError("summands over different algebras")
    m, n = R1.dim, R2.dim

    def action(A):
        X, Y = R1.act(A), R2.act(A)
        rows = [tuple(r) + (ZERO,) * n for r in X.rows] + [(ZERO,) * m + tuple(r) for r in Y.rows]
        return Matrix(rows, m + n)

    labels = [f"{s}#1" for s in R1.labels] + [f"{s}#2" for s in R2.labels]
    return RepModule(R1.algebra, m + n, labels, action, name=f"{R1.name}⊕{R2.name}")


def sym_power(R: RepModule, k: int) -> RepModule:
    """``S^k R`` on monomials indexed by sorted words; the action is a derivation."""
    if k < 0:
        raise PreconditionError("symmetric power needs k >= 0")
    n = R.dim
    _check_cap("symmetric power", comb(n + k - 1, k) if n else int(k == 0))
    words = list(combinations_with_replacement(range(n), k))
    index = {w: i for i, w in enumerate(words)}

    def action(A):
        X = R.act(A)
        cols = [[] for _ in range(n)]
        for i, row in enumerate(X.nonzero()):
            for j, a in row:
                cols[j].append((i, a))
        rows = [[ZERO] * len(words) for _ in words]
        for c, w in enumerate(words):
            for pos, j in enumerate(w):
                if pos and w[pos - 1] == j:
                    continue  # derivation hits each distinct factor once, times its multiplicity
                mult = w.count(j)
                rest = w[:pos] + w[pos + mult:]
                for i, a in cols[j]:
                    target = index[tuple(sorted(rest + (j,) * (mult - 1) + (i,)))]
                    rows[target][c] += mult * a
        return Matrix(rows, len(words))

    labels = ["·".join(R.labels[i] for i in w) if w else "1" for w in words]
    mod = RepModule(R.algebra, len(words), labels, action, name=f"S^{k}({R.name})")
    mod.words = words
    mod.word_index = index
    return mod


def monomial(S: RepModule, word: Iterable[int]) -> tuple:
    out = [ZERO] * S.dim
    out[S.word_index[tuple(sorted(word))]] = ONE
    return tuple(out)


def _sorted_sign(seq: list[int]) -> tuple[int, tuple]:
    """Sign of the permutation sorting ``seq`` (0 when an index repeats)."""
    if len(set(seq)) != len(seq):
        return 0, ()
    inv = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return (-1 if inv % 2 else 1), tuple(sorted(seq))


def ext_power(R: RepModule, k: int) -> RepModule:
    """``Λ^k R`` on sorted subsets; the action is a derivation."""
    if k < 0:
        raise PreconditionError("exterior power needs k >= 0")
    n = R.dim
    _check_cap("exterior power", comb(n, k))
    words = list(combinations(range(n), k))
    index = {w: i for i, w in enumerate(words)}

    def action(A):
        X = R.act(A)
        cols = [[] for _ in range(n)]
        for i, row in enumerate(X.nonzero()):
            for j, a in row:
                cols[j].append((i, a))
        rows = [[ZERO] * len(words) for _ in words]
        for c, w in enumerate(words):
            for pos, j in enumerate(w):
                for i, a in cols[j]:
                    new = list(w)
                    new[pos] = i
                    s, key = _sorted_sign(new)
                    if s:
                        rows[index[key]][c] += s * a
        return Matrix(rows, len(words))

    labels = ["∧".join(R.labels[i] for i in w) if w else "1" for w in words]
    mod = RepModule(R.algebra, len(words), labels, action, name=f"Λ^{k}({R.name})")
    mod.words = words
    mod.word_index = index
    return mod


def submodule(R: RepModule, S: Subspace, name: str = "") -> RepModule:
    """``R`` restricted to an invariant subspace; the basis is the echelon basis of ``S``."""
    if S.ambient != R.dim:
        raise PreconditionError("subspace lives in a different module")

    def action(A):
        X = R.act(A)
        cols = []
        for b in S.basis:
            img = X @ b
            if not S.contains(img):
                raise ContainmentError("subspace is not invariant under the action")
            cols.append(tuple(img[p] for p in S.pivots))
        return Matrix.from_columns(cols, S.dim) if cols else Matrix.zeros(0, 0)

    labels = [f"w{i}" for i in range(S.dim)]
    return RepModule(R.algebra, S.dim, labels, action, name=name or f"sub({R.name})", parent=R, subspace=S)


def to_parent(R: RepModule, y) -> tuple:
    """Coordinates of a submodule vector in the parent module."""
    out = [ZERO] * R.parent.dim
    for c, b in zip(y, R.subspace.basis):
        if c:
            for j, a in enumerate(b):
                if a:
                    out[j] += c * a
    return tuple(out)


def generated_subspace(R: RepModule, vectors: Sequence, generators: Sequence[SOElement]) -> Subspace:
    """Smallest subspace containing ``vectors`` and stable under ``generators``."""
    mats = [R.act(X) for X in generators]
    builder = EchelonBuilder(R.dim)
    queue = []
    for v in vectors:
        if builder.add(to_sparse(v)) is not None:
            queue.append(to_sparse(v))
    while queue:
        w = queue.pop()
        for M in mats:
            img = M.apply_sparse(w)
            if img and builder.add(img) is not None:
                queue.append(img)
    return builder.subspace()


def submodule_generated(R: RepModule, v, generators: Sequence[SOElement]) -> RepModule:
    """The submodule generated by ``v`` (``generators`` must generate the acting algebra)."""
    S = generated_subspace(R, [vec(v)], generators)
    return submodule(R, S, name=f"<{R.name}>")


def contraction_map(S: RepModule, qt: QuadSpace) -> Matrix:
    """``S^n Ṽ → S^(n-2) Ṽ``, ``v1⋯vn ↦ sum_{i<j} q̃(vi, vj) ∏_{k≠i,j} vk``."""
    words = S.words
    n = len(words[0]) if words else 0
    low = list(combinations_with_replacement(range(qt.dim), n - 2))
    index = {w: i for i, w in enumerate(low)}
    rows = [[ZERO] * len(words) for _ in low]
    G = qt.gram
    for c, w in enumerate(words):
        for a in range(n):
            for b in range(a + 1, n):
                g = G[w[a], w[b]]
                if g:
                    rest = w[:a] + w[a + 1:b] + w[b + 1:]
                    rows[index[rest]][c] += g
    return Matrix(rows, len(words)) if low else Matrix.zeros(0, len(words))


def contraction_kernel(M: MukaiSpace, n: int) -> RepModule:
    """Kernel of contraction with ``q̃`` inside ``S^n Ṽ``; all of ``S^n Ṽ`` when ``n < 2``."""
    S = sym_power(standard_rep(M.space), n)
    if n < 2:
        return S
    K = kernel(contraction_map(S, M.space))
    return submodule(S, K, name=f"ker(S^{n}Ṽ→S^{n - 2}Ṽ)")


# --------------------------------------------------------------------------
# spinors


def _wedge_ops(l: int):
    """Exterior multiplication and contraction on ``Λ•U``, basis by bitmask."""
    size = 1 << l
    eps, iota = [], []
    for i in range(l):
        E = [[ZERO] * size for _ in range(size)]
        C = [[ZERO] * size for _ in range(size)]
        bit = 1 << i
        for S in range(size):
            sign = -ONE if bin(S & (bit - 1)).count("1") % 2 else ONE
            if S & bit:
                C[S ^ bit][S] = sign
            else:
                E[S | bit][S] = sign
        eps.append(Matrix(E, size))
        iota.append(Matrix(C, size))
    parity = Matrix.diag([(-1) ** bin(S).count("1") for S in range(size)])
    return eps, iota, parity


def _spinor_gammas(HB: HyperbolicBasis):
    """Clifford images of the coordinate vectors of ``HB.space`` on ``Λ•U``."""
    if HB.anisotropic or HB.needs_sqrt or (HB.kind == "B" and HB.last is None):
        raise PreconditionError("spinor module needs a split hyperbolic basis with unit last vector")
    l = HB.rank
    if l < 1:
        raise PreconditionError("spinor module needs at least one hyperbolic pair")
    eps, iota, parity = _wedge_ops(l)
    images = []
    cols = []
    for a, (e, f) in enumerate(HB.pairs):
        cols += [e, f]
        images += [eps[a], iota[a].scale(2)]
    if HB.last is not None:
        cols.append(HB.last)
        images.append(parity)
    n = HB.space.dim
    P = Matrix.from_columns(cols, n)
    size = 1 << l
    gammas = []
    for i in range(n):
        c = solve(P, [ONE if j == i else ZERO for j in range(n)])
        acc = Matrix.zeros(size, size)
        for coef, img in zip(c, images):
            if coef:
                acc = acc + img.scale(coef)
        gammas.append(acc)
    return gammas


def _spin_action_from_gammas(gammas: list[Matrix], Q_: QuadSpace):
    size = gammas[0].nrows if gammas else 1
    products: dict = {}

    def prod(i, j):
        key = (i, j)
        if key not in products:
            products[key] = gammas[i] @ gammas[j]
        return products[key]

    def action(A: SOElement) -> Matrix:
        B = A.bivector_coefficients()
        acc = Matrix.zeros(size, size)
        n = Q_.dim
        for i in range(n):
            for j in range(i + 1, n):
                c = B[i, j]
                if c:
                    acc = acc + (prod(i, j) - prod(j, i)).scale(c * QUARTER)
        return acc

    return action


def spinor_module(HB: HyperbolicBasis) -> RepModule:
    """``Λ•U`` with ``U = <e_i>``: ``e_i`` wedges, ``e_i'`` contracts twice, ``e_{l+1}`` is parity.

    Basis vectors are subsets of ``{1..l}`` encoded as bitmasks; the highest
    weight vector ``e_1 ∧ ... ∧ e_l`` is the last one.
    """
    gammas = _spinor_gammas(HB)
    l = HB.rank
    idx = list(HB.indices())
    labels = []
    for S in range(1 << l):
        parts = [f"u{idx[i]}" for i in range(l) if S >> i & 1]
        labels.append("∧".join(parts) if parts else "1")
    mod = RepModule(HB.space, 1 << l, labels, _spin_action_from_gammas(gammas, HB.space),
                    name="Spin")
    mod.gammas = gammas
    mod.hyperbolic_basis = HB
    return mod


def spinor_top(R: RepModule) -> tuple:
    """The vector ``e_1 ∧ ... ∧ e_l`` in a spinor module."""
    out = [ZERO] * R.dim
    out[R.dim - 1] = ONE
    return tuple(out)


def spinor_wedge(R: RepModule, indices: Iterable[int]) -> tuple:
    """Basis vector ``e_{i1} ∧ ... ∧ e_{ik}`` of a spinor module (absolute indices)."""
    first = R.hyperbolic_basis.first_index
    mask = 0
    for i in indices:
        mask |= 1 << (i - first)
    out = [ZERO] * R.dim
    out[mask] = ONE
    return tuple(out)


def semi_spinors(R: RepModule) -> tuple[RepModule, RepModule]:
    """Even- and odd-degree summands of a spinor module of type D."""
    if R.hyperbolic_basis.kind != "D":
        raise PreconditionError("semi-spinors exist only for even-dimensional spaces")
    even = [tuple(ONE if T == S else ZERO for T in range(R.dim)) for S in range(R.dim) if bin(S).count("1") % 2 == 0]
    odd = [tuple(ONE if T == S else ZERO for T in range(R.dim)) for S in range(R.dim) if bin(S).count("1") % 2 == 1]
    return (submodule(R, Subspace.span(even, R.dim), "Spin+"), submodule(R, Subspace.span(odd, R.dim), "Spin-"))


# --------------------------------------------------------------------------
# weights


def _half_integer_candidates(M: Matrix) -> list:
    bound = max((sum(abs(a) for a in r) for r in M.rows), default=ZERO)
    top = int(2 * bound) + 1
    return [HALF * k for k in range(-top, top + 1)]


def _split_by_eigen(S: Subspace, H: Matrix) -> list[tuple]:
    """Decompose ``S`` into eigenspaces of ``H`` (``H`` must preserve ``S``)."""
    if S.dim == 0:
        return []
    cols = []
    for b in S.basis:
        img = H @ b
        cols.append(S.coordinates(img))
    Hs = Matrix.from_columns(cols, S.dim)
    pieces = []
    total = 0
    n = S.dim
    for lam in _half_integer_candidates(Hs):
        K = kernel(Hs - Matrix.identity(n).scale(lam))
        if K.dim:
            amb = [tuple(sum((c * b[j] for c, b in zip(y, S.basis) if c), ZERO) for j in range(S.ambient)) for y in K.basis]
            pieces.append((lam, Subspace.span(amb, S.ambient)))
            total += K.dim
    if total != n:
        raise PreconditionError("Cartan element does not act semisimply with half-integral eigenvalues")
    return pieces


def weight_decomposition(R: RepModule, HB: HyperbolicBasis) -> dict[WeightVector, Subspace]:
    """Simultaneous eigenspaces of the Cartan elements ``ξ_i`` (weights sorted decreasingly)."""
    cartan = cartan_basis(HB)
    if R.parent is not None and R.subspace is not None:
        up = weight_decomposition(R.parent, HB)
        out = {}
        for w, S in up.items():
            T = S & R.subspace
            if T.dim:
                out[w] = Subspace.span([R.subspace.coordinates(b) for b in T.basis], R.dim)
        if sum(S.dim for S in out.values()) != R.dim:
            raise PreconditionError("submodule is not a sum of weight spaces")
        return dict(sorted(out.items(), key=lambda kv: kv[0].coords, reverse=True))
    mats = [R.act(x) for x in cartan]
    if all(M.is_diagonal() for M in mats):
        groups: dict = {}
        for j in range(R.dim):
            key = tuple(M[j, j] for M in mats)
            groups.setdefault(key, []).append(j)
        out = {}
        for key, js in groups.items():
            basis = [tuple(ONE if t == j else ZERO for t in range(R.dim)) for j in js]
            out[WeightVector(key, HB.first_index)] = Subspace(tuple(basis), tuple(js), R.dim)
        return dict(sorted(out.items(), key=lambda kv: kv[0].coords, reverse=True))
    pieces = [((), Subspace.full(R.dim))]
    for H in mats:
        nxt = []
        for key, S in pieces:
            for lam, T in _split_by_eigen(S, H):
                nxt.append((key + (lam,), T))
        pieces = nxt
    out = {WeightVector(k, HB.first_index): S for k, S in pieces}
    return dict(sorted(out.items(), key=lambda kv: kv[0].coords, reverse=True))


def weight_multiplicities(R: RepModule, HB: HyperbolicBasis) -> dict[WeightVector, int]:
    return {w: S.dim for w, S in weight_decomposition(R, HB).items()}


def highest_weight_vectors(R: RepModule, HB: HyperbolicBasis) -> list[tuple[tuple, WeightVector]]:
    """Weight vectors killed by every positive root vector, as a basis per weight."""
    raising = [R.act(root_vector(HB, a)) for a in positive_roots(HB)]
    out = []
    for w, S in weight_decomposition(R, HB).items():
        if not raising:
            out += [(b, w) for b in S.basis]
            continue
        rows = []
        for X in raising:
            imgs = [X @ b for b in S.basis]
            for j in range(R.dim):
                row = tuple(img[j] for img in imgs)
                if any(row):
                    rows.append(row)
        if not rows:
            out += [(b, w) for b in S.basis]
            continue
        K = kernel(Matrix(rows, S.dim))
        for y in K.basis:
            v = tuple(sum((c * b[j] for c, b in zip(y, S.basis) if c), ZERO) for j in range(R.dim))
            out.append((v, w))
    return out


def nilpotency_on(R: RepModule, A: SOElement, v=None, limit: int | None = None) -> int | None:
    """Least ``m`` with ``ρ(A)^m = 0`` on ``R`` (or with ``ρ(A)^m v = 0`` when ``v`` is given)."""
    X = R.act(A)
    limit = R.dim + 1 if limit is None else limit
    if v is None:
        P = Matrix.identity(R.dim)
        for m in range(limit + 1):
            if P.is_zero():
                return m
            P = X @ P
        return None
    w = to_sparse(v)
    for m in range(limit + 1):
        if not w:
            return m
        w = X.apply_sparse(w)
    return None


def apply_power(R: RepModule, A: SOElement, v, m: int) -> tuple:
    X = R.act(A)
    w = to_sparse(v)
    for _ in range(m):
        w = X.apply_sparse(w)
    return from_sparse(w, R.dim)
