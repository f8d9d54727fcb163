"""Independent re-verification of check reports from their witness payloads.

Nothing here uses the engine: scalars are :class:`fractions.Fraction`,
Gaussian rationals are ``(re, im)`` pairs, and linear algebra and the
Clifford product on an orthogonal basis are re-implemented in a few lines.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

HALF = Fraction(1, 2)


# scalars -----------------------------------------------------------------


def _f(s) -> Fraction:
    return Fraction(s)


def _c(x) -> tuple[Fraction, Fraction]:
    if isinstance(x, list):
        return (Fraction(x[0]), Fraction(x[1]))
    return (Fraction(x), Fraction(0))


def _cadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cinv(a):
    n = a[0] * a[0] + a[1] * a[1]
    return (a[0] / n, -a[1] / n)


def _cconj(a):
    return (a[0], -a[1])


_CZERO = (Fraction(0), Fraction(0))


# linear algebra ------------------------------------------------------------


def _matrix(rows) -> list[list[Fraction]]:
    return [[_f(a) for a in r] for r in rows]


def _sparse(payload) -> list[dict[int, Fraction]]:
    """Column-sparse form ``cols[j] = {i: a_ij}``."""
    cols = [dict() for _ in range(payload["dim"])]
    for i, j, a in payload["entries"]:
        cols[j][i] = _f(a)
    return cols


def _sparse_compose(A, B):
    """Columns of ``A B``."""
    out = []
    for col in B:
        acc: dict[int, Fraction] = {}
        for k, b in col.items():
            for i, a in A[k].items():
                acc[i] = acc.get(i, 0) + a * b
        out.append({i: a for i, a in acc.items() if a})
    return out


def _sparse_index(A, limit: int = 64) -> int | None:
    P = A
    for m in range(1, limit + 1):
        if not any(P):
            return m
        P = _sparse_compose(A, P)
    return None


def _mul(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), Fraction(0)) for j in range(len(B[0]))]
            for i in range(len(A))]


def _rank(rows, field="q") -> int:
    """Rank by Gaussian elimination over Q (``field="q"``) or Q(i) (``"qi"``)."""
    if field == "q":
        is0 = lambda a: a == 0  # noqa: E731
        mul, sub, inv = (lambda a, b: a * b), (lambda a, b: a - b), (lambda a: 1 / a)
    else:
        is0 = lambda a: a == _CZERO  # noqa: E731
        mul, inv = _cmul, _cinv
        sub = lambda a, b: (a[0] - b[0], a[1] - b[1])  # noqa: E731
    M = [list(r) for r in rows]
    if not M:
        return 0
    r = 0
    ncols = len(M[0])
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if not is0(M[i][c])), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = inv(M[r][c])
        for i in range(len(M)):
            if i != r and not is0(M[i][c]):
                f = mul(M[i][c], piv)
                M[i] = [sub(a, mul(f, b)) for a, b in zip(M[i], M[r])]
        r += 1
        if r == len(M):
            break
    return r


def _bilinear(G, u, v):
    return sum((G[i][j] * u[i] * v[j] for i in range(len(u)) for j in range(len(v)) if G[i][j]), Fraction(0))


def _cbilinear(G, u, v):
    acc = _CZERO
    for i in range(len(u)):
        for j in range(len(v)):
            if G[i][j]:
                acc = _cadd(acc, _cmul((G[i][j], Fraction(0)), _cmul(u[i], v[j])))
    return acc


def _capply(A, v):
    out = []
    for row in A:
        acc = _CZERO
        for a, b in zip(row, v):
            if a:
                acc = _cadd(acc, (a * b[0], a * b[1]))
        out.append(acc)
    return out


def _jordan_gr(A, center: int) -> dict[int, int]:
    """Graded dimensions of the weight filtration of nilpotent ``A`` from the ranks of its powers."""
    n = len(A)
    ranks = [n]
    P = A
    while ranks[-1]:
        ranks.append(_rank(P))
        P = _mul(A, P)
    ranks.append(0)
    at_least = [ranks[j - 1] - ranks[j] for j in range(1, len(ranks))]
    gr: dict[int, int] = {}
    for s in range(1, len(at_least) + 1):
        blocks = at_least[s - 1] - (at_least[s] if s < len(at_least) else 0)
        for t in range(s):
            w = center + s - 1 - 2 * t
            gr[w] = gr.get(w, 0) + blocks
    return {k: v for k, v in gr.items() if v}


# check-specific verifiers ------------------------------------------------


def _lemma_n(params, w) -> list[str]:
    bad = []
    G = _matrix(w["gram"])
    vec = {k: [_f(a) for a in w[k]] for k in ("h", "v0", "v1", "v2", "v3")}

    def q(a, b=None):
        u = vec[a] if isinstance(a, str) else a
        b = a if b is None else b
        return _bilinear(G, u, vec[b] if isinstance(b, str) else b)

    if not q("h") > 0:
        bad.append("q(h) > 0")
    if q("v0") != 0 or q("v1") != 1 or q("v2") != -1 or q("v1", "v2") != 0:
        bad.append("hyperbolic pair")
    if [HALF * (a + b) for a, b in zip(vec["v1"], vec["v2"])] != vec["v0"]:
        bad.append("v0 = (v1 + v2)/2")
    if not q("v3") > 0 or any(q("v3", o) for o in ("h", "v0", "v1", "v2")):
        bad.append("v3 positive and orthogonal")
    if any(q("h", o) for o in ("v0", "v1", "v2")):
        bad.append("h orthogonal to the hyperbolic plane")
    B = [[_f(a) for a in b] for b in w["vh_basis"]]
    if len(B) != len(G) - 1 or _rank(B) != len(B) or any(_bilinear(G, b, vec["h"]) for b in B):
        bad.append("vh_basis spans h-perp")
    N = _matrix(w["N"])
    for k, b in enumerate(B):
        image = [q("v3", b) * x - q("v0", b) * y for x, y in zip(vec["v0"], vec["v3"])]
        combo = [sum((N[j][k] * B[j][i] for j in range(len(B))), Fraction(0)) for i in range(len(G))]
        if image != combo:
            bad.append("N = v0 ^ v3 on V^h")
            break
    N2 = _mul(N, N)
    if _rank(N) != 2 or _rank(N2) != 1 or any(any(r) for r in _mul(N2, N)):
        bad.append("Jordan type of N")
    ig = [[q(a, b) for b in ("v0", "v3")] for a in ("v0", "v3")]
    if [[str(a) for a in r] for r in ig] != [[str(_f(a)) for a in r] for r in w["image_gram"]]:
        bad.append("image gram")
    if w["index"] != 3:
        bad.append("index 3")
    return bad


def _orbit_coefficients(G, N, x):
    """Coefficients of ``F(t) = q(x_t, conj x_t)``, ``x_t = exp(itN) x``, from ``t = 0..4``.

    Returns ``None`` when ``F`` is not quadratic.
    """

    def star(t):
        xt = list(x)
        term = list(x)
        coef = (Fraction(1), Fraction(0))
        for j in range(1, len(G) + 1):
            term = _capply(N, term)
            if not any(a != _CZERO for a in term):
                break
            coef = _cmul(coef, (Fraction(0), Fraction(t) / j))
            xt = [_cadd(a, _cmul(coef, b)) for a, b in zip(xt, term)]
        return _cbilinear(G, xt, [_cconj(a) for a in xt])[0]
    f = [star(t) for t in range(5)]
    d3 = f[3] - 3 * f[2] + 3 * f[1] - f[0]
    d4 = f[4] - 4 * f[3] + 6 * f[2] - 4 * f[1] + f[0]
    if d3 or d4:
        return None
    c = (f[2] - 2 * f[1] + f[0]) / 2
    return f[0], f[1] - f[0] - c, c


def _check_samples(G, N, index, samples, bad, label, hodge_tate):
    gr_expected = _jordan_gr(N, 2)
    for s in samples:
        x = [_c(a) for a in s["x0"]]
        if _cbilinear(G, x, x) != _CZERO:
            bad.append(f"{label}: q(x0) != 0")
        coeffs = _orbit_coefficients(G, N, x)
        if coeffs is None or list(coeffs) != [_f(v) for v in s["coefficients"]]:
            bad.append(f"{label}: orbit polynomial")
            continue
        a, b, c = coeffs
        lead = c if c else (b if b else a)
        rule = c > 0 if index == 3 else lead > 0
        if bool(s["accepted"]) != rule:
            bad.append(f"{label}: acceptance rule")
        if not s["accepted"]:
            continue
        t = _f(s["t0"]) + 1
        if not a + b * t + c * t * t > 0:
            bad.append(f"{label}: F(t0 + 1) > 0")
        gr = {int(k): v for k, v in s["gr_dims"].items() if v}
        if gr != gr_expected:
            bad.append(f"{label}: gr dims")
        h = {(p, qq): n for p, qq, n in s["hodge_numbers"]}
        if sum(h.values()) != len(G):
            bad.append(f"{label}: Hodge numbers sum")
        by_weight: dict[int, int] = {}
        for (p, qq), n in h.items():
            by_weight[p + qq] = by_weight.get(p + qq, 0) + n
            if h.get((qq, p)) != n:
                bad.append(f"{label}: Hodge symmetry")
        if by_weight != gr_expected:
            bad.append(f"{label}: Hodge numbers vs gr dims")
        ht = all(p == qq for p, qq in h)
        if ht != s["hodge_tate"] or (hodge_tate and not ht):
            bad.append(f"{label}: Hodge-Tate")


def _h2_limit(params, w) -> list[str]:
    bad = []
    G = _matrix(w["gram_h"])
    N = _matrix(w["N"])
    if _jordan_gr(N, 2) != {k: v for k, v in {0: 1, 2: len(G) - 2, 4: 1}.items() if v}:
        bad.append("gr dims (1,0,d-3,0,1)")
    _check_samples(G, N, 3, w["samples"], bad, "index 3", True)
    if not any(s["accepted"] for s in w["samples"]):
        bad.append("no accepted sample")
    neg = [_c(a) for a in w["negative"]["x0"]]
    if any(a != _CZERO for a in _capply(N, neg)) or w["negative"]["accepted"]:
        bad.append("negative sample")
    ctrl = w["control"]
    if "samples" in ctrl:
        N2 = _matrix(ctrl["N"])
        if _rank(N2) == 0 or any(any(r) for r in _mul(N2, N2)):
            bad.append("control index 2")
        _check_samples(G, N2, 2, ctrl["samples"], bad, "index 2", False)
        acc = [s for s in ctrl["samples"] if s["accepted"]]
        if not acc or all(s["hodge_tate"] for s in acc):
            bad.append("control yields a non-Hodge-Tate limit")
    return bad


def _hw_epsilon(kind: str, a: list[int]) -> list[Fraction]:
    """``sum a_i ϖ_i`` in ε-coordinates, written out directly."""
    r = len(a)
    out = [Fraction(0)] * r
    spin = 1 if kind == "B" else 2
    for i, c in enumerate(a):
        if i < r - spin:
            for j in range(i + 1):
                out[j] += c
        elif kind == "B" or i == r - 1:
            for j in range(r):
                out[j] += HALF * c
        else:
            for j in range(r):
                out[j] += HALF * c * (-1 if j == r - 1 else 1)
    return out


def _index_checks(params, w, expected: int) -> list[str]:
    bad = []
    idx = _sparse_index(_sparse(w["rho_N_sub"]))
    if idx != expected or w["index"] != expected:
        bad.append(f"index {expected}")
    if "rho_N_full" in w:
        full = _sparse_index(_sparse(w["rho_N_full"]))
        if full is None or full > expected:
            bad.append("index bound on the full module")
        l, k = params["l"], params["k"]
        hw = [k - 1 + HALF] + [HALF] * (l - 1)
        if [[_f(a) for a in x] for x in w["highest_weights"]] != [hw]:
            bad.append("highest weight")
    return bad


def _odd_index(params, w):
    return _index_checks(params, w, 2 * params["k"])


def _even_index(params, w):
    return _index_checks(params, w, 2 * params["k"] + 1)


def _spinor_lemmas(params, w) -> list[str]:
    bad = []
    l, kind, n = params["l"], params["type"], params["n"]
    sols = [list(a) for a in itertools.product(range(4), repeat=l) if _hw_epsilon(kind, list(a))[0] == HALF]
    if sorted(sols) != sorted(w["xi1_solutions"]):
        bad.append("xi1 enumeration")
    if not _f(w["rho_N_u_scalar"]):
        bad.append("rho(N) u nonzero")
    if _f(w["xi1_on_u"]) != HALF or [_f(a) for a in w["weil_on_u"]] != [0, -2 * HALF]:
        bad.append("xi1 and Weil normalizations")
    mu = _hw_epsilon(kind, [n - 2] + [0] * (l - 1) + [1])
    if [_f(a) for a in w["mu"]] != mu or _f(w["xi0_on_hw"]) != n - 2 + HALF:
        bad.append("highest weight and xi0")
    alpha = [Fraction(1), Fraction(-1)] + [Fraction(0)] * (l - 1)
    if [_f(a) for a in w["alpha"]] != alpha:
        bad.append("alpha")
    string = w["weight_string"]
    if len(string) != n - 1:
        bad.append("string length")
    for s in string:
        i = s["i"]
        if [_f(a) for a in s["weight"]] != [m - i * a for m, a in zip(mu, alpha)] or not s["present"]:
            bad.append(f"weight string at {i}")
    return bad


class _OrthClifford:
    """Clifford algebra on an orthogonal basis with ``e_i^2 = d_i``."""

    def __init__(self, diag):
        self.d = diag
        self.n = len(diag)
        self.size = 1 << self.n

    def product(self, S: int, T: int):
        sign = 0
        for i in range(self.n):
            if T >> i & 1:
                sign += bin(S >> (i + 1)).count("1")
        c = Fraction(-1 if sign % 2 else 1)
        for i in range(self.n):
            if S & T & (1 << i):
                c *= self.d[i]
        return S ^ T, c

    def left_rows(self, x: dict[int, tuple]):
        """Left multiplication matrix (complex entries), rows indexed by target monomial."""
        rows = [[_CZERO] * self.size for _ in range(self.size)]
        for T in range(self.size):
            for S, a in x.items():
                U, c = self.product(S, T)
                rows[U][T] = _cadd(rows[U][T], (a[0] * c, a[1] * c))
        return rows


def _ks_limit(params, w) -> list[str]:
    bad = []
    d = [_f(a) for a in w["diag"]]
    N = _matrix(w["N"])
    n = len(d)
    CA = _OrthClifford(d)
    half = CA.size // 2
    lift = {}
    for i in range(n):
        for j in range(i + 1, n):
            if N[i][j]:
                lift[(1 << i) | (1 << j)] = (N[i][j] / d[j] * HALF, Fraction(0))
    L = CA.left_rows(lift)
    Lr = [[a[0] for a in r] for r in L]
    if _rank(Lr) != half or any(any(r) for r in _mul(Lr, Lr)):
        bad.append("lift(N) has square zero and half rank")
    accepted = 0
    G = [[d[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for s in w["samples"]:
        x = [_c(a) for a in s["x0"]]
        if _cbilinear(G, x, x) != _CZERO:
            bad.append("q(x0) != 0")
        coeffs = _orbit_coefficients(G, N, x)
        if coeffs is None or bool(s["accepted"]) != (coeffs[2] > 0):
            bad.append("acceptance rule")
        if not s["accepted"]:
            continue
        accepted += 1
        X = CA.left_rows({1 << i: x[i] for i in range(n) if x[i] != _CZERO})
        if _rank(X, "qi") != half or s["F0_dim"] != half:
            bad.append("dim F0 = half")
        gr = {int(k): v for k, v in s["gr_dims"].items() if v}
        if gr != {-2: half, 0: half}:
            bad.append("gr dims of the KS limit")
        h = {(p, qq): m for p, qq, m in s["hodge_numbers"]}
        if any(p != qq for p, qq in h) or sum(h.values()) != CA.size:
            bad.append("Hodge-Tate numbers")
    if not accepted:
        bad.append("no accepted sample")
    # polarization invariance under lift(N)
    a1 = next(i for i, v in enumerate(w["a1"]) if _f(v))
    a2 = next(i for i, v in enumerate(w["a2"]) if _f(v))
    amask, acoef = CA.product(1 << a1, 1 << a2)
    omega = [[Fraction(0)] * CA.size for _ in range(CA.size)]
    for T in range(CA.size):
        k = bin(T).count("1")
        rev = Fraction(-1 if (k * (k - 1) // 2) % 2 else 1)
        for S in range(CA.size):
            U, c1 = CA.product(S, amask)
            V, c2 = CA.product(U, T)
            if V == 0:
                omega[S][T] = CA.size * c1 * c2 * acoef * rev
    Lt = [list(r) for r in zip(*Lr)]
    defect = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(_mul(Lt, omega), _mul(omega, Lr))]
    if any(any(r) for r in defect):
        bad.append("omega invariant under lift(N)")
    return bad


VERIFIERS = {
    "lemma-n": _lemma_n,
    "h2-limit": _h2_limit,
    "odd-index": _odd_index,
    "even-index": _even_index,
    "spinor-lemmas": _spinor_lemmas,
    "ks-limit": _ks_limit,
}


def recheck(report: dict) -> list[str]:
    """Problems found when re-deriving a ``pass`` verdict; empty means reproduced.

    Reports with other verdicts carry no claim to re-derive and return ``[]``.
    """
    if report["verdict"] != "pass":
        return []
    return VERIFIERS[report["check"]](report["params"], report["witness"])
