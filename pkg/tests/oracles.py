"""Independent oracles for the test-suite.

These use :class:`fractions.Fraction` and brute force; none of them calls the
engine's elimination, diagonalization or filtration code.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import comb


def frac_rank(rows) -> int:
    M = [[Fraction(a) for a in r] for r in rows]
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        for i in range(r + 1, len(M)):
            if M[i][c]:
                f = M[i][c] / M[r][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
    return r


def frac_mul(A, B):
    return [[sum(Fraction(A[i][k]) * Fraction(B[k][j]) for k in range(len(B))) for j in range(len(B[0]))]
            for i in range(len(A))]


def jordan_matrix(sizes) -> list[list[int]]:
    """Nilpotent Jordan matrix with blocks of the given sizes; ``A e_i = e_{i+1}`` inside a block."""
    n = sum(sizes)
    A = [[0] * n for _ in range(n)]
    start = 0
    for s in sizes:
        for i in range(start, start + s - 1):
            A[i + 1][i] = 1
        start += s
    return A


def jordan_gr_dims(sizes, center: int) -> dict[int, int]:
    """Graded dimensions of the weight filtration directly from the Jordan type."""
    gr: dict[int, int] = {}
    for s in sizes:
        for t in range(s):
            w = center + s - 1 - 2 * t
            gr[w] = gr.get(w, 0) + 1
    return gr


def gr_dims_from_ranks(A, center: int) -> dict[int, int]:
    """Jordan type recovered from ``rank(A^j)`` and turned into graded dimensions."""
    n = len(A)
    ranks = [n]
    P = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    while ranks[-1]:
        P = frac_mul(A, P)
        ranks.append(frac_rank(P))
    ranks.append(0)
    at_least = [ranks[j - 1] - ranks[j] for j in range(1, len(ranks))]
    sizes = []
    for s in range(1, len(at_least) + 1):
        nxt = at_least[s] if s < len(at_least) else 0
        sizes += [s] * (at_least[s - 1] - nxt)
    return jordan_gr_dims(sizes, center)


def random_unimodular(n: int, rng: random.Random, steps: int = 12) -> list[list[int]]:
    """Product of elementary integer matrices and signed permutations."""
    g = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        kind = rng.random()
        if kind < 0.7 and n > 1:
            c = rng.choice([-2, -1, 1, 2])
            g[i] = [a + c * b for a, b in zip(g[i], g[j])]
        elif n > 1:
            g[i], g[j] = g[j], [-a for a in g[i]]
    return g


def int_inverse(g):
    """Inverse of an integer matrix over the rationals (Gauss-Jordan on Fractions)."""
    n = len(g)
    M = [[Fraction(a) for a in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(g)]
    for c in range(n):
        p = next(i for i in range(c, n) if M[i][c])
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [a / piv for a in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return [row[n:] for row in M]


def sylvester_signature(G) -> tuple[int, int, int]:
    """Signature from the characteristic polynomial's sign pattern (Descartes, exact for symmetric matrices)."""
    n = len(G)
    # coefficients of det(tI - G) via Faddeev-LeVerrier
    A = [[Fraction(a) for a in r] for r in G]
    coeffs = [Fraction(1)]
    M = [[Fraction(0)] * n for _ in range(n)]
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        M = [[a + coeffs[-1] * b for a, b in zip(r1, r2)] for r1, r2 in zip(frac_mul(A, M), ident)] if k > 1 else ident
        AM = frac_mul(A, M)
        ck = -sum(AM[i][i] for i in range(n)) / k
        coeffs.append(ck)
    zero = 0
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
        zero += 1

    def changes(cs):
        signs = [c > 0 for c in cs if c]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    pos = changes(coeffs)
    neg = changes([c * (-1) ** (len(coeffs) - 1 - i) for i, c in enumerate(coeffs)])
    return pos, neg, zero


def box_isotropic(G, bound: int):
    """All nonzero integer vectors with entries bounded by ``bound`` and ``v^T G v = 0``."""
    n = len(G)
    out = []
    for v in itertools.product(range(-bound, bound + 1), repeat=n):
        if any(v) and sum(G[i][j] * v[i] * v[j] for i in range(n) for j in range(n)) == 0:
            out.append(v)
    return out


def weyl_dim(kind: str, hw) -> int:
    """Weyl dimension formula for so(2l+1) (``"B"``) or so(2l) (``"D"``), weight in ε-coordinates."""
    l = len(hw)
    hw = [Fraction(a) for a in hw]
    rho = [Fraction(2 * (l - i) - 1, 2) if kind == "B" else Fraction(l - 1 - i) for i in range(l)]
    roots = []
    if kind == "B":
        roots += [[int(i == j) for j in range(l)] for i in range(l)]
    for i in range(l):
        for j in range(i + 1, l):
            for s in (1, -1):
                r = [0] * l
                r[i], r[j] = 1, s
                roots.append(r)
    num = den = Fraction(1)
    for r in roots:
        num *= sum((a + b) * c for a, b, c in zip(hw, rho, r))
        den *= sum(b * c for b, c in zip(rho, r))
    return int(num / den)


def sym_dim(n: int, k: int) -> int:
    return comb(n + k - 1, k)


# Frozen values computed once from the oracles above (and by hand where noted);
# the tests compare the engine against these numbers.
FROZEN = {
    # comb(9 + 2 - 1, 2) - comb(9 + 0 - 1, 0): S^2 of a 9-dim space minus the trivial summand
    "contraction_kernel_dim_9_n2": 44,
    # comb(7 + 1, 2) - 1
    "contraction_kernel_dim_7_n2": 27,
    # weyl_dim("B", [3/2, 1/2, 1/2])
    "odd_index_B3_k2_submodule_dim": 48,
    # spinor weights: all sign patterns of (+-1/2, ..., +-1/2)
    "spinor_weight_count_l3": 8,
}
