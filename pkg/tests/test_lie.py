import itertools
import random

import pytest
from gmpy2 import mpq

from hodgetate.errors import AmbientMismatch, PreconditionError
from hodgetate.exact import CScalar, I, Matrix, Subspace, unit, vadd
from hodgetate.lie import (
    WeightVector,
    bivector,
    bracket,
    cartan_basis,
    chevalley_generators,
    epsilon,
    fundamental_to_epsilon,
    mukai_extend,
    root_vector,
    roots_and_weights,
    simple_roots,
    so_basis,
    weight_of,
    weil_operator,
    xi1_of_highest_weight,
)
from hodgetate.quadspace import HyperbolicBasis, QuadSpace, diagonal_preset, hyperbolic_preset

HALF = mpq(1, 2)


def hb(dim):
    return HyperbolicBasis.standard(hyperbolic_preset(dim))


def neg(v):
    return tuple(-a for a in v)


@pytest.mark.parametrize("dim", [4, 5, 6, 7])
def test_sign_convention_anchor(dim):
    H = hb(dim)
    N = bivector(H.space, H.f(1), vadd(H.e(2), H.f(2)))
    assert N(H.e(1)) == neg(vadd(H.e(2), H.f(2)))
    assert N(N(H.e(1))) == tuple(-2 * a for a in H.f(1))


def test_bivector_alternating_and_orthogonal():
    V = diagonal_preset(5)
    a, b = (1, 2, 0, 1, 0), (0, 1, 1, 0, 3)
    assert bivector(V, a, a).is_zero()
    assert bivector(V, a, b) == -bivector(V, b, a)
    assert bivector(V, a, b).is_orthogonal()
    with pytest.raises(AmbientMismatch):
        bivector(V, (1, 0), (0, 1))


def test_bracket_examples():
    H = hb(5)
    A = bivector(H.space, H.e(1), H.e(2))
    assert bracket(A, A).is_zero()
    xi1 = cartan_basis(H)[0]
    assert bracket(xi1, A) == A


def _random_element(V, rng):
    acc = None
    for el in so_basis(V):
        c = rng.randint(-3, 3)
        if c:
            acc = el.scale(c) if acc is None else acc + el.scale(c)
    return acc if acc is not None else so_basis(V)[0]


def test_jacobi_on_random_triples():
    rng = random.Random(7)
    for _ in range(20):
        V = diagonal_preset(rng.randint(3, 6))
        A, B, C = (_random_element(V, rng) for _ in range(3))
        total = bracket(A, bracket(B, C)) + bracket(B, bracket(C, A)) + bracket(C, bracket(A, B))
        assert total.is_zero()
        assert bracket(A, B) == -bracket(B, A)


def test_bivector_brackets_match_commutators():
    """[a∧b, c∧d] = q(b,c) a∧d - q(a,c) b∧d - q(b,d) a∧c + q(a,d) b∧c on all basis pairs."""
    V = hyperbolic_preset(5)
    q = V.q
    n = V.dim
    E = [unit(n, i) for i in range(n)]
    pairs = list(itertools.combinations(range(n), 2))
    for (i, j), (k, l) in itertools.product(pairs, repeat=2):
        a, b, c, d = E[i], E[j], E[k], E[l]
        lhs = bracket(bivector(V, a, b), bivector(V, c, d))
        rhs = (bivector(V, a, d).scale(q(b, c)) - bivector(V, b, d).scale(q(a, c))
               - bivector(V, a, c).scale(q(b, d)) + bivector(V, b, c).scale(q(a, d)))
        assert lhs == rhs


def test_cartan_basis():
    H = hb(7)
    xi = cartan_basis(H)
    assert xi[0](H.e(1)) == H.e(1)
    assert xi[0](H.f(1)) == neg(H.f(1))
    assert not any(xi[0](H.e(2)))
    for A, B in itertools.combinations(xi, 2):
        assert bracket(A, B).is_zero()


def test_roots_and_weights_lists():
    roots, weights = roots_and_weights("B", 1, extended=True)
    assert weights[-1] == WeightVector((HALF, HALF), 0)
    for l in (2, 3, 4):
        roots, _ = roots_and_weights("D", l, extended=True)
        assert len(roots) == 2 * (l + 1) * l // 2
        roots, weights = roots_and_weights("B", l, extended=True)
        assert len(roots) == (l + 1) ** 2
        for i in range(l):
            assert weights[i] == sum((epsilon(j, l + 1, 0) for j in range(1, i + 1)), epsilon(0, l + 1, 0))
    _, weights = roots_and_weights("D", 3)
    assert weights[1] == WeightVector((HALF, HALF, -HALF))
    with pytest.raises(PreconditionError):
        roots_and_weights("D", 1)


@pytest.mark.parametrize("dim", [5, 6, 7, 8])
def test_root_vectors_are_eigenvectors(dim):
    H = hb(dim)
    xi = cartan_basis(H)
    roots, _ = roots_and_weights(H.kind, H.rank)
    for alpha in roots + [-a for a in roots]:
        X = root_vector(H, alpha)
        assert X.is_orthogonal()
        for i, x in enumerate(xi, start=1):
            assert bracket(x, X) == X.scale(alpha[i])


def test_root_vector_examples():
    H = hb(7)
    a = epsilon(1, 3) - epsilon(2, 3)
    assert root_vector(H, a) == bivector(H.space, H.e(1), H.f(2))
    assert root_vector(H, epsilon(1, 3) + epsilon(2, 3)) == bivector(H.space, H.e(1), H.e(2))
    assert root_vector(H, epsilon(1, 3)) == bivector(H.space, H.e(1), H.last)
    with pytest.raises(PreconditionError):
        root_vector(H, epsilon(1, 3) * 2)


def test_chevalley_generators_generate_so():
    H = hb(6)
    gens = chevalley_generators(H)
    span = {g.matrix for g in gens}
    frontier = list(gens)
    flat = lambda A: [a for r in A.matrix.rows for a in r]  # noqa: E731
    S = Subspace.span([flat(g) for g in gens], 36)
    while frontier:
        new = []
        for A in frontier:
            for g in gens:
                B = bracket(g, A)
                v = flat(B)
                if not S.contains(v):
                    S = S + Subspace.span([v], 36)
                    new.append(B)
        frontier = new
    assert S.dim == len(so_basis(H.space)) == 15
    assert len(span) == len(gens)


def test_weight_of():
    H = hb(5)
    assert weight_of(H, H.e(1)) == epsilon(1, 2)
    assert weight_of(H, H.f(1)) == -epsilon(1, 2)
    assert weight_of(H, vadd(H.e(1), H.e(2))) is None


def test_mukai_extension():
    V = diagonal_preset(5)
    M = mukai_extend(V)
    assert M.space.dim == 7
    assert M.space.q(M.e0, M.e4) == 1 and M.space.q(M.e0) == 0 and M.space.q(M.e4) == 0
    assert M.Xi(M.e4) == M.e4 and M.Xi(M.e0) == neg(M.e0)
    for A in so_basis(V):
        E = M.embed_element(A)
        assert E.is_orthogonal()
        assert bracket(M.Xi, E).is_zero()
    u = M.embed_vector((1, 2, 3, 4, 5))
    assert not any(M.Xi(u))
    eigen = sorted(M.Xi.matrix[i, i] for i in range(7))
    assert eigen == [-1, 0, 0, 0, 0, 0, 1]


def test_extended_basis_xi0_is_grading_operator():
    M = mukai_extend(hyperbolic_preset(5))
    EH = M.extended_basis(hb(5))
    assert cartan_basis(EH)[0] == M.Xi
    assert not EH.validate()


def test_weil_operator():
    V = diagonal_preset(5)
    x = (1, I, 0, 0, 0)
    W = weil_operator(V, x)
    assert W(x) == tuple(2 * I * a for a in x)
    assert W((1, -I, 0, 0, 0)) == tuple(-2 * I * a for a in (1, -I, 0, 0, 0))
    assert not any(W((0, 0, 1, 0, 0)))
    M = W.matrix
    assert M @ M @ M == M.scale(-4)
    assert all(not isinstance(a, CScalar) for r in M.rows for a in r)
    fixing = bivector(V, unit(5, 2), unit(5, 3))
    assert bracket(W, fixing).is_zero()
    with pytest.raises(PreconditionError):
        weil_operator(V, (1, 0, 0, 0, 0))


def test_xi1_of_highest_weight():
    assert xi1_of_highest_weight([0, 1], "B") == HALF
    assert xi1_of_highest_weight([2, 0, 1], "B") == 2 + HALF
    assert xi1_of_highest_weight([0, 0, 0], "D") == 0
    assert xi1_of_highest_weight([0, 1, 1], "D") == 1
    with pytest.raises(PreconditionError):
        xi1_of_highest_weight([-1, 1], "B")


def test_fundamental_to_epsilon_matches_simple_root_duality():
    """<w_i, a_j^vee> = delta_ij with coroots 2a/(a,a)."""
    for kind, l in [("B", 2), ("B", 3), ("D", 3), ("D", 4)]:
        simple = simple_roots(kind, l)
        for i in range(l):
            a = [0] * l
            a[i] = 1
            w = fundamental_to_epsilon(a, kind)
            for j, alpha in enumerate(simple):
                ip = sum(x * y for x, y in zip(w.coords, alpha.coords))
                norm = sum(y * y for y in alpha.coords)
                assert 2 * ip / norm == (1 if i == j else 0)


def test_so_basis_dimension():
    assert len(so_basis(QuadSpace(Matrix.diag([1, 1, -1, 2])))) == 6
