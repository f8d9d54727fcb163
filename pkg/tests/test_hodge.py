import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from hodgetate.clifford import clifford
from hodgetate.errors import IndexMismatch, NotAnOrbit, NotNilpotent
from hodgetate.exact import I, Matrix, Subspace, image, kernel, rank, unit
from hodgetate.hodge import (
    HodgeFiltration,
    MixedHodge,
    NilpotentOrbitDatum,
    confirm_orbit,
    filtration_axioms_hold,
    hodge_form_inertia,
    is_semipure,
    k3_limit_mhs,
    ks_limit_mhs,
    ks_polarization,
    nilpotent_exp,
    orbit_polynomial,
    orbit_test,
    orbit_value,
    orthogonal_frame,
    pure_k3_structure,
    sample_quadric_point,
    unipotency_index,
    weight_filtration,
)
from hodgetate.lie import bivector, epsilon, root_vector, so_basis
from hodgetate.quadspace import HyperbolicBasis, degeneration_data, diagonal_preset, hyperbolic_preset, witt_basis
from oracles import frac_mul, gr_dims_from_ranks, int_inverse, jordan_gr_dims, jordan_matrix, random_unimodular


def degeneration(dim):
    return degeneration_data(diagonal_preset(dim))


def conj(v):
    return tuple(a.conjugate() for a in v)


def nonzero(dims):
    return {k: v for k, v in dims.items() if v}


def closed_formula(A, center, k):
    """``sum_{b >= 0} ker A^(k-c+1+b) ∩ im A^b``, straight from kernels and images."""
    n = A.nrows
    out = Subspace.zero(n)
    for b in range(n + 1):
        e = k - center + 1 + b
        if e <= 0:
            continue
        out = out + (kernel(A ** e) & image(A ** b))
    return out


# --------------------------------------------------------------------------
# nilpotent basics


def test_unipotency_index_examples():
    D = degeneration(6)
    assert unipotency_index(Matrix.zeros(3, 3)) == 1
    assert unipotency_index(D.N) == 3
    CA = clifford(orthogonal_frame(D.vh).diagonal)
    L = CA.left_matrix(CA.lift(orthogonal_frame(D.vh).element(D.N)))
    assert unipotency_index(L) == 2
    with pytest.raises(NotNilpotent):
        unipotency_index(Matrix.identity(2))


def test_nilpotent_exp():
    D = degeneration(6)
    n = D.vh.dim
    assert nilpotent_exp(D.N, 0) == Matrix.identity(n)
    z = mpq(3, 7)
    assert nilpotent_exp(D.N, z) @ nilpotent_exp(D.N, -z) == Matrix.identity(n)
    E = nilpotent_exp(D.N, 1)
    assert E.T @ D.vh.gram @ E == D.vh.gram
    t = mpq(5, 2)
    N = D.N.matrix
    expected = Matrix.identity(n) + N.scale(2 * I * t) + (N @ N).scale(-2 * t * t)
    assert nilpotent_exp(D.N, 2 * I * t) == expected


# --------------------------------------------------------------------------
# weight filtrations


def test_weight_filtration_zero_map():
    W = weight_filtration(Matrix.zeros(4, 4), 3)
    assert W.gr_dims() == {3: 4}
    assert W[2].dim == 0 and W[3].dim == 4


def test_weight_filtration_single_block():
    A = Matrix.from_rows(jordan_matrix([3]))
    W = weight_filtration(A, 2)
    assert [W.gr_dim(k) for k in range(5)] == [1, 0, 1, 0, 1]
    assert filtration_axioms_hold(A, W)


@pytest.mark.parametrize("dim", [5, 6, 7, 8])
def test_weight_filtration_of_degeneration(dim):
    D = degeneration(dim)
    W = weight_filtration(D.N, 2)
    assert [W.gr_dim(k) for k in range(5)] == [1, 0, dim - 3, 0, 1]
    assert nonzero(W.gr_dims()) == gr_dims_from_ranks(D.N.matrix.to_lists(), 2)
    assert filtration_axioms_hold(D.N, W)


partitions = st.lists(st.integers(1, 5), min_size=1, max_size=5).filter(lambda p: sum(p) <= 8)


@settings(max_examples=50, deadline=None, derandomize=True)
@given(partitions, st.integers(0, 10**6), st.integers(-3, 3))
def test_weight_filtration_properties(sizes, seed, center):
    n = sum(sizes)
    g = random_unimodular(n, random.Random(seed))
    J = jordan_matrix(sizes)
    A_rows = frac_mul(frac_mul(g, J), int_inverse(g))
    A = Matrix.from_rows(A_rows)
    W = weight_filtration(A, center)
    assert W.is_increasing()
    assert filtration_axioms_hold(A, W)
    dims = nonzero(W.gr_dims())
    assert dims == jordan_gr_dims(sizes, center) == gr_dims_from_ranks(A_rows, center)
    for k, v in dims.items():
        assert dims.get(2 * center - k) == v
    for k in range(W.low - 1, W.high + 1):
        assert W[k] == closed_formula(A, center, k)
    # equivariance: W(g A g^-1) = g W(A)
    G = Matrix.from_rows(g)
    B = Matrix.from_rows(frac_mul(frac_mul(g, A_rows), int_inverse(g)))
    WB = weight_filtration(B, center)
    moved = W.image_under(G)
    for k in range(W.low - 1, W.high + 1):
        assert WB[k] == moved[k]


def test_filtration_axioms_detect_wrong_filtration():
    A = Matrix.from_rows(jordan_matrix([3]))
    W = weight_filtration(A, 0)
    shifted = weight_filtration(Matrix.zeros(3, 3), 0)
    assert not filtration_axioms_hold(A, shifted)
    assert filtration_axioms_hold(A, W)


# --------------------------------------------------------------------------
# orbit test


@pytest.mark.parametrize("dim", [5, 6, 7])
def test_orbit_test_index3(dim):
    D = degeneration(dim)
    rng = random.Random(dim)
    seen = 0
    for _ in range(15):
        x = sample_quadric_point(D.vh, D.v0_h, rng)
        assert D.vh.q(x) == 0
        datum = NilpotentOrbitDatum(D.vh, D.N, x)
        res = orbit_test(datum)
        nx, nxb = D.N(x), D.N(conj(x))
        assert -D.vh.q(D.N(nx), conj(x)) == D.vh.q(nx, nxb)
        a, b, c = orbit_polynomial(datum)
        for t in (0, 1, mpq(7, 3)):
            assert orbit_value(datum, t) == a + b * t + c * t * t
        if res:
            seen += 1
            assert confirm_orbit(datum, res)
        else:
            assert all(orbit_value(datum, t) <= 0 for t in (10, 100, 1000))
    assert seen


def test_orbit_test_rejects_kernel_point():
    D = degeneration(6)
    res = orbit_test(NilpotentOrbitDatum(D.vh, D.N, D.v0_h))
    assert not res.accepted
    assert (res.a, res.b, res.c) == (0, 0, 0)


def test_index2_rejections_stay_nonpositive():
    D = degeneration(7)
    HB = witt_basis(D.vh)
    N2 = bivector(D.vh, HB.e(1), HB.e(2))
    assert unipotency_index(N2) == 2
    rng = random.Random(1)
    verdicts = set()
    for _ in range(40):
        datum = NilpotentOrbitDatum(D.vh, N2, sample_quadric_point(D.vh, D.v0_h, rng))
        res = orbit_test(datum)
        assert res.c == 0
        verdicts.add(res.accepted)
        if res:
            assert confirm_orbit(datum, res)
        else:
            assert all(orbit_value(datum, t) <= 0 for t in (10, 100, 1000))
    assert verdicts == {True, False}


def test_orbit_test_index_too_large():
    H = HyperbolicBasis.standard(hyperbolic_preset(5))
    X = root_vector(H, epsilon(1, 2) - epsilon(2, 2)) + root_vector(H, epsilon(2, 2))
    assert unipotency_index(X) == 5
    with pytest.raises(IndexMismatch):
        orbit_test(NilpotentOrbitDatum(H.space, X, H.e(1)))


# --------------------------------------------------------------------------
# limits on H^2


def _accepted(space, N, iso, seed, count=1):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        datum = NilpotentOrbitDatum(space, N, sample_quadric_point(space, iso, rng))
        res = orbit_test(datum)
        if res:
            out.append((datum, res))
    return out


@pytest.mark.parametrize("dim", [5, 6, 8])
def test_k3_limit_is_hodge_tate(dim):
    D = degeneration(dim)
    for datum, _ in _accepted(D.vh, D.N, D.v0_h, 3, 3):
        M = k3_limit_mhs(datum)
        assert M.is_mhs()
        assert M.hodge_numbers() == {(0, 0): 1, (1, 1): dim - 3, (2, 2): 1}
        assert M.is_hodge_tate()
        assert M.F[2].dim == 1 and M.F[1].dim == dim - 2
        assert is_semipure(M, 4)


def test_index2_limit_is_not_hodge_tate():
    D = degeneration(6)
    HB = witt_basis(D.vh)
    N2 = bivector(D.vh, HB.e(1), HB.e(2))
    (datum, _), = _accepted(D.vh, N2, D.v0_h, 0)
    M = k3_limit_mhs(datum)
    assert M.is_mhs()
    assert not M.is_hodge_tate()
    assert sum(M.hodge_numbers().values()) == D.vh.dim


def test_k3_limit_requires_orbit():
    D = degeneration(6)
    with pytest.raises(NotAnOrbit):
        k3_limit_mhs(NilpotentOrbitDatum(D.vh, D.N, D.v0_h))


def test_pure_structure_hodge_numbers():
    D = degeneration(7)
    (datum, res), = _accepted(D.vh, D.N, D.v0_h, 5)
    y = nilpotent_exp(D.N, I * (res.t0 + 1)) @ datum.x0
    assert D.vh.hermitian(y) > 0
    M = pure_k3_structure(D.vh, y)
    assert M.is_mhs()
    assert M.hodge_numbers() == {(2, 0): 1, (1, 1): 4, (0, 2): 1}
    assert not M.is_hodge_tate()
    assert is_semipure(M, 2)


def test_empty_structure_is_vacuously_hodge_tate():
    M = MixedHodge(weight_filtration(Matrix.zeros(0, 0), 2), HodgeFiltration(0, {0: Subspace.zero(0)}))
    assert M.is_mhs() and M.is_hodge_tate() and M.hodge_numbers() == {}


def test_mhs_detects_bad_hodge_filtration():
    D = degeneration(6)
    W = weight_filtration(D.N, 2)
    n = D.vh.dim
    real_line = Subspace.span([D.v0_h], n)
    F = HodgeFiltration(n, {0: Subspace.full(n), 1: Subspace.full(n), 2: real_line})
    assert not MixedHodge(W, F).is_mhs()


# --------------------------------------------------------------------------
# Clifford limit and polarization


@pytest.mark.parametrize("dim", [5, 6])
def test_ks_limit(dim):
    D = degeneration(dim)
    frame = orthogonal_frame(D.vh)
    Vd = frame.diagonal
    CA = clifford(Vd)
    N = frame.element(D.N)
    rng = random.Random(2)
    done = 0
    while done < 2:
        x = frame.vector(sample_quadric_point(D.vh, D.v0_h, rng))
        datum = NilpotentOrbitDatum(Vd, N, x)
        if not orbit_test(datum):
            continue
        M = ks_limit_mhs(CA, datum)
        assert M.F[0].dim == CA.size // 2 == 2 ** (dim - 2)
        assert M.is_mhs() and M.is_hodge_tate()
        assert M.W.gr_dim(-1) == 0
        assert M.W.gr_dims() == {-2: CA.size // 2, -1: 0, 0: CA.size // 2}
        done += 1


def test_orthogonal_frame_is_orthogonal():
    D = degeneration(7)
    frame = orthogonal_frame(D.vh)
    assert frame.T.T @ D.vh.gram @ frame.T == frame.diagonal.gram
    N = frame.element(D.N)
    assert N.is_orthogonal()
    assert rank(N.matrix) == 2


def test_polarization():
    D = degeneration(5)
    frame = orthogonal_frame(D.vh)
    Vd = frame.diagonal
    CA = clifford(Vd)
    pos = [i for i in range(Vd.dim) if Vd.gram[i, i] > 0]
    a1, a2 = unit(Vd.dim, pos[0]), unit(Vd.dim, pos[1])
    omega = ks_polarization(CA, a1, a2)
    for A in so_basis(Vd):
        assert omega.invariance_defect(A).is_zero()
    assert ks_polarization(CA, a2, a1).gram() == -omega.gram()
    assert rank(omega.gram()) == CA.size
    N = frame.element(D.N)
    (datum, res), = _accepted(Vd, N, frame.vector(D.v0_h), 4)
    y = nilpotent_exp(N, I * (res.t0 + 1)) @ datum.x0
    F0 = image(CA.left_matrix(CA.vector(y)))
    form, inertia = hodge_form_inertia(omega, F0)
    assert form in ("omega", "i*omega")
    assert sum(inertia) == F0.dim == CA.size // 2
