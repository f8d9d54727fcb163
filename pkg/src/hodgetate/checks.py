"""Named verification checks producing JSON-ready reports.

Each check builds its data exactly, asserts a list of identities and records a
witness payload from which :mod:`hodgetate.recheck` can re-verify the verdict.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import asdict, dataclass, field

from gmpy2 import mpq

from . import errors
from .clifford import CLIFFORD_CAP, clifford
from .exact import ZERO, I, Matrix, fmt, fmt_matrix, fmt_vec, image, rank, unit, vadd
from .hodge import (
    NilpotentOrbitDatum,
    confirm_orbit,
    hodge_form_inertia,
    hodge_table,
    k3_limit_mhs,
    ks_limit_mhs,
    ks_polarization,
    nilpotent_exp,
    orbit_test,
    orthogonal_frame,
    sample_quadric_point,
    unipotency_index,
    weight_filtration,
)
from .lie import (
    WeightVector,
    bivector,
    cartan_basis,
    chevalley_generators,
    eigenvalue,
    epsilon,
    fundamental_to_epsilon,
    mukai_extend,
    root_vector,
    roots_and_weights,
    so_basis,
    xi1_of_highest_weight,
)
from .quadspace import (
    DEFAULT_HEIGHT_BOUND,
    HyperbolicBasis,
    QuadSpace,
    degeneration_data,
    diagonal_preset,
    hyperbolic_preset,
    image_gram,
    load_gram,
    validate_degeneration,
    witt_basis,
)
from .reps import (
    apply_power,
    highest_weight_vectors,
    monomial,
    nilpotency_on,
    spinor_module,
    spinor_top,
    spinor_wedge,
    standard_rep,
    submodule_generated,
    sym_power,
    tensor,
    tensor_vector,
)

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class CheckReport:
    check: str
    params: dict
    verdict: str
    witness: dict = field(default_factory=dict)
    elapsed_ms: float = 0

    def to_dict(self) -> dict:
        return asdict(self)


class _Assertions:
    """Collects named assertions; the check passes iff none failed."""

    def __init__(self):
        self.failed: list[str] = []
        self.count = 0

    def __call__(self, name: str, ok: bool):
        self.count += 1
        if not ok:
            self.failed.append(name)
        return ok


def _run(name: str, params: dict, body, timing: bool = True) -> CheckReport:
    start = time.perf_counter()
    witness: dict = {}
    check = _Assertions()
    try:
        body(witness, check)
        verdict = FAIL if check.failed else PASS
        witness["assertions"] = check.count
        if check.failed:
            witness["failed"] = check.failed
    except errors.NotFoundWithinBound as exc:
        verdict = SKIPPED
        witness = {"reason": "bound", "detail": str(exc)}
    except errors.CapExceeded as exc:
        verdict = SKIPPED
        witness = {"reason": "cap", "detail": str(exc)}
    except (errors.SignatureMismatch, errors.PreconditionError) as exc:
        verdict = SKIPPED
        witness = {"reason": "precondition", "detail": str(exc)}
    except errors.EngineError as exc:
        verdict = FAIL
        witness = {"reason": "error", "detail": f"{type(exc).__name__}: {exc}"}
    elapsed = round((time.perf_counter() - start) * 1000, 3) if timing else 0
    return CheckReport(name, params, verdict, witness, elapsed)


def _space(dim: int, gram: str | None) -> QuadSpace:
    if gram:
        return load_gram(gram)
    if dim < 5:
        raise errors.SignatureMismatch(f"need dim >= 5, got {dim}")
    return diagonal_preset(dim)


def _sparse(M: Matrix) -> list:
    return [[i, j, fmt(a)] for i, row in enumerate(M.nonzero()) for j, a in row]


def _hb_params(l: int, kind: str) -> HyperbolicBasis:
    if kind not in ("B", "D"):
        raise errors.PreconditionError(f"type must be B or D, got {kind!r}")
    if l < 2:
        raise errors.PreconditionError("need l >= 2")
    V = hyperbolic_preset(2 * l + 1 if kind == "B" else 2 * l)
    return HyperbolicBasis.standard(V)


def module_weight(R, HB: HyperbolicBasis, v) -> WeightVector | None:
    """Simultaneous eigenvalues of the Cartan elements acting on ``v`` in ``R``."""
    out = []
    for xi in cartan_basis(HB):
        lam = eigenvalue(R.act(xi), v)
        if lam is None:
            return None
        out.append(lam)
    return WeightVector(tuple(out), HB.first_index)


def standard_nilpotent(HB: HyperbolicBasis):
    """``N = e_1' ∧ (e_2 + e_2')``."""
    return bivector(HB.space, HB.f(1), vadd(HB.e(2), HB.f(2)))


# --------------------------------------------------------------------------
# lemma-n


def check_lemma_n(dim: int = 5, bound: int = DEFAULT_HEIGHT_BOUND, gram: str | None = None,
                  timing: bool = True) -> CheckReport:
    params = {"dim": dim, "bound": bound, "gram": gram or "diagonal"}

    def body(w, check):
        Q_ = _space(dim, gram)
        params["dim"] = Q_.dim
        D = degeneration_data(Q_, bound)
        bad = validate_degeneration(D)
        for name in ("q(h) > 0", "q(v0) = 0", "q(v1) = 1", "q(v2) = -1", "N^3 = 0", "N^2 != 0",
                     "rank N = 2", "rank N^2 = 1", "N in so(V^h)", "Gram on Im N = [[0,0],[0,+]]"):
            check(name, name not in bad)
        check("all datum invariants", not bad)
        w.update({
            "gram": fmt_matrix(Q_.gram),
            "h": fmt_vec(D.h), "v0": fmt_vec(D.v0), "v1": fmt_vec(D.v1), "v2": fmt_vec(D.v2), "v3": fmt_vec(D.v3),
            "vh_basis": [fmt_vec(b) for b in D.embedding.subspace.basis],
            "N": fmt_matrix(D.N.matrix),
            "image_gram": [[fmt(a) for a in r] for r in image_gram(D)],
            "index": unipotency_index(D.N),
            "rank_N": rank(D.N.matrix), "rank_N2": rank(D.N.matrix @ D.N.matrix),
        })

    return _run("lemma-n", params, body, timing)


# --------------------------------------------------------------------------
# h2-limit


def _sample_report(datum, result, mhs) -> dict:
    rec = {
        "x0": fmt_vec(datum.x0),
        "accepted": result.accepted,
        "coefficients": [fmt(result.a), fmt(result.b), fmt(result.c)],
    }
    if result.accepted:
        rec["t0"] = fmt(result.t0)
    if mhs is not None:
        rec["gr_dims"] = {str(k): v for k, v in mhs.W.gr_dims().items()}
        rec["hodge_numbers"] = hodge_table(mhs.hodge_numbers())
        rec["is_mhs"] = mhs.is_mhs()
        rec["hodge_tate"] = mhs.is_hodge_tate()
    return rec


def _orbit_samples(space, N, isotropic, rng, samples, check, label, expect_ht: bool | None):
    out = []
    for _ in range(samples):
        x = sample_quadric_point(space, isotropic, rng)
        datum = NilpotentOrbitDatum(space, N, x)
        res = orbit_test(datum)
        mhs = None
        if res:
            check(f"{label}: sampled t > t0 confirms orbit", confirm_orbit(datum, res))
            if res.index == 3:
                nx, nxb = N(x), N(tuple(a.conjugate() for a in x))
                n2x = N(nx)
                check(f"{label}: -q(N^2 x, conj x) = q(N x, N conj x)",
                      -space.q(n2x, tuple(a.conjugate() for a in x)) == space.q(nx, nxb))
            mhs = k3_limit_mhs(datum, check_orbit=False)
            check(f"{label}: limit is a mixed Hodge structure", mhs.is_mhs())
            if expect_ht is True:
                check(f"{label}: limit is Hodge-Tate", mhs.is_hodge_tate())
        out.append(_sample_report(datum, res, mhs))
    return out


def check_h2_limit(dim: int = 5, bound: int = DEFAULT_HEIGHT_BOUND, samples: int = 20, seed: int = 0,
                   gram: str | None = None, timing: bool = True) -> CheckReport:
    params = {"dim": dim, "bound": bound, "samples": samples, "seed": seed, "gram": gram or "diagonal"}

    def body(w, check):
        Q_ = _space(dim, gram)
        params["dim"] = Q_.dim
        D = degeneration_data(Q_, bound)
        rng = random.Random(seed)
        W = weight_filtration(D.N, 2)
        d = Q_.dim
        check("gr dims (1,0,d-3,0,1)", [W.gr_dim(k) for k in range(5)] == [1, 0, d - 3, 0, 1])
        recs = _orbit_samples(D.vh, D.N, D.v0_h, rng, samples, check, "index 3", True)
        check("some sample is an orbit", any(r["accepted"] for r in recs))
        neg = orbit_test(NilpotentOrbitDatum(D.vh, D.N, D.v0_h))
        check("x0 in ker N is rejected", not neg.accepted)
        w.update({
            "gram_h": fmt_matrix(D.vh.gram),
            "N": fmt_matrix(D.N.matrix),
            "index": unipotency_index(D.N),
            "samples": recs,
            "negative": {"x0": fmt_vec(D.v0_h), "accepted": neg.accepted},
        })
        HB = witt_basis(D.vh, bound)
        if HB.rank >= 2:
            N2 = bivector(D.vh, HB.e(1), HB.e(2))
            ctrl = _orbit_samples(D.vh, N2, D.v0_h, rng, samples, check, "index 2", None)
            accepted = [r for r in ctrl if r["accepted"]]
            check("index-2 control has an accepted sample", bool(accepted))
            check("index-2 control yields a non-Hodge-Tate limit", any(not r["hodge_tate"] for r in accepted))
            w["control"] = {"N": fmt_matrix(N2.matrix), "index": unipotency_index(N2), "samples": ctrl}
        else:
            w["control"] = {"status": "skipped", "reason": "no rational isotropic plane in V^h"}

    return _run("h2-limit", params, body, timing)


# --------------------------------------------------------------------------
# index checks


def check_odd_index(l: int = 2, kind: str = "B", k: int = 1, timing: bool = True) -> CheckReport:
    params = {"l": l, "type": kind, "k": k}

    def body(w, check):
        if k < 1:
            raise errors.PreconditionError("need k >= 1")
        HB = _hb_params(l, kind)
        V = HB.space
        N = standard_nilpotent(HB)
        S = spinor_module(HB)
        P = sym_power(standard_rep(V), k - 1)
        R = tensor(P, S)
        v = tensor_vector(monomial(P, [0] * (k - 1)), spinor_top(S))
        sub = submodule_generated(R, v, chevalley_generators(HB))
        idx = nilpotency_on(sub, N)
        full = nilpotency_on(R, N)
        check("index on generated submodule = 2k", idx == 2 * k)
        check("N^(2k-1) v != 0", any(apply_power(R, N, v, 2 * k - 1)))
        check("N^(2k) = 0 on the full tensor module", full is not None and full <= 2 * k)
        hw = highest_weight_vectors(sub, HB)
        # (k-1) times the vector weight eps_1 plus the spinor weight; eps_1 = w1 except for D_2
        expected = epsilon(1, l) * (k - 1) + fundamental_to_epsilon([0] * (l - 1) + [1], kind)
        check("unique highest weight line", len(hw) == 1)
        check("highest weight (k-1)eps1 + wl", bool(hw) and hw[0][1] == expected)
        w.update({
            "module_dim": R.dim, "submodule_dim": sub.dim, "index": idx, "full_index": full,
            "highest_weights": [hwt.to_json() for _, hwt in hw],
            "expected_weight": expected.to_json(),
            "rho_N_sub": {"dim": sub.dim, "entries": _sparse(sub.act(N))},
            "rho_N_full": {"dim": R.dim, "entries": _sparse(R.act(N))},
        })

    return _run("odd-index", params, body, timing)


def check_even_index(l: int = 2, kind: str = "B", k: int = 1, timing: bool = True) -> CheckReport:
    params = {"l": l, "type": kind, "k": k}

    def body(w, check):
        if k < 0:
            raise errors.PreconditionError("need k >= 0")
        HB = _hb_params(l, kind)
        V = HB.space
        N = standard_nilpotent(HB)
        P = sym_power(standard_rep(V), k)
        v = monomial(P, [0] * k)
        sub = submodule_generated(P, v, chevalley_generators(HB))
        idx = nilpotency_on(sub, N)
        check("index on generated submodule = 2k+1", idx == 2 * k + 1)
        check("N^(2k) e1^k != 0", any(apply_power(P, N, v, 2 * k)))
        w.update({
            "module_dim": P.dim, "submodule_dim": sub.dim, "index": idx,
            "rho_N_sub": {"dim": sub.dim, "entries": _sparse(sub.act(N))},
        })

    return _run("even-index", params, body, timing)


# --------------------------------------------------------------------------
# spinor-lemmas


def _xi1_enumeration(l: int, kind: str, bound: int = 3) -> list[list[int]]:
    half = mpq(1, 2)
    return [list(a) for a in itertools.product(range(bound + 1), repeat=l)
            if xi1_of_highest_weight(a, kind) == half]


def check_spinor_lemmas(l: int = 2, kind: str = "B", n: int = 3, timing: bool = True) -> CheckReport:
    params = {"l": l, "type": kind, "n": n}

    def body(w, check):
        if n < 2:
            raise errors.PreconditionError("need n >= 2")
        HB = _hb_params(l, kind)
        V = HB.space
        spin_weight = [0] * (l - 1) + [1]
        check("xi1(wl) = 1/2", xi1_of_highest_weight(spin_weight, kind) == mpq(1, 2))
        sols = _xi1_enumeration(l, kind)
        if kind == "B":
            allowed = [spin_weight]
        else:
            allowed = [[0] * (l - 2) + [1, 0], spin_weight]
        check("only (semi-)spinor weights have xi1 = 1/2", sorted(sols) == sorted(allowed))
        w["xi1_solutions"] = sols

        # spinor facts on V
        N = standard_nilpotent(HB)
        S = spinor_module(HB)
        u = spinor_top(S)
        Nu = S.act(N) @ u
        target = spinor_wedge(S, range(3, l + 1))
        j = next(i for i, a in enumerate(target) if a)
        scalar = Nu[j]
        check("rho(N) u is a nonzero multiple of e3^...^el", bool(scalar) and Nu == tuple(scalar * a for a in target))
        check("rho(N)^2 = 0 on the spinor module", (S.act(N) @ S.act(N)).is_zero())
        CA = clifford(V)
        L = CA.lift(N)
        check("lift(N)^2 = 0 in the Clifford algebra", not any(CA.mul(L, L)))
        hw = highest_weight_vectors(S, HB)
        hw_expected = [fundamental_to_epsilon(a, kind) for a in allowed]
        check("spinor highest weights are the (semi-)spinor weights",
              sorted(str(x) for _, x in hw) == sorted(str(x) for x in hw_expected))
        xi1 = module_weight(S, HB, u)[1]
        w.update({
            "rho_N_u_scalar": fmt(scalar),
            "rho_N_u_label": S.labels[j],
            "xi1_on_u": fmt(xi1),
            "weil_on_u": [fmt(ZERO), fmt(-2 * xi1)],
            "normalization": "weil = -2i * xi1, reported as [re, im]",
        })

        # Mukai extension: S^{n-2} Ṽ ⊗ Spin(Ṽ) and the weight string
        M = mukai_extend(V)
        EH = M.extended_basis(HB)
        St = spinor_module(EH)
        Pt = sym_power(standard_rep(M.space), n - 2)
        R = tensor(Pt, St)
        top = M.space.dim - 1
        v = tensor_vector(monomial(Pt, [top] * (n - 2)), spinor_top(St))
        mu = fundamental_to_epsilon([n - 2] + [0] * (l - 1) + [1], kind, extended=True)
        wt = module_weight(R, EH, v)
        check("hw vector has weight (n-2)w0 + wl", wt == mu)
        check("xi0 on hw vector = (n-2) + 1/2", wt is not None and wt[0] == n - 2 + mpq(1, 2))
        raising = [R.act(root_vector(EH, a)) for a in roots_and_weights(kind, l, True)[0]]
        check("hw vector killed by positive roots", all(not any(X @ v) for X in raising))
        alpha = epsilon(0, l + 1, 0) - epsilon(1, l + 1, 0)
        f = root_vector(EH, -alpha)
        string = []
        cur = v
        ok = True
        for i in range(n - 1):
            cw = module_weight(R, EH, cur)
            present = any(cur) and cw == mu - alpha * i
            ok = ok and present
            string.append({"i": i, "weight": (mu - alpha * i).to_json(), "present": present})
            cur = R.act(f) @ cur
        check("weight string mu - i*alpha present for i = 0..n-2", ok)
        w.update({
            "mu": mu.to_json(), "alpha": alpha.to_json(), "xi0_on_hw": fmt(wt[0]) if wt else None,
            "weight_string": string, "module_dim": R.dim,
        })

    return _run("spinor-lemmas", params, body, timing)


# --------------------------------------------------------------------------
# ks-limit


def check_ks_limit(dim: int = 5, bound: int = DEFAULT_HEIGHT_BOUND, samples: int = 20, seed: int = 0,
                   gram: str | None = None, timing: bool = True) -> CheckReport:
    params = {"dim": dim, "bound": bound, "samples": samples, "seed": seed, "gram": gram or "diagonal"}

    def body(w, check):
        Q_ = _space(dim, gram)
        params["dim"] = Q_.dim
        if Q_.dim - 1 > CLIFFORD_CAP:
            raise errors.CapExceeded("Clifford algebra ambient dimension", Q_.dim - 1, CLIFFORD_CAP)
        D = degeneration_data(Q_, bound)
        frame = orthogonal_frame(D.vh)
        Vd = frame.diagonal
        CA = clifford(Vd)
        N = frame.element(D.N)
        v0 = frame.vector(D.v0_h)
        rng = random.Random(seed)
        half = CA.size // 2
        L = CA.left_matrix(CA.lift(N))
        check("lift(N)^2 = 0", (L @ L).is_zero())
        check("rank lift(N) = dim Cl / 2", rank(L) == half)
        recs = []
        first = None
        for _ in range(samples):
            x = frame.vector(sample_quadric_point(D.vh, D.v0_h, rng))
            datum = NilpotentOrbitDatum(Vd, N, x)
            res = orbit_test(datum)
            rec = {"x0": fmt_vec(x), "accepted": res.accepted}
            if res:
                rec["t0"] = fmt(res.t0)
                mhs = ks_limit_mhs(CA, datum, check_orbit=False)
                check("dim F^0 = dim Cl / 2", mhs.F[0].dim == half)
                check("KS limit is a mixed Hodge structure", mhs.is_mhs())
                check("KS limit is Hodge-Tate", mhs.is_hodge_tate())
                check("gr_-1 = 0", mhs.W.gr_dim(-1) == 0)
                rec.update({
                    "F0_dim": mhs.F[0].dim,
                    "gr_dims": {str(k): v for k, v in mhs.W.gr_dims().items()},
                    "hodge_numbers": hodge_table(mhs.hodge_numbers()),
                })
                if first is None:
                    first = (datum, res)
            recs.append(rec)
        check("some sample is an orbit", first is not None)

        pos = [i for i in range(Vd.dim) if Vd.gram[i, i] > 0]
        a1, a2 = unit(Vd.dim, pos[0]), unit(Vd.dim, pos[1])
        omega = ks_polarization(CA, a1, a2)
        elements = so_basis(Vd) if Vd.dim <= 6 else [N]
        check("omega invariant under lift(so)", all(omega.invariance_defect(A).is_zero() for A in elements))
        swapped = ks_polarization(CA, a2, a1)
        check("swapping a1, a2 negates omega", swapped.gram() == -omega.gram())
        sign = None
        if first is not None:
            datum, res = first
            t = res.t0 + 1
            xt = nilpotent_exp(N, I * t) @ datum.x0
            F0t = image(CA.left_matrix(CA.vector(xt)))
            form, inertia = hodge_form_inertia(omega, F0t)
            sign = {"t": fmt(t), "form": form, "inertia": list(inertia)}
        w.update({
            "diag": [fmt(Vd.gram[i, i]) for i in range(Vd.dim)],
            "N": fmt_matrix(N.matrix),
            "v0": fmt_vec(v0),
            "a1": fmt_vec(a1), "a2": fmt_vec(a2),
            "clifford_dim": CA.size,
            "invariance_elements": len(elements),
            "samples": recs,
            "polarization_sign": sign,
        })

    return _run("ks-limit", params, body, timing)


CHECKS = {
    "lemma-n": check_lemma_n,
    "h2-limit": check_h2_limit,
    "odd-index": check_odd_index,
    "even-index": check_even_index,
    "spinor-lemmas": check_spinor_lemmas,
    "ks-limit": check_ks_limit,
}

DEFAULT_GRID = {
    "dims": [5, 6, 7, 8],
    "ks_dims": [5, 6, 7, 8],
    "l": [2, 3],
    "k": [1, 2],
    "n": [2, 3],
    "types": ["B", "D"],
    "samples": 20,
    "ks_samples": 20,
    "seed": 0,
    "bound": DEFAULT_HEIGHT_BOUND,
}

OUT_OF_SCOPE = [
    "The power k with the local monodromy to the k equal to exp(kN), and the finite-index bound on the "
    "monodromy group, are not effective; no check estimates them.",
    "Existence of projective degenerations of hyperkahler manifolds is not reproducible by computation; "
    "the algebraic nilpotent-orbit stand-ins are verified instead.",
    "The embedding of the full cohomology as an so(Ṽ)-module is not constructed.",
    "Semi-purity is exposed as a predicate only; no central-fibre data exists here.",
]


def full_report(config: dict | None = None, timing: bool = True) -> dict:
    """Run every check over the parameter grid; reports sorted by check name then parameters."""
    cfg = dict(DEFAULT_GRID)
    if config:
        unknown = set(config) - set(DEFAULT_GRID) - {"gram"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(config)
    gram = cfg.get("gram")
    if gram and not (config and ("dims" in config or "ks_dims" in config)):
        cfg["dims"] = cfg["ks_dims"] = [load_gram(gram).dim]
    seed, bound = cfg["seed"], cfg["bound"]
    reports = []
    for d in cfg["dims"]:
        reports.append(check_lemma_n(d, bound, gram, timing))
        reports.append(check_h2_limit(d, bound, cfg["samples"], seed, gram, timing))
    for d in cfg["ks_dims"]:
        reports.append(check_ks_limit(d, bound, cfg["ks_samples"], seed, gram, timing))
    for l in cfg["l"]:
        for kind in cfg["types"]:
            for k in cfg["k"]:
                reports.append(check_odd_index(l, kind, k, timing))
                reports.append(check_even_index(l, kind, k, timing))
            for n in cfg["n"]:
                reports.append(check_spinor_lemmas(l, kind, n, timing))
    reports.sort(key=lambda r: (r.check, sorted((k, str(v)) for k, v in r.params.items())))
    counts = {PASS: 0, FAIL: 0, SKIPPED: 0}
    for r in reports:
        counts[r.verdict] += 1
    return {
        "preamble": {"config": cfg, "out_of_scope": OUT_OF_SCOPE},
        "summary": counts,
        "reports": [r.to_dict() for r in reports],
    }
