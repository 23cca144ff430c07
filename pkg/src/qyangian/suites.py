"""Suite runners: each returns a FindingsReport for one area of the verification."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Callable, Dict, List, Sequence

from . import linalg
from .currents import audit_theorem2, build_tower, serre_audit
from .findings import INFO, Finding, FindingsReport, check
from .formdual import (
    casimirs,
    casimirs_from,
    current_basis,
    current_dual_basis,
    dual_basis,
    form,
    gram_rank,
    positive_roots,
    residue_pairing,
    root_pairing,
    root_vectors,
    tbar0,
    tbar0_summands,
)
from .gradedtensor import SuperTensor, apply_sigma, left, right, superflip, tensor_commutator
from .supermodel import (
    EigenspaceViolation,
    GradedMatrix,
    ModelConfig,
    audit_level0,
    build_generators,
    center_project,
    equal_mod_center,
    gen_h,
    matrix_units,
    named_basis,
    sigma_apply,
    sigma_eigenvalue,
    supercommutator,
    supertrace,
)

SUITE_ORDER = ("model", "pairing", "tensor", "rmatrix", "cocycle", "currents", "hopf")


def _rng(n: int, salt: int) -> random.Random:
    # fixed seed per (n, purpose): reports stay byte-identical across runs
    return random.Random(1009 * n + salt)


def _homogeneous_sample(rng: random.Random, basis: Sequence[GradedMatrix], parity: int) -> GradedMatrix:
    pool = [m for m in basis if m.parity() == parity]
    out = GradedMatrix.zero(basis[0].n)
    for m in rng.sample(pool, min(3, len(pool))):
        out = out + m.scale(rng.choice((-3, -2, -1, 1, 2, 3)))
    return out


def _full_basis(n: int) -> List[GradedMatrix]:
    return [m for _, m in named_basis(n)] + [m for _, m in named_basis(n, dual=True)]


def jacobi_residual(a: GradedMatrix, b: GradedMatrix, c: GradedMatrix, koszul: bool = True) -> GradedMatrix:
    """[a,[b,c]] − [[a,b],c] − (−1)^{|a||b|}[b,[a,c]]."""
    sign = -1 if koszul and a.parity() and b.parity() else 1
    br = supercommutator
    return br(a, br(b, c)) - br(br(a, b), c) - br(b, br(a, c)).scale(sign)


def model_suite(n: int, controls: bool = False, triples: int = 100) -> FindingsReport:
    cfg = ModelConfig(n)
    rep = FindingsReport()
    S = "model"
    units = matrix_units(n)
    rep.add(check(S, "sigma.involution", "σ² = id", all(sigma_apply(sigma_apply(m)) == m for m in units)))
    rep.add(check(S, "sigma.automorphism", "σ([A,B]) = [σ(A), σ(B)]",
                  all(sigma_apply(supercommutator(a, b)) == supercommutator(sigma_apply(a), sigma_apply(b))
                      for a, b in itertools.product(units, repeat=2) if (a.parity(), b.parity()) != (None, None))))
    rep.add(check(S, "supertrace.commutators", "str([A,B]) = 0",
                  all(supertrace(supercommutator(a, b)) == 0 for a, b in itertools.product(units, repeat=2))))
    try:
        build_generators(cfg)
        rep.add(check(S, "generators.valid", "every generator lies in its σ-eigenspace with its parity", True))
    except EigenspaceViolation as exc:
        rep.add(check(S, "generators.valid", "every generator lies in its σ-eigenspace with its parity", False, str(exc)))
    g0 = [m for _, m in named_basis(n)]
    g1 = [m for _, m in named_basis(n, dual=True)]
    dim = 2 * n * n - 1
    for nm, basis, eig in (("g0", g0, 1), ("g1", g1, -1)):
        _, rows = linalg.vectorize([center_project(m).entries for m in basis])
        r = linalg.rank(rows)
        members = all(sigma_eigenvalue(m) == eig and supertrace(m) == 0 for m in basis)
        rep.add(check(S, f"dimension.{nm}", "dim g⁰ = dim g¹ = 2n²−1", r == dim and members,
                      {"rank": r, "expected": dim, "members": members}))
    bad = []
    for (i, a), (j, b) in itertools.product(enumerate(g0 + g1), repeat=2):
        want = (1 if i < len(g0) else -1) * (1 if j < len(g0) else -1)
        c = supercommutator(a, b)
        if center_project(c).is_zero():
            continue
        if sigma_eigenvalue(c) != want:
            bad.append([i, j])
    rep.add(check(S, "closure", "[g⁰,g⁰] ⊆ g⁰, [g⁰,g¹] ⊆ g¹, [g¹,g¹] ⊆ g⁰", not bad, bad[:5] or None))
    rng = _rng(n, 1)
    basis = g0 + g1
    fails = []
    for t in range(triples):
        a, b, c = (_homogeneous_sample(rng, basis, rng.randrange(2)) for _ in range(3))
        if not jacobi_residual(a, b, c).is_zero():
            fails.append(t)
    rep.add(check(S, "jacobi", "[a,[b,c]] = [[a,b],c] + (−1)^{|a||b|}[b,[a,c]]", not fails,
                  {"triples": triples, "failed": fails[:5]} if fails else {"triples": triples}))
    rep.extend(audit_level0(cfg))
    if controls:
        rng = _rng(n, 2)
        odd = [_homogeneous_sample(rng, basis, 1) for _ in range(3)]
        rep.add(check(S, "control.jacobi.no-koszul-sign", "Jacobi with the Koszul sign removed",
                      jacobi_residual(*odd, koszul=False).is_zero(), control=True))
    return rep


def pairing_suite(n: int, controls: bool = False, max_k: int = 4) -> FindingsReport:
    rep = FindingsReport()
    S = "pairing"
    g0 = [m for _, m in named_basis(n)]
    g1 = [m for _, m in named_basis(n, dual=True)]
    for nm, basis in (("g0", g0), ("g1", g1)):
        bad = [[i, j] for (i, a), (j, b) in itertools.product(enumerate(basis), repeat=2) if form(a, b)]
        rep.add(check(S, f"isotropy.{nm}", "(g⁰,g⁰) = (g¹,g¹) = 0", not bad, bad[:5] or None))
    r = gram_rank(n)
    rep.add(check(S, "gram.rank", "g⁰ and g¹ are nondegenerately paired", r == 2 * n * n - 1,
                  {"rank": r, "expected": 2 * n * n - 1}))
    pair = dual_basis(n)
    pm = pair.pairing_matrix()
    ident = all(pm[i][j] == (1 if i == j else 0) for i in range(len(pm)) for j in range(len(pm)))
    rep.add(check(S, "dual.identity", "(e^i, e_j) = δ_ij", ident))
    rep.add(Finding(S, "dual.signs", "units applied to odd duals", INFO,
                    {nm: s for nm, s in zip(pair.names, pair.signs) if s != 1}))
    rng = _rng(n, 3)
    basis = g0 + g1
    sym_bad, inv_bad = 0, 0
    for _ in range(60):
        a, b, c = (_homogeneous_sample(rng, basis, rng.randrange(2)) for _ in range(3))
        sign = -1 if a.parity() and b.parity() else 1
        if form(a, b) != sign * form(b, a):
            sym_bad += 1
        if form(supercommutator(a, b), c) != form(a, supercommutator(b, c)):
            inv_bad += 1
    rep.add(check(S, "form.supersymmetric", "(a,b) = (−1)^{|a||b|}(b,a)", not sym_bad, sym_bad or None))
    rep.add(check(S, "form.invariant", "([a,b],c) = (a,[b,c])", not inv_bad, inv_bad or None))
    c = casimirs(n)
    rep.add(check(S, "casimir.flip", "t₀^{21} = t₁", superflip(c.t0).equal_mod_center(c.t1)))
    rep.add(check(S, "casimir.sigma", "(σ⊗σ)(t) = −t", apply_sigma(c.t, (0, 1)).equal_mod_center(c.t.scale(-1))))
    # basis independence: reversed order and rescaled vectors
    scaled = [m.scale(k + 2) for k, m in enumerate(reversed(pair.e))]
    scaled_dual = [m.scale(Fraction(1, k + 2)) for k, m in enumerate(reversed(pair.e_dual))]
    rep.add(check(S, "casimir.basis-independent", "t does not depend on the basis of g⁰",
                  casimirs_from(scaled, scaled_dual).t.equal_mod_center(c.t)))
    table = root_vectors(n)
    rv_bad = []
    for ab in positive_roots(n):
        for i in range(1, n):
            lhs = supercommutator(gen_h(n, i), table.x[ab])
            if not equal_mod_center(lhs, table.x[ab].scale(root_pairing(n, i, ab))):
                rv_bad.append([i, list(ab)])
    rep.add(check(S, "root-vectors.weights", "[h_i, x_α] = (α_i, α) x_α", not rv_bad, rv_bad or None))
    duals_ok = all(form(table.x_dual[ab], table.x[ab]) == 1 and form(table.xh_dual[ab], table.xh[ab]) == 1
                   for ab in table.x)
    rep.add(check(S, "root-vectors.duals", "(x^{−α}, x_α) = (x̂^{−α}, x̂_α) = 1", duals_ok))
    t_bar = tbar0(n)
    rep.add(Finding(S, "tbar0.summands", "t̄₀ = Σ_{α∈Δ₊} x_α⊗x^{−α} − x̂_α⊗x̂^{−α} + ½ Σ k_i⊗k^i", INFO,
                    {"summands": tbar0_summands(n), "terms": len(t_bar)}))
    dim = len(pair.e)
    bad, flipped = [], []
    for i, j in itertools.product(range(dim), repeat=2):
        for k, l in itertools.product(range(max_k + 1), repeat=2):
            v = residue_pairing(current_dual_basis(n, j, l), current_basis(n, i, k))
            if v != (1 if (i, k) == (j, l) else 0):
                bad.append([i, k, j, l, str(v)])
            if (i, k) == (j, l):
                w = residue_pairing(current_basis(n, i, k), current_dual_basis(n, j, l))
                if w != 1:
                    flipped.append(pair.names[i])
    rep.add(check(S, "residue.dual-currents", "⟨e^{j,l}, e_{i,k}⟩ = δ_ij δ_kl", not bad,
                  {"max_k": max_k, "bad": bad[:5]} if bad else {"max_k": max_k}))
    rep.add(Finding(S, "residue.argument-order", "⟨e_{i,k}, e^{i,k}⟩ = (−1)^{|e_i|}⟨e^{i,k}, e_{i,k}⟩", INFO,
                    {"minus_one_for": sorted(set(flipped))}))
    poly_bad = 0
    for i, j in itertools.product(range(dim), repeat=2):
        for k, l in itertools.product(range(3), repeat=2):
            if residue_pairing(current_basis(n, i, k), current_basis(n, j, l)):
                poly_bad += 1
    rep.add(check(S, "residue.polynomial-isotropic", "⟨P₁, P₁⟩ = 0", not poly_bad, poly_bad or None))
    if controls:
        raw = [d.scale(s) for d, s in zip(pair.e_dual, pair.signs)]
        rm = [[form(d, x) for x in pair.e] for d in raw]
        ok = all(rm[i][j] == (1 if i == j else 0) for i in range(dim) for j in range(dim))
        rep.add(check(S, "control.dual.unsigned", "(e^i, e_j) = δ_ij without the odd sign normalization", ok,
                      control=True))
    return rep


PROP_IDENTITIES = (
    ("a", "t0", "t0", "[a⊗1, t₀] = −[1⊗a, t₀]"),
    ("a", "t1", "t1", "[a⊗1, t₁] = −[1⊗a, t₁]"),
    ("b", "t0", "t1", "[b⊗1, t₀] = −[1⊗b, t₁]"),
    ("b", "t1", "t0", "[b⊗1, t₁] = −[1⊗b, t₀]"),
)


def _prop_identity(m: GradedMatrix, lt: SuperTensor, rt: SuperTensor) -> bool:
    return tensor_commutator(left(m), lt).equal_mod_center(tensor_commutator(right(m), rt).scale(-1))


def tensor_suite(n: int, controls: bool = False) -> FindingsReport:
    from .hopfaudit import check_invariance_lemma

    rep = FindingsReport()
    S = "tensor"
    c = casimirs(n)
    tens = {"t0": c.t0, "t1": c.t1}
    g0 = named_basis(n)
    g1 = named_basis(n, dual=True)
    for kind, lt, rt, anchor in PROP_IDENTITIES:
        basis = g0 if kind == "a" else g1
        bad = [nm for nm, m in basis if not _prop_identity(m, tens[lt], tens[rt])]
        rep.add(check(S, f"prop.{kind}.{lt}", anchor, not bad, bad or None))
    # b read as an odd-parity element of g^0 instead of a member of g^1
    odd_g0 = [(nm, m) for nm, m in g0 if m.parity() == 1]
    for kind, lt, rt, anchor in PROP_IDENTITIES[2:]:
        bad = [nm for nm, m in odd_g0 if not _prop_identity(m, tens[lt], tens[rt])]
        rep.add(Finding(S, f"prop.b-in-odd-g0.{lt}", anchor, INFO, {"holds": not bad, "failing": bad}))
    inv = [check_invariance_lemma(m, f"invariance.{nm}") for nm, m in g0]
    bad = [f.id.split(".", 1)[1] for f in inv if not f.passed]
    rep.add(check(S, "invariance", inv[0].anchor, not bad, bad or None))
    rep.add(check(S, "flip.involution", "τ(τ(x)) = x", superflip(superflip(c.t0)) == c.t0))
    if controls:
        h = g0[0][1]
        rep.add(check(S, "control.prop.a.unsigned", "[a⊗1, t₀] = +[1⊗a, t₀]",
                      tensor_commutator(left(h), c.t0).equal_mod_center(tensor_commutator(right(h), c.t0)),
                      control=True))
    return rep


def currents_suite(n: int, max_level: int = 8, controls: bool = False) -> FindingsReport:
    cfg = ModelConfig(n)
    tw = build_tower(cfg, max_level)
    rep = audit_theorem2(cfg, max_level, tw)
    rep.extend(serre_audit(cfg, tower=tw))
    if controls:
        from .currents import EQ50

        flipped = build_tower(cfg, min(max_level, 3), hat_sign=-EQ50)
        ok = all(not f.status == "fail" for f in audit_theorem2(cfg, min(max_level, 3), flipped).select("diff"))
        rep.add(check("currents", "control.hat-tower-sign", "x̂ tower with the odd-step sign reversed", ok, control=True))
    return rep


def hopf_suite(n: int, controls: bool = False) -> FindingsReport:
    from .hopfaudit import hopf_suite as run

    return run(n, controls)


def rmatrix_suite(n: int, controls: bool = False) -> FindingsReport:
    from .rmatrixlab import rmatrix_suite as run

    return run(n, controls)


def cocycle_suite(n: int, max_degree: int = 3) -> FindingsReport:
    from .rmatrixlab import cocycle_suite as run

    return run(n, max_degree)


def run_suite(name: str, n: int, *, max_level: int = 8, max_degree: int = 3, controls: bool = False) -> FindingsReport:
    runners: Dict[str, Callable[[], FindingsReport]] = {
        "model": lambda: model_suite(n, controls),
        "pairing": lambda: pairing_suite(n, controls),
        "tensor": lambda: tensor_suite(n, controls),
        "rmatrix": lambda: rmatrix_suite(n, controls),
        "cocycle": lambda: cocycle_suite(n, max_degree),
        "currents": lambda: currents_suite(n, max_level, controls),
        "hopf": lambda: hopf_suite(n, controls),
    }
    return runners[name]()
