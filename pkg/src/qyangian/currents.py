"""Polynomial currents in the twisted loop algebra, the generator tower and the classical audit.

A current is a finite sum of matrices times powers of u, stored as
``{degree: GradedMatrix}`` with every component center-projected.  The twist
condition puts even-degree components in g^0 (sigma-fixed) and odd-degree
components in g^1 (sigma-antifixed).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Tuple

from .findings import Finding, FindingsReport, check
from .linalg import solve_in_span
from .supermodel import (
    GradedMatrix,
    ModelConfig,
    build_generators,
    cartan_form,
    center_project,
    sigma_apply,
    supercommutator,
    supertrace,
    twisted_form,
)


class TwistViolation(ValueError):
    pass


def _eigen_ok(m: GradedMatrix, degree: int) -> bool:
    if supertrace(m) != 0:
        return False
    s = sigma_apply(m)
    target = m if degree % 2 == 0 else -m
    return center_project(s - target).is_zero()


class Current:
    """Element of gl(n,n)[u] modulo the center, one matrix per power of u."""

    __slots__ = ("n", "_c")

    def __init__(self, n: int, components: Optional[Mapping[int, GradedMatrix]] = None, validate: bool = True):
        self.n = n
        c: Dict[int, GradedMatrix] = {}
        for k, m in (components or {}).items():
            if k < 0:
                raise ValueError("negative u-degree in a polynomial current")
            pm = center_project(m)
            if not pm.is_zero():
                c[k] = pm
        self._c = c
        if validate:
            for k, m in c.items():
                if not _eigen_ok(m, k):
                    raise TwistViolation(f"degree-{k} component is not in g^{k % 2}")

    @classmethod
    def zero(cls, n: int) -> "Current":
        return cls(n)

    @property
    def components(self) -> Dict[int, GradedMatrix]:
        return dict(self._c)

    def component(self, k: int) -> GradedMatrix:
        return self._c.get(k, GradedMatrix.zero(self.n))

    def degrees(self) -> List[int]:
        return sorted(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def is_homogeneous(self) -> bool:
        return len(self._c) <= 1

    def degree(self) -> Optional[int]:
        return max(self._c) if self._c else None

    def __eq__(self, other) -> bool:
        return isinstance(other, Current) and self.n == other.n and self._c == other._c

    def __hash__(self):
        return hash((self.n, frozenset(self._c.items())))

    def __add__(self, other: "Current") -> "Current":
        out = dict(self._c)
        for k, m in other._c.items():
            out[k] = out[k] + m if k in out else m
        return Current(self.n, out, validate=False)

    def __neg__(self) -> "Current":
        return Current(self.n, {k: -m for k, m in self._c.items()}, validate=False)

    def __sub__(self, other: "Current") -> "Current":
        return self + (-other)

    def scale(self, c) -> "Current":
        return Current(self.n, {k: m.scale(c) for k, m in self._c.items()}, validate=False)

    def __rmul__(self, c) -> "Current":
        return self.scale(c)

    def to_json(self):
        return {str(k): m.to_sparse_json() for k, m in sorted(self._c.items())}

    def __repr__(self) -> str:
        return f"Current(n={self.n}, degrees={self.degrees()})"


def make_current(x: GradedMatrix, k: int) -> Current:
    """x * u^k, validated against the twist condition."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if supertrace(x) != 0 or not _eigen_ok(x, k):
        raise TwistViolation(f"element does not lie in g^{k % 2} as required at degree {k}")
    return Current(x.n, {k: x})


def current_bracket(a: Current, b: Current) -> Current:
    out: Dict[int, GradedMatrix] = {}
    for p, x in a._c.items():
        for q, y in b._c.items():
            z = supercommutator(x, y)
            out[p + q] = out[p + q] + z if p + q in out else z
    res = Current(a.n, out, validate=False)
    for k, m in res._c.items():
        if not _eigen_ok(m, k):
            raise TwistViolation("bracket left the twisted current algebra")
    return res


def decomposition_project(components: Mapping[int, GradedMatrix], n: Optional[int] = None) -> Tuple[Current, Dict[int, GradedMatrix]]:
    """Split each degree component into sigma-eigenparts; keep the twist-compatible half.

    Returns (twisted part, residual) with the residual keyed by degree.
    """
    twisted: Dict[int, GradedMatrix] = {}
    residual: Dict[int, GradedMatrix] = {}
    for k, m in components.items():
        n = m.n
        s = sigma_apply(m)
        fixed = (m + s).scale(Fraction(1, 2))
        anti = (m - s).scale(Fraction(1, 2))
        keep, drop = (fixed, anti) if k % 2 == 0 else (anti, fixed)
        keep = center_project(keep)
        drop = center_project(drop)
        if not keep.is_zero():
            twisted[k] = keep
        if not drop.is_zero():
            residual[k] = drop
    return Current(n or 2, twisted), residual


# tower ------------------------------------------------------------------------------

EQ50 = 1  # hat x_{i,2m+2} = +1/2 [h_{i+1,1} - h_{i-1,1}, hat x_{i,2m+1}]
EQ39 = -1  # the same with a leading minus


@dataclass
class GeneratorTower:
    n: int
    max_level: int
    hat_sign: int
    x: Dict[Tuple[int, int, int], Current] = field(default_factory=dict)  # (sign, i, m)
    xh: Dict[Tuple[int, int, int], Current] = field(default_factory=dict)
    k: Dict[Tuple[int, int], Current] = field(default_factory=dict)
    ht: Dict[Tuple[int, int], Current] = field(default_factory=dict)
    h0: Dict[int, Current] = field(default_factory=dict)
    h1: Dict[int, Current] = field(default_factory=dict)

    def zero(self) -> Current:
        return Current.zero(self.n)

    def get(self, table: str, *key) -> Current:
        """Lookup with the boundary convention: out-of-range indices give zero."""
        return getattr(self, table).get(tuple(key) if len(key) > 1 else key[0], self.zero())

    def kbar(self, i: int, m: int) -> Current:
        return _bar(self.n, i, lambda r: self.get("k", r, m))

    def hbar(self, i: int, m: int) -> Current:
        return _bar(self.n, i, lambda r: self.get("ht", r, m))

    def to_json(self):
        def dump(tab):
            return {",".join(map(str, k)): v.to_json() for k, v in sorted(tab.items())}

        return {
            "n": self.n,
            "max_level": self.max_level,
            "hat_sign": self.hat_sign,
            "x": dump(self.x),
            "xh": dump(self.xh),
            "k": dump(self.k),
            "ht": dump(self.ht),
        }


def _bar(n: int, i: int, get: Callable[[int], Current]) -> Current:
    acc = Current.zero(n)
    for r in range(1, n):
        c = Fraction(-r, n) if r < i else Fraction(n - r, n)
        acc = acc + get(r).scale(c)
    return acc


def build_tower(cfg: ModelConfig, max_level: int, hat_sign: int = EQ50) -> GeneratorTower:
    n = cfg.n
    gs = build_generators(cfg)
    tw = GeneratorTower(n=n, max_level=max_level, hat_sign=hat_sign)
    for i in range(1, n):
        tw.h0[i] = make_current(gs.g0("h", i), 0)
        tw.h1[i] = make_current(gs.g1("h", i), 1)

    def h1(i: int) -> Current:
        return tw.h1.get(i, tw.zero())

    half = Fraction(1, 2)
    for i in range(1, n):
        diff = h1(i + 1) - h1(i - 1)
        for s, fam in ((1, "x+"), (-1, "x-")):
            cur = make_current(gs.g0(fam, i), 0)
            tw.x[(s, i, 0)] = cur
            for m in range(max_level):
                cur = current_bracket(h1(i), cur).scale(half * s)
                tw.x[(s, i, m + 1)] = cur
            cur = make_current(gs.g0("xh" + fam[1], i), 0)
            tw.xh[(s, i, 0)] = cur
            for m in range(max_level):
                c = half if m % 2 == 0 else half * hat_sign
                cur = current_bracket(diff, cur).scale(c)
                tw.xh[(s, i, m + 1)] = cur
        cur = make_current(gs.g0("k", i), 0)
        tw.k[(i, 0)] = cur
        for m in range(max_level):
            cur = current_bracket(diff, cur).scale(half)
            tw.k[(i, m + 1)] = cur
    for i in range(1, n):
        for m in range(max_level + 1):
            tw.ht[(i, m)] = current_bracket(tw.x[(1, i, m)], tw.x[(-1, i, 0)])
    return tw


# audit ------------------------------------------------------------------------------

def proportionality(lhs: Current, rhs: Current) -> Optional[Fraction]:
    """lambda with lhs = lambda * rhs, or None if not proportional (rhs = 0 and lhs = 0 gives None)."""
    if rhs.is_zero():
        return Fraction(0) if lhs.is_zero() else None
    if set(lhs.degrees()) - set(rhs.degrees()):
        return None
    lam = None
    for k, m in rhs.components.items():
        a = lhs.component(k)
        coords = solve_in_span(a, [m])
        if coords is None:
            return None
        if lam is None:
            lam = coords[0]
        elif coords[0] != lam:
            return None
    return lam


def _eq(suite, ident, anchor, lhs: Current, rhs: Current) -> Finding:
    diff = lhs - rhs
    return check(suite, ident, anchor, diff.is_zero(), None if diff.is_zero() else diff.to_json())


def _zero(suite, ident, anchor, lhs: Current) -> Finding:
    return check(suite, ident, anchor, lhs.is_zero(), None if lhs.is_zero() else lhs.to_json())


def scalar_law(n: int, k: int) -> Fraction:
    return Fraction(n - 2, n) ** k


def audit_theorem2(cfg: ModelConfig, max_level: int, tower: Optional[GeneratorTower] = None) -> FindingsReport:
    """Classical shadows of the current-generator relations.

    Levels m, l range so that every generator used stays within ``max_level``.
    """
    n = cfg.n
    tw = tower or build_tower(cfg, max_level)
    M = tw.max_level
    rep = FindingsReport()
    S = "currents"
    I = range(1, n)
    br = current_bracket

    # degree certificate of the tower
    bad = []
    for name, tab in (("x", tw.x), ("xh", tw.xh), ("k", tw.k), ("ht", tw.ht)):
        for key, cur in tab.items():
            m = key[-1]
            if not cur.is_zero() and cur.degrees() != [m]:
                bad.append(f"{name}{key}")
    rep.add(check(S, "tower.degrees", "entry degree in u equals m", not bad, bad or None))

    # linear shadows ---------------------------------------------------------------
    for i in I:
        rep.add(_eq(S, f"h1.shadow.{i}", "h̃_{i,1} = h_{i,1} + ½h_{i,0}² (classical part)", tw.ht[(i, 1)], tw.h1[i]))
        rep.add(_eq(S, f"h0.shadow.{i}", "h̃_{i,0} = [x^+_{i,0}, x^-_{i,0}] = h_{i,0}", tw.ht[(i, 0)], tw.h0[i]))
    for i, j in itertools.product(I, I):
        for m, l in _pairs(M):
            lhs = br(tw.x[(1, i, m)], tw.x[(-1, j, l)])
            rhs = tw.ht[(i, m + l)] if i == j else tw.zero()
            rep.add(_eq(S, f"ht=xx.{i},{j}.{m},{l}", "h̃_{i,m+n} = δ_{ij}[x^+_{i,m}, x^-_{i,n}]", lhs, rhs))
    for i, j in itertools.product(I, I):
        for m, l in _pairs(M):
            rep.add(_zero(S, f"[ht,ht].{i},{j}.{m},{l}", "[h̃_{i,m}, h̃_{j,n}] = 0", br(tw.ht[(i, m)], tw.ht[(j, l)])))
    for i, j in itertools.product(I, I):
        a = cartan_form(n, i, j)
        for l in range(M + 1):
            for s in (1, -1):
                rep.add(
                    _eq(S, f"[h0,x].{s:+d}.{i},{j}.{l}", "[h_{i,0}, x^±_{j,l}] = ±(α_i,α_j)x^±_{j,l}",
                        br(tw.h0[i], tw.x[(s, j, l)]), tw.x[(s, j, l)].scale(s * a))
                )
                rep.add(
                    _eq(S, f"[h0,xh].{s:+d}.{i},{j}.{l}", "[h_{i,0}, x̂^±_{j,l}] = ±(α_i,α_j)x̂^±_{j,l}",
                        br(tw.h0[i], tw.xh[(s, j, l)]), tw.xh[(s, j, l)].scale(s * a))
                )
                k0 = tw.k[(i, 0)]
                rep.add(
                    _eq(S, f"[k0,x].{s:+d}.{i},{j}.{l}", "[k_{i,0}, x^±_{j,l}] = ±(α_i,α_j)x̂^±_{j,l}",
                        br(k0, tw.x[(s, j, l)]), tw.xh[(s, j, l)].scale(s * a))
                )
                rep.add(
                    _eq(S, f"[k0,xh].{s:+d}.{i},{j}.{l}", "[k_{i,0}, x̂^±_{j,l}] = ±(α_i,α_j)~ x^±_{j,l}",
                        br(k0, tw.xh[(s, j, l)]), tw.x[(s, j, l)].scale(s * twisted_form(i, j)))
                )
    for i in I:
        for m in range(M):
            diff = tw.h1.get(i + 1, tw.zero()) - tw.h1.get(i - 1, tw.zero())
            rep.add(
                _eq(S, f"k.recursion.{i}.{m}", "k_{i,m+1} = ½[h_{i+1,1} − h_{i−1,1}, k_{i,m}]",
                    tw.k[(i, m + 1)], br(diff, tw.k[(i, m)]).scale(Fraction(1, 2)))
            )
    for i, j in itertools.product(I, I):
        for m, r in _pairs(M, lambda m, r: 2 * m + 1 + r <= M):
            rhs = (tw.kbar(i, 2 * m + r + 1).scale(2 * (int(i == j) - int(i == j + 1)))
                   + tw.kbar(i + 1, 2 * m + r + 1).scale(2 * (int(i == j) - int(i == j - 1))))
            rep.add(
                _eq(S, f"[ht_odd,k].{i},{j}.{m},{r}",
                    "[h̃_{i,2m+1}, k_{j,r}] = 2((δ_{ij}−δ_{i,j+1})k̄_{i,2m+r+1} + (δ_{ij}−δ_{i,j−1})k̄_{i+1,2m+r+1})",
                    br(tw.ht[(i, 2 * m + 1)], tw.k[(j, r)]), rhs)
            )
        for m, r in _pairs(M, lambda m, r: 2 * m + 2 * r + 1 <= M):
            rep.add(_zero(S, f"[ht_even,k_odd].{i},{j}.{m},{r}", "[h̃_{i,2m}, k_{j,2r+1}] = 0",
                          br(tw.ht[(i, 2 * m)], tw.k[(j, 2 * r + 1)])))
        for a, b in _pairs(M, lambda a, b: 2 * a + 2 * b <= M):
            rhs = (tw.hbar(i, 2 * (a + b)).scale(2 * (int(i == j) - int(i == j + 1)))
                   + tw.hbar(i + 1, 2 * (a + b)).scale(2 * (int(i == j) - int(i == j - 1))))
            rep.add(
                _eq(S, f"[k_even,k_even].{i},{j}.{a},{b}",
                    "[k_{i,2k}, k_{j,2l}] = 2(δ_{i,j}−δ_{i,j+1})h̄_{i,2(k+l)} + 2(δ_{i,j}−δ_{i,j−1})h̄_{i+1,2(k+l)}",
                    br(tw.k[(i, 2 * a)], tw.k[(j, 2 * b)]), rhs)
            )
        for m, r in _pairs(M, lambda m, r: 2 * m + 1 + 2 * r <= M):
            rep.add(_zero(S, f"[k_odd,k_even].{i},{j}.{m},{r}", "[k_{i,2m+1}, k_{j,2r}] = 0",
                          br(tw.k[(i, 2 * m + 1)], tw.k[(j, 2 * r)])))

    # difference laws: classical shadow has zero right-hand side -----------------------
    fams = {
        "ht": lambda s, i, m: tw.ht.get((i, m)),
        "x": lambda s, i, m: tw.x.get((s, i, m)),
        "xh": lambda s, i, m: tw.xh.get((s, i, m)),
        "k": lambda s, i, m: tw.k.get((i, m)),
    }
    for (fa, fb) in (("ht", "x"), ("x", "x"), ("xh", "x"), ("xh", "xh"), ("k", "x")):
        for s in (1, -1):
            for i, j in itertools.product(I, I):
                for m, r in _pairs(M - 1):
                    a1, a0 = fams[fa](s, i, m + 1), fams[fa](s, i, m)
                    b0, b1 = fams[fb](s, j, r), fams[fb](s, j, r + 1)
                    lhs = br(a1, b0) - br(a0, b1)
                    rep.add(_zero(S, f"diff.{fa},{fb}.{s:+d}.{i},{j}.{m},{r}",
                                  "[m_{i,m+1}, m'_{j,r}] − [m_{i,m}, m'_{j,r+1}] = ħ-order anticommutators",
                                  lhs))

    # scalar laws ----------------------------------------------------------------------
    rep.extend(_scalar_laws(tw))
    return rep


def _pairs(M: int, keep: Callable[[int, int], bool] = None):
    for a in range(M + 1):
        for b in range(M + 1):
            if keep is None:
                if a + b <= M:
                    yield a, b
            elif keep(a, b):
                yield a, b


def _scalar_laws(tw: GeneratorTower) -> FindingsReport:
    n, M = tw.n, tw.max_level
    rep = FindingsReport()
    S = "currents"
    I = range(1, n)
    br = current_bracket
    lambdas: Dict[int, Dict[Tuple[int, int, str], Optional[Fraction]]] = {}
    for kk in range(0, M // 2 + 1):
        for m in range(0, M - 2 * kk + 1):
            for i, j in itertools.product(I, I):
                left = br(tw.xh[(1, i, m)], tw.x[(-1, j, 2 * kk)])
                right = br(tw.x[(1, i, 2 * kk)], tw.xh[(-1, j, m)])
                if i != j:
                    rep.add(_zero(S, f"scalar.even.offdiag.{i},{j}.{m},{kk}", "[x̂^+_{i,m}, x^-_{j,2k}] = 0 for i ≠ j", left))
                    rep.add(_zero(S, f"scalar.even.offdiag-r.{i},{j}.{m},{kk}", "[x^+_{i,2k}, x̂^-_{j,m}] = 0 for i ≠ j", right))
                    continue
                target = tw.k[(i, m + 2 * kk)]
                for side, lhs in (("l", left), ("r", right)):
                    lam = proportionality(lhs, target)
                    lambdas.setdefault(kk, {})[(i, m, side)] = lam
    for kk, table in sorted(lambdas.items()):
        nonprop = sorted(f"i={i},m={m},{s}" for (i, m, s), v in table.items() if v is None)
        # lambda where the target is nonzero
        informative = {key: v for key, v in table.items() if v is not None and not tw.k[(key[0], key[1] + 2 * kk)].is_zero()}
        ivals = set(informative.values())
        law = scalar_law(n, kk)
        rep.add(
            check(S, f"scalar.even.proportional.k={kk}",
                  "[x̂^+_{i,m}, x^-_{j,2k}] = [x^+_{i,2k}, x̂^-_{j,m}] ∝ k_{i,m+2k}",
                  not nonprop, nonprop or None)
        )
        rep.add(
            check(S, f"scalar.even.uniform.k={kk}", "λ(n,k) independent of i and m",
                  len(ivals) <= 1, {"values": sorted(str(v) for v in ivals)} if len(ivals) > 1 else None)
        )
        lam = next(iter(ivals)) if len(ivals) == 1 else None
        rep.add(
            Finding(S, f"scalar.even.lambda.k={kk}", "((n−2)/n)^k", "info",
                    {"n": n, "k": kk, "lambda": None if lam is None else f"{lam.numerator}/{lam.denominator}",
                     "law": f"{law.numerator}/{law.denominator}", "match": lam == law})
        )
        if n == 2 and kk >= 1:
            zero = all(br(tw.xh[(1, 1, m)], tw.x[(-1, 1, 2 * kk)]).is_zero() for m in range(0, M - 2 * kk + 1))
            rep.add(check(S, f"scalar.even.n2-zero.k={kk}", "((n−2)/n)^k = 0 at n = 2 forces [x̂^+_{1,m}, x^-_{1,2k}] = 0", zero))
    # odd second index: check both the k-bar pattern and the plain k pattern
    for kk in range(0, (M - 1) // 2 + 1):
        for m in range(0, M - 2 * kk):
            for i in I:
                lhs = br(tw.xh[(1, i, m)], tw.x[(-1, i, 2 * kk + 1)])
                lvl = m + 2 * kk + 1
                bar = tw.kbar(i, lvl) + tw.kbar(i + 1, lvl)
                plain = tw.k[(i, lvl)]
                lb = proportionality(lhs, bar)
                lp = proportionality(lhs, plain)
                rep.add(
                    Finding(S, f"scalar.odd.pattern.{i}.{m},{kk}", "[x̂^+_{i,m}, x^-_{j,2k+1}] = δ_{ij}(k̄_{i,·}+k̄_{i+1,·})((n−2)/n)^k",
                            "info", {"kbar_lambda": _fmt(lb), "k_lambda": _fmt(lp), "law": _fmt(scalar_law(n, kk))})
                )
    return rep


def _fmt(x: Optional[Fraction]):
    return None if x is None else f"{x.numerator}/{x.denominator}"


def serre_audit(cfg: ModelConfig, levels: Iterable[Tuple[int, int, int]] = None, tower: Optional[GeneratorTower] = None) -> FindingsReport:
    n = cfg.n
    levels = list(levels) if levels is not None else list(itertools.product(range(3), repeat=3))
    need = max((max(s) for s in levels), default=0)
    tw = tower if tower is not None and tower.max_level >= need else build_tower(cfg, max(need, 1))
    rep = FindingsReport()
    br = current_bracket
    for sgn in (1, -1):
        for i, j in itertools.product(range(1, n), range(1, n)):
            if i == j:
                continue
            for s in levels:
                tot = Current.zero(n)
                tot_hat = Current.zero(n)
                for p in set(itertools.permutations(s)):
                    mult = _perm_multiplicity(s, p)
                    inner = br(tw.x[(sgn, i, p[1])], tw.x[(sgn, j, p[2])])
                    tot = tot + br(tw.x[(sgn, i, p[0])], inner).scale(mult)
                    tot_hat = tot_hat + br(tw.xh[(sgn, i, p[0])], inner).scale(mult)
                tag = ",".join(map(str, s))
                rep.add(_zero("currents", f"serre.x.{sgn:+d}.{i},{j}.{tag}",
                              "Σ_{σ∈S₃}[x^±_{i,σ(s₁)}, [x^±_{i,σ(s₂)}, x^±_{j,σ(s₃)}]] = 0", tot))
                rep.add(_zero("currents", f"serre.xh.{sgn:+d}.{i},{j}.{tag}",
                              "Σ_{σ∈S₃}[x̂^±_{i,σ(s₁)}, [x^±_{i,σ(s₂)}, x^±_{j,σ(s₃)}]] = 0", tot_hat))
    return rep


def _perm_multiplicity(s: Tuple[int, ...], p: Tuple[int, ...]) -> int:
    """Number of permutations of the positions of ``s`` producing the tuple ``p``."""
    return sum(1 for q in itertools.permutations(range(3)) if tuple(s[x] for x in q) == p)
