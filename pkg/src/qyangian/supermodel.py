"""gl(n,n) with signed indices, the involution sigma, and the generators of Q_{n-1}.

Basis vectors of the superspace are labelled ``1..n`` (even) and ``-1..-n``
(odd).  A :class:`GradedMatrix` is a sparse map ``(row, col) -> Fraction``;
the matrix unit ``E[a,b]`` has parity ``(a < 0) xor (b < 0)``.

Elements of the simple quotient A(n-1,n-1) = sl(n,n)/C*I are carried by
representatives; :func:`canonical_project` picks the representative with
``a[1,1] + a[-1,-1] == 0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

from .scalars import Scalar, fmt_q


class NotTraceless(ValueError):
    pass


class EigenspaceViolation(ValueError):
    pass


def labels(n: int) -> List[int]:
    return list(range(1, n + 1)) + [-a for a in range(1, n + 1)]


def unit_parity(a: int, b: int) -> int:
    return int((a < 0) != (b < 0))


class GradedMatrix:
    """Sparse 2n x 2n matrix over Q indexed by ±1..±n."""

    __slots__ = ("n", "_e", "_hash")

    def __init__(self, n: int, entries: Optional[Mapping[Tuple[int, int], Scalar]] = None):
        self.n = n
        e: Dict[Tuple[int, int], Fraction] = {}
        if entries:
            for (a, b), c in entries.items():
                if c:
                    if not (1 <= abs(a) <= n and 1 <= abs(b) <= n):
                        raise IndexError(f"label ({a},{b}) out of range for n={n}")
                    e[(a, b)] = Fraction(c)
        self._e = e
        self._hash = None

    @classmethod
    def unit(cls, n: int, a: int, b: int) -> "GradedMatrix":
        return cls(n, {(a, b): 1})

    @classmethod
    def identity(cls, n: int) -> "GradedMatrix":
        return cls(n, {(a, a): 1 for a in labels(n)})

    @classmethod
    def zero(cls, n: int) -> "GradedMatrix":
        return cls(n)

    @property
    def entries(self) -> Dict[Tuple[int, int], Fraction]:
        return dict(self._e)

    def items(self):
        return self._e.items()

    def __getitem__(self, key: Tuple[int, int]) -> Fraction:
        return self._e.get(key, Fraction(0))

    def is_zero(self) -> bool:
        return not self._e

    def __bool__(self) -> bool:
        return bool(self._e)

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedMatrix) and self.n == other.n and self._e == other._e

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._e.items())))
        return self._hash

    def __add__(self, other: "GradedMatrix") -> "GradedMatrix":
        out = dict(self._e)
        for k, c in other._e.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return GradedMatrix(self.n, out)

    def __neg__(self) -> "GradedMatrix":
        return GradedMatrix(self.n, {k: -c for k, c in self._e.items()})

    def __sub__(self, other: "GradedMatrix") -> "GradedMatrix":
        return self + (-other)

    def scale(self, c: Scalar) -> "GradedMatrix":
        if not c:
            return GradedMatrix(self.n)
        return GradedMatrix(self.n, {k: v * c for k, v in self._e.items()})

    def __rmul__(self, c: Scalar) -> "GradedMatrix":
        return self.scale(c)

    def __matmul__(self, other: "GradedMatrix") -> "GradedMatrix":
        by_row: Dict[int, List[Tuple[int, Fraction]]] = {}
        for (c, d), y in other._e.items():
            by_row.setdefault(c, []).append((d, y))
        out: Dict[Tuple[int, int], Fraction] = {}
        for (a, b), x in self._e.items():
            for d, y in by_row.get(b, ()):
                k = (a, d)
                s = out.get(k, 0) + x * y
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return GradedMatrix(self.n, out)

    # grading
    def part(self, parity: int) -> "GradedMatrix":
        return GradedMatrix(self.n, {k: c for k, c in self._e.items() if unit_parity(*k) == parity})

    @property
    def even(self) -> "GradedMatrix":
        return self.part(0)

    @property
    def odd(self) -> "GradedMatrix":
        return self.part(1)

    def parity(self) -> Optional[int]:
        """0 or 1 for homogeneous nonzero matrices, None otherwise (0 for zero)."""
        ps = {unit_parity(*k) for k in self._e}
        if not ps:
            return 0
        if len(ps) == 1:
            return ps.pop()
        return None

    def homogeneous_parts(self) -> Iterator[Tuple[int, "GradedMatrix"]]:
        for p in (0, 1):
            m = self.part(p)
            if m:
                yield p, m

    def to_rows(self) -> List[List[str]]:
        ls = labels(self.n)
        return [[fmt_q(self[(a, b)]) for b in ls] for a in ls]

    def to_sparse_json(self) -> List[List]:
        return [[a, b, fmt_q(c)] for (a, b), c in sorted(self._e.items())]

    def __repr__(self) -> str:
        body = " + ".join(f"{fmt_q(c)}*E[{a},{b}]" for (a, b), c in sorted(self._e.items()))
        return f"GradedMatrix(n={self.n}, {body or '0'})"


def E(n: int, a: int, b: int) -> GradedMatrix:
    return GradedMatrix.unit(n, a, b)


def supertrace(a: GradedMatrix) -> Fraction:
    return sum((c if k[0] > 0 else -c for k, c in a.items() if k[0] == k[1]), Fraction(0))


def supercommutator(a: GradedMatrix, b: GradedMatrix) -> GradedMatrix:
    out = GradedMatrix.zero(a.n)
    for p, x in a.homogeneous_parts():
        for q, y in b.homogeneous_parts():
            xy = x @ y
            yx = y @ x
            out = out + (xy + yx if p and q else xy - yx)
    return out


bracket = supercommutator


def sigma_apply(a: GradedMatrix) -> GradedMatrix:
    return GradedMatrix(a.n, {(-i, -j): c for (i, j), c in a.items()})


def center_coefficient(a: GradedMatrix) -> Fraction:
    return (a[(1, 1)] + a[(-1, -1)]) / 2


def canonical_project(a: GradedMatrix) -> GradedMatrix:
    if supertrace(a) != 0:
        raise NotTraceless(f"supertrace {supertrace(a)} != 0")
    return center_project(a)


def center_project(a: GradedMatrix) -> GradedMatrix:
    """Linear section killing C*I; agrees with canonical_project on sl(n,n)."""
    lam = center_coefficient(a)
    if not lam:
        return a
    return a - GradedMatrix.identity(a.n).scale(lam)


def equal_mod_center(a: GradedMatrix, b: GradedMatrix) -> bool:
    return center_project(a - b).is_zero()


@dataclass(frozen=True)
class QElement:
    """An element of A(n-1,n-1): a traceless representative, compared modulo the center."""

    rep: GradedMatrix

    def __post_init__(self):
        if supertrace(self.rep) != 0:
            raise NotTraceless("QElement representative must be supertraceless")

    @property
    def canonical(self) -> GradedMatrix:
        return center_project(self.rep)

    def __eq__(self, other) -> bool:
        return isinstance(other, QElement) and self.canonical == other.canonical

    def __hash__(self):
        return hash(self.canonical)

    def bracket(self, other: "QElement") -> "QElement":
        return QElement(supercommutator(self.rep, other.rep))


@dataclass(frozen=True)
class ModelConfig:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n!r}")

    @property
    def rank(self) -> int:
        return self.n - 1


def cartan_form(n: int, i: int, j: int) -> int:
    """(alpha_i, alpha_j) for sl(n)."""
    if i == j:
        return 2
    if abs(i - j) == 1:
        return -1
    return 0


def twisted_form(i: int, j: int) -> int:
    """The twisted pairing delta_{i,j+1} - delta_{i+1,j}."""
    return int(i == j + 1) - int(i + 1 == j)


def _diag(n: int, coeffs: Mapping[int, Scalar]) -> GradedMatrix:
    return GradedMatrix(n, {(a, a): c for a, c in coeffs.items()})


# generator formulas; index i runs over 1..n-1
def gen_h(n: int, i: int) -> GradedMatrix:
    return _diag(n, {i: 1, i + 1: -1, -i: 1, -i - 1: -1})


def gen_h_dual(n: int, i: int) -> GradedMatrix:
    return _diag(n, {i: 1, i + 1: -1, -i: -1, -i - 1: 1})


def gen_h_literal(n: int, i: int) -> GradedMatrix:
    # (E_ii - E_{i+1,i+1}) + (E_ii - E_{-i-1,-i-1}) exactly as printed
    return E(n, i, i) - E(n, i + 1, i + 1) + E(n, i, i) - E(n, -i - 1, -i - 1)


def gen_h_dual_literal(n: int, i: int) -> GradedMatrix:
    return (E(n, i, i) - E(n, i + 1, i + 1)) - (E(n, i, i) - E(n, -i - 1, -i - 1))


def gen_x(n: int, i: int, sign: int, dual: bool = False) -> GradedMatrix:
    s = -1 if dual else 1
    if sign > 0:
        return E(n, i, i + 1) + E(n, -i, -i - 1).scale(s)
    return E(n, i + 1, i) + E(n, -i - 1, -i).scale(s)


def gen_k(n: int, i: int, dual: bool = False) -> GradedMatrix:
    s = -1 if dual else 1
    first = E(n, i, -i) - E(n, i + 1, -i - 1)
    second = E(n, -i, i) - E(n, -i - 1, i + 1)
    return first + second.scale(s)


def gen_xhat(n: int, i: int, sign: int, dual: bool = False) -> GradedMatrix:
    s = -1 if dual else 1
    if sign > 0:
        return E(n, i, -i - 1) + E(n, -i, i + 1).scale(s)
    return E(n, i + 1, -i) + E(n, -i - 1, i).scale(s)


FAMILIES = ("h", "k", "x+", "x-", "xh+", "xh-")
FAMILY_PARITY = {"h": 0, "x+": 0, "x-": 0, "k": 1, "xh+": 1, "xh-": 1}


def generator(n: int, family: str, i: int, dual: bool = False) -> GradedMatrix:
    """Matrix of a named generator; ``dual`` selects the g^1 partner."""
    if family == "h":
        return gen_h_dual(n, i) if dual else gen_h(n, i)
    if family == "k":
        return gen_k(n, i, dual)
    if family in ("x+", "x-"):
        return gen_x(n, i, 1 if family == "x+" else -1, dual)
    if family in ("xh+", "xh-"):
        return gen_xhat(n, i, 1 if family == "xh+" else -1, dual)
    raise KeyError(family)


def hbar_diag(n: int, i: int) -> GradedMatrix:
    """h-bar_i modulo the center: (1/n)(-sum_{r<i} r h_r + sum_{r>=i} (n-r) h_r)."""
    out = GradedMatrix.zero(n)
    for r in range(1, n):
        c = Fraction(-r, n) if r < i else Fraction(n - r, n)
        out = out + gen_h(n, r).scale(c)
    return out


def kbar(n: int, i: int) -> GradedMatrix:
    out = GradedMatrix.zero(n)
    for r in range(1, n):
        c = Fraction(-r, n) if r < i else Fraction(n - r, n)
        out = out + gen_k(n, r).scale(c)
    return out


@dataclass
class GeneratorSet:
    n: int
    even: Dict[Tuple[str, int], GradedMatrix] = field(default_factory=dict)
    odd_sigma: Dict[Tuple[str, int], GradedMatrix] = field(default_factory=dict)
    cartan: List[List[int]] = field(default_factory=list)
    twisted: List[List[int]] = field(default_factory=list)

    def g0(self, family: str, i: int) -> GradedMatrix:
        """Member of g^0 (sigma-fixed); zero outside 1..n-1."""
        if not 1 <= i <= self.n - 1:
            return GradedMatrix.zero(self.n)
        return self.even[(family, i)]

    def g1(self, family: str, i: int) -> GradedMatrix:
        """Member of g^1 (sigma-antifixed); zero outside 1..n-1."""
        if not 1 <= i <= self.n - 1:
            return GradedMatrix.zero(self.n)
        return self.odd_sigma[(family, i)]


def sigma_eigenvalue(a: GradedMatrix) -> Optional[int]:
    """+1 / -1 if ``a`` is a sigma eigenvector modulo the center, else None."""
    s = sigma_apply(a)
    if equal_mod_center(s, a):
        return 1
    if equal_mod_center(s, -a):
        return -1
    return None


def validate_member(a: GradedMatrix, eigen: int, parity: int, name: str) -> None:
    if supertrace(a) != 0:
        raise EigenspaceViolation(f"{name}: supertrace {supertrace(a)} != 0")
    ev = sigma_eigenvalue(a)
    if ev != eigen and not center_project(a).is_zero():
        raise EigenspaceViolation(f"{name}: not a ({eigen:+d})-eigenvector of sigma")
    if a.parity() != parity:
        raise EigenspaceViolation(f"{name}: parity {a.parity()} != {parity}")


def build_generators(cfg: ModelConfig) -> GeneratorSet:
    n = cfg.n
    gs = GeneratorSet(n=n)
    for i in range(1, n):
        for fam in FAMILIES:
            a = generator(n, fam, i)
            b = generator(n, fam, i, dual=True)
            validate_member(a, 1, FAMILY_PARITY[fam], f"{fam}_{i}")
            validate_member(b, -1, FAMILY_PARITY[fam], f"{fam}^{i}")
            gs.even[(fam, i)] = a
            gs.odd_sigma[(fam, i)] = b
    gs.cartan = [[cartan_form(n, i, j) for j in range(1, n)] for i in range(1, n)]
    gs.twisted = [[twisted_form(i, j) for j in range(1, n)] for i in range(1, n)]
    return gs


# Named basis of Q_{n-1} = g^0 and of g^1.
# Even: h_i, x_{a,b} (a != b).  Odd: k_i, xh_{a,b} (a != b), and K = sum_a (E_{a,-a} + E_{-a,a}).
def root_vector(n: int, a: int, b: int, hat: bool = False, dual: bool = False) -> GradedMatrix:
    """x_{eps_a - eps_b} (or its hatted / g^1 version) as a matrix."""
    s = -1 if dual else 1
    if hat:
        return E(n, a, -b) + E(n, -a, b).scale(s)
    return E(n, a, b) + E(n, -a, -b).scale(s)


def odd_trace(n: int, dual: bool = False) -> GradedMatrix:
    s = -1 if dual else 1
    out = GradedMatrix.zero(n)
    for a in range(1, n + 1):
        out = out + E(n, a, -a) + E(n, -a, a).scale(s)
    return out


def named_basis(n: int, dual: bool = False) -> List[Tuple[str, GradedMatrix]]:
    """Ordered named basis of g^0 (``dual=False``) or g^1 (``dual=True``)."""
    up = "^" if dual else "_"
    out: List[Tuple[str, GradedMatrix]] = []
    for i in range(1, n):
        out.append((f"h{up}{i}", gen_h_dual(n, i) if dual else gen_h(n, i)))
    for a, b in itertools.permutations(range(1, n + 1), 2):
        out.append((_root_name("x", a, b, dual), root_vector(n, a, b, dual=dual)))
    for i in range(1, n):
        out.append((f"k{up}{i}", gen_k(n, i, dual)))
    out.append((f"K{up}0", odd_trace(n, dual)))
    for a, b in itertools.permutations(range(1, n + 1), 2):
        out.append((_root_name("xh", a, b, dual), root_vector(n, a, b, hat=True, dual=dual)))
    return out


def _root_name(stem: str, a: int, b: int, dual: bool) -> str:
    up = "^" if dual else "_"
    if b == a + 1:
        return f"{stem}+{up}{a}"
    if a == b + 1:
        return f"{stem}-{up}{b}"
    return f"{stem}{up}{a},{b}"


def solve_coordinates(target: GradedMatrix, basis: List[GradedMatrix]) -> Optional[List[Fraction]]:
    """Coordinates of ``target`` (mod center) in ``basis`` (mod center), or None."""
    from .linalg import solve_in_span

    vecs = [center_project(b) for b in basis]
    return solve_in_span(center_project(target), vecs)


def eigenspace_split(cfg: ModelConfig) -> Tuple[List[GradedMatrix], List[GradedMatrix]]:
    """Bases of g^0 and g^1 (as canonical representatives)."""
    n = cfg.n
    g0 = [center_project(m) for _, m in named_basis(n)]
    g1 = [center_project(m) for _, m in named_basis(n, dual=True)]
    for m in g0:
        validate_member(m, 1, m.parity(), "g0 basis")
    for m in g1:
        validate_member(m, -1, m.parity(), "g1 basis")
    return g0, g1


def matrix_units(n: int) -> List[GradedMatrix]:
    return [E(n, a, b) for a in labels(n) for b in labels(n)]


# level-0 relation audit -------------------------------------------------------------

def audit_level0(cfg: ModelConfig):
    """Every relation among level-0 generators, evaluated on matrices modulo the center."""
    from .findings import Finding, FindingsReport, check

    n = cfg.n
    rep = FindingsReport()
    S = "model"

    # the printed h_i formula versus the sigma-symmetrized one
    for i in range(1, n):
        try:
            validate_member(gen_h_literal(n, i), 1, 0, f"h_{i} (literal)")
            literal_ok = True
        except EigenspaceViolation:
            literal_ok = False
        try:
            validate_member(gen_h_dual_literal(n, i), -1, 0, f"h^{i} (literal)")
            literal_dual_ok = True
        except EigenspaceViolation:
            literal_dual_ok = False
        rep.add(Finding(S, f"h-formula.literal.{i}", "h_i = π((E_{i,i} −E_{i+1,i+1}) + (E_{i,i} −E_{−i−1,−i−1}))",
                        "info", {"sigma_valid": literal_ok, "dual_sigma_valid": literal_dual_ok,
                                 "supertrace": fmt_q(supertrace(gen_h_literal(n, i)))}))
        rep.add(check(S, f"h-formula.erratum.{i}", "literal h_i is not σ-fixed; the symmetrized h_i is",
                      not literal_ok and sigma_eigenvalue(gen_h(n, i)) == 1 and supertrace(gen_h(n, i)) == 0))

    gs = build_generators(cfg)
    g0 = gs.g0

    def eq(ident, anchor, lhs, rhs):
        d = center_project(lhs - rhs)
        rep.add(check(S, ident, anchor, d.is_zero(), None if d.is_zero() else d.to_sparse_json()))

    br = supercommutator
    I = range(1, n)
    zero = GradedMatrix.zero(n)
    for i, j in itertools.product(I, I):
        a = cartan_form(n, i, j)
        tw = twisted_form(i, j)
        d = int(i == j)
        eq(f"[h,h].{i},{j}", "[h_{i,0}, h_{j,0}] = 0", br(g0("h", i), g0("h", j)), zero)
        eq(f"[h,k].{i},{j}", "[h_{i,0}, k_{j,0}] = 0", br(g0("h", i), g0("k", j)), zero)
        for s, fam, hat in ((1, "x+", "xh+"), (-1, "x-", "xh-")):
            eq(f"[h,x].{s:+d}.{i},{j}", "[h_{i,0}, x^±_{j,0}] = ±(α_i,α_j)x^±_{j,0}",
               br(g0("h", i), g0(fam, j)), g0(fam, j).scale(s * a))
            eq(f"[k,x].{s:+d}.{i},{j}", "[k_{i,0}, x^±_{j,0}] = ±(α_i,α_j)~ x̂^±_{j,0}",
               br(g0("k", i), g0(fam, j)), g0(hat, j).scale(s * tw))
        rhs = hbar_diag(n, i).scale(2 * (d - int(i == j + 1)))
        if i + 1 <= n:
            rhs = rhs + hbar_diag(n, i + 1).scale(2 * (d - int(i == j - 1)))
        eq(f"[k,k].{i},{j}", "[k_{i,0}, k_{j,0}] = 2(δ_{i,j}−δ_{i,j+1})h̄_{i,0} + 2(δ_{i,j}−δ_{i,j−1})h̄_{i+1,0}",
           br(g0("k", i), g0("k", j)), rhs)
        eq(f"[x+,x-].{i},{j}", "[x^+_{i,0}, x^-_{j,0}] = δ_{ij} h_{i,0}", br(g0("x+", i), g0("x-", j)), g0("h", i).scale(d))
        eq(f"[xh+,x-].{i},{j}", "[x̂^+_{i,0}, x^-_{j,0}] = δ_{ij} k_{i,0}", br(g0("xh+", i), g0("x-", j)), g0("k", i).scale(d))
        eq(f"[x+,xh-].{i},{j}", "[x^+_{i,0}, x̂^-_{j,0}] = δ_{ij} k_{i,0}", br(g0("x+", i), g0("xh-", j)), g0("k", i).scale(d))
        for s, fam, hat in ((1, "x+", "xh+"), (-1, "x-", "xh-")):
            eq(f"[xh,xh]=[x,x].{s:+d}.{i},{j}", "[x̂^±_{i,0}, x̂^±_{j,0}] = [x^±_{i,0}, x^±_{j,0}]",
               br(g0(hat, i), g0(hat, j)), br(g0(fam, i), g0(fam, j)))
            if i == j:
                continue
            eq(f"serre.xxx.{s:+d}.{i},{j}", "(ad x_{i,0}^±)²(x_{j,0}^±) = 0, i≠j",
               br(g0(fam, i), br(g0(fam, i), g0(fam, j))), zero)
            eq(f"serre.hhx.{s:+d}.{i},{j}", "(ad x̂_{i,0}^±)²(x_{j,0}^±) = 0, i≠j",
               br(g0(hat, i), br(g0(hat, i), g0(fam, j))), zero)
            eq(f"serre.hxx.{s:+d}.{i},{j}", "[x̂_{i,0}^±, [x_{i,0}^±, x_{j,0}^±]] = 0, i≠j",
               br(g0(hat, i), br(g0(fam, i), g0(fam, j))), zero)
            eq(f"serre.xxh.{s:+d}.{i},{j}", "(ad x_{i,0}^±)²(x̂_{j,0}^±) = 0, i≠j",
               br(g0(fam, i), br(g0(fam, i), g0(hat, j))), zero)
    rep.add(Finding(S, "tautology.[xh,x]", "[x̂^±_{i,0}, x^±_{j,0}] = [x̂^±_{i,0}, x^±_{j,0}]", "info",
                    {"note": "both sides are the same expression"}))
    return rep
