"""The supertrace form, dual bases of g^0 / g^1, Casimir tensors and root vectors."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .gradedtensor import SuperTensor, superflip
from .scalars import LaurentPoly, residue
from .supermodel import (
    GradedMatrix,
    cartan_form,
    center_project,
    named_basis,
    supercommutator,
    supertrace,
)


class SingularGram(ArithmeticError):
    pass


def form(a: GradedMatrix, b: GradedMatrix) -> Fraction:
    """(a, b) = str(a b); independent of the representatives mod the center."""
    return supertrace(a @ b)


@dataclass
class DualBasisPair:
    """Bases e of g^0 and e_dual of g^1 with (e_dual[i], e[j]) = delta_ij.

    ``gram[i][j] = (e[i], f[j])`` is the raw pairing against the named g^1
    basis f before inversion; ``signs[i]`` is the unit applied to the dual of
    e[i] when passing from the (e, e_dual) order to the (e_dual, e) order
    (-1 exactly for odd e[i]).
    """

    n: int
    names: List[str]
    e: List[GradedMatrix]
    dual_names: List[str]
    e_dual: List[GradedMatrix]
    gram: List[List[Fraction]]
    signs: List[int] = field(default_factory=list)

    def pairing_matrix(self) -> List[List[Fraction]]:
        return [[form(d, x) for x in self.e] for d in self.e_dual]


def gram_matrix(n: int) -> Tuple[List[str], List[GradedMatrix], List[str], List[GradedMatrix], List[List[Fraction]]]:
    b0 = named_basis(n)
    b1 = named_basis(n, dual=True)
    g = [[form(x, y) for _, y in b1] for _, x in b0]
    return [s for s, _ in b0], [m for _, m in b0], [s for s, _ in b1], [m for _, m in b1], g


@lru_cache(maxsize=None)
def dual_basis(n: int) -> DualBasisPair:
    names, e, fnames, f, g = gram_matrix(n)
    try:
        ginv = linalg.inverse(g)
    except linalg.SingularMatrix as exc:
        raise SingularGram(str(exc)) from exc
    # (e_i, sum_j ginv[j][i] f_j) = delta: raw duals on the right
    raw = []
    for i in range(len(e)):
        acc = GradedMatrix.zero(n)
        for j in range(len(f)):
            c = ginv[j][i]
            if c:
                acc = acc + f[j].scale(c)
        raw.append(acc)
    # flip to (dual, e) = 1, which differs from (e, dual) by (-1)^{|e|}
    signs = [(-1 if x.parity() else 1) for x in e]
    duals = [d.scale(s) for d, s in zip(raw, signs)]
    dual_names = [nm.replace("_", "^", 1) for nm in names]
    return DualBasisPair(n, names, e, dual_names, duals, g, signs)


def gram_rank(n: int) -> int:
    return linalg.rank(gram_matrix(n)[4])


@dataclass
class Casimirs:
    t0: SuperTensor
    t1: SuperTensor

    @property
    def t(self) -> SuperTensor:
        return self.t0 + self.t1


def casimirs_from(e: Sequence[GradedMatrix], e_dual: Sequence[GradedMatrix]) -> Casimirs:
    n = e[0].n
    t0 = SuperTensor.zero(n, 2)
    for x, d in zip(e, e_dual):
        t0 = t0 + SuperTensor.pure(x, d)
    # sum e^i (x) e_i carries the Koszul sign of the swap on odd pairs; without
    # it t0 + t1 is not ad-invariant
    return Casimirs(t0, superflip(t0))


@lru_cache(maxsize=None)
def _casimirs(n: int) -> Casimirs:
    pair = dual_basis(n)
    return casimirs_from(pair.e, pair.e_dual)


def casimirs(pair_or_n) -> Casimirs:
    if isinstance(pair_or_n, DualBasisPair):
        if pair_or_n is dual_basis(pair_or_n.n):
            return _casimirs(pair_or_n.n)
        return casimirs_from(pair_or_n.e, pair_or_n.e_dual)
    return _casimirs(int(pair_or_n))


# root vectors -----------------------------------------------------------------

def positive_roots(n: int) -> List[Tuple[int, int]]:
    """Positive roots eps_a - eps_b, a < b, as pairs (a, b)."""
    return [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)]


def root_pairing(n: int, i: int, ab: Tuple[int, int]) -> int:
    """(alpha_i, eps_a - eps_b)."""
    a, b = ab
    return sum(cartan_form(n, i, j) for j in range(a, b)) if a < b else -root_pairing(n, i, (b, a))


def twisted_root_pairing(n: int, i: int, ab: Tuple[int, int]) -> int:
    """Twisted pairing of alpha_i with eps_a - eps_b, extended additively."""
    from .supermodel import twisted_form

    a, b = ab
    if a < b:
        return sum(twisted_form(i, j) for j in range(a, b))
    return -twisted_root_pairing(n, i, (b, a))


@dataclass
class RootVectorTable:
    n: int
    x: Dict[Tuple[int, int], GradedMatrix]
    xh: Dict[Tuple[int, int], GradedMatrix]
    x_dual: Dict[Tuple[int, int], GradedMatrix]
    xh_dual: Dict[Tuple[int, int], GradedMatrix]


def _leading_positive(m: GradedMatrix) -> GradedMatrix:
    pos = [k for k in m.entries if k[0] > 0]
    k = min(pos)
    return m.scale(1 / m[k])


@lru_cache(maxsize=None)
def root_vectors(n: int) -> RootVectorTable:
    """x_alpha, xh_alpha built by iterated brackets of simple root vectors.

    Duals x^{-alpha}, xh^{-alpha} are taken from the dual basis so that
    (x^{-alpha}, x_alpha) = 1.
    """
    from .supermodel import gen_x, gen_xhat

    x: Dict[Tuple[int, int], GradedMatrix] = {}
    xh: Dict[Tuple[int, int], GradedMatrix] = {}
    for a in range(1, n):
        x[(a, a + 1)] = gen_x(n, a, 1)
        x[(a + 1, a)] = gen_x(n, a, -1)
        xh[(a, a + 1)] = gen_xhat(n, a, 1)
        xh[(a + 1, a)] = gen_xhat(n, a, -1)
    for length in range(2, n):
        for a in range(1, n - length + 1):
            b = a + length
            x[(a, b)] = _leading_positive(supercommutator(x[(a, b - 1)], x[(b - 1, b)]))
            x[(b, a)] = _leading_positive(supercommutator(x[(b, b - 1)], x[(b - 1, a)]))
            xh[(a, b)] = _leading_positive(supercommutator(x[(a, b - 1)], xh[(b - 1, b)]))
            xh[(b, a)] = _leading_positive(supercommutator(x[(b, b - 1)], xh[(b - 1, a)]))
    pair = dual_basis(n)
    x_dual = {key: _dual_of(m, pair.e, pair.e_dual) for key, m in x.items()}
    xh_dual = {key: _dual_of(m, pair.e, pair.e_dual) for key, m in xh.items()}
    return RootVectorTable(n, x, xh, x_dual, xh_dual)


def _dual_of(m: GradedMatrix, basis: List[GradedMatrix], duals: List[GradedMatrix]) -> GradedMatrix:
    """The dual-basis element attached to ``m`` when ``m`` is (a multiple of) a basis vector."""
    coords = linalg.solve_in_span(center_project(m), [center_project(b) for b in basis])
    nz = [(i, c) for i, c in enumerate(coords) if c]
    if len(nz) != 1:
        raise ValueError("root vector is not proportional to a basis vector")
    i, c = nz[0]
    return duals[i].scale(1 / c)


def tbar0(n: int, drop_k: bool = False, table: Optional[RootVectorTable] = None) -> SuperTensor:
    """sum_{alpha>0} x_alpha (x) x^{-alpha} - xh_alpha (x) xh^{-alpha} + 1/2 sum_i k_i (x) k^i.

    ``x^{-alpha}`` is the form-dual of ``x_alpha`` (a g^1 vector of root -alpha);
    ``k^i`` is the form-dual of ``k_i``.  ``drop_k`` removes the k-term
    (negative control).
    """
    table = table or root_vectors(n)
    out = SuperTensor.zero(n, 2)
    for ab in positive_roots(n):
        out = out + SuperTensor.pure(table.x[ab], table.x_dual[ab])
        out = out - SuperTensor.pure(table.xh[ab], table.xh_dual[ab])
    if not drop_k:
        pair = dual_basis(n)
        for i in range(1, n):
            idx = pair.names.index(f"k_{i}")
            out = out + SuperTensor.pure(pair.e[idx], pair.e_dual[idx]).scale(Fraction(1, 2))
    return out


def tbar0_summands(n: int) -> int:
    return 2 * len(positive_roots(n)) + (n - 1)


# residue pairing -----------------------------------------------------------------

def residue_pairing(f: LaurentPoly, g: LaurentPoly) -> Fraction:
    """<f, g> = res (f(u), g(u)) for matrix-valued Laurent polynomials."""
    scalar = LaurentPoly({})
    for k1, a in f.items():
        for k2, b in g.items():
            c = form(a, b)
            if c:
                scalar = scalar + LaurentPoly({k1 + k2: c})
    r = residue(scalar)
    return Fraction(r) if r else Fraction(0)


def current_basis(n: int, i: int, k: int) -> LaurentPoly:
    """e_{i,k}: e_i u^k for even k, e^i u^k for odd k."""
    pair = dual_basis(n)
    m = pair.e[i] if k % 2 == 0 else pair.e_dual[i]
    return LaurentPoly({k: m})


def current_dual_basis(n: int, i: int, k: int) -> LaurentPoly:
    """e^{i,k}: e^i u^{-k-1} for even k, +-e_i u^{-k-1} for odd k.

    At odd k an odd e_i picks up the Koszul sign -1; this is the choice under
    which <e^{j,l}, e_{i,k}> = delta and sum e_{i,k} (x) e^{i,k} resums to
    t0 and t1 = superflip(t0).
    """
    pair = dual_basis(n)
    if k % 2 == 0:
        m = pair.e_dual[i]
    else:
        m = pair.e[i].scale(pair.signs[i])
    return LaurentPoly({-k - 1: m})


# coordinates of tensors ------------------------------------------------------------

@lru_cache(maxsize=None)
def _full_basis(n: int) -> Tuple[Tuple[str, ...], Tuple[GradedMatrix, ...]]:
    named = named_basis(n) + named_basis(n, dual=True)
    return tuple(s for s, _ in named), tuple(center_project(m) for _, m in named)


@lru_cache(maxsize=None)
def _coordinate_map(n: int):
    """A left inverse of the full named basis, as sparse rows keyed by matrix position."""
    names, mats = _full_basis(n)
    keys, cols = linalg.vectorize([m.entries for m in mats])
    dim = len(mats)
    gram = [[sum(cols[i][k] * cols[j][k] for k in range(len(keys))) for j in range(dim)] for i in range(dim)]
    ginv = linalg.inverse(gram)
    rows: Dict[object, Dict[int, Fraction]] = {}
    for ki, key in enumerate(keys):
        row = {}
        for i in range(dim):
            c = sum(ginv[i][j] * cols[j][ki] for j in range(dim) if cols[j][ki])
            if c:
                row[i] = c
        rows[key] = row
    return names, mats, rows


def matrix_coordinates(m: GradedMatrix) -> Dict[str, Fraction]:
    """Coordinates of ``m`` (mod the center) in the named bases of g^0 and g^1."""
    names, mats, rows = _coordinate_map(m.n)
    target = center_project(m)
    coords: Dict[int, Fraction] = {}
    for key, c in target.entries.items():
        row = rows.get(key)
        if row is None:
            raise ValueError("matrix has nonzero supertrace")
        for i, r in row.items():
            coords[i] = coords.get(i, 0) + c * r
    back = GradedMatrix.zero(m.n)
    for i, c in coords.items():
        if c:
            back = back + mats[i].scale(c)
    if not (back - target).is_zero():
        raise ValueError("matrix has nonzero supertrace")
    return {names[i]: c for i, c in coords.items() if c}


def tensor_coordinates(t: SuperTensor) -> Dict[Tuple[str, str], Fraction]:
    """Coordinates of an order-2 tensor in (named basis) x (named basis), mod the center."""
    n = t.n
    by_right: Dict[object, Dict[object, Fraction]] = {}
    for (a, b), c in t.project_center().items():
        by_right.setdefault(b, {})[a] = by_right.get(b, {}).get(a, 0) + c
    left_rows: Dict[str, Dict[object, Fraction]] = {}
    for b, col in by_right.items():
        for nm, c in matrix_coordinates(GradedMatrix(n, col)).items():
            left_rows.setdefault(nm, {})[b] = c
    out: Dict[Tuple[str, str], Fraction] = {}
    for nl, row in left_rows.items():
        for nr, c in matrix_coordinates(GradedMatrix(n, row)).items():
            out[(nl, nr)] = c
    return out
