"""Exact elements of the graded tensor square / cube of gl(n,n).

A term is a tuple of legs; each leg is a matrix unit ``(a, b)`` or ``None``
for the identity.  Coefficients are Fractions or SparsePolys.  Products follow
the Koszul rule (a x b)(c x d) = (-1)^{|b||c|} ac x bd.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple

from .scalars import SparsePoly, fmt_q
from .supermodel import GradedMatrix, labels, unit_parity

Leg = Optional[Tuple[int, int]]
Key = Tuple[Leg, ...]


def leg_parity(leg: Leg) -> int:
    return 0 if leg is None else unit_parity(*leg)


def key_parity(key: Key) -> int:
    return sum(leg_parity(l) for l in key) & 1


def _leg_mul(x: Leg, y: Leg) -> Tuple[bool, Leg]:
    if x is None:
        return True, y
    if y is None:
        return True, x
    if x[1] != y[0]:
        return False, None
    return True, (x[0], y[1])


def _koszul(kx: Key, ky: Key) -> int:
    s = 0
    for i in range(1, len(kx)):
        pi = leg_parity(kx[i])
        if pi:
            for j in range(i):
                s += leg_parity(ky[j])
    return -1 if s & 1 else 1


def _is_zero(c) -> bool:
    return not c


class SuperTensor:
    """Sparse element of gl(n,n)^{(x) order}."""

    __slots__ = ("n", "order", "_t")

    def __init__(self, n: int, order: int, terms: Optional[Dict[Key, object]] = None):
        self.n = n
        self.order = order
        t: Dict[Key, object] = {}
        if terms:
            for k, c in terms.items():
                if not _is_zero(c):
                    if len(k) != order:
                        raise ValueError("leg count mismatch")
                    t[k] = c
        self._t = t

    # construction
    @classmethod
    def zero(cls, n: int, order: int) -> "SuperTensor":
        return cls(n, order)

    @classmethod
    def unit(cls, n: int, order: int, coeff=1) -> "SuperTensor":
        return cls(n, order, {(None,) * order: Fraction(coeff) if not isinstance(coeff, SparsePoly) else coeff})

    @classmethod
    def pure(cls, *mats: Optional[GradedMatrix], coeff=1) -> "SuperTensor":
        """mats[0] (x) mats[1] (x) ...; ``None`` stands for the identity."""
        n = next(m.n for m in mats if m is not None)
        terms: Dict[Key, object] = {(): coeff}
        for m in mats:
            nxt: Dict[Key, object] = {}
            items = [(None, Fraction(1))] if m is None else list(m.items())
            for k, c in terms.items():
                for leg, d in items:
                    nk = k + (leg,)
                    nxt[nk] = nxt.get(nk, 0) + c * d
            terms = nxt
        return cls(n, len(mats), terms)

    @property
    def terms(self) -> Dict[Key, object]:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def __len__(self) -> int:
        return len(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SuperTensor)
            and self.order == other.order
            and self.expand_identity()._t == other.expand_identity()._t
        )

    def __hash__(self):
        raise TypeError("SuperTensor is not hashable")

    # linear structure
    def __add__(self, other: "SuperTensor") -> "SuperTensor":
        if self.order != other.order:
            raise ValueError("order mismatch")
        out = dict(self._t)
        for k, c in other._t.items():
            if k in out:
                s = out[k] + c
                if _is_zero(s):
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = c
        return SuperTensor(self.n, self.order, out)

    def __neg__(self) -> "SuperTensor":
        return SuperTensor(self.n, self.order, {k: -c for k, c in self._t.items()})

    def __sub__(self, other: "SuperTensor") -> "SuperTensor":
        return self + (-other)

    def scale(self, c) -> "SuperTensor":
        if _is_zero(c):
            return SuperTensor(self.n, self.order)
        if isinstance(c, SparsePoly):
            return SuperTensor(self.n, self.order, {k: c * v for k, v in self._t.items()})
        return SuperTensor(self.n, self.order, {k: v * c for k, v in self._t.items()})

    def __rmul__(self, c) -> "SuperTensor":
        return self.scale(c)

    def map_coefficients(self, fn: Callable) -> "SuperTensor":
        return SuperTensor(self.n, self.order, {k: fn(c) for k, c in self._t.items()})

    # products
    def __mul__(self, other: "SuperTensor") -> "SuperTensor":
        return tensor_mul(self, other)

    def parity_parts(self) -> Dict[int, "SuperTensor"]:
        parts: Dict[int, Dict[Key, object]] = {0: {}, 1: {}}
        for k, c in self._t.items():
            parts[key_parity(k)][k] = c
        return {p: SuperTensor(self.n, self.order, d) for p, d in parts.items() if d}

    # normal forms
    def expand_identity(self) -> "SuperTensor":
        """Replace identity legs by sum_a E[a,a] so equal tensors have equal term maps."""
        if all(l is not None for k in self._t for l in k):
            return self
        diag = [(a, a) for a in labels(self.n)]
        out: Dict[Key, object] = {}
        for k, c in self._t.items():
            partial = [()]
            for leg in k:
                opts = diag if leg is None else [leg]
                partial = [p + (o,) for p in partial for o in opts]
            for nk in partial:
                if nk in out:
                    s = out[nk] + c
                    if _is_zero(s):
                        del out[nk]
                    else:
                        out[nk] = s
                else:
                    out[nk] = c
        return SuperTensor(self.n, self.order, out)

    def project_center(self) -> "SuperTensor":
        """Apply the center-killing section on every leg (equality in A(n-1,n-1)^{(x)k})."""
        t = self.expand_identity()
        diag = [(a, a) for a in labels(self.n)]
        half = Fraction(1, 2)

        def leg_images(leg):
            out = [(leg, Fraction(1))]
            if leg[0] == leg[1] and abs(leg[0]) == 1:
                out.extend((d, -half) for d in diag)
            return out

        acc: Dict[Key, object] = {}
        for k, c in t._t.items():
            partial = [((), Fraction(1))]
            for leg in k:
                partial = [(p + (l,), f * g) for p, f in partial for l, g in leg_images(leg)]
            for nk, f in partial:
                v = c * f
                if nk in acc:
                    s = acc[nk] + v
                    if _is_zero(s):
                        del acc[nk]
                    else:
                        acc[nk] = s
                else:
                    acc[nk] = v
        return SuperTensor(self.n, self.order, acc)

    def equal_mod_center(self, other: "SuperTensor") -> bool:
        return (self - other).project_center().is_zero()

    def is_zero_mod_center(self) -> bool:
        return self.project_center().is_zero()

    def apply_legs(self, fns: Sequence[Optional[Callable[[Leg], Tuple[Leg, int]]]]) -> "SuperTensor":
        """Apply a per-leg monomial map ``leg -> (leg', sign)``."""
        out: Dict[Key, object] = {}
        for k, c in self._t.items():
            nk = []
            sign = 1
            for leg, fn in zip(k, fns):
                if fn is None or leg is None:
                    nk.append(leg)
                else:
                    l2, s = fn(leg)
                    nk.append(l2)
                    sign *= s
            nk = tuple(nk)
            v = c if sign > 0 else -c
            if nk in out:
                s2 = out[nk] + v
                if _is_zero(s2):
                    del out[nk]
                else:
                    out[nk] = s2
            else:
                out[nk] = v
        return SuperTensor(self.n, self.order, out)

    def to_json(self):
        rows = []
        for k, c in sorted(self._t.items(), key=lambda kv: repr(kv[0])):
            legs = ["1" if l is None else f"E[{l[0]},{l[1]}]" for l in k]
            rows.append({"legs": legs, "coeff": c.to_str() if isinstance(c, SparsePoly) else fmt_q(c)})
        return rows

    def __repr__(self) -> str:
        return f"SuperTensor(order={self.order}, terms={len(self._t)})"


def _row_signature(key: Key) -> Tuple:
    return tuple(None if l is None else l[0] for l in key)


def _col_signature(key: Key) -> Tuple:
    return tuple(None if l is None else l[1] for l in key)


def tensor_mul(x: SuperTensor, y: SuperTensor) -> SuperTensor:
    if x.order != y.order:
        raise ValueError("order mismatch")
    # group the right factor by the row labels of its legs so each left term
    # only meets the terms it can compose with
    groups: Dict[Tuple, list] = {}
    for ky, cy in y.items():
        groups.setdefault(_row_signature(ky), []).append((ky, cy))
    matching: Dict[Tuple, list] = {}
    out: Dict[Key, object] = {}
    for kx, cx in x.items():
        cols = _col_signature(kx)
        cand = matching.get(cols)
        if cand is None:
            cand = [
                g
                for sig, g in groups.items()
                if all(c is None or r is None or c == r for c, r in zip(cols, sig))
            ]
            matching[cols] = cand
        for g in cand:
            for ky, cy in g:
                k = tuple(_leg_mul(lx, ly)[1] for lx, ly in zip(kx, ky))
                v = cx * cy
                if _koszul(kx, ky) < 0:
                    v = -v
                if k in out:
                    s = out[k] + v
                    if _is_zero(s):
                        del out[k]
                    else:
                        out[k] = s
                else:
                    out[k] = v
    return SuperTensor(x.n, x.order, out)


def tensor_commutator(x: SuperTensor, y: SuperTensor) -> SuperTensor:
    """Supercommutator computed per homogeneous component."""
    out = SuperTensor.zero(x.n, x.order)
    for p, xp in x.parity_parts().items():
        for q, yq in y.parity_parts().items():
            a = tensor_mul(xp, yq)
            b = tensor_mul(yq, xp)
            out = out + (a + b if p and q else a - b)
    return out


def superflip(x: SuperTensor) -> SuperTensor:
    if x.order != 2:
        raise ValueError("superflip needs an order-2 tensor")
    out: Dict[Key, object] = {}
    for (a, b), c in x.items():
        v = -c if leg_parity(a) and leg_parity(b) else c
        k = (b, a)
        if k in out:
            s = out[k] + v
            if _is_zero(s):
                del out[k]
            else:
                out[k] = s
        else:
            out[k] = v
    return SuperTensor(x.n, 2, out)


def embed(x: SuperTensor, legs: str) -> SuperTensor:
    """Place an order-2 tensor into legs '12', '13' or '23' of the cube."""
    if x.order != 2:
        raise ValueError("embed needs an order-2 tensor")
    i, j = int(legs[0]) - 1, int(legs[1]) - 1
    if not (0 <= i < j <= 2):
        raise ValueError(f"bad leg pair {legs!r}")
    out: Dict[Key, object] = {}
    for (a, b), c in x.items():
        k = [None, None, None]
        k[i], k[j] = a, b
        out[tuple(k)] = c
    return SuperTensor(x.n, 3, out)


def sigma_leg(leg: Leg) -> Tuple[Leg, int]:
    return (-leg[0], -leg[1]), 1


def apply_sigma(x: SuperTensor, legs: Iterable[int]) -> SuperTensor:
    """Apply sigma on the given (0-based) legs."""
    chosen = set(legs)
    return x.apply_legs([sigma_leg if i in chosen else None for i in range(x.order)])


def left(m: GradedMatrix) -> SuperTensor:
    """m (x) 1."""
    return SuperTensor.pure(m, None)


def right(m: GradedMatrix) -> SuperTensor:
    """1 (x) m."""
    return SuperTensor.pure(None, m)
