"""Exact scalars: rationals, sparse polynomials in (u, v, w, hbar), Laurent polynomials in u.

Rationals are :class:`fractions.Fraction`.  Polynomials are immutable maps from
exponent 4-tuples to nonzero Fractions; the canonical term order is graded
lexicographic with ``u < v < w < hbar``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple, Union

VARS = ("u", "v", "w", "ħ")
NVARS = len(VARS)
_INDEX = {"u": 0, "v": 1, "w": 2, "ħ": 3, "hbar": 3, "h": 3}

Exp = Tuple[int, int, int, int]
Scalar = Union[int, Fraction]

ZERO_EXP: Exp = (0, 0, 0, 0)


class NotDivisible(ArithmeticError):
    """Raised by :func:`divide_exact` when the divisor leaves a remainder."""


def fmt_q(x: Scalar) -> str:
    """Canonical ``p/q`` rendering (``1/1`` for one)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_q(s: str) -> Fraction:
    return Fraction(s)


def term_key(e: Exp):
    # graded lex, hbar is the most significant variable
    return (sum(e), e[3], e[2], e[1], e[0])


class SparsePoly:
    """Immutable sparse polynomial over Q in the variables u, v, w, ħ."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exp, Scalar] | None = None):
        clean: Dict[Exp, Fraction] = {}
        if terms:
            for e, c in terms.items():
                if c:
                    clean[tuple(e)] = Fraction(c)
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def const(cls, c: Scalar) -> "SparsePoly":
        return cls({ZERO_EXP: c})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "SparsePoly":
        e = [0] * NVARS
        e[_INDEX[name]] = power
        return cls({tuple(e): 1})

    @classmethod
    def coerce(cls, x) -> "SparsePoly":
        if isinstance(x, SparsePoly):
            return x
        return cls.const(x)

    @property
    def terms(self) -> Dict[Exp, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, SparsePoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == SparsePoly.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # ring operations
    def __add__(self, other):
        other = SparsePoly.coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return SparsePoly(out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-SparsePoly.coerce(other))

    def __rsub__(self, other):
        return SparsePoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return SparsePoly()
            return SparsePoly({e: c * other for e, c in self._terms.items()})
        if not isinstance(other, SparsePoly):
            return NotImplemented
        out: Dict[Exp, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return SparsePoly(out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        out = SparsePoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    # structure
    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda t: term_key(t[0]), reverse=True)

    def leading(self) -> Tuple[Exp, Fraction]:
        return max(self._terms.items(), key=lambda t: term_key(t[0]))

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def is_homogeneous(self, variables: Iterable[int] = (0, 1, 2)) -> bool:
        idx = tuple(variables)
        degs = {sum(e[i] for i in idx) for e in self._terms}
        return len(degs) <= 1

    def degree_in(self, variables: Iterable[int] = (0, 1, 2)) -> int:
        idx = tuple(variables)
        return max((sum(e[i] for i in idx) for e in self._terms), default=-1)

    def constant(self) -> Fraction:
        return self._terms.get(ZERO_EXP, Fraction(0))

    def substitute(self, mapping: Mapping[int, Tuple[int, int]]) -> "SparsePoly":
        """Monomial substitution ``x_i -> sign * x_j``, applied simultaneously.

        ``mapping`` sends a variable index to ``(target_index, sign)``; unmapped
        variables stay put.
        """
        out: Dict[Exp, Fraction] = {}
        for e, c in self._terms.items():
            ne = [0] * NVARS
            sign = 1
            for i, p in enumerate(e):
                if not p:
                    continue
                j, s = mapping.get(i, (i, 1))
                ne[j] += p
                if s < 0 and p % 2:
                    sign = -sign
            ne = tuple(ne)
            val = out.get(ne, 0) + sign * c
            if val:
                out[ne] = val
            else:
                out.pop(ne, None)
        return SparsePoly(out)

    def at_hbar(self, value: Scalar) -> "SparsePoly":
        out = SparsePoly()
        for e, c in self._terms.items():
            out = out + SparsePoly({(e[0], e[1], e[2], 0): c * Fraction(value) ** e[3]})
        return out

    def coefficient_in_hbar(self, k: int) -> "SparsePoly":
        return SparsePoly({(e[0], e[1], e[2], 0): c for e, c in self._terms.items() if e[3] == k})

    def to_str(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = " ".join(f"{VARS[i]}^{p}" for i, p in enumerate(e) if p)
            parts.append(f"{fmt_q(c)} * {mono}" if mono else fmt_q(c))
        return " + ".join(parts)

    __str__ = to_str

    def __repr__(self) -> str:
        return f"SparsePoly({self.to_str()!r})"


def poly(expr: str) -> SparsePoly:
    """Small convenience parser for tests: ``poly("u^2 - 2*u*v + 1/2*w")``."""
    import re

    expr = expr.replace(" ", "").replace("-", "+-")
    out = SparsePoly()
    for chunk in filter(None, expr.split("+")):
        coef = Fraction(1)
        e = [0] * NVARS
        for factor in chunk.split("*"):
            if factor == "-":
                coef = -coef
                continue
            neg = factor.startswith("-")
            if neg:
                coef = -coef
                factor = factor[1:]
            m = re.fullmatch(r"(u|v|w|ħ|hbar)(?:\^(\d+))?", factor)
            if m:
                e[_INDEX[m.group(1)]] += int(m.group(2) or 1)
            elif factor:
                coef *= Fraction(factor)
        out = out + SparsePoly({tuple(e): coef})
    return out


def poly_arith(a: SparsePoly, b: SparsePoly, op: str) -> SparsePoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def divide_exact(num: SparsePoly, den: SparsePoly) -> SparsePoly:
    """Multivariate exact division; raises :class:`NotDivisible` on a remainder."""
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    le, lc = den.leading()
    rem = num
    quot: Dict[Exp, Fraction] = {}
    while not rem.is_zero():
        e, c = rem.leading()
        if not all(x >= y for x, y in zip(e, le)):
            raise NotDivisible(f"({num}) / ({den}) leaves remainder")
        qe = tuple(x - y for x, y in zip(e, le))
        qc = c / lc
        quot[qe] = quot.get(qe, 0) + qc
        rem = rem - SparsePoly({qe: qc}) * den
    return SparsePoly(quot)


class LaurentPoly:
    """Finite Laurent polynomial in u; coefficients may be any additive ring element."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, object] | None = None):
        self._terms = {}
        if terms:
            for k, c in terms.items():
                if c:
                    self._terms[int(k)] = c

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, k: int):
        return self._terms.get(k, 0)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out[k] + c if k in out else c
        return LaurentPoly(out)

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            out: dict = {}
            for k1, c1 in self._terms.items():
                for k2, c2 in other._terms.items():
                    k = k1 + k2
                    p = c1 * c2
                    out[k] = out[k] + p if k in out else p
            return LaurentPoly(out)
        return LaurentPoly({k: c * other for k, c in self._terms.items()})

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly({e + k: c for e, c in self._terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self._terms == other._terms

    def __repr__(self) -> str:
        return f"LaurentPoly({self._terms!r})"


def residue(f: LaurentPoly):
    """Coefficient of u^-1."""
    return f.coefficient(-1)
