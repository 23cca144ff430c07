from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import pytest
import sympy as sp
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

import oracle  # noqa: E402
from qyangian.scalars import SparsePoly  # noqa: E402
from qyangian.supermodel import GradedMatrix, labels, unit_parity  # noqa: E402

settings.register_profile("repo", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow],
                          derandomize=True)
settings.load_profile("repo")


def to_sympy(m: GradedMatrix) -> sp.Matrix:
    n = m.n
    out = sp.zeros(2 * n, 2 * n)
    for (a, b), c in m.entries.items():
        out[oracle.idx(n, a), oracle.idx(n, b)] = sp.Rational(c.numerator, c.denominator)
    return out


def from_sympy(M: sp.Matrix, n: int) -> GradedMatrix:
    entries = {}
    for a in labels(n):
        for b in labels(n):
            v = M[oracle.idx(n, a), oracle.idx(n, b)]
            if v:
                entries[(a, b)] = Fraction(int(sp.numer(v)), int(sp.denom(v)))
    return GradedMatrix(n, entries)


small_q = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))
nonzero_q = small_q.filter(bool)


@st.composite
def homogeneous_matrix(draw, n: int = 2, parity=None):
    p = draw(st.sampled_from((0, 1))) if parity is None else parity
    units = [(a, b) for a in labels(n) for b in labels(n) if unit_parity(a, b) == p]
    picked = draw(st.lists(st.sampled_from(units), min_size=1, max_size=4, unique=True))
    return GradedMatrix(n, {ab: draw(nonzero_q) for ab in picked})


@st.composite
def sparse_poly(draw, nvars: int = 3, max_terms: int = 4, max_deg: int = 3):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        e = tuple(draw(st.integers(0, max_deg)) for _ in range(nvars)) + (0,) * (4 - nvars)
        terms[e] = draw(small_q)
    return SparsePoly(terms)


# acceptance summary ------------------------------------------------------------------------

ACCEPTANCE_LINES: dict = {}


@pytest.fixture
def record_criterion():
    def rec(number: int, title: str, ok: bool, detail: str = "") -> None:
        status = "PASS" if ok else "FAIL"
        ACCEPTANCE_LINES[number] = f"criterion {number} [{status}] {title} | tolerance: exact (0) | {detail}"

    return rec


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
