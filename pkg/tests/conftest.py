"""Shared map generators and the acceptance report hook.

Generators draw from a caller-owned random.Random so every test pins its own
seed; redraw loops are capped so a bad seed fails loudly instead of hanging.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from capax import (
    GaussianRational,
    GraphMap,
    Polynomial,
    is_generic,
    is_regular,
)
from capax.polynomials import Monomial

REDRAW_CAP = 400


def exact_coeff(rng: random.Random, lo: int = -4, hi: int = 4, dens=(1, 1, 2, 3)) -> GaussianRational:
    return GaussianRational(Fraction(rng.randint(lo, hi), rng.choice(dens)))


def random_z_poly(rng: random.Random, d: int, homogeneous: bool = False) -> Polynomial:
    """Exact z-polynomial of degree exactly d with small rational coefficients."""
    terms = {}
    for b1 in range(d + 1):
        for b2 in range(d + 1 - b1):
            if homogeneous and b1 + b2 != d:
                continue
            c = exact_coeff(rng)
            if c:
                terms[Monomial(0, 0, b1, b2)] = c
    p = Polynomial(terms, "exact")
    if p.is_zero() or p.degree() != d:
        return random_z_poly(rng, d, homogeneous)
    return p


def random_regular_map(rng: random.Random, d: int) -> GraphMap:
    for _ in range(REDRAW_CAP):
        f = GraphMap(random_z_poly(rng, d), random_z_poly(rng, d))
        if is_regular(f):
            return f
    raise AssertionError("no regular map found within the redraw cap")


def _z2_power_minor(f: GraphMap) -> GaussianRational:
    # d=2 only: a2*b1 - a1*b2 of the top forms.  When this vanishes the pencil
    # of top forms contains a pure z2^2 multiple and no z2 power certifies z1^2.
    a2 = f.f1.coefficient(Monomial(0, 0, 2, 0))
    a1 = f.f1.coefficient(Monomial(0, 0, 1, 1))
    b2 = f.f2.coefficient(Monomial(0, 0, 2, 0))
    b1 = f.f2.coefficient(Monomial(0, 0, 1, 1))
    return a2 * b1 - a1 * b2


def random_generic_map(rng: random.Random, d: int) -> GraphMap:
    """Random exact map, generic in the full sense: the staircase is the
    generic one and (for d=2) the z2-power pencil minor is nonzero."""
    for _ in range(REDRAW_CAP):
        f = GraphMap(random_z_poly(rng, d), random_z_poly(rng, d))
        try:
            if not (is_regular(f) and is_generic(f)):
                continue
        except Exception:
            continue
        if d == 2 and not _z2_power_minor(f):
            continue
        return f
    raise AssertionError("no generic map found within the redraw cap")


def random_float_form_pair(rng: random.Random, d: int) -> GraphMap:
    """Homogeneous float pair, |coeff| <= 10, both extreme coefficients > 0.1
    in magnitude so the root-product oracle is well posed."""

    def coeff(minimum: float) -> complex:
        r = rng.uniform(minimum, 10.0)
        phi = rng.uniform(0.0, 2.0 * math.pi)
        return complex(r * math.cos(phi), r * math.sin(phi))

    def form() -> Polynomial:
        terms = {}
        for j in range(d + 1):
            minimum = 0.1 if j in (0, d) else 0.0
            terms[Monomial(0, 0, d - j, j)] = coeff(minimum)
        return Polynomial(terms, "float")

    return GraphMap(form(), form())


# ---------------------------------------------------------------------------
# acceptance reporting

ACCEPTANCE_LINES: list[tuple[int, str]] = []


def record(num: int, name: str, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE {num:02d} {name}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES.append((num, line))
    print(line)


def pytest_terminal_summary(terminalreporter) -> None:
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
