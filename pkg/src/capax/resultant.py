"""Resultants of the top forms and the block structure of graph eliminations.

The resultant of the two leading forms decides regularity and enters the
pullback formula through |Res|^(-1/(2 d^2)).  Exact determinants go through
Bareiss elimination over Gaussian rationals; float determinants through
numpy's slogdet, carried as (phase, log magnitude) so nothing overflows.

block_factorization certifies the one structural fact the estimators lean on:
at weight k >= 2d - 1 the change of basis between the substituted w-bearing
block and consecutive z-monomials has determinant +-Res^(ell (ell+1) / 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import EstimateError, MapError, PrecisionError
from .exact import GaussianRational
from .polynomials import Monomial, Polynomial, z_monomial
from .variety import GraphMap


def _form_coeffs(p: Polynomial, degree: int):
    """Coefficients [c_0 .. c_degree] of a binary form, c_j on z1^j z2^(degree-j)."""
    zero = GaussianRational(0) if p.precision == "exact" else 0.0j
    out = [zero] * (degree + 1)
    for m, c in p.terms.items():
        if m.b1 + m.b2 != degree:
            raise ValueError("polynomial is not homogeneous of the expected degree")
        out[m.b1] = c
    return out


def sylvester_matrix(f: GraphMap):
    """The (d1 + d2) square Sylvester matrix of the top forms.

    Rows are z2-shifts of f1's coefficients (d2 of them) followed by z2-shifts
    of f2's (d1 of them); coefficients appear with the z1-degree descending.
    """
    a = _form_coeffs(f.f1.top_form(), f.d1)
    b = _form_coeffs(f.f2.top_form(), f.d2)
    n = f.d1 + f.d2
    zero = GaussianRational(0) if f.precision == "exact" else 0.0j
    rows = []
    for i in range(f.d2):
        row = [zero] * n
        for j in range(f.d1 + 1):
            row[i + j] = a[f.d1 - j]
        rows.append(row)
    for i in range(f.d1):
        row = [zero] * n
        for j in range(f.d2 + 1):
            row[i + j] = b[f.d2 - j]
        rows.append(row)
    return rows


def bareiss_det(matrix) -> GaussianRational:
    """Fraction-free determinant of an exact square matrix."""
    m = [list(row) for row in matrix]
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix is not square")
    if n == 0:
        return GaussianRational(1)
    sign = 1
    prev = GaussianRational(1)
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return GaussianRational(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
            m[i][k] = GaussianRational(0)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


def slog_det(matrix) -> tuple[complex, float]:
    """(phase, log|det|) of a float matrix; phase 0 means det 0."""
    arr = np.asarray(matrix, dtype=complex)
    phase, logmag = np.linalg.slogdet(arr)
    return complex(phase), float(logmag)


def resultant(f: GraphMap):
    """Res of the top forms: GaussianRational on the exact path, complex on float."""
    m = sylvester_matrix(f)
    if f.precision == "exact":
        return bareiss_det(m)
    phase, logmag = slog_det(m)
    if phase == 0:
        return 0.0j
    if logmag > 700.0:
        raise EstimateError("resultant magnitude overflows a float; use the exact path")
    return phase * math.exp(logmag)


def resultant_slog(f: GraphMap) -> tuple[complex, float]:
    """(phase, log|Res|); works at either precision."""
    r = resultant(f)
    if f.precision == "exact":
        rc = complex(r)
        if rc == 0:
            return 0.0j, float("-inf")
        return rc / abs(rc), math.log(abs(rc))
    if r == 0:
        return 0.0j, float("-inf")
    return r / abs(r), math.log(abs(r))


def resultant_root_oracle(f: GraphMap) -> complex:
    """Res via products over the roots of the dehomogenized forms.

    Independent of the Sylvester determinant: factor each form through the
    roots of c(t) = sum_j c_j t^j and use a^(d2) b^(d1) prod (t_i - s_j).
    Requires nonvanishing leading coefficients (no roots at infinity).
    """
    g = f.to_float()
    a = [complex(c) for c in _form_coeffs(g.f1.top_form(), g.d1)]
    b = [complex(c) for c in _form_coeffs(g.f2.top_form(), g.d2)]
    scale_a = max(abs(c) for c in a)
    scale_b = max(abs(c) for c in b)
    if abs(a[-1]) <= 1e-12 * scale_a or abs(b[-1]) <= 1e-12 * scale_b:
        raise EstimateError(
            "root oracle needs nonvanishing leading coefficients; "
            "use the determinant path"
        )
    ta = np.roots(a[::-1]) if g.d1 > 0 else np.array([])
    sb = np.roots(b[::-1]) if g.d2 > 0 else np.array([])
    out = a[-1] ** g.d2 * b[-1] ** g.d1
    for t in ta:
        for s in sb:
            out *= t - s
    return complex(out)


def is_regular(f: GraphMap) -> bool:
    """Whether the top forms have no common projective root."""
    if f.precision == "exact":
        return bool(resultant(f))
    a = _form_coeffs(f.f1.top_form(), f.d1)
    b = _form_coeffs(f.f2.top_form(), f.d2)
    scale = max(abs(c) for c in a) ** f.d2 * max(abs(c) for c in b) ** f.d1
    if scale == 0:
        return False
    return abs(resultant(f)) > 1e-10 * scale


# ---------------------------------------------------------------------------
# block structure


@dataclass(frozen=True)
class BlockShape:
    k: int
    ell: int
    r: int
    modified: bool
    copies: int
    rows: int


def block_shape(d: int, k: int) -> BlockShape:
    """Shape data of the weight-k elimination block.

    Decompose k - (d - 1) = ell*d + r; an even ell is lowered by one with the
    window shifted by d, keeping the row count d*(ell + 1) odd-structured.
    copies is the exponent of Res in the block determinant.
    """
    if d < 1:
        raise ValueError("need d >= 1")
    if k < 2 * d - 1:
        raise ValueError(f"blocks start at weight {2 * d - 1}")
    ell, r = divmod(k - (d - 1), d)
    modified = ell % 2 == 0
    if modified:
        ell, r = ell - 1, r + d
    return BlockShape(
        k=k,
        ell=ell,
        r=r,
        modified=modified,
        copies=ell * (ell + 1) // 2,
        rows=d * (ell + 1),
    )


def total_copies(d: int, n: int) -> int:
    """Sum of block exponents over all weights up to n*d."""
    return sum(block_shape(d, k).copies for k in range(2 * d - 1, n * d + 1))


@dataclass
class BlockReport:
    shape: BlockShape
    det: GaussianRational
    res: GaussianRational
    sign: int
    matches: bool
    row_monomials: list[Monomial]


def block_factorization(f: GraphMap, k: int) -> BlockReport:
    """Certify det(M_k) = +-Res^copies for the weight-k block of f.

    M_k expresses the substituted products fhat1^(ell-s) fhat2^s z1^(r+d-1-j) z2^j
    on the consecutive monomials z1^(k-i) z2^i, i < d*(ell+1).  Exact maps only;
    the identity is checked by exact determinant, not assumed.
    """
    if f.precision != "exact":
        raise PrecisionError("block_factorization needs an exact map")
    d = f.d
    shape = block_shape(d, k)
    fh1, fh2 = f.top_forms()
    rows = []
    labels = []
    for s in range(shape.ell + 1):
        p1 = fh1 ** (shape.ell - s)
        p2 = fh2 ** s
        base = p1 * p2
        for j in range(d):
            b1 = shape.r + d - 1 - j
            labels.append(Monomial(shape.ell - s, s, b1, j))
            rows.append(base * Polynomial({z_monomial((b1, j)): GaussianRational(1)}, "exact"))
    matrix = []
    for p in rows:
        row = [GaussianRational(0)] * shape.rows
        for m, c in p.terms.items():
            if m.b1 + m.b2 != k:
                raise MapError("block row is not homogeneous of the block weight")
            if m.b2 >= shape.rows:
                raise MapError("block row leaves the consecutive-monomial window")
            row[m.b2] = c
        matrix.append(row)
    det = bareiss_det(matrix)
    res = resultant(f)
    expected = res ** shape.copies
    if det == expected:
        sign, matches = 1, True
    elif det == -expected:
        sign, matches = -1, True
    else:
        sign, matches = 0, False
    return BlockReport(
        shape=shape,
        det=det,
        res=res,
        sign=sign,
        matches=matches,
        row_monomials=labels,
    )
