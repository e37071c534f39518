"""Compact sets as point samples: meshes, fibers, and graph lifts.

A SampledSet carries points in the w-coordinates and, when it came from a
graph lift, the matching z-coordinates on {w = f(z)}.  Estimators downstream
only ever see these arrays.

Fiber solving is numerical: eliminate z1 through a Sylvester determinant
interpolated on a circle, read eliminant roots from the companion matrix,
back-substitute, then polish with Newton and certify residuals.
"""

from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import FiberError, MeshError
from .parsing import format_poly
from .polynomials import Polynomial
from .variety import GraphMap

DUPLICATE_TOL = 1e-12
FIBER_RESIDUAL_TOL = 1e-9
NEAR_DISCRIMINANT_TOL = 1e-6
ROOT_DEDUPE_TOL = 1e-8


@dataclass(frozen=True)
class SetSpec:
    kind: str
    params: tuple
    source: str

    @staticmethod
    def parse(text: str) -> "SetSpec":
        """Forms: torus:r1,r2  polydisc:r1,r2  box:a,b,c,d  points:path.csv"""
        kind, sep, rest = text.partition(":")
        if not sep:
            raise MeshError(f"set spec {text!r} has no parameters")
        kind = kind.strip().lower()
        if kind in ("torus", "polydisc"):
            parts = [p.strip() for p in rest.split(",")]
            if len(parts) != 2:
                raise MeshError(f"{kind} spec wants two radii")
            radii = tuple(float(p) for p in parts)
            if any(r <= 0 for r in radii):
                raise MeshError("radii must be positive")
            return SetSpec(kind, radii, text)
        if kind == "box":
            parts = [p.strip() for p in rest.split(",")]
            if len(parts) != 4:
                raise MeshError("box spec wants four reals a,b,c,d")
            a, b, c, d = (float(p) for p in parts)
            if b < a or d < c:
                raise MeshError("box intervals must be ordered")
            return SetSpec(kind, (a, b, c, d), text)
        if kind == "points":
            return SetSpec(kind, (rest.strip(),), text)
        raise MeshError(f"unknown set kind {kind!r}")


@dataclass
class SampledSet:
    w: np.ndarray
    z: Optional[np.ndarray] = None
    provenance: str = "mesh"
    spec: Optional[SetSpec] = None
    map: Optional[GraphMap] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.w = np.asarray(self.w, dtype=complex)
        if self.w.ndim != 2 or self.w.shape[1] != 2:
            raise MeshError("w points must form an (N, 2) array")
        if len(self.w) == 0:
            raise MeshError("empty point set")
        if self.z is not None:
            self.z = np.asarray(self.z, dtype=complex)
            if self.z.shape != self.w.shape:
                raise MeshError("z points must align with w points")
        coords = self.z if self.z is not None else self.w
        scale = max(1.0, float(np.abs(coords).max()))
        rounded = np.round(coords / (DUPLICATE_TOL * scale))
        seen = {(int(a.real), int(a.imag), int(b.real), int(b.imag)) for a, b in rounded}
        if len(seen) != len(coords):
            raise MeshError("duplicate points in the sample (closer than 1e-12)")

    def __len__(self) -> int:
        return len(self.w)

    @property
    def mesh_id(self) -> str:
        h = hashlib.md5()
        h.update(self.provenance.encode())
        if self.spec is not None:
            h.update(self.spec.source.encode())
        if self.map is not None:
            h.update(format_poly(self.map.f1).encode())
            h.update(format_poly(self.map.f2).encode())
        h.update(str(len(self.w)).encode())
        return h.hexdigest()[:12]


def _mesh_counts(counts) -> tuple[int, int]:
    if isinstance(counts, int):
        return counts, counts
    c = tuple(int(x) for x in counts)
    if len(c) != 2:
        raise MeshError("mesh counts: one integer or a pair")
    return c


def build_mesh(spec: SetSpec | str, counts) -> SampledSet:
    """Deterministic sample of a set spec; counts = points per coordinate.

    Non-degenerate coordinates need at least 4 points; a collapsed box
    interval [c, c] takes exactly one.
    """
    if isinstance(spec, str):
        spec = SetSpec.parse(spec)
    n1, n2 = _mesh_counts(counts)
    if spec.kind == "points":
        path = spec.params[0]
        rows = []
        with open(path, newline="") as fh:
            for rec in csv.reader(fh):
                if not rec or rec[0].lstrip().startswith("#"):
                    continue
                vals = [float(x) for x in rec]
                if len(vals) != 4:
                    raise MeshError("points file rows are re1,im1,re2,im2")
                rows.append([complex(vals[0], vals[1]), complex(vals[2], vals[3])])
        if not rows:
            raise MeshError(f"no points in {path}")
        return SampledSet(w=np.array(rows), provenance="points", spec=spec)

    if spec.kind == "torus":
        r1, r2 = spec.params
        if n1 < 4 or n2 < 4:
            raise MeshError("torus meshes need at least 4 points per circle")
        t1 = r1 * np.exp(2j * np.pi * np.arange(n1) / n1)
        t2 = r2 * np.exp(2j * np.pi * np.arange(n2) / n2)
        w = np.array([[a, b] for a in t1 for b in t2])
        return SampledSet(w=w, provenance="mesh", spec=spec)

    if spec.kind == "polydisc":
        r1, r2 = spec.params
        if n1 < 4 or n2 < 4:
            raise MeshError("polydisc meshes need at least 4 points per disc")

        def disc(r: float, n: int) -> np.ndarray:
            # sunflower layout, outermost point on the boundary circle
            k = np.arange(n)
            rho = r * np.sqrt((k + 1) / n)
            golden = math.pi * (3 - math.sqrt(5))
            return rho * np.exp(1j * golden * k)

        d1, d2 = disc(r1, n1), disc(r2, n2)
        w = np.array([[a, b] for a in d1 for b in d2])
        return SampledSet(w=w, provenance="mesh", spec=spec)

    if spec.kind == "box":
        a, b, c, d = spec.params

        def seg(lo: float, hi: float, n: int) -> np.ndarray:
            if lo == hi:
                if n != 1:
                    raise MeshError("a collapsed interval takes exactly 1 point")
                return np.array([lo])
            if n < 4:
                raise MeshError("box meshes need at least 4 points per interval")
            return np.linspace(lo, hi, n)

        s1, s2 = seg(a, b, n1), seg(c, d, n2)
        w = np.array([[x, y] for x in s1 for y in s2], dtype=complex)
        return SampledSet(w=w, provenance="mesh", spec=spec)

    raise MeshError(f"unknown set kind {spec.kind!r}")


# ---------------------------------------------------------------------------
# fibers


@dataclass
class FiberResult:
    z: np.ndarray
    residuals: np.ndarray
    near_discriminant: bool
    defect: int


def _poly_coeff_grid(p: Polynomial) -> np.ndarray:
    """Coefficients of a z-polynomial as a (deg_z1 + 1, deg_z2 + 1) array."""
    n1 = max((m.b1 for m in p.terms), default=0)
    n2 = max((m.b2 for m in p.terms), default=0)
    grid = np.zeros((n1 + 1, n2 + 1), dtype=complex)
    for m, c in p.terms.items():
        grid[m.b1, m.b2] = c
    return grid


def _eval_z2(grid: np.ndarray, value: complex) -> np.ndarray:
    """Coefficients in z1 after fixing z2 = value."""
    powers = value ** np.arange(grid.shape[1])
    return grid @ powers


def _trim(coeffs: np.ndarray, rel: float = 1e-10) -> np.ndarray:
    mags = np.abs(coeffs)
    top = mags.max()
    if top == 0:
        return coeffs[:1] * 0
    keep = len(coeffs)
    while keep > 1 and mags[keep - 1] <= rel * top:
        keep -= 1
    return coeffs[:keep]


def _sylvester_det_samples(g1: np.ndarray, g2: np.ndarray, samples: np.ndarray) -> np.ndarray:
    """det of the z1-Sylvester matrix of g1, g2 at each z2 sample."""
    n1, n2 = g1.shape[0] - 1, g2.shape[0] - 1
    size = n1 + n2
    out = np.empty(len(samples), dtype=complex)
    mats = np.zeros((len(samples), size, size), dtype=complex)
    a = np.array([_eval_z2(g1, s) for s in samples])
    b = np.array([_eval_z2(g2, s) for s in samples])
    for i in range(n2):
        for j in range(n1 + 1):
            mats[:, i, i + j] = a[:, n1 - j]
    for i in range(n1):
        for j in range(n2 + 1):
            mats[:, n2 + i, i + j] = b[:, n2 - j]
    out[:] = np.linalg.det(mats)
    return out


def _cluster_values(values: np.ndarray, tol: float) -> list[complex]:
    reps: list[complex] = []
    for v in values:
        for r in reps:
            if abs(v - r) <= tol * (1 + abs(r)):
                break
        else:
            reps.append(complex(v))
    return reps


def fiber(f: GraphMap, w: Sequence[complex]) -> FiberResult:
    """All solutions of f(z) = w, polished and certified.

    Residual acceptance is 1e-9 relative to the coefficient scale; closer
    root pairs than 1e-6 or a count below d1*d2 raise the near-discriminant
    flag (not an error).
    """
    g = f.to_float()
    w1, w2 = complex(w[0]), complex(w[1])
    g1 = _poly_coeff_grid(g.f1 - Polynomial.constant(w1, "float"))
    g2 = _poly_coeff_grid(g.f2 - Polynomial.constant(w2, "float"))
    coeff_scale = max(
        1.0,
        float(np.abs(g1).max()),
        float(np.abs(g2).max()),
    )
    n1 = g1.shape[0] - 1
    n2 = g2.shape[0] - 1
    expected = g.d1 * g.d2

    # eliminate z1; fall back to whichever component still involves it
    if n1 == 0 and n2 == 0:
        raise FiberError("neither component depends on z1; fiber is not finite")
    if n1 == 0 or n2 == 0:
        # one equation is z2-only: its roots give z2, the other solves z1
        only, other = (g1, g2) if n1 == 0 else (g2, g1)
        elim = _trim(only[0])
        if len(elim) == 1:
            raise FiberError("degenerate fiber: a component reduced to a constant")
        z2_candidates = _cluster_values(np.roots(elim[::-1]), ROOT_DEDUPE_TOL)
    else:
        degree_cap = n2 * g.d1 + n1 * g.d2 + 2  # det degree bound over z2
        m_samples = 1 << max(4, math.ceil(math.log2(2 * degree_cap)))
        samples = np.exp(2j * np.pi * np.arange(m_samples) / m_samples)
        dets = _sylvester_det_samples(g1, g2, samples)
        # samples run counterclockwise, so the forward transform reads off
        # the coefficients; ifft would hand them back reversed
        coeffs = np.fft.fft(dets) / m_samples
        elim = _trim(coeffs, 1e-11)
        if np.abs(elim).max() <= 1e-300:
            raise FiberError("eliminant vanished; the fiber is positive-dimensional here")
        z2_candidates = _cluster_values(np.roots(elim[::-1]), ROOT_DEDUPE_TOL)

    d11 = g.f1.derivative("z1").to_float()
    d12 = g.f1.derivative("z2").to_float()
    d21 = g.f2.derivative("z1").to_float()
    d22 = g.f2.derivative("z2").to_float()

    def eval_pair(z1: complex, z2: complex) -> tuple[complex, complex]:
        v1 = g.f1.evaluate((0, 0), (z1, z2)) - w1
        v2 = g.f2.evaluate((0, 0), (z1, z2)) - w2
        return v1, v2

    roots: list[tuple[complex, complex]] = []
    residuals: list[float] = []
    for z2c in z2_candidates:
        # z1 candidates from whichever component keeps z1-degree at this z2
        a_c = _trim(_eval_z2(g1, z2c)) if n1 > 0 else np.zeros(1, dtype=complex)
        if len(a_c) == 1 and n2 > 0:
            a_c = _trim(_eval_z2(g2, z2c))
        if len(a_c) == 1:
            continue
        for z1c in np.roots(a_c[::-1]):
            z1v, z2v = complex(z1c), complex(z2c)
            # Newton polish on the full system
            for _ in range(50):
                v1, v2 = eval_pair(z1v, z2v)
                j11 = d11.evaluate((0, 0), (z1v, z2v))
                j12 = d12.evaluate((0, 0), (z1v, z2v))
                j21 = d21.evaluate((0, 0), (z1v, z2v))
                j22 = d22.evaluate((0, 0), (z1v, z2v))
                det = j11 * j22 - j12 * j21
                if abs(det) < 1e-14:
                    break
                dz1 = (v1 * j22 - v2 * j12) / det
                dz2 = (v2 * j11 - v1 * j21) / det
                z1v -= dz1
                z2v -= dz2
                if abs(dz1) + abs(dz2) < 1e-15 * (1 + abs(z1v) + abs(z2v)):
                    break
            v1, v2 = eval_pair(z1v, z2v)
            local = max(1.0, abs(z1v), abs(z2v)) ** g.d1
            res = max(abs(v1), abs(v2)) / (coeff_scale * local)
            if res > FIBER_RESIDUAL_TOL:
                continue
            for zr1, zr2 in roots:
                if (
                    abs(zr1 - z1v) + abs(zr2 - z2v)
                    <= ROOT_DEDUPE_TOL * (1 + abs(zr1) + abs(zr2))
                ):
                    break
            else:
                roots.append((z1v, z2v))
                residuals.append(res)
    if not roots:
        raise FiberError(f"no certified roots for w = ({w1}, {w2})")
    arr = np.array(roots)
    near = len(roots) < expected
    if not near and len(roots) > 1:
        sep = min(
            abs(arr[i, 0] - arr[j, 0]) + abs(arr[i, 1] - arr[j, 1])
            for i in range(len(arr))
            for j in range(i + 1, len(arr))
        )
        near = sep < NEAR_DISCRIMINANT_TOL
    return FiberResult(
        z=arr,
        residuals=np.array(residuals),
        near_discriminant=bool(near),
        defect=expected - len(roots),
    )


def graph_lift(f: GraphMap, base: SampledSet) -> SampledSet:
    """f^{-1}(K) as a sampled set with both coordinate charts attached."""
    zs = []
    ws = []
    flagged = 0
    for w1, w2 in base.w:
        result = fiber(f, (w1, w2))
        if result.near_discriminant:
            flagged += 1
        for z1, z2 in result.z:
            zs.append([z1, z2])
            ws.append([w1, w2])
    return SampledSet(
        w=np.array(ws),
        z=np.array(zs),
        provenance="graph_lift",
        spec=base.spec,
        map=f,
        meta={
            "base_size": len(base),
            "near_discriminant_fibers": flagged,
        },
    )


# ---------------------------------------------------------------------------
# fiber averages


def fiber_average_poly(
    p: Polynomial,
    f: GraphMap,
    deg_bound: int,
    seed: int = 0,
) -> tuple[Polynomial, float]:
    """Least-squares model of w -> average of p over the fiber f^{-1}(w).

    The average of a polynomial over fibers is again a polynomial in w; fit it
    on an oversampled random grid and report the worst fit residual.  Grid
    points whose fibers sit near the discriminant are redrawn, at most five
    times each.
    """
    if deg_bound < 0:
        raise ValueError("deg_bound must be >= 0")
    pf = p.to_float()
    dim = (deg_bound + 1) * (deg_bound + 2) // 2
    count = 2 * dim
    rng = np.random.default_rng(seed)

    def draw() -> tuple[complex, complex]:
        rho = 1.5 * np.sqrt(rng.uniform(size=2))
        ang = rng.uniform(0, 2 * np.pi, size=2)
        return (
            complex(rho[0] * np.cos(ang[0]), rho[0] * np.sin(ang[0])),
            complex(rho[1] * np.cos(ang[1]), rho[1] * np.sin(ang[1])),
        )

    points = []
    values = []
    for _ in range(count):
        for _attempt in range(5):
            w = draw()
            try:
                fib = fiber(f, w)
            except FiberError:
                continue
            if fib.near_discriminant:
                continue
            vals = [pf.evaluate((w[0], w[1]), (z1, z2)) for z1, z2 in fib.z]
            points.append(w)
            values.append(sum(vals) / len(vals))
            break
        else:
            raise FiberError("could not draw a clean fiber grid in five attempts")

    monomials = [
        (a1, a2)
        for total in range(deg_bound + 1)
        for a1 in range(total, -1, -1)
        for a2 in (total - a1,)
    ]
    a_mat = np.empty((count, len(monomials)), dtype=complex)
    for i, (w1, w2) in enumerate(points):
        for j, (a1, a2) in enumerate(monomials):
            a_mat[i, j] = w1 ** a1 * w2 ** a2
    b_vec = np.array(values, dtype=complex)
    coeffs, *_ = np.linalg.lstsq(a_mat, b_vec, rcond=None)
    residual = float(np.abs(a_mat @ coeffs - b_vec).max())
    terms = {}
    for (a1, a2), c in zip(monomials, coeffs):
        if abs(c) > 0:
            terms[(a1, a2, 0, 0)] = complex(c)
    return Polynomial(terms, "float"), residual
