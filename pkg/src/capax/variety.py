"""The graph variety of a polynomial map and monomial bases along it.

A map f = (f1, f2) of C^2 with deg f1 >= deg f2 >= 1 has the graph variety
{w = f(z)} inside C^4.  Its coordinate ring is filtered by the weight
d|alpha| + |beta|, and a monomial basis compatible with that filtration is
obtained from the staircase of the top-form ideal: normal forms of w^a z^b
with b restricted to the staircase.

This module owns the map type, staircases, graph normal forms, the four basis
streams used by the diameter estimators, the pure-w reduction certificates,
and the exact independence check for substituted basis monomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .errors import (
    DegreeOverflowError,
    MapError,
    PrecisionError,
    StaircaseError,
    StarSearchError,
)
from .exact import GaussianRational
from .groebner import buchberger, reduce_full, staircase_of
from .polynomials import (
    GREVLEX4,
    GREVLEX_Z,
    MAX_EXPONENT,
    GraphWeighted,
    Monomial,
    MonomialOrder,
    Polynomial,
    w_monomial,
    z_monomial,
)

BASIS_KINDS = ("z", "w", "B", "C")


class GraphMap:
    """A polynomial self-map of C^2, validated once, with cached eliminations."""

    def __init__(self, f1: Polynomial, f2: Polynomial) -> None:
        if f1.precision != f2.precision:
            raise PrecisionError("map components at different precisions")
        for name, p in (("f1", f1), ("f2", f2)):
            if p.is_zero():
                raise MapError(f"{name} is zero")
            if not p.is_pure_z():
                raise MapError(f"{name} must be a polynomial in z1, z2 only")
            if p.degree() < 1:
                raise MapError(f"{name} is constant")
        if f1.degree() < f2.degree():
            raise MapError(
                "component degrees must satisfy deg f1 >= deg f2; swap the components"
            )
        self.f1 = f1
        self.f2 = f2
        self.d1 = f1.degree()
        self.d2 = f2.degree()
        self._float: Optional["GraphMap"] = None
        self._staircase: Optional[list[Monomial]] = None
        self._graph_gb: Optional[list[Polynomial]] = None

    @property
    def precision(self) -> str:
        return self.f1.precision

    @property
    def d(self) -> int:
        """Common degree; only defined when d1 == d2."""
        if self.d1 != self.d2:
            raise MapError("map components have different degrees")
        return self.d1

    def top_forms(self) -> tuple[Polynomial, Polynomial]:
        return self.f1.top_form(), self.f2.top_form()

    def to_float(self) -> "GraphMap":
        if self.precision == "float":
            return self
        if self._float is None:
            self._float = GraphMap(self.f1.to_float(), self.f2.to_float())
        return self._float

    def __eq__(self, other) -> bool:
        if not isinstance(other, GraphMap):
            return NotImplemented
        return self.f1 == other.f1 and self.f2 == other.f2

    def __repr__(self) -> str:
        return f"GraphMap({self.f1}, {self.f2})"


def precondition(f: GraphMap, r1: Sequence[Sequence], r2: Sequence[Sequence]) -> GraphMap:
    """The conjugated map R2 . f . R1, for invertible 2x2 matrices.

    R1 acts on the source coordinates, R2 mixes the components.  Entries follow
    the map's precision.
    """

    def entry(x):
        if f.precision == "exact":
            return Polynomial.constant(GaussianRational.coerce(x) if not isinstance(x, GaussianRational) else x, "exact")
        return Polynomial.constant(complex(x), "float")

    def det(m):
        a, b = m[0]
        c, d = m[1]
        if f.precision == "exact":
            return GaussianRational.coerce(a) * GaussianRational.coerce(d) - GaussianRational.coerce(b) * GaussianRational.coerce(c)
        return complex(a) * complex(d) - complex(b) * complex(c)

    for name, m in (("r1", r1), ("r2", r2)):
        if not det(m):
            raise MapError(f"{name} is singular")
    z1 = Polynomial.variable("z1", f.precision)
    z2 = Polynomial.variable("z2", f.precision)
    new_z1 = entry(r1[0][0]) * z1 + entry(r1[0][1]) * z2
    new_z2 = entry(r1[1][0]) * z1 + entry(r1[1][1]) * z2
    g1 = f.f1.substitute({"z1": new_z1, "z2": new_z2})
    g2 = f.f2.substitute({"z1": new_z1, "z2": new_z2})
    h1 = entry(r2[0][0]) * g1 + entry(r2[0][1]) * g2
    h2 = entry(r2[1][0]) * g1 + entry(r2[1][1]) * g2
    return GraphMap(h1, h2)


# ---------------------------------------------------------------------------
# staircases


def staircase(f: GraphMap) -> list[Monomial]:
    """Standard z-monomials of the top-form ideal, smallest first.

    Needs exact coefficients.  Raises StaircaseError when the top forms share
    a projective root (the leading ideal then fails to be zero-dimensional).
    """
    if f.precision != "exact":
        raise PrecisionError("staircase needs an exact map")
    if f._staircase is not None:
        return list(f._staircase)
    fh1, fh2 = f.top_forms()
    gb = buchberger([fh1, fh2], GREVLEX_Z)
    try:
        stairs = staircase_of(gb, GREVLEX_Z)
    except ValueError as exc:
        raise StaircaseError(str(exc)) from None
    if len(stairs) != f.d1 * f.d2:
        # zero-dimensional leading ideal with the wrong colength cannot happen
        # for coprime forms; surface it rather than continue on bad data
        raise StaircaseError(
            f"staircase has {len(stairs)} elements, expected {f.d1 * f.d2}"
        )
    f._staircase = stairs
    return list(stairs)


def generic_staircase(d: int) -> list[Monomial]:
    """The staircase of a generic degree-(d, d) map: b1 + 2*b2 <= 2d - 2."""
    if d < 1:
        raise ValueError("d must be positive")
    out = [
        z_monomial((b1, b2))
        for b2 in range(d)
        for b1 in range(2 * d - 1 - 2 * b2)
    ]
    out.sort(key=GREVLEX_Z.key)
    return out


def is_generic(f: GraphMap) -> bool:
    """Whether f's staircase matches the generic one (needs d1 == d2)."""
    if f.d1 != f.d2:
        return False
    try:
        stairs = staircase(f)
    except StaircaseError:
        return False
    return stairs == generic_staircase(f.d1)


# ---------------------------------------------------------------------------
# graph normal forms


def graph_basis(f: GraphMap) -> list[Polynomial]:
    """Groebner basis of <f1 - w1, f2 - w2> for the graded order on all four variables."""
    if f.precision != "exact":
        raise PrecisionError("graph normal forms need an exact map")
    if f._graph_gb is None:
        w1 = Polynomial.variable("w1", "exact")
        w2 = Polynomial.variable("w2", "exact")
        f._graph_gb = buchberger([f.f1 - w1, f.f2 - w2], GREVLEX4)
    return f._graph_gb


def normal_form(p: Polynomial, f: GraphMap) -> Polynomial:
    """Canonical representative of p modulo the graph ideal.

    The result is supported on monomials w^a z^b with b in the staircase, and
    agrees with p on the graph variety.
    """
    if p.precision != "exact":
        raise PrecisionError("normal_form needs an exact polynomial")
    return reduce_full(p, graph_basis(f), GREVLEX4)


# ---------------------------------------------------------------------------
# counts


def filtration_counts(d: int, n: int) -> tuple[int, int]:
    """(m_n, l_n) for the weight filtration of a degree-(d, d) graph basis.

    m_n counts basis monomials of weight at most n*d (the filtration level
    isomorphic to polynomials of degree <= n*d in z); l_n is the running sum
    of level indices weighted by the level increments.
    """
    if d < 2 or n < 1:
        raise ValueError("need d >= 2 and n >= 1")
    def m(k: int) -> int:
        t = k * d
        return (t + 1) * (t + 2) // 2

    l = 0
    for j in range(1, n + 1):
        l += j * (m(j) - m(j - 1))
    return m(n), l


def classical_counts(n: int) -> tuple[int, int]:
    """(m_n, l_n) for the full degree filtration of C[x1, x2]."""
    if n < 0:
        raise ValueError("need n >= 0")
    m = (n + 1) * (n + 2) // 2
    l = n * (n + 1) * (n + 2) // 3
    return m, l


# ---------------------------------------------------------------------------
# basis streams


def _z_level(nu: int) -> list[Monomial]:
    return [z_monomial((nu - j, j)) for j in range(nu + 1)]


def _w_level(nu: int) -> list[Monomial]:
    return [w_monomial((nu - j, j)) for j in range(nu + 1)]


def _staircase_level(stairs: Sequence[Monomial], d: int, nu: int) -> list[Monomial]:
    """Weight-nu monomials w^a z^b with b in the staircase, graph order."""
    out = []
    order = GraphWeighted(d)
    for s in stairs:
        rem = nu - (s.b1 + s.b2)
        if rem < 0 or rem % d:
            continue
        k = rem // d
        out.extend(Monomial(k - a2, a2, s.b1, s.b2) for a2 in range(k + 1))
    out.sort(key=order.key)
    return out


def _window_level(d: int, nu: int) -> list[Monomial]:
    """The special weight-nu block for nu >= 2d - 1: z1-window times w-powers,
    with trailing pure powers of z2 closing the count at nu + 1."""
    ell, r = divmod(nu - (d - 1), d)
    if ell % 2 == 0:
        ell, r = ell - 1, r + d
    out = []
    for s in range(ell + 1):
        alpha = (ell - s, s)
        for j in range(d):
            out.append(Monomial(alpha[0], alpha[1], r + d - 1 - j, j))
    for j in range(r - 1, -1, -1):
        out.append(z_monomial((j, nu - j)))
    return out


@dataclass
class MonomialBasisStream:
    """Monomials in stream order, grouped into weight levels.

    kind "z" and "w" are the classical degree streams in one pair of
    variables; "B" follows the map's own staircase; "C" requires a generic
    staircase and switches to the window construction at weight 2d - 1, which
    keeps every level's change of basis to the z-monomials block triangular.
    """

    kind: str
    f: Optional[GraphMap] = None
    n_max: Optional[int] = None
    _stairs: Optional[list[Monomial]] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.kind not in BASIS_KINDS:
            raise ValueError(f"unknown basis kind {self.kind!r}; pick one of {BASIS_KINDS}")
        if self.kind in ("B", "C"):
            if self.f is None:
                raise MapError(f"basis kind {self.kind!r} needs a map")
            d = self.f.d  # raises when d1 != d2
            if self.kind == "C":
                if not is_generic(self.f):
                    raise MapError(
                        "basis kind 'C' needs a generic staircase; "
                        "this map's staircase differs"
                    )
                self._stairs = generic_staircase(d)
            else:
                self._stairs = staircase(self.f)

    @property
    def d(self) -> int:
        return 1 if self.kind in ("z", "w") else self.f.d

    def level(self, nu: int) -> list[Monomial]:
        """The weight-nu block, in emission order."""
        if nu < 0:
            raise ValueError("negative level")
        if self.n_max is not None and nu > self.n_max:
            raise DegreeOverflowError(f"level {nu} past the stream cap {self.n_max}")
        if self.kind == "z":
            return _z_level(nu)
        if self.kind == "w":
            return _w_level(nu)
        d = self.f.d
        if self.kind == "C" and nu >= 2 * d - 1:
            return _window_level(d, nu)
        return _staircase_level(self._stairs, d, nu)

    def upto(self, nu: int) -> list[Monomial]:
        out = []
        for k in range(nu + 1):
            out.extend(self.level(k))
        return out

    def __iter__(self) -> Iterator[Monomial]:
        nu = 0
        while self.n_max is None or nu <= self.n_max:
            yield from self.level(nu)
            nu += 1

    def take(self, count: int) -> list[Monomial]:
        out = []
        for m in self:
            if len(out) >= count:
                break
            out.append(m)
        return out

    def prefix_of(self, target: Monomial) -> list[Monomial]:
        """Stream monomials emitted strictly before target.

        Raises ValueError when target never appears (wrong staircase, or the
        level passed without emitting it).
        """
        weight = target.weight(self.d) if self.kind in ("B", "C") else (
            target.degree()
        )
        out: list[Monomial] = []
        for nu in range(weight + 1):
            for m in self.level(nu):
                if m == target:
                    return out
                out.append(m)
        raise ValueError(f"{target} is not a monomial of this stream")


def basis_stream(
    f: Optional[GraphMap],
    kind: str,
    order: Optional[MonomialOrder] = None,
    n_max: Optional[int] = None,
) -> MonomialBasisStream:
    """Factory for the four stream kinds; f may be None for "z" and "w".

    order, when given, must agree with the stream's own order (GraphWeighted
    for "B"/"C", graded for "z"/"w"); n_max caps the levels the stream may
    emit and is checked against the exponent ceiling.
    """
    stream = MonomialBasisStream(kind=kind, f=f)
    if order is not None:
        if kind in ("B", "C"):
            if not isinstance(order, GraphWeighted) or order.d != stream.d:
                raise ValueError(
                    f"basis kind {kind!r} streams in GraphWeighted({stream.d}) order"
                )
        elif isinstance(order, GraphWeighted):
            raise ValueError(f"basis kind {kind!r} streams in plain graded order")
    if n_max is not None:
        if n_max < 0:
            raise ValueError("n_max must be nonnegative")
        if n_max > MAX_EXPONENT:
            raise DegreeOverflowError(
                f"n_max={n_max} exceeds the exponent ceiling {MAX_EXPONENT}"
            )
        stream.n_max = n_max
    return stream


# ---------------------------------------------------------------------------
# pure-w reduction certificates


@dataclass
class StarCertificate:
    beta: tuple[int, int]
    beta_tilde: tuple[int, int]
    gamma: tuple[int, int]
    constant: GaussianRational
    reduction: Polynomial

    def __repr__(self) -> str:
        return (
            f"StarCertificate(beta={self.beta}, beta_tilde={self.beta_tilde}, "
            f"gamma={self.gamma}, constant={self.constant})"
        )


def _star_try(f: GraphMap, beta: tuple[int, int], bt: tuple[int, int], order: GraphWeighted):
    m = z_monomial((beta[0] + bt[0], beta[1] + bt[1]))
    nf = normal_form(Polynomial({m: GaussianRational(1)}, "exact"), f)
    if nf.is_zero():
        return None
    lm, lc = nf.leading_term(order)
    if lm.is_pure_w():
        return StarCertificate(beta, bt, lm.alpha, lc, nf)
    return None


def star_certificate(f: GraphMap, beta: tuple[int, int]) -> StarCertificate:
    """Find z^bt with normal_form(z^(beta+bt)) led by a pure-w monomial.

    Tries pure powers of z2 first (including the empty multiplier), then all
    multipliers of total degree up to 4d.  The certificate's constant is the
    leading coefficient; the full reduction is kept for re-verification.
    """
    if f.precision != "exact":
        raise PrecisionError("star_certificate needs an exact map")
    d = f.d
    stairs = staircase(f)
    if z_monomial(beta) not in stairs:
        raise MapError(f"beta={beta} is not in the staircase")
    order = GraphWeighted(d)
    bound = 4 * d
    for j in range(bound + 1):
        cert = _star_try(f, beta, (0, j), order)
        if cert is not None:
            return cert
    for total in range(1, bound + 1):
        for t1 in range(total, -1, -1):
            cert = _star_try(f, beta, (t1, total - t1), order)
            if cert is not None:
                return cert
    raise StarSearchError(
        f"no multiplier of degree <= {bound} certifies beta={beta}"
    )


@dataclass
class StarReport:
    """Per-staircase-exponent reduction certificates, failures kept alongside."""

    certificates: dict[tuple[int, int], StarCertificate]
    failures: dict[tuple[int, int], str]

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok


def check_star(f: GraphMap, order: Optional[MonomialOrder] = None) -> StarReport:
    """Search a reduction certificate for every staircase exponent of f.

    A missing certificate is recorded per exponent rather than raised; it
    signals a map outside the generic regime, not a failure of the search.
    """
    if f.precision != "exact":
        raise PrecisionError("check_star needs an exact map")
    if order is not None and not isinstance(order, GraphWeighted):
        raise ValueError("certificates are read off in GraphWeighted order")
    certificates: dict[tuple[int, int], StarCertificate] = {}
    failures: dict[tuple[int, int], str] = {}
    for s in staircase(f):
        beta = s.beta
        try:
            certificates[beta] = star_certificate(f, beta)
        except StarSearchError as exc:
            failures[beta] = str(exc)
    return StarReport(certificates=certificates, failures=failures)


# ---------------------------------------------------------------------------
# independence of substituted basis monomials


@dataclass
class IndependenceReport:
    independent: bool
    rank: int
    size: int
    level: int
    monomials: list[Monomial]

    def __bool__(self) -> bool:
        return self.independent


def _exact_rank(rows: list[dict[Monomial, GaussianRational]]) -> int:
    """Rank of a sparse exact matrix by Gaussian elimination."""
    work = [dict(r) for r in rows]
    rank = 0
    while work:
        pivot_row = None
        for r in work:
            if r:
                pivot_row = r
                break
        if pivot_row is None:
            break
        work.remove(pivot_row)
        rank += 1
        key = next(iter(pivot_row))
        pc = pivot_row[key]
        for r in work:
            if key in r:
                factor = r[key] / pc
                for k, v in pivot_row.items():
                    nv = r.get(k, GaussianRational(0)) - factor * v
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
    return rank


def independence_check(f: GraphMap, n: int) -> IndependenceReport:
    """Do the substituted basis monomials stay independent through weight n?

    Collects the basis monomials of weight <= n (the map's own staircase
    pattern below weight 2d - 1 when available, the window pattern above),
    substitutes w = f(z), and computes the exact rank.  Since the collection
    has exactly dim C[z]_{<=n} members, independence means the substituted
    family is a basis of polynomials of degree <= n.
    """
    if f.precision != "exact":
        raise PrecisionError("independence_check needs an exact map")
    if n < 0:
        raise ValueError("need n >= 0")
    d = f.d
    try:
        stairs = staircase(f)
    except StaircaseError:
        stairs = generic_staircase(d)
    monomials: list[Monomial] = []
    for nu in range(n + 1):
        if nu >= 2 * d - 1:
            monomials.extend(_window_level(d, nu))
        else:
            monomials.extend(_staircase_level(stairs, d, nu))
    rows = []
    for m in monomials:
        p = Polynomial({m: GaussianRational(1)}, "exact")
        image = p.substitute({"w1": f.f1, "w2": f.f2})
        rows.append(dict(image.terms))
    rank = _exact_rank(rows)
    return IndependenceReport(
        independent=(rank == len(monomials)),
        rank=rank,
        size=len(monomials),
        level=n,
        monomials=monomials,
    )
