"""Graph maps, staircases, normal forms, basis streams, certificates, counts."""

import pytest

from capax import (
    GaussianRational,
    GraphMap,
    GraphWeighted,
    MapError,
    Polynomial,
    PrecisionError,
    StaircaseError,
    basis_stream,
    check_star,
    classical_counts,
    filtration_counts,
    generic_staircase,
    independence_check,
    is_generic,
    normal_form,
    parse_poly,
    precondition,
    staircase,
    star_certificate,
    substitute_graph,
)
from capax.errors import DegreeOverflowError
from capax.polynomials import Monomial, w_monomial, z_monomial
from capax.variety import MonomialBasisStream


def P(text):
    return parse_poly(text)


def square_map():
    return GraphMap(P("z1^2 + z2"), P("z2^2 + 1"))


def generic_map():
    return GraphMap(P("z1^2 + z1*z2 + z2^2 + 1/3*z1"), P("z1*z2 + 1/2*z2 + 1/5"))


def cubic_generic_map():
    return GraphMap(P("z1^3 + 2*z2^3 + z1^2 + 1/2"), P("z1*z2^2 + z1^2*z2 + z2"))


# ---------------------------------------------------------------------------
# the map type


def test_map_validation():
    with pytest.raises(MapError):
        GraphMap(P("z2"), P("z1^2"))  # d1 < d2
    with pytest.raises(MapError):
        GraphMap(P("w1 + z1"), P("z2"))  # not pure z
    with pytest.raises(MapError):
        GraphMap(P("z1"), P("0"))
    with pytest.raises(PrecisionError):
        GraphMap(P("z1"), P("z2").to_float())


def test_map_d_requires_equal_degrees():
    f = GraphMap(P("z1^2"), P("z2"))
    assert (f.d1, f.d2) == (2, 1)
    with pytest.raises(MapError):
        f.d


def test_precondition_matches_direct_composition():
    f = square_map()
    g = precondition(f, [[1, 1], [0, 1]], [[1, 0], [0, 1]])
    # z1 -> z1 + z2 in both components
    assert g.f1 == P("z1^2 + 2*z1*z2 + z2^2 + z2")
    assert g.f2 == P("z2^2 + 1")
    with pytest.raises(MapError):
        precondition(f, [[1, 1], [1, 1]], [[1, 0], [0, 1]])


# ---------------------------------------------------------------------------
# staircases


def test_staircase_frozen_square_example():
    stairs = staircase(square_map())
    assert stairs == [
        Monomial(0, 0, 0, 0),
        Monomial(0, 0, 1, 0),
        Monomial(0, 0, 0, 1),
        Monomial(0, 0, 1, 1),
    ]
    assert not is_generic(square_map())


def test_staircase_frozen_generic_example():
    f = GraphMap(P("z1^2 + z1*z2 + z2^2"), P("z1*z2 + 1"))
    stairs = staircase(f)
    assert stairs == [
        Monomial(0, 0, 0, 0),
        Monomial(0, 0, 1, 0),
        Monomial(0, 0, 0, 1),
        Monomial(0, 0, 2, 0),
    ]
    assert is_generic(f)


def test_staircase_needs_exact():
    with pytest.raises(PrecisionError):
        staircase(GraphMap(P("z1^2").to_float(), P("z2^2").to_float()))


def test_staircase_rejects_shared_top_factor():
    f = GraphMap(P("z1^2 + z2"), P("z1*z2 + 1"))
    with pytest.raises(StaircaseError):
        staircase(f)


def test_generic_staircase_counts():
    for d in (1, 2, 3, 4):
        stairs = generic_staircase(d)
        assert len(stairs) == d * d
        assert all(m.b1 + 2 * m.b2 <= 2 * d - 2 for m in stairs)


# ---------------------------------------------------------------------------
# normal forms


def test_normal_form_frozen_values():
    f = square_map()
    assert normal_form(P("z2^2"), f) == P("w2 - 1")
    assert normal_form(P("z1^2"), f) == P("w1 - z2")
    # basis monomials are fixed points
    assert normal_form(P("w1^2*z1*z2"), f) == P("w1^2*z1*z2")


def test_normal_form_is_a_section_of_substitution():
    f = generic_map()
    for text in ("z1*z2", "z1^3", "z2^2 + z1*z2^2", "z1^2*z2^2"):
        p = P(text)
        nf = normal_form(p, f)
        assert substitute_graph(nf, f.f1, f.f2) == p
        # support lies on the staircase in the z part
        betas = {m.beta for m in nf.terms}
        allowed = {m.beta for m in staircase(f)}
        assert betas <= allowed


def test_normal_form_of_cross_term_reaches_w():
    f = generic_map()
    nf = normal_form(P("z1*z2"), f)
    w_part = {m for m in nf.terms if m.alpha != (0, 0)}
    assert w_part <= {w_monomial((1, 0)), w_monomial((0, 1))}
    assert w_part


# ---------------------------------------------------------------------------
# counts


def test_filtration_counts_frozen():
    assert filtration_counts(2, 1) == (6, 5)
    assert filtration_counts(2, 2) == (15, 23)
    assert filtration_counts(2, 5) == (66, 235)
    assert filtration_counts(3, 1) == (10, 9)


def test_filtration_counts_closed_form():
    # l_n as the weighted sum of level increments equals the direct formula
    for d in (2, 3, 4):
        for n in range(1, 9):
            m_n, l_n = filtration_counts(d, n)
            assert m_n == (n * d + 1) * (n * d + 2) // 2
            assert l_n == sum(
                nu * (nu * d * d - d * (d - 3) // 2) for nu in range(1, n + 1)
            )


def test_filtration_counts_domain():
    with pytest.raises(ValueError):
        filtration_counts(1, 3)
    with pytest.raises(ValueError):
        filtration_counts(2, 0)


def test_classical_counts_frozen():
    assert classical_counts(5) == (21, 70)
    assert classical_counts(6) == (28, 112)


# ---------------------------------------------------------------------------
# basis streams


def test_stream_z_w_levels():
    s = basis_stream(None, "z")
    assert s.level(2) == [z_monomial((2, 0)), z_monomial((1, 1)), z_monomial((0, 2))]
    t = basis_stream(None, "w")
    assert t.level(1) == [w_monomial((1, 0)), w_monomial((0, 1))]


def test_stream_b_first_fifteen():
    f = GraphMap(P("z1^2 + z1*z2 + z2^2"), P("z1*z2 + 1"))
    got = basis_stream(f, "B").take(15)
    M = Monomial
    assert got == [
        M(0, 0, 0, 0),
        M(0, 0, 1, 0),
        M(0, 0, 0, 1),
        M(0, 0, 2, 0),
        M(1, 0, 0, 0),
        M(0, 1, 0, 0),
        M(1, 0, 1, 0),
        M(1, 0, 0, 1),
        M(0, 1, 1, 0),
        M(0, 1, 0, 1),
        M(1, 0, 2, 0),
        M(0, 1, 2, 0),
        M(2, 0, 0, 0),
        M(1, 1, 0, 0),
        M(0, 2, 0, 0),
    ]


def test_stream_c_level_four_tail():
    f = generic_map()
    block = basis_stream(f, "C").level(4)
    M = Monomial
    assert block == [
        M(1, 0, 2, 0),
        M(1, 0, 1, 1),
        M(0, 1, 2, 0),
        M(0, 1, 1, 1),
        M(0, 0, 0, 4),
    ]


def test_stream_c_matches_b_below_window():
    f = generic_map()
    b = basis_stream(f, "B")
    c = basis_stream(f, "C")
    for nu in range(2 * f.d - 1):
        assert b.level(nu) == c.level(nu)


def test_stream_level_sizes_are_graded():
    f = generic_map()
    for kind in ("B", "C"):
        s = basis_stream(f, kind)
        for nu in range(9):
            assert len(s.level(nu)) == nu + 1


def test_stream_c_rejects_non_generic():
    with pytest.raises(MapError):
        basis_stream(square_map(), "C")


def test_stream_kind_validation():
    with pytest.raises(ValueError):
        basis_stream(None, "Q")
    with pytest.raises(MapError):
        basis_stream(None, "B")


def test_stream_order_and_cap_arguments():
    f = generic_map()
    s = basis_stream(f, "B", order=GraphWeighted(2), n_max=4)
    assert len(list(s)) == sum(nu + 1 for nu in range(5))
    with pytest.raises(ValueError):
        basis_stream(f, "B", order=GraphWeighted(3))
    with pytest.raises(ValueError):
        basis_stream(None, "z", order=GraphWeighted(2))
    with pytest.raises(DegreeOverflowError):
        basis_stream(f, "B", n_max=10_000)
    with pytest.raises(DegreeOverflowError):
        s.level(5)


def test_stream_prefix_of():
    f = generic_map()
    s = basis_stream(f, "B")
    prefix = s.prefix_of(w_monomial((1, 0)))
    assert len(prefix) == 4
    assert w_monomial((1, 0)) not in prefix
    with pytest.raises(ValueError):
        s.prefix_of(z_monomial((0, 2)))  # not on the staircase, never emitted


def test_enumeration_matches_filtration_counts():
    f = generic_map()
    s = basis_stream(f, "B")
    for n in range(1, 5):
        m_n, _ = filtration_counts(2, n)
        assert len(s.upto(2 * n)) == m_n


# ---------------------------------------------------------------------------
# star certificates


def test_star_certificate_linear_map_is_trivial():
    f = GraphMap(P("z1 + z2"), P("z1 - z2"))
    cert = star_certificate(f, (0, 0))
    assert cert.beta_tilde == (0, 0)
    assert cert.gamma == (0, 0)
    assert complex(cert.constant) == 1


def test_check_star_generic_map():
    f = generic_map()
    report = check_star(f)
    assert report.ok
    assert set(report.certificates) == {m.beta for m in staircase(f)}
    order = GraphWeighted(f.d)
    for beta, cert in report.certificates.items():
        assert cert.beta_tilde[0] == 0  # a power of z2
        target = z_monomial((beta[0] + cert.beta_tilde[0], beta[1] + cert.beta_tilde[1]))
        nf = normal_form(Polynomial({target: GaussianRational(1)}, "exact"), f)
        lm, lc = nf.leading_term(order)
        assert lm.is_pure_w()
        assert lm.alpha == cert.gamma
        assert lc == cert.constant


def test_star_certificate_requires_staircase_membership():
    with pytest.raises(MapError):
        star_certificate(generic_map(), (1, 1))


# ---------------------------------------------------------------------------
# independence


def test_independence_at_critical_level():
    f = generic_map()
    assert independence_check(f, 2 * f.d - 1)


def test_independence_below_window_any_staircase():
    f = square_map()
    assert independence_check(f, 1)
    assert independence_check(f, 2)


def test_independence_fails_for_shared_factor():
    # both top forms divisible by z1
    f = GraphMap(P("z1^2 + z2"), P("z1*z2 + 1"))
    report = independence_check(f, 3)
    assert not report
    assert report.rank < report.size
