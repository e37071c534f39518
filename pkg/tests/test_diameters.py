import math

import numpy as np
import pytest

from capax import (
    GraphMap,
    Monomial,
    build_mesh,
    graph_lift,
    greedy_fekete,
    parse_poly,
    pullback_check,
    telescoping_check,
    transfinite_diameter,
)


def M(f1, f2):
    return GraphMap(parse_poly(f1), parse_poly(f2))


# ---------------------------------------------------------------------------
# greedy Fekete selection


def test_greedy_on_interval_section():
    mesh = build_mesh("box:-2,2,0,0", (9, 1))
    mons = [Monomial(0, 0, 0, 0), Monomial(1, 0, 0, 0), Monomial(2, 0, 0, 0)]
    ledger = greedy_fekete(mesh, mons, 3)
    picked = sorted(mesh.w[i, 0].real for i in ledger.selected)
    assert picked == [-2.0, 0.0, 2.0]
    assert not ledger.truncated
    # |VDM(-2, 2, 0)| = |(2 - -2)(0 - -2)(0 - 2)| = 16
    assert abs(math.exp(ledger.logdet) - 16.0) < 1e-9


def test_greedy_matches_brute_force():
    from itertools import combinations

    mesh = build_mesh("box:-2,2,0,0", (9, 1))
    xs = mesh.w[:, 0]
    best = max(
        combinations(range(9), 3),
        key=lambda idx: abs(
            (xs[idx[1]] - xs[idx[0]])
            * (xs[idx[2]] - xs[idx[0]])
            * (xs[idx[2]] - xs[idx[1]])
        ),
    )
    mons = [Monomial(0, 0, 0, 0), Monomial(1, 0, 0, 0), Monomial(2, 0, 0, 0)]
    ledger = greedy_fekete(mesh, mons, 3)
    assert sorted(xs[i].real for i in ledger.selected) == sorted(
        xs[i].real for i in best
    )


def test_greedy_truncates_when_basis_degenerates():
    # z2^2 vanishes identically on the z2 = 0 section
    mesh = build_mesh("box:-2,2,0,0", (9, 1))
    mons = [Monomial(0, 0, 0, 0), Monomial(0, 1, 0, 0), Monomial(1, 0, 0, 0)]
    ledger = greedy_fekete(mesh, mons, 3)
    assert ledger.truncated
    assert ledger.truncated_at == 1
    assert ledger.step_logs[1] == -math.inf


def test_greedy_rejects_bad_n():
    mesh = build_mesh("box:-2,2,0,0", (9, 1))
    with pytest.raises(ValueError):
        greedy_fekete(mesh, [Monomial(0, 0, 0, 0)], 0)


# ---------------------------------------------------------------------------
# diameter series


def test_unit_torus_diameter_is_exact():
    mesh = build_mesh("torus:1,1", 16)
    series = transfinite_diameter(mesh, "w", 3)
    assert series.levels == [1, 2, 3]
    assert series.m_counts == [3, 6, 10]
    assert series.l_counts == [2, 8, 20]
    for est in series.estimates:
        assert abs(est - 1.0) < 1e-12


def test_torus_radius_recovered():
    mesh = build_mesh("torus:1.3,1.3", 16)
    series = transfinite_diameter(mesh, "w", 4)
    assert abs(series.final - 1.3) < 1e-9


def test_van_root_rides_along():
    mesh = build_mesh("torus:1.3,1.3", 12)
    series = transfinite_diameter(mesh, "w", 3)
    assert len(series.van_root_estimates) == 3
    for v, e in zip(series.van_root_estimates, series.estimates):
        # the raw determinant root keeps the Fekete separation factor, so it
        # rides above the telescoped estimate at every finite level
        assert math.isfinite(v)
        assert v >= e - 1e-9


def test_z_series_needs_lifted_set():
    from capax import EstimateError

    mesh = build_mesh("torus:1,1", 8)
    with pytest.raises(EstimateError):
        transfinite_diameter(mesh, "z", 2)


def test_graph_basis_series_on_lifted_torus():
    f = M("z1^2", "z2^2")
    lifted = graph_lift(f, build_mesh("torus:1,1", 10))
    series = transfinite_diameter(lifted, "B", 2)
    assert series.m_counts == [6, 15]
    assert series.l_counts == [5, 23]
    for est in series.estimates:
        assert 0.5 < est < 1.5


# ---------------------------------------------------------------------------
# telescoping


def test_telescoping_on_unit_torus():
    mesh = build_mesh("torus:1,1", 12)
    report = telescoping_check(mesh, "w", 3)
    assert report.ok
    assert len(report.rows) == 9  # steps 1..9 of m_3 = 10
    for row in report.rows:
        assert row.lower_ok and row.upper_ok
        assert abs(row.cheb - 1.0) < 1e-9


# ---------------------------------------------------------------------------
# the pullback comparison


def test_pullback_on_squares_map():
    report = pullback_check(M("z1^2", "z2^2"), "torus:1,1", 4, (16, 16))
    assert abs(report.lhs - 1.0) < 1e-9
    assert abs(report.rhs - 1.0) < 1e-9
    assert abs(report.ratio - 1.0) < 1e-9
    assert abs(report.res_log_abs) < 1e-12


def test_pullback_on_doubled_squares_map():
    report = pullback_check(M("2*z1^2", "2*z2^2"), "torus:1,1", 4, (16, 16))
    want = 2.0 ** -0.5
    # lift of the unit torus has |z_i| = 2^(-1/2); Res = 16 enters at -1/8
    assert abs(report.lhs - want) < 1e-9
    assert abs(report.rhs - want) < 1e-9
    assert abs(report.ratio - 1.0) < 1e-9
    assert abs(report.res_log_abs - math.log(16.0)) < 1e-12
