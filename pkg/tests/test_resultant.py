import random
from fractions import Fraction

import numpy as np
import pytest

from capax import (
    GaussianRational,
    GraphMap,
    block_factorization,
    block_shape,
    is_regular,
    parse_poly,
    precondition,
    resultant,
    resultant_root_oracle,
    resultant_slog,
    sylvester_matrix,
    total_copies,
)
from capax.resultant import bareiss_det
from conftest import random_regular_map


def P(text):
    return parse_poly(text)


def M(f1, f2):
    return GraphMap(P(f1), P(f2))


# ---------------------------------------------------------------------------
# sylvester matrices and resultants


def test_sylvester_layout_linear():
    m = sylvester_matrix(M("z1 + z2", "z1 - z2"))
    assert [[complex(c) for c in row] for row in m] == [[1, 1], [1, -1]]


def test_resultant_frozen_values():
    assert resultant(M("z1^2 + z2^2", "z1*z2")) == GaussianRational(1)
    assert resultant(M("2*z1^2", "z2^2")) == GaussianRational(4)
    assert resultant(M("z1 + z2", "z1 - z2")) == GaussianRational(-2)
    assert resultant(M("2*z1^2", "2*z2^2")) == GaussianRational(16)
    assert resultant(M("z1^2", "z2^2")) == GaussianRational(1)


def test_resultant_drops_lower_order_terms():
    assert resultant(M("z1^2 + z2 + 1", "z2^2 + z1")) == resultant(M("z1^2", "z2^2"))


def test_resultant_vanishes_on_shared_factor():
    assert resultant(M("z1^2 + z1*z2", "z1*z2")) == GaussianRational(0)
    assert not is_regular(M("z1^2 + z1*z2", "z1*z2"))
    assert is_regular(M("z1^2 + z2^2", "z1*z2"))


def test_resultant_slog_consistency():
    f = M("2*z1^2", "2*z2^2")
    phase, logmag = resultant_slog(f)
    assert np.isclose(logmag, np.log(16.0))
    assert np.isclose(complex(phase).real, 1.0)


def test_bareiss_matches_float_det():
    rng = random.Random(5)
    for _ in range(10):
        n = rng.randint(1, 5)
        rows = [
            [GaussianRational(Fraction(rng.randint(-9, 9), rng.choice((1, 2, 3)))) for _ in range(n)]
            for _ in range(n)
        ]
        exact = bareiss_det([row[:] for row in rows])
        approx = np.linalg.det(np.array([[complex(c) for c in row] for row in rows]))
        assert abs(complex(exact) - approx) <= 1e-8 * max(1.0, abs(approx))


def test_root_oracle_agrees_on_float_maps():
    f = M("z1^2 + z2^2", "z1^2 + z1*z2 + 2*z2^2")
    g = GraphMap(f.f1.to_float(), f.f2.to_float())
    assert abs(complex(resultant(f)) - resultant_root_oracle(g)) < 1e-10


def test_exact_covariance_single_frozen_instance():
    f = M("z1^2 + z1*z2 + z2^2", "z1*z2 + 1")
    r1 = [[1, 1], [0, 1]]
    r2 = [[2, 0], [1, 1]]
    g = precondition(f, r1, r2)
    d = f.d
    det1 = GaussianRational(1)  # det r1
    det2 = GaussianRational(2)  # det r2
    assert resultant(g) == det2 ** d * det1 ** (d * d) * resultant(f)


# ---------------------------------------------------------------------------
# block factorization


def test_block_shape_frozen_d2():
    shapes = [block_shape(2, k) for k in (3, 5, 7, 9)]
    assert [s.copies for s in shapes] == [1, 1, 6, 6]
    assert [s.modified for s in shapes] == [False, True, False, True]
    assert [s.ell for s in shapes] == [1, 1, 3, 3]


def test_block_shape_rejects_small_k():
    with pytest.raises(ValueError):
        block_shape(2, 2)


def test_total_copies_growth():
    s = total_copies(2, 8)
    assert s == 144
    target = 2 * 8 ** 3 / 6
    assert abs(s / target - 1.0) <= 0.25


def test_block_factorization_frozen_map():
    f = M("z1^2 + z1*z2 + z2^2", "z1*z2 + 1")
    res = resultant(f)
    for k in (3, 5, 7, 9):
        report = block_factorization(f, k)
        assert report.matches
        assert report.sign in (-1, 1)
        assert report.det == res ** report.shape.copies or (
            report.det == -(res ** report.shape.copies)
        )


def test_block_factorization_random_pairs():
    rng = random.Random(11)
    for _ in range(3):
        f = random_regular_map(rng, 2)
        for k in (3, 5):
            assert block_factorization(f, k).matches
