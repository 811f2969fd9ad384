"""Constructive near-extremizers: boundary pairs, corner iteration, mixing."""

import math
from fractions import Fraction

import pytest

from a1embed import (
    DegenerateParamsError,
    DomainError,
    DyadicSet,
    apply_S,
    apply_T,
    boundary_weight,
    build_corner,
    build_extremizer,
    concatenate,
    eval_M,
    measure,
    new_params,
    stats,
)


def test_boundary_pair_stats(p102):
    pair = boundary_weight(p102, 7.0)
    a = pair.achieved
    assert (float(a.x), a.y, a.m, a.char, a.value) == (1.0, 7.0, 1.0, 7.0, 7.0)
    assert pair.w.tree == (1.0, 1.0, 1.0, 25.0)


def test_boundary_rejects_bad_average(p102):
    with pytest.raises(DomainError):
        boundary_weight(p102, 0.5)
    with pytest.raises(DomainError):
        boundary_weight(p102, 10.5)


def test_apply_T_reaches_first_corner(p102):
    pair = apply_T(p102, boundary_weight(p102, 10.0, exact=True), exact=True)
    a = pair.achieved
    assert a.x == Fraction(1, 4)
    assert a.value == Fraction(37, 4)
    assert a.m == 1
    assert a.char == 10


def test_apply_T_requires_saturated_average(p102):
    with pytest.raises(DomainError):
        apply_T(p102, boundary_weight(p102, 7.0))


def test_apply_S_shrinks_measure():
    E = DyadicSet(4, (True, False, True, True))
    S = apply_S(E)
    assert measure(S) == measure(E) / 4
    assert apply_S(DyadicSet(4, False)).tree is False


def test_corner_iteration_exact(p102):
    eta = Fraction(37, 40)
    for k in range(9):
        a = build_corner(p102, k, exact=True).achieved
        assert a.x == Fraction(1, 4) ** k
        assert a.y == 10
        assert a.m == 1
        assert a.char == 10
        assert a.value == 10 * eta**k
    assert build_corner(p102, 3, exact=True).achieved.value == Fraction(50653, 6400)
    assert float(Fraction(50653, 6400)) == 7.91453125


def test_corner_matches_surface(p102):
    # the corner value is the closed form at (N^-k, Q)
    for k in range(6):
        a = build_corner(p102, k).achieved
        assert a.value == pytest.approx(eval_M(p102, float(a.x), 10.0), rel=1e-12)


def test_corner_validation(p102):
    with pytest.raises(DomainError):
        build_corner(p102, -1)
    with pytest.raises(DomainError):
        build_corner(p102, 33)
    with pytest.raises(DegenerateParamsError):
        build_corner(new_params(1.0, 2), 1)


def test_concatenate_endpoint_shortcut(p102):
    c1 = build_corner(p102, 1)
    c2 = build_corner(p102, 2)
    out = concatenate(p102, 1.0, c2, c1, depth=10)
    assert out.achieved.value == c1.achieved.value
    assert out.achieved.x == c1.achieved.x


def test_concatenate_converges_to_mixture(p102):
    c1 = build_corner(p102, 1)
    c2 = build_corner(p102, 2)
    lam = 1 / 3
    want_x = (1 - lam) * float(c2.achieved.x) + lam * float(c1.achieved.x)
    want_v = (1 - lam) * c2.achieved.value + lam * c1.achieved.value
    prev = None
    for depth in (8, 16, 24):
        a = concatenate(p102, lam, c2, c1, depth=depth).achieved
        err = abs(float(a.x) - want_x) + abs(a.value - want_v)
        assert err <= 2.0 * p102.Q * 2.0**-depth
        if prev is not None:
            assert err <= prev + 1e-12
        prev = err


def test_concatenate_invariants(p102):
    c0 = build_corner(p102, 0)
    c3 = build_corner(p102, 3)
    a = concatenate(p102, 0.4, c3, c0, depth=20).achieved
    assert a.m == 1.0
    assert a.char <= p102.Q + 1e-9
    assert a.value <= eval_M(p102, float(a.x), min(a.y, p102.Q)) + 1e-9


def test_concatenate_validation(p102):
    c0 = build_corner(p102, 0)
    with pytest.raises(DomainError):
        concatenate(p102, 1.2, c0, c0, depth=10)
    with pytest.raises(DomainError):
        concatenate(p102, 0.5, c0, c0, depth=0)
    with pytest.raises(DomainError):
        concatenate(p102, 0.5, c0, c0, depth=64)


def test_extremizer_node_point_exact(p102):
    a = build_extremizer(p102, 0.0625, 10.0, depth=8).achieved
    assert float(a.x) == 0.0625
    assert a.value == pytest.approx(8.55625, rel=1e-12)
    assert a.value == pytest.approx(eval_M(p102, 0.0625, 10.0), rel=1e-12)


def test_extremizer_lower_branch_exact(p102):
    # dyadic x on the lower branch mixes the empty pair with a boundary pair
    # and lands on the surface exactly
    a = build_extremizer(p102, 0.5, 4.0, depth=20).achieved
    assert float(a.x) == 0.5
    assert a.y == pytest.approx(4.0, rel=1e-12)
    assert a.value == pytest.approx(3.5, rel=1e-12)


def test_extremizer_obstacle_edge(p102):
    a = build_extremizer(p102, 1.0, 7.0, depth=8).achieved
    assert float(a.x) == 1.0
    assert a.value == pytest.approx(7.0, rel=1e-12)


def test_extremizer_empty_set(p102):
    a = build_extremizer(p102, 0.0, 5.0, depth=8).achieved
    assert a.x == 0
    assert a.value == 0


def test_extremizer_gap_shrinks(p102):
    pts = [(0.3, 8.0), (0.37, 9.9), (0.11, 3.3), (0.52, 6.1)]
    for x, y in pts:
        target = eval_M(p102, x, y)
        prev = math.inf
        for depth in (12, 16, 20):
            a = build_extremizer(p102, x, y, depth=depth).achieved
            gap = target - a.value
            assert -1e-9 <= gap <= 2 * p102.Q * 2.0**-depth
            assert gap <= prev + 1e-12
            prev = gap


def test_extremizer_respects_characteristic(p102, p53):
    for p in (p102, p53):
        for x, y in [(0.2, 1.5), (0.7, float(p.Q)), (0.05, 0.6 * p.Q + 0.4)]:
            pair = build_extremizer(p, x, y, depth=12)
            st = stats(pair.w, pair.E)
            assert st.m == 1.0
            assert float(st.char) <= p.Q + 1e-9


def test_extremizer_validation(p102):
    with pytest.raises(DomainError):
        build_extremizer(p102, 0.5, 5.5, depth=40)
    with pytest.raises(DomainError):
        build_extremizer(p102, 1.5, 5.0, depth=8)
    with pytest.raises(DomainError):
        build_extremizer(p102, 0.5, 11.0, depth=8)
    with pytest.raises(DegenerateParamsError):
        build_extremizer(new_params(1.0, 3), 0.5, 1.0, depth=8)


def test_extremizer_exact_mode_on_corner(p102):
    # (1/4, 10) resolves to the first corner with rational bookkeeping
    pair = build_extremizer(p102, 0.25, 10.0, depth=8, exact=True)
    assert pair.achieved.value == Fraction(37, 4)


def test_truncation_depth_recorded(p102):
    assert build_extremizer(p102, 0.3, 8.0, depth=14).truncation_depth == 14
