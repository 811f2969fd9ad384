"""Samplers, property suites, weak-type endpoint, and the brute-force oracle."""

from fractions import Fraction

import pytest

from a1embed import (
    DomainError,
    DyadicWeight,
    boundary_weight,
    brute_force_oracle,
    build_corner,
    check_concavity,
    check_main_inequality_B,
    check_main_inequality_M,
    check_smooth_bound,
    check_t_monotonicity,
    check_weak_type,
    check_wedge_inequality,
    default_value_grid,
    eval_B,
    new_params,
    oracle_vs_closed_form,
    osekowski_p_max,
    run_suite,
    stats,
)
from a1embed.verify import SUITES


def test_main_inequality_M_passes(p102):
    r = check_main_inequality_M(p102, n_samples=20000, seed=3)
    assert r.passed
    assert r.worst_slack >= -1e-9
    assert r.samples >= 20000
    assert "binds" in r.notes


def test_main_inequality_B_passes(p21):
    r = check_main_inequality_B(p21, n_samples=20000, seed=3)
    assert r.passed
    assert r.worst_slack >= -1e-9
    assert "stratum" in r.worst_witness


def test_wedge_inequality_passes(p102):
    r = check_wedge_inequality(p102, k_max=4, n_samples=20000, seed=3)
    assert r.passed
    assert r.worst_slack >= -1e-9


def test_sampler_determinism(p102):
    a = check_main_inequality_M(p102, n_samples=30000, seed=11)
    b = check_main_inequality_M(p102, n_samples=30000, seed=11)
    assert a.worst_slack == b.worst_slack
    assert a.worst_witness == b.worst_witness
    c = check_main_inequality_M(p102, n_samples=30000, seed=12)
    assert c.worst_slack != a.worst_slack


def test_sampler_thread_invariance(p102, monkeypatch):
    monkeypatch.setenv("BELLMAN_THREADS", "1")
    a = check_main_inequality_B(p102, n_samples=20000, seed=5)
    monkeypatch.setenv("BELLMAN_THREADS", "4")
    b = check_main_inequality_B(p102, n_samples=20000, seed=5)
    assert a.worst_slack == b.worst_slack
    assert a.worst_witness == b.worst_witness


def test_property_suites_pass(p102, p53):
    for p in (p102, p53):
        assert check_concavity(p, n_samples=4000).passed
        assert check_t_monotonicity(p, n_samples=4000).passed
        assert check_smooth_bound(p, n_samples=20000).passed


def test_run_suite_single_and_all(p102):
    (r,) = run_suite(p102, "homogeneity", n_samples=500)
    assert r.passed
    reports = run_suite(p102, "all", n_samples=4000)
    assert len(reports) == len(SUITES)
    assert all(r.passed for r in reports)
    assert {r.suite for r in reports} >= {"concavity", "weak-type", "wedge"}


def test_run_suite_unknown_name(p102):
    with pytest.raises(ValueError):
        run_suite(p102, "no-such-suite")


def test_weak_type_sharp_on_corners(p102):
    pm = osekowski_p_max(p102)
    for k in (0, 1, 3, 5):
        r = check_weak_type(build_corner(p102, k).w, pm)
        assert r.passed
        assert abs(r.worst_slack) <= 1e-9  # equality case, not just one-sided


def test_weak_type_boundary_witness(p102):
    # level 37 with tail 1/4: 37 * (1/4)^{1/p_max} = 10 = the average, exactly
    r = check_weak_type(boundary_weight(p102, 10.0).w, osekowski_p_max(p102))
    assert r.passed
    assert abs(r.worst_slack) <= 1e-9
    assert r.worst_witness == (37.0, 0.25)


def test_weak_type_beyond_endpoint(p102):
    r = check_weak_type(build_corner(p102, 2).w, 2.0)
    assert r.passed
    assert "inapplicable" in r.notes


def test_weak_type_needs_unit_minimum():
    with pytest.raises(DomainError):
        check_weak_type(DyadicWeight(4, (2.0, 2.0, 2.0, 2.0)), 1.05)


def test_oracle_depth_one(p21):
    table = brute_force_oracle(p21, 1)
    key = (Fraction(1, 2), Fraction(2))
    assert table.buckets[key].value == Fraction(3, 2)
    assert table.buckets[(Fraction(1), Fraction(2))].value == Fraction(2)
    assert table.n == 2 and table.depth == 1


def test_oracle_depth_two_corners(p21):
    table = brute_force_oracle(p21, 2)
    assert table.buckets[(Fraction(1, 2), Fraction(2))].value == Fraction(3, 2)
    assert table.buckets[(Fraction(1, 4), Fraction(2))].value == Fraction(9, 8)


def test_oracle_buckets_sit_under_surface(p21):
    table = brute_force_oracle(p21, 2)
    for (x, y), b in table.buckets.items():
        assert float(b.value) <= eval_B(p21, float(x), float(y), 1.0) + 1e-9


def test_oracle_witness_rebuild(p21):
    table = brute_force_oracle(p21, 2)
    for key, b in table.buckets.items():
        w, E = table.witness_pair(key)
        st = stats(w, E)
        assert st.x == key[0]
        assert st.value == b.value
        assert st.m == 1.0
        # the bucket label rounds the true average up
        assert st.y <= float(key[1]) + 1e-12
        assert float(st.char) <= p21.Q


def test_oracle_grid_validation(p21):
    with pytest.raises(ValueError):
        brute_force_oracle(p21, 1, value_grid=[Fraction(2), Fraction(3)])
    with pytest.raises(ValueError):
        brute_force_oracle(p21, 1, value_grid=[Fraction(1), Fraction(1, 2)])


def test_oracle_size_cap(p21):
    grid = default_value_grid(p21, 2)
    with pytest.raises(ValueError):
        brute_force_oracle(p21, 2, value_grid=grid, max_assignments=10)


def test_oracle_x_step_validation(p21):
    with pytest.raises(ValueError):
        brute_force_oracle(p21, 2, x_step=Fraction(1, 3))


def test_oracle_serialization(p21):
    table = brute_force_oracle(p21, 1)
    csv = table.to_csv()
    lines = csv.strip().splitlines()
    assert lines[0] == "x,y,m,value,witness_id"
    assert len(lines) == len(table.buckets) + 1
    doc = table.to_json()
    assert doc["depth"] == 1 and doc["n"] == 2
    assert len(doc["buckets"]) == len(table.buckets)


def test_oracle_agrees_with_closed_form(p21):
    table = brute_force_oracle(p21, 2)
    r = oracle_vs_closed_form(table, p21)
    assert r.passed
    assert r.worst_slack >= -1e-9


def test_oracle_determinism(p21):
    a = brute_force_oracle(p21, 2).to_csv()
    b = brute_force_oracle(p21, 2).to_csv()
    assert a == b
