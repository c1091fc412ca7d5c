import time

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import BUNDLED, FIBONACCI, FLIPPED_TRIBONACCI, SMALLEST_PISOT, TRIBONACCI
from pisot_disc.families import sk_substitution
from pisot_disc.geometry import (DegenerateLine, cloud_radius_bounds, coordinate_norms,
                                 cut_and_project_word, digit_levels, exchange_orbit,
                                 letter_discrepancy, project_cloud, render, sample_disjointness)
from pisot_disc.interior import decide_pure_discreteness
from pisot_disc.substitution import BudgetExceeded, fixed_point_power, parse_substitution

PHI = (1 + 5 ** 0.5) / 2


def test_depth_zero_is_the_origin():
    c = project_cloud(parse_substitution(TRIBONACCI), 0)
    assert len(c) == 1 and not c.points.any()


@pytest.mark.parametrize("text", BUNDLED)
def test_one_point_per_prefix_and_bounded(text):
    s = parse_substitution(text)
    k, seed = fixed_point_power(s)
    c = project_cloud(s, 6)
    assert len(c) == len(s.iterate(seed, 6 * k))
    bounds = np.array(cloud_radius_bounds(s))
    assert (coordinate_norms(c, s) <= bounds + 1e-6).all()


@pytest.mark.parametrize("text", [TRIBONACCI, SMALLEST_PISOT])
def test_digit_expansion_reproduces_the_points(text):
    s = parse_substitution(text)
    c = project_cloud(s, 5)
    digits, alphabet = digit_levels(s, 5)
    k, _ = fixed_point_power(s)
    f = alphabet[0].scalar.field
    idx = f.contracting_representatives[0]
    base = complex(f.float_value(f.gen ** k, idx))
    vals = np.array([complex(f.float_value(d.scalar, idx)) for d in alphabet])
    z = (vals[digits] * base ** np.arange(5)).sum(axis=1)
    assert np.allclose(np.column_stack([z.real, z.imag]), c.points[:, :2], atol=1e-9)


def test_interior_flags_follow_the_automata():
    s = parse_substitution(FLIPPED_TRIBONACCI)
    auts = {}
    decide_pure_discreteness(s, radii=(0,), all_letters=True, automata_out=auts)
    shallow = project_cloud(s, 12, auts)
    deep = project_cloud(s, 15, auts)
    assert deep.has_interior
    assert 0 < shallow.interior.sum() < len(shallow)
    # flags depend on the point only, and the shallow cloud is a prefix of the deep one
    assert (deep.interior[:len(shallow)] == shallow.interior).all()
    plain = project_cloud(s, 7)
    assert not plain.has_interior and not plain.interior.any()


@pytest.mark.parametrize("text", [FIBONACCI, TRIBONACCI, SMALLEST_PISOT])
def test_sampled_overlaps_are_small(text):
    c = project_cloud(parse_substitution(text), 8)
    stats = sample_disjointness(c, 1e-3)
    assert stats["heuristic"] is True
    assert stats["max_pair_fraction"] < 1e-3


def test_single_point_has_no_overlap():
    c = project_cloud(parse_substitution(TRIBONACCI), 0)
    stats = sample_disjointness(c, 1e-3)
    assert stats["max_pair_fraction"] == 0 and stats["max_point_fraction"] == 0


def test_periodic_input_is_rejected():
    with pytest.raises(ValueError):
        project_cloud(parse_substitution("a->ab;b->ab"), 3)


def test_exchange_orbit_tribonacci():
    word, pts = exchange_orbit(parse_substitution(TRIBONACCI), 3)
    assert word == "aba"
    assert pts == [(0, 0, 0), (1, 0, 0), (1, 1, 0), (2, 1, 0)]
    assert exchange_orbit(parse_substitution(TRIBONACCI), 0) == ("", [(0, 0, 0)])


@pytest.mark.parametrize("text", BUNDLED)
def test_exchange_orbit_follows_the_fixed_point(text):
    s = parse_substitution(text)
    k, seed = fixed_point_power(s)
    n = 10_000
    word, pts = exchange_orbit(s, n)
    u = seed
    while len(u) < n:
        u = s.iterate(u, k)
    assert word == u[:n]
    assert pts[-1] == s.ab(u[:n])


def test_cut_and_project_alternating():
    assert cut_and_project_word((1, 1), (0.5, 0.25), 8) == [1, 2] * 4


def test_cut_and_project_sturmian_frequencies():
    w = cut_and_project_word((1, PHI), (2 ** 0.5 * 1e-7, 3 ** 0.5 * 1e-7), 10_000)
    assert abs(w.count(1) / 1e4 - 1 / PHI ** 2) < 0.02 / PHI ** 2
    assert abs(w.count(2) / 1e4 - 1 / PHI) < 0.02 / PHI
    assert letter_discrepancy(w, (1, PHI)) <= 2


def test_cut_and_project_three_letters():
    w = cut_and_project_word((0.54973, 0.36490, 0.99501), (0.1, 0.2, 0.3), 3000)
    assert set(w) == {1, 2, 3}


def test_cut_and_project_degenerate():
    with pytest.raises(DegenerateLine):
        cut_and_project_word((1, 1), (0.5, 0.5), 4)
    with pytest.raises(ValueError):
        cut_and_project_word((1, 0), (0.1, 0.2), 4)


@given(st.lists(st.floats(0.05, 5), min_size=2, max_size=4),
       st.lists(st.floats(0, 1), min_size=4, max_size=4))
def test_cut_and_project_discrepancy_is_bounded(v, c):
    c = c[:len(v)]
    try:
        w = cut_and_project_word(v, c, 2000)
    except DegenerateLine:
        return
    assert letter_discrepancy(w, v) <= 10 * len(v)


def test_render_one_point_and_determinism(tmp_path):
    c = project_cloud(parse_substitution(TRIBONACCI), 0)
    svg = render(c, tmp_path / "one.svg")
    assert svg.read_text().count("<circle") == 1
    ppm = render(c, tmp_path / "one.ppm")
    data = ppm.read_bytes()
    assert data.startswith(b"P6\n1000 1000\n255\n")
    big = project_cloud(parse_substitution(TRIBONACCI), 8)
    a = render(big, tmp_path / "a.ppm").read_bytes()
    b = render(big, tmp_path / "b.ppm").read_bytes()
    assert a == b
    assert render(big, tmp_path / "a.svg").read_bytes() == render(big, tmp_path / "b.svg").read_bytes()


def test_render_sk20(tmp_path):
    s = sk_substitution(20)
    t0 = time.perf_counter()
    c = project_cloud(s, 4)
    render(c, tmp_path / "s20.ppm")
    assert time.perf_counter() - t0 < 10
    assert len(c) == len(s.iterate("a", 4))
    lo, hi = c.bbox()
    bound = cloud_radius_bounds(s)[0]
    assert (np.abs(lo) <= bound).all() and (np.abs(hi) <= bound).all()
    with pytest.raises(BudgetExceeded):
        project_cloud(s, 8)
