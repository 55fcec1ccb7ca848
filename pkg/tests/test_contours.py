import numpy as np
import pytest

from sospin.contours import (Contour, Sign, delta_boundary, extract_contours,
                             is_simply_connected, level_decomposition,
                             outermost_down_contour)
from sospin.lattice import HeightField, Lattice, Mode, total_gradient

from conftest import random_relaxed_field


def levels_of(field):
    lo = min(int(field.heights.min()), field.boundary)
    hi = max(int(field.heights.max()), field.boundary)
    return range(lo + 1, hi + 1)


def test_single_site_plaquette():
    lat = Lattice(5)
    h = np.zeros((5, 5), dtype=np.int64)
    h[2, 2] = 1
    cs = extract_contours(HeightField(lat, h), 1, Sign.UP)
    assert len(cs) == 1
    assert cs[0].length == 4
    assert cs[0].interior == frozenset({(2, 2)})


def test_plateau_rectangle():
    lat = Lattice(5)
    h = np.zeros((5, 5), dtype=np.int64)
    h[1:4, 1:4] = 1
    cs = extract_contours(HeightField(lat, h), 1, Sign.UP)
    assert len(cs) == 1
    assert cs[0].length == 12
    assert len(cs[0].interior) == 9


def test_checkerboard_se_nw_reference():
    # hand-traced SE-NW reference: the high main diagonal splits into two unit
    # loops; the high anti-diagonal joins into one pinched length-8 loop
    lat = Lattice(2)
    split = extract_contours(HeightField(lat, [[1, 0], [0, 1]]), 1, Sign.UP)
    assert sorted(c.length for c in split) == [4, 4]
    assert sorted(sorted(c.interior) for c in split) == [[(0, 0)], [(1, 1)]]
    joined = extract_contours(HeightField(lat, [[0, 1], [1, 0]]), 1, Sign.UP)
    assert len(joined) == 1
    assert joined[0].length == 8
    assert joined[0].interior == frozenset({(0, 1), (1, 0)})


def test_contour_basic_invariants(rand):
    for _ in range(60):
        side = int(rand.integers(2, 9))
        f = random_relaxed_field(rand, side, dips=4)
        for lev in levels_of(f):
            for sign in (Sign.UP, Sign.DOWN):
                for c in extract_contours(f, lev, sign):
                    assert c.length >= 4 and c.length % 2 == 0
                    assert len(c.interior) >= 1
                    assert c.length >= 4 * np.sqrt(len(c.interior)) - 1e-9


def test_interior_exterior_height_conditions(rand):
    for _ in range(40):
        side = int(rand.integers(2, 9))
        f = random_relaxed_field(rand, side, dips=4)
        for lev in levels_of(f):
            for sign in (Sign.UP, Sign.DOWN):
                for c in extract_contours(f, lev, sign):
                    for u, v in c.edges():
                        ins, outs = (u, v) if u in c.interior else (v, u)
                        assert ins in c.interior and outs not in c.interior
                        if sign is Sign.UP:
                            assert f.height_at(ins) >= lev
                            assert f.height_at(outs) <= lev - 1
                        else:
                            assert f.height_at(ins) <= lev
                            assert f.height_at(outs) >= lev + 1


def test_conservation_full_decomposition(rand):
    # every unit of gradient appears as one dual edge at exactly one level;
    # the level-h edge set splits into up-h plus down-(h-1) loops
    for _ in range(60):
        side = int(rand.integers(2, 9))
        f = random_relaxed_field(rand, side, dips=4)
        total = 0
        for lev in levels_of(f):
            total += sum(c.length for c in level_decomposition(f, lev))
        assert total == total_gradient(f)


def test_nesting_forest(rand):
    for _ in range(40):
        side = int(rand.integers(3, 9))
        f = random_relaxed_field(rand, side, dips=4)
        for lev in levels_of(f):
            ups = extract_contours(f, lev, Sign.UP)
            for i in range(len(ups)):
                for j in range(i + 1, len(ups)):
                    a, b = ups[i].interior, ups[j].interior
                    assert not (a & b) or a <= b or b <= a


def test_outermost_down_contour_pair_loop():
    lat = Lattice(4)
    h = np.full((4, 4), 2, dtype=np.int64)
    h[1, 1] = 0
    h[1, 2] = 0
    f = HeightField(lat, h, boundary=2)
    c = outermost_down_contour(f, ((1, 1), (1, 2)), 0)
    assert c is not None
    assert c.length == 6
    assert c.interior == frozenset({(1, 1), (1, 2)})


def test_outermost_down_contour_none():
    f = HeightField.flat(Lattice(4), 3, boundary=3)
    assert outermost_down_contour(f, ((1, 1), (1, 2)), 1) is None


def test_outermost_down_contour_nested():
    lat = Lattice(7)
    h = np.full((7, 7), 3, dtype=np.int64)
    h[1:6, 1:6] = 1
    h[3, 2:4] = 0
    f = HeightField(lat, h, boundary=3)
    c = outermost_down_contour(f, ((3, 2), (3, 3)), 1)
    assert len(c.interior) == 25


def test_outermost_rejects_non_adjacent():
    f = HeightField.flat(Lattice(4), 1)
    with pytest.raises(ValueError):
        outermost_down_contour(f, ((0, 0), (2, 2)), 1)


def test_delta_boundary_full_box():
    f = HeightField.flat(Lattice(5), 0)
    region = set(f.lattice.sites())
    assert delta_boundary(f, region) == 4 * 5


def test_delta_boundary_single_site():
    lat = Lattice(3)
    h = np.ones((3, 3), dtype=np.int64)
    h[1, 1] = 0
    f = HeightField(lat, h)
    assert delta_boundary(f, {(1, 1)}) == -4


def test_delta_boundary_matches_brute_force(rand):
    for _ in range(40):
        f = random_relaxed_field(rand, 6)
        region = {s for s in f.lattice.sites() if rand.random() < 0.4}
        if not region:
            continue
        plus = minus = 0
        for u in region:
            for v in f.lattice.neighbors(u):
                if v in region:
                    continue
                if f.height_at(u) >= f.height_at(v):
                    plus += 1
                else:
                    minus += 1
        assert delta_boundary(f, region) == plus - minus


def test_is_simply_connected():
    lat = Lattice(5)
    square = {(r, c) for r in range(1, 4) for c in range(1, 4)}
    assert is_simply_connected(lat, square)
    assert is_simply_connected(lat, {(0, 0)})
    with_hole = square - {(2, 2)}
    assert not is_simply_connected(lat, with_hole)
    two_parts = {(0, 0), (4, 4)}
    assert not is_simply_connected(lat, two_parts)
    # diagonal touching: high main diagonal splits under the corner rule
    assert not is_simply_connected(lat, {(0, 0), (1, 1)})
    # high anti-diagonal joins: a legal pinched interior
    assert is_simply_connected(lat, {(0, 1), (1, 0)})


def test_deterministic_extraction(rand):
    f = random_relaxed_field(rand, 7, dips=5)
    a = extract_contours(f, 1, Sign.UP)
    b = extract_contours(f, 1, Sign.UP)
    assert a == b
