import numpy as np
import pytest

from sospin.tiles import (Shape, SingletonComponentError, Tile, Tiling,
                          classify_shape, tile_cover)

# independent shape validator: canonical cell sets of the five tiles under
# all eight isometries, built from scratch
_SHAPES = {
    "domino": [(0, 0), (0, 1)],
    "straight3": [(0, 0), (0, 1), (0, 2)],
    "bent3": [(0, 0), (0, 1), (1, 1)],
    "t4": [(0, 0), (0, 1), (0, 2), (1, 1)],
    "plus5": [(1, 0), (1, 1), (1, 2), (0, 1), (2, 1)],
}


def _norm(cells):
    r0 = min(r for r, _ in cells)
    c0 = min(c for _, c in cells)
    return frozenset((r - r0, c - c0) for r, c in cells)


def _isometries(cells):
    out = set()
    cur = list(cells)
    for _ in range(4):
        cur = [(c, -r) for r, c in cur]
        out.add(_norm(cur))
        out.add(_norm([(-r, c) for r, c in cur]))
    return out


_LEGAL = set()
for base in _SHAPES.values():
    _LEGAL |= _isometries(base)


def assert_valid_tiling(tiling, region):
    seen = set()
    for tile in tiling.tiles:
        assert _norm(tile.sites) in _LEGAL, sorted(tile.sites)
        assert not (seen & tile.sites)
        seen |= tile.sites
    assert seen == set(region)
    assert 5 * len(tiling.tiles) >= len(region)


def grow_connected(rand, size, origin=(0, 0)):
    sites = {origin}
    while len(sites) < size:
        r, c = list(sites)[int(rand.integers(0, len(sites)))]
        dr, dc = [(-1, 0), (1, 0), (0, -1), (0, 1)][int(rand.integers(0, 4))]
        sites.add((r + dr, c + dc))
    return sites


def test_domino_pair():
    t = tile_cover({(0, 0), (0, 1)})
    assert len(t.tiles) == 1
    assert t.tiles[0].shape is Shape.DOMINO


def test_segment_of_five():
    region = {(0, c) for c in range(5)}
    t = tile_cover(region)
    assert_valid_tiling(t, region)


def test_plus_shape_uses_plus5():
    region = {(0, 0), (0, 1), (0, -1), (1, 0), (-1, 0)}
    t = tile_cover(region)
    assert [x.shape for x in t.tiles] == [Shape.PLUS5]


def test_t_shape():
    region = {(0, 0), (0, 1), (0, 2), (1, 1)}
    t = tile_cover(region)
    assert_valid_tiling(t, region)


def test_singleton_component_rejected():
    with pytest.raises(SingletonComponentError):
        tile_cover({(0, 0)})
    with pytest.raises(SingletonComponentError):
        tile_cover({(0, 0), (0, 1), (5, 5)})


def test_random_connected_regions(rand):
    for _ in range(200):
        size = int(rand.integers(2, 41))
        region = grow_connected(rand, size)
        t = tile_cover(region)
        assert_valid_tiling(t, region)


def test_multi_component_regions(rand):
    for _ in range(60):
        region = set()
        for k in range(int(rand.integers(1, 4))):
            origin = (int(rand.integers(0, 40)), int(rand.integers(0, 40)))
            comp = grow_connected(rand, int(rand.integers(2, 9)), origin)
            region |= comp
        # regrown components may merge; singleton components cannot appear
        t = tile_cover(region)
        assert_valid_tiling(t, region)


def test_cover_is_deterministic(rand):
    region = grow_connected(rand, 25)
    assert tile_cover(region) == tile_cover(region)


def test_tile_constructor_validates():
    with pytest.raises(ValueError):
        Tile(shape=Shape.DOMINO, sites=frozenset({(0, 0), (1, 1)}))
    with pytest.raises(ValueError):
        Tile(shape=Shape.T4, sites=frozenset({(0, 0), (0, 1)}))


def test_tiling_constructor_validates():
    a = Tile(shape=Shape.DOMINO, sites=frozenset({(0, 0), (0, 1)}))
    b = Tile(shape=Shape.DOMINO, sites=frozenset({(0, 1), (0, 2)}))
    with pytest.raises(ValueError):
        Tiling(tiles=(a, b), covered=frozenset({(0, 0), (0, 1), (0, 2)}))


def test_classify_shape():
    assert classify_shape([(3, 3), (4, 3)]) is Shape.DOMINO
    assert classify_shape([(0, 0), (1, 1)]) is None
    assert classify_shape([(0, 0), (1, 0), (2, 0), (1, 1)]) is Shape.T4
