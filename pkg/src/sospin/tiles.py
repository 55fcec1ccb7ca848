"""Covering vertex sets by the five admissible tile shapes.

The shapes are the domino, the straight and bent triominoes, the T-tetromino,
and the plus-pentomino, up to rotation and reflection.  Any finite subset of
Z^2 whose connected components all have at least two sites can be covered:
a rooted spanning tree is consumed from its deepest leaves, and because the
deepest leaf's parent has all its children as leaves, the detached cluster
(parent plus children, absorbing the grandparent when it would be stranded)
is always one of the five shapes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .lattice import NEIGHBOR_STEPS


class Shape(enum.Enum):
    DOMINO = "domino"
    STRAIGHT3 = "straight3"
    BENT3 = "bent3"
    T4 = "t4"
    PLUS5 = "plus5"


_BASE_SHAPES = {
    Shape.DOMINO: ((0, 0), (0, 1)),
    Shape.STRAIGHT3: ((0, 0), (0, 1), (0, 2)),
    Shape.BENT3: ((0, 0), (0, 1), (1, 1)),
    Shape.T4: ((0, 0), (0, 1), (0, 2), (1, 1)),
    Shape.PLUS5: ((0, 0), (0, 1), (0, 2), (1, 1), (-1, 1)),
}


def _canonical(cells) -> tuple:
    rmin = min(r for r, _ in cells)
    cmin = min(c for _, c in cells)
    return tuple(sorted((r - rmin, c - cmin) for r, c in cells))


def _all_orientations(base) -> set:
    forms = set()
    cells = list(base)
    for _ in range(4):
        cells = [(c, -r) for r, c in cells]  # rotate 90 degrees
        forms.add(_canonical(cells))
        forms.add(_canonical([(r, -c) for r, c in cells]))  # reflect
    return forms


_CANONICAL_FORMS = {shape: _all_orientations(base)
                    for shape, base in _BASE_SHAPES.items()}


def classify_shape(cells) -> Shape | None:
    """The tile shape of a site set, or None when it matches no tile."""
    canon = _canonical(cells)
    for shape, forms in _CANONICAL_FORMS.items():
        if canon in forms:
            return shape
    return None


@dataclass(frozen=True)
class Tile:
    shape: Shape
    sites: frozenset

    def __post_init__(self):
        if classify_shape(self.sites) is not self.shape:
            raise ValueError(f"sites {sorted(self.sites)} are not a {self.shape}")


@dataclass(frozen=True)
class Tiling:
    tiles: tuple
    covered: frozenset

    def __post_init__(self):
        seen: set = set()
        for t in self.tiles:
            if seen & t.sites:
                raise ValueError("tiles overlap")
            seen |= t.sites
        if seen != self.covered:
            raise ValueError("tiles do not cover the set exactly")
        assert 5 * len(self.tiles) >= len(self.covered)


class SingletonComponentError(ValueError):
    """A connected component of size one cannot be covered by any tile."""


def _components(sites) -> list:
    remaining = set(sites)
    comps = []
    while remaining:
        seed = min(remaining)
        comp = {seed}
        frontier = [seed]
        while frontier:
            r, c = frontier.pop()
            for dr, dc in NEIGHBOR_STEPS:
                nb = (r + dr, c + dc)
                if nb in remaining and nb not in comp:
                    comp.add(nb)
                    frontier.append(nb)
        comps.append(comp)
        remaining -= comp
    return comps


def _spanning_tree(comp: set):
    """BFS tree from the smallest site; returns (parent, children, depth)."""
    root = min(comp)
    parent = {root: None}
    children: dict = {root: []}
    depth = {root: 0}
    queue = [root]
    head = 0
    while head < len(queue):
        site = queue[head]
        head += 1
        r, c = site
        for dr, dc in NEIGHBOR_STEPS:
            nb = (r + dr, c + dc)
            if nb in comp and nb not in parent:
                parent[nb] = site
                children[nb] = []
                children[site].append(nb)
                depth[nb] = depth[site] + 1
                queue.append(nb)
    return root, parent, children, depth


def _emit(cluster: list) -> Tile:
    shape = classify_shape(cluster)
    if shape is None:  # cannot happen for parent-plus-leaf-children clusters
        raise RuntimeError(f"cluster {sorted(cluster)} matches no tile shape")
    return Tile(shape=shape, sites=frozenset(cluster))


def tile_cover(region) -> Tiling:
    """A deterministic cover of the region by the five tile shapes.

    Raises SingletonComponentError when some connected component has a single
    site (such components never occur for the zero-pair site sets this is
    applied to).
    """
    sites = set(region)
    tiles: list = []
    for comp in _components(sites):
        if len(comp) == 1:
            raise SingletonComponentError(f"singleton component at {min(comp)}")
        root, parent, children, depth = _spanning_tree(comp)
        alive = set(comp)
        while alive:
            deepest = max(alive, key=lambda s: (depth[s], s))
            if deepest == root:  # root alone can only remain if comp was consumed
                raise RuntimeError("stranded root; spanning tree invariant broken")
            u = parent[deepest]
            cluster = [u] + children[u]  # deepest's siblings are all leaves
            rest = len(alive) - len(cluster)
            if rest == 1:
                # absorbing the stranded root keeps the cluster a valid shape:
                # u gains its parent as one more arm
                cluster.append(parent[u])
                rest = 0
            tiles.append(_emit(cluster))
            alive -= set(cluster)
            if rest == 0:
                break
            p = parent[u]
            children[p].remove(u)
    return Tiling(tiles=tuple(tiles), covered=frozenset(sites))
