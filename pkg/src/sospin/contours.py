"""Level-set contour extraction on the dual lattice with SE-NW corner splitting.

The level-h edge set consists of the dual edges separating adjacent cells u, v
(boundary ring included) with height(u) >= h and height(v) <= h-1.  At a dual
vertex where four such edges meet, the south and east incident segments are
paired into one corner and the north and west into the other; this fixed rule
makes the decomposition into closed loops unique.  Each loop encloses either
its high side (an up h-contour) or its low side (a down (h-1)-contour).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .lattice import HeightField, Lattice

# Slots of the four dual segments incident to a corner, and the SE-NW pairing.
_N, _S, _E, _W = 0, 1, 2, 3
_SE_NW_PARTNER = {_S: _E, _E: _S, _N: _W, _W: _N}
_OPPOSITE = {_N: _S, _S: _N, _E: _W, _W: _E}


class Sign(enum.Enum):
    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class Contour:
    """A closed dual loop at an integer level with its enclosed cells.

    ``loop`` is the cyclic tuple of directed corner-to-corner segments;
    ``interior`` is the frozenset of enclosed sites.  For sign UP at level h,
    the cell just inside each loop segment has height >= h and the cell just
    outside has height <= h-1; for sign DOWN at level h the inside is <= h
    and the outside is >= h+1.
    """

    level: int
    sign: Sign
    loop: tuple
    interior: frozenset

    @property
    def length(self) -> int:
        return len(self.loop)

    def edges(self) -> list:
        """Canonical (cell, cell) pairs separated by the loop segments."""
        out = []
        for (a, b), (a2, b2) in self.loop:
            if b == b2:
                r = min(a, a2)
                pair = ((r, b - 1), (r, b))
            else:
                c = min(b, b2)
                pair = ((a - 1, c), (a, c))
            out.append(pair)
        return out


def _level_segments(field: HeightField, h: int) -> dict:
    """Directed dual segments of the level-h edge set, high side on the left.

    Maps each corner to the sorted list of (slot, end_corner) for segments
    leaving it.  Vertical segments run north when the west cell is high and
    south when the east cell is high; horizontal segments run east when the
    north cell is high and west when the south cell is high.
    """
    side = field.lattice.side
    padded = np.full((side + 2, side + 2), field.boundary >= h, dtype=bool)
    padded[1:-1, 1:-1] = field.heights >= h

    outgoing: dict = {}

    def add(start, slot, end):
        outgoing.setdefault(start, []).append((slot, end))

    west_cells = padded[1:-1, :-1]
    east_cells = padded[1:-1, 1:]
    for r, b in np.argwhere(west_cells != east_cells):
        r, b = int(r), int(b)
        if west_cells[r, b]:
            add((r + 1, b), _N, (r, b))
        else:
            add((r, b), _S, (r + 1, b))
    north_cells = padded[:-1, 1:-1]
    south_cells = padded[1:, 1:-1]
    for a, c in np.argwhere(north_cells != south_cells):
        a, c = int(a), int(c)
        if north_cells[a, c]:
            add((a, c), _E, (a, c + 1))
        else:
            add((a, c + 1), _W, (a, c))
    for p in outgoing:
        outgoing[p].sort()
    return outgoing


def _trace_loops(outgoing: dict) -> list:
    """Decompose the directed segments into loops under the SE-NW rule."""
    loops = []
    used: set = set()
    for p0 in sorted(outgoing):
        for slot0, q0 in outgoing[p0]:
            if (p0, slot0) in used:
                continue
            loop = []
            p, slot, q = p0, slot0, q0
            while True:
                used.add((p, slot))
                loop.append((p, q))
                arrive = _OPPOSITE[slot]
                options = outgoing[q]
                if len(options) == 2:  # crossing: two outgoing segments
                    want = _SE_NW_PARTNER[arrive]
                    chosen = [(s, e) for s, e in options if s == want]
                    if not chosen:
                        raise RuntimeError(f"SE-NW pairing broken at corner {q}")
                    slot, end = chosen[0]
                else:
                    slot, end = options[0]
                p, q = q, end
                if (p, slot) == (p0, slot0):
                    break
            loops.append(loop)
    return loops


def _interior_cells(loop) -> frozenset:
    """Cells enclosed by a loop, by horizontal-ray parity over its vertical
    segments (correct for loops that pinch at corners)."""
    by_row: dict = {}
    for (a, b), (a2, b2) in loop:
        if b == b2:
            by_row.setdefault(min(a, a2), []).append(b)
    cells = set()
    for r, cols in by_row.items():
        cols.sort()
        for i in range(0, len(cols) - 1, 2):
            for c in range(cols[i], cols[i + 1]):
                cells.add((r, c))
    return frozenset(cells)


def _loop_sign_and_level(loop, interior, edge_level: int):
    """Classify a level-h loop: UP at h when it encloses its high side,
    DOWN at h-1 when it encloses its low side."""
    (a, b), (a2, b2) = loop[0]
    if b == b2:
        r = min(a, a2)
        high_cell = (r, b - 1) if a > a2 else (r, b)
    else:
        c = min(b, b2)
        high_cell = (a - 1, c) if b2 > b else (a, c)
    if high_cell in interior:
        return Sign.UP, edge_level
    return Sign.DOWN, edge_level - 1


def extract_contours(field: HeightField, h: int, sign: Sign) -> list[Contour]:
    """All contours of the given sign at level h, deterministically ordered.

    Up h-contours and down (h-1)-contours together form the canonical loop
    decomposition of the level-h edge set; this returns the requested half.
    Contours of one sign and level are pairwise nested or disjoint.
    """
    edge_level = h if sign is Sign.UP else h + 1
    loops = _trace_loops(_level_segments(field, edge_level))
    out = []
    for loop in loops:
        interior = _interior_cells(loop)
        this_sign, level = _loop_sign_and_level(loop, interior, edge_level)
        if this_sign is sign:
            out.append(Contour(level=level, sign=sign, loop=tuple(loop),
                               interior=interior))
    out.sort(key=lambda c: min(c.loop))
    return out


def level_decomposition(field: HeightField, h: int) -> list[Contour]:
    """The full loop decomposition of the level-h edge set: up h-contours
    plus down (h-1)-contours.  Summing its total length over all levels
    reproduces the total gradient exactly."""
    return extract_contours(field, h, Sign.UP) + extract_contours(field, h - 1, Sign.DOWN)


def outermost_down_contour(field: HeightField, pair, h: int) -> Contour | None:
    """Among down h-contours whose interior contains both sites of the
    adjacent pair, the one not contained in any other; None if no down
    h-contour contains the pair."""
    x, y = pair
    if y not in field.lattice.neighbors(x):
        raise ValueError(f"{x} and {y} are not adjacent")
    candidates = [c for c in extract_contours(field, h, Sign.DOWN)
                  if x in c.interior and y in c.interior]
    if not candidates:
        return None
    return max(candidates, key=lambda c: len(c.interior))


def delta_boundary(field: HeightField, region) -> int:
    """Signed disagreement count over edges leaving the region: +1 when the
    inside height is >= the outside height, -1 otherwise (ring included)."""
    s = set(region)
    total = 0
    for site in s:
        u = field.height_at(site)
        for nb in field.lattice.neighbors(site):
            if nb in s:
                continue
            total += 1 if u >= field.height_at(nb) else -1
    return total


def is_simply_connected(lattice: Lattice, region) -> bool:
    """True when the region can be the interior of a single contour under the
    SE-NW rule (its indicator field has exactly one loop enclosing it)."""
    s = set(region)
    if not s:
        return False
    heights = np.zeros((lattice.side, lattice.side), dtype=np.int64)
    for site in s:
        if not lattice.contains(site):
            return False
        heights[site] = 1
    field = HeightField(lattice, heights, boundary=0, validate=False)
    loops = _trace_loops(_level_segments(field, 1))
    if len(loops) != 1:
        return False
    return _interior_cells(loops[0]) == s
