"""Exact invertible transforms on relaxed height fields with weight accounting.

The lifting map raises a subregion by one while keeping a fixed set W and a
chosen set A of paired zeros in place, and reports the exact log-weight-ratio
exponent of the move; its inverse reconstructs A from the lifted field alone.
The shift-down map lowers a contour interior by one, and the tooth-injection
map lifts everything by one while planting (0,1) teeth on a prescribed set of
disjoint level pairs.  All maps validate their preconditions, naming the first
offending site in the fixed row-major order, and all are exactly invertible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .contours import delta_boundary, is_simply_connected
from .lattice import (HeightField, Mode, ModelParams, edge_boundary_count,
                      is_admissible, q2_set)
from .measure import target_height


class TransformPreconditionError(ValueError):
    """A transform's hypothesis fails; the message names the offending site."""


class NotInImageError(ValueError):
    """The field is not the image of the map being inverted."""


@dataclass(frozen=True)
class LiftSpec:
    """The subregion to lift, the kept set W, and the kept zero-set A."""

    s_prime: frozenset
    w: frozenset
    a: frozenset

    def __post_init__(self):
        if not self.w <= self.s_prime:
            raise ValueError("W must be contained in S'")
        if not self.a <= self.s_prime:
            raise ValueError("A must be contained in S'")
        if self.a & self.w:
            raise ValueError("A and W must be disjoint")

    @classmethod
    def of(cls, s_prime, w=(), a=()) -> "LiftSpec":
        return cls(frozenset(s_prime), frozenset(w), frozenset(a))


def _sorted_sites(sites):
    return sorted(sites)


def _check_lift_preconditions(field: HeightField, spec: LiftSpec) -> None:
    if field.mode is not Mode.RELAXED:
        raise TransformPreconditionError("lift requires a relaxed-mode field")
    if not is_admissible(field):
        raise TransformPreconditionError("input field is not admissible")
    lat = field.lattice
    for site in _sorted_sites(spec.s_prime):
        if not lat.contains(site):
            raise TransformPreconditionError(f"S' site {site} is outside the box")
    q2 = q2_set(field)
    for site in _sorted_sites(spec.a):
        if site not in q2:
            raise TransformPreconditionError(
                f"A site {site} is not a paired zero of the field")
    # interior sites outside S' that touch S' must sit at height >= 1
    exterior = set()
    for site in spec.s_prime:
        for nb in lat.neighbors(site):
            if lat.contains(nb) and nb not in spec.s_prime:
                exterior.add(nb)
    for site in _sorted_sites(exterior):
        if field.height_at(site) < 1:
            raise TransformPreconditionError(
                f"exterior neighbor {site} of S' has height "
                f"{field.height_at(site)} < 1")


def lift_U(field: HeightField, spec: LiftSpec) -> HeightField:
    """Raise the field by one on S' minus (W union A); the result is always
    admissible.  The exact weight-ratio bookkeeping of the move is computed by
    :func:`lift_exponent`."""
    _check_lift_preconditions(field, spec)
    lifted = field.copy()
    keep = spec.w | spec.a
    for site in spec.s_prime:
        if site not in keep:
            lifted.heights[site] += 1
    assert is_admissible(lifted)
    return lifted


def lift_exponent(field: HeightField, lifted: HeightField, spec: LiftSpec,
                  params: ModelParams) -> float:
    """The exact weight-ratio exponent of a lift, per the bookkeeping identity."""
    d = delta_boundary(field, spec.s_prime)
    q_before = len(q2_set(field))
    q_after = len(q2_set(lifted))
    return (-params.beta * d
            - params.beta * edge_boundary_count(spec.a)
            - params.beta * edge_boundary_count(spec.w)
            - params.lam * (q_before - q_after))


def invert_U(lifted: HeightField, s_prime, w):
    """Reconstruct (field, A) from the image of a lift with the given S', W.

    A is recovered as the zeros of the lifted field in S' minus W that are
    adjacent either to a value in {0, 1} inside S' minus W or to a zero of W.
    Raises NotInImageError when the round trip fails to reproduce the input.
    """
    s_prime = frozenset(s_prime)
    w = frozenset(w)
    lat = lifted.lattice
    body = s_prime - w
    zeros = {z for z in body if lifted.height_at(z) == 0}
    a = set()
    for z in zeros:
        for v in lat.neighbors(z):
            if v in body and lifted.height_at(v) in (0, 1):
                a.add(z)
                break
            if v in w and lifted.height_at(v) == 0:
                a.add(z)
                break
    field = lifted.copy()
    for site in body:
        if site not in a:
            field.heights[site] -= 1
    spec = LiftSpec(s_prime, w, frozenset(a))
    try:
        again = lift_U(field, spec)
    except (TransformPreconditionError, AssertionError) as exc:
        raise NotInImageError(f"round trip failed: {exc}") from exc
    if not (again.heights == lifted.heights).all():
        raise NotInImageError("round trip does not reproduce the input field")
    return field, frozenset(a)


def shift_down(field: HeightField, region) -> HeightField:
    """Lower the interior of a simply connected up-contour by one.

    Preconditions: the boundary of the region is an up h-contour for some
    h >= 1 (all inner vertex-boundary heights >= h, all exterior
    vertex-boundary heights <= h-1), and no adjacent pair x, y inside the
    region has height(x) <= 0 with height(y) <= 1.  The move lowers the
    gradient across the bounding contour by exactly its length.
    """
    if field.mode is not Mode.RELAXED:
        raise TransformPreconditionError("shift_down requires a relaxed-mode field")
    s = frozenset(region)
    lat = field.lattice
    if not is_simply_connected(lat, s):
        raise TransformPreconditionError("region is not simply connected")
    inner, outer = set(), set()
    for site in s:
        for nb in lat.neighbors(site):
            if nb not in s:
                inner.add(site)
                outer.add(nb)
    m = min(field.height_at(p) for p in inner)
    big = max(field.height_at(p) for p in outer)
    if m < 1 or big > m - 1:
        raise TransformPreconditionError(
            f"region boundary is not an up h-contour with h >= 1: inner min "
            f"{m}, exterior max {big}")
    for x in _sorted_sites(s):
        hx = field.height_at(x)
        if hx > 0:
            continue
        for y in lat.neighbors(x):
            if y in s and field.height_at(y) <= 1:
                raise TransformPreconditionError(
                    f"pair {x}~{y} at heights ({hx},{field.height_at(y)}) "
                    f"blocks the shift")
    for x in _sorted_sites(inner):
        if field.height_at(x) != 1:
            continue
        for y in lat.neighbors(x):
            if y not in s and field.height_at(y) <= -1:
                raise TransformPreconditionError(
                    f"boundary defect: crossing pair {x}~{y} at heights "
                    f"(1,{field.height_at(y)}) would violate the constraint")
    out = field.copy()
    for site in s:
        out.heights[site] -= 1
    assert is_admissible(out)
    return out


def compute_Xk(field: HeightField, n: int, beta: float, k: int) -> set:
    """Unordered adjacent pairs both at height h_star - k with no neighbor of
    either endpoint at height <= 0 (the endpoints count as each other's
    neighbors, so the set is empty whenever h_star - k <= 0)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    target = target_height(n, beta).h_star - k
    lat = field.lattice
    side = lat.side
    pairs = set()
    for r in range(side):
        for c in range(side):
            x = (r, c)
            if field.height_at(x) != target:
                continue
            for y in ((r, c + 1), (r + 1, c)):
                if not lat.contains(y) or field.height_at(y) != target:
                    continue
                ok = True
                for z in lat.neighbors(x) + lat.neighbors(y):
                    if field.height_at(z) <= 0:
                        ok = False
                        break
                if ok:
                    pairs.add((x, y) if x < y else (y, x))
    return pairs


def greedy_disjoint_pairs(pairs) -> list:
    """Vertex-disjoint subset collected by scanning pairs in lexicographic
    order; always at least one seventh of the input survives."""
    chosen = []
    used: set = set()
    for x, y in sorted(tuple(sorted(p)) for p in pairs):
        if x in used or y in used:
            continue
        chosen.append((x, y))
        used.add(x)
        used.add(y)
    return chosen


def shift_T(field: HeightField, pairs, n: int, beta: float, k: int) -> HeightField:
    """Lift the field by one, then plant a (0, 1) tooth on every ordered pair.

    The pairs must be drawn from greedy_disjoint_pairs(compute_Xk(...)) for
    the same (n, beta, k); the planted set can then be read back off the image
    by :func:`invert_T`.
    """
    if field.mode is not Mode.RELAXED:
        raise TransformPreconditionError("shift_T requires a relaxed-mode field")
    legal = set(greedy_disjoint_pairs(compute_Xk(field, n, beta, k)))
    for p in pairs:
        if tuple(p) not in legal:
            raise TransformPreconditionError(
                f"pair {p} is not in the canonical disjoint-pair list")
    out = field.copy()
    out.heights += 1
    for x, y in pairs:
        out.heights[x] = 0
        out.heights[y] = 1
    assert is_admissible(out)
    return out


def invert_T(lifted: HeightField, n: int, beta: float, k: int):
    """Recover (field, pairs) from the image of shift_T.

    Tooth vertices are exactly the sites at value 0 or 1 adjacent to a site
    at the other of those two values; everything else shifts back down.
    """
    lat = lifted.lattice
    tooth: set = set()
    for site in lat.sites():
        v = lifted.height_at(site)
        if v not in (0, 1):
            continue
        other = 1 - v
        for nb in lat.interior_neighbors(site):
            if lifted.height_at(nb) == other:
                tooth.add(site)
                break
    target = target_height(n, beta).h_star - k
    field = lifted.copy()
    field.heights -= 1
    for site in tooth:
        field.heights[site] = target
    if not is_admissible(field):
        raise NotInImageError("downshifted field is not admissible")
    legal = greedy_disjoint_pairs(compute_Xk(field, n, beta, k))
    pairs = [p for p in legal if p[0] in tooth and p[1] in tooth]
    covered = {s for p in pairs for s in p}
    if covered != tooth:
        raise NotInImageError("tooth vertices do not match the canonical pairs")
    again = shift_T(field, pairs, n, beta, k)
    if not (again.heights == lifted.heights).all():
        raise NotInImageError("round trip does not reproduce the input field")
    return field, pairs
