"""Square-box height fields with frozen boundary ring and energy accounting.

The box is an ``side x side`` grid of interior sites surrounded by a ring of
boundary sites frozen at a single height.  All gradient sums include the
interior-boundary edges and exclude boundary-boundary edges; the pinning /
token terms count interior sites only.  Site order is row-major and fixed, so
every greedy or enumerative procedure downstream is deterministic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

Site = tuple[int, int]

NEIGHBOR_STEPS = ((-1, 0), (1, 0), (0, -1), (0, 1))


class Mode(enum.Enum):
    """Floor constraint flavor: hard floor, or the relaxed space where
    negative heights are allowed only at sites whose neighbors all sit at
    height >= 1."""

    NONNEGATIVE = "nonnegative"
    RELAXED = "relaxed"


class InadmissibleFieldError(ValueError):
    """A height field violates the constraint of its mode."""


@dataclass(frozen=True)
class Lattice:
    """An ``side x side`` box of interior sites, plus an implicit boundary ring.

    ``Lattice.standard(n)`` builds the symmetric box {-floor(n/2),...,floor(n/2)}^2
    used for the full-size model at parameter ``n`` (side ``2*floor(n/2)+1``);
    sites are exposed in 0-based (row, col) coordinates.
    """

    side: int

    def __post_init__(self):
        if self.side < 1:
            raise ValueError(f"side must be >= 1, got {self.side}")

    @classmethod
    def standard(cls, n: int) -> "Lattice":
        """The symmetric box for box parameter n (always odd side)."""
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        return cls(2 * (n // 2) + 1)

    @property
    def site_count(self) -> int:
        return self.side * self.side

    def sites(self) -> list[Site]:
        """All interior sites in the fixed row-major order."""
        s = self.side
        return [(r, c) for r in range(s) for c in range(s)]

    def contains(self, site: Site) -> bool:
        r, c = site
        return 0 <= r < self.side and 0 <= c < self.side

    def neighbors(self, site: Site) -> list[Site]:
        """4-neighborhood, including ring sites (coordinates outside the box)."""
        r, c = site
        return [(r + dr, c + dc) for dr, dc in NEIGHBOR_STEPS]

    def interior_neighbors(self, site: Site) -> list[Site]:
        return [p for p in self.neighbors(site) if self.contains(p)]

    def boundary_ring(self) -> list[Site]:
        """Ring sites adjacent to the box (the outer vertex boundary)."""
        s = self.side
        ring = []
        for c in range(s):
            ring.append((-1, c))
            ring.append((s, c))
        for r in range(s):
            ring.append((r, -1))
            ring.append((r, s))
        return ring


def _pair_violates(u: int, v: int) -> bool:
    # The relaxed-space constraint: no adjacent pair with one height <= -1 and
    # the other <= 0.
    return (u <= -1 and v <= 0) or (u <= 0 and v <= -1)


class HeightField:
    """Integer heights on a lattice's interior, with the ring frozen at ``boundary``.

    One execution context may mutate a field at a time; read-only snapshots
    (or copies) can be shared freely across parallel workers.
    """

    __slots__ = ("lattice", "heights", "boundary", "mode")

    def __init__(self, lattice: Lattice, heights, boundary: int = 0,
                 mode: Mode = Mode.NONNEGATIVE, validate: bool = True):
        self.lattice = lattice
        arr = np.array(heights, dtype=np.int64)
        if arr.shape != (lattice.side, lattice.side):
            raise ValueError(f"heights shape {arr.shape} != {(lattice.side, lattice.side)}")
        self.heights = arr
        self.boundary = int(boundary)
        self.mode = mode
        if validate and not is_admissible(self):
            raise InadmissibleFieldError("initial heights violate the mode constraint")

    @classmethod
    def flat(cls, lattice: Lattice, value: int, boundary: int = 0,
             mode: Mode = Mode.NONNEGATIVE) -> "HeightField":
        return cls(lattice, np.full((lattice.side, lattice.side), value, dtype=np.int64),
                   boundary=boundary, mode=mode)

    def copy(self) -> "HeightField":
        return HeightField(self.lattice, self.heights.copy(), self.boundary,
                           self.mode, validate=False)

    def height_at(self, site: Site) -> int:
        """Height at an interior site, or the ring height outside the box."""
        r, c = site
        if 0 <= r < self.lattice.side and 0 <= c < self.lattice.side:
            return int(self.heights[r, c])
        return self.boundary

    def with_height(self, site: Site, value: int) -> "HeightField":
        out = self.copy()
        out.heights[site] = value
        return out

    def key(self) -> tuple:
        """Hashable identity of the configuration (used for injectivity checks)."""
        return (self.lattice.side, self.boundary, self.mode.value,
                tuple(int(v) for v in self.heights.ravel()))


@dataclass(frozen=True)
class ModelParams:
    """Inverse temperature, pinning reward, and the boundary condition."""

    beta: float
    lam: float = 0.0
    boundary_height: int = 0
    region: frozenset | None = None  # None means the whole box

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if self.lam < 0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")
        if self.boundary_height < 0:
            raise ValueError(f"boundary_height must be >= 0, got {self.boundary_height}")


def q2_set(field: HeightField) -> set[Site]:
    """Interior sites at height <= 0 having some interior neighbor at <= 0.

    The frozen ring never witnesses membership: it enters the measure through
    the gradient only, which is what makes a single zero worth exactly the
    geometric run of negative heights it replaces at critical pinning.  In
    relaxed mode the members necessarily sit at height exactly 0.
    """
    out = set()
    h = field.heights
    side = field.lattice.side
    for r in range(side):
        for c in range(side):
            if h[r, c] > 0:
                continue
            for dr, dc in NEIGHBOR_STEPS:
                rr, cc = r + dr, c + dc
                if 0 <= rr < side and 0 <= cc < side and h[rr, cc] <= 0:
                    out.add((r, c))
                    break
    return out


def is_admissible(field: HeightField) -> bool:
    """Mode constraint: all heights >= 0, or no interior adjacent pair with
    one height <= -1 and the other <= 0.  Like the paired-zero set, the
    constraint lives on interior pairs; the frozen ring only carries gradient."""
    h = field.heights
    if field.mode is Mode.NONNEGATIVE:
        return bool((h >= 0).all())
    return not (_pairs_violate(h[:, :-1], h[:, 1:])
                or _pairs_violate(h[:-1, :], h[1:, :]))


def _pairs_violate(a, b) -> bool:
    return bool((((a <= -1) & (b <= 0)) | ((a <= 0) & (b <= -1))).any())


def total_gradient(field: HeightField) -> int:
    """Sum of |height differences| over all interior-interior and
    interior-ring edges, each unordered pair once."""
    h = field.heights
    g = int(np.abs(h[:, 1:] - h[:, :-1]).sum())
    g += int(np.abs(h[1:, :] - h[:-1, :]).sum())
    b = field.boundary
    for edge in (h[0, :], h[-1, :], h[:, 0], h[:, -1]):
        g += int(np.abs(edge - b).sum())
    return g


def pinned_count(field: HeightField) -> int:
    """Number of sites earning the pinning reward in the field's mode."""
    if field.mode is Mode.NONNEGATIVE:
        return int((field.heights == 0).sum())
    return len(q2_set(field))


def energy(field: HeightField, params: ModelParams) -> float:
    """E = beta * total_gradient - lambda * (pinned sites); weight is exp(-E).

    Raises InadmissibleFieldError if the field violates its mode constraint.
    """
    if not is_admissible(field):
        raise InadmissibleFieldError("field is not admissible for its mode")
    return params.beta * total_gradient(field) - params.lam * pinned_count(field)


def energy_delta(field: HeightField, site: Site, new_height: int,
                 params: ModelParams) -> float:
    """Exact energy change of replacing one site's height.

    Touches only the site, its neighbors, and their neighbors (for token
    membership changes); equals full recomputation exactly.  Raises
    InadmissibleFieldError when the replacement breaks the mode constraint.
    """
    old = field.height_at(site)
    if new_height == old:
        return 0.0
    if field.mode is Mode.NONNEGATIVE:
        if new_height < 0:
            raise InadmissibleFieldError(f"height {new_height} < 0 at {site}")
    else:
        for nb in field.lattice.interior_neighbors(site):
            if _pair_violates(new_height, field.height_at(nb)):
                raise InadmissibleFieldError(
                    f"replacement {site}->{new_height} violates the relaxed "
                    f"constraint against neighbor {nb}")

    dgrad = 0
    for nb in field.lattice.neighbors(site):
        v = field.height_at(nb)
        dgrad += abs(new_height - v) - abs(old - v)

    if field.mode is Mode.NONNEGATIVE:
        dtok = int(new_height == 0) - int(old == 0)
    else:
        dtok = _token_delta_relaxed(field, site, new_height)
    return params.beta * dgrad - params.lam * dtok


def _token_delta_relaxed(field: HeightField, site: Site, new_height: int) -> int:
    """Change in |Q>=2| from one replacement: only the site and its interior
    neighbors can change membership."""
    before = after = 0
    affected = [site] + field.lattice.interior_neighbors(site)
    for t in affected:
        before += _q2_member(field, t, site, field.height_at(site))
        after += _q2_member(field, t, site, new_height)
    return after - before


def _q2_member(field: HeightField, t: Site, changed: Site, changed_value: int) -> int:
    def val(p: Site) -> int:
        return changed_value if p == changed else field.height_at(p)

    if val(t) > 0:
        return 0
    for nb in field.lattice.interior_neighbors(t):
        if val(nb) <= 0:
            return 1
    return 0


def edge_boundary_count(sites) -> int:
    """|edge boundary| of a site set in Z^2: edges with exactly one end inside."""
    s = set(sites)
    internal = 0
    for (r, c) in s:
        if (r, c + 1) in s:
            internal += 1
        if (r + 1, c) in s:
            internal += 1
    return 4 * len(s) - 2 * internal
