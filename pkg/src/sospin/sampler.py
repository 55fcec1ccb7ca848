"""Seeded single-site heat-bath chains with per-sweep measurement extraction.

Chains run deterministic sequential sweeps (fixed row-major site order) driven
by counter-based uniforms, so a (seed, chain id, config) triple pins the whole
record stream bit for bit.  Statistics are maintained online by the kernel;
contour statistics are computed at measurement time only.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field, replace

import numpy as np

from . import rng
from ._sweepkernel import full_stats, run_block, site_conditional
from .contours import Sign, extract_contours
from .lattice import HeightField, Lattice, Mode, ModelParams, is_admissible
from .measure import target_height

RNG_BLOCK_SWEEPS = 64


@dataclass(frozen=True)
class StartSpec:
    """Initial condition: a flat height, the window top, or the flat minimum."""

    kind: str  # "flat" | "top" | "bottom"
    height: int = 0

    @classmethod
    def flat(cls, h: int) -> "StartSpec":
        return cls("flat", h)

    @classmethod
    def top(cls) -> "StartSpec":
        return cls("top")

    @classmethod
    def bottom(cls) -> "StartSpec":
        return cls("bottom")


@dataclass(frozen=True)
class ChainConfig:
    n: int
    params: ModelParams
    mode: Mode = Mode.NONNEGATIVE
    window: tuple[int, int] | None = None
    sweeps: int = 1000
    burn_in: int = 100
    thinning: int = 1
    seed: int = 0
    chain_id: int = 0
    start: StartSpec = dataclass_field(default_factory=StartSpec.bottom)
    contour_level: int | None = None  # None: use h_star + 1
    contour_stats: bool = True
    debug_checks: bool = False

    def __post_init__(self):
        if self.burn_in >= self.sweeps:
            raise ValueError("burn_in must be smaller than sweeps")
        if self.thinning < 1:
            raise ValueError("thinning must be >= 1")

    def resolved_window(self) -> tuple[int, int]:
        if self.window is not None:
            lo, hi = self.window
        else:
            h_star = target_height(max(self.n, 2), self.params.beta).h_star
            hi = h_star + 10
            lo = 0 if self.mode is Mode.NONNEGATIVE else -6
        if self.mode is Mode.NONNEGATIVE and lo < 0:
            lo = 0
        if not (lo <= self.params.boundary_height <= hi):
            raise ValueError("window must contain the boundary height")
        return lo, hi

    def start_height(self) -> int:
        lo, hi = self.resolved_window()
        if self.start.kind == "top":
            return hi
        if self.start.kind == "bottom":
            return max(lo, 0)  # the lowest flat admissible height
        h = self.start.height
        if not (lo <= h <= hi):
            raise ValueError(
                f"start height {h} escapes the window [{lo},{hi}]; widen the window")
        return h


@dataclass(frozen=True)
class MeasurementRecord:
    sweep: int
    window_lo: int
    histogram: np.ndarray  # counts per height in the window; mass = site count
    modal_height: int
    frac_in_band: float  # fraction of sites at {h_star - 1, h_star}
    q2_count: int
    total_gradient: int
    up_area: int  # total interior area of outermost up (level) contours
    max_up_len: int  # longest up contour at that level
    contour_level: int


class _ChainState:
    """Heights plus the kernel's online statistics and lookup tables."""

    def __init__(self, config: ChainConfig, heights: np.ndarray):
        self.config = config
        lat = Lattice.standard(config.n)
        self.lattice = lat
        self.heights = heights
        lo, hi = config.resolved_window()
        self.lo, self.hi = lo, hi
        b = config.params.boundary_height
        gmax = 4 * (hi - lo + max(abs(b - lo), abs(hi - b))) + 8
        self.exp_table = np.exp(-config.params.beta * np.arange(gmax, dtype=np.float64))
        self.bonus_table = np.exp(config.params.lam * np.arange(6, dtype=np.float64))
        self.q2, self.grad = full_stats(heights, lat.side, b)

    def run_sweeps(self, uniforms: np.ndarray) -> None:
        cfg = self.config
        self.q2, self.grad = run_block(
            self.heights, self.lattice.side, cfg.params.boundary_height,
            cfg.params.beta, cfg.params.lam, cfg.mode is Mode.RELAXED,
            self.lo, self.hi, uniforms, self.q2, self.grad,
            self.exp_table, self.bonus_table)


def _initial_heights(config: ChainConfig) -> np.ndarray:
    lat = Lattice.standard(config.n)
    return np.full((lat.side, lat.side), config.start_height(), dtype=np.int64)


def _uniform_rows(config: ChainConfig, nsites: int, first: int, last: int):
    """Uniform rows for sweeps [first, last), served from fixed-size blocks so
    the (sweep, site) -> uniform map is independent of measurement cadence."""
    s = first
    while s < last:
        block = s // RNG_BLOCK_SWEEPS
        offset = s - block * RNG_BLOCK_SWEEPS
        take = min(RNG_BLOCK_SWEEPS - offset, last - s)
        u = rng.sweep_uniforms(config.seed, config.chain_id, block,
                               RNG_BLOCK_SWEEPS, nsites)
        yield u[offset:offset + take]
        s += take


def _measure(state: _ChainState, sweep: int) -> MeasurementRecord:
    cfg = state.config
    side = state.lattice.side
    h_star = target_height(max(cfg.n, 2), cfg.params.beta).h_star
    lo, hi = state.lo, state.hi
    hist = np.bincount((state.heights - lo).ravel(), minlength=hi - lo + 1)
    modal = lo + int(np.argmax(hist))
    band = 0
    for h in (h_star - 1, h_star):
        if lo <= h <= hi:
            band += int(hist[h - lo])
    level = cfg.contour_level if cfg.contour_level is not None else h_star + 1
    up_area = 0
    max_len = 0
    if cfg.contour_stats:
        field = HeightField(state.lattice, state.heights,
                            boundary=cfg.params.boundary_height,
                            mode=cfg.mode, validate=False)
        ups = extract_contours(field, level, Sign.UP)
        if ups:
            max_len = max(c.length for c in ups)
            inner = set()
            for c in sorted(ups, key=lambda c: -len(c.interior)):
                if not (c.interior & inner):
                    up_area += len(c.interior)
                inner |= c.interior
    if cfg.debug_checks:
        field = HeightField(state.lattice, state.heights,
                            boundary=cfg.params.boundary_height,
                            mode=cfg.mode, validate=False)
        assert is_admissible(field)
        q2_ref, grad_ref = full_stats(state.heights, side,
                                      cfg.params.boundary_height)
        assert (state.q2, state.grad) == (q2_ref, grad_ref)
    return MeasurementRecord(
        sweep=sweep, window_lo=lo, histogram=hist, modal_height=modal,
        frac_in_band=band / (side * side), q2_count=int(state.q2),
        total_gradient=int(state.grad), up_area=up_area, max_up_len=max_len,
        contour_level=level)


def run_chain(config: ChainConfig):
    """Generator of MeasurementRecords, one every `thinning` sweeps after the
    burn-in; bit-reproducible given (seed, chain_id, config)."""
    state = _ChainState(config, _initial_heights(config))
    nsites = state.lattice.side ** 2
    sweep = 0
    for u in _uniform_rows(config, nsites, 0, config.burn_in):
        state.run_sweeps(u)
        sweep += u.shape[0]
    while sweep < config.sweeps:
        nxt = min(sweep + config.thinning, config.sweeps)
        for u in _uniform_rows(config, nsites, sweep, nxt):
            state.run_sweeps(u)
            sweep += u.shape[0]
        yield _measure(state, sweep)


def chain_conditional(state_heights, config: ChainConfig, site) -> dict:
    """The kernel's conditional at one site of a standing configuration,
    normalized; diagnostic used to cross-check the reference conditional."""
    state = _ChainState(config, np.array(state_heights, dtype=np.int64))
    w = site_conditional(state.heights, state.lattice.side,
                         config.params.boundary_height, config.params.beta,
                         config.params.lam, config.mode is Mode.RELAXED,
                         state.lo, state.hi, site[0], site[1],
                         state.exp_table, state.bonus_table)
    total = w.sum()
    return {state.lo + j: w[j] / total for j in range(len(w)) if w[j] > 0}


def dual_start_diagnostic(config: ChainConfig):
    """Site-count gap per sweep between shared-randomness chains started at
    the window top and at the flat minimum.  Under the hard-floor dynamics the
    top chain dominates the bottom chain pointwise at every sweep."""
    top = _ChainState(config, _initial_heights_kind(config, "top"))
    bot = _ChainState(config, _initial_heights_kind(config, "bottom"))
    nsites = top.lattice.side ** 2
    gaps = []
    sweep = 0
    while sweep < config.sweeps:
        for u in _uniform_rows(config, nsites, sweep, sweep + 1):
            top.run_sweeps(u)
            bot.run_sweeps(u)
            sweep += 1
        gaps.append(int((top.heights != bot.heights).sum()))
    return gaps, top, bot


def _initial_heights_kind(config: ChainConfig, kind: str) -> np.ndarray:
    lat = Lattice.standard(config.n)
    cfg = replace(config, start=StartSpec(kind))
    return np.full((lat.side, lat.side), cfg.start_height(), dtype=np.int64)
