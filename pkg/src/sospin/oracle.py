"""Exact enumeration of both measures on small boxes with height windows.

Every query is a ratio of two windowed weight sums, each computed by the
depth-first kernel with per-site bounds; marginals pin one site, event
probabilities clamp the bounds of the event's sites.  Probabilities therefore
come out exactly normalized within the window, and a documented truncation
bound controls how far they can sit from the untruncated values.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ._enumkernel import log_weight_sum
from .lattice import (HeightField, Lattice, Mode, ModelParams, energy,
                      is_admissible)
from .logsum import StreamingLogSumExp, logsumexp
from .measure import lambda_critical
from .tiles import Shape, _BASE_SHAPES


class BudgetError(RuntimeError):
    """Enumeration would exceed the configuration budget."""

    def __init__(self, required: float, budget: float):
        self.required = required
        self.budget = budget
        super().__init__(
            f"enumeration needs ~{required:.3g} configurations "
            f"(budget {budget:.3g}); raise the budget or shrink the window")


DEFAULT_BUDGET = 1e8
PYTHON_PATH_BUDGET = 2e5


def default_window(mode: Mode, boundary_height: int) -> tuple[int, int]:
    """Relaxed: [-6, h+6]; nonnegative: [0, h+8]."""
    if mode is Mode.RELAXED:
        return (-6, boundary_height + 6)
    return (0, boundary_height + 8)


@dataclass(frozen=True)
class EnumerationSpec:
    """A small box (side x side free sites, ring frozen at the boundary
    height), a mode, and one height window applied to every free site."""

    side: int
    params: ModelParams
    mode: Mode
    window: tuple[int, int] | None = None
    budget: float = DEFAULT_BUDGET

    def resolved_window(self) -> tuple[int, int]:
        if self.window is not None:
            lo, hi = self.window
        else:
            lo, hi = default_window(self.mode, self.params.boundary_height)
        if self.mode is Mode.NONNEGATIVE:
            lo = max(lo, 0)
        if lo > hi:
            raise ValueError(f"empty window [{lo},{hi}]")
        if not (lo <= self.params.boundary_height <= hi):
            raise ValueError("window must contain the boundary height")
        return lo, hi

    def config_count(self) -> float:
        lo, hi = self.resolved_window()
        return float(hi - lo + 1) ** (self.side * self.side)

    def check_budget(self) -> None:
        required = self.config_count()
        if required > self.budget:
            raise BudgetError(required, self.budget)


def truncation_bound(spec: EnumerationSpec) -> float:
    """Crude union bound on the relative probability shift from widening the
    window to infinity: m/(1-q) * (q^(1+max(0,-lo)) + q^(1+hi-b)) with
    q = exp(-4 beta); the downward term is dropped at the hard floor."""
    lo, hi = spec.resolved_window()
    b = spec.params.boundary_height
    q = math.exp(-4.0 * spec.params.beta)
    m = spec.side * spec.side
    down = 0.0
    if spec.mode is Mode.RELAXED:
        down = q ** (1 + max(0, -lo))
    up = q ** (1 + max(0, hi - b))
    return m / (1.0 - q) * (down + up)


@dataclass
class ExactDistribution:
    """Windowed exact distribution: a log partition function plus query
    methods, all evaluated by the enumeration kernel."""

    spec: EnumerationSpec
    log_z: float
    trunc_bound: float

    def _bounds(self, overrides: dict | None):
        lo, hi = self.spec.resolved_window()
        m = self.spec.side * self.spec.side
        lo_arr = np.full(m, lo, dtype=np.int64)
        hi_arr = np.full(m, hi, dtype=np.int64)
        if overrides:
            for site, (slo, shi) in overrides.items():
                i = site[0] * self.spec.side + site[1]
                lo_arr[i] = max(lo, slo)
                hi_arr[i] = min(hi, shi)
                if lo_arr[i] > hi_arr[i]:
                    return None, None
        return lo_arr, hi_arr

    def log_weight(self, overrides: dict | None = None) -> float:
        lo_arr, hi_arr = self._bounds(overrides)
        if lo_arr is None:
            return float("-inf")
        return log_weight_sum(self.spec.side, lo_arr, hi_arr,
                              self.spec.params.boundary_height,
                              self.spec.params.beta, self.spec.params.lam,
                              self.spec.mode is Mode.RELAXED)

    def probability(self, overrides: dict) -> float:
        """Probability of a box event given as {site: (lo, hi)} clamps."""
        w = self.log_weight(overrides)
        return 0.0 if w == float("-inf") else math.exp(w - self.log_z)

    def marginal(self, site) -> dict[int, float]:
        lo, hi = self.spec.resolved_window()
        logs = {v: self.log_weight({site: (v, v)}) for v in range(lo, hi + 1)}
        norm = logsumexp(logs.values())
        return {v: (0.0 if lw == float("-inf") else math.exp(lw - norm))
                for v, lw in logs.items()}

    def configurations(self):
        """(heights tuple, probability) over every admissible windowed
        configuration; python path, budget-limited to small boxes."""
        pairs = list(iter_configs(self.spec))
        logs = [-e for _, e in pairs]
        norm = logsumexp(logs)
        for (cfg, e), lw in zip(pairs, logs):
            yield cfg, math.exp(lw - norm)


def enumerate_measure(spec: EnumerationSpec) -> ExactDistribution:
    spec.check_budget()
    dist = ExactDistribution(spec, 0.0, truncation_bound(spec))
    dist.log_z = dist.log_weight(None)
    return dist


def iter_configs(spec: EnumerationSpec, budget: float = PYTHON_PATH_BUDGET):
    """Reference enumeration over (heights, energy), admissible configs only.

    Independent of the kernel: builds each configuration as a HeightField and
    scores it with the lattice energy function.
    """
    if spec.config_count() > budget:
        raise BudgetError(spec.config_count(), budget)
    lo, hi = spec.resolved_window()
    lat = Lattice(spec.side)
    m = spec.side * spec.side
    for combo in itertools.product(range(lo, hi + 1), repeat=m):
        heights = np.array(combo, dtype=np.int64).reshape(spec.side, spec.side)
        f = HeightField(lat, heights, boundary=spec.params.boundary_height,
                        mode=spec.mode, validate=False)
        if not is_admissible(f):
            continue
        yield combo, energy(f, spec.params)


def verify_positive_part_identity(side: int, beta: float,
                                  window: tuple[int, int],
                                  lam: float | None = None) -> float:
    """Max relative discrepancy between the hard-floor measure and the
    positive-part projection of the relaxed measure on a side x side box
    with zero boundary.

    With lam left at the critical value the two sides agree exactly (up to
    window truncation); any other lam is a negative control.
    """
    if lam is None:
        lam = lambda_critical(beta)
    lo, hi = window
    params = ModelParams(beta=beta, lam=lam, boundary_height=0)
    nn_spec = EnumerationSpec(side, params, Mode.NONNEGATIVE, (max(lo, 0), hi))
    rel_spec = EnumerationSpec(side, params, Mode.RELAXED, (lo, hi))

    nn = {cfg: -e for cfg, e in iter_configs(nn_spec)}
    nn_norm = logsumexp(nn.values())

    grouped: dict[tuple, StreamingLogSumExp] = {}
    rel_norm_acc = StreamingLogSumExp()
    for cfg, e in iter_configs(rel_spec):
        pos = tuple(max(0, v) for v in cfg)
        grouped.setdefault(pos, StreamingLogSumExp()).add(-e)
        rel_norm_acc.add(-e)
    rel_norm = rel_norm_acc.value()

    worst = 0.0
    for cfg, lw in nn.items():
        p = math.exp(lw - nn_norm)
        acc = grouped.get(cfg)
        p_rel = math.exp(acc.value() - rel_norm) if acc is not None else 0.0
        worst = max(worst, abs(p - p_rel) / p)
    return worst


_TOOTH_WINDOW_PREFERENCE = ((-1, 2), (-1, 1), (0, 2), (0, 1))


@dataclass(frozen=True)
class ToothRate:
    probability: float
    reference_rate: float  # exp(-6 beta h + 2 beta)
    ratio: float
    window: tuple[int, int]
    trunc_bound: float


def tooth_rate(side: int, h: int, beta: float, pair=None,
               window: tuple[int, int] | None = None,
               budget: float = DEFAULT_BUDGET) -> ToothRate:
    """Exact windowed probability that an interior adjacent pair dips to
    heights (<=0, <=1) under the relaxed measure with boundary h, and its
    ratio to the reference rate exp(-6 beta h + 2 beta).

    The window defaults to the widest of [-1, h+2], [-1, h+1], [0, h+2],
    [0, h+1] that fits the budget (downward slack is preferred since the
    event lives below the bulk).
    """
    if h < 1:
        raise ValueError(f"h must be >= 1, got {h}")
    if pair is None:
        r = side // 2
        c = (side - 1) // 2
        pair = ((r, c), (r, c + 1))
    x, y = pair
    params = ModelParams(beta=beta, lam=lambda_critical(beta),
                         boundary_height=h)
    if window is None:
        m = side * side
        for dlo, dhi in _TOOTH_WINDOW_PREFERENCE:
            cand = (dlo, h + dhi)
            if float(cand[1] - cand[0] + 1) ** m <= budget:
                window = cand
                break
        if window is None:
            raise BudgetError(float(h + 2) ** m, budget)
    spec = EnumerationSpec(side, params, Mode.RELAXED, window, budget=budget)
    dist = enumerate_measure(spec)
    lo, _ = spec.resolved_window()
    prob = dist.probability({x: (lo, 0), y: (lo, 1)})
    ref = math.exp(-6.0 * beta * h + 2.0 * beta)
    return ToothRate(probability=prob, reference_rate=ref, ratio=prob / ref,
                     window=spec.resolved_window(),
                     trunc_bound=dist.trunc_bound)


def tile_value(shape: Shape, beta: float) -> float:
    """Exact subset sum for one tile shape at the critical pinning strength:
    exp(-lam*|T|) * sum over A subset of T of exp(-beta*|edge boundary of A|
    + lam*|paired sites of A|)."""
    from .lattice import edge_boundary_count

    lam = lambda_critical(beta)
    cells = list(_BASE_SHAPES[shape])
    total = 0.0
    for bits in range(1 << len(cells)):
        a = [cells[i] for i in range(len(cells)) if bits >> i & 1]
        aset = set(a)
        paired = sum(1 for (r, c) in a
                     if (r + 1, c) in aset or (r - 1, c) in aset
                     or (r, c + 1) in aset or (r, c - 1) in aset)
        total += math.exp(-beta * edge_boundary_count(a) + lam * paired)
    return math.exp(-lam * len(cells)) * total


def domino_value_closed_form(beta: float) -> float:
    """1 + e^{-6b} - 3 e^{-8b} + 2 e^{-12b}, the domino subset sum."""
    return (1.0 + math.exp(-6.0 * beta) - 3.0 * math.exp(-8.0 * beta)
            + 2.0 * math.exp(-12.0 * beta))


_MONOTONE_TOL = 1e-12


def check_monotonicity(side: int, beta: float, lam: float, h1: int, h2: int,
                       window: tuple[int, int] | None = None) -> bool:
    """Exact stochastic-domination sanity check between boundary heights
    h1 <= h2 on the hard-floor measure: all single-site upper tails and a
    library of increasing events must be monotone in the boundary height."""
    if h1 > h2:
        raise ValueError("need h1 <= h2")
    if window is None:
        window = (0, h2 + 6)
    probs = []
    for h in (h1, h2):
        params = ModelParams(beta=beta, lam=lam, boundary_height=h)
        spec = EnumerationSpec(side, params, Mode.NONNEGATIVE, window)
        probs.append(dict(_config_probs(spec)))
    lo, hi = window
    sites = [(r, c) for r in range(side) for c in range(side)]
    m = len(sites)

    def prob_of(p, pred):
        return sum(w for cfg, w in p.items() if pred(cfg))

    for i in range(m):
        for t in range(lo, hi + 1):
            a = prob_of(probs[0], lambda cfg: cfg[i] >= t)
            b = prob_of(probs[1], lambda cfg: cfg[i] >= t)
            if b < a - _MONOTONE_TOL:
                return False
    for t in range(lo, hi + 1):
        a = prob_of(probs[0], lambda cfg: min(cfg) >= t)
        b = prob_of(probs[1], lambda cfg: min(cfg) >= t)
        if b < a - _MONOTONE_TOL:
            return False
    for s in range(lo * m, hi * m + 1):
        a = prob_of(probs[0], lambda cfg: sum(cfg) >= s)
        b = prob_of(probs[1], lambda cfg: sum(cfg) >= s)
        if b < a - _MONOTONE_TOL:
            return False
    return True


def _config_probs(spec: EnumerationSpec):
    pairs = list(iter_configs(spec))
    norm = logsumexp(-e for _, e in pairs)
    for cfg, e in pairs:
        yield cfg, math.exp(-e - norm)
