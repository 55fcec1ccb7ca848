"""Model constants and single-site conditional distributions.

Closed forms: the critical pinning strength lambda_w(beta) = -log(1 - e^{-4 beta}),
the target height floor(log(n)/(6 beta) + 1/3) with its fractional part, and the
single-height prediction bands.  Natural logarithms throughout (the e^{-beta}
energetics force this).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .lattice import (HeightField, InadmissibleFieldError, ModelParams, Site,
                      energy_delta)

UNDETERMINED = "undetermined"


def lambda_critical(beta: float) -> float:
    """Critical pinning strength -log(1 - e^{-4 beta}).

    Strictly positive and strictly decreasing in beta.
    """
    if beta <= 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    return -math.log1p(-math.exp(-4.0 * beta))


def flat_comparison_height(n: int, beta: float) -> int:
    """The no-pinning rigid height floor(log(n) / (4 beta))."""
    return math.floor(math.log(n) / (4.0 * beta))


@dataclass(frozen=True)
class HeightPrediction:
    """Target height, its fractional part, and the resolved single height.

    ``predicted_single_height`` is ``h_star`` when the fractional part lies in
    [0.34, 1), ``h_star - 1`` when it lies in [0, log(beta)/(8 beta)), and the
    string "undetermined" in the unresolved band between them.
    """

    h_star: int
    xi: float
    predicted_single_height: int | str


def target_height(n: int, beta: float) -> HeightPrediction:
    """Predicted rigid height at critical pinning, floor(log(n)/(6 beta) + 1/3)."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if beta <= 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    t = math.log(n) / (6.0 * beta) + 1.0 / 3.0
    h_star = math.floor(t)
    xi = t - h_star
    lower_band = math.log(beta) / (8.0 * beta)  # empty band for beta <= 1
    if 0.34 <= xi < 1.0:
        predicted: int | str = h_star
    elif 0.0 <= xi < lower_band:
        predicted = h_star - 1
    else:
        predicted = UNDETERMINED
    return HeightPrediction(h_star=h_star, xi=xi, predicted_single_height=predicted)


def heat_bath_distribution(field: HeightField, site: Site, params: ModelParams,
                           window: tuple[int, int]):
    """Exact conditional of one site's height given all others.

    Returns (heights, probabilities) as parallel lists over the window's
    admissible candidates; candidates violating the mode constraint get
    probability zero and are dropped.  Probabilities are proportional to
    exp(-energy_delta) relative to the current height, which makes the result
    invariant under any constant energy shift.
    """
    lo, hi = window
    current = field.height_at(site)
    if not (lo <= current <= hi):
        raise ValueError(f"window [{lo},{hi}] excludes the current height {current}")
    heights = []
    log_weights = []
    for k in range(lo, hi + 1):
        try:
            d = energy_delta(field, site, k, params)
        except InadmissibleFieldError:
            continue
        heights.append(k)
        log_weights.append(-d)
    if not heights:
        raise RuntimeError("no admissible candidate in the window")
    m = max(log_weights)
    weights = [math.exp(w - m) for w in log_weights]
    z = sum(weights)
    return heights, [w / z for w in weights]
