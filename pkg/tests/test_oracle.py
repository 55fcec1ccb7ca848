import math

import numpy as np
import pytest

from sospin.lattice import Mode, ModelParams
from sospin.logsum import logsumexp
from sospin.measure import lambda_critical
from sospin.oracle import (BudgetError, EnumerationSpec, check_monotonicity,
                           domino_value_closed_form, enumerate_measure,
                           iter_configs, tile_value, tooth_rate,
                           truncation_bound, verify_positive_part_identity)
from sospin.tiles import Shape


def spec_of(side, beta, lam, b, mode, window, budget=1e8):
    return EnumerationSpec(side, ModelParams(beta=beta, lam=lam,
                                             boundary_height=b),
                           mode, window, budget=budget)


KERNEL_CASES = [
    (2, Mode.NONNEGATIVE, (0, 4), 0, 1.0, 0.3),
    (2, Mode.RELAXED, (-3, 3), 0, 0.7, 0.2),
    (2, Mode.RELAXED, (-2, 4), 2, 1.0, 0.05),
    (3, Mode.RELAXED, (-2, 2), 1, 0.8, 0.1),
    (3, Mode.NONNEGATIVE, (0, 4), 2, 0.5, 0.6),
    (1, Mode.RELAXED, (-5, 5), 3, 1.0, 0.0),
]


@pytest.mark.parametrize("side,mode,window,b,beta,lam", KERNEL_CASES)
def test_kernel_matches_reference_enumeration(side, mode, window, b, beta, lam):
    spec = spec_of(side, beta, lam, b, mode, window)
    dist = enumerate_measure(spec)
    ref = logsumexp(-e for _, e in iter_configs(spec, budget=2e6))
    assert dist.log_z == pytest.approx(ref, abs=1e-10)


def test_kernel_deterministic_across_slicing():
    from sospin._enumkernel import log_weight_sum
    side = 3
    lo = np.full(9, -2, dtype=np.int64)
    hi = np.full(9, 3, dtype=np.int64)
    a = log_weight_sum(side, lo, hi, 1, 0.8, 0.1, True, parallel_slices=True)
    b = log_weight_sum(side, lo, hi, 1, 0.8, 0.1, True, parallel_slices=False)
    assert a == pytest.approx(b, rel=1e-13)


def test_single_site_tent_law():
    spec = spec_of(1, 1.0, 0.0, 5, Mode.NONNEGATIVE, (0, 10))
    dist = enumerate_measure(spec)
    marg = dist.marginal((0, 0))
    w = {k: math.exp(-4.0 * abs(k - 5)) for k in range(0, 11)}
    z = sum(w.values())
    for k in w:
        assert marg[k] == pytest.approx(w[k] / z, abs=1e-12)


def test_marginal_sums_to_one():
    spec = spec_of(2, 0.9, 0.2, 1, Mode.RELAXED, (-3, 4))
    dist = enumerate_measure(spec)
    marg = dist.marginal((0, 1))
    assert sum(marg.values()) == pytest.approx(1.0, abs=1e-12)


def test_no_inadmissible_config_has_weight():
    spec = spec_of(2, 0.7, 0.3, 0, Mode.RELAXED, (-2, 2))
    seen = set()
    for cfg, _ in iter_configs(spec):
        seen.add(cfg)
        # every yielded config satisfies the interior pair constraint
        grid = np.array(cfg).reshape(2, 2)
        for (a, b) in [((0, 0), (0, 1)), ((0, 0), (1, 0)),
                       ((0, 1), (1, 1)), ((1, 0), (1, 1))]:
            u, v = int(grid[a]), int(grid[b])
            assert not ((u <= -1 and v <= 0) or (u <= 0 and v <= -1))
    # and every admissible windowed config is present
    count = 0
    for combo in __import__("itertools").product(range(-2, 3), repeat=4):
        grid = np.array(combo).reshape(2, 2)
        ok = True
        for (a, b) in [((0, 0), (0, 1)), ((0, 0), (1, 0)),
                       ((0, 1), (1, 1)), ((1, 0), (1, 1))]:
            u, v = int(grid[a]), int(grid[b])
            if (u <= -1 and v <= 0) or (u <= 0 and v <= -1):
                ok = False
        if ok:
            count += 1
            assert combo in seen
    assert count == len(seen)


def test_rejection_sampler_spot_check(rand):
    # crude independent check of the exact distribution on a 1x2-ish box:
    # draw uniform configs, accept with probability exp(-(E - E_min))
    spec = spec_of(2, 0.6, 0.25, 0, Mode.NONNEGATIVE, (0, 2))
    dist = enumerate_measure(spec)
    configs = list(iter_configs(spec))
    e_min = min(e for _, e in configs)
    weights = {cfg: math.exp(-(e - e_min)) for cfg, e in configs}
    counts = {cfg: 0 for cfg, _ in configs}
    total = 0
    while total < 20000:
        cfg = tuple(int(v) for v in rand.integers(0, 3, size=4))
        if rand.random() < weights[cfg]:
            counts[cfg] += 1
            total += 1
    z = sum(weights.values())
    for cfg in counts:
        assert counts[cfg] / total == pytest.approx(weights[cfg] / z, abs=0.02)


def test_window_stability_within_truncation_bound():
    for side, b, beta in ((2, 1, 1.0), (1, 2, 0.8)):
        lam = lambda_critical(beta)
        narrow = spec_of(side, beta, lam, b, Mode.RELAXED, (-2, b + 2))
        wide = spec_of(side, beta, lam, b, Mode.RELAXED, (-4, b + 4))
        dn = enumerate_measure(narrow)
        dw = enumerate_measure(wide)
        bound = truncation_bound(narrow)
        site = (0, 0)
        mn = dn.marginal(site)
        mw = dw.marginal(site)
        for k in mn:
            assert abs(mn[k] - mw[k]) < bound


def test_budget_error_reports_requirement():
    spec = spec_of(4, 1.0, 0.0, 0, Mode.NONNEGATIVE, (0, 9), budget=1e4)
    with pytest.raises(BudgetError) as err:
        enumerate_measure(spec)
    assert err.value.required == pytest.approx(10.0 ** 16)


def test_identity_critical_and_control():
    d = verify_positive_part_identity(2, 1.0, (-6, 4))
    assert d <= 1e-8
    dneg = verify_positive_part_identity(2, 1.0, (-6, 4),
                                         lam=0.5 * lambda_critical(1.0))
    assert dneg > 1e-3


def test_identity_truncation_scaling():
    # the beta=0.5 discrepancy is pure window truncation ~ e^{-28 beta}
    d6 = verify_positive_part_identity(2, 0.5, (-6, 4))
    d10 = verify_positive_part_identity(2, 0.5, (-10, 4))
    assert d6 == pytest.approx(1.6e-6, rel=0.3)
    assert d10 < d6 * 1e-2


def test_single_site_geometric_token():
    beta = 1.0
    spec = spec_of(1, beta, lambda_critical(beta), 2, Mode.RELAXED, (-6, 8))
    dist = enumerate_measure(spec)
    w_le0 = dist.log_weight({(0, 0): (-6, 0)})
    w_0 = dist.log_weight({(0, 0): (0, 0)})
    token = 1.0 / (1.0 - math.exp(-4.0 * beta))
    assert math.exp(w_le0 - w_0) == pytest.approx(token, rel=1e-9)


def test_tooth_rate_small_box():
    tr = tooth_rate(3, 1, 1.5, budget=1e7)
    assert 0 < tr.probability <= 2.0 * tr.reference_rate
    assert tr.ratio == pytest.approx(tr.probability / tr.reference_rate)
    assert tr.window[0] >= -1


def test_tooth_rate_h_must_be_positive():
    with pytest.raises(ValueError):
        tooth_rate(3, 0, 1.5)


def test_tile_values_bound_and_domino_form():
    for beta in (1.0, 1.5, 2.0, 3.0):
        floor = 1.0 + math.exp(-6.0 * beta) / 2.0
        for shape in Shape:
            assert tile_value(shape, beta) >= floor
        assert tile_value(Shape.DOMINO, beta) == pytest.approx(
            domino_value_closed_form(beta), abs=1e-12)


def test_domino_value_beta2_magnitude():
    v = tile_value(Shape.DOMINO, 2.0)
    assert v == pytest.approx(1.0000058, abs=2e-7)
    assert v >= 1.0 + math.exp(-12.0) / 2.0


def test_monotonicity_cases():
    assert check_monotonicity(2, 1.0, 0.0, 0, 1, window=(0, 6))
    assert check_monotonicity(2, 1.0, lambda_critical(1.0), 0, 2, window=(0, 7))
    assert check_monotonicity(2, 0.5, 0.0, 1, 1, window=(0, 6))  # equal heights
    with pytest.raises(ValueError):
        check_monotonicity(2, 1.0, 0.0, 2, 1)
