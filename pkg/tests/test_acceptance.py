"""One test per acceptance criterion; each records a PASS/FAIL line for the summary."""

import io
import json
import math
import statistics
import time

import mpmath
import numpy as np

from rocbounds import bounds
from rocbounds.cli import run as cli_run
from rocbounds.extremal_dists import make_lemma2_atom, make_thm4_extremal, make_uniform_b, tail_prob
from rocbounds.roc import EmpiricalSample, Label, auc_mann_whitney, roc_curve
from rocbounds.verify import (
    IntervalSet,
    mc_zscore,
    monte_carlo_prob,
    prob_leq_shift,
    random_interval_set,
    random_mixture,
    random_symmetric_bounded,
    reflection_identity_check,
    riesz_check,
    sweep_lemma2,
    sweep_theorem4,
)

SQRT3 = math.sqrt(3.0)
SQRT6 = math.sqrt(6.0)


def timed(fn, *args, repeat=1):
    """Result of fn(*args) and its median wall time over `repeat` calls, after one warm-up."""
    out = fn(*args)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t0)
    return out, statistics.median(times)


def test_criterion_1_root_anchors(criterion):
    ok = True
    parts = []
    for t, u_expected in ((3.18198, 3.0), (8.063242, 8.0)):
        sol, secs = timed(bounds.solve_u_of_t, t, repeat=7)
        rel_resid = abs(bounds.thm4_cubic(t, sol.u)) / t**3
        good = abs(sol.u - u_expected) <= 1e-3 and rel_resid <= 1e-10 and secs < 1e-3
        ok &= good
        parts.append(f"t={t}: u={sol.u:.6f} resid={rel_resid:.1e} {secs * 1e3:.3f}ms")
    criterion("1 root anchors u(3.18198)=3, u(8.063242)=8", ok, "; ".join(parts))
    assert ok


def test_criterion_2_headline_numbers(criterion):
    mu = 2 * SQRT6
    res, secs = timed(bounds.corollary6_lower, mu, repeat=7)
    argv = ["compare-gaussian", "--mu", repr(mu)]

    def via_cli():
        out = io.StringIO()
        code = cli_run(argv, stdout=out, stderr=io.StringIO())
        return code, json.loads(out.getvalue())["results"]["gaussian"]

    (code, gauss), cli_secs = timed(via_cli, repeat=7)
    oracle = float(mpmath.ncdf(mu / mpmath.sqrt(2)))
    ok = (
        res.value == 0.5
        and code == 0
        and gauss > 0.99966
        and abs(gauss - oracle) <= 1e-15
        and secs < 1e-3
    )
    criterion(
        "2 cor6(2 sqrt 6)=0.5, gaussian > 0.99966",
        ok,
        f"value={res.value!r} gaussian={gauss:.8f} compute {secs * 1e3:.3f}ms (cli end-to-end {cli_secs * 1e3:.3f}ms)",
    )
    assert ok


def test_criterion_3_branch_continuity(criterion):
    expected = {"lemma2": None, "cor3": None, "thm4": 1 / 3, "cor6": 2 / 3, "thm9": 1.0}
    worst = 0.0
    ok = True
    for name, want in expected.items():
        knee, left, right = bounds.junction_values()[name]
        worst = max(worst, abs(left - right))
        ok &= abs(left - right) <= 1e-12
        if want is not None:
            ok &= abs(left - want) <= 1e-12
    # the public bound functions must agree with the formula on the linear side of each knee
    ok &= abs(bounds.lemma2_bound(bounds.LEMMA2_KNEE).value - bounds.junction_values()["lemma2"][1]) <= 1e-12
    ok &= abs(bounds.theorem4_bound(bounds.THM4_KNEE).value - 1 / 3) <= 1e-12
    ok &= abs(bounds.corollary6_lower(bounds.COR6_KNEE).value - 2 / 3) <= 1e-12
    ok &= bounds.theorem9_upper(2.0, 0.5).value == 1.0
    criterion("3 branch continuity at every knee", ok, f"max |left-right|={worst:.1e}")
    assert ok


def test_criterion_4_sharpness(criterion):
    t0 = time.perf_counter()
    ts2 = np.linspace(bounds.LEMMA2_KNEE, 20.0, 51)[1:]
    e2 = max(abs(tail_prob(make_lemma2_atom(t), t, inclusive=True) - bounds.lemma2_bound(t).value) for t in ts2)
    ts4 = np.linspace(bounds.THM4_KNEE, 20.0, 51)[1:]
    e4 = 0.0
    for t in ts4:
        r = bounds.theorem4_bound(t)
        e4 = max(e4, abs(tail_prob(make_thm4_extremal(r.params["u"]), t, inclusive=True) - r.value))
    bmus = np.linspace(0.0, 1.0, 52)[1:-1]
    e9 = max(
        abs(prob_leq_shift(make_uniform_b(1.0), make_uniform_b(1.0), bm) - bounds.theorem9_upper(1.0, bm).value)
        for bm in bmus
    )
    secs = time.perf_counter() - t0
    ok = e2 <= 1e-10 and e4 <= 1e-8 and e9 <= 1e-10 and secs < 5
    criterion(
        "4 sharpness of lemma2 / thm4 / thm9 extremal laws",
        ok,
        f"max err {e2:.1e} / {e4:.1e} / {e9:.1e}, {secs:.2f}s",
    )
    assert ok


def _sweep_check(sweep, ts):
    """Per t: (gaps at 10/100/1000, final report)."""
    out = {}
    for t in ts:
        reps = [sweep(t, r) for r in (10, 100, 1000)]
        out[t] = ([r.gap for r in reps], reps[-1])
    return out


def _sweep_verdict(results):
    ok = True
    parts = []
    for t, (gaps, rep) in results.items():
        # gap = bound - best value, so -gap is the largest excess over the bound
        good = gaps[-1] <= 1e-3 and gaps[0] >= gaps[1] >= gaps[2] and -min(gaps) <= 1e-8
        ok &= good
        parts.append(f"t={t}: gaps={['%.1e' % g for g in gaps]}{'' if good else ' X'}")
    return ok, "; ".join(parts)


def test_criterion_5a_lemma2_sweep(criterion):
    t0 = time.perf_counter()
    ok, detail = _sweep_verdict(_sweep_check(sweep_lemma2, (0.5, 1.0, 2.0, 5.0)))
    secs = time.perf_counter() - t0
    ok &= secs < 60
    criterion("5a lemma2 sweep dominated, gap <= 1e-3, shrinking", ok, f"{detail}, {secs:.1f}s")
    assert ok


def test_criterion_5b_theorem4_sweep(criterion):
    # the second branch is the tail of one specific law; the sweep family contains
    # one-sided laws whose tails exceed it, so this is expected to fail above 4/sqrt(3)
    t0 = time.perf_counter()
    ok, detail = _sweep_verdict(_sweep_check(sweep_theorem4, (1.0, 2.0, 3.18198, 8.063242)))
    secs = time.perf_counter() - t0
    ok &= secs < 60
    criterion("5b thm4 sweep dominated, gap <= 1e-3, shrinking", ok, f"{detail}, {secs:.1f}s")
    assert ok


def test_criterion_6_riesz(criterion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    worst = -math.inf
    for _ in range(1000):
        lhs, rhs = riesz_check(*(random_interval_set(rng) for _ in range(3)))
        worst = max(worst, lhs - rhs)
    unit = IntervalSet(((0.0, 1.0),))
    hand = riesz_check(unit, unit, unit)
    secs = time.perf_counter() - t0
    ok = worst <= 1e-10 and abs(hand[0] - 0.5) <= 1e-12 and abs(hand[1] - 0.75) <= 1e-12 and secs < 5
    criterion("6 riesz 1000 triples + unit-interval case", ok, f"max lhs-rhs={worst:.2e}, hand={hand}, {secs:.2f}s")
    assert ok


def test_criterion_7_bamber(criterion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    worst = swap = 0.0
    for _ in range(100):
        n0, n1 = rng.integers(1, 501, size=2)
        pool = rng.normal(size=n0 + n1) * rng.uniform(0.1, 10) + rng.uniform(-3, 3)
        assert np.unique(pool).size == pool.size
        s0 = EmpiricalSample.of(pool[:n0], Label.CLASS0)
        s1 = EmpiricalSample.of(pool[n0:], Label.CLASS1)
        mw = auc_mann_whitney(s0, s1)
        worst = max(worst, abs(mw - roc_curve(s0, s1).auc_trapezoid))
        swapped = auc_mann_whitney(EmpiricalSample.of(pool[n0:]), EmpiricalSample.of(pool[:n0], Label.CLASS1))
        swap = max(swap, abs(mw + swapped - 1.0))
    secs = time.perf_counter() - t0
    ok = worst <= 1e-12 and swap <= 1e-12 and secs < 5
    criterion("7 bamber identity + label swap", ok, f"max diff={worst:.1e}, swap={swap:.1e}, {secs:.2f}s")
    assert ok


def test_criterion_8_monte_carlo(criterion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    worst = 0.0
    degenerate = 0
    for i in range(20):
        dx, dy = random_mixture(rng), random_mixture(rng)
        mu = float(rng.uniform(-2.0, 2.0))
        exact = prob_leq_shift(dx, dy, mu)
        est, se = monte_carlo_prob(dx, dy, mu, 1_000_000, 800 + i)
        worst = max(worst, mc_zscore(est, se, exact))
        degenerate += se == 0
    secs = time.perf_counter() - t0
    ok = worst <= 4.0 and secs < 30
    criterion("8 monte carlo within 4 stderr", ok, f"max z={worst:.2f} ({degenerate} configs with p in {{0,1}}), {secs:.1f}s")
    assert ok


def test_criterion_9_reflection(criterion):
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(20):
        b = float(rng.uniform(0.2, 4.0))
        d0, d1 = random_symmetric_bounded(rng, b), random_symmetric_bounded(rng, b)
        assert d0.atom_weight == 0.0 and d1.atom_weight == 0.0
        direct, via = reflection_identity_check(d0, d1, float(rng.uniform(0.0, 3.0 / b)))
        worst = max(worst, abs(direct - via))
    ok = worst <= 1e-9
    criterion("9 reflection identity", ok, f"max diff={worst:.1e}")
    assert ok
