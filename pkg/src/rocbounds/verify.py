"""Independent numerical checks of the bounds.

Probabilities over atom-plus-boxcar laws are evaluated with exact piecewise
algebra (ramp antiderivatives), never by sampling or generic quadrature; the
Monte Carlo estimator exists only to cross-check that algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import bounds
from .extremal_dists import (
    BoxcarComponent,
    ExtremalDistribution,
    make_lemma2_atom,
    make_thm4_extremal,
    make_uniform_b,
    sample,
    tail_prob,
)

SQRT3 = math.sqrt(3.0)


def _ramp2(z: float) -> float:
    """Antiderivative of max(z, 0)."""
    return 0.5 * z * z if z > 0.0 else 0.0


# interval sets --------------------------------------------------------------------


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of disjoint open intervals, sorted by left end."""

    intervals: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        ivs = tuple((float(lo), float(hi)) for lo, hi in self.intervals)
        for lo, hi in ivs:
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ValueError(f"bad interval ({lo}, {hi})")
        for (_, h0), (l1, _) in zip(ivs[:-1], ivs[1:]):
            if l1 < h0:
                raise ValueError("intervals must be sorted and pairwise disjoint")
        object.__setattr__(self, "intervals", ivs)

    @classmethod
    def union(cls, intervals: Iterable[Sequence[float]]) -> "IntervalSet":
        """Build from possibly overlapping intervals by merging them."""
        merged: list[list[float]] = []
        for lo, hi in sorted((float(a), float(b)) for a, b in intervals):
            if merged and lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        return cls(tuple((lo, hi) for lo, hi in merged))

    def measure(self) -> float:
        return math.fsum(hi - lo for lo, hi in self.intervals)

    def rearranged(self) -> "IntervalSet":
        """Centred open interval of the same measure."""
        m = self.measure()
        return IntervalSet(((-0.5 * m, 0.5 * m),)) if m > 0 else IntervalSet()


def triple_overlap(a: tuple[float, float], b: tuple[float, float], c: tuple[float, float]) -> float:
    """Exact ``integral of I_a(x) I_b(x - y) I_c(y) dx dy`` for three intervals.

    For fixed y the x-integral is the overlap length of ``a`` and ``b + y``, a
    signed sum of four ramps; each ramp integrates over ``c`` in closed form.
    """
    a_lo, a_hi = a
    b_lo, b_hi = b
    c_lo, c_hi = c
    total = 0.0
    for k, sign in ((a_hi - b_lo, 1.0), (a_hi - b_hi, -1.0), (a_lo - b_lo, -1.0), (a_lo - b_hi, 1.0)):
        total += sign * (_ramp2(k - c_lo) - _ramp2(k - c_hi))
    return total


def riesz_integral(a: IntervalSet, b: IntervalSet, c: IntervalSet) -> float:
    return math.fsum(
        triple_overlap(ia, ib, ic) for ia in a.intervals for ib in b.intervals for ic in c.intervals
    )


def riesz_check(a: IntervalSet, b: IntervalSet, c: IntervalSet) -> tuple[float, float]:
    """Return the triple integral for (A, B, C) and for their symmetric rearrangements."""
    lhs = riesz_integral(a, b, c)
    rhs = riesz_integral(a.rearranged(), b.rearranged(), c.rearranged())
    return lhs, rhs


# P(X <= Y + mu) -------------------------------------------------------------------


def _pair_prob(x: BoxcarComponent | None, y: BoxcarComponent | None, mu: float) -> float:
    """P(X <= Y + mu) for one component pair; None stands for the atom at 0."""
    if x is None and y is None:
        return 1.0 if 0.0 <= mu else 0.0
    if x is None:
        # P(Y >= -mu)
        return min(max((y.hi + mu) / y.width, 0.0), 1.0)
    if y is None:
        return min(max((mu - x.lo) / x.width, 0.0), 1.0)
    # (1/|x||y|) * integral over y in (c, d) of |(a, b) intersect (-inf, y + mu)|
    a, b, c, d = x.lo, x.hi, y.lo, y.hi
    area = _ramp2(d + mu - a) - _ramp2(c + mu - a) - _ramp2(d + mu - b) + _ramp2(c + mu - b)
    return min(max(area / (x.width * y.width), 0.0), 1.0)


def _parts(d: ExtremalDistribution) -> list[tuple[float, BoxcarComponent | None]]:
    parts: list[tuple[float, BoxcarComponent | None]] = [(c.weight, c) for c in d.components]
    if d.atom_weight > 0.0:
        parts.append((d.atom_weight, None))
    return parts


def prob_leq_shift(dX: ExtremalDistribution, dY: ExtremalDistribution, mu: float) -> float:
    """Exact P(X <= Y + mu) for independent X ~ dX, Y ~ dY."""
    total = math.fsum(
        wx * wy * _pair_prob(cx, cy, mu) for wx, cx in _parts(dX) for wy, cy in _parts(dY)
    )
    return min(max(total, 0.0), 1.0)


def symmetrize(d: ExtremalDistribution) -> ExtremalDistribution:
    """Equal mixture of ``d`` and its reflection about 0."""
    weights: dict[tuple[float, float], float] = {}
    for c in d.components:
        for key in ((c.lo, c.hi), (-c.hi, -c.lo)):
            weights[key] = weights.get(key, 0.0) + 0.5 * c.weight
    comps = tuple(BoxcarComponent(lo, hi, w) for (lo, hi), w in sorted(weights.items()))
    return ExtremalDistribution(d.atom_weight, comps, f"sym({d.label})" if d.label else "")


def reflection_identity_check(
    d0: ExtremalDistribution, d1: ExtremalDistribution, mu: float
) -> tuple[float, float]:
    """Compare P(Y0 <= Y1 + mu) with (1 + P(|Y1 - Y0| < mu)) / 2.

    The right side goes through the triple-overlap integral rather than the
    pairwise ramp formula used by :func:`prob_leq_shift`.
    """
    for name, d in (("d0", d0), ("d1", d1)):
        if d.atom_weight > 0.0:
            raise ValueError(f"{name} has an atom; the identity needs atom-free laws")
        if not d.is_symmetric():
            raise ValueError(f"{name} is not symmetric about 0")
    if mu < 0:
        raise ValueError(f"mu must be >= 0, got {mu}")
    direct = prob_leq_shift(d0, d1, mu)
    close = 0.0
    if mu > 0:
        window = (-mu, mu)
        terms = []
        for c1 in d1.components:
            for c0 in d0.components:
                # D = Y1 - Y0 = Y1 + W with W = -Y0: integrate I(|x| < mu) f1(x - w) fW(w)
                dens = c1.height * c0.height
                terms.append(dens * triple_overlap(window, (c1.lo, c1.hi), (-c0.hi, -c0.lo)))
        close = math.fsum(terms)
    return direct, 0.5 * (1.0 + close)


def monte_carlo_prob(
    dX: ExtremalDistribution,
    dY: ExtremalDistribution,
    mu: float,
    n: int,
    seed: int,
    shard: int = 1_000_000,
) -> tuple[float, float]:
    """Sampled estimate of P(X <= Y + mu) and its binomial standard error.

    Draws are produced in fixed-size shards with child seeds spawned from
    ``seed``, so the result depends only on (n, seed, shard).
    """
    if n < 1000:
        raise ValueError(f"need n >= 1000, got {n}")
    n_shards = -(-n // shard)
    children = np.random.SeedSequence(seed).spawn(n_shards)
    hits = 0
    left = n
    for child in children:
        m = min(shard, left)
        left -= m
        gx, gy = (np.random.default_rng(s) for s in child.spawn(2))
        x = sample(dX, m, gx)
        y = sample(dY, m, gy)
        hits += int(np.count_nonzero(x <= y + mu))
    p = hits / n
    return p, math.sqrt(p * (1.0 - p) / n)


# extreme-point sweeps -------------------------------------------------------------


@dataclass(frozen=True)
class SweepReport:
    target: float
    best_value: float
    best_config: dict
    bound_value: float
    gap: float
    resolution: int
    n_configs: int
    family_best: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "best_value": self.best_value,
            "best_config": self.best_config,
            "bound_value": self.bound_value,
            "gap": self.gap,
            "resolution": self.resolution,
            "n_configs": self.n_configs,
            "family_best": dict(self.family_best),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SweepReport":
        return cls(**data)


def _geomgrid(lo: float, hi: float, resolution: int) -> np.ndarray:
    """``resolution`` geometric steps from lo to hi; refining by integer factors nests grids."""
    g = np.geomspace(lo, hi, resolution + 1)
    g[0], g[-1] = lo, hi
    return g


def _boxcar_upper_tail(a: np.ndarray, t: float) -> np.ndarray:
    """P(U >= t) for U uniform on (-a, a), vectorised."""
    return np.clip((a - t) / (2.0 * a), 0.0, 1.0)


def sweep_lemma2(t: float, resolution: int = 1000, a_max: float | None = None) -> SweepReport:
    """Maximise P(X >= t) over variance-1 symmetric extreme-point mixtures.

    Two families: ``(1 - beta) delta_0 + beta U(-a, a)`` with ``beta = 3/a^2``, and
    ``(1 - beta) U(-a1, a1) + beta U(-a2, a2)`` with ``a1 < sqrt(3) < a2`` and
    beta fixed by the variance. Both half-widths run on geometric grids.
    """
    if not t > 0:
        raise ValueError(f"need t > 0, got {t}")
    a_max = a_max if a_max is not None else 4.0 * max(t, SQRT3)
    a = _geomgrid(SQRT3, a_max, resolution)
    beta = 3.0 / (a * a)
    atom_vals = beta * _boxcar_upper_tail(a, t)
    i_atom = int(np.argmax(atom_vals))

    a1 = _geomgrid(SQRT3 * 1e-3, SQRT3, resolution)[:-1]
    a2 = a[1:]
    A1, A2 = np.meshgrid(a1, a2, indexing="ij")
    B = (3.0 - A1 * A1) / (A2 * A2 - A1 * A1)
    two_vals = (1.0 - B) * _boxcar_upper_tail(A1, t) + B * _boxcar_upper_tail(A2, t)
    i_two = np.unravel_index(int(np.argmax(two_vals)), two_vals.shape)

    atom_best = float(atom_vals[i_atom])
    two_best = float(two_vals[i_two])
    atom_cfg = {"family": "atom+boxcar", "a": float(a[i_atom]), "beta": float(beta[i_atom])}
    two_cfg = {
        "family": "two-boxcar",
        "a1": float(A1[i_two]),
        "a2": float(A2[i_two]),
        "beta": float(B[i_two]),
    }
    best, cfg = (atom_best, atom_cfg) if atom_best >= two_best else (two_best, two_cfg)
    bound = bounds.lemma2_bound(t).value
    return SweepReport(
        target=t,
        best_value=best,
        best_config=cfg,
        bound_value=bound,
        gap=bound - best,
        resolution=resolution,
        n_configs=int(atom_vals.size + two_vals.size),
        family_best={"atom+boxcar": atom_best, "two-boxcar": two_best},
    )


def sweep_theorem4(
    t: float,
    resolution: int = 1000,
    bound: Callable[[float], bounds.BoundResult] = bounds.theorem4_bound,
) -> SweepReport:
    """Maximise P(X > t) over ``(1 - beta) delta_0 + beta U(0, a)`` with variance 1.

    Variance 1 forces ``a = (beta (1/3 - beta/4))^(-1/2)``; beta runs on a
    geometric grid ending at 1, the atom-free uniform on (0, 2 sqrt(3)).
    """
    if not t > 0:
        raise ValueError(f"need t > 0, got {t}")
    beta = _geomgrid(1e-6, 1.0, resolution)
    a = 1.0 / np.sqrt(beta * (1.0 / 3.0 - beta / 4.0))
    vals = beta * np.clip(1.0 - t / a, 0.0, 1.0)
    i = int(np.argmax(vals))
    best = float(vals[i])
    b_i = float(beta[i])
    cfg = {
        "family": "one-sided atom+boxcar",
        "beta": b_i,
        "a": float(a[i]),
        "u": math.sqrt(4.0 / (3.0 * b_i)),
    }
    bound_value = bound(t).value
    return SweepReport(
        target=t,
        best_value=best,
        best_config=cfg,
        bound_value=bound_value,
        gap=bound_value - best,
        resolution=resolution,
        n_configs=int(vals.size),
        family_best={"one-sided atom+boxcar": best},
    )


# random admissible configurations -------------------------------------------------


def random_mixture(rng: np.random.Generator, max_boxes: int = 3) -> ExtremalDistribution:
    """Random atom-plus-boxcar law with 1..max_boxes boxcars at arbitrary positions."""
    k = int(rng.integers(1, max_boxes + 1))
    has_atom = rng.random() < 0.5
    w = rng.dirichlet(np.ones(k + int(has_atom)))
    comps = []
    for i in range(k):
        lo = float(rng.uniform(-3.0, 2.0))
        hi = lo + float(rng.uniform(0.05, 3.0))
        comps.append(BoxcarComponent(lo, hi, float(w[i])))
    rest = 1.0 - math.fsum(c.weight for c in comps)
    atom = 0.0
    if has_atom:
        atom = rest
    else:
        last = comps[-1]
        comps[-1] = BoxcarComponent(last.lo, last.hi, last.weight + rest)
    return ExtremalDistribution(max(atom, 0.0), tuple(comps), "random")


def random_symmetric_bounded(rng: np.random.Generator, b: float, max_boxes: int = 3) -> ExtremalDistribution:
    """Random symmetric atom-free law whose density never exceeds ``b``.

    Either a mixture of centred boxcars each at least as wide as 1/b, or the
    uniform law of height b on a random symmetric union of intervals.
    """
    if rng.random() < 0.5:
        k = int(rng.integers(1, max_boxes + 1))
        w = rng.dirichlet(np.ones(k))
        halves = 0.5 / b * (1.0 + rng.exponential(1.0, size=k))
        comps = [BoxcarComponent(-h, h, float(wi)) for h, wi in zip(halves, w)]
        fix = 1.0 - math.fsum(c.weight for c in comps)
        comps[-1] = BoxcarComponent(comps[-1].lo, comps[-1].hi, comps[-1].weight + fix)
        return ExtremalDistribution(0.0, tuple(comps), "centred boxcars")
    # symmetric set of measure 1/b: gaps between pieces on the positive side
    k = int(rng.integers(1, max_boxes + 1))
    lengths = rng.dirichlet(np.ones(k)) * (0.5 / b)
    gaps = rng.uniform(0.0, 1.0 / b, size=k)
    gaps[0] = 0.0 if rng.random() < 0.5 else gaps[0]
    pieces = []
    x = 0.0
    for g, ln in zip(gaps, lengths):
        x += g
        pieces.append((x, x + ln))
        x += ln
    comps = []
    if pieces[0][0] == 0.0:
        lo0, hi0 = pieces.pop(0)
        comps.append(BoxcarComponent(-hi0, hi0, b * 2.0 * hi0))
    for lo, hi in pieces:
        comps.append(BoxcarComponent(lo, hi, b * (hi - lo)))
        comps.append(BoxcarComponent(-hi, -lo, b * (hi - lo)))
    fix = 1.0 - math.fsum(c.weight for c in comps)
    comps[-1] = BoxcarComponent(comps[-1].lo, comps[-1].hi, comps[-1].weight + fix)
    return ExtremalDistribution(0.0, tuple(comps), "uniform on symmetric set")


def random_interval_set(rng: np.random.Generator, max_pieces: int = 4) -> IntervalSet:
    k = int(rng.integers(1, max_pieces + 1))
    lo = rng.uniform(-5.0, 5.0, size=k)
    return IntervalSet.union(zip(lo, lo + rng.uniform(0.01, 3.0, size=k)))


# suites used by the command line --------------------------------------------------


@dataclass(frozen=True)
class PropertyCheck:
    name: str
    passed: bool
    observed: float
    tolerance: float
    detail: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        # numpy scalars leak in from comparisons; keep the record JSON-native
        object.__setattr__(self, "passed", bool(self.passed))
        object.__setattr__(self, "observed", float(self.observed))
        object.__setattr__(self, "tolerance", float(self.tolerance))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "observed": self.observed,
            "tolerance": self.tolerance,
            "detail": self.detail,
        }


def suite_sharpness(ts: Sequence[float] | None = None, n_grid: int = 50) -> list[PropertyCheck]:
    """Bound value minus the tail of the law that is supposed to attain it."""
    checks = []
    lemma_ts = ts if ts is not None else np.linspace(bounds.LEMMA2_KNEE, 20.0, n_grid + 1)[1:]
    worst = max(
        abs(bounds.lemma2_bound(t).value - tail_prob(make_lemma2_atom(t), t, inclusive=True))
        for t in lemma_ts
        if t > bounds.LEMMA2_KNEE
    ) if any(t > bounds.LEMMA2_KNEE for t in lemma_ts) else 0.0
    checks.append(PropertyCheck("sharpness.lemma2", worst <= 1e-10, worst, 1e-10))

    thm_ts = ts if ts is not None else np.linspace(bounds.THM4_KNEE, 20.0, n_grid + 1)[1:]
    gaps = []
    for t in thm_ts:
        if t <= bounds.THM4_KNEE:
            continue
        res = bounds.theorem4_bound(t)
        gaps.append(abs(res.value - tail_prob(make_thm4_extremal(res.params["u"]), t)))
    worst = max(gaps, default=0.0)
    checks.append(PropertyCheck("sharpness.thm4", worst <= 1e-8, worst, 1e-8))

    bmus = np.linspace(0.0, 1.0, n_grid + 2)[1:-1]
    worst = max(
        abs(prob_leq_shift(make_uniform_b(1.0), make_uniform_b(1.0), bm) - bounds.theorem9_upper(1.0, bm).value)
        for bm in bmus
    )
    checks.append(PropertyCheck("sharpness.thm9", worst <= 1e-10, worst, 1e-10))
    return checks


def suite_riesz(cases: int = 1000, seed: int = 0) -> list[PropertyCheck]:
    rng = np.random.default_rng(seed)
    worst = -math.inf
    held = 0
    for _ in range(cases):
        a, b, c = (random_interval_set(rng) for _ in range(3))
        lhs, rhs = riesz_check(a, b, c)
        worst = max(worst, lhs - rhs)
        held += lhs <= rhs + 1e-10
    unit = IntervalSet(((0.0, 1.0),))
    hand = riesz_check(unit, unit, unit)
    hand_err = max(abs(hand[0] - 0.5), abs(hand[1] - 0.75))
    return [
        PropertyCheck("riesz.random", held == cases, worst, 1e-10, {"held": held, "cases": cases}),
        PropertyCheck("riesz.unit_intervals", hand_err <= 1e-12, hand_err, 1e-12, {"lhs": hand[0], "rhs": hand[1]}),
    ]


def suite_reflection(cases: int = 20, seed: int = 0) -> list[PropertyCheck]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        b = float(rng.uniform(0.2, 3.0))
        d0, d1 = random_symmetric_bounded(rng, b), random_symmetric_bounded(rng, b)
        mu = float(rng.uniform(0.0, 3.0 / b))
        direct, via_abs = reflection_identity_check(d0, d1, mu)
        worst = max(worst, abs(direct - via_abs))
    return [PropertyCheck("reflection.identity", worst <= 1e-9, worst, 1e-9, {"cases": cases})]


def suite_sweeps(resolution: int = 1000) -> list[PropertyCheck]:
    checks = []
    for name, sweep, ts in (
        ("sweep.lemma2", sweep_lemma2, (1.0, 2.0)),
        ("sweep.thm4", sweep_theorem4, (2.0, 3.18198)),
    ):
        for t in ts:
            rep = sweep(t, resolution)
            ok = -1e-8 <= rep.gap <= 1e-3
            checks.append(PropertyCheck(f"{name}(t={t})", ok, rep.gap, 1e-3, rep.to_dict()))
    return checks


def mc_zscore(est: float, se: float, exact: float, roundoff: float = 1e-12) -> float:
    """|est - exact| in standard errors; a degenerate estimate (se = 0) only needs to match to roundoff."""
    if se > 0:
        return abs(est - exact) / se
    return 0.0 if abs(est - exact) <= roundoff else math.inf


def suite_montecarlo(cases: int = 20, n: int = 1_000_000, seed: int = 0) -> list[PropertyCheck]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(cases):
        dx, dy = random_mixture(rng), random_mixture(rng)
        mu = float(rng.uniform(-2.0, 2.0))
        exact = prob_leq_shift(dx, dy, mu)
        est, se = monte_carlo_prob(dx, dy, mu, n, seed + i)
        worst = max(worst, mc_zscore(est, se, exact))
    return [PropertyCheck("montecarlo.agreement", worst <= 4.0, worst, 4.0, {"cases": cases, "n": n})]


SUITES: dict[str, Callable[..., list[PropertyCheck]]] = {
    "sharpness": suite_sharpness,
    "riesz": suite_riesz,
    "reflection": suite_reflection,
    "sweeps": suite_sweeps,
    "montecarlo": suite_montecarlo,
}
