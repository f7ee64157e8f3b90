"""Atom-plus-boxcar mixtures.

Every law that attains one of the bounds in :mod:`rocbounds.bounds` is a finite
mixture of a point mass at the origin and uniform densities on intervals.
This module builds those laws, evaluates their tails and moments in closed
form, samples them by inverse CDF, and tests densities for log-concavity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

SQRT3 = math.sqrt(3.0)
WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class BoxcarComponent:
    """Uniform density of total mass ``weight`` on the open interval (lo, hi)."""

    lo: float
    hi: float
    weight: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError(f"boxcar ends must be finite, got ({self.lo}, {self.hi})")
        if not self.lo < self.hi:
            raise ValueError(f"boxcar needs lo < hi, got ({self.lo}, {self.hi})")
        if not 0.0 < self.weight <= 1.0 + WEIGHT_TOL:
            raise ValueError(f"boxcar weight must lie in (0, 1], got {self.weight}")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def height(self) -> float:
        return self.weight / self.width

    def mean(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def second_moment(self) -> float:
        lo, hi = self.lo, self.hi
        return (lo * lo + lo * hi + hi * hi) / 3.0

    def mass_above(self, t: float) -> float:
        """Mass of this component on (t, inf), already multiplied by its weight."""
        if t <= self.lo:
            return self.weight
        if t >= self.hi:
            return 0.0
        return self.weight * (self.hi - t) / self.width


@dataclass(frozen=True)
class ExtremalDistribution:
    """Mixture ``atom_weight * delta_0 + sum(components)``.

    ``label`` is a free-form descriptor carried into reports; it plays no
    part in any computation.
    """

    atom_weight: float
    components: tuple[BoxcarComponent, ...] = ()
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))
        if not -WEIGHT_TOL <= self.atom_weight <= 1.0 + WEIGHT_TOL:
            raise ValueError(f"atom weight must lie in [0, 1], got {self.atom_weight}")
        total = self.atom_weight + math.fsum(c.weight for c in self.components)
        if abs(total - 1.0) > WEIGHT_TOL:
            raise ValueError(f"mixture weights sum to {total!r}, expected 1")

    # moments -----------------------------------------------------------------

    def mean(self) -> float:
        return math.fsum(c.weight * c.mean() for c in self.components)

    def second_moment(self) -> float:
        return math.fsum(c.weight * c.second_moment() for c in self.components)

    def variance(self) -> float:
        m = self.mean()
        return self.second_moment() - m * m

    # shape -------------------------------------------------------------------

    def support(self) -> tuple[float, float]:
        los = [c.lo for c in self.components]
        his = [c.hi for c in self.components]
        if self.atom_weight > 0.0:
            los.append(0.0)
            his.append(0.0)
        return min(los), max(his)

    def density_sup(self) -> float:
        """Largest value of the absolutely continuous part's density."""
        if not self.components:
            return 0.0
        edges = sorted({c.lo for c in self.components} | {c.hi for c in self.components})
        best = 0.0
        for left, right in zip(edges[:-1], edges[1:]):
            mid = 0.5 * (left + right)
            best = max(best, self.pdf(mid))
        return best

    def pdf(self, x: float) -> float:
        """Density of the continuous part (the atom is not included)."""
        return math.fsum(c.height for c in self.components if c.lo < x < c.hi)

    def cdf(self, x: float) -> float:
        return 1.0 - tail_prob(self, x)

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        """True when the law equals its reflection about 0."""
        ends = {c.lo for c in self.components} | {c.hi for c in self.components}
        xs = sorted(ends | {-x for x in ends})
        probes = xs + [0.5 * (a + b) for a, b in zip(xs[:-1], xs[1:])]
        for x in probes:
            if abs(tail_prob(self, x) - (1.0 - tail_prob(self, -x, inclusive=True))) > tol:
                return False
        return True

    def describe(self) -> dict:
        return {
            "label": self.label,
            "atom_weight": self.atom_weight,
            "components": [[c.lo, c.hi, c.weight] for c in self.components],
        }

    @classmethod
    def from_description(cls, data: dict) -> "ExtremalDistribution":
        comps = tuple(BoxcarComponent(lo, hi, w) for lo, hi, w in data["components"])
        return cls(data["atom_weight"], comps, data.get("label", ""))


@dataclass(frozen=True)
class DensityGrid:
    """Density values ``fs`` tabulated at strictly increasing abscissae ``xs``."""

    xs: np.ndarray
    fs: np.ndarray
    normalized: bool = False

    def __post_init__(self) -> None:
        xs = np.asarray(self.xs, dtype=float)
        fs = np.asarray(self.fs, dtype=float)
        if xs.ndim != 1 or xs.shape != fs.shape:
            raise ValueError("xs and fs must be 1-D arrays of equal length")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("xs must be strictly increasing")
        if np.any(fs < 0) or not np.all(np.isfinite(fs)):
            raise ValueError("density values must be finite and nonnegative")
        if self.normalized:
            mass = float(np.trapezoid(fs, xs))
            if abs(mass - 1.0) > 1e-6:
                raise ValueError(f"grid integrates to {mass}, expected 1 within 1e-6")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "fs", fs)


# constructors ---------------------------------------------------------------------


def make_lemma2_flat() -> ExtremalDistribution:
    """Uniform law on (-sqrt(3), sqrt(3)): symmetric, mean 0, variance 1."""
    return ExtremalDistribution(0.0, (BoxcarComponent(-SQRT3, SQRT3, 1.0),), "lemma2_flat")


def make_lemma2_atom(t: float) -> ExtremalDistribution:
    """Symmetric variance-1 law maximising P(X >= t) when t > 2/sqrt(3).

    Mass ``4/(3 t^2)`` is spread uniformly on (-3t/2, 3t/2); the rest sits at 0.
    """
    if not t > 2.0 / SQRT3:
        raise ValueError(f"need t > 2/sqrt(3) ~ 1.1547, got t={t}")
    beta = 4.0 / (3.0 * t * t)
    half = 1.5 * t
    return ExtremalDistribution(
        1.0 - beta, (BoxcarComponent(-half, half, beta),), f"lemma2_atom(t={t!r})"
    )


def make_thm4_extremal(u: float) -> ExtremalDistribution:
    """One-sided law with mode 0, variance 1 and mean ``1/sqrt(u^2 - 1)``.

    Atom ``1 - 4/(3u^2)`` at the origin plus a uniform piece of mass
    ``4/(3u^2)`` on ``(0, 3u^2 / (2 sqrt(u^2 - 1)))``. At ``u = 2/sqrt(3)`` the
    atom vanishes and the law is uniform on (0, 2 sqrt(3)).
    """
    if not u >= 2.0 / SQRT3:
        raise ValueError(f"need u >= 2/sqrt(3) ~ 1.1547, got u={u}")
    beta = min(4.0 / (3.0 * u * u), 1.0)
    right = 3.0 * u * u / (2.0 * math.sqrt(u * u - 1.0))
    return ExtremalDistribution(
        1.0 - beta, (BoxcarComponent(0.0, right, beta),), f"thm4_extremal(u={u!r})"
    )


def make_uniform_b(b: float) -> ExtremalDistribution:
    """Uniform law of height ``b`` centred at 0, i.e. on (-1/(2b), 1/(2b))."""
    if not b > 0:
        raise ValueError(f"need b > 0, got b={b}")
    half = 0.5 / b
    return ExtremalDistribution(0.0, (BoxcarComponent(-half, half, 1.0),), f"uniform_b(b={b!r})")


# evaluation -----------------------------------------------------------------------


def tail_prob(d: ExtremalDistribution, t: float, inclusive: bool = False) -> float:
    """Exact ``P(X > t)``, or ``P(X >= t)`` when ``inclusive`` is set.

    The two conventions differ only through the atom at 0.
    """
    if t == math.inf:
        return 0.0
    if t == -math.inf:
        return 1.0
    total = math.fsum(c.mass_above(t) for c in d.components)
    if t < 0.0 or (inclusive and t == 0.0):
        total += d.atom_weight
    return min(max(total, 0.0), 1.0)


def _inverse_cdf_table(d: ExtremalDistribution) -> tuple[np.ndarray, np.ndarray]:
    """Knots (x, F(x)) of the piecewise-linear CDF; the atom is a vertical step."""
    xs = sorted({c.lo for c in d.components} | {c.hi for c in d.components})
    if d.atom_weight > 0.0:
        xs = sorted(set(xs) | {0.0})
    knots_x: list[float] = []
    knots_f: list[float] = []
    for x in xs:
        left = 1.0 - tail_prob(d, x, inclusive=True)
        right = 1.0 - tail_prob(d, x)
        knots_x.append(x)
        knots_f.append(left)
        if right > left:
            knots_x.append(x)
            knots_f.append(right)
    return np.asarray(knots_x), np.asarray(knots_f)


def sample(d: ExtremalDistribution, n: int, seed: int | np.random.Generator) -> np.ndarray:
    """Draw ``n`` i.i.d. values by inverting the mixture CDF."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    u = rng.random(n)
    kx, kf = _inverse_cdf_table(d)
    # segment j spans [kf[j], kf[j+1]); flat CDF stretches have zero width and are never hit
    j = np.searchsorted(kf, u, side="right") - 1
    j = np.clip(j, 0, len(kf) - 2)
    f0, f1 = kf[j], kf[j + 1]
    x0, x1 = kx[j], kx[j + 1]
    span = f1 - f0
    frac = np.divide(u - f0, span, out=np.zeros_like(u), where=span > 0)
    return x0 + frac * (x1 - x0)


def is_log_concave(g: DensityGrid, rtol: float = 1e-9) -> bool:
    """Check that log f is concave on the interior of the positive support.

    Slopes of log f between neighbouring grid points must be nonincreasing,
    up to ``rtol`` times the local slope magnitude. A positive support broken
    by zeros is not an interval, so the answer is then False.
    """
    pos = np.flatnonzero(g.fs > 0)
    if pos.size < 3:
        raise ValueError("need at least 3 grid points with positive density")
    if np.any(np.diff(pos) != 1):
        return False
    xs = g.xs[pos]
    logs = np.log(g.fs[pos])
    slopes = np.diff(logs) / np.diff(xs)
    rise = np.diff(slopes)
    scale = np.maximum(1.0, np.maximum(np.abs(slopes[:-1]), np.abs(slopes[1:])))
    return bool(np.all(rise <= rtol * scale))


def mixture(
    atom_weight: float, boxes: Sequence[tuple[float, float, float]], label: str = ""
) -> ExtremalDistribution:
    """Shorthand: ``mixture(0.2, [(-1, 1, 0.8)])``."""
    return ExtremalDistribution(
        atom_weight, tuple(BoxcarComponent(lo, hi, w) for lo, hi, w in boxes), label
    )
