"""Closed-form tail bounds for unimodal and bounded-density laws.

Every bound returns a :class:`BoundResult`. Values are clamped to [0, 1]; the
unclamped number is kept in ``params["raw_value"]``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

SQRT3 = math.sqrt(3.0)
SQRT6 = math.sqrt(6.0)
LEMMA2_KNEE = 2.0 / SQRT3
THM4_KNEE = 4.0 / SQRT3
COR6_KNEE = SQRT6 + 4.0 * math.sqrt(2.0 / 3.0)


class Branch(str, enum.Enum):
    LINEAR = "LINEAR"
    QUADRATIC = "QUADRATIC"
    SATURATED = "SATURATED"
    VACUOUS = "VACUOUS"


class Direction(str, enum.Enum):
    UPPER = "UPPER"
    LOWER = "LOWER"


class ConvergenceFailure(RuntimeError):
    """The u(t) bracket did not change sign or the solve ran out of iterations."""


@dataclass(frozen=True)
class BoundResult:
    name: str
    value: float
    branch: Branch
    direction: Direction
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "branch": self.branch.value,
            "direction": self.direction.value,
            "params": dict(self.params),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BoundResult":
        return cls(
            data["name"],
            data["value"],
            Branch(data["branch"]),
            Direction(data["direction"]),
            dict(data["params"]),
        )


@dataclass(frozen=True)
class RootSolve:
    t: float
    u: float
    residual: float
    iterations: int
    bracket: tuple[float, float]

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "u": self.u,
            "residual": self.residual,
            "iterations": self.iterations,
            "bracket": list(self.bracket),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RootSolve":
        return cls(data["t"], data["u"], data["residual"], data["iterations"], tuple(data["bracket"]))


def _result(name, raw, branch, direction, **params) -> BoundResult:
    params["raw_value"] = raw
    value = min(max(raw, 0.0), 1.0)
    return BoundResult(name, value, branch, direction, params)


def _positive(name: str, x: float) -> None:
    if not (math.isfinite(x) and x > 0):
        raise ValueError(f"{name} must be a finite positive number, got {x}")


# Gauss / symmetric unimodal tails -------------------------------------------------


def gauss_bound(s: float, tau: float) -> BoundResult:
    """Upper bound on P(|X - m| > s) for X unimodal at m with E(X - m)^2 = tau^2."""
    _positive("tau", tau)
    if not (math.isfinite(s) and s >= 0):
        raise ValueError(f"s must be finite and >= 0, got {s}")
    knee = 2.0 * tau / SQRT3
    if s <= knee:
        return _result("gauss", 1.0 - s / (SQRT3 * tau), Branch.LINEAR, Direction.UPPER, s=s, tau=tau)
    return _result(
        "gauss", 4.0 * tau * tau / (9.0 * s * s), Branch.QUADRATIC, Direction.UPPER, s=s, tau=tau
    )


def lemma2_linear(t: float) -> float:
    return 0.5 - t / (2.0 * SQRT3)


def lemma2_quadratic(t: float) -> float:
    return 2.0 / (9.0 * t * t)


def lemma2_bound(t: float) -> BoundResult:
    """Sharp upper bound on P(X >= t), X symmetric unimodal with variance 1."""
    _positive("t", t)
    if t <= LEMMA2_KNEE:
        return _result(
            "lemma2", lemma2_linear(t), Branch.LINEAR, Direction.UPPER, t=t, attained_by="lemma2_flat"
        )
    return _result(
        "lemma2",
        lemma2_quadratic(t),
        Branch.QUADRATIC,
        Direction.UPPER,
        t=t,
        beta_t=4.0 / (3.0 * t * t),
        attained_by=f"lemma2_atom(t={t!r})",
    )


def corollary3_bound(t: float, mu_x: float = 0.0) -> BoundResult:
    """Upper bound on P(|X| > t (1 + mu_x^2)^(1/2)) for X unimodal at 0, variance 1."""
    _positive("t", t)
    if not math.isfinite(mu_x):
        raise ValueError(f"mu_x must be finite, got {mu_x}")
    scaled = t * math.sqrt(1.0 + mu_x * mu_x)
    if t < LEMMA2_KNEE:
        return _result(
            "cor3", 1.0 - t / SQRT3, Branch.LINEAR, Direction.UPPER, t=t, mu_x=mu_x, threshold=scaled
        )
    return _result(
        "cor3", 4.0 / (9.0 * t * t), Branch.QUADRATIC, Direction.UPPER, t=t, mu_x=mu_x, threshold=scaled
    )


# mean-shifted unimodal tail -------------------------------------------------------


def thm4_cubic(t: float, u: float) -> float:
    """Left side of the cubic in t whose positive root ties t to u."""
    s = math.sqrt(u * u - 1.0)
    return t**3 - (3.0 * u * u / (2.0 * s)) * t * t + 0.5 * (u**4 / (u * u - 1.0)) ** 1.5


def _root_factor(t: float, u: float) -> float:
    # the cubic equals (t - u^2/s)^2 (t + u^2/(2s)); it touches zero without
    # crossing, so the bracket search runs on the sign-changing factor
    return u * u - t * math.sqrt(u * u - 1.0)


def solve_u_of_t(t: float, max_iter: int = 200) -> RootSolve:
    """Find u in [2/sqrt(3), t] for which t is the positive root of the cubic.

    Bisection on ``u^2 - t sqrt(u^2 - 1)``, finished with one secant step.
    """
    if not (math.isfinite(t) and t > THM4_KNEE):
        raise ValueError(f"need t > 4/sqrt(3) ~ 2.3094, got t={t}")
    lo, hi = LEMMA2_KNEE + 1e-12, t
    bracket = (lo, hi)
    f_lo, f_hi = _root_factor(t, lo), _root_factor(t, hi)
    if not (f_lo < 0.0 < f_hi):
        raise ConvergenceFailure(f"no sign change on [{lo}, {hi}] for t={t}: ({f_lo}, {f_hi})")
    it = 0
    while it < max_iter:
        it += 1
        mid = 0.5 * (lo + hi)
        f_mid = _root_factor(t, mid)
        if f_mid == 0.0:
            lo = hi = mid
            break
        if f_mid < 0.0:
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
        if hi - lo <= 4.0 * math.ulp(hi):
            break
    else:
        raise ConvergenceFailure(f"bisection did not converge in {max_iter} steps for t={t}")
    u = lo if abs(f_lo) <= abs(f_hi) else hi
    if f_hi != f_lo:
        secant = lo - f_lo * (hi - lo) / (f_hi - f_lo)
        if lo <= secant <= hi and abs(_root_factor(t, secant)) < abs(_root_factor(t, u)):
            u = secant
    residual = thm4_cubic(t, u)
    if abs(residual) > 1e-10 * t**3:
        raise ConvergenceFailure(f"cubic residual {residual} too large at t={t}, u={u}")
    return RootSolve(t=t, u=u, residual=residual, iterations=it, bracket=bracket)


def thm4_linear(t: float) -> float:
    return 1.0 - t / (2.0 * SQRT3)


def thm4_quadratic(t: float, u: float) -> float:
    return 4.0 * u * u / (9.0 * t * t * (u * u - 1.0))


def theorem4_bound(t: float) -> BoundResult:
    """Tail value P(X > t) for X unimodal at 0 with variance 1 (mean free).

    For t <= 4/sqrt(3) this is the sharp bound ``1 - t/(2 sqrt(3))``. Above the
    knee it is ``4u^2 / (9 t^2 (u^2 - 1))`` with ``u = u(t)``, which is exactly
    the tail of ``make_thm4_extremal(u)`` at t. That second value is *not* an
    upper bound over the whole class: the uniform law on (0, 2 sqrt(3)) beats
    it for t in (4/sqrt(3), 2 sqrt(3)), and one-sided atom-plus-boxcar laws beat
    it slightly beyond. Use :func:`theorem4_envelope` for a guaranteed bound.
    """
    _positive("t", t)
    if t <= THM4_KNEE:
        return _result(
            "thm4", thm4_linear(t), Branch.LINEAR, Direction.UPPER, t=t, attained_by="uniform(0, 2*sqrt(3))"
        )
    root = solve_u_of_t(t)
    u = root.u
    return _result(
        "thm4",
        thm4_quadratic(t, u),
        Branch.QUADRATIC,
        Direction.UPPER,
        t=t,
        u=u,
        mu_x=1.0 / math.sqrt(u * u - 1.0),
        residual=root.residual,
        iterations=root.iterations,
        bracket=list(root.bracket),
        envelope=theorem4_envelope(t).value,
    )


def theorem4_envelope(t: float) -> BoundResult:
    """Valid upper bound on P(X > t), X unimodal at 0, variance 1, mean free.

    Symmetrising X and using the symmetric unimodal bound with variance ``1 + mu_X^2 <= 4``
    gives ``1 - t/(2 sqrt(3))`` up to 4/sqrt(3) and ``16/(9 t^2)`` beyond.
    """
    _positive("t", t)
    if t <= THM4_KNEE:
        return _result("thm4_envelope", thm4_linear(t), Branch.LINEAR, Direction.UPPER, t=t)
    return _result("thm4_envelope", 16.0 / (9.0 * t * t), Branch.QUADRATIC, Direction.UPPER, t=t)


# shift lower bound / mode shift ---------------------------------------------------


def mode_shift_constant() -> float:
    """Largest |mode| of (X - Y)/sqrt(2) for standardised X, Y, one strongly unimodal."""
    return SQRT3


def cor6_linear(mu: float) -> float:
    return (mu - SQRT6) / (2.0 * SQRT6)


def cor6_quadratic(mu: float) -> float:
    return 1.0 - 32.0 * (3.0 * (mu - SQRT6)) ** -2


def corollary6_lower(mu: float) -> BoundResult:
    """Lower bound on P(X <= Y + mu) for standardised unimodal X, Y.

    Zero (branch VACUOUS) for mu <= sqrt(6).
    """
    if not math.isfinite(mu):
        raise ValueError(f"mu must be finite, got {mu}")
    shift = math.sqrt(2.0) * mode_shift_constant()
    if mu <= shift:
        return _result("cor6", 0.0, Branch.VACUOUS, Direction.LOWER, mu=mu)
    if mu <= COR6_KNEE:
        return _result("cor6", cor6_linear(mu), Branch.LINEAR, Direction.LOWER, mu=mu)
    return _result("cor6", cor6_quadratic(mu), Branch.QUADRATIC, Direction.LOWER, mu=mu)


# bounded-density upper bound ------------------------------------------------------


def thm9_quadratic(b: float, mu: float) -> float:
    bm = b * mu
    return bm + 0.5 * (1.0 - bm * bm)


def theorem9_upper(b: float, mu: float) -> BoundResult:
    """Upper bound on P(X <= Y + mu) for symmetric X, Y with densities <= b."""
    _positive("b", b)
    if not (math.isfinite(mu) and mu >= 0):
        raise ValueError(f"mu must be finite and >= 0, got {mu}")
    bm = b * mu
    if bm >= 1.0:
        return _result("thm9", 1.0, Branch.SATURATED, Direction.UPPER, b=b, mu=mu, b_mu=bm)
    return _result("thm9", thm9_quadratic(b, mu), Branch.QUADRATIC, Direction.UPPER, b=b, mu=mu, b_mu=bm)


def junction_values() -> dict[str, tuple[float, float, float]]:
    """Both adjacent branch formulas evaluated at each bound's knee.

    Maps bound name to ``(knee, left_formula, right_formula)``. At the mean-shifted
    knee the right formula is evaluated with u = 2/sqrt(3), the cubic's root
    that joins the linear piece; the solver's right-hand limit uses the other
    root u = 2 and gives 1/9.
    """
    return {
        "gauss": (LEMMA2_KNEE, 1.0 - LEMMA2_KNEE / SQRT3, 4.0 / (9.0 * LEMMA2_KNEE**2)),
        "lemma2": (LEMMA2_KNEE, lemma2_linear(LEMMA2_KNEE), lemma2_quadratic(LEMMA2_KNEE)),
        "cor3": (LEMMA2_KNEE, 1.0 - LEMMA2_KNEE / SQRT3, 4.0 / (9.0 * LEMMA2_KNEE**2)),
        "thm4": (THM4_KNEE, thm4_linear(THM4_KNEE), thm4_quadratic(THM4_KNEE, LEMMA2_KNEE)),
        "thm4_envelope": (THM4_KNEE, thm4_linear(THM4_KNEE), 16.0 / (9.0 * THM4_KNEE**2)),
        "cor6": (COR6_KNEE, cor6_linear(COR6_KNEE), cor6_quadratic(COR6_KNEE)),
        "thm9": (1.0, thm9_quadratic(1.0, 1.0), 1.0),
    }
