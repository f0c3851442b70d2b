"""Multi-level parameter calculus for the renormalization hierarchy.

One hierarchy level carries a rank floor R and derived scales T = lam^R,
Delta = T^delta, Gamma = T^gamma, Phi = T^phi, Psi = (Gamma*Phi)^(1/2) and a
trap probability bound w = T^(-omega), where lam = 2^(1/2).  Since these
quantities overflow floats for modest base sizes, each one is stored as its
exact base-lam logarithm (a Fraction); floats are produced only for reports.

Level stepping multiplies R by tau and updates the slope and cleanness
bounds additively:

    sigma' = sigma + Lambda * slb^-3 * Delta/Gamma
    q'     = q + Delta' / T

The constants Lambda, c2, c3 and the base rank R1 are configuration knobs
with documented defaults; no numeric value for them is canonical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import InputBoundsError

RationalLike = Union[int, str, Fraction, float]

#: log2 of the rank base lam = 2^(1/2).
LAM_LOG2 = Fraction(1, 2)
#: polynomial degree in the wall probability bound p(r) = c2 * r^-C1 * lam^-r
C1 = 2

# Exact-comparison guard: beyond this many bits, fall back to float logs
# (the margin at that magnitude dwarfs float error).
_EXACT_CMP_BIT_LIMIT = 4_000_000


def _frac(x: RationalLike) -> Fraction:
    """Fractions from ints, strings, Fractions, or short decimal floats."""
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


def lam_pow(exponent: Fraction) -> float:
    """lam^exponent as a float; overflow gives inf, underflow gives 0.0."""
    try:
        return float(2.0 ** (float(exponent) / 2))
    except OverflowError:
        return math.inf


def cmp_lam_pow(exponent: Fraction, value: Fraction) -> int:
    """Sign of lam^exponent - value, exact whenever the comparison is close.

    Far-apart comparisons use float logs; near-ties fall back to the exact
    integer comparison 2^p vs value^(2q) for exponent = p/q.
    """
    if value <= 0:
        return 1
    log2_val = math.log2(value.numerator) - math.log2(value.denominator)
    diff = float(exponent) / 2 - log2_val
    if abs(diff) > 1e-9:
        return 1 if diff > 0 else -1
    p, q = exponent.numerator, exponent.denominator
    est_bits = abs(p) + 2 * q * (
        value.numerator.bit_length() + value.denominator.bit_length()
    )
    if est_bits > _EXACT_CMP_BIT_LIMIT:
        return 1 if diff > 0 else -1
    lhs = Fraction(2) ** p
    rhs = value ** (2 * q)
    return (lhs > rhs) - (lhs < rhs)


@dataclass(frozen=True)
class ExponentTuple:
    """The seven tunable exponents of the hierarchy.

    lam = 2^(1/2) and the polynomial degree c1 = 2 are fixed.  All fields are
    exact rationals; floats are accepted and parsed through their decimal
    representation.
    """

    delta: Fraction
    gamma: Fraction
    phi: Fraction
    tau: Fraction
    tau_prime: Fraction
    omega: Fraction
    chi: Fraction

    def __post_init__(self):
        for name in ("delta", "gamma", "phi", "tau", "tau_prime", "omega", "chi"):
            val = _frac(getattr(self, name))
            if val <= 0:
                raise InputBoundsError(f"exponent {name} must be positive")
            object.__setattr__(self, name, val)

    @property
    def tau_bar(self) -> Optional[Fraction]:
        """2*tau / (tau - 1); undefined at tau = 1."""
        if self.tau == 1:
            return None
        return 2 * self.tau / (self.tau - 1)


#: The feasible tuple used throughout reports and tests.
DEFAULT_EXPONENTS = ExponentTuple(
    delta=Fraction(3, 20),
    gamma=Fraction(9, 50),
    phi=Fraction(6, 25),
    tau=Fraction(7, 4),
    tau_prime=Fraction(5, 2),
    omega=Fraction(9, 2),
    chi=Fraction(3, 200),
)


@dataclass(frozen=True)
class ConstraintCheck:
    """Outcome of one named feasibility constraint."""

    name: str
    relation: str
    lhs: object
    rhs: object
    ok: bool

    def to_json(self) -> dict:
        return {"constraint": self.name, "lhs": self.lhs, "rhs": self.rhs, "ok": self.ok}


@dataclass(frozen=True)
class ExponentReport:
    checks: tuple[ConstraintCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def violations(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.checks if not c.ok)

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.checks]


CONSTRAINT_NAMES = (
    "tau-range",
    "tau-prime-range",
    "exponent-order",
    "tau-phi-cap",
    "phi-below-tau-delta",
    "gamma-spacing",
    "omega-trap-floor",
    "omega-correlated-floor",
    "omega-emerging-floor",
    "tau-prime-floor",
    "chi-gap-cap",
    "chi-delta-cap",
    "chi-omega-cap",
)


def verify_exponents(e: ExponentTuple) -> ExponentReport:
    """Check the thirteen feasibility constraints by exact rational arithmetic.

    Chain constraints report their member values; simple inequalities report
    both sides as floats.  Failure is a value, never an exception.
    """
    d, g, f = e.delta, e.gamma, e.phi
    t, tp, w, x = e.tau, e.tau_prime, e.omega, e.chi
    tb = e.tau_bar
    checks = [
        ConstraintCheck(
            "tau-range", "1 < tau < 2", float(t), [1.0, 2.0], 1 < t < 2
        ),
        ConstraintCheck(
            "tau-prime-range",
            "tau < tau' < tau^2",
            float(tp),
            [float(t), float(t * t)],
            t < tp < t * t,
        ),
        ConstraintCheck(
            "exponent-order",
            "0 < delta < gamma < phi < 1",
            [float(d), float(g), float(f)],
            [0.0, 1.0],
            0 < d < g < f < 1,
        ),
        ConstraintCheck(
            "tau-phi-cap", "tau <= 2 - phi", float(t), float(2 - f), t <= 2 - f
        ),
        ConstraintCheck(
            "phi-below-tau-delta", "phi < tau*delta", float(f), float(t * d), f < t * d
        ),
        ConstraintCheck(
            "gamma-spacing",
            "2*(gamma - delta) == phi - gamma",
            float(2 * (g - d)),
            float(f - g),
            2 * (g - d) == f - g,
        ),
        ConstraintCheck(
            "omega-trap-floor",
            "2*gamma - tau*delta + 1 < omega",
            float(2 * g - t * d + 1),
            float(w),
            2 * g - t * d + 1 < w,
        ),
        ConstraintCheck(
            "omega-correlated-floor",
            "4*(gamma + delta) < omega*(4 - tau)",
            float(4 * (g + d)),
            float(w * (4 - t)),
            4 * (g + d) < w * (4 - t),
        ),
        ConstraintCheck(
            "omega-emerging-floor",
            "4*gamma + 6*delta + tau' < 2*omega",
            float(4 * g + 6 * d + tp),
            float(2 * w),
            4 * g + 6 * d + tp < 2 * w,
        ),
        ConstraintCheck(
            "tau-prime-floor",
            "tau*(delta + 1) < tau'",
            float(t * (d + 1)),
            float(tp),
            t * (d + 1) < tp,
        ),
        ConstraintCheck(
            "chi-gap-cap",
            "tau*chi < gamma - delta",
            float(t * x),
            float(g - d),
            t * x < g - d,
        ),
        ConstraintCheck(
            "chi-delta-cap",
            "tau_bar*chi < 1 - tau*delta",
            None if tb is None else float(tb * x),
            float(1 - t * d),
            tb is not None and tb * x < 1 - t * d,
        ),
        ConstraintCheck(
            "chi-omega-cap",
            "tau_bar*chi < omega - 2*tau*delta",
            None if tb is None else float(tb * x),
            float(w - 2 * t * d),
            tb is not None and tb * x < w - 2 * t * d,
        ),
    ]
    return ExponentReport(tuple(checks))


@dataclass(frozen=True)
class LevelParams:
    """The full parameter vector of one hierarchy level.

    Pure powers of lam (T, Delta, Gamma, Phi, Psi, w) are exposed as floats
    but held exactly by the log_* Fraction properties; the slope bounds
    sigma_x, sigma_y and cleanness bounds q_tri, q_inv evolve additively and
    are plain floats.  w_log is None at the base level, where w = 0 exactly.
    """

    level: int
    R: Fraction
    exponents: ExponentTuple
    slb: Fraction
    sigma_x: float
    sigma_y: float
    q_tri: float
    q_inv: float
    w_log: Optional[Fraction]
    Lambda_: Fraction = Fraction(10)
    c2: Fraction = Fraction(1, 4)
    c3: Fraction = Fraction(4)
    R1: Fraction = field(default=Fraction(0))

    # Exact base-lam logarithms of the derived scales.
    @property
    def log_T(self) -> Fraction:
        return self.R

    @property
    def log_Delta(self) -> Fraction:
        return self.exponents.delta * self.R

    @property
    def log_Gamma(self) -> Fraction:
        return self.exponents.gamma * self.R

    @property
    def log_Phi(self) -> Fraction:
        return self.exponents.phi * self.R

    @property
    def log_Psi(self) -> Fraction:
        return (self.exponents.gamma + self.exponents.phi) * self.R / 2

    @property
    def T(self) -> float:
        return lam_pow(self.log_T)

    @property
    def Delta(self) -> float:
        return lam_pow(self.log_Delta)

    @property
    def Gamma(self) -> float:
        return lam_pow(self.log_Gamma)

    @property
    def Phi(self) -> float:
        return lam_pow(self.log_Phi)

    @property
    def Psi(self) -> float:
        return lam_pow(self.log_Psi)

    @property
    def w(self) -> float:
        return 0.0 if self.w_log is None else lam_pow(self.w_log)

    def slope_sanity(self) -> list[str]:
        """Names of violated slope and cleanness bounds at this level."""
        bad = []
        if not 1 / (2 * self.R) <= Fraction(self.sigma_x) / 2:
            bad.append("sigma_x-floor")
        if not Fraction(self.sigma_x) / 2 <= self.slb <= Fraction(self.sigma_x):
            bad.append("slb-between")
        if not self.sigma_y >= 2:
            bad.append("sigma_y-floor")
        if not Fraction(self.sigma_x) * Fraction(self.sigma_y) < 1 - self.slb:
            bad.append("slope-product")
        if not self.q_tri < 0.05:
            bad.append("q-tri-cap")
        if not self.q_inv < 0.55:
            bad.append("q-inv-cap")
        return bad


def base_params(
    m: int,
    exponents: ExponentTuple = DEFAULT_EXPONENTS,
    Lambda_: RationalLike = 10,
    c2: RationalLike = Fraction(1, 4),
    c3: RationalLike = 4,
) -> LevelParams:
    """Level-1 parameters for gap bound m: slb = sigma_x = 1/2m, sigma_y = m,
    R1 = 2m, q_tri = 0, q_inv = 0.5, w = 0."""
    if m < 2:
        raise InputBoundsError("base level needs m >= 2 (sigma_y >= 2)")
    R1 = Fraction(2 * m)
    return LevelParams(
        level=1,
        R=R1,
        exponents=exponents,
        slb=Fraction(1, 2 * m),
        sigma_x=1.0 / (2 * m),
        sigma_y=float(m),
        q_tri=0.0,
        q_inv=0.5,
        w_log=None,
        Lambda_=_frac(Lambda_),
        c2=_frac(c2),
        c3=_frac(c3),
        R1=R1,
    )


def _step(params: LevelParams) -> LevelParams:
    e = params.exponents
    R_next = params.R * e.tau
    # sigma' = sigma + Lambda * slb^-3 * Delta/Gamma, same additive term both axes.
    bump = float(params.Lambda_ / params.slb**3) * lam_pow(
        (e.delta - e.gamma) * params.R
    )
    # q' = q + Delta'/T = q + lam^(R*(delta*tau - 1))
    q_bump = lam_pow((e.delta * e.tau - 1) * params.R)
    return replace(
        params,
        level=params.level + 1,
        R=R_next,
        sigma_x=params.sigma_x + bump,
        sigma_y=params.sigma_y + bump,
        q_tri=params.q_tri + q_bump,
        q_inv=params.q_inv + q_bump,
        w_log=-e.omega * R_next,
    )


@dataclass(frozen=True)
class LevelFacts:
    """Per-level report of the stepping invariants."""

    level: int
    delta_ratio_ok: bool  # Delta_k / Delta_{k+1} < slb^2 / 2
    sigma_monotone: bool
    q_tri_ok: bool
    q_inv_ok: bool
    slope_violations: tuple[str, ...]


def level_params(
    exponents: ExponentTuple, base: LevelParams, k: int
) -> LevelParams:
    """Parameter vector at level k, iterating the stepping rule from `base`.

    k = 1 returns the base unchanged.  Raises when the exponent tuple fails
    feasibility.
    """
    if k < 1:
        raise InputBoundsError("level must be >= 1")
    report = verify_exponents(exponents)
    if not report.passed:
        raise InputBoundsError(
            "exponent tuple infeasible: " + ", ".join(report.violations)
        )
    params = replace(base, exponents=exponents)
    for _ in range(k - 1):
        params = _step(params)
    return params


def level_table(
    exponents: ExponentTuple, base: LevelParams, k_max: int
) -> list[tuple[LevelParams, LevelFacts]]:
    """Levels 1..k_max with their stepping facts.

    delta_ratio compares Delta_k / Delta_{k+1} = lam^(delta*R_k*(1 - tau))
    against slb^2/2 exactly in exponent space.
    """
    report = verify_exponents(exponents)
    if not report.passed:
        raise InputBoundsError(
            "exponent tuple infeasible: " + ", ".join(report.violations)
        )
    rows = []
    params = replace(base, exponents=exponents)
    for _ in range(k_max):
        ratio_log = exponents.delta * params.R * (1 - exponents.tau)
        facts = LevelFacts(
            level=params.level,
            delta_ratio_ok=cmp_lam_pow(ratio_log, base.slb**2 / 2) < 0,
            sigma_monotone=True,  # the additive bump is nonnegative
            q_tri_ok=params.q_tri < 0.05,
            q_inv_ok=params.q_inv < 0.55,
            slope_violations=tuple(params.slope_sanity()),
        )
        rows.append((params, facts))
        if params.level < k_max:
            params = _step(params)
    return rows


def feasibility_horizon(rows: Sequence[tuple[LevelParams, LevelFacts]]) -> int:
    """Last level before any stepping fact fails (0 when level 1 already fails)."""
    horizon = 0
    for params, facts in rows:
        ok = (
            facts.delta_ratio_ok
            and facts.q_tri_ok
            and facts.q_inv_ok
            and not facts.slope_violations
        )
        if not ok:
            break
        horizon = params.level
    return horizon


def rank_prob(r, c2: RationalLike = Fraction(1, 4)) -> float:
    """Wall probability bound p(r) = c2 * r^-2 * lam^-r, strictly decreasing."""
    if r <= 0:
        raise InputBoundsError("rank must be positive")
    return float(_frac(c2)) * float(r) ** (-C1) * 2.0 ** (-float(r) / 2)


def hole_prob(r, chi: RationalLike = Fraction(3, 200), c3: RationalLike = 4) -> float:
    """Hole probability floor h(r) = c3 * lam^(-chi*r), strictly decreasing."""
    if r <= 0:
        raise InputBoundsError("rank must be positive")
    return float(_frac(c3)) * 2.0 ** (-float(_frac(chi)) * float(r) / 2)


def rank_bound(R: RationalLike, tau: RationalLike) -> Fraction:
    """Upper bound tau_bar * R on every rank present at rank floor R."""
    t = _frac(tau)
    if t <= 1:
        raise InputBoundsError("tau must exceed 1")
    return (2 * t / (t - 1)) * _frac(R)


def emerging_rank(R: RationalLike, tau_prime: RationalLike) -> Fraction:
    """Rank tau' * R assigned to emerging walls at rank floor R."""
    return _frac(tau_prime) * _frac(R)
