"""Numerical discovery of dominating fan subsolutions with exact
rational certification.

The Rankine-Hugoniot equalities are eliminated by construction: momentum
and trace chains propagate from the left boundary, and the two remaining
scalar equalities (the mass condition at the last interface and the
telescoped normal-momentum condition) are solved as a linear system for
the two middle densities, with determinant (mu1-mu2)(mu3-mu2)(mu3-mu1).
The search therefore only fights strict inequalities: speed ordering,
positivity, negative definiteness per region, the energy-flux inequality
per interface, and the dominance target on the reference shock plane.

Certification rounds the free variables to small rationals, pins the
matched plane speed to the exact reference shock speed, re-solves the
closure in the quadratic tower, and re-runs the full exact verification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize

from .exactnum import Inconclusive, XReal, as_xreal, sign
from .fan import FanSubsolution, beats_selfsimilar, verify_fan
from .model import EulerState, PHPoint, PressureLaw, lift_state
from .riemann import Shock, selfsim_dissipation, solve_riemann

__all__ = [
    "SearchConfig",
    "Candidate",
    "DegenerateClosure",
    "chain_close",
    "objective",
    "search_fan",
    "certify",
]


class DegenerateClosure(ZeroDivisionError):
    """Closure division degenerates (equal densities or speeds)."""


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 64
    max_iters: int = 4000
    margin_weight: float = 1.0
    rounding_denominator_cap: int = 10 ** 12
    rng_seed: int = 0

    def __post_init__(self):
        if (self.restarts < 0 or self.max_iters <= 0 or self.margin_weight <= 0
                or self.rounding_denominator_cap <= 0 or self.rng_seed < 0):
            raise ValueError("config values must be positive")


# free-variable layout (symmetric ansatz: the boundary tangential momenta
# vanish, so interior tangential momenta and off-diagonal entries are zero)
_VAR_NAMES = ("mu0", "mu2", "mu3", "rho1", "q1", "q2", "q3", "F12", "F22", "F32")


@dataclass
class Candidate:
    """Float candidate: free variables plus the closed chain values."""

    law: PressureLaw
    left: EulerState
    right: EulerState
    sigma: float
    x: np.ndarray
    mu: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    rho: tuple[float, float, float] = (0.0, 0.0, 0.0)
    m2: tuple[float, float, float] = (0.0, 0.0, 0.0)
    u11: tuple[float, float, float] = (0.0, 0.0, 0.0)
    brackets: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    margins: dict = field(default_factory=dict)
    residual: float = math.inf
    feasible: bool = False
    seed: int | None = None

    def to_dict(self) -> dict:
        """Reproducibility dump: seed, pinned speed, free variables."""
        return {
            "seed": self.seed,
            "sigma": self.sigma,
            "variables": {name: float(v) for name, v in zip(_VAR_NAMES, self.x)},
            "margins": {k: float(v) for k, v in self.margins.items()},
            "feasible": self.feasible,
        }


def _float_law(law: PressureLaw):
    gamma = float(law.gamma)
    rho_star = float(law.rho_star)

    def p(rho: float) -> float:
        return rho ** gamma

    def P(rho: float) -> float:
        if gamma == 1.0:
            return rho * math.log(rho / rho_star)
        base = rho ** gamma / (gamma - 1.0)
        if rho_star == 0.0:
            return base
        return base - rho * rho_star ** (gamma - 1.0) / (gamma - 1.0)

    return gamma, p, P


def _boundary(law: PressureLaw, state: EulerState, as_float: bool):
    z, e = lift_state(law, state)
    vals = (state.rho, z.m[1], z.u11, z.q, z.F[1], e)
    if as_float:
        return tuple(float(v) for v in vals)
    return vals


# ---------------------------------------------------------------------------
# chains and closure (generic over floats and exact numbers)
# ---------------------------------------------------------------------------

def _is_zero(v) -> bool:
    return (v == 0.0) if isinstance(v, float) else (sign(v) == 0)


def chain_close(law: PressureLaw, left: EulerState, right: EulerState,
                mu012, rho123, q123):
    """Close the Rankine-Hugoniot equalities by forward chaining.

    The momentum chain determines the interior normal momenta, the last
    mass condition determines mu3, and the trace chain determines the
    interior trace-free entries.  The normal-momentum condition at the
    last interface telescopes to a relation without the q's, so no chain
    variable can absorb it; it is returned as ``residual`` instead.
    Works verbatim over floats or exact numbers.
    """
    as_float = isinstance(mu012[0], float)
    rho_m, m_m, u_m, q_m, _, _ = _boundary(law, left, as_float)
    rho_p, m_p, u_p, q_p, _, _ = _boundary(law, right, as_float)

    mu0, mu1, mu2 = mu012
    rho1, rho2, rho3 = rho123
    q1, q2, q3 = q123

    m1 = m_m - mu0 * (rho_m - rho1)
    m2 = m1 - mu1 * (rho1 - rho2)
    m3 = m2 - mu2 * (rho2 - rho3)
    drho = rho3 - rho_p
    if _is_zero(drho):
        raise DegenerateClosure("rho3 equals the right boundary density")
    mu3 = (m3 - m_p) / drho

    u1 = u_m - q_m + q1 + mu0 * (m_m - m1)
    u2 = u1 - q1 + q2 + mu1 * (m1 - m2)
    u3 = u2 - q2 + q3 + mu2 * (m2 - m3)
    residual = mu3 * (m3 - m_p) - ((-1) * u3 + q3 + u_p - q_p)
    return (mu0, mu1, mu2, mu3), (m1, m2, m3), (u1, u2, u3), residual


def _closure_2x2(mu, rho1, rho_m, m_m, rho_p, m_p, diff):
    """(rho2, rho3) solving the last mass condition and the telescoped
    normal-momentum condition, given all four speeds and rho1."""
    mu0, mu1, mu2, mu3 = mu
    a1, a2 = mu1 - mu2, mu2 - mu3
    a_rhs = mu0 * rho_m - m_m + (mu1 - mu0) * rho1 + m_p - mu3 * rho_p
    b1, b2 = mu2 * mu2 - mu1 * mu1, mu3 * mu3 - mu2 * mu2
    b_rhs = diff - mu0 * mu0 * rho_m - (mu1 * mu1 - mu0 * mu0) * rho1 \
        + mu3 * mu3 * rho_p
    det = a1 * b2 - a2 * b1
    if _is_zero(det):
        raise DegenerateClosure("coincident interface speeds")
    rho2 = (a_rhs * b2 - a2 * b_rhs) / det
    rho3 = (a1 * b_rhs - a_rhs * b1) / det
    return rho2, rho3


# ---------------------------------------------------------------------------
# float evaluation of a candidate
# ---------------------------------------------------------------------------

class _Context:
    """Float boundary data and pressure callables, computed once."""

    def __init__(self, law: PressureLaw, left: EulerState, right: EulerState):
        self.law = law
        _, self.p, self.P = _float_law(law)
        self.minus = _boundary(law, left, True)
        self.plus = _boundary(law, right, True)


def _evaluate_floats(ctx: _Context, sigma: float, x: np.ndarray):
    """(mu, rho, m2, u11, brackets, margins, residual) for the candidate
    vector, all in floats; margins contains 'closure': -1 on degeneracy."""
    rho_m, m_m, u_m, q_m, f_m, e_m = ctx.minus
    rho_p, m_p, u_p, q_p, f_p, e_p = ctx.plus
    p, P = ctx.p, ctx.P

    mu0, mu2, mu3, rho1, q1, q2, q3, f1, f2, f3 = (float(v) for v in x)
    mu1 = sigma
    margins: dict[str, float] = {}

    mu = (mu0, mu1, mu2, mu3)
    a1, a2 = mu1 - mu2, mu2 - mu3
    a_rhs = mu0 * rho_m - m_m + (mu1 - mu0) * rho1 + m_p - mu3 * rho_p
    b1, b2 = mu2 * mu2 - mu1 * mu1, mu3 * mu3 - mu2 * mu2
    b_rhs = ((q_m - u_m) - (q_p - u_p)) - mu0 * mu0 * rho_m \
        - (mu1 * mu1 - mu0 * mu0) * rho1 + mu3 * mu3 * rho_p
    det = a1 * b2 - a2 * b1
    if det == 0.0:
        margins["closure"] = -1.0
        return None, None, None, None, None, margins, math.inf
    rho2 = (a_rhs * b2 - a2 * b_rhs) / det
    rho3 = (a1 * b_rhs - a_rhs * b1) / det

    margins["ord0"] = mu1 - mu0
    margins["ord1"] = mu2 - mu1
    margins["ord2"] = mu3 - mu2
    margins["rho1"], margins["rho2"], margins["rho3"] = rho1, rho2, rho3
    if min(rho1, rho2, rho3) <= 0.0 or rho3 == rho_p:
        return None, None, None, None, None, margins, math.inf

    m1 = m_m - mu0 * (rho_m - rho1)
    m2 = m1 - mu1 * (rho1 - rho2)
    m3 = m2 - mu2 * (rho2 - rho3)
    mu3_chain = (m3 - m_p) / (rho3 - rho_p)
    u1 = u_m - q_m + q1 + mu0 * (m_m - m1)
    u2 = u1 - q1 + q2 + mu1 * (m1 - m2)
    u3 = u2 - q2 + q3 + mu2 * (m2 - m3)
    residual = abs(mu3_chain * (m3 - m_p) - (-u3 + q3 + u_p - q_p))

    rhos = (rho1, rho2, rho3)
    qs = (q1, q2, q3)
    m2s = (m1, m2, m3)
    u11s = (u1, u2, u3)
    for i in range(3):
        pi = p(rhos[i])
        tr = m2s[i] ** 2 / rhos[i] + 2.0 * (pi - qs[i])
        margins[f"trace{i + 1}"] = -tr
        margins[f"det{i + 1}"] = ((-u11s[i] + pi - qs[i])
                                  * (m2s[i] ** 2 / rhos[i] + u11s[i] + pi - qs[i]))

    e = [e_m] + [qs[i] + P(rhos[i]) - p(rhos[i]) for i in range(3)] + [e_p]
    ff = [f_m, f1, f2, f3, f_p]
    mu_full = (mu0, mu1, mu2, mu3_chain)
    brackets = tuple(-mu_full[i] * (e[i] - e[i + 1]) + (ff[i] - ff[i + 1])
                     for i in range(4))
    for i in range(4):
        margins[f"rh4_{i}"] = brackets[i]
    return mu_full, rhos, m2s, u11s, brackets, margins, residual


def _evaluate(cand: Candidate, ctx: _Context | None = None) -> Candidate:
    if ctx is None:
        ctx = _Context(cand.law, cand.left, cand.right)
    mu, rhos, m2s, u11s, brackets, margins, residual = \
        _evaluate_floats(ctx, cand.sigma, cand.x)
    cand.margins = margins
    cand.residual = residual
    cand.feasible = False
    if mu is None:
        return cand
    cand.mu = mu
    cand.rho = rhos
    cand.m2 = m2s
    cand.u11 = u11s
    cand.brackets = brackets
    cand.feasible = min(margins.values()) > 0.0 and residual < 1e-7
    return cand


def objective(cand: Candidate, reference_entries, margin_weight: float = 1.0) -> float:
    """Dominance surplus on the matched reference planes plus the weighted
    worst margin; -inf when the candidate's planes cannot cover the
    reference support or the closure failed."""
    if not cand.margins or "closure" in cand.margins:
        return -math.inf
    surplus = math.inf
    for speed, coeff in reference_entries:
        matched = None
        for i, mu in enumerate(cand.mu):
            if abs(mu - float(speed)) <= 1e-9 * max(1.0, abs(float(speed))):
                matched = i
                break
        if matched is None:
            return -math.inf
        surplus = min(surplus, cand.brackets[matched] - float(coeff))
    if not reference_entries:
        surplus = max(cand.brackets)
    return surplus + margin_weight * min(cand.margins.values())


# ---------------------------------------------------------------------------
# search driver
# ---------------------------------------------------------------------------

# The optimizer works in "bracket coordinates": the three energy-flux
# fluxes are replaced by the bracket values on the outer planes, which
# makes the dominance target a directly controlled quantity.  The total
# plane-dissipation budget is fixed by the speeds and trace caps alone
# (the flux chain telescopes), so maximizing the matched-plane bracket
# means maximizing the budget while the outer brackets sit at the floor.

def _y_to_x(ctx: _Context, sigma: float, y) -> np.ndarray | None:
    """Map bracket coordinates (mu0, mu2, mu3, rho1, q1..q3, b0, b2, b3)
    to the flux layout (.., F12, F22, F32); None on closure degeneracy."""
    rho_m, m_m, u_m, q_m, f_m, e_m = ctx.minus
    rho_p, m_p, u_p, q_p, f_p, e_p = ctx.plus
    p, P = ctx.p, ctx.P
    mu0, mu2, mu3, rho1, q1, q2, q3, b0, b2, b3 = (float(v) for v in y)
    mu1 = sigma
    try:
        rho2, rho3 = _closure_2x2((mu0, mu1, mu2, mu3), rho1, rho_m, m_m,
                                  rho_p, m_p, (q_m - u_m) - (q_p - u_p))
    except DegenerateClosure:
        return None
    if min(rho1, rho2, rho3) <= 0.0:
        return None
    e = [e_m, q1 + P(rho1) - p(rho1), q2 + P(rho2) - p(rho2),
         q3 + P(rho3) - p(rho3), e_p]
    mus = (mu0, mu1, mu2, mu3)
    budget = f_m - f_p - sum(mus[i] * (e[i] - e[i + 1]) for i in range(4))
    b1 = budget - b0 - b2 - b3
    f3 = b3 + mu3 * (e[3] - e[4]) + f_p
    f2 = b2 + mu2 * (e[2] - e[3]) + f3
    f1 = b1 + mu1 * (e[1] - e[2]) + f2
    return np.array([mu0, mu2, mu3, rho1, q1, q2, q3, f1, f2, f3])


def _margins_at(ctx: _Context, sigma: float, ref_coeff: float, y):
    x = _y_to_x(ctx, sigma, y)
    if x is None:
        return None, None
    mu, *_rest, brackets, margins, _residual = _evaluate_floats(ctx, sigma, x)
    if mu is None:
        return None, None
    return brackets[1] - ref_coeff, margins


def _infeasibility(ctx, sigma, ref_coeff, floor, y) -> float:
    surplus, margins = _margins_at(ctx, sigma, ref_coeff, y)
    if margins is None:
        return 1e6
    return sum((floor - m) ** 2 for m in margins.values() if m < floor)


def _barrier_score(ctx, sigma, ref_coeff, floor, tau, y) -> float:
    surplus, margins = _margins_at(ctx, sigma, ref_coeff, y)
    if margins is None:
        return 1e9
    barrier = 0.0
    for m in margins.values():
        if m <= 0.0:
            return 1e7
        barrier -= math.log(min(m / floor, 1e6))
    return -surplus + tau * barrier


def _retreat_score(ctx, sigma, ref_coeff, floor, target, y) -> float:
    surplus, margins = _margins_at(ctx, sigma, ref_coeff, y)
    if margins is None:
        return 1e9
    if surplus < target:
        return 1e6 * (1.0 + (target - surplus))
    return -min(min(margins.values()), 100.0 * floor)


_FLOOR = 2e-4


def search_fan(law: PressureLaw, left: EulerState, right: EulerState,
               cfg: SearchConfig) -> Candidate | None:
    """Multi-restart derivative-free search over the free variables.

    Each restart runs three Nelder-Mead phases: drive all strict margins
    above a floor, push the dominance surplus up behind a logarithmic
    barrier, then retreat to the most interior point that keeps half of
    the achieved surplus.  Deterministic in cfg.rng_seed: restart k draws
    from seed rng_seed + k.  Returns the first candidate that certifies
    exactly, else the best float-feasible candidate with positive surplus,
    else None.
    """
    sol = solve_riemann(law, left, right)
    ref = selfsim_dissipation(law, sol)
    shocks = [(float(s), float(c)) for s, c in ref.entries]
    if not shocks:
        return None
    sigma, ref_coeff = min(shocks)  # most negative plane carries the target
    ctx = _Context(law, left, right)
    floor = _FLOOR
    opts = {"maxiter": cfg.max_iters, "xatol": 1e-12, "fatol": 1e-15,
            "adaptive": True}

    best: Candidate | None = None
    for restart in range(cfg.restarts):
        rng = np.random.default_rng(cfg.rng_seed + restart)
        y = _sample_start(rng, ctx, sigma, floor)

        feas = minimize(lambda v: _infeasibility(ctx, sigma, ref_coeff, floor, v),
                        y, method="Nelder-Mead", options=opts)
        if feas.fun > 0.0:
            continue
        y = feas.x
        for tau in (1e-2, 1e-3):
            y = minimize(lambda v: _barrier_score(ctx, sigma, ref_coeff, floor, tau, v),
                         y, method="Nelder-Mead", options=opts).x
        surplus, _ = _margins_at(ctx, sigma, ref_coeff, y)
        if surplus is None or surplus <= 0.0:
            continue
        target = 0.5 * surplus
        y = minimize(lambda v: _retreat_score(ctx, sigma, ref_coeff, floor, target, v),
                     y, method="Nelder-Mead", options=opts).x

        x = _y_to_x(ctx, sigma, y)
        if x is None:
            continue
        cand = _evaluate(Candidate(law, left, right, sigma, x,
                                   seed=cfg.rng_seed + restart), ctx)
        surplus = cand.brackets[1] - ref_coeff if cand.brackets else -1.0
        if not cand.feasible or surplus <= floor \
                or min(cand.margins.values()) < 0.5 * floor:
            continue
        if best is None or surplus > best.brackets[1] - ref_coeff:
            best = cand
        if certify(cand, cfg) is not None:
            return cand
    return best


def _sample_start(rng: np.random.Generator, ctx: _Context, sigma: float,
                  floor: float) -> np.ndarray:
    rho_m, m_m, u_m, q_m, f_m, e_m = ctx.minus
    rho_p, m_p, u_p, q_p, f_p, e_p = ctx.plus
    lo_q, hi_q = sorted((q_m, q_p))
    span_q = max(hi_q - lo_q, 1.0)
    lo_r, hi_r = sorted((rho_m, rho_p))
    span_mu = max(abs(sigma), 1.0)

    mu0 = sigma - span_mu * rng.uniform(0.05, 1.0)
    mu2 = sigma + span_mu * rng.uniform(0.05, 1.0)
    mu3 = mu2 + span_mu * rng.uniform(0.5, 5.0)
    rho1 = rng.uniform(lo_r, hi_r)
    q1, q2, q3 = (lo_q + span_q * rng.uniform(0.2, 1.3) for _ in range(3))
    b0, b2, b3 = (rng.uniform(floor, 20 * floor) for _ in range(3))
    return np.array([mu0, mu2, mu3, rho1, q1, q2, q3, b0, b2, b3])


# ---------------------------------------------------------------------------
# exact certification
# ---------------------------------------------------------------------------

def certify(cand: Candidate, cfg: SearchConfig) -> FanSubsolution | None:
    """Round the free variables to rationals (denominator cap), pin the
    matched plane to the exact reference shock speed, re-close exactly in
    the tower, and run the full exact verification plus the dissipation
    comparison.  None when any strict inequality is lost in rounding."""
    law, left, right = cand.law, cand.left, cand.right
    sol = solve_riemann(law, left, right)
    shock_speeds = [w.speed for w in sol.waves if isinstance(w, Shock)]
    if not sol.exact or not shock_speeds:
        return None
    sigma = min(shock_speeds, key=float)

    cap = cfg.rounding_denominator_cap

    def rnd(v) -> XReal:
        return as_xreal(Fraction(float(v)).limit_denominator(cap))

    mu0, mu2x, mu3x = rnd(cand.x[0]), rnd(cand.x[1]), rnd(cand.x[2])
    rho1 = rnd(cand.x[3])
    q123 = (rnd(cand.x[4]), rnd(cand.x[5]), rnd(cand.x[6]))
    f123 = (rnd(cand.x[7]), rnd(cand.x[8]), rnd(cand.x[9]))
    mu = (mu0, sigma, mu2x, mu3x)

    z_minus, _ = lift_state(law, left)
    z_plus, _ = lift_state(law, right)
    diff = (z_minus.q - z_minus.u11) - (z_plus.q - z_plus.u11)
    try:
        rho2, rho3 = _closure_2x2(mu, rho1, left.rho, z_minus.m[1],
                                  right.rho, z_plus.m[1], diff)
        if sign(rho1) <= 0 or sign(rho2) <= 0 or sign(rho3) <= 0:
            return None
        mu_full, m2s, u11s, residual = chain_close(
            law, left, right, (mu0, sigma, mu2x), (rho1, rho2, rho3), q123)
        # both leftover equalities hold by construction of the 2x2 solve
        if sign(mu_full[3] - mu3x) != 0 or sign(residual) != 0:
            return None
        zero = as_xreal(0)
        regions = tuple(
            (rho, PHPoint((zero, m2s[i]), u11s[i], zero, q123[i], (zero, f123[i])))
            for i, rho in enumerate((rho1, rho2, rho3)))
        fan = FanSubsolution(law, mu, left, right, regions)
        if not verify_fan(fan).passed:
            return None
        if not beats_selfsimilar(fan).passed:
            return None
        return fan
    except (DegenerateClosure, Inconclusive, ZeroDivisionError):
        return None
