"""Acceptance suite: one test per criterion, one pass/fail line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines alongside the pytest verdicts.
"""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction

from scipy.integrate import quad

from wildfan.convexint import build_oscillation
from wildfan.exactnum import QuadExt, Rational, sign
from wildfan.fan import (
    Status,
    beats_selfsimilar,
    fan_dissipation_profile,
    find_Q,
    paper_example,
    verify_fan,
)
from wildfan.hull import (
    A_j,
    f_j,
    flux_deviation,
    in_W,
    matrix_M,
    rigid_flux,
    split_flux_direction,
)
from wildfan.model import EulerState, PHPoint, PressureLaw, lift_state, pressure
from wildfan.riemann import (
    Rarefaction,
    Shock,
    VacuumFormation,
    selfsim_dissipation,
    solve_riemann,
)
from wildfan.search import SearchConfig, certify, search_fan
from wildfan.wavecone import eta_for_K_difference, in_Lambda, residual_norm_signs

LAW2 = PressureLaw(gamma=2)
S5 = QuadExt.sqrt_of(5)
S1141 = QuadExt.sqrt_of(1141)


def _report(number: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def test_criterion_1_paper_fan_verifies_exactly():
    start = time.time()
    report = verify_fan(paper_example())
    elapsed = time.time() - start
    all_pass = all(c.status is Status.PASS for c in report.conditions)
    no_inconclusive = not any(c.status is Status.INCONCLUSIVE for c in report.conditions)
    _report(1, all_pass and no_inconclusive and elapsed < 1.0,
            f"all {len(report.conditions)} conditions exact Pass in {elapsed:.3f}s")


def test_criterion_2_selfsimilar_single_shock_exact():
    left = EulerState(1, (Rational(0), Rational(3, 2) * S5))
    right = EulerState(4, (Rational(0), Rational(0)))
    sol = solve_riemann(LAW2, left, right)
    ok = sol.exact and len(sol.waves) == 1 and isinstance(sol.waves[0], Shock)
    shock = sol.waves[0]
    ok = ok and sign(shock.speed + S5 / 2) == 0
    # Rankine-Hugoniot residuals, exactly zero
    mass = shock.speed * (left.rho - right.rho) - (left.m[1] - right.m[1])
    mom = shock.speed * (left.m[1] - right.m[1]) - (
        (left.m[1] ** 2 / left.rho + pressure(LAW2, left.rho))
        - (right.m[1] ** 2 / right.rho + pressure(LAW2, right.rho)))
    ok = ok and sign(mass) == 0 and sign(mom) == 0
    profile = selfsim_dissipation(LAW2, sol)
    ok = ok and len(profile.entries) == 1
    ok = ok and sign(profile.entries[0][1] - Rational(27, 4) * S5) == 0
    _report(2, ok, "single shock sigma=-sqrt(5)/2, bracket 27*sqrt(5)/4, RH exact")


def test_criterion_3_fan_profile_coefficients_exact():
    profile = fan_dissipation_profile(paper_example())
    expected = [
        (74863000 * S5 + 13937 * S1141 - 167847142) / 7396000,
        (83033 - 8050 * S5) / Rational(4300),
        (73863 - 33000 * S5) / Rational(21500),
        (80625 * S5 - 24948 * S1141 + 684803) / 2311250,
    ]
    ok = len(profile.entries) == 4
    for (speed, coeff), expect in zip(profile.entries, expected):
        ok = ok and sign(coeff - expect) == 0
    _report(3, ok, "all four plane coefficients match exactly in Q(sqrt5, sqrt1141)")


def test_criterion_4_certified_strict_chain():
    start = time.time()
    sigma_plane = (83033 - 8050 * S5) / Rational(4300)
    chain1 = sign(sigma_plane - Rational(151, 10)) == 1
    chain2 = sign(Rational(151, 10) - Rational(27, 4) * S5) == 1
    report = beats_selfsimilar(paper_example())
    verdict = next(c.witness for c in report.conditions if c.name == "comparison")
    elapsed = time.time() - start
    ok = chain1 and chain2 and report.passed and verdict == "StrictlyDominates"
    _report(4, ok and elapsed < 1.0,
            f"(83033-8050v5)/4300 > 151/10 > 27v5/4 and StrictlyDominates in {elapsed:.3f}s")


def _random_V_member(rng: random.Random):
    from wildfan.exactnum import xmax
    rho = Rational(Fraction(rng.randint(1, 30), rng.randint(1, 10)))
    m = (Rational(Fraction(rng.randint(-12, 12), rng.randint(1, 6))),
         Rational(Fraction(rng.randint(-12, 12), rng.randint(1, 6))))
    u11 = Rational(Fraction(rng.randint(-8, 8), rng.randint(1, 6)))
    u12 = Rational(Fraction(rng.randint(-8, 8), rng.randint(1, 6)))
    p = pressure(LAW2, rho)
    n11 = m[0] * m[0] / rho - u11 + p
    n12 = m[0] * m[1] / rho - u12
    n22 = m[1] * m[1] / rho + u11 + p
    q = xmax(n11, n22) + xmax(n12, (-1) * n12) + 1
    z = PHPoint(m, u11, u12, q, (0, 0))
    Q = q + Rational(Fraction(rng.randint(1, 20), rng.randint(1, 4)))
    return rho, z, Q


def test_criterion_5_hull_property_suite():
    rng = random.Random(2024)
    checked = 0
    for _ in range(100):
        rho, z0, Q = _random_V_member(rng)
        j = rng.randint(1, 4)
        rf = rigid_flux(LAW2, rho, z0)
        fv = f_j(LAW2, rho, Q, z0, j)
        z = PHPoint(z0.m, z0.u11, z0.u12, z0.q, (rf[0] + fv[0], rf[1] + fv[1]))
        tau1, z1, tau2, z2, zhat = split_flux_direction(LAW2, rho, Q, z, j)
        # mu_plus = Q - q exactly (qhat = 1, so it shows up as z2.q - z.q)
        assert sign((z2.q - z.q) - (Q - z.q)) == 0
        A = A_j(LAW2, rho, Q, z, j)
        M0 = matrix_M(LAW2, rho, z)
        for ze in (z1, z2):
            Me = matrix_M(LAW2, rho, ze)
            assert sign(Me.det()) == 0
            assert sign(Me.trace() - (M0.trace() + 2 * A)) == 0
        back = tau1 * z1 + tau2 * z2
        for c, ce in zip(back.components(), z.components()):
            assert sign(c - ce) == 0
        assert in_Lambda(z2 - z1) is not None
        checked += 1
    _report(5, checked >= 100,
            f"{checked} random rational splits: mu+=Q-q, det=0, trace shift 2A, "
            "barycenter exact, differences in the cone")


def test_criterion_6_wavecone_property_suite():
    rng = random.Random(77)
    checked = 0
    for _ in range(100):
        rho = Rational(Fraction(rng.randint(1, 20), rng.randint(1, 6)))
        m1 = (Rational(Fraction(rng.randint(-9, 9), rng.randint(1, 5))),
              Rational(Fraction(rng.randint(-9, 9), rng.randint(1, 5))))
        m2 = (Rational(Fraction(rng.randint(-9, 9), rng.randint(1, 5))),
              Rational(Fraction(rng.randint(-9, 9), rng.randint(1, 5))))
        z1, _ = lift_state(LAW2, EulerState(rho, m1))
        z2, _ = lift_state(LAW2, EulerState(rho, m2))
        d = eta_for_K_difference(rho, z1, z2)
        assert residual_norm_signs(z1 - z2, d)
        checked += 1
    _report(6, checked >= 100,
            f"{checked} random constitutive pairs annihilated exactly")


def test_criterion_7_oscillation_diagnostics():
    start = time.time()
    tau1, delta = 0.4, 0.02
    base = PHPoint((0, 0), 0, 0, 3, (0, 0))
    rf = rigid_flux(LAW2, Rational(1), base)
    fv = f_j(LAW2, Rational(1), Rational(4), base, 1)
    vert = PHPoint(base.m, base.u11, base.u12, base.q, (rf[0] + fv[0], rf[1] + fv[1]))
    _, z1, _, z2, _ = split_flux_direction(LAW2, Rational(1), Rational(4), vert, 1)
    z_star = Rational(2, 5) * z1 + Rational(3, 5) * z2
    box = ((0.0, 1.0), (0.0, 1.0), (0.0, 1.0))

    ok = True
    details = []
    prev_comm = None
    for k in (8, 16, 32):
        _, diag = build_oscillation(z_star, z1, z2, tau1, box, k, delta, grid_n=48)
        ok = ok and diag.pde_residual < 1e-8 * diag.pde_scale
        ok = ok and abs(diag.fraction1 - tau1) < 6 * delta
        ok = ok and abs(diag.fraction2 - (1 - tau1)) < 6 * delta
        if prev_comm is not None:
            ratio = diag.commutator_sup / prev_comm
            ok = ok and 0.3 <= ratio <= 0.7
            details.append(f"ratio(k={k})={ratio:.3f}")
        prev_comm = diag.commutator_sup
        details.append(f"fr(k={k})=({diag.fraction1:.3f},{diag.fraction2:.3f})")
    elapsed = time.time() - start
    ok = ok and elapsed < 60.0
    _report(7, ok, f"48^3 grid diagnostics in {elapsed:.1f}s: " + ", ".join(details))


def test_criterion_8_riemann_property_suite():
    total = 0
    worst_rh = worst_curve = worst_bracket = 0.0
    for gamma in (1, Fraction(3, 2), 2, 3):
        law = PressureLaw(gamma=gamma)
        g = float(gamma)
        rng = random.Random(900 + int(2 * g))
        solved = 0
        while solved < 50:
            left = EulerState(Fraction(rng.uniform(0.1, 5)).limit_denominator(10 ** 9),
                              (0, Fraction(rng.uniform(-2, 2)).limit_denominator(10 ** 9)))
            right = EulerState(Fraction(rng.uniform(0.1, 5)).limit_denominator(10 ** 9),
                               (0, Fraction(rng.uniform(-2, 2)).limit_denominator(10 ** 9)))
            try:
                sol = solve_riemann(law, left, right)
            except VacuumFormation:
                continue
            solved += 1
            total += 1
            for w in sol.waves:
                if isinstance(w, Shock):
                    s = float(w.speed)
                    rl, rr = float(w.left.rho), float(w.right.rho)
                    ml, mr = float(w.left.m[1]), float(w.right.m[1])
                    pl, pr = rl ** g, rr ** g
                    scale = max(1.0, abs(ml) + abs(mr), pl + pr)
                    rh1 = abs(s * (rl - rr) - (ml - mr)) / scale
                    rh2 = abs(s * (ml - mr)
                              - ((ml * ml / rl + pl) - (mr * mr / rr + pr))) / scale
                    worst_rh = max(worst_rh, rh1, rh2)
                elif isinstance(w, Rarefaction):
                    rl, rr = float(w.left.rho), float(w.right.rho)
                    vl = float(w.left.m[1]) / rl
                    vr = float(w.right.m[1]) / rr
                    if g == 1.0:
                        integral = math.log(rr / rl)
                    else:
                        integral, _ = quad(
                            lambda r: math.sqrt(g * r ** (g - 1.0)) / r, rl, rr)
                    res = min(abs((vr - vl) + integral), abs((vr - vl) - integral))
                    worst_curve = max(worst_curve, res)
            for _, coeff in selfsim_dissipation(law, sol).entries:
                worst_bracket = min(worst_bracket, float(coeff))
    ok = (total == 200 and worst_rh < 1e-10 and worst_curve < 1e-10
          and worst_bracket >= -1e-12)
    _report(8, ok, f"200 problems: max RH {worst_rh:.2e}, max curve "
                   f"{worst_curve:.2e}, min bracket {worst_bracket:.2e}")


def test_criterion_9_search_reproduction():
    start = time.time()
    left = EulerState(1, (Rational(0), Rational(3, 2) * S5))
    right = EulerState(4, (Rational(0), Rational(0)))
    cfg = SearchConfig(restarts=64, rng_seed=0)
    cand = search_fan(LAW2, left, right, cfg)
    assert cand is not None, "search found no candidate"
    fan = certify(cand, cfg)
    assert fan is not None, "certification failed"
    profile = fan_dissipation_profile(fan)
    sigma_entry = [(s, c) for s, c in profile.entries if sign(s + S5 / 2) == 0]
    assert len(sigma_entry) == 1
    surplus = sigma_entry[0][1] - Rational(27, 4) * S5
    elapsed = time.time() - start
    ok = sign(surplus) == 1 and elapsed < 600.0 and verify_fan(fan).passed
    _report(9, ok, f"certified fan in {elapsed:.1f}s, exact sigma-plane surplus "
                   f"~{float(surplus):.4f} > 0")


def test_criterion_10_find_Q_certificates():
    fan = paper_example()
    results = find_Q(fan)
    ok = len(results) == 3
    for (rho, z), (Q, witness) in zip(fan.regions, results):
        again, _ = in_W(fan.law, rho, Q, z)  # independent re-verification
        ok = ok and again
        for k in witness.kappa:
            ok = ok and sign(k, precision_cap=1 << 14) == 1
        total = witness.kappa[0] + witness.kappa[1] + witness.kappa[2] + witness.kappa[3]
        iv = total.enclosure(192)
        ok = ok and float(iv.lo) <= 1.0 <= float(iv.hi) and float(iv.hi - iv.lo) < 1e-30
        # flux identity: certified enclosure of sum kappa_j f^j - deviation
        dev = flux_deviation(fan.law, rho, z)
        rec0 = sum((kj * fv[0] for kj, fv in zip(witness.kappa, witness.vertices)),
                   Rational(0))
        rec1 = sum((kj * fv[1] for kj, fv in zip(witness.kappa, witness.vertices)),
                   Rational(0))
        for component, target in ((rec0, dev[0]), (rec1, dev[1])):
            gap = component - target
            iv = gap.enclosure(192)
            ok = ok and float(iv.lo) <= 0.0 <= float(iv.hi) and float(iv.hi - iv.lo) < 1e-30
    _report(10, ok, "three caps certified; witnesses re-verified "
                    "(kappa > 0, sum 1, flux identity enclosed)")
