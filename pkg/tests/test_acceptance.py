"""Acceptance run: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py``; the lines are repeated in the
terminal summary under "acceptance criteria".
"""
import itertools
import math

import numpy as np

from tropcap import (Capacity, FiniteSpace, MonotonicityViolation, PossibilityDensity,
                     RealFunction, dirac, integral_functional, is_possibility,
                     maxitivity_witness, maxplus_integral, monad_law_harness,
                     naturality_check, possibility_capacity, property_report, random_capacity,
                     random_density, reconstruct_capacity, refine_comonotone, validate_capacity)
from tropcap.blackbox import expression_functional
from tropcap.capacities import capacity_from_values
from tropcap.category import random_naturality_case
from tropcap.functionals import (AXIOMS, SMALL_GRID, random_function_rows,
                                 refinement_postconditions, replay_witness)
from tropcap.integrals import maxplus_integral_grid_oracle, maxplus_integral_many

from conftest import record_acceptance

SIZES = range(2, 7)
TOL = 1e-9


def test_criterion_01_roundtrip():
    rng = np.random.default_rng(101)
    worst = 0.0
    for n in SIZES:
        for _ in range(1000):
            c = random_capacity(FiniteSpace(n), rng)
            back = reconstruct_capacity(integral_functional(c), tol=TOL)
            worst = max(worst, float(np.max(np.abs(back.table - c.table))))
    ok = worst < TOL
    assert record_acceptance(1, "round-trip reconstruction", ok,
                             f"5000 capacities, sizes 2-6, max deviation {worst:.2e} < 1e-9")


def test_criterion_02_four_axioms():
    rng = np.random.default_rng(102)
    failed, worst = [], 0.0
    for k in range(1000):
        c = random_capacity(FiniteSpace(2 + k % 5), rng)
        rep = property_report(integral_functional(c), trials=1000, seed=k, tol=TOL)
        worst = max(worst, max(rep[a].max_deviation for a in AXIOMS))
        if not rep.axioms_pass:
            failed.append(k)
    ok = not failed
    assert record_acceptance(2, "four axioms for integral functionals", ok,
                             f"1000 capacities x 1000 trials, {len(failed)} failing, "
                             f"max deviation {worst:.2e}")


def test_criterion_03_bounds():
    rng = np.random.default_rng(103)
    violations = samples = 0
    for k in range(2000):
        c = random_capacity(FiniteSpace(1 + k % 6), rng)
        rows = random_function_rows(rng, 50, c.space.size, spread=float(rng.choice([1, 10, 1e3])))
        vals = maxplus_integral_many(c, rows)
        violations += int(np.sum((vals < rows.min(axis=1)) | (vals > rows.max(axis=1))))
        samples += rows.shape[0]
    ok = violations == 0
    assert record_acceptance(3, "min <= I <= max", ok,
                             f"{samples} (c, phi) samples, {violations} violations")


def test_criterion_04_grid_oracle():
    rng = np.random.default_rng(104)
    worst = 0.0
    for k in range(10_000):
        c = random_capacity(FiniteSpace(2 + k % 5), rng)
        phi = RealFunction(c.space, random_function_rows(rng, 2, c.space.size)[k % 2])
        worst = max(worst, abs(maxplus_integral(c, phi) - maxplus_integral_grid_oracle(c, phi, 1e-4)))
    ok = worst <= 1e-4
    assert record_acceptance(4, "candidate set vs dense grid (step 1e-4)", ok,
                             f"10^4 (c, phi), max gap {worst:.2e} <= 1e-4")


def _maxitive_gap(c, rng, pairs=1000):
    F = random_function_rows(rng, pairs, c.space.size)
    G = random_function_rows(rng, pairs, c.space.size)
    joint = maxplus_integral_many(c, np.maximum(F, G))
    return float(np.max(np.abs(joint - np.maximum(maxplus_integral_many(c, F),
                                                  maxplus_integral_many(c, G)))))


def _witness_gap(c):
    phi, psi = maxitivity_witness(c)
    return maxplus_integral(c, phi | psi) - max(maxplus_integral(c, phi), maxplus_integral(c, psi))


def test_criterion_05_possibility_dichotomy():
    rng = np.random.default_rng(105)
    caps = [random_capacity(FiniteSpace(2 + k % 5), rng) for k in range(1000)]
    caps += [possibility_capacity(random_density(FiniteSpace(2 + k % 5), rng)) for k in range(1000)]
    grid = np.arange(5) * 0.25
    S2 = FiniteSpace(2)
    caps += [capacity_from_values(S2, {(0,): a, (1,): b, (0, 1): 1.0})
             for a, b in itertools.product(grid, grid)]
    bad, n_poss, worst_poss, least_gap = [], 0, 0.0, math.inf
    for k, c in enumerate(caps):
        if is_possibility(c)[0]:
            n_poss += 1
            dev = _maxitive_gap(c, rng)
            worst_poss = max(worst_poss, dev)
            if dev > TOL:
                bad.append(k)
        else:
            gap = _witness_gap(c)
            least_gap = min(least_gap, gap)
            if not gap > TOL:
                bad.append(k)
    # on the 0.25 grid exactly the 9 tables with max(c{0}, c{1}) = 1 are possibility
    grid_poss = sum(is_possibility(c)[0] for c in caps[-25:])
    ok = not bad and grid_poss == 9
    assert record_acceptance(5, "possibility dichotomy", ok,
                             f"{len(caps)} capacities ({n_poss} possibility, incl. 25-table grid), "
                             f"maxitivity deviation {worst_poss:.2e}, smallest witness gap "
                             f"{least_gap:.3f}")


def _postconditions_hold(phi, t, psi):
    out = refine_comonotone(phi, t, psi)
    v, w = phi.values, psi.values
    brute = [min(w[y] for y in range(v.size) if v[y] >= v[x]) for x in range(v.size)]
    return all(refinement_postconditions(phi, t, psi, out).values()) and out.to_json() == brute


def test_criterion_06_refinement():
    rng = np.random.default_rng(106)
    failures = 0
    for k in range(10_000):
        sp = FiniteSpace(2 + k % 5)
        phi = RealFunction(sp, random_function_rows(rng, 2, sp.size)[k % 2])
        t = float(rng.choice(phi.values))
        psi = rng.uniform(t - 2.0, t, sp.size)
        if k % 3 == 0:
            psi = np.minimum(np.round(psi * 2.0) / 2.0, t)
        psi[phi.values >= t] = t
        failures += not _postconditions_hold(phi, t, RealFunction(sp, psi))
    S3 = FiniteSpace(3)
    exhaustive = 0
    for phi_v in itertools.product(SMALL_GRID, repeat=3):
        phi = RealFunction(S3, phi_v)
        for t in set(phi_v):
            off = [x for x in range(3) if phi_v[x] < t]
            for rest in itertools.product([g for g in SMALL_GRID if g <= t], repeat=len(off)):
                psi = [t] * 3
                for x, v in zip(off, rest):
                    psi[x] = v
                failures += not _postconditions_hold(phi, t, RealFunction(S3, psi))
                exhaustive += 1
    ok = failures == 0
    assert record_acceptance(6, "comonotone refinement postconditions", ok,
                             f"10^4 random + {exhaustive} exhaustive size-3 inputs, "
                             f"{failures} failures")


def test_criterion_07_naturality():
    worst = 0.0
    for nx, ny in itertools.product(range(2, 6), repeat=2):
        rng = np.random.default_rng(1000 + 10 * nx + ny)
        for k in range(500):
            c, f = random_naturality_case(FiniteSpace(nx), FiniteSpace(ny), rng)
            worst = max(worst, naturality_check(c, f, trials=1, seed=k))
    ok = worst < TOL
    assert record_acceptance(7, "naturality of the integral", ok,
                             f"500 triples per size pair in {{2..5}}^2, max deviation {worst:.2e}")


def test_criterion_08_monad_laws():
    worst, passed = {}, True
    for n in range(2, 6):
        rep = monad_law_harness(FiniteSpace(n), seed=800 + n, trials=1000, max_supports=4,
                                tol=1e-12)
        passed &= rep.all_pass
        for name, v in rep.verdicts.items():
            worst[name] = max(worst.get(name, 0.0), v.max_deviation)
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    assert record_acceptance(8, "monad laws on finite supports", passed,
                             f"1000 nested outers per size 2-5; max deviations: {detail}")


def _floored(rng, sp, delta):
    t = random_capacity(sp, rng).table
    return np.where(np.arange(sp.n_subsets) > 0, delta + (1.0 - delta) * t, 0.0)


def test_criterion_09_perturbation():
    rng = np.random.default_rng(109)
    delta, bad, tightest = 0.1, 0, -math.inf
    for k in range(1000):
        sp = FiniteSpace(2 + k % 5)
        a = _floored(rng, sp, delta)
        lam = rng.uniform(0.0, 0.01)
        b = (1.0 - lam) * a + lam * _floored(rng, sp, delta)
        c, c_ = Capacity(sp, a), Capacity(sp, b)
        eps = float(np.max(np.abs(a - b)))
        assert eps <= 0.01
        phi = RealFunction(sp, rng.uniform(-2.0, 2.0, sp.size))
        gap = abs(maxplus_integral(c, phi) - maxplus_integral(c_, phi))
        bound = math.log1p(eps / delta)
        tightest = max(tightest, gap - bound)
        bad += gap > bound + 1e-15
    ok = bad == 0
    assert record_acceptance(9, "perturbation stability", ok,
                             f"1000 triples, delta 0.1, eps <= 0.01, {bad} above ln(1+eps/delta); "
                             f"largest gap - bound {tightest:.2e}")


def test_criterion_10_negative_controls():
    S3 = FiniteSpace(3)
    results = []

    I = expression_functional(S3, "max(phi) + min(phi)")
    rep = property_report(I, trials=1000, seed=110)
    v = rep["plus_homogeneous"]
    again = property_report(I, trials=1000, seed=110)["plus_homogeneous"]
    results.append(not v.passed and v.witness == again.witness
                   and replay_witness(I, "plus_homogeneous", v.witness))

    J = expression_functional(S3, "2 * phi[0]")
    rep = property_report(J, trials=1000, seed=111)
    v = rep["normalized"]
    results.append(not v.passed and replay_witness(J, "normalized", v.witness))

    table = np.array([0, 0.3, 0.2, 0.6, 0.1, 0.7, 0.5, 0.4, 0.2, 0.5, 0.4, 0.8, 0.3, 0.9, 0.6, 1.0])
    try:
        validate_capacity(FiniteSpace(4), table)
        results.append(False)
    except MonotonicityViolation as exc:
        a, b = exc.smaller, exc.larger
        cover = a & b == a and bin(a ^ b).count("1") == 1
        results.append(bool(cover and table[a] > table[b]))
    ok = all(results)
    assert record_acceptance(10, "negative controls", ok,
                             "max+min fails plus-homogeneity, 2 phi(x0) fails normalization, "
                             f"non-monotone table rejected with a cover pair: {results}")
