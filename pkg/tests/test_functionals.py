import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropcap import (FiniteSpace, Functional, PossibilityDensity, PreconditionViolation,
                     RealFunction, Subset, comonotonic, generate_comonotone_pair,
                     integral_functional, possibility_capacity, property_report,
                     random_capacity, random_density, refine_comonotone, upsilon_member)
from tropcap.functionals import (SMALL_GRID, in_upsilon, refinement_postconditions,
                                 replay_witness)

from conftest import pair_comonotone

S2, S3 = FiniteSpace(2), FiniteSpace(3)


def brute_refine(phi, psi):
    """Pointwise min over the upper set, written out with plain loops."""
    n = len(phi)
    return [min(psi[y] for y in range(n) if phi[y] >= phi[x]) for x in range(n)]


class TestUpsilon:
    def test_full_space_is_constant(self):
        assert upsilon_member(S3.full(), 2.0, 5.0).to_json() == [2.0, 2.0, 2.0]

    def test_example(self):
        assert upsilon_member(S2.subset([0]), 0.0, 10.0).to_json() == [0.0, -10.0]

    def test_empty_set(self):
        assert upsilon_member(S2.empty(), 1.0, 3.0).to_json() == [-2.0, -2.0]

    @given(st.integers(1, 6), st.data())
    def test_membership_and_monotone_in_M(self, n, data):
        sp = FiniteSpace(n)
        A = Subset(sp, data.draw(st.integers(0, sp.full_mask)))
        t = data.draw(st.floats(-10, 10))
        M1, M2 = sorted(data.draw(st.lists(st.floats(0.01, 50), min_size=2, max_size=2)))
        u1, u2 = upsilon_member(A, t, M1), upsilon_member(A, t, M2)
        assert in_upsilon(u1, A, t) and u1 <= t
        assert all(u1[a] == t for a in A)
        assert u2 <= u1

    def test_is_lowest_member(self, rng):
        sp = FiniteSpace(4)
        for _ in range(100):
            A = Subset(sp, int(rng.integers(0, 16)))
            M = 3.0
            psi = rng.uniform(-M, 0, 4)
            psi[A.points()] = 0.0
            assert upsilon_member(A, 0.0, M) <= RealFunction(sp, psi)

    def test_reconstruction_sequence_stabilizes(self, rng):
        for _ in range(50):
            c = random_capacity(S3, rng)
            I = integral_functional(c)
            for A in S3.subsets():
                if A.mask == 0:
                    continue
                vals = [I(upsilon_member(A, 0.0, M)) for M in (1, 2, 4, 8, 16, 32, 64)]
                assert all(a >= b for a, b in zip(vals, vals[1:]))
                for M, v in zip((1, 2, 4, 8, 16, 32, 64), vals):
                    if M > -np.log(c(A)):
                        assert v == pytest.approx(np.log(c(A)), abs=1e-12)


class TestRefine:
    def test_example(self):
        phi = RealFunction(S3, [0, 1, 2])
        psi = RealFunction(S3, [1.5, 0.5, 2])
        assert brute_refine([0, 1, 2], [1.5, 0.5, 2]) == [0.5, 0.5, 2]
        assert refine_comonotone(phi, 2, psi).to_json() == [0.5, 0.5, 2]

    def test_idempotent_on_refined_input(self, rng):
        for _ in range(100):
            phi = RealFunction(S3, rng.choice(SMALL_GRID, 3))
            t = float(rng.choice(phi.values))
            psi = rng.uniform(-2, t, 3)
            psi[phi.values >= t] = t
            once = refine_comonotone(phi, t, RealFunction(S3, psi))
            assert refine_comonotone(phi, t, once) == once

    def test_constant_phi(self):
        phi = S3.constant(1.0)
        assert refine_comonotone(phi, 1.0, S3.constant(1.0)) == S3.constant(1.0)

    @pytest.mark.parametrize("phi, t, psi, point", [
        ([0, 1, 2], 2, [0.5, 3.0, 2], 1),   # psi above t
        ([0, 1, 2], 1, [0.5, 0.5, 1], 1),   # psi != t on the level set
    ])
    def test_preconditions(self, phi, t, psi, point):
        with pytest.raises(PreconditionViolation) as err:
            refine_comonotone(RealFunction(S3, phi), t, RealFunction(S3, psi))
        assert err.value.point == point

    def test_t_must_be_a_value(self):
        with pytest.raises(PreconditionViolation):
            refine_comonotone(RealFunction(S3, [0, 1, 2]), 1.5, RealFunction(S3, [0, 0, 0]))

    def test_exhaustive_size_three(self):
        grid = SMALL_GRID
        count = 0
        for phi_v in itertools.product(grid, repeat=3):
            phi = RealFunction(S3, phi_v)
            for t in set(phi_v):
                on = [x for x in range(3) if phi_v[x] >= t]
                off = [x for x in range(3) if x not in on]
                for rest in itertools.product([g for g in grid if g <= t], repeat=len(off)):
                    psi_v = [t] * 3
                    for x, v in zip(off, rest):
                        psi_v[x] = v
                    psi = RealFunction(S3, psi_v)
                    out = refine_comonotone(phi, t, psi)
                    assert out.to_json() == brute_refine(phi_v, psi_v)
                    assert all(refinement_postconditions(phi, t, psi, out).values())
                    count += 1
        assert count > 1000


class TestComonotoneGenerator:
    def test_pairs_are_comonotone(self):
        rng = np.random.default_rng(0)
        for _ in range(2000):
            n = int(rng.integers(2, 7))
            phi, psi = generate_comonotone_pair(FiniteSpace(n), rng)
            assert comonotonic(phi, psi)
            assert pair_comonotone(list(phi), list(psi))

    def test_deterministic(self):
        assert generate_comonotone_pair(FiniteSpace(5), 3) == generate_comonotone_pair(FiniteSpace(5), 3)

    def test_ties_occur(self):
        rng = np.random.default_rng(1)
        ties = 0
        for _ in range(10_000):
            phi, psi = generate_comonotone_pair(FiniteSpace(int(rng.integers(2, 7))), rng)
            ties += len(set(phi.values)) < phi.space.size or len(set(psi.values)) < psi.space.size
        assert ties > 0


def max_plus_min(space):
    return Functional(space, lambda phi: phi.max() + phi.min(), description="max+min")


def doubled_point(space):
    return Functional(space, lambda phi: 2.0 * phi[0], description="2 phi(0)")


class TestPropertyReport:
    def test_integral_functional_passes_axioms(self, rng):
        for n in (1, 2, 4, 6):
            c = random_capacity(FiniteSpace(n), rng)
            rep = property_report(integral_functional(c), trials=300, seed=5)
            assert rep.axioms_pass, rep.failures()

    def test_max_plus_min_fails_plus_homogeneity(self):
        rep = property_report(max_plus_min(S3), trials=200, seed=9)
        v = rep["plus_homogeneous"]
        assert not v.passed
        w = v.witness
        assert w["I(f+gamma)"] - w["I(f)"] == pytest.approx(2 * w["gamma"])
        assert replay_witness(max_plus_min(S3), "plus_homogeneous", w)

    def test_doubled_point_fails_normalization(self):
        rep = property_report(doubled_point(S3), trials=50, seed=1)
        assert not rep["normalized"].passed
        assert replay_witness(doubled_point(S3), "normalized", rep["normalized"].witness)

    def test_possibility_integral_is_fully_maxitive(self, rng):
        for n in (2, 3, 5):
            c = possibility_capacity(random_density(FiniteSpace(n), rng))
            rep = property_report(integral_functional(c), trials=500, seed=2)
            assert rep.all_pass

    def test_non_possibility_fails_full_maxitivity(self, c2):
        rep = property_report(integral_functional(c2), trials=500, seed=3)
        assert rep.axioms_pass and not rep["maxitive"].passed
        assert replay_witness(integral_functional(c2), "maxitive", rep["maxitive"].witness)

    def test_failure_witnesses_replay(self):
        weird = Functional(S3, lambda phi: float(np.median(phi.values)) + 0.1 * phi[2])
        rep = property_report(weird, trials=300, seed=4)
        for v in rep.failures():
            assert replay_witness(weird, v.name, v.witness), v.name

    def test_seeded_reproducibility(self, c2):
        a = property_report(max_plus_min(S2), trials=100, seed=11).to_json()
        b = property_report(max_plus_min(S2), trials=100, seed=11).to_json()
        assert a == b

    def test_exhaustive_mode(self, c2):
        rep = property_report(integral_functional(c2), exhaustive=True)
        assert rep.mode == "exhaustive" and rep.axioms_pass and not rep["maxitive"].passed
        rep = property_report(max_plus_min(S3), exhaustive=True)
        assert not rep["plus_homogeneous"].passed
        assert replay_witness(max_plus_min(S3), "plus_homogeneous", rep["plus_homogeneous"].witness)
        assert property_report(integral_functional(
            possibility_capacity(PossibilityDensity(S3, [1, 0.5, 0.25]))), exhaustive=True).all_pass

    def test_exhaustive_size_limit(self):
        with pytest.raises(ValueError):
            property_report(max_plus_min(FiniteSpace(4)), exhaustive=True)

    def test_median_is_comonotone_maxitive_but_not_maxitive(self):
        # order statistic: comonotone maxitive, normalized, plus-homogeneous, monotone
        med = Functional(S3, lambda phi: float(np.median(phi.values)))
        rep = property_report(med, trials=500, seed=0)
        assert rep.axioms_pass and not rep["maxitive"].passed
