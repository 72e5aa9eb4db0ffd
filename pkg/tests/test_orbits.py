from fractions import Fraction

import numpy as np
import pytest

from apollonian.core import packing_from_spec
from apollonian.densities import beta_brute, cone_count
from apollonian.errors import CapacityError, UsageError
from apollonian.orbits import (admissible_residues, gamma_profile, orbit_json, orbit_mod,
                               verify_product_structure)

from oracles import orbit_bfs

SIZES = {3: 10, 8: 4, 24: 40, 5: 144, 7: 300, 11: 1220, 13: 2352}


@pytest.mark.parametrize("d", sorted(SIZES))
def test_orbit_sizes(bug, coin, d):
    for p in (bug, coin):
        assert orbit_mod(p, d).size == SIZES[d]


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6, 8, 9, 12, 24, 25])
def test_orbit_matches_set_bfs(bug, coin, d):
    for p in (bug, coin):
        assert orbit_mod(p, d).as_set() == orbit_bfs(p.root, d)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_orbit_size_is_nonzero_cone(bug, p):
    # for p > 3 the orbit is the whole projective-free cone of nonzero solutions
    assert orbit_mod(bug, p).size == cone_count(p, 4)


def test_orbit_is_closed_and_edges_consistent(coin):
    orb = orbit_mod(coin, 24)
    from apollonian.orbits import GENERATORS
    for i in range(4):
        img = (orb.states @ GENERATORS[i].T) % 24
        assert np.array_equal(orb.states[orb.edges[:, i]], img)
        # involutions: following an edge twice returns home
        assert np.array_equal(orb.edges[orb.edges[:, i], i], np.arange(orb.size))
    assert [tuple(r) for r in orb.states] == sorted(tuple(r) for r in orb.states)


def test_mod3_has_four_states_with_a_zero_coordinate(bug, coin):
    for p in (bug, coin):
        st = orbit_mod(p, 3).states
        for j in range(4):
            assert int(np.count_nonzero(st[:, j] == 0)) == 4


@pytest.mark.parametrize("d1,d2", [(8, 3), (3, 5), (5, 7), (5, 11), (7, 11), (8, 5), (1, 24)])
def test_product_structure(bug, coin, d1, d2):
    for p in (bug, coin):
        rep = verify_product_structure(p, d1, d2)
        assert rep.passed, rep


def test_beta_is_multiplicative(bug):
    for d1, d2 in ((5, 7), (5, 11), (7, 11)):
        orb = orbit_mod(bug, d1 * d2)
        share = Fraction(int(np.count_nonzero(orb.states[:, 0] == 0)), orb.size)
        assert share == beta_brute(bug, d1, 1) * beta_brute(bug, d2, 1)


BUG_GAMMA = {2: Fraction(3, 20), 14: Fraction(3, 20), 3: Fraction(1, 10), 15: Fraction(1, 10),
             6: Fraction(1, 10), 18: Fraction(1, 10), 11: Fraction(3, 20), 23: Fraction(3, 20)}
COIN_GAMMA = {0: Fraction(1, 10), 13: Fraction(3, 10), 4: Fraction(3, 20), 16: Fraction(3, 20),
              12: Fraction(1, 10), 21: Fraction(1, 5)}


def test_gamma_tables(bug, coin):
    for p, want in ((bug, BUG_GAMMA), (coin, COIN_GAMMA)):
        prof = gamma_profile(p)
        assert {n: g for n, g in prof.gamma.items() if g} == want
        assert sum(prof.gamma.values()) == 1
        assert prof.admissible == sorted(want)
    assert admissible_residues(bug) == [2, 3, 6, 11, 14, 15, 18, 23]
    assert admissible_residues(coin) == [0, 4, 12, 13, 16, 21]


def test_orbit_json(coin):
    js = orbit_json(coin, 24)
    assert js["size"] == 40 and js["modulus"] == 24
    assert js["gamma"]["21"] == "1/5"
    assert len(js["states"]) == 40


def test_errors(bug):
    with pytest.raises(UsageError):
        orbit_mod(bug, 1)
    with pytest.raises(CapacityError):
        orbit_mod(bug, 10**4 + 1)
    with pytest.raises(CapacityError):
        orbit_mod(bug, 97, max_states=1000)
    with pytest.raises(UsageError):
        verify_product_structure(bug, 4, 6)


def test_other_packing_same_orbit_sizes():
    p = packing_from_spec("-6,11,14,15")
    assert orbit_mod(p, 24).size == 40
    assert orbit_mod(p, 7).size == 300
