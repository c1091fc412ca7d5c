from itertools import product

import pytest

from pisot_disc.automata import state_count
from pisot_disc.sadic import (SIGMA, TAU, brute_force_values, check_certificate, language_values,
                              sadic_L0, sadic_language_L, sadic_system)
from pisot_disc.substitution import incidence_matrix


def test_shared_incidence_matrix():
    assert incidence_matrix(SIGMA) == incidence_matrix(TAU) == [[2, 0, 1], [1, 0, 0], [0, 1, 0]]


def test_language_L_has_three_subset_states():
    system = sadic_system()
    assert state_count(sadic_language_L()) == 3
    assert sorted(sorted(x) for x in system.subset_states()) == [[0], [0, 1, 2], [0, 2]]


@pytest.mark.parametrize("n", range(1, 6))
def test_language_values_match_brute_force(n):
    for directive in product("st", repeat=n):
        d = "".join(directive)
        assert language_values(d) == brute_force_values(d), d


def test_zero_language_sizes():
    assert state_count(sadic_L0(True)) == 62
    assert state_count(sadic_L0(False)) == 30


@pytest.mark.parametrize("prefix,digits", [("sstt", (1, 1, 0, 1)), ("ttttt", (0, 0, 0, 0, 0))])
def test_printed_certificates(prefix, digits):
    assert check_certificate(prefix, digits) == (True, True)


def test_wrong_certificate_is_rejected():
    assert check_certificate("sstt", (2, 0, 0, 0)) == (False, False)
    assert check_certificate("sstt", ()) == (False, False)


def test_language_route_is_stronger_than_two_continuations():
    # t = 0 works for the two sampled continuations but not for every one
    assert check_certificate("sstt", (0, 0, 0, 0)) == (False, True)
