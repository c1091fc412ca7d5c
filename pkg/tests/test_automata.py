"""Automaton operators against brute-force enumeration of all short words."""

from itertools import product

import pytest
from hypothesis import given, strategies as st

from pisot_disc.automata import (DigitAlphabet, LabeledAutomaton, complement, complete,
                                 concat_zero_star, determinize, enumerate_words, equivalent,
                                 from_dot, intersect, is_empty, is_subset, isomorphic, minimize,
                                 mirror, s_stabilizer, shortest_word, state_count, union,
                                 z_closure)

MAXLEN = 7
ALPHA = DigitAlphabet.from_names(["0", "1"])
ALPHA3 = DigitAlphabet.from_names(["0", "1", "2"])


def all_words(k, n=MAXLEN):
    for length in range(n + 1):
        yield from product(range(k), repeat=length)


def lang(a, n=MAXLEN):
    return {w for w in all_words(len(a.alphabet), n) if a.accepts(w)}


@st.composite
def nfas(draw, alphabet=ALPHA, max_states=4):
    n = draw(st.integers(1, max_states))
    k = len(alphabet)
    succ = []
    for _ in range(n):
        row = {}
        for d in range(k):
            tg = draw(st.lists(st.integers(0, n - 1), max_size=2, unique=True))
            if tg:
                row[d] = tg
        succ.append(row)
    initial = draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=2, unique=True))
    final = draw(st.lists(st.integers(0, n - 1), max_size=n, unique=True))
    return LabeledAutomaton(alphabet, succ, initial, final)


@given(nfas())
def test_determinize_preserves_language(a):
    d = determinize(a)
    assert d.deterministic
    assert lang(d) == lang(a)


@given(nfas())
def test_minimize_preserves_language_and_is_smallest(a):
    m = minimize(determinize(a))
    assert lang(m) == lang(a)
    # minimizing again cannot shrink further
    assert state_count(minimize(m)) == state_count(m)
    assert state_count(m) <= state_count(determinize(a))


@given(nfas(), nfas())
def test_boolean_operators(a, b):
    la, lb = lang(a), lang(b)
    assert lang(intersect(a, b)) == la & lb
    assert lang(union(a, b)) == la | lb
    assert lang(complement(a)) == set(all_words(2)) - la


@given(nfas())
def test_mirror_reverses_words(a):
    assert lang(mirror(a)) == {tuple(reversed(w)) for w in lang(a)}


@given(nfas(), nfas())
def test_subset_matches_enumeration(a, b):
    # a shortest counterexample is no longer than the product of the two DFAs
    bound = determinize(a).n_states * complete(determinize(b)).n_states
    n = min(bound, 10)
    holds = lang(a, n) <= lang(b, n)
    if is_subset(a, b):
        assert holds
    elif bound <= 10:
        assert not holds
    assert equivalent(a, minimize(determinize(a)))


@given(nfas())
def test_concat_zero_star(a):
    la = lang(a)
    expect = {w for w in all_words(2) if any(w[:i] in la and not any(w[i:])
                                             for i in range(len(w) + 1))}
    assert lang(concat_zero_star(a)) == expect


@given(nfas())
def test_z_closure(a):
    d = complete(determinize(a))
    z = z_closure(d)
    la = lang(d, MAXLEN + d.n_states)
    expect = {w for w in all_words(2) if any(w + (0,) * n in la for n in range(d.n_states + 1))}
    assert lang(z) == expect


@given(nfas())
def test_s_stabilizer(a):
    d = complete(determinize(a))
    s = s_stabilizer(d)
    m = d.n_states
    la = lang(d, MAXLEN + m)
    expect = {w for w in all_words(2, MAXLEN)
              if all(w + v in la for v in all_words(2, m))}
    assert lang(s) == expect


@given(nfas(alphabet=ALPHA3, max_states=3))
def test_enumerate_words_and_shortest(a):
    words = enumerate_words(a, 5)
    assert set(words) == lang(a, 5)
    assert [len(w) for w in words] == sorted(len(w) for w in words)
    sw = shortest_word(a)
    if is_empty(a):
        assert sw is None and not words
    else:
        # a shortest word is no longer than the number of subset states
        bound = determinize(a).n_states
        assert sw == min(lang(a, bound), key=lambda w: (len(w), w))


@given(nfas())
def test_isomorphic_is_language_equality(a):
    assert isomorphic(a, minimize(determinize(a)))
    assert isomorphic(a, mirror(mirror(a)))


@given(nfas())
def test_dot_and_json_round_trip(a):
    d = minimize(determinize(a))
    back = from_dot(d.to_dot(), d.alphabet)
    assert lang(back) == lang(d)
    again = LabeledAutomaton.from_json(d.to_json())
    assert lang(again) == lang(d)


def test_state_count_ignores_sink():
    # words starting with 1
    a = LabeledAutomaton(ALPHA, [{1: [1]}, {0: [1], 1: [1]}], [0], [1])
    assert state_count(minimize(determinize(a))) == 2
    assert minimize(complete(determinize(a))).n_states == 3


def test_z_requires_complete_dfa():
    a = LabeledAutomaton(ALPHA, [{1: [0]}], [0], [0])
    with pytest.raises(ValueError):
        z_closure(a)
