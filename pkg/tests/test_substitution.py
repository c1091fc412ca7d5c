import pytest

from conftest import BUNDLED, FIBONACCI, SMALLEST_PISOT, TRIBONACCI
from pisot_disc.automata import enumerate_words
from pisot_disc.interior import SubstitutionContext
from pisot_disc.relations import value
from pisot_disc.substitution import (SubstitutionError, classify, discrete_line_points, e_one,
                                     e_one_star, fixed_point_power, incidence_matrix,
                                     parse_substitution, prefix_automaton, psi)


def test_parse_and_print():
    s = parse_substitution("a->ab; b->ac; c->a")
    assert s.alphabet == ("a", "b", "c")
    assert s.apply("abc") == "abaca"
    assert parse_substitution(str(s)) == s
    for bad in ["a->ab;a->b", "a->ax", "a->"]:
        with pytest.raises(SubstitutionError):
            parse_substitution(bad)


def test_incidence_and_classification():
    s = parse_substitution(TRIBONACCI)
    assert incidence_matrix(s) == [[1, 1, 1], [1, 0, 0], [0, 1, 0]]
    rep = classify(s)
    assert rep.ok and rep.char_poly == "X^3 - X^2 - X - 1"
    bad = classify(parse_substitution("a->ab;b->ab"))
    assert not bad.ok and "not irreducible" in bad.reasons
    assert not classify(parse_substitution("a->aa;b->b")).primitive


def test_fixed_point_power():
    assert fixed_point_power(parse_substitution(TRIBONACCI)) == (1, "a")
    assert fixed_point_power(parse_substitution(SMALLEST_PISOT)) == (3, "a")
    assert fixed_point_power(parse_substitution("a->ba;b->a")) == (2, "a")


@pytest.mark.parametrize("text", BUNDLED)
def test_psi_is_left_eigenvector(text):
    s = parse_substitution(text)
    pm = psi(s)
    beta = pm.field.gen
    m = incidence_matrix(s)
    for j in range(s.size):
        column = [m[i][j] for i in range(s.size)]
        assert pm(column) == beta * pm[j]
    assert pm[0] == pm.field.one * pm.scale


def test_prefix_automaton_of_tribonacci():
    pa = prefix_automaton(parse_substitution(TRIBONACCI))
    assert sorted(d.name for d in pa.alphabet) == ["0", "e_a"]
    assert pa.n_transitions() == 5


@pytest.mark.parametrize("text", BUNDLED)
def test_prefix_language_values_are_the_discrete_line(text):
    """Values of length-n words of the mirrored prefix language equal psi of the discrete line."""
    s = parse_substitution(text)
    ctx = SubstitutionContext(s)
    depth = 6
    for b in s.alphabet:
        lang = ctx.language(b)
        vals = {value([lang.alphabet[i].scalar for i in w], ctx.base)
                for w in enumerate_words(lang, depth) if len(w) == depth}
        points = {ctx.psi(v) for v in discrete_line_points(s, b, depth)}
        assert vals == points


def test_e_one_and_dual_are_inverse_on_fibonacci():
    s = parse_substitution(FIBONACCI)
    faces = e_one(s, (0, 0), "a")
    assert faces == {((0, 0), "a"), ((1, 0), "b")}
    for y, b in faces:
        assert ((0, 0), "a") in e_one_star(s, y, b)
