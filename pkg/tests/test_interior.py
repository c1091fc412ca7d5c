from itertools import product

import pytest

from conftest import FIBONACCI, FLIPPED_TRIBONACCI, S2, TRIBONACCI
from pisot_disc.automata import (DigitAlphabet, LabeledAutomaton, enumerate_words, equivalent,
                                 from_words, is_empty, is_subset, shortest_word, universal)
from pisot_disc.interior import (NOT_DETECTED, PRECONDITION_FAILED, PURE_DISCRETE,
                                 SubstitutionContext, _expanding_sign, decide_pure_discreteness,
                                 default_extended_alphabet, interior_language, interior_of_language)
from pisot_disc.numberfield import MonicIntPoly, NumberField
from pisot_disc.relations import q_inclusion
from pisot_disc.substitution import parse_substitution

GOLDEN = NumberField(MonicIntPoly.parse("X^2 - X - 1"))


def ctx_of(text):
    return SubstitutionContext(parse_substitution(text))


def test_radius_zero_is_the_substitution_digits():
    ctx = ctx_of(TRIBONACCI)
    assert default_extended_alphabet(ctx, 0) == ctx.digit_alphabet()


def test_fibonacci_radius_one_alphabet():
    ctx = ctx_of(FIBONACCI)
    base = {(0, 0), (1, 0)}
    shifts = {(0, 0), (1, -1), (-1, 1)}
    expect = {(x + u, y + v) for x, y in base for u, v in shifts}
    full = default_extended_alphabet(ctx, 1, positive_only=False)
    assert {d.vector for d in full} == expect
    kept = default_extended_alphabet(ctx, 1)
    dropped = {d.vector for d in full} - {d.vector for d in kept}
    assert all(_expanding_sign(ctx.psi(v)) < 0 for v in dropped)
    assert all(_expanding_sign(d.scalar) >= 0 for d in kept)
    assert kept.zero_index is not None


@pytest.mark.parametrize("text", [FIBONACCI, TRIBONACCI])
def test_interior_is_the_whole_language(text):
    ctx = ctx_of(text)
    for b in ctx.substitution.alphabet:
        assert equivalent(interior_language(ctx, b), ctx.language(b))


def test_report_on_tribonacci():
    rep = decide_pure_discreteness(parse_substitution(TRIBONACCI))
    assert rep.status == PURE_DISCRETE
    assert rep.witness is not None and rep.radius == 0
    ctx = ctx_of(TRIBONACCI)
    lang = ctx.language("a")
    assert rep.witness == [lang.alphabet[i].name for i in shortest_word(lang)]
    d = rep.to_dict(meta=False)
    assert d["schema"].startswith("pisot-disc/interior-report/")
    assert "timings" not in d


def test_preconditions():
    rep = decide_pure_discreteness(parse_substitution("a->ab;b->ab"))
    assert rep.status == PRECONDITION_FAILED
    assert "not irreducible" in rep.reasons
    rep = decide_pure_discreteness(parse_substitution("a->aaab;b->ab"))
    assert rep.status == PRECONDITION_FAILED
    assert "not unit" in rep.reasons


def test_letters_agree_on_emptiness():
    rep = decide_pure_discreteness(parse_substitution(FLIPPED_TRIBONACCI), radii=(0,),
                                   all_letters=True)
    assert rep.letters_consistent
    assert rep.status == PURE_DISCRETE


@pytest.mark.parametrize("text,radii", [(FIBONACCI, (0, 1, 2)), (TRIBONACCI, (0, 1)), (S2, (0, 1))])
def test_enlarging_the_alphabet_never_shrinks(text, radii):
    ctx = ctx_of(text)
    auts = [interior_language(ctx, "a", radius=r) for r in radii]
    for small, big in zip(auts, auts[1:]):
        assert is_subset(small, big)
        # the pipeline is antitone in the alphabet, so here the languages coincide
        assert is_subset(big, small)


def test_universal_language_is_its_own_interior():
    alpha = DigitAlphabet.from_scalars([GOLDEN.element((c,)) for c in (0, 1)])
    full = universal(alpha)
    assert equivalent(interior_of_language(full, alpha, GOLDEN), full)


def test_single_point_language_has_empty_interior():
    alpha = DigitAlphabet.from_scalars([GOLDEN.element((c,)) for c in (0, 1)])
    zero = LabeledAutomaton(alpha, [{alpha.zero_index: [0]}], [0], [0])
    assert is_empty(interior_of_language(zero, alpha, GOLDEN))



class _Alpha:
    def __init__(self, scalars):
        self.alpha = DigitAlphabet.from_scalars(scalars)

    def index_of_scalar(self, x):
        for i, d in enumerate(self.alpha):
            if d.scalar == x:
                return i
        raise KeyError(x)


@pytest.mark.parametrize("text", [FIBONACCI, TRIBONACCI])
def test_interior_words_keep_a_padded_neighbourhood(text):
    """For w in the interior, some zero padding n makes every continuation v stay in Q_L."""
    ctx = ctx_of(text)
    extended = default_extended_alphabet(ctx, 1)
    lang = ctx.language("a")
    inner = interior_language(ctx, "a", extended)
    scalars = sorted({d.scalar for d in extended} | {d.scalar for d in lang.alphabet},
                     key=lambda x: x.coords)
    box = _Alpha(scalars)
    zero = ctx.field.zero
    continuations = [v for k in range(3) for v in product([d.scalar for d in extended], repeat=k)]
    for w in enumerate_words(inner, 3):
        ws = [inner.alphabet[i].scalar for i in w]
        single = from_words(box.alpha, [tuple(box.index_of_scalar(x) for x in ws)])
        assert q_inclusion(single, lang, ctx.field, ctx.base)
        ok = False
        for n in range(11):
            words = [tuple(box.index_of_scalar(x) for x in ws + [zero] * n + list(v))
                     for v in continuations]
            if q_inclusion(from_words(box.alpha, words), lang, ctx.field, ctx.base):
                ok = True
                break
        assert ok, f"no padding found for {w}"


def test_not_detected_is_never_a_negative_verdict():
    assert NOT_DETECTED == "NOT_DETECTED"
    rep = decide_pure_discreteness(parse_substitution(TRIBONACCI), radii=())
    assert rep.status == NOT_DETECTED
    assert "retry with a larger radius" in rep.reasons[0]
