"""S-adic system over sigma: a->aab, b->c, c->a and tau: a->aba, b->c, c->a.

Both substitutions share the incidence matrix [[2,0,1],[1,0,0],[0,1,0]]
(characteristic polynomial X^3 - 2X^2 - 1) and the left eigenvector
psi = (1, beta-2, beta^2-2beta).  Words over pairs (digit, substitution) are
read least significant first: the pair at position i carries the digit of
beta^i and the substitution s_i of the directive sequence s_0 s_1 ...

The module builds the prefix automaton on pairs, the language L whose values
are psi(D_{u,a}), the restriction L_sigma to the all-sigma sequence, the zero
language L_0 and the language L_* whose words certify inclusions
``t + beta^k psi(D_{u_sigma,a}) ⊆ psi(D_{u,a})``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .automata import (Digit, DigitAlphabet, LabeledAutomaton, complete, determinize, is_subset,
                       minimize, mirror, state_count)
from .numberfield import FieldElement, MonicIntPoly, NumberField
from .relations import build_zero_automaton, q_inclusion
from .substitution import Substitution, psi

__all__ = [
    "SIGMA",
    "TAU",
    "SAdicSystem",
    "sadic_system",
    "sadic_prefix_automaton",
    "sadic_language_L",
    "sadic_L_sigma",
    "sadic_L0",
    "sadic_L_star",
    "Certificate",
    "sadic_inclusion_certificates",
    "brute_force_values",
    "language_values",
    "check_certificate",
    "sadic_state_counts",
]

SIGMA = Substitution(("a", "b", "c"), ("aab", "c", "a"))
TAU = Substitution(("a", "b", "c"), ("aba", "c", "a"))
NAMES = ("s", "t")  # display names of sigma and tau in directive words


class SAdicSystem:
    """Field, digit sets and languages of the sigma/tau system (built lazily, cached)."""

    def __init__(self, full_difference_set: bool = True):
        self.field = NumberField(MonicIntPoly((-1, 0, -2, 1)))
        self.psi = psi(SIGMA, self.field)
        assert psi(TAU, self.field).values == self.psi.values
        self.subs = {"s": SIGMA, "t": TAU}
        self.letters = DigitAlphabet(Digit(n) for n in NAMES)
        f = self.field
        beta = f.gen
        self.sigma_digits = DigitAlphabet.from_scalars([f(0), f(1), f(2)])
        self.tau_digits = DigitAlphabet.from_scalars([f(0), f(1), beta - 1])
        self.all_digits = DigitAlphabet.from_scalars(list(self.sigma_digits.digits[i].scalar
                                                          for i in range(3))
                                                     + [beta - 1])
        self.full_difference_set = full_difference_set
        self._cache: Dict[str, object] = {}

    # ---- alphabets
    def pair_alphabet(self, digits: DigitAlphabet) -> DigitAlphabet:
        return DigitAlphabet.product(digits, self.letters)

    def difference_alphabet(self) -> DigitAlphabet:
        """x - y for x in Σ_σ and y in Σ_σ ∪ Σ_τ (or y in Σ_τ only when not full)."""
        second = self.all_digits if self.full_difference_set else self.tau_digits
        diffs = [x.scalar - y.scalar for x in self.sigma_digits for y in second]
        diffs.sort(key=lambda e: (e.coords[1:], e.coords[0]))
        return DigitAlphabet.from_scalars(diffs)

    def _cached(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    # ---- languages
    def prefix_automaton(self) -> LabeledAutomaton:
        return self._cached("prefix", self._build_prefix)

    def _build_prefix(self) -> LabeledAutomaton:
        alpha = self.pair_alphabet(self.all_digits)
        succ = [dict() for _ in range(3)]
        for name in NAMES:
            s = self.subs[name]
            li = self.letters.index(Digit(name))
            for ci, w in enumerate(s.images):
                for pos, letter in enumerate(w):
                    x = self.psi(s.ab(w[:pos]))
                    d = alpha.index(Digit("", parts=(Digit("", scalar=x), self.letters[li])))
                    succ[ci].setdefault(d, []).append(s.index[letter])
        return LabeledAutomaton(alpha, succ, [0], [0])

    def language_L(self) -> LabeledAutomaton:
        """Deterministic least-significant-first language with values psi(D_{u,a})."""
        return self._cached("L", lambda: minimize(determinize(mirror(self.prefix_automaton()))))

    def subset_states(self) -> List[frozenset]:
        """Letter sets reached by the subset construction, in state order."""
        m = mirror(self.prefix_automaton())
        out = [frozenset(m.initial)]
        index = {out[0]: 0}
        i = 0
        while i < len(out):
            cur = out[i]
            i += 1
            for d in range(len(m.alphabet)):
                nxt = frozenset(t for q in cur for t in m.succ[q].get(d, ()))
                if nxt and nxt not in index:
                    index[nxt] = len(out)
                    out.append(nxt)
        return out

    def language_L_sigma(self) -> LabeledAutomaton:
        """Digits of the L-words whose directive letters are all sigma."""
        def build():
            lang = self.language_L()
            sig = self.letters.index(Digit("s"))
            succ = []
            for row in lang.succ:
                r = {}
                for d, t in row.items():
                    x, s = lang.alphabet[d].parts
                    xi = self.sigma_digits.get_index(x)
                    # sigma never emits beta-1, so such pairs only lead to the sink
                    if self.letters.index(s) != sig or xi is None:
                        continue
                    r[xi] = t
                succ.append(r)
            return LabeledAutomaton(self.sigma_digits, succ, lang.initial, lang.final)
        return self._cached("Lsigma", build)

    def language_L0(self) -> LabeledAutomaton:
        return self._cached("L0", lambda: build_zero_automaton(self.difference_alphabet(), self.field))

    def language_L_star(self) -> LabeledAutomaton:
        """Minimal DFA of m(L_0 x L_σ x L) over Σ_σ x S."""
        return self._cached("Lstar", self._build_L_star)

    def _build_L_star(self) -> LabeledAutomaton:
        l0, ls, ll = self.language_L0(), self.language_L_sigma(), self.language_L()
        target = self.pair_alphabet(self.sigma_digits)
        diff = self.difference_alphabet()
        # (x digit index, y-pair digit index of L) -> (L0 digit index, target index)
        moves = []
        for yi, yd in enumerate(ll.alphabet):
            y, s = yd.parts
            for xi, xd in enumerate(self.sigma_digits):
                t = diff.get_index(Digit("", scalar=xd.scalar - y.scalar))
                if t is None:
                    continue
                out = target.index(Digit("", parts=(xd, s)))
                moves.append((xi, yi, t, out))
        start = (l0.start, ls.start, ll.start)
        index = {start: 0}
        order = [start]
        succ = []
        i = 0
        while i < len(order):
            p0, ps, pl = order[i]
            i += 1
            row: Dict[int, list] = {}
            for xi, yi, t, out in moves:
                a = l0.succ[p0].get(t)
                b = ls.succ[ps].get(xi)
                c = ll.succ[pl].get(yi)
                if not (a and b and c):
                    continue
                nxt = (a[0], b[0], c[0])
                j = index.get(nxt)
                if j is None:
                    j = len(order)
                    index[nxt] = j
                    order.append(nxt)
                row.setdefault(out, []).append(j)
            succ.append(row)
        final = [j for j, (p0, ps, pl) in enumerate(order)
                 if p0 in l0.final and ps in ls.final and pl in ll.final]
        nfa = LabeledAutomaton(target, succ, [0], final)
        return minimize(determinize(nfa))


@lru_cache(maxsize=2)
def sadic_system(full_difference_set: bool = True) -> SAdicSystem:
    return SAdicSystem(full_difference_set)


def sadic_state_counts(full_difference_set: bool = True) -> Dict[str, int]:
    """Minimal state counts without the sink, plus the complete count of L_*."""
    system = sadic_system(full_difference_set)
    star = system.language_L_star()
    return {
        "L": state_count(system.language_L()),
        "L_sigma": state_count(system.language_L_sigma()),
        "L0": state_count(system.language_L0()),
        "L_star": state_count(star),
        "L_star_complete": minimize(complete(star)).n_states,
    }


def sadic_prefix_automaton() -> LabeledAutomaton:
    return sadic_system().prefix_automaton()


def sadic_language_L() -> LabeledAutomaton:
    return sadic_system().language_L()


def sadic_L_sigma() -> LabeledAutomaton:
    return sadic_system().language_L_sigma()


def sadic_L0(full_difference_set: bool = True) -> LabeledAutomaton:
    return sadic_system(full_difference_set).language_L0()


def sadic_L_star(full_difference_set: bool = True) -> LabeledAutomaton:
    return sadic_system(full_difference_set).language_L_star()


# --------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class Certificate:
    prefix: str
    digits: Tuple[int, ...]  # integer digits of t, least significant first
    t: FieldElement
    k: int
    in_L_star: bool
    value_checked: bool

    def to_dict(self) -> dict:
        return {"prefix": self.prefix, "t": str(self.t), "t_digits": list(self.digits),
                "k": self.k, "in_L_star": self.in_L_star, "value_checked": self.value_checked}


def _shifted_language(system: SAdicSystem, prefix: str, digits: Sequence[int]) -> LabeledAutomaton:
    """Words (x_i, s_i) with x = digits · w for w in L_σ and s_i = prefix[i] for i < |prefix|."""
    ls = system.language_L_sigma()
    target = system.pair_alphabet(system.sigma_digits)
    k = len(digits)
    depth = max(k, len(prefix))
    # state (position capped at depth, state of L_σ or None while reading digits)
    index: Dict[tuple, int] = {}
    order: List[tuple] = []

    def intern(st):
        j = index.get(st)
        if j is None:
            j = len(order)
            index[st] = j
            order.append(st)
        return j

    intern((0, None if k else ls.start))
    succ = []
    i = 0
    while i < len(order):
        pos, q = order[i]
        i += 1
        row: Dict[int, list] = {}
        letters = [prefix[pos]] if pos < len(prefix) else list(NAMES)
        npos = min(pos + 1, depth)
        for name in letters:
            s = Digit(name)
            if q is None:
                xd = system.sigma_digits[system.sigma_digits.index(Digit("", scalar=system.field(digits[pos])))]
                nq = ls.start if pos + 1 == k else None
                out = target.index(Digit("", parts=(xd, s)))
                row.setdefault(out, []).append(intern((npos, nq)))
            else:
                for xi, tg in ls.succ[q].items():
                    out = target.index(Digit("", parts=(system.sigma_digits[xi], s)))
                    row.setdefault(out, []).append(intern((npos, tg[0])))
        succ.append(row)
    final = [j for j, (pos, q) in enumerate(order) if q is not None and q in ls.final]
    return LabeledAutomaton(target, succ, [0], final)


def _directive_language(system: SAdicSystem, directive: str) -> LabeledAutomaton:
    """Digits of the L-words whose letters follow ``directive`` and then repeat its last letter."""
    lang = system.language_L()
    n = len(directive)
    alpha = system.all_digits
    index = {(0, lang.start): 0}
    order = [(0, lang.start)]
    succ = []
    i = 0
    while i < len(order):
        pos, q = order[i]
        i += 1
        want = directive[min(pos, n - 1)]
        row: Dict[int, list] = {}
        for d, tg in lang.succ[q].items():
            x, s = lang.alphabet[d].parts
            if s.name != want:
                continue
            nxt = (min(pos + 1, n), tg[0])
            j = index.get(nxt)
            if j is None:
                j = len(order)
                index[nxt] = j
                order.append(nxt)
            row.setdefault(alpha.index(x), []).append(j)
        succ.append(row)
    final = [j for j, (pos, q) in enumerate(order) if q in lang.final]
    return LabeledAutomaton(alpha, succ, [0], final)


def check_certificate(prefix: str, digits: Sequence[int], system: Optional[SAdicSystem] = None
                      ) -> Tuple[bool, bool]:
    """Return (every shifted word lies in L_*, value inclusion holds for two continuations).

    The first check covers every continuation of ``prefix``.  The second is
    an independent value-level check of ``t + beta^k Q_{L_σ} ⊆ Q_{L_u}``
    for the directive words ``prefix σ^ω`` and ``prefix τ^ω``.
    """
    system = sadic_system() if system is None else system
    shifted = _shifted_language(system, prefix, digits)
    in_star = is_subset(shifted, system.language_L_star())
    f = system.field
    ls = system.language_L_sigma()
    shifted_values = _prepend_digits(ls, [f(x) for x in digits], system)
    value_ok = all(q_inclusion(shifted_values, _directive_language(system, prefix + tail), f)
                   for tail in NAMES)
    return in_star, value_ok


def _prepend_digits(lang: LabeledAutomaton, digits: Sequence[FieldElement],
                    system: SAdicSystem) -> LabeledAutomaton:
    alpha = system.all_digits
    k = len(digits)
    n = lang.n_states
    succ = [{alpha.index(lang.alphabet[d]): t for d, t in row.items()} for row in lang.succ]
    chain = []
    for i, x in enumerate(digits):
        nxt = n + i + 1 if i + 1 < k else lang.start
        chain.append({alpha.index(Digit("", scalar=x)): (nxt,)})
    succ += chain
    start = n if k else lang.start
    return LabeledAutomaton(alpha, succ, [start], lang.final)


def sadic_inclusion_certificates(prefixes: Optional[Sequence[str]] = None, max_k: int = 6,
                                 system: Optional[SAdicSystem] = None) -> Dict[str, Optional[Certificate]]:
    """Search, per directive prefix, digits t_0..t_{k-1} in Σ_σ with k <= max_k certified by L_*.

    Candidates are tried by increasing k, then in lexicographic order of the
    digits read most significant first.  ``None`` marks a prefix without a
    certificate.
    """
    system = sadic_system() if system is None else system
    if prefixes is None:
        prefixes = ["".join(p) for p in itertools.product(NAMES, repeat=6)]
    star = system.language_L_star()
    beta = system.field.gen
    out: Dict[str, Optional[Certificate]] = {}
    for prefix in prefixes:
        found = None
        for k in range(max_k + 1):
            for msb in itertools.product((0, 1, 2), repeat=k):
                digits = tuple(reversed(msb))
                if is_subset(_shifted_language(system, prefix, digits), star):
                    t = sum((beta ** i * d for i, d in enumerate(digits)), system.field.zero)
                    _, value_ok = check_certificate(prefix, digits, system)
                    found = Certificate(prefix, digits, t, k, True, value_ok)
                    break
            if found:
                break
        out[prefix] = found
    return out


def brute_force_values(directive: str, letter: str = "a") -> set:
    """psi(Ab(v)) for every v with v·letter a prefix of s_0 s_1 ... s_n(a), as coordinate tuples."""
    system = sadic_system()
    word = "a"
    for name in reversed(directive):
        word = system.subs[name].apply(word)
    out = set()
    v = [0, 0, 0]
    for c in word:
        if c == letter:
            out.add(system.psi(v).coords)
        v["abc".index(c)] += 1
    return out


def language_values(directive: str) -> set:
    """Values of the L-words of length |directive| labelled by ``directive``."""
    system = sadic_system()
    lang = system.language_L()
    beta = system.field.gen
    out = set()
    layer = [(lang.start, system.field.zero)]
    for i, name in enumerate(directive):
        nxt = []
        for q, acc in layer:
            for d, tg in lang.succ[q].items():
                x, s = lang.alphabet[d].parts
                if s.name == name:
                    nxt.append((tg[0], acc + x.scalar * beta ** i))
        layer = nxt
    for q, acc in layer:
        if q in lang.final:
            out.add(acc.coords)
    return out
