"""Substitutions: parsing, incidence matrices, classification and the prefix automaton."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Dict, Iterable, Optional, Sequence

import sympy

from .automata import Digit, DigitAlphabet, LabeledAutomaton, mirror
from .numberfield import (FieldElement, MonicIntPoly, NumberField, char_poly,
                          classify_polynomial)

__all__ = [
    "SubstitutionError",
    "Substitution",
    "ClassificationReport",
    "parse_substitution",
    "incidence_matrix",
    "classify",
    "psi",
    "PsiMap",
    "prefix_automaton",
    "prefix_language",
    "discrete_line_points",
    "e_one",
    "e_one_star",
    "BudgetExceeded",
]

DEFAULT_POINT_BUDGET = 2_000_000

_LETTER = re.compile(r"^[A-Za-z0-9]$")


class SubstitutionError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Substitution:
    """Word morphism on an ordered alphabet of single-character letters."""

    alphabet: tuple
    images: tuple  # image words, aligned with ``alphabet``

    def __post_init__(self):
        if not self.alphabet:
            raise SubstitutionError("empty alphabet")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise SubstitutionError("duplicate letter")
        if len(self.images) != len(self.alphabet):
            raise SubstitutionError("one image per letter is required")
        letters = set(self.alphabet)
        for a, w in zip(self.alphabet, self.images):
            if not w:
                raise SubstitutionError(f"empty image for letter {a!r}")
            for c in w:
                if c not in letters:
                    raise SubstitutionError(f"unknown letter {c!r} in image of {a!r}")

    @classmethod
    def from_dict(cls, images: Dict[str, str]) -> "Substitution":
        return cls(tuple(images), tuple(images[a] for a in images))

    @property
    def size(self) -> int:
        return len(self.alphabet)

    @cached_property
    def index(self) -> dict:
        return {a: i for i, a in enumerate(self.alphabet)}

    def image(self, letter: str) -> str:
        return self.images[self.index[letter]]

    def apply(self, word: str) -> str:
        return "".join(self.images[self.index[c]] for c in word)

    def iterate(self, word: str, n: int, budget: Optional[int] = None) -> str:
        for _ in range(n):
            word = self.apply(word)
            if budget is not None and len(word) > budget:
                raise BudgetExceeded(f"word length exceeds budget {budget}")
        return word

    def power(self, k: int) -> "Substitution":
        if k < 1:
            raise SubstitutionError("power must be >= 1")
        return Substitution(self.alphabet, tuple(self.iterate(a, k) for a in self.alphabet))

    def ab(self, word: str) -> tuple:
        """Abelian vector of ``word``."""
        v = [0] * self.size
        for c in word:
            v[self.index[c]] += 1
        return tuple(v)

    def __str__(self) -> str:
        return ";".join(f"{a}->{w}" for a, w in zip(self.alphabet, self.images))


def parse_substitution(text: str) -> Substitution:
    """Parse ``"a->ab; b->ac; c->a"``; alphabet order is left-hand-side order."""
    alphabet = []
    images = []
    rules = [r.strip() for r in text.split(";")]
    if rules and rules[-1] == "":
        rules.pop()
    if not rules:
        raise SubstitutionError("no rules")
    for rule in rules:
        if "->" not in rule:
            raise SubstitutionError(f"rule {rule!r} lacks '->'")
        lhs, rhs = (p.strip() for p in rule.split("->", 1))
        if not _LETTER.match(lhs):
            raise SubstitutionError(f"bad letter {lhs!r}")
        if lhs in alphabet:
            raise SubstitutionError(f"duplicate left-hand side {lhs!r}")
        if not rhs:
            raise SubstitutionError(f"empty image for letter {lhs!r}")
        if not all(_LETTER.match(c) for c in rhs):
            raise SubstitutionError(f"bad image {rhs!r}")
        alphabet.append(lhs)
        images.append(rhs)
    return Substitution(tuple(alphabet), tuple(images))


def incidence_matrix(s: Substitution) -> list:
    """``M[a][b]`` = number of occurrences of letter a in s(b)."""
    d = s.size
    m = [[0] * d for _ in range(d)]
    for b, w in enumerate(s.images):
        for c in w:
            m[s.index[c]][b] += 1
    return m


def _matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def _matvec(m, v):
    return tuple(sum(m[i][j] * v[j] for j in range(len(v))) for i in range(len(m)))


@dataclass(frozen=True)
class ClassificationReport:
    primitive: bool
    irreducible: bool
    pisot: bool
    unit: bool
    power_for_fixed_point: int
    seed_letter: str
    char_poly: str = ""

    @property
    def reasons(self) -> list:
        out = []
        for flag in ("primitive", "irreducible", "pisot", "unit"):
            if not getattr(self, flag):
                out.append(f"not {flag}")
        return out

    @property
    def ok(self) -> bool:
        return not self.reasons

    def to_dict(self) -> dict:
        return {
            "primitive": self.primitive,
            "irreducible": self.irreducible,
            "pisot": self.pisot,
            "unit": self.unit,
            "power_for_fixed_point": self.power_for_fixed_point,
            "seed_letter": self.seed_letter,
            "char_poly": self.char_poly,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def is_primitive(m: Sequence[Sequence[int]]) -> bool:
    d = len(m)
    # boolean powers; Wielandt bound on the exponent
    b = [[1 if x else 0 for x in row] for row in m]
    p = b
    for _ in range((d - 1) ** 2 + 1):
        if all(x for row in p for x in row):
            return True
        p = [[1 if any(p[i][k] and b[k][j] for k in range(d)) else 0 for j in range(d)]
             for i in range(d)]
    return all(x for row in p for x in row)


def fixed_point_power(s: Substitution) -> tuple:
    """``(k, a)`` with s^k(a) starting with a, following first letters from the first letter."""
    seen = {}
    a = s.alphabet[0]
    step = 0
    while a not in seen:
        seen[a] = step
        a = s.image(a)[0]
        step += 1
    return step - seen[a], a


def classify(s: Substitution) -> ClassificationReport:
    m = incidence_matrix(s)
    p = char_poly(m)
    cls = classify_polynomial(p)
    k, a = fixed_point_power(s)
    return ClassificationReport(is_primitive(m), cls.irreducible, cls.pisot, cls.unit, k, a, str(p))


# --------------------------------------------------------------------------
# left eigenvector


@dataclass(frozen=True)
class PsiMap:
    """Images ``psi(e_a)`` in Z[beta]; ``scale`` is the integer that cleared denominators."""

    field: NumberField
    values: tuple
    scale: int = 1

    def __call__(self, vector: Sequence[int]) -> FieldElement:
        acc = self.field.zero
        for c, v in zip(vector, self.values):
            if c:
                acc = acc + v * int(c)
        return acc

    def __getitem__(self, i: int) -> FieldElement:
        return self.values[i]


def psi(s: Substitution, field: Optional[NumberField] = None) -> PsiMap:
    """Left eigenvector for the dominant root, normalized to 1 on the first letter."""
    m = incidence_matrix(s)
    poly = char_poly(m)
    if not classify_polynomial(poly).irreducible:
        raise SubstitutionError("psi needs an irreducible incidence matrix")
    if field is None:
        field = NumberField(poly)
    elif field.poly != poly:
        raise SubstitutionError("field does not match the characteristic polynomial")
    x = sympy.Symbol("X")
    d = s.size
    a_mat = sympy.Matrix(d, d, lambda i, j: (x if i == j else 0) - m[i][j])
    adj = a_mat.adjugate()

    def to_elem(expr):
        coeffs = sympy.Poly(sympy.expand(expr), x).all_coeffs()[::-1]
        return field.from_poly_coeffs([int(c) for c in coeffs])

    row = None
    for i in range(d):
        cand = [to_elem(adj[i, j]) for j in range(d)]
        if not cand[0].is_zero():
            row = cand
            break
    if row is None:
        raise SubstitutionError("left eigenvector vanishes on the first letter")
    inv = field.inverse_rational(row[0])
    rational = [field.mul_coords(e.coords, inv) for e in row]
    scale = lcm(*(Fraction(c).denominator for v in rational for c in v))
    values = tuple(field.element([int(Fraction(c) * scale) for c in v]) for v in rational)
    return PsiMap(field, values, scale)


# --------------------------------------------------------------------------
# prefix automaton


def _vec_name(v: Sequence[int], alphabet: Sequence[str]) -> str:
    out = ""
    for c, a in zip(v, alphabet):
        if not c:
            continue
        mag = "" if abs(c) == 1 else str(abs(c))
        if c < 0:
            out += f"-{mag}e_{a}"
        else:
            out += ("+" if out else "") + f"{mag}e_{a}"
    return out or "0"


def prefix_automaton(s: Substitution, psi_map: Optional[PsiMap] = None) -> LabeledAutomaton:
    """Automaton on the letters with a transition c -t-> d per occurrence of d in s(c).

    Digits are abelianized strict prefixes; each digit carries its psi image
    when ``psi_map`` is given.  No initial or final states are set.
    """
    digits = []
    keys = {}
    succ = [dict() for _ in range(s.size)]
    for ci, w in enumerate(s.images):
        for pos, letter in enumerate(w):
            t = s.ab(w[:pos])
            if t not in keys:
                scalar = psi_map(t) if psi_map is not None else None
                name = _vec_name(t, s.alphabet)
                keys[t] = len(digits)
                digits.append(Digit(name, vector=t, scalar=scalar))
            succ[ci].setdefault(keys[t], []).append(s.index[letter])
    return LabeledAutomaton(DigitAlphabet(digits), succ, [], [])


def prefix_language(s: Substitution, seed: str, target: str,
                    psi_map: Optional[PsiMap] = None) -> LabeledAutomaton:
    """Path language from ``seed`` to ``target`` (most significant digit first)."""
    pa = prefix_automaton(s, psi_map)
    return LabeledAutomaton(pa.alphabet, pa.succ, [s.index[seed]], [s.index[target]])


def mirrored_prefix_language(s: Substitution, seed: str, target: str,
                             psi_map: Optional[PsiMap] = None) -> LabeledAutomaton:
    """Least-significant-first language whose values form D_{u,target}."""
    return mirror(prefix_language(s, seed, target, psi_map))


def prefix_automaton_dot(s: Substitution, psi_map: Optional[PsiMap] = None) -> str:
    pa = prefix_automaton(s, psi_map)
    lines = ["digraph prefix {", "  rankdir=LR;"]
    for i, a in enumerate(s.alphabet):
        lines.append(f'  {i} [label="{a}"];')
    for q, d, t in pa.transitions():
        dig = pa.alphabet[d]
        label = dig.name if dig.scalar is None else f"{dig.name} | {dig.scalar}"
        lines.append(f'  {q} -> {t} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# discrete line and E_1


def discrete_line_points(s: Substitution, target: str, n: int,
                         budget: int = DEFAULT_POINT_BUDGET) -> set:
    """``{Ab(v) : v target is a prefix of s^{kn}(seed)}`` for the classified power k."""
    k, seed = fixed_point_power(s)
    word = s.iterate(seed, k * n, budget)
    out = set()
    v = [0] * s.size
    for c in word:
        if c == target:
            out.add(tuple(v))
        v[s.index[c]] += 1
    return out


def e_one(s: Substitution, x: Sequence[int], letter: str) -> set:
    m = incidence_matrix(s)
    mx = _matvec(m, x)
    ci = s.index[letter]
    w = s.images[ci]
    out = set()
    for pos, b in enumerate(w):
        t = s.ab(w[:pos])
        out.add((tuple(a + c for a, c in zip(mx, t)), b))
    return out


def inverse_incidence(s: Substitution) -> list:
    m = sympy.Matrix(incidence_matrix(s))
    if abs(m.det()) != 1:
        raise SubstitutionError("incidence matrix is not unimodular")
    inv = m.inv()
    return [[int(inv[i, j]) for j in range(s.size)] for i in range(s.size)]


def e_one_star(s: Substitution, y: Sequence[int], letter: str) -> set:
    inv = inverse_incidence(s)
    bi = s.index[letter]
    out = set()
    for ai, w in enumerate(s.images):
        for pos, b in enumerate(w):
            if s.index[b] != bi:
                continue
            t = s.ab(w[:pos])
            out.add((_matvec(inv, tuple(p - q for p, q in zip(y, t))), s.alphabet[ai]))
    return out
