"""Zero and relations automata over Z[beta].

All languages here are least significant digit first: the word
``u_0 u_1 ... u_n`` has value ``sum u_i b^i`` where ``b`` is the base (beta or a
power of it).  Reading a digit ``d`` moves the carry ``c`` to ``(c + d) / b``;
since the base is a unit this stays in Z[beta], and a word has value zero
exactly when the carry returns to 0.  Carries on an accepting path satisfy

* ``|sigma(c)| <= D_sigma / (1 - |sigma(b)|)`` for every contracting embedding,
* ``|c| <= D / (b - 1)`` for the expanding one,

with ``D`` the largest digit modulus under that embedding.  These bounds only
prune; the final machine is trimmed to carries that can return to 0, so the
result is exact.
"""

from __future__ import annotations

import math
from collections import deque
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from .automata import (AutomatonError, Digit, DigitAlphabet, LabeledAutomaton,
                       z_final_states)
from .numberfield import FieldElement, NumberField

__all__ = [
    "StateBudgetExceeded",
    "CarryGraph",
    "build_zero_automaton",
    "build_relations_automaton",
    "ProjectedRelation",
    "q_inclusion",
    "value",
]

DEFAULT_BUDGET = 1_000_000
# relative slack on float bound checks; pruning is only ever looser than exact
_SLACK = 1e-9


class StateBudgetExceeded(RuntimeError):
    pass


def value(word: Sequence[FieldElement], base: FieldElement) -> FieldElement:
    """``sum word[i] * base^i`` computed exactly."""
    acc = base.field.zero
    for d in reversed(list(word)):
        acc = acc * base + d
    return acc


def _float_up(q: Fraction) -> float:
    f = float(q)
    return math.nextafter(f, math.inf) if f < math.inf else f


class CarryGraph:
    """Trimmed deterministic carry machine for a finite set of difference digits.

    ``carries[i]`` are coordinate tuples with ``carries[0] == 0``;
    ``trans[i][j]`` is the carry reached from carry ``i`` on difference
    ``diffs[j]`` or -1.
    """

    def __init__(self, field: NumberField, diffs: Sequence[FieldElement],
                 base: Optional[FieldElement] = None, budget: int = DEFAULT_BUDGET,
                 prune: bool = True):
        self.field = field
        self.base = field.gen if base is None else base
        self.diffs = list(diffs)
        self.budget = budget
        self.prune = prune
        inv = self.base.unit_inverse()
        d = field.degree
        # integer matrix of multiplication by 1/base
        cols = [field.mul_coords(inv.coords, field.element([0] * j + [1]).coords) for j in range(d)]
        self._inv_rows = tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))
        self._setup_bounds()
        self._build()

    def _setup_bounds(self):
        f = self.field
        encs = f.root_enclosures()
        checks = []
        if self.prune:
            for idx in range(f.degree):
                e = encs[idx]
                if e.im > 0:
                    continue  # conjugate of a checked embedding
                bvals = [f.evaluate(x, idx) for x in self.diffs] or []
                dmax = max((v.abs_upper() for v in bvals), default=Fraction(0))
                bz = f.evaluate(self.base, idx)
                if idx == f.expanding_index:
                    low = bz.abs_lower()
                    if low <= 1:
                        continue
                    bound = dmax / (low - 1)
                else:
                    up = bz.abs_upper()
                    if up >= 1:
                        continue
                    bound = dmax / (1 - up)
                pw = [complex(e.center) ** j for j in range(f.degree)]
                checks.append((pw, _float_up(bound) * (1 + _SLACK) + _SLACK))
        self._checks = checks

    def within_bounds(self, coords: Sequence[int]) -> bool:
        for pw, bound in self._checks:
            v = 0j
            for c, p in zip(coords, pw):
                if c:
                    v += c * p
            if abs(v) > bound:
                return False
        return True

    def _divide(self, coords):
        return tuple(sum(r[j] * coords[j] for j in range(len(coords))) for r in self._inv_rows)

    def _build(self):
        d = self.field.degree
        zero = (0,) * d
        diffs = [x.coords for x in self.diffs]
        index = {zero: 0}
        carries = [zero]
        raw = []
        i = 0
        while i < len(carries):
            c = carries[i]
            i += 1
            row = []
            for dv in diffs:
                nxt = self._divide(tuple(a + b for a, b in zip(c, dv)))
                j = index.get(nxt)
                if j is None:
                    if not self.within_bounds(nxt):
                        row.append(-1)
                        continue
                    j = len(carries)
                    if j >= self.budget:
                        raise StateBudgetExceeded(f"carry machine exceeds {self.budget} states")
                    index[nxt] = j
                    carries.append(nxt)
                row.append(j)
            raw.append(row)
        # keep carries that can return to 0
        n = len(carries)
        pred = [[] for _ in range(n)]
        for p, row in enumerate(raw):
            for t in row:
                if t >= 0:
                    pred[t].append(p)
        alive = {0}
        todo = [0]
        while todo:
            q = todo.pop()
            for p in pred[q]:
                if p not in alive:
                    alive.add(p)
                    todo.append(p)
        # renumber breadth-first from 0 over alive carries
        order = [0]
        new = {0: 0}
        k = 0
        while k < len(order):
            q = order[k]
            k += 1
            for t in raw[q]:
                if t >= 0 and t in alive and t not in new:
                    new[t] = len(order)
                    order.append(t)
        self.carries = [carries[q] for q in order]
        self.index = {c: i for i, c in enumerate(self.carries)}
        self.trans = [[new.get(t, -1) if t >= 0 else -1 for t in raw[q]] for q in order]
        self.diff_index = {x.coords: j for j, x in enumerate(self.diffs)}

    def __len__(self) -> int:
        return len(self.carries)

    def element(self, i: int) -> FieldElement:
        return self.field.element(self.carries[i])


def _scalar(d: Digit) -> FieldElement:
    if d.scalar is None:
        raise AutomatonError(f"digit {d.name} has no scalar form")
    return d.scalar


def build_zero_automaton(digits: DigitAlphabet, field: NumberField,
                         base: Optional[FieldElement] = None, order: str = "lsb",
                         budget: int = DEFAULT_BUDGET, prune: bool = True) -> LabeledAutomaton:
    """Words over ``digits`` with value zero.

    ``order="lsb"`` (the library convention) weights digit i by base^i;
    ``order="msb"`` reads the most significant digit first.  The automaton is
    deterministic and trimmed; states are carries (remainders) in Z[beta].
    """
    scalars = [_scalar(d) for d in digits]
    if order == "lsb":
        graph = CarryGraph(field, scalars, base, budget, prune)
        succ = []
        for row in graph.trans:
            succ.append({j: (t,) for j, t in enumerate(row) if t >= 0})
        return LabeledAutomaton(digits, succ, [0], [0])
    if order == "msb":
        # remainder x -> base * x + d; the lsb machine on negated digits, reversed
        graph = CarryGraph(field, [-x for x in scalars], base, budget, prune)
        succ = [dict() for _ in range(len(graph))]
        for p, row in enumerate(graph.trans):
            for j, t in enumerate(row):
                if t >= 0:
                    succ[t].setdefault(j, []).append(p)
        return LabeledAutomaton(digits, succ, [0], [0])
    raise ValueError("order must be 'lsb' or 'msb'")


def difference_digits(first: DigitAlphabet, second: DigitAlphabet) -> list:
    out = []
    seen = set()
    for x in first:
        for y in second:
            d = _scalar(x) - _scalar(y)
            if d.coords not in seen:
                seen.add(d.coords)
                out.append(d)
    return out


def build_relations_automaton(first: DigitAlphabet, second: DigitAlphabet, field: NumberField,
                              base: Optional[FieldElement] = None,
                              budget: int = DEFAULT_BUDGET) -> LabeledAutomaton:
    """Pairs of equal-length words ``(u, v)`` with equal value, over pair digits."""
    graph = CarryGraph(field, difference_digits(first, second), base, budget)
    pairs = DigitAlphabet.product(first, second)
    m2 = len(second)
    dj = [[graph.diff_index[(_scalar(x) - _scalar(y)).coords] for y in second] for x in first]
    succ = []
    for row in graph.trans:
        r = {}
        for i in range(len(first)):
            for k in range(m2):
                t = row[dj[i][k]]
                if t >= 0:
                    r[i * m2 + k] = (t,)
        succ.append(r)
    return LabeledAutomaton(pairs, succ, [0], [0])


class ProjectedRelation:
    """Lazy subset construction for ``p1((top^* x L) ∩ L_rel)``.

    ``lower`` is an automaton over digits with scalar forms.  The result is a
    complete DFA over ``top`` whose states are sets of pairs (carry, state of
    ``lower``); the empty set is the sink.  A state is accepting when it holds
    a pair with carry 0 and a final state of ``lower``.
    """

    def __init__(self, top: DigitAlphabet, lower: LabeledAutomaton, field: NumberField,
                 base: Optional[FieldElement] = None, budget: int = DEFAULT_BUDGET):
        self.top = top
        self.lower = lower
        self.field = field
        self.budget = budget
        bottom = lower.alphabet
        self.graph = CarryGraph(field, difference_digits(top, bottom), base, budget)
        g = self.graph
        nq = lower.n_states
        self.nq = nq
        dj = [[g.diff_index[(_scalar(x) - _scalar(y)).coords] for y in bottom] for x in top]
        m = len(top)
        # nfa on encoded pairs carry * nq + q
        n_pairs = len(g) * nq
        nfa = [[None] * m for _ in range(n_pairs)]
        for c, crow in enumerate(g.trans):
            for q, qrow in enumerate(lower.succ):
                p = c * nq + q
                for xi in range(m):
                    out = []
                    dji = dj[xi]
                    for yi, tgts in qrow.items():
                        t = crow[dji[yi]]
                        if t >= 0:
                            for q2 in tgts:
                                out.append(t * nq + q2)
                    nfa[p][xi] = out
        accepting = {q for q in lower.final}
        acc = [False] * n_pairs
        for q in accepting:
            acc[q] = True
        # drop pairs that cannot reach acceptance
        pred = [[] for _ in range(n_pairs)]
        for p in range(n_pairs):
            for out in nfa[p]:
                for t in out:
                    pred[t].append(p)
        alive = set(q for q in accepting)
        todo = list(alive)
        while todo:
            p = todo.pop()
            for r in pred[p]:
                if r not in alive:
                    alive.add(r)
                    todo.append(r)
        self.nfa = [[tuple(sorted(t for t in out if t in alive)) for out in row]
                    if p in alive else [()] * m for p, row in enumerate(nfa)]
        self.accepting_pairs = frozenset(q for q in accepting if q in alive)
        self.initial = frozenset(q for q in lower.initial if q in alive)
        self.alive = alive
        self.m = m
        self._index: Dict[frozenset, int] = {}
        self.subsets: List[frozenset] = []
        self.rows: List[Optional[list]] = []
        self.start = self._intern(self.initial)

    def _intern(self, s: frozenset) -> int:
        i = self._index.get(s)
        if i is None:
            i = len(self.subsets)
            if i >= self.budget:
                raise StateBudgetExceeded(f"subset construction exceeds {self.budget} states")
            self._index[s] = i
            self.subsets.append(s)
            self.rows.append(None)
        return i

    def step_row(self, i: int) -> list:
        row = self.rows[i]
        if row is None:
            s = self.subsets[i]
            nfa = self.nfa
            row = []
            for xi in range(self.m):
                nxt = set()
                for p in s:
                    nxt.update(nfa[p][xi])
                row.append(self._intern(frozenset(nxt)))
            self.rows[i] = row
        return row

    def is_accepting(self, i: int) -> bool:
        return not self.accepting_pairs.isdisjoint(self.subsets[i])

    def explore(self) -> None:
        i = 0
        while i < len(self.subsets):
            self.step_row(i)
            i += 1

    def table(self) -> np.ndarray:
        self.explore()
        return np.array(self.rows, dtype=np.int64).reshape(len(self.rows), self.m)

    def final_mask(self) -> np.ndarray:
        return np.array([self.is_accepting(i) for i in range(len(self.subsets))], dtype=bool)

    def zero_reaches_accepting(self, i: int, zero: int) -> bool:
        seen = set()
        while i not in seen:
            if self.is_accepting(i):
                return True
            seen.add(i)
            i = self.step_row(i)[zero]
        return False

    def automaton(self) -> LabeledAutomaton:
        tab = self.table()
        succ = [{d: (int(t),) for d, t in enumerate(row)} for row in tab]
        return LabeledAutomaton(self.top, succ, [self.start],
                                [i for i in range(len(self.subsets)) if self.is_accepting(i)])


def _as_dfa(a: LabeledAutomaton) -> LabeledAutomaton:
    from .automata import determinize
    return a if a.deterministic else determinize(a)


def q_inclusion(first: LabeledAutomaton, second: LabeledAutomaton, field: NumberField,
                base: Optional[FieldElement] = None, budget: int = DEFAULT_BUDGET) -> bool:
    """Decide ``Q_first ⊆ Q_second`` where ``Q_L = {sum u_i base^i : u in L}``.

    Checks that every word of ``first`` admits a zero padding whose value is the
    value of a word of ``second·0*`` of the same length.
    """
    from .automata import concat_zero_star
    first = _with_zero(first, field)
    lower = concat_zero_star(_with_zero(second, field))
    proj = ProjectedRelation(first.alphabet, lower, field, base, budget)
    zero = first.alphabet.zero_index
    a = _as_dfa(first)
    seen = {(a.start, proj.start)}
    todo = [(a.start, proj.start)]
    zcache: Dict[int, bool] = {}
    while todo:
        p, s = todo.pop()
        if p in a.final:
            ok = zcache.get(s)
            if ok is None:
                ok = proj.zero_reaches_accepting(s, zero)
                zcache[s] = ok
            if not ok:
                return False
        row = proj.step_row(s)
        for d, tg in a.succ[p].items():
            nxt = (tg[0], row[d])
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return True


def _with_zero(a: LabeledAutomaton, field: NumberField) -> LabeledAutomaton:
    """Same language over an alphabet that contains a zero digit."""
    if a.alphabet.zero_index is not None:
        return a
    alpha = DigitAlphabet(list(a.alphabet) + [Digit("0", scalar=field.zero)])
    return LabeledAutomaton(alpha, a.succ, a.initial, a.final)
