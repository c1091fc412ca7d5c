"""Interior languages and the pure discreteness decision.

For a least-significant-first language ``L`` over digits in Z[beta] and an
extended digit set ``Σ'``, the interior language is

    L_int = Z(S(Z(p1((Σ'^* x L0^*) ∩ L_rel))))

where ``L_rel`` relates equal-length words of equal value, ``p1`` keeps the
first component, ``Z`` allows zero padding and ``S`` keeps words all of whose
extensions stay in the language.  ``L ∩ L_int`` is the set of words of L whose
value is an interior point of the value set of L.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .automata import (Digit, DigitAlphabet, LabeledAutomaton, concat_zero_star,
                       determinize, from_dfa_table, intersect, is_empty, minimize,
                       s_final_states, shortest_word, state_count, z_final_states,
                       _moore_partition)
from .numberfield import FieldElement, NumberField
from .relations import DEFAULT_BUDGET, ProjectedRelation, StateBudgetExceeded
from .substitution import (ClassificationReport, PsiMap, Substitution, classify,
                           mirrored_prefix_language, psi)

__all__ = [
    "PURE_DISCRETE",
    "NOT_DETECTED",
    "PRECONDITION_FAILED",
    "SubstitutionContext",
    "InteriorReport",
    "default_extended_alphabet",
    "compute_L_int",
    "interior_language",
    "decide_pure_discreteness",
]

PURE_DISCRETE = "PURE_DISCRETE"
NOT_DETECTED = "NOT_DETECTED"
PRECONDITION_FAILED = "PRECONDITION_FAILED"

ADEQUACY_NOTE = "conditional on the extended digit set having 0 as an interior point"


class SubstitutionContext:
    """Everything needed to run the pipeline on a classified substitution.

    The substitution actually used is ``s^k`` with ``k`` the fixed point power;
    values live in Z[beta] for the dominant root beta of ``s`` and the base is
    ``beta^k``.
    """

    def __init__(self, s: Substitution, report: Optional[ClassificationReport] = None,
                 power: Optional[int] = None):
        self.substitution = s
        self.report = classify(s) if report is None else report
        if not self.report.ok:
            raise ValueError("; ".join(self.report.reasons))
        self.psi: PsiMap = psi(s)
        self.field: NumberField = self.psi.field
        # power=1 on a substitution needing a power mixes the periodic points' lines
        self.power = self.report.power_for_fixed_point if power is None else power
        self.seed = self.report.seed_letter
        self.working = s.power(self.power) if self.power > 1 else s
        self.base: FieldElement = self.field.gen ** self.power

    def language(self, target: str) -> LabeledAutomaton:
        """Least-significant-first language whose values are psi(D_{u,target})."""
        return mirrored_prefix_language(self.working, self.seed, target, self.psi)

    def vector_digit(self, v: Sequence[int]) -> Digit:
        from .substitution import _vec_name
        v = tuple(int(x) for x in v)
        return Digit(_vec_name(v, self.substitution.alphabet), vector=v, scalar=self.psi(v))

    def digit_alphabet(self) -> DigitAlphabet:
        return self.language(self.seed).alphabet


def _expanding_sign(x: FieldElement) -> int:
    if x.is_zero():
        return 0
    f = x.field
    res = f.decide(lambda bits: _sign_pred(f.evaluate(x, f.expanding_index, bits)))
    if res is None:
        raise ValueError("sign of a nonzero element undecided")
    return 1 if res else -1


def _sign_pred(e):
    lo, hi = e.re_bounds()
    if lo > 0:
        return True
    if hi < 0:
        return False
    return None


def default_extended_alphabet(ctx: SubstitutionContext, radius: int = 1,
                              positive_only: bool = True) -> DigitAlphabet:
    """``Σ_s + S_r`` with S_r the combinations of differences e_a - e_b of l1 size <= r.

    With ``positive_only`` the nonzero digits whose value under the expanding
    embedding is negative are dropped: such a digit makes the stabilizer step
    empty, whatever the language.
    """
    d = ctx.substitution.size
    diffs = [tuple((1 if i == a else 0) - (1 if i == b else 0) for i in range(d))
             for a in range(d) for b in range(d) if a != b]
    shifts = {(0,) * d}
    frontier = {(0,) * d}
    for _ in range(radius):
        nxt = set()
        for v in frontier:
            for e in diffs:
                nxt.add(tuple(x + y for x, y in zip(v, e)))
        nxt -= shifts
        shifts |= nxt
        frontier = nxt
    base_digits = ctx.digit_alphabet()
    out = []
    seen = set()
    for dig in base_digits:
        for sh in sorted(shifts):
            v = tuple(x + y for x, y in zip(dig.vector, sh))
            if v in seen:
                continue
            seen.add(v)
            digit = ctx.vector_digit(v)
            if positive_only and _expanding_sign(digit.scalar) < 0:
                continue
            out.append(digit)
    # Σ_s first, in its own order, so that Σ_s ⊆ Σ' keeps stable indices
    first = [dg for dg in base_digits]
    rest = [dg for dg in out if dg not in set(first)]
    rest.sort(key=lambda dg: dg.vector)
    return DigitAlphabet(first + rest)


def _pipeline_table(proj: ProjectedRelation, zero: int, timings: dict) -> tuple:
    t0 = time.perf_counter()
    table = proj.table()
    final = proj.final_mask()
    timings["projection_states"] = int(table.shape[0])
    timings["projection_s"] = time.perf_counter() - t0
    table, final, start = _minimize_table(table, final, proj.start)
    # Z
    final = _z_mask(table, final, zero)
    table, final, start = _minimize_table(table, final, start)
    # S
    final = _s_mask(table, final)
    table, final, start = _minimize_table(table, final, start)
    # Z
    final = _z_mask(table, final, zero)
    table, final, start = _minimize_table(table, final, start)
    timings["closure_s"] = time.perf_counter() - t0 - timings["projection_s"]
    return table, final, start


def _z_mask(table: np.ndarray, final: np.ndarray, zero: int) -> np.ndarray:
    res = z_final_states(table[:, zero].tolist(), np.flatnonzero(final).tolist())
    out = np.zeros(len(final), dtype=bool)
    out[list(res)] = True
    return out


def _s_mask(table: np.ndarray, final: np.ndarray) -> np.ndarray:
    res = s_final_states(table.tolist(), np.flatnonzero(final).tolist())
    out = np.zeros(len(final), dtype=bool)
    out[list(res)] = True
    return out


def _minimize_table(table: np.ndarray, final: np.ndarray, start: int) -> tuple:
    """Minimal complete DFA (reachable part) as a table, renumbered breadth-first."""
    # reachable states first
    n, m = table.shape
    seen = np.zeros(n, dtype=bool)
    seen[start] = True
    order = [start]
    i = 0
    while i < len(order):
        for t in table[order[i]]:
            if not seen[t]:
                seen[t] = True
                order.append(int(t))
        i += 1
    order_arr = np.array(order, dtype=np.int64)
    remap = np.full(n, -1, dtype=np.int64)
    remap[order_arr] = np.arange(len(order))
    table = remap[table[order_arr]]
    final = final[order_arr]
    cls = _moore_partition(table, final)
    # breadth-first canonical numbering of classes
    k = int(cls.max()) + 1
    rep = np.full(k, -1, dtype=np.int64)
    for q in range(len(cls) - 1, -1, -1):
        rep[cls[q]] = q
    new = {int(cls[0]): 0}
    queue = [int(cls[0])]
    rows = []
    j = 0
    while j < len(queue):
        c = queue[j]
        j += 1
        row = []
        for t in table[rep[c]]:
            tc = int(cls[t])
            x = new.get(tc)
            if x is None:
                x = len(queue)
                new[tc] = x
                queue.append(tc)
            row.append(x)
        rows.append(row)
    fin = np.zeros(len(queue), dtype=bool)
    for c, x in new.items():
        fin[x] = bool(final[rep[c]])
    return np.array(rows, dtype=np.int64).reshape(len(queue), m), fin, 0


def compute_L_int(language: LabeledAutomaton, extended: DigitAlphabet, field: NumberField,
                  base: Optional[FieldElement] = None, budget: int = DEFAULT_BUDGET,
                  timings: Optional[dict] = None) -> LabeledAutomaton:
    """Minimal complete DFA over ``extended`` for L_int of ``language``."""
    timings = {} if timings is None else timings
    zero = extended.zero_index
    if zero is None:
        raise ValueError("extended digit set must contain 0")
    lower = concat_zero_star(language)
    proj = ProjectedRelation(extended, lower, field, base, budget)
    timings["carries"] = len(proj.graph)
    table, final, start = _pipeline_table(proj, zero, timings)
    return from_dfa_table(extended, table, start, np.flatnonzero(final).tolist())


def extend_alphabet(language: LabeledAutomaton, extended: DigitAlphabet) -> DigitAlphabet:
    missing = [d for d in language.alphabet if d not in extended]
    return DigitAlphabet(list(extended) + missing) if missing else extended


def interior_of_language(language: LabeledAutomaton, extended: DigitAlphabet,
                         field: NumberField, base: Optional[FieldElement] = None,
                         budget: int = DEFAULT_BUDGET,
                         timings: Optional[dict] = None) -> LabeledAutomaton:
    """Minimal DFA of ``L ∩ L_int`` over the extended alphabet."""
    extended = extend_alphabet(language, extended)
    lint = compute_L_int(language, extended, field, base, budget, timings)
    prod = intersect(lint, language)
    return minimize(determinize(prod))


def interior_language(ctx: SubstitutionContext, target: str, extended: Optional[DigitAlphabet] = None,
                      radius: int = 1, budget: int = DEFAULT_BUDGET,
                      timings: Optional[dict] = None) -> LabeledAutomaton:
    if extended is None:
        extended = default_extended_alphabet(ctx, radius)
    return interior_of_language(ctx.language(target), extended, ctx.field, ctx.base, budget, timings)


@dataclass
class InteriorReport:
    status: str
    substitution: str
    reasons: List[str] = field(default_factory=list)
    classification: Optional[dict] = None
    power: int = 1
    seed_letter: str = ""
    letters: List[str] = field(default_factory=list)
    state_counts: dict = field(default_factory=dict)
    witness: Optional[List[str]] = None
    witness_letter: Optional[str] = None
    extended_alphabet: List[str] = field(default_factory=list)
    radius: Optional[int] = None
    adequacy_assumption: str = ADEQUACY_NOTE
    letters_consistent: Optional[bool] = None
    timings: dict = field(default_factory=dict)

    def to_dict(self, meta: bool = True) -> dict:
        out = {
            "schema": "pisot-disc/interior-report/1",
            "status": self.status,
            "substitution": self.substitution,
            "reasons": list(self.reasons),
            "classification": self.classification,
            "power": self.power,
            "seed_letter": self.seed_letter,
            "letters": list(self.letters),
            "state_counts": dict(self.state_counts),
            "witness": self.witness,
            "witness_letter": self.witness_letter,
            "extended_alphabet": list(self.extended_alphabet),
            "radius": self.radius,
            "adequacy_assumption": self.adequacy_assumption,
            "letters_consistent": self.letters_consistent,
        }
        if meta:
            out["timings"] = {k: (round(v, 4) if isinstance(v, float) else v)
                              for k, v in self.timings.items()}
        return out


def decide_pure_discreteness(s: Substitution, radii: Sequence[int] = (0, 1, 2),
                             all_letters: bool = False, budget: int = DEFAULT_BUDGET,
                             automata_out: Optional[dict] = None) -> InteriorReport:
    """Run the interior pipeline on the first letter (or every letter).

    The radius ladder stops at the first radius giving a non-empty interior.
    ``automata_out``, when given, receives the interior automata per letter.
    """
    rep = classify(s)
    report = InteriorReport(PRECONDITION_FAILED, str(s), classification=rep.to_dict(),
                            power=rep.power_for_fixed_point, seed_letter=rep.seed_letter)
    if not rep.ok:
        report.reasons = rep.reasons
        return report
    t0 = time.perf_counter()
    ctx = SubstitutionContext(s, rep)
    letters = list(s.alphabet) if all_letters else [s.alphabet[0]]
    report.letters = letters
    status = NOT_DETECTED
    for r in radii:
        extended = default_extended_alphabet(ctx, r)
        report.radius = r
        report.extended_alphabet = [d.name for d in extended]
        counts = {}
        nonempty = {}
        found = None
        for b in letters:
            tm = {}
            aut = interior_language(ctx, b, extended, budget=budget, timings=tm)
            report.timings.update({f"{b}.{k}": v for k, v in tm.items()})
            counts[b] = state_count(aut)
            nonempty[b] = not is_empty(aut)
            if automata_out is not None:
                automata_out[b] = aut
            if nonempty[b] and found is None:
                w = shortest_word(aut)
                assert w is not None and aut.accepts(w)
                found = (b, [aut.alphabet[i].name for i in w])
        report.state_counts = counts
        report.letters_consistent = len(set(nonempty.values())) == 1
        if found is not None:
            status = PURE_DISCRETE
            report.witness_letter, report.witness = found
            break
    report.status = status
    if status == NOT_DETECTED:
        report.reasons = [f"interior language empty for radii {list(radii)}; "
                          "retry with a larger radius"]
    report.timings["total_s"] = time.perf_counter() - t0
    return report
