"""Finite automata over digit alphabets.

An automaton stores, for every state, a mapping from digit index to the tuple
of target states.  Deterministic automata produced by :func:`determinize` and
:func:`minimize` are complete: a missing transition never occurs, the empty
subset plays the role of the sink.

Word convention: a word is a tuple of digit indices into the automaton's
alphabet, read left to right.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

import numpy as np

from .numberfield import FieldElement

__all__ = [
    "AutomatonError",
    "AlphabetMismatch",
    "Digit",
    "DigitAlphabet",
    "LabeledAutomaton",
    "determinize",
    "minimize",
    "intersect",
    "mirror",
    "map_labels",
    "concat_zero_star",
    "z_closure",
    "s_stabilizer",
    "is_empty",
    "enumerate_words",
    "state_count",
    "is_subset",
    "equivalent",
    "complete",
    "trim",
    "from_dfa_table",
]


class AutomatonError(ValueError):
    """Raised when an operation's preconditions do not hold."""


class AlphabetMismatch(AutomatonError):
    pass


# --------------------------------------------------------------------------
# digits


@dataclass(frozen=True, eq=False)
class Digit:
    """A digit with up to three coordinated representations.

    ``vector`` is an integer vector indexed by letters, ``scalar`` its image in
    Z[beta], ``parts`` a tuple of component digits for product alphabets.
    Equality goes through :attr:`key`, never through the display name.
    """

    name: str
    vector: Optional[tuple] = None
    scalar: Optional[FieldElement] = None
    parts: Optional[tuple] = None

    @property
    def key(self):
        if self.parts is not None:
            return ("parts",) + tuple(p.key for p in self.parts)
        if self.scalar is not None:
            return ("scalar", self.scalar.coords)
        if self.vector is not None:
            return ("vector", tuple(self.vector))
        return ("name", self.name)

    def __eq__(self, other) -> bool:
        return isinstance(other, Digit) and other.key == self.key

    def __hash__(self) -> int:
        return hash(self.key)

    def is_zero(self) -> bool:
        if self.parts is not None:
            return all(p.is_zero() for p in self.parts)
        if self.scalar is not None:
            return self.scalar.is_zero()
        if self.vector is not None:
            return not any(self.vector)
        return self.name == "0"

    def __repr__(self) -> str:
        return f"Digit({self.name})"


class DigitAlphabet:
    """Ordered finite set of pairwise distinct digits."""

    def __init__(self, digits: Iterable[Digit]):
        out = []
        index = {}
        for d in digits:
            if d.key in index:
                raise AutomatonError(f"duplicate digit {d.name}")
            index[d.key] = len(out)
            out.append(d)
        self.digits = tuple(out)
        self._index = index
        zeros = [i for i, d in enumerate(self.digits) if d.is_zero()]
        self.zero_index = zeros[0] if zeros else None

    @classmethod
    def from_scalars(cls, scalars: Iterable[FieldElement], unique: bool = True) -> "DigitAlphabet":
        seen = set()
        digits = []
        for s in scalars:
            if unique and s.coords in seen:
                continue
            seen.add(s.coords)
            digits.append(Digit(str(s), scalar=s))
        return cls(digits)

    @classmethod
    def from_names(cls, names: Iterable[str]) -> "DigitAlphabet":
        return cls(Digit(str(n)) for n in names)

    @classmethod
    def product(cls, first: "DigitAlphabet", second: "DigitAlphabet") -> "DigitAlphabet":
        return cls(Digit(f"({a.name},{b.name})", parts=(a, b))
                   for a in first.digits for b in second.digits)

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self) -> Iterator[Digit]:
        return iter(self.digits)

    def __getitem__(self, i: int) -> Digit:
        return self.digits[i]

    def __contains__(self, d: Digit) -> bool:
        return d.key in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, DigitAlphabet) and [d.key for d in self] == [d.key for d in other]

    def __hash__(self) -> int:
        return hash(tuple(d.key for d in self))

    def index(self, d: Digit) -> int:
        try:
            return self._index[d.key]
        except KeyError:
            raise AlphabetMismatch(f"digit {d.name} not in alphabet") from None

    def get_index(self, d: Digit) -> Optional[int]:
        return self._index.get(d.key)

    def issubset(self, other: "DigitAlphabet") -> bool:
        return all(d.key in other._index for d in self.digits)

    def names(self) -> list:
        return [d.name for d in self.digits]

    def __repr__(self) -> str:
        return "DigitAlphabet([" + ", ".join(self.names()) + "])"


# --------------------------------------------------------------------------
# automata


class LabeledAutomaton:
    """Finite automaton ``(alphabet, states, initial, final, transitions)``."""

    __slots__ = ("alphabet", "succ", "initial", "final", "_det")

    def __init__(self, alphabet: DigitAlphabet, succ: Sequence[Mapping[int, Iterable[int]]],
                 initial: Iterable[int], final: Iterable[int]):
        self.alphabet = alphabet
        norm = []
        n = len(succ)
        m = len(alphabet)
        for q, row in enumerate(succ):
            nrow = {}
            for d, tgts in row.items():
                if not 0 <= d < m:
                    raise AutomatonError(f"digit index {d} out of range at state {q}")
                tgts = tuple(sorted(set(tgts)))
                for t in tgts:
                    if not 0 <= t < n:
                        raise AutomatonError(f"target {t} out of range")
                if tgts:
                    nrow[d] = tgts
            norm.append(nrow)
        self.succ = norm
        self.initial = frozenset(initial)
        self.final = frozenset(final)
        for q in self.initial | self.final:
            if not 0 <= q < n:
                raise AutomatonError(f"state {q} out of range")
        self._det = None

    @property
    def n_states(self) -> int:
        return len(self.succ)

    @property
    def deterministic(self) -> bool:
        if self._det is None:
            self._det = len(self.initial) == 1 and all(
                len(t) == 1 for row in self.succ for t in row.values())
        return self._det

    def is_complete(self) -> bool:
        m = len(self.alphabet)
        return all(len(row) == m for row in self.succ)

    def transitions(self) -> Iterator[tuple]:
        for q, row in enumerate(self.succ):
            for d in sorted(row):
                for t in row[d]:
                    yield (q, d, t)

    def n_transitions(self) -> int:
        return sum(len(t) for row in self.succ for t in row.values())

    def accepts(self, word: Sequence[int]) -> bool:
        cur = set(self.initial)
        for d in word:
            nxt = set()
            for q in cur:
                nxt.update(self.succ[q].get(d, ()))
            if not nxt:
                return False
            cur = nxt
        return bool(cur & self.final)

    def accepts_digits(self, word: Sequence[Digit]) -> bool:
        idx = []
        for d in word:
            i = self.alphabet.get_index(d)
            if i is None:
                return False
            idx.append(i)
        return self.accepts(idx)

    def dfa_table(self) -> np.ndarray:
        """Transition table of a deterministic automaton; -1 marks a missing edge."""
        if not self.deterministic:
            raise AutomatonError("automaton is not deterministic")
        table = np.full((self.n_states, len(self.alphabet)), -1, dtype=np.int64)
        for q, row in enumerate(self.succ):
            for d, t in row.items():
                table[q, d] = t[0]
        return table

    @property
    def start(self) -> int:
        if len(self.initial) != 1:
            raise AutomatonError("automaton has no unique initial state")
        return next(iter(self.initial))

    def with_final(self, final: Iterable[int]) -> "LabeledAutomaton":
        return LabeledAutomaton(self.alphabet, self.succ, self.initial, final)

    def with_initial(self, initial: Iterable[int]) -> "LabeledAutomaton":
        return LabeledAutomaton(self.alphabet, self.succ, initial, self.final)

    def __repr__(self) -> str:
        kind = "DFA" if self.deterministic else "NFA"
        return (f"LabeledAutomaton({kind}, states={self.n_states}, digits={len(self.alphabet)}, "
                f"final={len(self.final)})")

    # ---- serialization
    def to_json_dict(self) -> dict:
        return {
            "states": self.n_states,
            "alphabet": [_digit_to_json(d) for d in self.alphabet],
            "transitions": [[q, d, t] for q, d, t in self.transitions()],
            "initial": sorted(self.initial),
            "final": sorted(self.final),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, data: dict, field=None) -> "LabeledAutomaton":
        alphabet = DigitAlphabet(_digit_from_json(d, field) for d in data["alphabet"])
        succ = [dict() for _ in range(int(data["states"]))]
        for q, d, t in data["transitions"]:
            succ[q].setdefault(d, []).append(t)
        return cls(alphabet, succ, data["initial"], data["final"])

    @classmethod
    def from_json(cls, text: str, field=None) -> "LabeledAutomaton":
        return cls.from_json_dict(json.loads(text), field)

    def to_dot(self, name: str = "A", state_labels: Optional[Sequence[str]] = None) -> str:
        lines = [f"digraph {name} {{", "  rankdir=LR;"]
        for q in range(self.n_states):
            shape = "doublecircle" if q in self.final else "circle"
            label = state_labels[q] if state_labels else str(q)
            lines.append(f'  {q} [shape={shape}, label="{_dot_escape(label)}"];')
        for i, q in enumerate(sorted(self.initial)):
            lines.append(f"  init{i} [shape=point];")
            lines.append(f"  init{i} -> {q};")
        for q, d, t in self.transitions():
            lines.append(f'  {q} -> {t} [label="{_dot_escape(self.alphabet[d].name)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def _digit_to_json(d: Digit) -> dict:
    out = {"name": d.name}
    if d.vector is not None:
        out["vector"] = list(d.vector)
    if d.scalar is not None:
        out["scalar"] = list(d.scalar.coords)
    if d.parts is not None:
        out["parts"] = [_digit_to_json(p) for p in d.parts]
    return out


def _digit_from_json(data: dict, field) -> Digit:
    scalar = None
    if "scalar" in data:
        if field is None:
            raise AutomatonError("a number field is needed to read scalar digits")
        scalar = field.element(data["scalar"])
    parts = None
    if "parts" in data:
        parts = tuple(_digit_from_json(p, field) for p in data["parts"])
    vector = tuple(data["vector"]) if "vector" in data else None
    return Digit(data["name"], vector=vector, scalar=scalar, parts=parts)


_DOT_NODE = re.compile(r'^\s*(\d+)\s*\[shape=(\w+)')
_DOT_EDGE = re.compile(r'^\s*(\d+)\s*->\s*(\d+)\s*\[label="((?:[^"\\]|\\.)*)"\]')
_DOT_INIT = re.compile(r'^\s*init\d+\s*->\s*(\d+)')


def from_dot(text: str, alphabet: DigitAlphabet) -> LabeledAutomaton:
    """Inverse of :meth:`LabeledAutomaton.to_dot`; edge labels are digit names."""
    by_name = {d.name: i for i, d in enumerate(alphabet)}
    n = 0
    final = []
    initial = []
    edges = []
    for line in text.splitlines():
        m = _DOT_NODE.match(line)
        if m:
            q = int(m.group(1))
            n = max(n, q + 1)
            if m.group(2) == "doublecircle":
                final.append(q)
            continue
        m = _DOT_INIT.match(line)
        if m:
            initial.append(int(m.group(1)))
            continue
        m = _DOT_EDGE.match(line)
        if m:
            label = m.group(3).replace('\\"', '"').replace("\\\\", "\\")
            if label not in by_name:
                raise AlphabetMismatch(f"unknown digit {label!r}")
            edges.append((int(m.group(1)), by_name[label], int(m.group(2))))
    succ = [dict() for _ in range(n)]
    for q, d, t in edges:
        succ[q].setdefault(d, []).append(t)
    return LabeledAutomaton(alphabet, succ, initial, final)


def from_dfa_table(alphabet: DigitAlphabet, table, start: int, final) -> LabeledAutomaton:
    succ = []
    for row in table:
        succ.append({d: (int(t),) for d, t in enumerate(row) if t >= 0})
    return LabeledAutomaton(alphabet, succ, [start], final)


# --------------------------------------------------------------------------
# core operations


def determinize(a: LabeledAutomaton) -> LabeledAutomaton:
    """Subset construction; the result is complete and its states are subsets
    numbered in breadth-first order with digit-order tie-breaking."""
    m = len(a.alphabet)
    succ_a = a.succ
    final_a = a.final
    start = frozenset(a.initial)
    index = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        cur = order[i]
        i += 1
        row = {}
        for d in range(m):
            nxt = set()
            for q in cur:
                t = succ_a[q].get(d)
                if t:
                    nxt.update(t)
            key = frozenset(nxt)
            j = index.get(key)
            if j is None:
                j = len(order)
                index[key] = j
                order.append(key)
            row[d] = (j,)
        rows.append(row)
    final = [j for j, s in enumerate(order) if s & final_a]
    return LabeledAutomaton(a.alphabet, rows, [0], final)


def complete(a: LabeledAutomaton) -> LabeledAutomaton:
    """Add a non-final sink if some transition is missing."""
    if a.is_complete():
        return a
    m = len(a.alphabet)
    sink = a.n_states
    succ = [dict(row) for row in a.succ]
    for row in succ:
        for d in range(m):
            row.setdefault(d, (sink,))
    succ.append({d: (sink,) for d in range(m)})
    return LabeledAutomaton(a.alphabet, succ, a.initial, a.final)


def _reachable(a: LabeledAutomaton) -> list:
    seen = set(a.initial)
    todo = list(a.initial)
    while todo:
        q = todo.pop()
        for tgts in a.succ[q].values():
            for t in tgts:
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
    return sorted(seen)


def _coreachable(a: LabeledAutomaton) -> set:
    pred = [[] for _ in range(a.n_states)]
    for q, row in enumerate(a.succ):
        for tgts in row.values():
            for t in tgts:
                pred[t].append(q)
    seen = set(a.final)
    todo = list(a.final)
    while todo:
        q = todo.pop()
        for p in pred[q]:
            if p not in seen:
                seen.add(p)
                todo.append(p)
    return seen


def _restrict(a: LabeledAutomaton, keep: Sequence[int]) -> LabeledAutomaton:
    new = {q: i for i, q in enumerate(keep)}
    succ = []
    for q in keep:
        row = {}
        for d, tgts in a.succ[q].items():
            t = [new[x] for x in tgts if x in new]
            if t:
                row[d] = t
        succ.append(row)
    return LabeledAutomaton(a.alphabet, succ, [new[q] for q in a.initial if q in new],
                            [new[q] for q in a.final if q in new])


def trim(a: LabeledAutomaton) -> LabeledAutomaton:
    """Keep only accessible and co-accessible states."""
    reach = _reachable(a)
    co = _coreachable(a)
    return _restrict(a, [q for q in reach if q in co])


def _moore_partition(table: np.ndarray, final: np.ndarray) -> np.ndarray:
    """Coarsest stable partition of a complete DFA, as class labels."""
    n = table.shape[0]
    cls = final.astype(np.int64)
    count = len(np.unique(cls))
    while True:
        sig = np.concatenate([cls[:, None], cls[table]], axis=1)
        _, new = np.unique(sig, axis=0, return_inverse=True)
        new = new.reshape(n)
        new_count = int(new.max()) + 1 if n else 0
        if new_count == count:
            return new
        cls, count = new, new_count


def minimize(a: LabeledAutomaton) -> LabeledAutomaton:
    """Minimal complete DFA with breadth-first canonical numbering.

    A non-final sink is kept whenever the language needs one; it is excluded
    from :func:`state_count`.
    """
    if not a.deterministic:
        raise AutomatonError("minimize requires a deterministic automaton")
    a = complete(a)
    a = _restrict(a, _reachable(a))
    table = a.dfa_table()
    final = np.zeros(a.n_states, dtype=bool)
    final[list(a.final)] = True
    cls = _moore_partition(table, final)
    m = len(a.alphabet)
    start_cls = int(cls[a.start])
    # one representative per class
    rep = {}
    for q in range(a.n_states):
        rep.setdefault(int(cls[q]), q)
    order = {start_cls: 0}
    queue = [start_cls]
    rows = []
    i = 0
    while i < len(queue):
        c = queue[i]
        i += 1
        q = rep[c]
        row = {}
        for d in range(m):
            tc = int(cls[table[q, d]])
            j = order.get(tc)
            if j is None:
                j = len(queue)
                order[tc] = j
                queue.append(tc)
            row[d] = (j,)
        rows.append(row)
    fin = [order[c] for c in order if final[rep[c]]]
    return LabeledAutomaton(a.alphabet, rows, [0], fin)


def state_count(a: LabeledAutomaton) -> int:
    """Number of accessible states from which a final state is reachable."""
    reach = _reachable(a)
    co = _coreachable(a)
    return sum(1 for q in reach if q in co)


def _align(a: LabeledAutomaton, b: LabeledAutomaton):
    """Alphabet for a binary operation and the map from b's digits into it."""
    if b.alphabet.issubset(a.alphabet):
        alpha = a.alphabet
    elif a.alphabet.issubset(b.alphabet):
        alpha = b.alphabet
    else:
        raise AlphabetMismatch("alphabets are not comparable")
    amap = [alpha.index(d) for d in a.alphabet]
    bmap = [alpha.index(d) for d in b.alphabet]
    return alpha, amap, bmap


def _relabel(a: LabeledAutomaton, alpha: DigitAlphabet, dmap: Sequence[int]) -> LabeledAutomaton:
    if a.alphabet is alpha or a.alphabet == alpha:
        return a
    succ = [{dmap[d]: t for d, t in row.items()} for row in a.succ]
    return LabeledAutomaton(alpha, succ, a.initial, a.final)


def intersect(a: LabeledAutomaton, b: LabeledAutomaton) -> LabeledAutomaton:
    """Accessible part of the product automaton."""
    alpha, amap, bmap = _align(a, b)
    a = _relabel(a, alpha, amap)
    b = _relabel(b, alpha, bmap)
    index = {}
    order = []
    for p in sorted(a.initial):
        for q in sorted(b.initial):
            index[(p, q)] = len(order)
            order.append((p, q))
    rows = []
    i = 0
    while i < len(order):
        p, q = order[i]
        i += 1
        row = {}
        sa, sb = a.succ[p], b.succ[q]
        for d, ta in sa.items():
            tb = sb.get(d)
            if not tb:
                continue
            tgt = []
            for x in ta:
                for y in tb:
                    j = index.get((x, y))
                    if j is None:
                        j = len(order)
                        index[(x, y)] = j
                        order.append((x, y))
                    tgt.append(j)
            row[d] = tgt
        rows.append(row)
    final = [j for j, (p, q) in enumerate(order) if p in a.final and q in b.final]
    return LabeledAutomaton(alpha, rows, range(len(a.initial) * len(b.initial)), final)


def union(a: LabeledAutomaton, b: LabeledAutomaton) -> LabeledAutomaton:
    alpha, amap, bmap = _align(a, b)
    a = _relabel(a, alpha, amap)
    b = _relabel(b, alpha, bmap)
    off = a.n_states
    succ = [dict(r) for r in a.succ] + [{d: [t + off for t in ts] for d, ts in r.items()} for r in b.succ]
    return LabeledAutomaton(alpha, succ, list(a.initial) + [q + off for q in b.initial],
                            list(a.final) + [q + off for q in b.final])


def complement(a: LabeledAutomaton) -> LabeledAutomaton:
    d = complete(determinize(a) if not a.deterministic else a)
    return d.with_final(set(range(d.n_states)) - set(d.final))


def mirror(a: LabeledAutomaton) -> LabeledAutomaton:
    """Reverse every transition and swap initial and final states."""
    succ = [dict() for _ in range(a.n_states)]
    for q, d, t in a.transitions():
        succ[t].setdefault(d, []).append(q)
    return LabeledAutomaton(a.alphabet, succ, a.final, a.initial)


def map_labels(a: LabeledAutomaton, mapping: Mapping[int, Optional[Digit]] | Callable,
               target: DigitAlphabet) -> LabeledAutomaton:
    """Relabel through a partial digit map; undefined images delete the transition."""
    get = mapping if callable(mapping) else mapping.get
    dmap = {}
    for i, d in enumerate(a.alphabet):
        img = get(i)
        if img is not None:
            dmap[i] = target.index(img) if isinstance(img, Digit) else int(img)
    succ = []
    for row in a.succ:
        nrow = {}
        for d, tgts in row.items():
            if d in dmap:
                nrow.setdefault(dmap[d], []).extend(tgts)
        succ.append(nrow)
    return LabeledAutomaton(target, succ, a.initial, a.final)


def _zero(a: LabeledAutomaton) -> int:
    z = a.alphabet.zero_index
    if z is None:
        raise AutomatonError("alphabet has no zero digit")
    return z


def concat_zero_star(a: LabeledAutomaton) -> LabeledAutomaton:
    """Language ``{u 0^n : u in L, n >= 0}``."""
    z = _zero(a)
    pad = a.n_states
    succ = [dict(r) for r in a.succ] + [{z: (pad,)}]
    for q in a.final:
        succ[q] = dict(succ[q])
        succ[q][z] = tuple(succ[q].get(z, ())) + (pad,)
    return LabeledAutomaton(a.alphabet, succ, a.initial, set(a.final) | {pad})


def _require_complete_dfa(a: LabeledAutomaton, op: str):
    if not a.deterministic or not a.is_complete():
        raise AutomatonError(f"{op} requires a complete deterministic automaton")


def z_final_states(zero_next: Sequence[int], final: Iterable[int]) -> set:
    """States whose zero-path reaches ``final`` (``zero_next`` is the 0-transition map)."""
    n = len(zero_next)
    pred = [[] for _ in range(n)]
    for q, t in enumerate(zero_next):
        pred[t].append(q)
    seen = set(final)
    todo = list(seen)
    while todo:
        q = todo.pop()
        for p in pred[q]:
            if p not in seen:
                seen.add(p)
                todo.append(p)
    return seen


def s_final_states(succ_lists: Sequence[Iterable[int]], final: Iterable[int]) -> set:
    """States from which every reachable state is final."""
    n = len(succ_lists)
    final = set(final)
    pred = [[] for _ in range(n)]
    for q, ts in enumerate(succ_lists):
        for t in ts:
            pred[t].append(q)
    bad = set(q for q in range(n) if q not in final)
    todo = list(bad)
    while todo:
        q = todo.pop()
        for p in pred[q]:
            if p not in bad:
                bad.add(p)
                todo.append(p)
    return set(range(n)) - bad


def z_closure(a: LabeledAutomaton) -> LabeledAutomaton:
    """``Z(L) = {u : u 0^n in L for some n}`` on a complete DFA."""
    _require_complete_dfa(a, "z_closure")
    z = _zero(a)
    zero_next = [row[z][0] for row in a.succ]
    return a.with_final(z_final_states(zero_next, a.final))


def s_stabilizer(a: LabeledAutomaton) -> LabeledAutomaton:
    """``S(L) = {u : u v in L for every word v}`` on a complete DFA."""
    _require_complete_dfa(a, "s_stabilizer")
    succ_lists = [[t[0] for t in row.values()] for row in a.succ]
    return a.with_final(s_final_states(succ_lists, a.final))


def is_empty(a: LabeledAutomaton) -> bool:
    return not (set(_reachable(a)) & a.final)


def shortest_word(a: LabeledAutomaton) -> Optional[tuple]:
    """A shortest accepted word, least in digit order among those."""
    # breadth-first over subsets keeps digit order minimality
    det = determinize(a) if not a.deterministic else a
    parent = {det.start: None}
    queue = deque([det.start])
    while queue:
        q = queue.popleft()
        if q in det.final:
            word = []
            while parent[q] is not None:
                p, d = parent[q]
                word.append(d)
                q = p
            return tuple(reversed(word))
        for d in sorted(det.succ[q]):
            t = det.succ[q][d][0]
            if t not in parent:
                parent[t] = (q, d)
                queue.append(t)
    return None


def enumerate_words(a: LabeledAutomaton, n: int) -> list:
    """Accepted words of length <= n, shortest first then in digit order."""
    det = a if a.deterministic else determinize(a)
    co = _coreachable(det)
    out = []
    layer = [((), det.start)] if det.start in co else []
    for length in range(n + 1):
        for w, q in layer:
            if q in det.final:
                out.append(w)
        if length == n:
            break
        nxt = []
        for w, q in layer:
            row = det.succ[q]
            for d in sorted(row):
                t = row[d][0]
                if t in co:
                    nxt.append((w + (d,), t))
        layer = nxt
    return out


def is_subset(a: LabeledAutomaton, b: LabeledAutomaton) -> bool:
    """Decide L(a) ⊆ L(b) by searching the product of a with the complement of b."""
    alpha, amap, bmap = _align(a, b)
    a = _relabel(a, alpha, amap)
    b = _relabel(b, alpha, bmap)
    db = complete(b if b.deterministic else determinize(b))
    seen = set()
    todo = []
    for p in a.initial:
        seen.add((p, db.start))
        todo.append((p, db.start))
    while todo:
        p, q = todo.pop()
        if p in a.final and q not in db.final:
            return False
        for d, ta in a.succ[p].items():
            y = db.succ[q][d][0]
            for x in ta:
                if (x, y) not in seen:
                    seen.add((x, y))
                    todo.append((x, y))
    return True


def equivalent(a: LabeledAutomaton, b: LabeledAutomaton) -> bool:
    return is_subset(a, b) and is_subset(b, a)


def isomorphic(a: LabeledAutomaton, b: LabeledAutomaton) -> bool:
    """Equality of canonically numbered minimal DFAs."""
    ma = minimize(a if a.deterministic else determinize(a))
    mb = minimize(b if b.deterministic else determinize(b))
    return (ma.alphabet == mb.alphabet and ma.succ == mb.succ
            and ma.final == mb.final and ma.initial == mb.initial)


def universal(alphabet: DigitAlphabet) -> LabeledAutomaton:
    return LabeledAutomaton(alphabet, [{d: (0,) for d in range(len(alphabet))}], [0], [0])


def empty_language(alphabet: DigitAlphabet) -> LabeledAutomaton:
    return LabeledAutomaton(alphabet, [{}], [0], [])


def from_words(alphabet: DigitAlphabet, words: Iterable[Sequence[int]]) -> LabeledAutomaton:
    """Trie automaton of a finite language."""
    succ = [dict()]
    final = set()
    for w in words:
        q = 0
        for d in w:
            t = succ[q].get(d)
            if t is None:
                succ.append(dict())
                succ[q][d] = (len(succ) - 1,)
                q = len(succ) - 1
            else:
                q = t[0]
        final.add(q)
    return LabeledAutomaton(alphabet, succ, [0], final)
