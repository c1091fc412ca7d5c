"""Floating-point geometry: Rauzy fractal clouds, overlap sampling, the
domain exchange, cut-and-project words and image output.

Nothing here feeds a verdict; exact decisions live in the automata modules.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .automata import LabeledAutomaton
from .substitution import (
    DEFAULT_POINT_BUDGET,
    BudgetExceeded,
    Substitution,
    classify,
    fixed_point_power,
    prefix_automaton,
    psi,
)

__all__ = [
    "DegenerateLine",
    "PointCloud",
    "project_cloud",
    "cloud_radius_bounds",
    "coordinate_norms",
    "digit_levels",
    "sample_disjointness",
    "exchange_orbit",
    "cut_and_project_word",
    "letter_discrepancy",
    "render",
]

PALETTE = [(31, 119, 180), (255, 127, 14), (44, 160, 44), (148, 103, 189),
           (140, 86, 75), (227, 119, 194), (127, 127, 127), (188, 189, 34)]
HIGHLIGHT = (214, 39, 40)
CANVAS = 1000
MARGIN = 0.05


class DegenerateLine(ValueError):
    """The cut-and-project line crosses two hyperplanes at the same time."""


@dataclass
class PointCloud:
    """Projected discrete-line points, one per prefix position.

    ``points`` has one real column per real contracting embedding and two
    (real, imaginary) per complex pair.  ``letter_vectors[a]`` is the projection
    of ``e_a`` in the same coordinates, so translates can be formed without the
    substitution.
    """

    alphabet: tuple
    points: np.ndarray
    letters: np.ndarray
    interior: np.ndarray
    depth: int
    letter_vectors: np.ndarray
    has_interior: bool = False

    def __len__(self) -> int:
        return len(self.points)

    def bbox(self) -> tuple:
        return self.points.min(axis=0), self.points.max(axis=0)


def _embedding_columns(s: Substitution):
    pm = psi(s)
    f = pm.field
    cols = []
    for idx in f.contracting_representatives:
        vals = [complex(f.float_value(v, idx)) for v in pm.values]
        if f.embedding_kinds[idx] == "real":
            cols.append([v.real for v in vals])
        else:
            cols.append([v.real for v in vals])
            cols.append([v.imag for v in vals])
    return pm, np.array(cols, dtype=float).T


def _require_pisot(s: Substitution):
    rep = classify(s)
    if not rep.ok:
        raise ValueError("; ".join(rep.reasons))
    return rep


def project_cloud(s: Substitution, n: int,
                  interior: Optional[Dict[str, LabeledAutomaton]] = None,
                  budget: int = DEFAULT_POINT_BUDGET) -> PointCloud:
    """Cloud of ``s^{kn}(seed)``; ``interior`` maps target letters to LSB-first interior automata."""
    _require_pisot(s)
    k, seed = fixed_point_power(s)
    word = s.iterate(seed, k * n, budget)
    _, vecs = _embedding_columns(s)
    tags = np.fromiter((s.index[c] for c in word), dtype=np.int64, count=len(word))
    steps = vecs[tags]
    pts = np.zeros_like(steps)
    np.cumsum(steps[:-1], axis=0, out=pts[1:])
    flags = np.zeros(len(word), dtype=bool)
    if interior:
        digits, alphabet = digit_levels(s, n, budget)
        for b, aut in interior.items():
            sel = tags == s.index[b]
            flags[sel] = _run_dfa(aut, alphabet, digits[sel])
    return PointCloud(tuple(s.alphabet), pts, tags, flags, n, vecs, bool(interior))


def digit_levels(s: Substitution, n: int, budget: int = DEFAULT_POINT_BUDGET) -> tuple:
    """Digit indices (LSB first, shape ``(len, n)``) of every prefix position of ``s^{kn}(seed)``.

    Digits index the prefix automaton alphabet of ``s^k``, which is returned too.
    """
    k, seed = fixed_point_power(s)
    w = s.power(k) if k > 1 else s
    pa = prefix_automaton(w, psi(s))
    ids = {}
    for ci, img in enumerate(w.images):
        for pos in range(len(img)):
            ids[(ci, pos)] = pa.alphabet.index(_digit_for(pa, w.ab(img[:pos])))
    cur = np.array([w.index[seed]], dtype=np.int64)
    digit_cols = []
    parents = []
    lengths = np.array([len(img) for img in w.images], dtype=np.int64)
    table = [np.array([ids[(ci, p)] for p in range(len(img))], dtype=np.int64)
             for ci, img in enumerate(w.images)]
    flat_letters = [np.array([w.index[c] for c in img], dtype=np.int64) for img in w.images]
    for _ in range(n):
        reps = lengths[cur]
        total = int(reps.sum())
        if total > budget:
            raise BudgetExceeded(f"word length exceeds budget {budget}")
        parent = np.repeat(np.arange(len(cur)), reps)
        starts = np.cumsum(reps) - reps
        offset = np.arange(total) - np.repeat(starts, reps)
        src = cur[parent]
        dig = np.empty(total, dtype=np.int64)
        nxt = np.empty(total, dtype=np.int64)
        for ci in range(w.size):
            sel = src == ci
            dig[sel] = table[ci][offset[sel]]
            nxt[sel] = flat_letters[ci][offset[sel]]
        parents.append(parent)
        digit_cols.append(dig)
        cur = nxt
    out = np.empty((len(cur), n), dtype=np.int64)
    pos = np.arange(len(cur))
    for level in range(n - 1, -1, -1):
        out[:, n - 1 - level] = digit_cols[level][pos]
        pos = parents[level][pos]
    return out, pa.alphabet


def _digit_for(pa: LabeledAutomaton, vector: tuple):
    for d in pa.alphabet:
        if d.vector == vector:
            return d
    raise KeyError(vector)


def _run_dfa(aut: LabeledAutomaton, alphabet, words: np.ndarray) -> np.ndarray:
    table = aut.dfa_table()
    idx = [aut.alphabet.get_index(d) for d in alphabet]
    dmap = np.array([-1 if i is None else i for i in idx], dtype=np.int64)
    state = np.full(len(words), aut.start, dtype=np.int64)
    alive = np.ones(len(words), dtype=bool)
    for col in range(words.shape[1]):
        d = dmap[words[:, col]]
        alive &= d >= 0
        nxt = np.where(alive, table[state, np.maximum(d, 0)], -1)
        alive &= nxt >= 0
        state = np.where(alive, nxt, 0)
    final = np.zeros(aut.n_states, dtype=bool)
    final[list(aut.final)] = True
    return alive & final[state]


def cloud_radius_bounds(s: Substitution) -> List[float]:
    """Per contracting embedding, a certified bound on the modulus of every cloud point.

    Each point is a sum of digit images times powers of the contracting
    conjugate of ``beta^k``; the bound is the geometric series of the largest
    digit modulus.
    """
    _require_pisot(s)
    k, _ = fixed_point_power(s)
    w = s.power(k) if k > 1 else s
    pm = psi(s)
    f = pm.field
    digits = [pm(d.vector) for d in prefix_automaton(w).alphabet]
    base = f.gen ** k
    out = []
    for idx in f.contracting_representatives:
        top = max(f.evaluate(x, idx).abs_upper() for x in digits)
        rho = f.evaluate(base, idx).abs_upper()
        if rho >= 1:
            raise ValueError("embedding is not contracting at working precision")
        out.append(math.nextafter(float(top / (1 - rho)), math.inf))
    return out


def coordinate_norms(cloud: PointCloud, s: Substitution) -> np.ndarray:
    f = psi(s).field
    cols = []
    c = 0
    for idx in f.contracting_representatives:
        if f.embedding_kinds[idx] == "real":
            cols.append(np.abs(cloud.points[:, c]))
            c += 1
        else:
            cols.append(np.hypot(cloud.points[:, c], cloud.points[:, c + 1]))
            c += 2
    return np.stack(cols, axis=1)


def _close_fraction(a: np.ndarray, b: np.ndarray, eps: float) -> tuple:
    """(pairs within eps, fraction of points of ``a`` with a partner in ``b``)."""
    if len(a) == 0 or len(b) == 0:
        return 0, 0.0
    tree = cKDTree(b)
    hits = tree.query_ball_point(a, eps)
    pairs = sum(len(h) for h in hits)
    touched = sum(1 for h in hits if h)
    return pairs, touched / len(a)


def sample_disjointness(cloud: PointCloud, eps: float = 1e-3, window: int = 1) -> dict:
    """Heuristic overlap statistics; never a verdict.

    Reports, for the letter pieces, for the pieces translated by their letter
    vector, and for nonzero translates by combinations of ``e_a - e_last`` with
    coefficients in ``[-window, window]``: the fraction of cross pairs within
    ``eps`` and the fraction of points having such a partner.
    """
    d = len(cloud.alphabet)
    pts = cloud.points
    out = {"heuristic": True, "eps": eps, "points": len(cloud)}

    def pieces(shift: bool) -> dict:
        pairs = total = 0
        touched = 0
        for a in range(d):
            pa = pts[cloud.letters == a] + (cloud.letter_vectors[a] if shift else 0)
            for b in range(a + 1, d):
                pb = pts[cloud.letters == b] + (cloud.letter_vectors[b] if shift else 0)
                p, _ = _close_fraction(pa, pb, eps)
                pairs += p
                total += len(pa) * len(pb)
            rest = np.concatenate([pts[cloud.letters == b] + (cloud.letter_vectors[b] if shift else 0)
                                   for b in range(d) if b != a] or [np.empty((0, pts.shape[1]))])
            touched += _close_fraction(pa, rest, eps)[1] * len(pa)
        return {"pair_fraction": pairs / total if total else 0.0,
                "point_fraction": touched / len(pts) if len(pts) else 0.0}

    out["pieces"] = pieces(False)
    out["exchanged_pieces"] = pieces(True)
    gens = cloud.letter_vectors[:-1] - cloud.letter_vectors[-1]
    pairs = total = 0
    worst = 0.0
    for coeffs in product(range(-window, window + 1), repeat=d - 1):
        if not any(coeffs):
            continue
        shift = np.asarray(coeffs, dtype=float) @ gens
        p, frac = _close_fraction(pts, pts + shift, eps)
        pairs += p
        total += len(pts) ** 2
        worst = max(worst, frac)
    out["translates"] = {"pair_fraction": pairs / total if total else 0.0,
                         "point_fraction": worst}
    out["max_pair_fraction"] = max(out["pieces"]["pair_fraction"],
                                   out["exchanged_pieces"]["pair_fraction"],
                                   out["translates"]["pair_fraction"])
    out["max_point_fraction"] = max(out["pieces"]["point_fraction"],
                                    out["exchanged_pieces"]["point_fraction"],
                                    out["translates"]["point_fraction"])
    return out


def exchange_orbit(s: Substitution, n: int) -> tuple:
    """``(letters, points)`` of the exchange ``x -> x + e_a`` started at 0.

    The piece containing ``x`` is found by looking ``x`` up among the
    abelianized prefixes of the fixed point; the conjugacy with the shift is
    asserted at the end.
    """
    if not classify(s).primitive:
        raise ValueError("substitution is not primitive")
    k, seed = fixed_point_power(s)
    w = s.power(k) if k > 1 else s
    word = seed
    while len(word) <= n:
        word = w.apply(word)
    where = {}
    v = [0] * s.size
    for pos, c in enumerate(word[:n + 1]):
        where[tuple(v)] = pos
        v[s.index[c]] += 1
    x = (0,) * s.size
    points = [x]
    letters = []
    for _ in range(n):
        a = word[where[x]]
        letters.append(a)
        x = tuple(c + (i == s.index[a]) for i, c in enumerate(x))
        points.append(x)
    assert x == s.ab(word[:n])
    return "".join(letters), points


def cut_and_project_word(v: Sequence[float], c: Sequence[float], n: int) -> List[int]:
    """Hyperface types (1-based) crossed by ``t -> c + t v`` for ``t > 0``, in order.

    Inputs are converted exactly to rationals, so simultaneous crossings are
    detected without rounding and raise :class:`DegenerateLine`.
    """
    v = [Fraction(x) for x in v]
    c = [Fraction(x) for x in c]
    if not v or len(v) != len(c):
        raise ValueError("direction and offset must have the same positive length")
    if any(x <= 0 for x in v):
        raise ValueError("direction must be strictly positive")
    heap = []
    for i, (vi, ci) in enumerate(zip(v, c)):
        k = math.floor(ci) + 1
        heapq.heappush(heap, ((k - ci) / vi, i, k))
    out = []
    while len(out) < n:
        t, i, k = heapq.heappop(heap)
        if heap and heap[0][0] == t:
            raise DegenerateLine(f"two hyperplanes crossed at t = {t} (step {len(out)})")
        out.append(i + 1)
        heapq.heappush(heap, ((k + 1 - c[i]) / v[i], i, k + 1))
    return out


def letter_discrepancy(word: Sequence[int], v: Sequence[float]) -> float:
    """Largest ``|count_i(m) - m v_i / sum(v)|`` over prefixes and letters."""
    v = np.asarray(v, dtype=float)
    freq = v / v.sum()
    w = np.asarray(word, dtype=np.int64) - 1
    counts = np.zeros((len(w), len(v)))
    counts[np.arange(len(w)), w] = 1
    counts = np.cumsum(counts, axis=0)
    m = np.arange(1, len(w) + 1)[:, None]
    return float(np.abs(counts - m * freq).max()) if len(w) else 0.0


def _canvas_coords(cloud: PointCloud) -> np.ndarray:
    pts = cloud.points
    if pts.shape[1] == 1:
        # one contracting coordinate: stack the letter pieces vertically
        pts = np.column_stack([pts[:, 0], cloud.letters.astype(float)])
    else:
        pts = pts[:, :2]
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    scale = CANVAS * (1 - 2 * MARGIN) / span
    mid = (lo + hi) / 2
    xy = (pts - mid) * scale + CANVAS / 2
    xy[:, 1] = CANVAS - xy[:, 1]
    return xy


def _color(cloud: PointCloud, i: int) -> tuple:
    if cloud.interior[i]:
        return HIGHLIGHT
    return PALETTE[int(cloud.letters[i]) % len(PALETTE)]


def render(cloud: PointCloud, path, fmt: Optional[str] = None) -> Path:
    """Write the cloud as SVG or binary PPM; output bytes depend only on the cloud."""
    if len(cloud) == 0:
        raise ValueError("empty cloud")
    path = Path(path)
    fmt = (fmt or path.suffix.lstrip(".") or "svg").lower()
    xy = _canvas_coords(cloud)
    if fmt == "svg":
        r = 3.0 if len(cloud) < 1000 else 1.0
        lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" '
                 f'viewBox="0 0 {CANVAS} {CANVAS}">',
                 f'<rect width="{CANVAS}" height="{CANVAS}" fill="white"/>']
        for i, (x, y) in enumerate(xy):
            rgb = "#%02x%02x%02x" % _color(cloud, i)
            lines.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{r}" fill="{rgb}"/>')
        lines.append("</svg>")
        path.write_text("\n".join(lines) + "\n")
    elif fmt == "ppm":
        img = np.full((CANVAS, CANVAS, 3), 255, dtype=np.uint8)
        pix = np.clip(np.floor(xy).astype(np.int64), 0, CANVAS - 1)
        rad = 1 if len(cloud) < 10000 else 0
        colors = np.array([_color(cloud, i) for i in range(len(cloud))], dtype=np.uint8)
        for dx in range(-rad, rad + 1):
            for dy in range(-rad, rad + 1):
                px = np.clip(pix[:, 0] + dx, 0, CANVAS - 1)
                py = np.clip(pix[:, 1] + dy, 0, CANVAS - 1)
                img[py, px] = colors
        with open(path, "wb") as fh:
            fh.write(f"P6\n{CANVAS} {CANVAS}\n255\n".encode())
            fh.write(img.tobytes())
    else:
        raise ValueError(f"unknown image format {fmt!r}")
    return path
