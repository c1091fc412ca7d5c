"""The substitution families s_k and s_{l,k}.

``s_k`` is ``a -> a^k b c, b -> c, c -> a`` (characteristic polynomial
``X^3 - k X^2 - X - 1``); ``s_{l,k}`` is ``a -> a^l b a^(k-l), b -> c, c -> a``
(characteristic polynomial ``X^3 - k X^2 - 1``), and ``s_{k,k}`` is written
``a -> a^k b``.

For large k, non-emptiness of the interior of D_{u,a} for s_k is certified
by a disk covering: every piece pi(D_{u,l}) lies in the union of the disks of
radius ``1/(1 - 1/sqrt(k))`` centred at the values of its two least
significant digits, and the point ``t_k = k/2 - i sqrt(k)/2`` is shown to
avoid every disk of every piece other than D_{u,a} and of every nonzero
lattice translate of the whole discrete line.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

import mpmath
import numpy as np

from .automata import DigitAlphabet, concat_zero_star, enumerate_words, state_count
from .interior import SubstitutionContext, interior_language
from .numberfield import (Enclosure, FieldElement, NumberField, sqrt_down, sqrt_up)
from .relations import build_zero_automaton, difference_digits, q_inclusion, value
from .substitution import (Substitution, incidence_matrix, mirrored_prefix_language,
                           prefix_automaton, psi)

__all__ = [
    "sk_substitution",
    "slk_substitution",
    "DiskCertificate",
    "verify_sk_certificate",
    "eigenvalue_bounds",
    "verify_slk_inclusion",
    "zero_language_check",
    "conjecture_45",
]

# the contracting root with negative imaginary part (see NumberField ordering)
BETA_INDEX = 1


def sk_substitution(k: int) -> Substitution:
    if k < 0:
        raise ValueError("k must be >= 0")
    return Substitution(("a", "b", "c"), ("a" * k + "bc", "c", "a"))


def slk_substitution(l: int, k: int) -> Substitution:
    if k < 1 or not 0 <= l <= k:
        raise ValueError("need k >= 1 and 0 <= l <= k")
    return Substitution(("a", "b", "c"), ("a" * l + "b" + "a" * (k - l), "c", "a"))


# --------------------------------------------------------------------------
# disk certificate


@dataclass
class DiskCertificate:
    k: int
    window: int
    radius: float
    target: complex
    centers: Dict[str, int] = field(default_factory=dict)
    checks: Dict[str, bool] = field(default_factory=dict)
    margins: Dict[str, float] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    @property
    def direct_passed(self) -> bool:
        """Verdict of the disk and direct tail checks alone, without the lemma inequalities."""
        direct = [v for n, v in self.checks.items() if not n.startswith("lemma_")]
        return bool(direct) and all(direct)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "window": self.window,
            "radius": self.radius,
            "target": [self.target.real, self.target.imag],
            "centers": dict(self.centers),
            "checks": dict(self.checks),
            "margins": {k: round(v, 9) for k, v in self.margins.items()},
            "failures": list(self.failures[:20]),
            "passed": self.passed,
            "direct_passed": self.direct_passed,
        }


class _SkGeometry:
    """Exact and float views of beta, gamma, the centres and the lattice translates."""

    def __init__(self, k: int):
        self.k = k
        self.field = NumberField(_poly([-1, -1, -k, 1]))
        f = self.field
        self.beta = f.gen
        self.gamma = -(self.beta ** 2) + (k + 1) * self.beta + 1
        self.g1 = self.beta - (k + 2)
        self.g2 = self.beta ** 2 - k * self.beta - 2
        self.beta_f = f.float_value(self.beta, BETA_INDEX)
        self.gamma_f = f.float_value(self.gamma, BETA_INDEX)
        self.g1_f = f.float_value(self.g1, BETA_INDEX)
        self.g2_f = f.float_value(self.g2, BETA_INDEX)
        self.target = complex(k / 2, -np.sqrt(k) / 2)
        # float error budget for sums of O(k) terms of size O(k)
        self.slack = 1e-9 * (1 + k)

    def centers_closed_form(self) -> Dict[str, List[tuple]]:
        """Centre specs: ("ij", i, j) is i + j beta, ("gb",) is gamma beta, ("gi", i) is gamma + i beta."""
        k = self.k
        return {
            "a": [("gb",)] + [("ij", i, j) for i in range(k) for j in range(k)],
            "b": [("ij", k, i) for i in range(k)],
            "c": [("ij", 0, k)] + [("gi", i) for i in range(k)],
        }

    def center_element(self, spec: tuple) -> FieldElement:
        if spec[0] == "ij":
            return self.field(spec[1]) + spec[2] * self.beta
        if spec[0] == "gb":
            return self.gamma * self.beta
        return self.gamma + spec[1] * self.beta

    def center_floats(self, specs: List[tuple]) -> np.ndarray:
        out = np.empty(len(specs), dtype=complex)
        for n, spec in enumerate(specs):
            if spec[0] == "ij":
                out[n] = spec[1] + spec[2] * self.beta_f
            elif spec[0] == "gb":
                out[n] = self.gamma_f * self.beta_f
            else:
                out[n] = self.gamma_f + spec[1] * self.beta_f
        return out

    def exact_distance_exceeds(self, elem: FieldElement, bound: Fraction) -> Optional[bool]:
        """Certified test of |sigma(elem) - t_k| > bound."""
        f = self.field
        twice = 2 * elem - self.k

        def pred(bits):
            e = f.evaluate(twice, BETA_INDEX, bits)
            lo, hi = sqrt_down(Fraction(self.k), bits), sqrt_up(Fraction(self.k), bits)
            # 2(t - t_k) = 2t - k + i sqrt(k)
            shifted = Enclosure(e.re, e.im + (lo + hi) / 2, e.rad + (hi - lo) / 2, bits)
            if shifted.abs_lower() > 2 * bound:
                return True
            if shifted.abs_upper() <= 2 * bound:
                return False
            return None

        return f.decide(pred)


def _poly(coeffs):
    from .numberfield import MonicIntPoly
    return MonicIntPoly(tuple(coeffs))


def _centers_from_automaton(geo: _SkGeometry) -> Dict[str, set]:
    """Values t0 + beta t1 of the two least significant digits of each piece."""
    s = sk_substitution(geo.k)
    ps = psi(s, geo.field)
    pa = prefix_automaton(s, ps)
    out = {a: set() for a in s.alphabet}
    for x, d1, y in pa.transitions():
        for y2, d0, z in pa.transitions():
            if y2 != y:
                continue
            t = pa.alphabet[d0].scalar + pa.alphabet[d1].scalar * geo.beta
            out[s.alphabet[z]].add(t.coords)
    return out


def verify_sk_certificate(k: int, window: int = 3) -> DiskCertificate:
    """Certified disk-covering check that t_k is an interior point of pi(D_{u,a}).

    Checks: the tail radius bound; t_k outside the disks of D_{u,b} and
    D_{u,c}; t_k outside every disk of every piece translated by t_{c,d} for
    0 < max(|c|,|d|) <= window; and two evaluated tail inequalities covering
    every (c,d) outside the window.
    """
    geo = _SkGeometry(k)
    f = geo.field
    cert = DiskCertificate(k, window, float("inf"), geo.target)
    if k < 2:
        cert.checks["radius_bound"] = False
        cert.failures.append("radius 1/(1-1/sqrt(k)) undefined for k < 2")
        return cert
    kf = Fraction(k)
    bits = 128
    # rho = 1/(1 - 1/sqrt k), lower and upper rational bounds
    rho_lo = 1 / (1 - 1 / sqrt_up(kf, bits))
    rho_hi = 1 / (1 - 1 / sqrt_down(kf, bits))
    cert.radius = float(rho_hi)

    beta_abs = f.evaluate(geo.beta, BETA_INDEX, bits).abs_upper()
    gamma_abs = f.evaluate(geo.gamma, BETA_INDEX, bits).abs_upper()
    dmax = max(kf, gamma_abs)
    tail = dmax * beta_abs ** 2 / (1 - beta_abs) if beta_abs < 1 else None
    ok = tail is not None and tail <= rho_lo
    cert.checks["radius_bound"] = ok
    cert.margins["radius_bound"] = float(rho_lo - tail) if tail is not None else float("-inf")

    specs = geo.centers_closed_form()
    auto = _centers_from_automaton(geo)
    closed = {l: {geo.center_element(sp).coords for sp in specs[l]} for l in specs}
    cert.checks["centers_match_automaton"] = closed == auto
    cert.centers = {l: len(v) for l, v in closed.items()}

    floats = {l: geo.center_floats(specs[l]) for l in specs}
    rho_f = float(rho_hi)

    def disk_check(name: str, shift_elem: FieldElement, shift_f: complex, letters):
        good = True
        worst = float("inf")
        for l in letters:
            dist = np.abs(floats[l] + shift_f - geo.target)
            worst = min(worst, float(dist.min()) - rho_f)
            undecided = np.flatnonzero(dist <= rho_f + geo.slack)
            for n in undecided:
                elem = geo.center_element(specs[l][n]) + shift_elem
                res = geo.exact_distance_exceeds(elem, rho_hi)
                if res is not True:
                    good = False
                    cert.failures.append(f"{name}: centre {specs[l][n]} of piece {l}")
        cert.checks[name] = good
        cert.margins[name] = worst

    disk_check("pieces_b_c", f.zero, 0j, ("b", "c"))
    w = window
    for c, d in itertools.product(range(-w, w + 1), repeat=2):
        if (c, d) == (0, 0):
            continue
        shift = c * geo.g1 + d * geo.g2
        disk_check(f"translate_{c}_{d}", shift, c * geo.g1_f + d * geo.g2_f, ("a", "b", "c"))
    window_checks = [n for n in cert.checks if n.startswith("translate_")]
    window_ok = [cert.checks.pop(n) for n in window_checks]
    cert.checks["window"] = all(window_ok)
    for n in window_checks:
        cert.margins.pop(n)

    # tails: |c| >= |d| with |c| > w, and |d| > |c| with |d| > w
    all_f = np.concatenate([floats[l] for l in "abc"])
    m_abs = float(np.abs(all_f - geo.target).max()) + geo.slack
    m_im = float(np.abs((all_f - geo.target).imag).max()) + geo.slack
    g1 = f.evaluate(geo.g1, BETA_INDEX, bits)
    g2 = f.evaluate(geo.g2, BETA_INDEX, bits)
    ib = f.evaluate(geo.beta, BETA_INDEX, bits)
    a_lo, b_hi = float(g1.abs_lower()), float(g2.abs_upper())
    margin_c = (w + 1) * (a_lo - b_hi) - m_abs - rho_f - geo.slack
    cert.checks["tail_c"] = a_lo > b_hi and margin_c > 0
    cert.margins["tail_c"] = margin_c
    # |Im t_{c,d}| >= |d| |Im g2| - |c| |Im beta| since Im g1 = Im beta
    im_g2_lo = float(min(abs(x) for x in g2.im_bounds())) if g2.im_bounds()[0] * g2.im_bounds()[1] > 0 else 0.0
    im_b_hi = float(max(abs(x) for x in ib.im_bounds()))
    margin_d = (w + 1) * (im_g2_lo - im_b_hi) - m_im - rho_f - geo.slack
    cert.checks["tail_d"] = im_g2_lo > im_b_hi and margin_d > 0
    cert.margins["tail_d"] = margin_d
    for name, margin in lemma_tail_margins(k).items():
        cert.checks[name] = margin > 0
        cert.margins[name] = margin
    return cert


def lemma_tail_margins(k: int) -> Dict[str, float]:
    """Lower bounds (interval arithmetic) of the analytic tail inequalities minus their right sides.

    ``lemma_modulus``: |t_{c,d}| >= k - 3 sqrt(k) whenever |c| >= 1 and 2|c| >= |d|.
    ``lemma_imag``: |Im t_{c,d}| >= 3 sqrt(k) - 5 whenever |c| <= |d| and |d| >= 3.
    ``lemma_tail_modulus`` / ``lemma_tail_imag``: the resulting distance from
    t_k to every translated disk centre exceeds the radius.  Together they
    cover every (c,d) with max(|c|,|d|) >= 4.
    """
    iv = mpmath.iv
    with mpmath.workprec(128):
        kk = iv.mpf(k)
        sk = iv.sqrt(kk)
        sk2 = iv.sqrt(kk + 2 / kk)
        rho = 1 / (1 - 1 / sk)
        per_d = kk / sk2 - 1 - 1 / kk - 1 / sk
        terms = {
            "lemma_modulus": (kk - 1 / sk - 2 / kk - 2 * sk - 2) - (kk - 3 * sk),
            "lemma_imag": 3 * per_d - (3 * sk - 5),
            "lemma_tail_modulus": kk / 2 - 9 * sk / 2 - sk2 - 1 / kk - rho,
            "lemma_tail_imag": 3 * sk / 2 - 5 - sk2 - 1 / kk - rho,
        }
        return {n: float(v.a) for n, v in terms.items()}


def eigenvalue_bounds(k: int) -> Dict[str, bool]:
    """Certified truth of the modulus, real and imaginary part bounds on beta and gamma.

    ``re_beta_upper`` is the bound Re(beta) < -1/(k + 2/k); it is false for
    k >= 2 since Re(beta) = -(1/b + 1/b^2)/2 for the real root b.
    ``re_beta_upper_halved`` is the bound Re(beta) < -1/(2(k + 2/k)) that
    this identity does give.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    geo = _SkGeometry(k)
    f = geo.field
    kf = Fraction(k)
    k2 = kf + Fraction(2, k)
    out = {}
    for bits in (64, 128, 256, 512):
        e = f.evaluate(geo.beta, BETA_INDEX, bits)
        g = f.evaluate(geo.gamma, BETA_INDEX, bits)
        inv_sk_lo, inv_sk_hi = 1 / sqrt_up(kf, bits), 1 / sqrt_down(kf, bits)
        inv_sk2_lo, inv_sk2_hi = 1 / sqrt_up(k2, bits), 1 / sqrt_down(k2, bits)
        re_lo, re_hi = e.re_bounds()
        im_lo, im_hi = e.im_bounds()
        out = {
            "abs_beta_lower": e.abs_lower() > inv_sk2_hi,
            "abs_beta_upper": e.abs_upper() < inv_sk_lo,
            "abs_gamma_lower": g.abs_lower() > sqrt_up(kf, bits) - inv_sk_lo,
            "abs_gamma_upper": g.abs_upper() < sqrt_down(k2, bits) + inv_sk_lo,
            "re_beta_lower": re_lo > Fraction(-1, k),
            "re_beta_upper": re_hi < -1 / k2,
            "re_beta_upper_halved": re_hi < -1 / (2 * k2),
            "im_beta_lower": im_lo > -inv_sk_lo,
            "im_beta_upper": im_hi < -inv_sk2_hi + Fraction(1, k),
        }
        if all(v for n, v in out.items() if n != "re_beta_upper"):
            break
    return out


# --------------------------------------------------------------------------
# s_{l,k}


def _slk_field(k: int) -> NumberField:
    return NumberField(_poly([-1, 0, -k, 1]))


def slk_language(l: int, k: int, field: Optional[NumberField] = None):
    """Least-significant-first language of s_{l,k} from a to a (values D_{u,a})."""
    s = slk_substitution(l, k)
    f = _slk_field(k) if field is None else field
    return mirrored_prefix_language(s, "a", "a", psi(s, f))


def verify_slk_inclusion(l: int, k: int) -> bool:
    """Decide beta^2 Q_{L_k} ⊆ Q_{L_{l,k}}, i.e. M^2 D_{u,a} ⊆ D_{v,a}.

    ``l = 0`` is replaced by ``l = k``: s_{0,k} is the word reversal of
    s_{k,k} and has the same discrete-line values up to this conjugacy.
    """
    if k < 1 or not 0 <= l <= k:
        raise ValueError("need k >= 1 and 0 <= l <= k")
    if l == 0:
        l = k
    f = _slk_field(k)
    lk = slk_language(k, k, f)
    llk = slk_language(l, k, f)
    return q_inclusion(_zero_zero_prefix(lk, f), llk, f)


def _zero_zero_prefix(a, f: NumberField):
    """The language 0 0 L (two least significant zeros prepended)."""
    from .automata import LabeledAutomaton
    from .relations import _with_zero
    a = _with_zero(a, f)
    z = a.alphabet.zero_index
    n = a.n_states
    succ = [dict(r) for r in a.succ] + [{z: (n + 1,)}, {z: tuple(a.initial)}]
    return LabeledAutomaton(a.alphabet, succ, [n], a.final)


def slk_difference_alphabet(l: int, k: int) -> DigitAlphabet:
    f = _slk_field(k)
    sk = DigitAlphabet.from_scalars([f(i) for i in range(k + 1)])
    beta = f.gen
    slk = DigitAlphabet.from_scalars([f(i) for i in range(l + 1)]
                                     + [beta - k + j for j in range(l, k)])
    return DigitAlphabet.from_scalars(difference_digits(sk, slk))


def zero_language_check(l: int, k: int, maxlen: int) -> bool:
    """Every word of length <= maxlen accepted by the zero automaton over Σ_k - Σ_{l,k} has value 0."""
    alpha = slk_difference_alphabet(l, k)
    f = alpha[0].scalar.field
    za = build_zero_automaton(alpha, f)
    for w in enumerate_words(za, maxlen):
        if not value([alpha[i].scalar for i in w], f.gen).is_zero():
            return False
    return za.accepts(())


def conjecture_45(k: int, radius: int = 0) -> int:
    """State count of the interior language of s_k for the letter a."""
    ctx = SubstitutionContext(sk_substitution(k))
    return state_count(interior_language(ctx, "a", radius=radius))
