"""Exact arithmetic in Z[beta] with certified complex embeddings.

Elements are integer coordinate vectors in the power basis ``1, beta, ...,
beta^(d-1)`` where ``beta`` is a root of a monic integer polynomial.  Numeric
values are only ever produced as :class:`Enclosure` discs that provably
contain the true value.

Root isolation uses approximations from :mod:`mpmath` which are then
certified with exact rational arithmetic through the Weierstrass
inclusion discs: for approximations ``z_1..z_d`` of the roots of a monic
polynomial ``p`` of degree ``d``, the discs ``D(z_i, d |W_i|)`` with
``W_i = p(z_i) / prod_{j != i} (z_i - z_j)`` cover all roots and each
connected component made of ``m`` discs holds exactly ``m`` roots.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import isqrt
from typing import Callable, Iterable, Optional, Sequence, Union

import mpmath
import sympy

__all__ = [
    "FieldError",
    "MonicIntPoly",
    "Enclosure",
    "NumberField",
    "FieldElement",
    "PolyClassification",
    "make_field",
    "classify_polynomial",
    "ring_mul",
    "evaluate",
    "char_poly",
]

START_BITS = 64
MAX_BITS = 4096


class FieldError(ValueError):
    """Raised on invalid polynomials, mixed fields or failed certification."""


# --------------------------------------------------------------------------
# polynomials


_X = sympy.Symbol("X")


@dataclass(frozen=True)
class MonicIntPoly:
    """Monic integer polynomial, coefficients stored constant term first."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)
        if len(c) < 2:
            raise FieldError("polynomial must have degree >= 1")
        if c[-1] != 1:
            raise FieldError(f"polynomial is not monic (leading coefficient {c[-1]})")

    @classmethod
    def parse(cls, text: str) -> "MonicIntPoly":
        """Accept ``"X^3 - 2*X^2 - 1"`` or a coefficient list ``"[-1, 0, -2, 1]"``."""
        text = text.strip()
        if text.startswith("["):
            items = [s for s in text.strip("[]").split(",") if s.strip()]
            try:
                return cls(tuple(int(s) for s in items))
            except ValueError as exc:
                raise FieldError(f"bad coefficient list {text!r}") from exc
        expr_text = re.sub(r"\^", "**", text)
        try:
            expr = sympy.sympify(expr_text, locals={"X": _X, "x": _X})
            poly = sympy.Poly(expr, _X)
        except (sympy.SympifyError, sympy.PolynomialError, TypeError) as exc:
            raise FieldError(f"cannot parse polynomial {text!r}") from exc
        coeffs = poly.all_coeffs()[::-1]
        if any(not c.is_integer for c in coeffs):
            raise FieldError("polynomial coefficients must be integers")
        return cls(tuple(int(c) for c in coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_sympy(self) -> sympy.Poly:
        return sympy.Poly(list(reversed(self.coeffs)), _X)

    def __str__(self) -> str:
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = "X" if k == 1 else f"X^{k}"
                body = mono if a == 1 else f"{a}*{mono}"
            terms.append((sign, body))
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def char_poly(matrix: Sequence[Sequence[int]]) -> MonicIntPoly:
    """Characteristic polynomial det(X I - M) of an integer matrix."""
    m = sympy.Matrix(matrix)
    p = m.charpoly(_X)
    return MonicIntPoly(tuple(int(c) for c in reversed(p.all_coeffs())))


# --------------------------------------------------------------------------
# exact complex rationals and certified square roots

CQ = tuple  # (Fraction re, Fraction im)


def _cmul(a: CQ, b: CQ) -> CQ:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cdiv(a: CQ, b: CQ) -> CQ:
    n = b[0] * b[0] + b[1] * b[1]
    return ((a[0] * b[0] + a[1] * b[1]) / n, (a[1] * b[0] - a[0] * b[1]) / n)


def _abs2(a: CQ) -> Fraction:
    return a[0] * a[0] + a[1] * a[1]


def sqrt_up(q: Fraction, bits: int = 64) -> Fraction:
    """Rational upper bound of sqrt(q) with relative accuracy ~2^-bits."""
    q = Fraction(q)
    if q <= 0:
        return Fraction(0)
    n, d = q.numerator, q.denominator
    scale = 1 << bits
    s = isqrt(n * d * scale * scale)
    if s * s == n * d * scale * scale:
        return Fraction(s, d * scale)
    return Fraction(s + 1, d * scale)


def sqrt_down(q: Fraction, bits: int = 64) -> Fraction:
    q = Fraction(q)
    if q <= 0:
        return Fraction(0)
    n, d = q.numerator, q.denominator
    scale = 1 << bits
    return Fraction(isqrt(n * d * scale * scale), d * scale)


def _mpf_to_fraction(x) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    v = Fraction(int(man)) * (Fraction(2) ** int(exp))
    return -v if sign else v


# --------------------------------------------------------------------------
# enclosures


@dataclass(frozen=True)
class Enclosure:
    """Closed disc ``{z : |z - (re + i im)| <= rad}`` holding a certified value."""

    re: Fraction
    im: Fraction
    rad: Fraction
    precision: int = START_BITS

    @property
    def center(self) -> complex:
        return complex(float(self.re), float(self.im))

    @property
    def radius(self) -> float:
        return float(self.rad)

    def abs_upper(self) -> Fraction:
        return sqrt_up(_abs2((self.re, self.im)), self.precision) + self.rad

    def abs_lower(self) -> Fraction:
        return max(Fraction(0), sqrt_down(_abs2((self.re, self.im)), self.precision) - self.rad)

    def re_bounds(self) -> tuple:
        return (self.re - self.rad, self.re + self.rad)

    def im_bounds(self) -> tuple:
        return (self.im - self.rad, self.im + self.rad)

    def contains(self, z: complex, slack: float = 0.0) -> bool:
        dz = complex(z) - self.center
        return abs(dz) <= self.radius + slack + 1e-300

    def __add__(self, other: "Enclosure") -> "Enclosure":
        return Enclosure(self.re + other.re, self.im + other.im, self.rad + other.rad,
                         min(self.precision, other.precision))

    def __sub__(self, other: "Enclosure") -> "Enclosure":
        return Enclosure(self.re - other.re, self.im - other.im, self.rad + other.rad,
                         min(self.precision, other.precision))

    def __mul__(self, other: "Enclosure") -> "Enclosure":
        # |xy - ab| <= |a| s + |b| r + r s
        bits = min(self.precision, other.precision)
        c = _cmul((self.re, self.im), (other.re, other.im))
        a = sqrt_up(_abs2((self.re, self.im)), bits)
        b = sqrt_up(_abs2((other.re, other.im)), bits)
        rad = a * other.rad + b * self.rad + self.rad * other.rad
        return Enclosure(c[0], c[1], rad, bits)

    def is_real_certified(self) -> bool:
        return self.im == 0

    def __repr__(self) -> str:
        return f"Enclosure({self.center!r} ± {self.radius:.3g})"


# --------------------------------------------------------------------------
# number fields


class NumberField:
    """The ring Z[beta] for beta a root of ``poly`` with certified embeddings.

    Embeddings are the distinct complex roots, ordered by decreasing modulus
    and, within a conjugate pair, negative imaginary part first.  For a Pisot
    polynomial ``expanding_index`` is therefore 0.
    """

    def __init__(self, poly: MonicIntPoly, precision: int = START_BITS,
                 max_precision: int = MAX_BITS):
        if not isinstance(poly, MonicIntPoly):
            poly = MonicIntPoly(tuple(poly))
        self.poly = poly
        self.degree = poly.degree
        self.precision = precision
        self.max_precision = max_precision
        self._roots_cache: dict = {}
        self._reduction = self._build_reduction()
        # certify once at the starting precision so that isolation failures surface early
        self.root_enclosures(precision)

    # ---- algebraic structure
    def _build_reduction(self):
        d = self.degree
        c = self.poly.coeffs
        red = []
        for k in range(2 * d - 1):
            if k < d:
                v = [0] * d
                v[k] = 1
            else:
                prev = red[k - 1]
                # beta * prev, then replace beta^d by -(c_0 + ... + c_{d-1} beta^{d-1})
                top = prev[d - 1]
                v = [0] + prev[: d - 1]
                for j in range(d):
                    v[j] -= top * c[j]
            red.append(v)
        return [tuple(v) for v in red]

    def __eq__(self, other) -> bool:
        return isinstance(other, NumberField) and other.poly == self.poly

    def __hash__(self) -> int:
        return hash(self.poly)

    def __repr__(self) -> str:
        return f"NumberField({self.poly})"

    def element(self, coords: Iterable[int]) -> "FieldElement":
        coords = tuple(int(c) for c in coords)
        if len(coords) < self.degree:
            coords = coords + (0,) * (self.degree - len(coords))
        elif len(coords) > self.degree:
            return self.from_poly_coeffs(coords)
        return FieldElement(coords, self)

    def from_poly_coeffs(self, coeffs: Sequence[int]) -> "FieldElement":
        """Reduce an arbitrary-degree integer polynomial in beta."""
        acc = self.zero
        power = self.one
        for c in coeffs:
            if c:
                acc = acc + power * int(c)
            power = power * self.gen
        return acc

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            self._check(value)
            return value
        if isinstance(value, int):
            return self.element((value,))
        return self.element(value)

    @cached_property
    def zero(self) -> "FieldElement":
        return FieldElement((0,) * self.degree, self)

    @cached_property
    def one(self) -> "FieldElement":
        return self.element((1,))

    @cached_property
    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return self.element((-self.poly.coeffs[0],))
        return self.element((0, 1))

    def _check(self, x: "FieldElement"):
        if x.field != self:
            raise FieldError("elements belong to different fields")

    def mul_coords(self, a: Sequence[int], b: Sequence[int]) -> tuple:
        d = self.degree
        conv = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        out = [0] * d
        for k, ck in enumerate(conv):
            if ck:
                rk = self._reduction[k]
                for j in range(d):
                    out[j] += ck * rk[j]
        return tuple(out)

    def mult_matrix(self, x: "FieldElement") -> list:
        """Integer matrix of y -> x*y in the power basis (columns are images)."""
        cols = [self.mul_coords(x.coords, self.element([0] * j + [1]).coords)
                for j in range(self.degree)]
        return [[cols[j][i] for j in range(self.degree)] for i in range(self.degree)]

    def norm(self, x: "FieldElement") -> int:
        return int(sympy.Matrix(self.mult_matrix(x)).det())

    def inverse_rational(self, x: "FieldElement") -> tuple:
        """Coordinates of 1/x as Fractions."""
        m = sympy.Matrix(self.mult_matrix(x))
        if m.det() == 0:
            raise FieldError("zero has no inverse")
        sol = m.LUsolve(sympy.Matrix(self.one.coords))
        return tuple(Fraction(int(sympy.fraction(v)[0]), int(sympy.fraction(v)[1])) for v in sol)

    # ---- roots
    def _approximate_roots(self, bits: int) -> list:
        d = self.degree
        if d == 1:
            return [(Fraction(-self.poly.coeffs[0]), Fraction(0))]
        with mpmath.workprec(bits + 32):
            rts = mpmath.polyroots(list(reversed(self.poly.coeffs)), maxsteps=200 + 4 * bits,
                                   extraprec=2 * bits)
        tol = mpmath.mpf(2) ** (-(bits // 2))
        out = []
        pending = []
        for r in rts:
            r = mpmath.mpc(r)
            if abs(r.imag) <= tol * max(1, abs(r)):
                out.append((_mpf_to_fraction(r.real), Fraction(0)))
            else:
                pending.append(r)
        # force exact conjugate symmetry on the non-real approximations
        pending.sort(key=lambda z: (float(z.real), float(z.imag)))
        used = [False] * len(pending)
        for i, z in enumerate(pending):
            if used[i] or z.imag > 0:
                continue
            used[i] = True
            best, bestd = None, None
            for j, w in enumerate(pending):
                if not used[j] and w.imag > 0:
                    dist = abs(w - mpmath.conj(z))
                    if bestd is None or dist < bestd:
                        best, bestd = j, dist
            if best is None:
                raise FieldError("root approximations are not conjugate-closed")
            used[best] = True
            re_ = _mpf_to_fraction(z.real)
            im_ = _mpf_to_fraction(z.imag)
            out.append((re_, im_))
            out.append((re_, -im_))
        if len(out) != d:
            raise FieldError("root approximations are not conjugate-closed")
        return out

    def _certify(self, approx: list, bits: int) -> Optional[list]:
        d = self.degree
        discs = []
        for i, z in enumerate(approx):
            num = (Fraction(0), Fraction(0))
            for c in reversed(self.poly.coeffs):
                num = _cmul(num, z)
                num = (num[0] + c, num[1])
            den = (Fraction(1), Fraction(0))
            for j, w in enumerate(approx):
                if j != i:
                    den = _cmul(den, (z[0] - w[0], z[1] - w[1]))
            if den == (0, 0):
                return None
            wz = _cdiv(num, den)
            discs.append((z, d * sqrt_up(_abs2(wz), bits)))
        for i in range(d):
            for j in range(i + 1, d):
                (zi, ri), (zj, rj) = discs[i], discs[j]
                dist2 = _abs2((zi[0] - zj[0], zi[1] - zj[1]))
                if dist2 <= (ri + rj) ** 2:
                    return None
        for z, r in discs:
            if z[1] != 0 and abs(z[1]) <= r:
                # disc touches the real axis: realness undetermined
                return None
        return discs

    def root_enclosures(self, bits: Optional[int] = None) -> tuple:
        bits = self.precision if bits is None else bits
        if bits in self._roots_cache:
            return self._roots_cache[bits]
        b = bits
        while True:
            discs = self._certify(self._approximate_roots(b), b)
            if discs is not None:
                break
            b *= 2
            if b > self.max_precision:
                raise FieldError(f"root isolation failed for {self.poly} at {self.max_precision} bits")
        encs = [Enclosure(z[0], z[1], r, bits) for z, r in discs]
        encs.sort(key=lambda e: (-abs(e.center), e.center.imag, e.center.real))
        result = tuple(encs)
        self._roots_cache[bits] = result
        return result

    @property
    def n_embeddings(self) -> int:
        return self.degree

    @cached_property
    def expanding_index(self) -> int:
        return 0

    @cached_property
    def embedding_kinds(self) -> tuple:
        """'real' or 'complex' per embedding index."""
        return tuple("real" if e.im == 0 else "complex" for e in self.root_enclosures())

    @cached_property
    def contracting_representatives(self) -> tuple:
        """Embedding indices other than the expanding one, one per conjugate pair."""
        out = []
        for i, e in enumerate(self.root_enclosures()):
            if i == self.expanding_index:
                continue
            if e.im > 0:
                continue
            out.append(i)
        return tuple(out)

    def root_values(self) -> list:
        return [e.center for e in self.root_enclosures()]

    # ---- evaluation
    def evaluate(self, x: "FieldElement", index: int, bits: Optional[int] = None) -> Enclosure:
        self._check(x)
        bits = self.precision if bits is None else bits
        if not 0 <= index < self.degree:
            raise FieldError(f"embedding index {index} out of range")
        root = self.root_enclosures(bits)[index]
        if all(c == 0 for c in x.coords):
            return Enclosure(Fraction(0), Fraction(0), Fraction(0), bits)
        z = (root.re, root.im)
        a = sqrt_up(_abs2(z), bits)
        r = root.rad
        acc = (Fraction(0), Fraction(0))
        rad = Fraction(0)
        for k in range(self.degree - 1, -1, -1):
            acc = _cmul(acc, z)
            acc = (acc[0] + x.coords[k], acc[1])
        for k, c in enumerate(x.coords):
            if c and k:
                rad += abs(c) * ((a + r) ** k - a ** k)
        return Enclosure(acc[0], acc[1], rad, bits)

    def decide(self, predicate: Callable[[int], Optional[bool]],
               max_bits: Optional[int] = None) -> Optional[bool]:
        """Refine precision until ``predicate(bits)`` returns a boolean."""
        bits = self.precision
        cap = self.max_precision if max_bits is None else max_bits
        while bits <= cap:
            res = predicate(bits)
            if res is not None:
                return res
            bits *= 2
        return None

    def abs_less(self, x: "FieldElement", index: int, bound: Fraction,
                 max_bits: Optional[int] = None) -> Optional[bool]:
        """Certified comparison |sigma_index(x)| < bound (None if undecided)."""
        bound = Fraction(bound)

        def pred(bits):
            e = self.evaluate(x, index, bits)
            if e.abs_upper() < bound:
                return True
            if e.abs_lower() >= bound:
                return False
            return None

        return self.decide(pred, max_bits)

    def float_value(self, x: "FieldElement", index: int) -> complex:
        return self.evaluate(x, index).center


@dataclass(frozen=True, eq=False)
class FieldElement:
    """Immutable element of Z[beta]."""

    coords: tuple
    field: NumberField = field(repr=False)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.coords == self.field.element((other,)).coords
        return (isinstance(other, FieldElement) and other.field == self.field
                and other.coords == self.coords)

    def __hash__(self) -> int:
        return hash(self.coords)

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, int):
            return self.field.element((other,))
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field != self.field:
            raise FieldError("elements belong to different fields")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(tuple(a + b for a, b in zip(self.coords, other.coords)), self.field)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(tuple(-a for a in self.coords), self.field)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(tuple(a - b for a, b in zip(self.coords, other.coords)), self.field)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return FieldElement(tuple(a * other for a in self.coords), self.field)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field.mul_coords(self.coords, other.coords), self.field)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.unit_inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coords)

    def unit_inverse(self) -> "FieldElement":
        inv = self.field.inverse_rational(self)
        if any(c.denominator != 1 for c in inv):
            raise FieldError(f"{self} is not a unit of Z[beta]")
        return FieldElement(tuple(int(c) for c in inv), self.field)

    def evaluate(self, index: int, bits: Optional[int] = None) -> Enclosure:
        return self.field.evaluate(self, index, bits)

    def __complex__(self) -> complex:
        return self.field.float_value(self, self.field.expanding_index)

    def __str__(self) -> str:
        terms = []
        for k in range(len(self.coords) - 1, -1, -1):
            c = self.coords[k]
            if not c:
                continue
            mono = "" if k == 0 else ("b" if k == 1 else f"b^{k}")
            if k == 0:
                body = str(abs(c))
            else:
                body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for s, b in terms[1:]:
            out += f" {s} {b}"
        return out

    def __repr__(self) -> str:
        return f"FieldElement({self})"


def make_field(p: Union[MonicIntPoly, str, Sequence[int]], precision: int = START_BITS) -> NumberField:
    if isinstance(p, str):
        p = MonicIntPoly.parse(p)
    elif not isinstance(p, MonicIntPoly):
        p = MonicIntPoly(tuple(p))
    return NumberField(p, precision)


def ring_mul(x: FieldElement, y: FieldElement) -> FieldElement:
    if x.field != y.field:
        raise FieldError("elements belong to different fields")
    return x * y


def evaluate(x: FieldElement, embedding_index: int, bits: Optional[int] = None) -> Enclosure:
    return x.field.evaluate(x, embedding_index, bits)


@dataclass(frozen=True)
class PolyClassification:
    irreducible: bool
    pisot: bool
    unit: bool

    def as_dict(self) -> dict:
        return {"irreducible": self.irreducible, "pisot": self.pisot, "unit": self.unit}


def _is_irreducible(p: MonicIntPoly) -> bool:
    if p.degree == 1:
        return True
    _, factors = p.to_sympy().factor_list()
    return len(factors) == 1 and factors[0][1] == 1


def classify_polynomial(p: Union[MonicIntPoly, str, Sequence[int]],
                        max_bits: int = 1024) -> PolyClassification:
    """Irreducibility over Q, Pisot property of the dominant root, unit norm."""
    if isinstance(p, str):
        p = MonicIntPoly.parse(p)
    elif not isinstance(p, MonicIntPoly):
        p = MonicIntPoly(tuple(p))
    irreducible = _is_irreducible(p)
    unit = abs(p.coeffs[0]) == 1
    pisot = _is_pisot(p, max_bits)
    return PolyClassification(irreducible, pisot, unit)


def _is_pisot(p: MonicIntPoly, max_bits: int) -> bool:
    # square-free part: repeated roots cannot occur for a Pisot minimal polynomial,
    # but a reducible input may carry them
    sp = p.to_sympy()
    if sympy.degree(sympy.gcd(sp, sp.diff(_X))) > 0:
        return False
    try:
        fld = NumberField(p, max_precision=max(max_bits, START_BITS))
    except FieldError:
        return False
    encs = fld.root_enclosures()
    top = encs[0]
    if top.im != 0:
        return False
    one = Fraction(1)

    def pred(bits):
        es = fld.root_enclosures(bits)
        t = es[0]
        if t.re - t.rad <= 1 and t.re + t.rad > 1:
            return None
        if t.re + t.rad <= 1:
            return False
        undecided = False
        for e in es[1:]:
            if e.abs_upper() < one:
                continue
            if e.abs_lower() >= one:
                return False
            undecided = True
        return None if undecided else True

    res = fld.decide(pred, max_bits)
    return bool(res)
