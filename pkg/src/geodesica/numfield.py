"""Arithmetic in Q(z) = Q[z]/(m(z)) with certified real and complex embeddings.

Elements live in the power basis 1, z, ..., z^{d-1} with exact rational
coordinates.  Embeddings return outward-rounded intervals refined on demand;
refining precision only shrinks the enclosure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath as mp

from .errors import DivisionByZero, PrecisionExhausted
from .intervals import ComplexIv, iv, prec_guard
from .polycore import (
    ComplexRootSet,
    RatPoly,
    RootIsolation,
    complex_roots,
    poly_gcd,
    refine_interval,
    sturm_real_roots,
)

_PRECISION_HARD_CAP = 1 << 16


class NumberField:
    """Q[z]/(m(z)) for a monic integer minimal polynomial m.

    Irreducibility is the caller's responsibility (a certificate, a theorem,
    or an ingested assumption); arithmetic only needs m to be nonzero, but
    inverses of nonzero elements exist for all inputs that arise here exactly
    when m is irreducible.
    """

    def __init__(self, minpoly: RatPoly, name: str = "Q(z)"):
        minpoly = RatPoly(minpoly.coeffs)
        if minpoly.degree < 1:
            raise ValueError("minimal polynomial must have degree >= 1")
        if minpoly.leading() != 1:
            raise ValueError("minimal polynomial must be monic")
        if any(c.denominator != 1 for c in minpoly.coeffs):
            raise ValueError("minimal polynomial must have integer coefficients")
        self.minpoly = minpoly
        self.degree = minpoly.degree
        self.name = name
        self._real_isolation: Optional[RootIsolation] = None
        # keyed by (index, width_bits) / precision_bits so repeated queries
        # reproduce the same enclosure bit-for-bit (report determinism)
        self._real_enclosures: dict[tuple[int, int], tuple[Fraction, Fraction]] = {}
        self._complex_roots: dict[int, ComplexRootSet] = {}

    def __repr__(self):
        return f"NumberField({self.name}, deg {self.degree})"

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minpoly == other.minpoly

    def __hash__(self):
        return hash(self.minpoly)

    # -- element constructors ------------------------------------------

    def element(self, coeffs: Sequence) -> "FieldElement":
        vec = [Fraction(c) for c in coeffs]
        if len(vec) > self.degree:
            vec = list((RatPoly(vec) % self.minpoly).coeffs)
        vec += [Fraction(0)] * (self.degree - len(vec))
        return FieldElement(self, tuple(vec))

    def from_poly(self, p: RatPoly) -> "FieldElement":
        return self.element(list((p % self.minpoly).coeffs))

    def zero(self) -> "FieldElement":
        return self.element(())

    def one(self) -> "FieldElement":
        return self.element((1,))

    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return self.element((-self.minpoly.coeffs[0],))
        return self.element((0, 1))

    def rational(self, c) -> "FieldElement":
        return self.element((Fraction(c),))

    # -- places ----------------------------------------------------------

    def to_json(self) -> dict:
        return {"minpoly": self.minpoly.to_json(), "name": self.name}

    @classmethod
    def from_json(cls, data: dict) -> "NumberField":
        return cls(RatPoly.from_json(data["minpoly"]), data.get("name", "Q(z)"))

    def real_isolation(self) -> RootIsolation:
        if self._real_isolation is None:
            self._real_isolation = sturm_real_roots(self.minpoly)
        return self._real_isolation

    def real_places(self) -> list["RealPlace"]:
        return [RealPlace(self, i) for i in range(self.real_isolation().count)]

    def complex_root_set(self, precision_bits: int = 128) -> ComplexRootSet:
        if precision_bits not in self._complex_roots:
            self._complex_roots[precision_bits] = complex_roots(
                self.minpoly, precision_bits
            )
        return self._complex_roots[precision_bits]

    def geometric_place(self, precision_bits: int = 128) -> "ComplexPlace":
        """The complex root with positive imaginary part of largest modulus;
        the conventional choice for the holonomy embedding when the census
        does not pin one explicitly."""
        rs = self.complex_root_set(precision_bits)
        best = None
        for idx, r in enumerate(rs.roots):
            if mp.im(r.center) > 0:
                if best is None or abs(r.center) > abs(rs.roots[best].center):
                    best = idx
        if best is None:
            raise ValueError("no complex root with positive imaginary part")
        return ComplexPlace(self, best)

    def real_root_enclosure(self, index: int, width_bits: int) -> tuple[Fraction, Fraction]:
        """Dyadic rational enclosure of the index-th real root (ascending),
        of width <= 2^-width_bits, by exact bisection from the base isolating
        interval (a deterministic function of width_bits)."""
        key = (index, width_bits)
        if key not in self._real_enclosures:
            base = self.real_isolation().real_intervals[index]
            target = Fraction(1, 2 ** width_bits)
            self._real_enclosures[key] = refine_interval(self.minpoly, base, target)
        return self._real_enclosures[key]


@dataclass(frozen=True)
class RealPlace:
    """Real embedding, indexed by the ascending order of the real roots."""

    field: NumberField
    index: int

    def root_interval(self, precision_bits: int = 64):
        lo, hi = self.field.real_root_enclosure(self.index, precision_bits + 8)
        with prec_guard(precision_bits + 16):
            return iv.mpf([str(lo), str(hi)])

    def embed(self, e: "FieldElement", precision_bits: int = 64):
        """iv.mpf enclosure of e at this place, radius < 2^-(precision_bits/2)."""
        target = mp.mpf(2) ** (-(precision_bits // 2))
        bits = precision_bits
        while bits <= _PRECISION_HARD_CAP:
            with prec_guard(bits + 16):
                x = self.root_interval(bits)
                val = RatPoly(e.coeffs).eval_iv(x)
                if mp.mpf(val.delta.b) < target:
                    return val
            bits *= 2
        raise PrecisionExhausted(
            f"embedding at real place {self.index} did not reach 2^-{precision_bits // 2}"
        )

    def embed_float(self, e: "FieldElement", precision_bits: int = 64) -> mp.mpf:
        val = self.embed(e, precision_bits)
        return mp.mpf(val.mid.a)


@dataclass(frozen=True)
class ComplexPlace:
    """Complex embedding given by a certified root disk of the minpoly."""

    field: NumberField
    root_index: int

    def root_box(self, precision_bits: int = 128) -> ComplexIv:
        r = self.field.complex_root_set(precision_bits).roots[self.root_index]
        with prec_guard(precision_bits + 16):
            rad = iv.mpf(r.radius)
            return ComplexIv(
                iv.mpf(mp.re(r.center)) + iv.mpf([-1, 1]) * rad,
                iv.mpf(mp.im(r.center)) + iv.mpf([-1, 1]) * rad,
            )

    def embed(self, e: "FieldElement", precision_bits: int = 128) -> ComplexIv:
        target = mp.mpf(2) ** (-(precision_bits // 2))
        bits = precision_bits
        while bits <= _PRECISION_HARD_CAP:
            with prec_guard(bits + 16):
                box = self.root_box(bits)
                val = RatPoly(e.coeffs).eval_civ(box)
                if val.max_width() < target:
                    return val
            bits *= 2
        raise PrecisionExhausted(
            f"complex embedding at root {self.root_index} did not converge"
        )


class FieldElement:
    """Residue in Q[z]/(m), stored as a rational vector in the power basis."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: tuple[Fraction, ...]):
        self.field = field
        self.coeffs = coeffs

    def __repr__(self):
        return f"FieldElement({RatPoly(self.coeffs)!r} in {self.field.name})"

    def as_poly(self) -> RatPoly:
        return RatPoly(self.coeffs)

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coeffs[0]

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == self.field.rational(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        return self.field.rational(other)

    def __add__(self, other):
        other = self._coerce(other)
        return FieldElement(
            self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        prod = RatPoly(self.coeffs) * RatPoly(other.coeffs)
        return self.field.from_poly(prod)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * nf_inverse(self._coerce(other))

    def __rtruediv__(self, other):
        return self._coerce(other) * nf_inverse(self)

    def __pow__(self, n: int):
        if n < 0:
            return nf_inverse(self) ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


def nf_inverse(e: FieldElement) -> FieldElement:
    """Multiplicative inverse via the extended Euclidean algorithm in Q[z]."""
    if e.is_zero():
        raise DivisionByZero("inverse of zero field element")
    m = e.field.minpoly
    a = RatPoly(e.coeffs)
    # extended gcd: s*a + t*m = g
    r0, r1 = a, m
    s0, s1 = RatPoly.one(), RatPoly.zero()
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if r0.degree != 0:
        raise DivisionByZero(
            "element is a zero divisor; minimal polynomial is reducible"
        )
    inv = s0.scale(1 / r0.coeffs[0])
    return e.field.from_poly(inv)


def minimal_polynomial(e: FieldElement) -> RatPoly:
    """Monic minimal polynomial of e over Q.

    Builds the matrix of powers 1, e, e^2, ..., e^k in the power basis and
    takes the first exact linear dependence (Gaussian elimination over Q).
    """
    d = e.field.degree
    rows: list[list[Fraction]] = []  # reduced echelon rows, with combination
    combos: list[list[Fraction]] = []
    cur = e.field.one()
    for k in range(d + 1):
        vec = list(cur.coeffs)
        combo = [Fraction(0)] * (d + 1)
        combo[k] = Fraction(1)
        # reduce vec against existing rows
        for row, rc in zip(rows, combos):
            pivot = next(i for i, v in enumerate(row) if v != 0)
            if vec[pivot] != 0:
                f = vec[pivot] / row[pivot]
                vec = [v - f * r for v, r in zip(vec, row)]
                combo = [c - f * rc_i for c, rc_i in zip(combo, rc)]
        if all(v == 0 for v in vec):
            return RatPoly(combo[: k + 1]).monic()
        rows.append(vec)
        combos.append(combo)
        cur = cur * e
    raise AssertionError("no linear dependence among d+1 powers")  # pragma: no cover


def is_algebraic_integer(e: FieldElement) -> bool:
    """True iff the monic minimal polynomial of e has integer coefficients."""
    mp_e = minimal_polynomial(e)
    return all(c.denominator == 1 for c in mp_e.coeffs)


def contains_obvious_subfield_flags(field: NumberField, manual_flags: Optional[dict] = None) -> dict:
    """Field-hypothesis record for the obstruction theorems.

    Prime degree certifies "no proper subfield" outright; otherwise the
    verdict relies on ingested flags (the census carries them per knot).
    """
    manual_flags = dict(manual_flags or {})
    d = field.degree
    degree_odd = d % 2 == 1
    degree_odd_prime = degree_odd and d > 1 and _is_prime(d)
    record = {
        "degree": d,
        "degree_odd": degree_odd,
        "degree_odd_prime": degree_odd_prime,
        "no_proper_real_subfield": None,
        "no_quadratic_subfield": None,
        "certified": False,
        "manual_subfield_flag": manual_flags or None,
    }
    if degree_odd_prime:
        record["no_proper_real_subfield"] = True
        record["no_quadratic_subfield"] = True
        record["certified"] = True
        return record
    if degree_odd:
        # no quadratic subfield is automatic for odd degree; the real-subfield
        # claim must come from data
        record["no_quadratic_subfield"] = True
    if "no_real_subfield" in manual_flags:
        record["no_proper_real_subfield"] = bool(manual_flags["no_real_subfield"])
    if "no_quadratic_subfield" in manual_flags:
        record["no_quadratic_subfield"] = bool(manual_flags["no_quadratic_subfield"])
    return record


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True
