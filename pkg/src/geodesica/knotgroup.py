"""Free-group words, 2x2 matrices over a number field, two-bridge
presentations, and Riley representations.

All group-theoretic equality checks are projective: matrices compare equal
iff they agree up to a global sign, since everything downstream happens in
PSL(2).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    BadFraction,
    IdentityFailed,
    NotARepresentation,
    NotTwoBridge,
)
from .numfield import FieldElement, NumberField, nf_inverse
from .polycore import RatPoly, poly_gcd, square_free_part


class Word:
    """Freely reduced word over indexed generators.

    Stored as a tuple of (generator index, nonzero exponent) with adjacent
    letters having distinct indices.
    """

    __slots__ = ("letters",)

    def __init__(self, letters: Sequence[tuple[int, int]] = ()):
        self.letters: tuple[tuple[int, int], ...] = self._reduce(letters)

    @staticmethod
    def _reduce(letters) -> tuple[tuple[int, int], ...]:
        out: list[tuple[int, int]] = []
        for g, e in letters:
            if e == 0:
                continue
            if out and out[-1][0] == g:
                s = out[-1][1] + e
                out.pop()
                if s != 0:
                    out.append((g, s))
            else:
                out.append((g, e))
        return tuple(out)

    @classmethod
    def identity(cls) -> "Word":
        return cls(())

    @classmethod
    def gen(cls, g: int, e: int = 1) -> "Word":
        return cls(((g, e),))

    @classmethod
    def from_string(cls, text: str, names: Sequence[str]) -> "Word":
        """Parse words like "a b^-1 a^2" or "s1 s2^-1" over named generators."""
        index = {n: i for i, n in enumerate(names)}
        letters = []
        for tok in text.split():
            m = re.fullmatch(r"([A-Za-z_]\w*)(?:\^(-?\d+))?", tok)
            if not m or m.group(1) not in index:
                raise ValueError(f"cannot parse word token {tok!r} over {list(names)}")
            letters.append((index[m.group(1)], int(m.group(2) or 1)))
        return cls(letters)

    def to_string(self, names: Sequence[str]) -> str:
        parts = []
        for g, e in self.letters:
            parts.append(names[g] if e == 1 else f"{names[g]}^{e}")
        return " ".join(parts) if parts else "1"

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def reversed_letters(self) -> "Word":
        """The word spelled backwards (NOT the inverse)."""
        return Word(tuple(reversed(self.letters)))

    def __pow__(self, n: int) -> "Word":
        if n == 0:
            return Word.identity()
        base = self if n > 0 else self.inverse()
        return Word(base.letters * abs(n))

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __len__(self):
        return sum(abs(e) for _, e in self.letters)

    def __repr__(self):
        return f"Word({list(self.letters)})"

    def exponent_sums(self, generator_count: int) -> tuple[int, ...]:
        sums = [0] * generator_count
        for g, e in self.letters:
            sums[g] += e
        return tuple(sums)


def abelianization_exponents(w: Word, generator_count: int) -> tuple[int, ...]:
    """Per-generator exponent sums of the word."""
    return w.exponent_sums(generator_count)


class Mat2:
    """2x2 matrix over a number field."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement):
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def identity(cls, K: NumberField) -> "Mat2":
        return cls(K.one(), K.zero(), K.zero(), K.one())

    def __mul__(self, o: "Mat2") -> "Mat2":
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def det(self) -> FieldElement:
        return self.a * self.d - self.b * self.c

    def trace(self) -> FieldElement:
        return self.a + self.d

    def adjugate(self) -> "Mat2":
        return Mat2(self.d, -self.b, -self.c, self.a)

    def inverse(self) -> "Mat2":
        det = self.det()
        adj = self.adjugate()
        inv = nf_inverse(det)
        return Mat2(adj.a * inv, adj.b * inv, adj.c * inv, adj.d * inv)

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return (
            self.a == other.a and self.b == other.b
            and self.c == other.c and self.d == other.d
        )

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def proj_equal(self, other: "Mat2") -> bool:
        """Equality in PSL(2): equal or negatives."""
        return self == other or self == -other

    def is_proj_identity(self) -> bool:
        K = self.a.field
        return self.proj_equal(Mat2.identity(K))

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __repr__(self):
        return f"Mat2({self.a!r}, {self.b!r}; {self.c!r}, {self.d!r})"

    def __pow__(self, n: int) -> "Mat2":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        K = self.a.field
        out = Mat2.identity(K)
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out


@dataclass
class KnotPresentation:
    """Finite presentation with a marked meridian and homological longitude."""

    name: str
    generator_names: tuple[str, ...]
    relators: tuple[Word, ...]
    meridian: Word
    longitude: Word
    genus: Optional[int] = None
    fibered: Optional[bool] = None

    def __post_init__(self):
        n = len(self.generator_names)
        total = sum(self.longitude.exponent_sums(n))
        if total != 0:
            raise ValueError(
                f"{self.name}: longitude abelianization total is {total}, expected 0"
            )

    @property
    def generator_count(self) -> int:
        return len(self.generator_names)

    def relator_exponent_matrix(self) -> list[list[int]]:
        n = self.generator_count
        return [list(r.exponent_sums(n)) for r in self.relators]


def two_bridge_presentation(
    p: int,
    q: int,
    name: str | None = None,
    genus: Optional[int] = None,
    fibered: Optional[bool] = None,
) -> KnotPresentation:
    """Standard two-bridge presentation for the fraction p/q.

    Generators a, b; relator a w b^-1 w^-1 with
    w = b^{e_1} a^{e_2} ... a^{e_{p-1}}, e_i = (-1)^floor(i q / p);
    longitude w v a^{-2e} with v the word w spelled backwards and
    e = sum(e_i).
    """
    if p <= 0 or p % 2 == 0 or not (0 < q < p) or math.gcd(p, q) != 1:
        raise BadFraction(f"invalid two-bridge fraction {p}/{q}")
    eps = [(-1) ** ((i * q) // p) for i in range(1, p)]
    letters = []
    for i, e in enumerate(eps, start=1):
        gen = 1 if i % 2 == 1 else 0  # odd positions are b
        letters.append((gen, e))
    w = Word(letters)
    v = w.reversed_letters()
    e = sum(eps)
    longitude = w * v * Word.gen(0, -2 * e)
    relator = Word.gen(0) * w * Word.gen(1, -1) * w.inverse()
    return KnotPresentation(
        name=name or f"two_bridge({p}/{q})",
        generator_names=("a", "b"),
        relators=(relator,),
        meridian=Word.gen(0),
        longitude=longitude,
        genus=genus,
        fibered=fibered,
    )


# ---------------------------------------------------------------------------
# Symbolic 2x2 matrices over Z[z] (for Riley polynomials and the pretzel
# entry identities, where no modulus is in play)
# ---------------------------------------------------------------------------


class PolyMat2:
    """2x2 matrix with RatPoly entries and determinant 1."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: RatPoly, b: RatPoly, c: RatPoly, d: RatPoly):
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def identity(cls) -> "PolyMat2":
        return cls(RatPoly.one(), RatPoly.zero(), RatPoly.zero(), RatPoly.one())

    def __mul__(self, o: "PolyMat2") -> "PolyMat2":
        return PolyMat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def adjugate(self) -> "PolyMat2":
        return PolyMat2(self.d, -self.b, -self.c, self.a)

    def det(self) -> RatPoly:
        return self.a * self.d - self.b * self.c

    def trace(self) -> RatPoly:
        return self.a + self.d

    def __pow__(self, n: int) -> "PolyMat2":
        base = self if n >= 0 else self.adjugate()  # valid for det 1
        n = abs(n)
        out = PolyMat2.identity()
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __sub__(self, o: "PolyMat2") -> "PolyMat2":
        return PolyMat2(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def entries(self):
        return (self.a, self.b, self.c, self.d)


def evaluate_word_poly(w: Word, images: Sequence[PolyMat2]) -> PolyMat2:
    out = PolyMat2.identity()
    for g, e in w.letters:
        out = out * (images[g] ** e)
    return out


def riley_polynomial(pres: KnotPresentation) -> RatPoly:
    """Square-free polynomial whose roots parameterize the parabolic
    representations a -> (1 1; 0 1), b -> (1 0; z 1) of a two-bridge group.

    Expands a.w - w.b over Z[z] and returns the monic square-free gcd of the
    four entries.
    """
    w = _two_bridge_w(pres)
    z = RatPoly.x()
    A = PolyMat2(RatPoly.one(), RatPoly.one(), RatPoly.zero(), RatPoly.one())
    B = PolyMat2(RatPoly.one(), RatPoly.zero(), z, RatPoly.one())
    W = evaluate_word_poly(w, [A, B])
    D = (A * W) - (W * B)
    g = RatPoly.zero()
    for entry in D.entries():
        g = entry if g.is_zero() else poly_gcd(g, entry)
    if g.is_zero():
        raise NotTwoBridge("a.w == w.b identically; degenerate presentation")
    return square_free_part(g)


def _two_bridge_w(pres: KnotPresentation) -> Word:
    """Extract w from the relator shape a w b^-1 w^-1."""
    if pres.generator_count != 2 or len(pres.relators) != 1:
        raise NotTwoBridge(f"{pres.name}: not a two-generator one-relator presentation")
    r = pres.relators[0]
    letters = r.letters
    if not letters or letters[0][0] != 0 or letters[0][1] < 1:
        raise NotTwoBridge(f"{pres.name}: relator does not start with the meridian a")
    # strip the leading a, then split at the b^-1 between w and w^-1
    rest = Word((letters[0][0], letters[0][1] - 1),) * Word(letters[1:]) if letters[0][1] > 1 else Word(letters[1:])
    n = len(rest.letters)
    # try every split: rest == w * b^-1 * w^-1
    flat = rest.letters
    for cut in range(n + 1):
        w = Word(flat[:cut])
        tail = Word(flat[cut:])
        candidate = Word.gen(1, -1) * w.inverse()
        if tail == candidate:
            return w
    raise NotTwoBridge(f"{pres.name}: relator is not of the form a w b^-1 w^-1")


# ---------------------------------------------------------------------------
# Representations over a number field
# ---------------------------------------------------------------------------


@dataclass
class MatrixRep:
    """Assignment of generators to det-1 matrices over a number field."""

    presentation: KnotPresentation
    field: NumberField
    images: tuple[Mat2, ...]

    def __post_init__(self):
        self.verify()

    def verify(self):
        K = self.field
        for i, m in enumerate(self.images):
            if m.det() != K.one():
                raise NotARepresentation(
                    f"{self.presentation.name}: generator {i} image has det != 1"
                )
        for r in self.relators_as_words():
            if not evaluate_word(self, r).is_proj_identity():
                raise NotARepresentation(
                    f"{self.presentation.name}: relator {r!r} does not evaluate to +-I"
                )
        mer = evaluate_word(self, self.presentation.meridian)
        tr = mer.trace()
        if tr != K.rational(2) and tr != K.rational(-2):
            raise NotARepresentation(
                f"{self.presentation.name}: meridian image is not parabolic"
            )

    def relators_as_words(self):
        return self.presentation.relators

    def longitude_matrix(self) -> Mat2:
        return evaluate_word(self, self.presentation.longitude)

    def longitude_translation(self) -> FieldElement:
        """tau with longitude image (-1, -tau; 0, -1), after sign normalization."""
        L = self.longitude_matrix()
        K = self.field
        if L.c != K.zero():
            raise NotARepresentation(
                f"{self.presentation.name}: longitude image is not upper triangular"
            )
        if L.a == K.rational(-1):
            return -L.b
        if L.a == K.rational(1):
            return L.b  # (-1)*(matrix) has the (-1,-tau;0,-1) shape
        raise NotARepresentation(
            f"{self.presentation.name}: longitude image diagonal is not +-1"
        )


def evaluate_word(rep: MatrixRep, w: Word) -> Mat2:
    """Exact product of generator-image powers, reduced mod the minpoly."""
    out = Mat2.identity(rep.field)
    for g, e in w.letters:
        out = out * (rep.images[g] ** e)
    return out


def build_representation(
    pres: KnotPresentation,
    minpoly: RatPoly,
    images: Optional[Sequence[Mat2]] = None,
    name: str = "Q(z)",
    check_riley: bool = True,
) -> MatrixRep:
    """Riley representation of a two-bridge presentation over Q[z]/(minpoly),
    or an explicitly supplied image list for other presentations.

    For the Riley form the minpoly must divide the Riley polynomial (exact
    division check); the relators are then verified to evaluate to +-I.
    """
    K = NumberField(minpoly, name)
    if images is None:
        if check_riley:
            riley = riley_polynomial(pres)
            if not (riley % minpoly).is_zero():
                raise NotARepresentation(
                    f"{pres.name}: minpoly does not divide the Riley polynomial"
                )
        z = K.gen()
        one, zero = K.one(), K.zero()
        images = (
            Mat2(one, one, zero, one),
            Mat2(one, zero, z, one),
        )
    return MatrixRep(presentation=pres, field=K, images=tuple(images))


def normalize_peripheral(rep: MatrixRep) -> MatrixRep:
    """Conjugate so the meridian image fixes infinity (upper triangular).

    The commuting longitude shares the parabolic fixed point, so it becomes
    upper triangular as well; downstream sectioning relies on that shape.
    User-supplied explicit representations arrive in arbitrary position, so
    the census loader funnels everything through here.
    """
    m = evaluate_word(rep, rep.presentation.meridian)
    K = rep.field
    if m.c.is_zero():
        return rep
    # a parabolic has the double fixed point (a - d) / (2c)
    x = (m.a - m.d) / (K.rational(2) * m.c)
    g = Mat2(K.zero(), -K.one(), K.one(), -x)  # det 1, sends x to infinity
    ginv = g.inverse()
    images = tuple(g * im * ginv for im in rep.images)
    return MatrixRep(presentation=rep.presentation, field=K, images=images)


# ---------------------------------------------------------------------------
# 7_4 subgroup identities (the twice-punctured torus inside 15/11)
# ---------------------------------------------------------------------------


def verify_subgroup_identities(rep: MatrixRep) -> dict:
    """Check the pinned matrix identities for the 7_4 surface subgroup.

    Raises IdentityFailed naming the first failing word; returns a record of
    the verified matrices on success.
    """
    pres = rep.presentation
    K = rep.field
    z = K.gen()
    x = Word.gen(0)
    y = Word.gen(1)
    w = _two_bridge_w(pres)
    ell = pres.longitude

    u = (z - 1) * (z - 2)  # (z-1)(z-2)
    s = z * z - z - 1

    expected = {
        "a = x^2 ell": (x * x * ell, Mat2(K.rational(-1), 4 * u, K.zero(), K.rational(-1))),
        "b = w y^-1 x y^-1 x y^-1": (
            w * y ** -1 * x * y ** -1 * x * y ** -1,
            Mat2(K.rational(5), 3 * u, s, K.rational(-1)),
        ),
        "c = x^-1 w x y^-1 x w^-1 x^2 w^-1 x": (
            x ** -1 * w * x * y ** -1 * x * w.inverse() * x * x * w.inverse() * x,
            Mat2(K.rational(7), 11 * u, s, K.rational(-3)),
        ),
    }
    verified = {}
    mats = {}
    for label, (word, target) in expected.items():
        got = evaluate_word(rep, word)
        if not (got == target):
            raise IdentityFailed(f"7_4 identity failed for word {label}")
        verified[label] = True
        mats[label.split(" ")[0]] = got

    a_m, b_m, c_m = mats["a"], mats["b"], mats["c"]
    d_m = a_m.inverse() * c_m * b_m.inverse() * c_m.inverse() * b_m
    d_target = Mat2(K.rational(-1), K.zero(), 4 * s, K.rational(-1))
    if not (d_m == d_target):
        raise IdentityFailed("7_4 identity failed for word d = a^-1 c b^-1 c^-1 b")
    verified["d = a^-1 c b^-1 c^-1 b"] = True

    w_m = evaluate_word(rep, w)
    lhs = w_m * d_m * w_m.inverse()
    rhs = evaluate_word(rep, x ** -2 * ell)
    if not lhs.proj_equal(rhs):
        raise IdentityFailed("7_4 identity failed: w d w^-1 != x^-2 ell")
    verified["w d w^-1 = x^-2 ell"] = True
    return verified
