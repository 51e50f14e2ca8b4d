"""Exact univariate polynomial arithmetic over Q, with real-root isolation,
certified complex roots, and irreducibility certificates.

Coefficients are `fractions.Fraction` throughout; nothing in this module
touches floating point except the complex root finder, whose output disks
are certified afterwards with outward-rounded interval arithmetic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath as mp

from .errors import RepeatedRoots, ZeroModulus, ZeroPolynomial
from .intervals import ComplexIv, iv, prec_guard

_Q = Fraction


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to an exact rational")


class RatPoly:
    """Dense univariate polynomial with exact rational coefficients.

    ``coeffs[i]`` is the coefficient of z^i.  The zero polynomial is the
    empty tuple; otherwise the leading coefficient is nonzero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "RatPoly":
        return cls(())

    @classmethod
    def one(cls) -> "RatPoly":
        return cls((1,))

    @classmethod
    def x(cls) -> "RatPoly":
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> "RatPoly":
        return cls((c,))

    @classmethod
    def from_json(cls, items: Sequence[str]) -> "RatPoly":
        """Little-endian list of "num" or "num/den" strings."""
        return cls(Fraction(s) for s in items)

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    # -- basic queries -------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == RatPoly.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "RatPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*z")
            else:
                terms.append(f"{c}*z^{i}")
        return "RatPoly(" + " + ".join(terms) + ")"

    # -- ring operations ------------------------------------------------

    def __add__(self, other) -> "RatPoly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [_Q(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [_Q(0)] * (n - len(other.coeffs))
        return RatPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> "RatPoly":
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "RatPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RatPoly":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "RatPoly":
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return RatPoly.zero()
        out = [_Q(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RatPoly":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = RatPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    @staticmethod
    def _coerce(other) -> "RatPoly":
        if isinstance(other, RatPoly):
            return other
        return RatPoly.constant(other)

    def divmod(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        if other.is_zero():
            raise ZeroModulus("division by the zero polynomial")
        q = [_Q(0)] * max(0, self.degree - other.degree + 1)
        rem = list(self.coeffs)
        dlc = other.leading()
        dd = other.degree
        while len(rem) - 1 >= dd and any(rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < dd:
                break
            shift = len(rem) - 1 - dd
            factor = rem[-1] / dlc
            q[shift] = factor
            for i, c in enumerate(other.coeffs):
                rem[shift + i] -= factor * c
            rem.pop()
        return RatPoly(q), RatPoly(rem)

    def __mod__(self, other: "RatPoly") -> "RatPoly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "RatPoly") -> "RatPoly":
        return self.divmod(other)[0]

    def scale(self, c) -> "RatPoly":
        c = _as_fraction(c)
        return RatPoly(a * c for a in self.coeffs)

    def monic(self) -> "RatPoly":
        if self.is_zero():
            raise ZeroPolynomial("cannot normalize the zero polynomial")
        return self.scale(1 / self.leading())

    def derivative(self) -> "RatPoly":
        return RatPoly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    # -- evaluation -----------------------------------------------------

    def eval(self, x: Fraction) -> Fraction:
        acc = _Q(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_iv(self, x) -> "iv.mpf":
        """Horner evaluation at an iv.mpf interval (outward-rounded)."""
        acc = iv.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * x + iv.mpf(c.numerator) / c.denominator
        return acc

    def eval_civ(self, x: ComplexIv) -> ComplexIv:
        acc = ComplexIv(iv.mpf(0), iv.mpf(0))
        for c in reversed(self.coeffs):
            acc = acc * x + ComplexIv.from_fraction(c)
        return acc

    def eval_mpc(self, x):
        acc = mp.mpc(0)
        for c in reversed(self.coeffs):
            acc = acc * x + mp.mpf(c.numerator) / c.denominator
        return acc

    # -- content and integer normalization -------------------------------

    def clear_denominators(self) -> "RatPoly":
        """Primitive integer polynomial with positive leading coefficient."""
        if self.is_zero():
            return self
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = math.gcd(*ints)
        if g:
            ints = [c // g for c in ints]
        if ints[-1] < 0:
            ints = [-c for c in ints]
        return RatPoly(ints)

    def int_coeffs(self) -> list[int]:
        out = []
        for c in self.coeffs:
            if c.denominator != 1:
                raise ValueError("polynomial does not have integer coefficients")
            out.append(c.numerator)
        return out


def poly_gcd(a: RatPoly, b: RatPoly) -> RatPoly:
    """Monic gcd over Q."""
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a.monic()


def square_free_part(p: RatPoly) -> RatPoly:
    if p.is_zero():
        raise ZeroPolynomial("square-free part of zero")
    g = poly_gcd(p, p.derivative())
    if g.degree <= 0:
        return p.monic()
    return (p // g).monic()


def poly_reduce_mod(a: RatPoly, m: RatPoly) -> RatPoly:
    """Remainder of a mod m, exact arithmetic."""
    if m.is_zero():
        raise ZeroModulus("reduction modulo the zero polynomial")
    return a % m


# ---------------------------------------------------------------------------
# Sturm real-root isolation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RootIsolation:
    """Isolating intervals for the distinct real roots, ascending.

    Each (lo, hi) pair is rational, contains exactly one real root of the
    square-free part, and the endpoints are not roots.
    """

    real_intervals: tuple[tuple[Fraction, Fraction], ...]
    multiplicity_free: bool

    @property
    def count(self) -> int:
        return len(self.real_intervals)


def sturm_chain(p: RatPoly) -> list[RatPoly]:
    chain = [p, p.derivative()]
    while not chain[-1].is_zero():
        chain.append(-(chain[-2] % chain[-1]))
    chain.pop()
    return chain


def _sign_variations_at(chain: Sequence[RatPoly], x: Fraction) -> int:
    signs = []
    for q in chain:
        v = q.eval(x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def _sign_variations_at_inf(chain: Sequence[RatPoly], positive: bool) -> int:
    signs = []
    for q in chain:
        if q.is_zero():
            continue
        lc = q.leading()
        s = 1 if lc > 0 else -1
        if not positive and q.degree % 2 == 1:
            s = -s
        signs.append(s)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def root_bound(p: RatPoly) -> Fraction:
    """Cauchy bound: all real roots lie in (-B, B)."""
    lc = abs(p.leading())
    b = max((abs(c) / lc for c in p.coeffs[:-1]), default=_Q(0))
    return b + 1


def sturm_real_roots(p: RatPoly, refine_to: Fraction = Fraction(1, 4)) -> RootIsolation:
    """Isolate the distinct real roots of p via its Sturm chain.

    The chain is built for the square-free part, so repeated roots are
    handled; `multiplicity_free` records whether p itself was square-free.
    Each isolating interval is bisected down to width <= refine_to.
    """
    if p.is_zero():
        raise ZeroPolynomial("cannot isolate roots of the zero polynomial")
    sf = square_free_part(p)
    multiplicity_free = sf.degree == p.degree
    if sf.degree == 0:
        return RootIsolation((), multiplicity_free)
    chain = sturm_chain(sf)
    total = _sign_variations_at_inf(chain, False) - _sign_variations_at_inf(chain, True)
    if total == 0:
        return RootIsolation((), multiplicity_free)

    bound = root_bound(sf)
    lo, hi = -bound, bound
    # endpoints of the search box are not roots (Cauchy bound is strict)
    intervals: list[tuple[Fraction, Fraction]] = []

    def split(a: Fraction, b: Fraction, va: int, vb: int):
        n = va - vb
        if n == 0:
            return
        if n == 1:
            a, b = _shrink_off_root(sf, a, b)
            intervals.append((a, b))
            return
        mid = (a + b) / 2
        while sf.eval(mid) == 0:
            # nudge the cut off a root; roots are finitely many
            mid = (a + mid) / 2
        vm = _sign_variations_at(chain, mid)
        split(a, mid, va, vm)
        split(mid, b, vm, vb)

    va = _sign_variations_at(chain, lo)
    vb = _sign_variations_at(chain, hi)
    split(lo, hi, va, vb)
    intervals = [refine_interval(sf, itv, refine_to) for itv in intervals]
    intervals.sort()
    return RootIsolation(tuple(intervals), multiplicity_free)


def _shrink_off_root(sf: RatPoly, a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
    """Endpoint-sign sanity for an isolating interval of the square-free part.

    split() never cuts on a root and the outer Cauchy box is strict, so the
    endpoints are off-root and a simple interior root forces a sign change.
    """
    fa, fb = sf.eval(a), sf.eval(b)
    assert fa != 0 and fb != 0 and (fa > 0) != (fb > 0)
    return a, b


def refine_interval(p: RatPoly, interval: tuple[Fraction, Fraction], width: Fraction) -> tuple[Fraction, Fraction]:
    """Bisect an isolating interval of square-free p down to the given width."""
    a, b = interval
    fa = p.eval(a)
    assert fa != 0
    sa = fa > 0
    while b - a > width:
        mid = (a + b) / 2
        fm = p.eval(mid)
        if fm == 0:
            quarter = (b - a) / 8
            a, b = mid - quarter, mid + quarter
            if p.eval(a) == 0 or p.eval(b) == 0:  # pragma: no cover - rationals
                continue
            sa = p.eval(a) > 0
            continue
        if (fm > 0) == sa:
            a = mid
        else:
            b = mid
    return a, b


def count_roots_by_grid(p: RatPoly, step: Fraction = Fraction(1, 64)) -> int:
    """Independent oracle: count sign changes of the square-free part on a
    fine rational grid over the Cauchy box.  Misses nothing when the grid is
    finer than the minimal root gap; intended for test polynomials only.
    """
    sf = square_free_part(p)
    bound = root_bound(sf)
    x = -bound
    count = 0
    prev = sf.eval(x)
    while x < bound:
        x += step
        cur = sf.eval(x)
        if cur == 0:
            count += 1
            x += step / 2
            cur = sf.eval(x)
        elif (prev > 0) != (cur > 0):
            count += 1
        prev = cur
    return count


# ---------------------------------------------------------------------------
# Certified complex roots (Durand-Kerner + Weierstrass disk certification)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertifiedRoot:
    center: complex  # mpmath mpc, midpoint approximation
    radius: object   # iv-sound upper bound, as mpmath mpf

    def contains_strictly_in_quadrant(self) -> int | None:
        """Quadrant index 1..4 if the disk lies strictly inside an open
        quadrant, else None."""
        re, im = self.center.real, self.center.imag
        r = self.radius
        if abs(re) <= r or abs(im) <= r:
            return None
        if re > 0:
            return 1 if im > 0 else 4
        return 2 if im > 0 else 3

    def modulus_exceeds_one(self) -> bool | None:
        m = abs(self.center)
        if m - self.radius > 1:
            return True
        if m + self.radius < 1:
            return False
        return None


@dataclass(frozen=True)
class ComplexRootSet:
    roots: tuple[CertifiedRoot, ...]
    precision_bits: int


def _weierstrass_radii(p: RatPoly, approx: list, bits: int):
    """Certified inclusion disks around pairwise-distinct approximations.

    All roots of p lie in the union of disks D(z_i, n*|W_i|) where W_i is the
    Weierstrass correction p(z_i) / (lc * prod_{j != i} (z_i - z_j)); when the
    disks are pairwise disjoint each contains exactly one root.  The radii are
    computed with outward-rounded interval arithmetic so the bound is sound.
    """
    n = p.degree
    with prec_guard(2 * bits + 40):
        pts = [ComplexIv.from_mpc(z) for z in approx]
        lc = ComplexIv.from_fraction(p.leading())
        radii = []
        for i, zi in enumerate(pts):
            num = p.eval_civ(ComplexIv.from_mpc(approx[i]))
            den = lc
            for j, zj in enumerate(pts):
                if j != i:
                    den = den * (zi - zj)
            w = num / den
            radii.append(mp.mpf(str((w.abs_upper()) * n)))
        return radii


def complex_roots(p: RatPoly, precision_bits: int = 128, max_iter: int = 400) -> ComplexRootSet:
    """All complex roots of a square-free polynomial with certified radii.

    Durand-Kerner iteration started from perturbed roots of unity; the
    returned disks are pairwise disjoint and each contains exactly one root.
    Raises RepeatedRoots if gcd(p, p') is nontrivial and PrecisionExhausted
    if disjoint certified disks cannot be produced at 8x the requested
    precision.
    """
    if precision_bits < 53:
        raise ValueError("precision_bits must be at least 53")
    if p.degree < 1:
        return ComplexRootSet((), precision_bits)
    if poly_gcd(p, p.derivative()).degree > 0:
        raise RepeatedRoots("input has repeated roots; deflate first")

    from .errors import PrecisionExhausted

    monic = p.monic()
    n = monic.degree
    target = mp.mpf(2) ** (-(precision_bits // 2))
    bits = precision_bits
    while bits <= 8 * precision_bits:
        roots = _durand_kerner(monic, n, bits, max_iter)
        radii = _weierstrass_radii(p, roots, bits)
        ok = all(r < target for r in radii) and _disks_disjoint(roots, radii)
        if ok:
            certified = tuple(
                CertifiedRoot(z, r) for z, r in sorted(
                    zip(roots, radii), key=lambda t: (mp.re(t[0]), mp.im(t[0]))
                )
            )
            return ComplexRootSet(certified, precision_bits)
        bits *= 2
    raise PrecisionExhausted(f"could not certify disjoint root disks for {p!r}")


def _durand_kerner(monic: RatPoly, n: int, bits: int, max_iter: int):
    with mp.workprec(bits + 20):
        # perturbed roots of unity, radius from the Cauchy bound
        b = float(root_bound(monic))
        rad = mp.mpf(max(1.0, min(b, 1e6))) * mp.mpf("0.9")
        zs = [rad * mp.exp(2j * mp.pi * (k + mp.mpf("0.25")) / n) + mp.mpf("0.1") * (k % 3)
              for k in range(n)]
        tol = mp.mpf(2) ** (-(bits - 4))
        for _ in range(max_iter):
            maxstep = mp.mpf(0)
            new = []
            for i, zi in enumerate(zs):
                num = monic.eval_mpc(zi)
                den = mp.mpc(1)
                for j, zj in enumerate(zs):
                    if i != j:
                        den *= (zi - zj)
                if den == 0:
                    den = mp.mpc(tol)
                step = num / den
                maxstep = max(maxstep, abs(step))
                new.append(zi - step)
            zs = new
            if maxstep < tol:
                break
        return zs


def _disks_disjoint(centers, radii) -> bool:
    for (zi, ri), (zj, rj) in itertools.combinations(zip(centers, radii), 2):
        if abs(zi - zj) <= ri + rj:
            return False
    return True


# ---------------------------------------------------------------------------
# Irreducibility certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IrreducibilityVerdict:
    status: str  # "irreducible" | "reducible" | "unknown"
    witness: str | None = None
    factor: RatPoly | None = None

    @property
    def is_irreducible(self) -> bool:
        return self.status == "irreducible"


_SMALL_FACTOR_PROBES = (
    RatPoly((1, 1)),      # z + 1
    RatPoly((-1, 1)),     # z - 1
    RatPoly((1, 0, 1)),   # z^2 + 1
    RatPoly((1, 1, 1)),   # z^2 + z + 1
    RatPoly((1, -1, 1)),  # z^2 - z + 1
)


def rational_roots(p: RatPoly) -> list[Fraction]:
    """All rational roots, by the rational-root test on the primitive part."""
    prim = p.clear_denominators()
    ints = prim.int_coeffs()
    if not ints:
        return []
    # strip factors of z
    shift = 0
    while ints[shift] == 0:
        shift += 1
    roots = [] if shift == 0 else [Fraction(0)]
    a0, an = abs(ints[shift]), abs(ints[-1])
    for r in _divisors(a0):
        for s in _divisors(an):
            for cand in (Fraction(r, s), Fraction(-r, s)):
                if p.eval(cand) == 0 and cand not in roots:
                    roots.append(cand)
    return sorted(roots)


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _mod_p_coeffs(ints: list[int], q: int) -> list[int]:
    cs = [c % q for c in ints]
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _poly_mod_divmod(a: list[int], b: list[int], q: int) -> tuple[list[int], list[int]]:
    a = a[:]
    inv = pow(b[-1], -1, q)
    qout = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(a):
        while a and a[-1] % q == 0:
            a.pop()
        if len(a) < len(b):
            break
        coef = (a[-1] * inv) % q
        shift = len(a) - len(b)
        qout[shift] = coef
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * c) % q
        a.pop()
    while a and a[-1] % q == 0:
        a.pop()
    return qout, a


def _poly_mod_gcd(a: list[int], b: list[int], q: int) -> list[int]:
    while b:
        _, r = _poly_mod_divmod(a, b, q)
        a, b = b, r
    if a:
        inv = pow(a[-1], -1, q)
        a = [(c * inv) % q for c in a]
    return a


def _poly_mod_mul(a: list[int], b: list[int], q: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % q
    while out and out[-1] == 0:
        out.pop()
    return out


def _poly_mod_powmod(base: list[int], e: int, mod: list[int], q: int) -> list[int]:
    result = [1]
    base = _poly_mod_divmod(base, mod, q)[1]
    while e:
        if e & 1:
            result = _poly_mod_divmod(_poly_mod_mul(result, base, q), mod, q)[1]
        base = _poly_mod_divmod(_poly_mod_mul(base, base, q), mod, q)[1]
        e >>= 1
    return result


def _distinct_degree_pattern(f: list[int], q: int) -> list[int] | None:
    """Degrees (with multiplicity) of the irreducible factors of square-free
    f over F_q, via distinct-degree decomposition.  None if f is not
    square-free mod q.
    """
    df = [(i * c) % q for i, c in enumerate(f)][1:]
    while df and df[-1] == 0:
        df.pop()
    if _poly_mod_gcd(f, df, q) != [1]:
        return None
    pattern = []
    rem = f[:]
    d = 0
    h = [0, 1]  # x
    while len(rem) - 1 > 0:
        d += 1
        if 2 * d > len(rem) - 1:
            pattern.append(len(rem) - 1)
            break
        h = _poly_mod_powmod(h, q, rem, q)
        hx = h[:]
        if len(hx) >= 2:
            hx[1] = (hx[1] - 1) % q
        else:
            hx = hx + [0] * (2 - len(hx))
            hx[1] = (hx[1] - 1) % q
        while hx and hx[-1] == 0:
            hx.pop()
        g = _poly_mod_gcd(rem, hx, q)
        if len(g) - 1 > 0:
            count = (len(g) - 1) // d
            pattern.extend([d] * count)
            rem = _poly_mod_divmod(rem, g, q)[0]
            h = _poly_mod_divmod(h, rem, q)[1]
    return sorted(pattern)


def _subset_sums(pattern: list[int]) -> set[int]:
    sums = {0}
    for d in pattern:
        sums |= {s + d for s in sums}
    return sums


_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


def irreducibility_certificate(p: RatPoly, prime_budget: int = 12) -> IrreducibilityVerdict:
    """Sound irreducibility/reducibility certificate over Q.

    Irreducible is only returned with a witness: rational-root exclusion for
    degree <= 3, an irreducible image mod a good prime, or an empty
    intersection of achievable factor degrees across several primes.
    Reducible always carries an exact factor.  Unknown is the fallback.
    """
    prim = p.clear_denominators()
    n = prim.degree
    if n <= 0:
        return IrreducibilityVerdict("unknown", witness="constant polynomial")
    if n == 1:
        return IrreducibilityVerdict("irreducible", witness="degree 1")

    for r in rational_roots(prim):
        return IrreducibilityVerdict("reducible", factor=RatPoly((-r, 1)))
    if n <= 3:
        return IrreducibilityVerdict(
            "irreducible", witness="degree <= 3 with no rational roots"
        )
    for probe in _SMALL_FACTOR_PROBES:
        q, r = prim.divmod(probe)
        if r.is_zero() and 0 < probe.degree < n:
            return IrreducibilityVerdict("reducible", factor=probe)

    ints = prim.int_coeffs()
    achievable: set[int] | None = None
    used = []
    for q in _PRIMES[:prime_budget]:
        if ints[-1] % q == 0:
            continue
        f = _mod_p_coeffs(ints, q)
        if len(f) - 1 != n:
            continue
        pattern = _distinct_degree_pattern(f, q)
        if pattern is None:
            continue  # not square-free mod q
        if pattern == [n]:
            return IrreducibilityVerdict("irreducible", witness=f"irreducible mod {q}")
        used.append(q)
        sums = _subset_sums(pattern)
        achievable = sums if achievable is None else (achievable & sums)
        proper = {d for d in achievable if 0 < d < n}
        if not proper:
            return IrreducibilityVerdict(
                "irreducible",
                witness=f"factor-degree patterns mod {used} exclude proper factors",
            )
    return IrreducibilityVerdict("unknown", witness="prime budget exhausted")
