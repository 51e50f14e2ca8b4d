"""The balanced pretzel family P(2k+1, 2k+1, 2k+1): trace-field recursions,
holonomy, root census, and the tangency-chain identities.

Polynomial identities are verified over Z[z] (no modulus) wherever the
source identity is polynomial; representation identities are verified in
Q[z]/(lambda_k).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .errors import FactorIdentityFailed, NotARepresentation, PrecisionExhausted
from .knotgroup import (
    KnotPresentation,
    Mat2,
    MatrixRep,
    PolyMat2,
    Word,
    evaluate_word,
    evaluate_word_poly,
)
from .numfield import NumberField, nf_inverse
from .polycore import (
    RatPoly,
    complex_roots,
    irreducibility_certificate,
    sturm_real_roots,
)


@lru_cache(maxsize=None)
def lambda_poly(k: int) -> RatPoly:
    """Trace-field polynomial of P(2k+1,2k+1,2k+1), degree 2k+1.

    Defined by lambda_k = (z^2+2) lambda_{k-1} - lambda_{k-2} with
    lambda_0 = z-1 and lambda_1 = z^3-z^2+3z-1; the closed binomial formula
    is checked against the recursion in the test suite.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return RatPoly((-1, 1))
    if k == 1:
        return RatPoly((-1, 3, -1, 1))
    mult = RatPoly((2, 0, 1))
    prev, cur = lambda_poly(0), lambda_poly(1)
    for _ in range(k - 1):
        prev, cur = cur, mult * cur - prev
    return cur


def lambda_closed_formula(k: int) -> RatPoly:
    """The binomial closed form for lambda_k, expanded exactly."""
    coeffs = [Fraction(0)] * (2 * k + 2)
    for j in range(k + 1):
        coeffs[2 * j] -= _binom(k + j, 2 * j)
        coeffs[2 * j + 1] += _binom(k + j, 2 * j + 1) + _binom(k + j + 1, 2 * j + 1)
    return RatPoly(coeffs)


def _binom(n: int, r: int) -> int:
    if r < 0 or r > n:
        return 0
    out = 1
    for i in range(r):
        out = out * (n - i) // (i + 1)
    return out


@lru_cache(maxsize=None)
def alpha_beta_delta(k: int) -> tuple[RatPoly, RatPoly, RatPoly]:
    """(alpha_k, beta_k, delta_k): entries of the k-th power of the tangle
    matrix, via the shared Cayley-Hamilton recursion.

    Verifies delta_k = alpha_k - 2 beta_k z + beta_k z^2 before returning.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    a0, b0, d0 = RatPoly.one(), RatPoly.zero(), RatPoly.one()
    a1 = RatPoly((1, -1, 1))
    b1 = RatPoly((-1,))
    d1 = RatPoly((1, 1))
    seq = [(a0, b0, d0), (a1, b1, d1)]
    mult = RatPoly((2, 0, 1))
    while len(seq) <= k:
        (pa, pb, pd), (ca, cb, cd) = seq[-2], seq[-1]
        seq.append((mult * ca - pa, mult * cb - pb, mult * cd - pd))
    a, b, d = seq[k]
    if d != a - RatPoly((0, 2)) * b + RatPoly((0, 0, 1)) * b:
        raise FactorIdentityFailed(f"delta identity failed at k={k}")  # pragma: no cover
    return a, b, d


# generator images over Z[z] (no modulus)

def _poly_generators() -> tuple[PolyMat2, PolyMat2, PolyMat2]:
    one, zero, z = RatPoly.one(), RatPoly.zero(), RatPoly.x()
    z2 = RatPoly((0, 0, 1))
    s1 = PolyMat2(one, one, zero, one)
    s2 = PolyMat2(one, zero, -z2, one)
    s3 = PolyMat2(one + z, one, -z2, one - z)
    return s1, s2, s3


def pretzel_words(k: int) -> dict[str, Word]:
    """The standard words: relator conjugators v, w; Seifert generators x, y;
    longitude; and the chain words g_j, h_j for 0 <= j <= 2k.

    Generators are indexed 0, 1, 2 for s1, s2, s3.
    """
    s1, s2, s3 = Word.gen(0), Word.gen(1), Word.gen(2)
    v = (s3.inverse() * s2) ** k * s3.inverse() * (s1 * s3.inverse()) ** k
    w = (s1.inverse() * s3) ** k * s1.inverse() * (s2 * s1.inverse()) ** k
    x = (s1 * s2.inverse()) ** (k + 1) * (s3 * s2.inverse()) ** k
    y = (s2 * s3.inverse()) ** (k + 1) * (s1 * s3.inverse()) ** k
    longitude = y.inverse() * x * y * x.inverse()
    words = {"v": v, "w": w, "x": x, "y": y, "longitude": longitude}
    for j in range(0, 2 * k + 1):
        if j % 2 == 1:
            words[f"g{j}"] = (s2 * s1.inverse()) ** ((j - 1) // 2) * s2
            words[f"h{j}"] = (s1 * s3.inverse()) ** ((j + 1) // 2)
        else:
            words[f"g{j}"] = (s2 * s1.inverse()) ** (j // 2)
            words[f"h{j}"] = (s1 * s3.inverse()) ** (j // 2) * s1
    return words


def pretzel_presentation(k: int, name: Optional[str] = None) -> KnotPresentation:
    """Group presentation <s1,s2,s3 | v s1 = s2 v, w s2 = s3 w> with the
    Seifert-surface longitude.  The balanced pretzel Seifert surface has
    genus 1."""
    words = pretzel_words(k)
    v, w = words["v"], words["w"]
    rel1 = v * Word.gen(0) * v.inverse() * Word.gen(1, -1)
    rel2 = w * Word.gen(1) * w.inverse() * Word.gen(2, -1)
    return KnotPresentation(
        name=name or f"P({2*k+1},{2*k+1},{2*k+1})",
        generator_names=("s1", "s2", "s3"),
        relators=(rel1, rel2),
        meridian=Word.gen(0),
        longitude=words["longitude"],
        genus=1,
        fibered=False,
    )


@dataclass
class PretzelData:
    k: int
    lam: RatPoly
    field: NumberField
    rep: MatrixRep
    words: dict[str, Word]
    irreducibility: str  # "certified" | "assumed"


def pretzel_holonomy(k: int, name: Optional[str] = None) -> PretzelData:
    """Holonomy representation of P(2k+1,...) over Q[z]/(lambda_k).

    Verifies both relators, the trace-field generator traces, and the
    longitude shape (-1, -tau; 0, -1) with tau = -6/z.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    lam = lambda_poly(k)
    cert = irreducibility_certificate(lam)
    K = NumberField(lam, name or f"Q(z_{k})")
    z = K.gen()
    one, zero = K.one(), K.zero()
    images = (
        Mat2(one, one, zero, one),
        Mat2(one, zero, -(z * z), one),
        Mat2(one + z, one, -(z * z), one - z),
    )
    pres = pretzel_presentation(k, name)
    rep = MatrixRep(presentation=pres, field=K, images=images)  # verifies relators

    # trace-field generators (the census degree fact rests on these)
    t12 = evaluate_word(rep, Word.gen(0) * Word.gen(1)).trace()
    t23 = evaluate_word(rep, Word.gen(1) * Word.gen(2)).trace()
    t123 = evaluate_word(rep, Word.gen(0) * Word.gen(1) * Word.gen(2)).trace()
    if t12 != K.rational(2) - z * z or t23 != t12:
        raise NotARepresentation(f"P(k={k}): tr(s1 s2) != 2 - z^2")
    if t123 != K.rational(2) - 3 * z * z - z * z * z:
        raise NotARepresentation(f"P(k={k}): tr(s1 s2 s3) != 2 - 3z^2 - z^3")

    tau = rep.longitude_translation()
    if tau != K.rational(-6) * nf_inverse(z):
        raise NotARepresentation(f"P(k={k}): longitude translation is not -6/z")

    return PretzelData(
        k=k,
        lam=lam,
        field=K,
        rep=rep,
        words=pretzel_words(k),
        irreducibility="certified" if cert.is_irreducible else "assumed",
    )


# ---------------------------------------------------------------------------
# Entry/factorization identities over Z[z]
# ---------------------------------------------------------------------------


def relator_factorization_check(k: int) -> dict:
    """Verify the pinned entry identities of the conjugator matrices over
    Z[z]: the v11 factorization, v21 = -z^2 v12, the two w-entry identities,
    and the doubled-trace identity.  All sides are computed independently
    (matrix products on one side, recursions on the other).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    s1, s2, s3 = _poly_generators()
    a, b, _d = alpha_beta_delta(k)
    z = RatPoly.x()
    z2 = RatPoly((0, 0, 1))

    words = pretzel_words(k)
    V = evaluate_word_poly(words["v"], [s1, s2, s3])
    W = evaluate_word_poly(words["w"], [s1, s2, s3])

    quad = b * z2 + (b - a) * z + a     # equals -lambda_k
    linear = -(b * z) + a
    report = {}

    if V.a != linear * quad:
        raise FactorIdentityFailed(f"k={k}: v11 != (-beta z + alpha)(beta z^2 + (beta-alpha) z + alpha)")
    report["v11_factorization"] = True
    if quad != -lambda_poly(k):
        raise FactorIdentityFailed(f"k={k}: quadratic-form combination is not -lambda_k")
    report["quad_is_minus_lambda"] = True
    if V.c != -(z2 * V.b):
        raise FactorIdentityFailed(f"k={k}: v21 != -z^2 v12")
    report["v21_identity"] = True
    if (W.a - W.d) * z + W.c != RatPoly.zero():
        raise FactorIdentityFailed(f"k={k}: (w11 - w22) z + w21 != 0")
    report["w_offdiag_identity"] = True
    if W.b * z + W.d != linear * quad:
        raise FactorIdentityFailed(f"k={k}: w12 z + w22 != v11 factorization")
    report["w_entry_identity"] = True

    prefix = evaluate_word_poly((Word.gen(0) * Word.gen(2, -1)) ** k * Word.gen(0), [s1, s2, s3])
    if prefix.trace() != RatPoly((2,)) * linear:
        raise FactorIdentityFailed(f"k={k}: tr((s1 s3^-1)^k s1) != 2(-beta z + alpha)")
    report["trace_identity"] = True

    # the four closed forms of Lemma-style powers, against direct matrix powers
    t32 = (s3.adjugate() * s2) ** k
    if (t32.a, t32.b, t32.c, t32.d) != (a, b, RatPoly((0, 0, 0, 1)) * b, _d):
        raise FactorIdentityFailed(f"k={k}: (s3^-1 s2)^k closed form failed")
    report["power_closed_forms"] = True
    return report


# ---------------------------------------------------------------------------
# Psi_k root census
# ---------------------------------------------------------------------------


def psi_poly(k: int) -> RatPoly:
    """psi_k(x) = x^{4k+2} - 1 + sum_{j=0}^{2k} (-1)^{j+1} x^{2j+1}."""
    coeffs = [Fraction(0)] * (4 * k + 3)
    coeffs[0] = Fraction(-1)
    coeffs[4 * k + 2] = Fraction(1)
    for j in range(2 * k + 1):
        coeffs[2 * j + 1] += (-1) ** (j + 1)
    return RatPoly(coeffs)


def phi_poly(k: int) -> RatPoly:
    """phi_k = (x^2 + 1) psi_k = x^{4k+4} - x^{4k+3} + x^{4k+2} - x^2 - x - 1."""
    return RatPoly((1, 0, 1)) * psi_poly(k)


def psi_from_lambda(k: int) -> RatPoly:
    """x^{2k+1} lambda_k(x - 1/x), expanded exactly as a polynomial.

    Since (x - 1/x)^i x^{2k+1} = (x^2-1)^i x^{2k+1-i}, the Laurent expansion
    collapses to an honest polynomial.
    """
    lam = lambda_poly(k)
    x2m1 = RatPoly((-1, 0, 1))
    out = RatPoly.zero()
    for i, c in enumerate(lam.coeffs):
        if c == 0:
            continue
        term = (x2m1 ** i) * RatPoly.constant(c)
        shift = 2 * k + 1 - i
        term = term * RatPoly([0] * shift + [1]) if shift else term
        out = out + term
    return out


@dataclass(frozen=True)
class PsiCensus:
    k: int
    real_count: int
    per_quadrant: tuple[int, int, int, int]
    right_half_moduli_exceed_one: bool
    precision_bits: int


def psi_root_census(k: int, precision_bits: int = 128) -> PsiCensus:
    """Certified census of the roots of psi_k: 2 real roots, k per open
    quadrant, and every right-half-plane root outside the unit circle.

    Raises PrecisionExhausted if any root disk cannot be placed strictly
    inside an open quadrant / on one side of the unit circle after the
    escalation built into the certifier.
    """
    psi = psi_poly(k)
    real_count = sturm_real_roots(psi).count

    bits = max(precision_bits, 64)
    rs = complex_roots(psi, bits)
    per_quadrant = [0, 0, 0, 0]
    right_ok = True
    for r in rs.roots:
        quad = r.contains_strictly_in_quadrant()
        if quad is None:
            # must be one of the certified real roots: the disk must miss the
            # imaginary axis, else the census is indeterminate
            if not (abs(r.center.real) > r.radius):
                raise PrecisionExhausted(
                    f"psi_{k}: root disk touches both axes at {bits} bits"
                )
            continue
        per_quadrant[quad - 1] += 1
        if quad in (1, 4):
            exceeds = r.modulus_exceeds_one()
            if exceeds is None:
                raise PrecisionExhausted(
                    f"psi_{k}: unit-circle test indeterminate at {bits} bits"
                )
            right_ok = right_ok and exceeds
    return PsiCensus(
        k=k,
        real_count=real_count,
        per_quadrant=tuple(per_quadrant),
        right_half_moduli_exceed_one=right_ok,
        precision_bits=bits,
    )


# ---------------------------------------------------------------------------
# Tangency chain (order-two symmetry and the shared tangency point)
# ---------------------------------------------------------------------------


def sigma_conjugation_matrix(K: NumberField) -> Mat2:
    """The rotation sigma factored as i * T with T defined over the field;
    sigma-conjugation of field matrices equals T-conjugation, and
    sigma^2 = -I is equivalent to T^2 = I."""
    z = K.gen()
    return Mat2(K.one(), (K.one() - z) / z, K.zero(), -K.one())


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def tangency_chain(k: int) -> dict:
    """Verify the exact identities behind the chain-of-tangent-circles
    picture for prime 2k+1: the shared point g_{2k}(0) = (z-1)/(2z), the
    order-two symmetry, its conjugation action on the generators, and the
    non-integrality of tr((s2 s1^-1)^r) for 1 <= r <= k.
    """
    if not _is_prime(2 * k + 1):
        raise ValueError(f"tangency chain requires 2k+1 prime, got {2*k+1}")
    data = pretzel_holonomy(k)
    K, rep = data.field, data.rep
    z = K.gen()
    report = {}

    g2k = evaluate_word(rep, data.words[f"g{2*k}"])
    # Mobius image of 0 is b/d
    val = g2k.b / g2k.d
    target = (z - K.one()) / (K.rational(2) * z)
    if val != target:
        raise FactorIdentityFailed(f"k={k}: g_2k(0) != (z-1)/(2z)")
    report["g2k_fixed_point"] = True

    T = sigma_conjugation_matrix(K)
    if not (T * T == Mat2.identity(K)):
        raise FactorIdentityFailed(f"k={k}: T^2 != I (sigma^2 != -I)")
    report["sigma_squared"] = True

    s = [Word.gen(i) for i in range(3)]
    conj_targets = {
        1: s[0] * s[2] ** -1 * s[0] ** -1,  # sigma s2 sigma^-1
        2: s[0] * s[1] ** -1 * s[0] ** -1,  # sigma s3 sigma^-1
    }
    for gen_index, word in conj_targets.items():
        lhs = T * rep.images[gen_index] * T.inverse()
        rhs = evaluate_word(rep, word)
        if not lhs.proj_equal(rhs):
            raise FactorIdentityFailed(
                f"k={k}: sigma s{gen_index+1} sigma^-1 != {word!r}"
            )
    report["sigma_conjugation"] = True

    # sigma s1 sigma^-1 lands back in the group; the exact image is s1^-1
    lhs = T * rep.images[0] * T.inverse()
    if not lhs.proj_equal(rep.images[0].inverse()):
        raise FactorIdentityFailed(f"k={k}: sigma s1 sigma^-1 != s1^-1")
    report["sigma_s1"] = True

    # trace degree: tr((s2 s1^-1)^r) = 2 alpha_r - 2 beta_r z + beta_r z^2
    # has exact degree 2r over Z[z], hence cannot be an integer in the field
    for r in range(1, k + 1):
        a_r, b_r, _ = alpha_beta_delta(r)
        tr = RatPoly((2,)) * a_r - RatPoly((0, 2)) * b_r + RatPoly((0, 0, 1)) * b_r
        s2s1 = _poly_generators()
        M = evaluate_word_poly((Word.gen(1) * Word.gen(0, -1)) ** r, list(s2s1))
        if M.trace() != tr:
            raise FactorIdentityFailed(f"k={k}: trace recursion failed at r={r}")
        if tr.degree != 2 * r or not (1 <= tr.degree < 2 * k + 1):
            raise FactorIdentityFailed(
                f"k={k}: tr((s2 s1^-1)^{r}) degree {tr.degree}, expected {2*r}"
            )
    report["loop_traces_nonintegral"] = True
    return report
