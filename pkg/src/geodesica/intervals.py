"""Thin layer over mpmath's directed-rounding intervals.

Real quantities use iv.mpf directly; complex quantities are rectangles
(re, im) of iv.mpf.  Everything rounds outward, so any containment or
strict-inequality decision made here is sound.
"""

from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction

import mpmath as mp
from mpmath import iv


@contextmanager
def prec_guard(bits: int):
    """Temporarily set the interval (and float) working precision."""
    old_iv, old_mp = iv.prec, mp.mp.prec
    iv.prec = bits
    mp.mp.prec = bits
    try:
        yield
    finally:
        iv.prec = old_iv
        mp.mp.prec = old_mp


def iv_from_fraction(q: Fraction):
    return iv.mpf(q.numerator) / q.denominator


def iv_atan(x):
    """arctan on intervals; the iv context only ships atan2."""
    return iv.atan2(x, iv.mpf(1))


def iv_abs_upper(x) -> mp.mpf:
    """Upper bound of |x| as a plain mpf."""
    ax = abs(x)
    return mp.mpf(ax.b)


def iv_width(x) -> mp.mpf:
    return mp.mpf(x.delta.b)


def iv_mid(x) -> mp.mpf:
    return mp.mpf(x.mid.a)


def iv_strictly_positive(x) -> bool:
    return x.a > 0


def iv_strictly_negative(x) -> bool:
    return x.b < 0


def iv_contains_zero(x) -> bool:
    return x.a <= 0 <= x.b


class ComplexIv:
    """Rectangular complex interval: re and im are iv.mpf."""

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = re if isinstance(re, iv.mpf) else iv.mpf(re)
        self.im = im if isinstance(im, iv.mpf) else iv.mpf(im)

    @classmethod
    def from_fraction(cls, q: Fraction) -> "ComplexIv":
        return cls(iv_from_fraction(q), iv.mpf(0))

    @classmethod
    def from_mpc(cls, z) -> "ComplexIv":
        z = mp.mpc(z)
        return cls(iv.mpf(z.real), iv.mpf(z.imag))

    @classmethod
    def zero(cls) -> "ComplexIv":
        return cls(iv.mpf(0), iv.mpf(0))

    @classmethod
    def one(cls) -> "ComplexIv":
        return cls(iv.mpf(1), iv.mpf(0))

    def __repr__(self):
        return f"ComplexIv({self.re}, {self.im})"

    def __add__(self, other):
        other = self._coerce(other)
        return ComplexIv(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexIv(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        return ComplexIv(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        d = other.re * other.re + other.im * other.im
        return ComplexIv(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    @staticmethod
    def _coerce(other) -> "ComplexIv":
        if isinstance(other, ComplexIv):
            return other
        if isinstance(other, Fraction):
            return ComplexIv.from_fraction(other)
        return ComplexIv(iv.mpf(other), iv.mpf(0))

    def conj(self) -> "ComplexIv":
        return ComplexIv(self.re, -self.im)

    def abs2(self):
        val = self.re * self.re + self.im * self.im
        if val.a < 0:
            # outward rounding can push the lower bound of a square sum
            # below zero; the true value cannot be negative
            val = iv.mpf([0, mp.mpf(val.b)])
        return val

    def abs_iv(self):
        return iv.sqrt(self.abs2())

    def abs_upper(self) -> mp.mpf:
        return mp.mpf(self.abs_iv().b)

    def abs_lower(self) -> mp.mpf:
        lo = self.abs_iv().a
        return mp.mpf(lo) if lo > 0 else mp.mpf(0)

    def contains_zero(self) -> bool:
        return iv_contains_zero(self.re) and iv_contains_zero(self.im)

    def mid_mpc(self) -> mp.mpc:
        return mp.mpc(iv_mid(self.re), iv_mid(self.im))

    def max_width(self) -> mp.mpf:
        return max(iv_width(self.re), iv_width(self.im))
