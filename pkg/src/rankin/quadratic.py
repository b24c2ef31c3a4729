"""Exact arithmetic with roots of Hecke polynomials X^2 - s X + n.

A p-stabilisation root alpha usually lives in a quadratic extension of the
field generated by the eigenvalues.  QuadExt represents c0 + c1*alpha with
CycloNumber coefficients and the relation alpha^2 = s*alpha - n; the other
root is beta = s - alpha.  Inversion goes through the conjugate, whose
product with the element is the scalar norm c0^2 + c0*c1*s + c1^2*n.

Elements of extensions with different (s, n, root) data cannot be combined
exactly; callers catch IncompatibleExtension and fall back to numerics.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

import mpmath

from .cyclo import ComplexAP, CycloNumber


class IncompatibleExtension(ValueError):
    """Raised when two QuadExt values live in different quadratic extensions."""


def _as_cyclo(x) -> CycloNumber | None:
    if isinstance(x, CycloNumber):
        return x
    if isinstance(x, (int, Fraction)):
        return CycloNumber.from_rational(x)
    return None


def sqrt_rational(x: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    if x < 0:
        return None
    rn, rd = isqrt(x.numerator), isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


class QuadContext:
    """The extension Q(coeffs)(alpha), alpha^2 = s*alpha - n, with a root choice.

    root is "plus" or "minus": under the complex embedding, alpha maps to
    (s + sqrt(s^2 - 4n)) / 2 or (s - sqrt(s^2 - 4n)) / 2 with the principal
    square root.
    """

    __slots__ = ("s", "n", "root")

    def __init__(self, s, n, root: str = "plus"):
        cs, cn = _as_cyclo(s), _as_cyclo(n)
        if cs is None or cn is None:
            raise TypeError("trace and norm must be cyclotomic or rational")
        if root not in ("plus", "minus"):
            raise ValueError("root must be 'plus' or 'minus'")
        self.s = cs
        self.n = cn
        self.root = root

    def same(self, other: "QuadContext") -> bool:
        return self.s == other.s and self.n == other.n and self.root == other.root

    def discriminant(self) -> CycloNumber:
        return self.s * self.s - 4 * self.n

    def alpha(self) -> "QuadExt":
        return QuadExt(self, CycloNumber.zero(), CycloNumber.one())

    def beta(self) -> "QuadExt":
        return QuadExt(self, self.s, -CycloNumber.one())

    def embed_alpha(self, digits: int) -> ComplexAP:
        with mpmath.workdps(digits + 10):
            s = self.s.embed(digits + 5)._mpc()
            d = self.discriminant().embed(digits + 5)._mpc()
            r = mpmath.sqrt(d)
            if self.root == "minus":
                r = -r
            val = (s + r) / 2
            return ComplexAP.from_mpc(val, digits)

    def __repr__(self):
        return f"QuadContext(s={self.s!r}, n={self.n!r}, root={self.root})"


class QuadExt:
    """c0 + c1*alpha in a QuadContext, coefficients CycloNumber."""

    __slots__ = ("ctx", "c0", "c1")

    def __init__(self, ctx: QuadContext, c0, c1=0):
        a, b = _as_cyclo(c0), _as_cyclo(c1)
        if a is None or b is None:
            raise TypeError("coefficients must be cyclotomic or rational")
        self.ctx = ctx
        self.c0 = a
        self.c1 = b

    def _coerce(self, other) -> "QuadExt | None":
        if isinstance(other, QuadExt):
            if not self.ctx.same(other.ctx):
                raise IncompatibleExtension(
                    "cannot combine roots of different Hecke polynomials exactly"
                )
            return other
        c = _as_cyclo(other)
        if c is None:
            return None
        return QuadExt(self.ctx, c, CycloNumber.zero())

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.ctx, self.c0 + o.c0, self.c1 + o.c1)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(self.ctx, -self.c0, -self.c1)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.ctx, self.c0 - o.c0, self.c1 - o.c1)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.c0, self.c1, o.c0, o.c1
        bd = b * d
        return QuadExt(
            self.ctx,
            a * c - bd * self.ctx.n,
            a * d + b * c + bd * self.ctx.s,
        )

    __rmul__ = __mul__

    def conj_root(self) -> "QuadExt":
        """Image under alpha -> beta = s - alpha."""
        return QuadExt(self.ctx, self.c0 + self.c1 * self.ctx.s, -self.c1)

    def norm(self) -> CycloNumber:
        """self * conj_root(self), a scalar."""
        a, b = self.c0, self.c1
        return a * a + a * b * self.ctx.s + b * b * self.ctx.n

    def inverse(self) -> "QuadExt":
        nm = self.norm()
        if nm.is_zero():
            raise ZeroDivisionError(
                "element has norm zero (reducible Hecke polynomial?)"
            )
        inv = nm.inverse()
        cj = self.conj_root()
        return QuadExt(self.ctx, cj.c0 * inv, cj.c1 * inv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = QuadExt(self.ctx, CycloNumber.one(), CycloNumber.zero())
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def is_scalar(self) -> bool:
        return self.c1.is_zero()

    def as_cyclo(self) -> CycloNumber:
        if not self.is_scalar():
            raise ValueError(f"{self!r} is not a scalar")
        return self.c0

    def is_zero(self) -> bool:
        return self.c0.is_zero() and self.c1.is_zero()

    def __eq__(self, other):
        if isinstance(other, QuadExt) and not self.ctx.same(other.ctx):
            return False
        try:
            o = self._coerce(other)
        except IncompatibleExtension:
            return False
        if o is None:
            return NotImplemented
        return self.c0 == o.c0 and self.c1 == o.c1

    __hash__ = None

    def embed(self, digits: int = 50) -> ComplexAP:
        with mpmath.workdps(digits + 10):
            al = self.ctx.embed_alpha(digits + 5)._mpc()
            val = self.c0.embed(digits + 5)._mpc() + self.c1.embed(digits + 5)._mpc() * al
            return ComplexAP.from_mpc(val, digits)

    def __repr__(self):
        if self.is_scalar():
            return f"QuadExt({self.c0!r})"
        return f"QuadExt({self.c0!r} + {self.c1!r}*alpha; alpha^2 = {self.ctx.s!r}*alpha - {self.ctx.n!r})"
