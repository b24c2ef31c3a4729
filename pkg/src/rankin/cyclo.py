"""Exact arithmetic in cyclotomic fields, plus arbitrary-precision complex embeddings.

A CycloNumber is an element of Q(zeta_M) stored on the power basis
1, zeta, ..., zeta^(phi(M)-1) of Q[x]/Phi_M(x) with Fraction coordinates.
Reduction modulo Phi_M is canonical, so equality of coordinate vectors
decides equality of field elements; elements of different moduli are
compared and combined by lifting both into Q(zeta_lcm).

ComplexAP is a small arbitrary-precision complex type over mpmath with an
explicit decimal-digit precision tag; binary operations carry the minimum
of the operand precisions, never more.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

import mpmath

from .arith import divisors, euler_phi, moebius

# Hard ceiling on cyclotomic moduli.  lcm-lifting two inputs can square the
# working modulus, and Phi_M computation plus power tables are O(M*phi(M));
# beyond this the "exact" route stops being usable interactively.
DEFAULT_MODULUS_CAP = 10**6
_modulus_cap = DEFAULT_MODULUS_CAP


def set_modulus_cap(cap: int) -> None:
    global _modulus_cap
    if cap < 1:
        raise ValueError("modulus cap must be positive")
    _modulus_cap = cap


def modulus_cap() -> int:
    return _modulus_cap


def _check_modulus(m: int) -> None:
    if m < 1:
        raise ValueError(f"cyclotomic modulus must be >= 1, got {m}")
    if m > _modulus_cap:
        raise ValueError(
            f"cyclotomic modulus {m} exceeds cap {_modulus_cap}; "
            "raise it with set_modulus_cap() if this is intentional"
        )


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    """Quotient num/den for monic den, asserting zero remainder."""
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + dn]
        out[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m(x), ascending, via Moebius inversion of x^d - 1."""
    _check_modulus(m)
    num = [1]
    dens: list[list[int]] = []
    for d in divisors(m):
        mu = moebius(m // d)
        if mu == 1:
            num = _poly_mul(num, [-1] + [0] * (d - 1) + [1])
        elif mu == -1:
            dens.append([-1] + [0] * (d - 1) + [1])
    for den in dens:
        num = _poly_divexact(num, den)
    assert len(num) == euler_phi(m) + 1 and num[-1] == 1
    return tuple(num)


class _Context:
    """Per-modulus reduction data: Phi_M and reduced rows for zeta^e."""

    __slots__ = ("m", "phi", "poly", "_rows")

    def __init__(self, m: int):
        self.m = m
        self.phi = euler_phi(m)
        self.poly = cyclotomic_polynomial(m)
        self._rows: dict[int, tuple[int, ...]] = {}

    def row(self, e: int) -> tuple[int, ...]:
        """Coordinates of zeta_m^e on the power basis, as ints."""
        e %= self.m
        if e < self.phi:
            vec = [0] * self.phi
            vec[e] = 1
            return tuple(vec)
        cached = self._rows.get(e)
        if cached is not None:
            return cached
        # walk up from the largest known power below e
        start = self.phi - 1
        vec = [0] * self.phi
        vec[start] = 1
        for known in sorted(self._rows):
            if known <= e:
                start, vec = known, list(self._rows[known])
        poly = self.poly
        phi = self.phi
        for cur in range(start + 1, e + 1):
            lead = vec[phi - 1]
            nxt = [0] + vec[: phi - 1]
            if lead:
                for i in range(phi):
                    ci = poly[i]
                    if ci:
                        nxt[i] -= lead * ci
            vec = nxt
            if cur >= phi:
                self._rows[cur] = tuple(vec)
        return tuple(vec)


@lru_cache(maxsize=None)
def _context(m: int) -> _Context:
    _check_modulus(m)
    return _Context(m)


_ZERO = Fraction(0)
_ONE = Fraction(1)


class CycloNumber:
    """Element of Q(zeta_M) on the power basis, with exact Fraction coordinates."""

    __slots__ = ("modulus", "coeffs")
    __hash__ = None  # mutable-free but cross-modulus equality makes hashing a trap

    def __init__(self, modulus: int, coeffs):
        ctx = _context(modulus)
        vec = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        if len(vec) > ctx.phi:
            raise ValueError(
                f"{len(vec)} coordinates but Q(zeta_{modulus}) has degree {ctx.phi}"
            )
        vec.extend([_ZERO] * (ctx.phi - len(vec)))
        self.modulus = modulus
        self.coeffs = tuple(vec)

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rational(x) -> "CycloNumber":
        return CycloNumber(1, [Fraction(x)])

    @staticmethod
    def zeta(m: int, e: int = 1) -> "CycloNumber":
        ctx = _context(m)
        return CycloNumber(m, [Fraction(c) for c in ctx.row(e % m)])

    @staticmethod
    def from_zeta_powers(m: int, terms: dict[int, Fraction]) -> "CycloNumber":
        """Sum of c * zeta_m^e over terms {e: c}, reduced once."""
        ctx = _context(m)
        phi = ctx.phi
        vec = [_ZERO] * phi
        for e, c in terms.items():
            if not c:
                continue
            e %= m
            if e < phi:
                vec[e] += c
            else:
                for i, r in enumerate(ctx.row(e)):
                    if r:
                        vec[i] += c * r
        return CycloNumber(m, vec)

    @staticmethod
    def zero(m: int = 1) -> "CycloNumber":
        return CycloNumber(m, [])

    @staticmethod
    def one() -> "CycloNumber":
        return CycloNumber(1, [_ONE])

    # -- structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def lift_to(self, m: int) -> "CycloNumber":
        """Rewrite in Q(zeta_m); requires modulus | m."""
        if m == self.modulus:
            return self
        if m % self.modulus:
            raise ValueError(f"Q(zeta_{self.modulus}) does not embed in Q(zeta_{m})")
        step = m // self.modulus
        return CycloNumber.from_zeta_powers(
            m, {step * i: c for i, c in enumerate(self.coeffs) if c}
        )

    def project_to(self, m: int) -> "CycloNumber":
        """Rewrite in the subfield Q(zeta_m), m | modulus; error if not contained."""
        if m == self.modulus:
            return self
        if self.modulus % m:
            raise ValueError(f"Q(zeta_{m}) is not a subfield of Q(zeta_{self.modulus})")
        big = _context(self.modulus)
        small = _context(m)
        step = self.modulus // m
        # solve sum_i x_i * row(step*i) = coeffs by Gaussian elimination
        cols = [big.row(step * i) for i in range(small.phi)]
        rows = big.phi
        aug = [[Fraction(cols[j][i]) for j in range(small.phi)] + [self.coeffs[i]]
               for i in range(rows)]
        piv_cols: list[int] = []
        r = 0
        for c in range(small.phi):
            piv = next((i for i in range(r, rows) if aug[i][c]), None)
            if piv is None:
                continue
            aug[r], aug[piv] = aug[piv], aug[r]
            inv = 1 / aug[r][c]
            aug[r] = [v * inv for v in aug[r]]
            for i in range(rows):
                if i != r and aug[i][c]:
                    f = aug[i][c]
                    aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
            piv_cols.append(c)
            r += 1
        sol = [_ZERO] * small.phi
        for i, c in enumerate(piv_cols):
            sol[c] = aug[i][-1]
        for i in range(r, rows):
            if aug[i][-1]:
                raise ValueError(
                    f"element of Q(zeta_{self.modulus}) does not lie in Q(zeta_{m})"
                )
        return CycloNumber(m, sol)

    def _pair(self, other) -> tuple["CycloNumber", "CycloNumber"]:
        if not isinstance(other, CycloNumber):
            if isinstance(other, (int, Fraction)):
                other = CycloNumber(1, [Fraction(other)])
            else:
                return NotImplemented, NotImplemented
        if self.modulus == other.modulus:
            return self, other
        m = lcm(self.modulus, other.modulus)
        return self.lift_to(m), other.lift_to(m)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return CycloNumber(a.modulus, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.modulus, [-c for c in self.coeffs])

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return CycloNumber(a.modulus, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycloNumber(self.modulus, [c * q for c in self.coeffs])
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        ctx = _context(a.modulus)
        phi = ctx.phi
        conv = [_ZERO] * (2 * phi - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        conv[i + j] += x * y
        vec = list(conv[:phi])
        for e in range(phi, 2 * phi - 1):
            c = conv[e]
            if c:
                for i, r in enumerate(ctx.row(e % ctx.m)):
                    if r:
                        vec[i] += c * r
        return CycloNumber(a.modulus, vec)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNumber":
        """Multiplicative inverse via extended Euclid in Q[x] mod Phi_M."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        if self.is_rational():
            return CycloNumber(self.modulus, [1 / self.coeffs[0]])
        ctx = _context(self.modulus)

        def trim(p: list[Fraction]) -> list[Fraction]:
            while p and p[-1] == 0:
                p.pop()
            return p

        a = [Fraction(c) for c in ctx.poly]
        b = trim(list(self.coeffs))
        # invariants: s*self = a_cur mod Phi  (t tracking for Phi dropped)
        s_prev: list[Fraction] = []
        s_cur: list[Fraction] = [_ONE]
        while True:
            # divide a by b
            q: dict[int, Fraction] = {}
            r = list(a)
            db = len(b) - 1
            inv_lead = 1 / b[-1]
            while len(r) - 1 >= db and trim(r):
                dr = len(r) - 1
                f = r[-1] * inv_lead
                q[dr - db] = f
                for j, bj in enumerate(b):
                    r[dr - db + j] -= f * bj
                trim(r)
            if not r:
                if db != 0:
                    raise ZeroDivisionError("element is a zero divisor (not a unit)")
                # b is the gcd, a nonzero constant
                c = 1 / b[0]
                return CycloNumber(self.modulus, [v * c for v in s_cur])
            # s_next = s_prev - q * s_cur
            s_next = list(s_prev) + [_ZERO] * max(
                0, (max(q) if q else 0) + len(s_cur) - len(s_prev)
            )
            for d, f in q.items():
                for j, sj in enumerate(s_cur):
                    if sj:
                        s_next[d + j] -= f * sj
            a, b = b, r
            s_prev, s_cur = s_cur, trim(s_next)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                raise ZeroDivisionError("division by zero")
            return CycloNumber(self.modulus, [c / q for c in self.coeffs])
        if isinstance(other, CycloNumber):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = CycloNumber.one()
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def conj(self) -> "CycloNumber":
        """Complex conjugation, zeta -> zeta^(-1)."""
        ctx = _context(self.modulus)
        return CycloNumber.from_zeta_powers(
            self.modulus,
            {(-i) % ctx.m: c for i, c in enumerate(self.coeffs) if c},
        )

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CycloNumber):
            return NotImplemented
        a, b = self._pair(other)
        return a.coeffs == b.coeffs

    # -- output -------------------------------------------------------

    def embed(self, digits: int = 50) -> "ComplexAP":
        """Image under zeta_M -> exp(2 pi i / M), to the given decimal digits."""
        with mpmath.workdps(digits + 10):
            total = mpmath.mpc(0)
            m = self.modulus
            for e, c in enumerate(self.coeffs):
                if c:
                    w = mpmath.expjpi(mpmath.mpf(2 * (e % m)) / m)
                    total += mpmath.mpc(c.numerator) / c.denominator * w
            return ComplexAP(total.real, total.imag, digits)

    def to_json(self) -> dict:
        return {
            "M": self.modulus,
            "coeffs": [[c.numerator, c.denominator] for c in self.coeffs],
        }

    @staticmethod
    def from_json(obj: dict) -> "CycloNumber":
        if not isinstance(obj, dict) or "M" not in obj or "coeffs" not in obj:
            raise ValueError("cyclotomic JSON needs keys 'M' and 'coeffs'")
        return CycloNumber(
            obj["M"], [Fraction(int(n), int(d)) for n, d in obj["coeffs"]]
        )

    def __repr__(self):
        if self.is_rational():
            return f"Cyclo({self.coeffs[0]})"
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                z = f"z{self.modulus}" if i == 1 else f"z{self.modulus}^{i}"
                terms.append(z if c == 1 else f"{c}*{z}")
        return "Cyclo(" + " + ".join(terms) + ")"


class ComplexAP:
    """Arbitrary-precision complex number with an explicit decimal precision tag.

    Operations compute with guard digits and tag the result with the
    minimum of the operand precisions; precision never silently grows.
    """

    __slots__ = ("real", "imag", "digits")

    def __init__(self, real, imag=0, digits: int = 50):
        if digits < 1:
            raise ValueError("precision must be at least 1 digit")
        self.digits = int(digits)
        with mpmath.workdps(self.digits + 10):
            self.real = mpmath.mpf(real)
            self.imag = mpmath.mpf(imag)

    @staticmethod
    def from_rational(x, digits: int = 50) -> "ComplexAP":
        x = Fraction(x)
        with mpmath.workdps(digits + 10):
            return ComplexAP(mpmath.mpf(x.numerator) / x.denominator, 0, digits)

    @staticmethod
    def from_mpc(z, digits: int) -> "ComplexAP":
        z = mpmath.mpc(z)
        return ComplexAP(z.real, z.imag, digits)

    def _mpc(self):
        return mpmath.mpc(self.real, self.imag)

    @staticmethod
    def _coerce(x, digits: int):
        if isinstance(x, ComplexAP):
            return x
        if isinstance(x, (int, Fraction)):
            return ComplexAP.from_rational(x, digits)
        if isinstance(x, CycloNumber):
            return x.embed(digits)
        return None

    def _binop(self, other, fn):
        other = ComplexAP._coerce(other, self.digits)
        if other is None:
            return NotImplemented
        d = min(self.digits, other.digits)
        with mpmath.workdps(d + 10):
            return ComplexAP.from_mpc(fn(self._mpc(), other._mpc()), d)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binop(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binop(other, lambda a, b: b / a)

    def __neg__(self):
        with mpmath.workdps(self.digits + 10):
            return ComplexAP(-self.real, -self.imag, self.digits)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        with mpmath.workdps(self.digits + 10):
            return ComplexAP.from_mpc(self._mpc() ** n, self.digits)

    def conjugate(self) -> "ComplexAP":
        with mpmath.workdps(self.digits + 10):
            return ComplexAP(self.real, -self.imag, self.digits)

    def abs(self):
        with mpmath.workdps(self.digits + 10):
            return mpmath.fabs(self._mpc())

    def abs2(self) -> "ComplexAP":
        return self * self.conjugate()

    def distance(self, other) -> float:
        other = ComplexAP._coerce(other, self.digits)
        d = min(self.digits, other.digits)
        with mpmath.workdps(d + 10):
            return float(mpmath.fabs(self._mpc() - other._mpc()))

    def is_close(self, other, tol) -> bool:
        return self.distance(other) <= tol

    def to_strings(self) -> tuple[str, str]:
        return (
            mpmath.nstr(self.real, self.digits, strip_zeros=False),
            mpmath.nstr(self.imag, self.digits, strip_zeros=False),
        )

    def __repr__(self):
        re_s, im_s = self.to_strings()
        return f"ComplexAP({re_s} + {im_s}j, digits={self.digits})"
