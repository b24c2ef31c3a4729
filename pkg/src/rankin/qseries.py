"""Truncated q-expansions over exact coefficient rings.

A QExpansion holds coefficients a_0 .. a_{prec-1}; prec is the first
unknown index.  Coefficients are duck-typed: int, Fraction, CycloNumber,
or QuadExt all work, and mixed arithmetic resolves through the operators
of those types.  Binary operations truncate to the minimum precision.

Weight-character metadata (a LocAlgChar, or None for untagged series) is
carried along: products add weights, theta twists add 2*tau.  The level
tag is informational only and never participates in equality.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .characters import LocAlgChar
from .cyclo import CycloNumber


def coeff_is_zero(c) -> bool:
    if isinstance(c, (int, Fraction)):
        return c == 0
    return c == 0  # CycloNumber / QuadExt define __eq__ against ints


class QExpansion:
    __slots__ = ("prec", "coeffs", "weight", "level")

    def __init__(self, coeffs, prec: int | None = None,
                 weight: LocAlgChar | None = None, level: int | None = None):
        coeffs = list(coeffs)
        if prec is None:
            prec = len(coeffs)
        if prec < 1:
            raise ValueError("q-precision must be at least 1")
        if len(coeffs) < prec:
            coeffs = coeffs + [0] * (prec - len(coeffs))
        self.prec = prec
        self.coeffs = coeffs[:prec]
        self.weight = weight
        self.level = level

    def a(self, n: int):
        """Coefficient of q^n; n must be below the precision."""
        if not 0 <= n < self.prec:
            raise IndexError(f"coefficient a_{n} not known at precision {self.prec}")
        return self.coeffs[n]

    def truncate(self, prec: int) -> "QExpansion":
        if prec > self.prec:
            raise ValueError(f"cannot extend precision {self.prec} to {prec}")
        return QExpansion(self.coeffs[:prec], prec, self.weight, self.level)

    def map_coeffs(self, fn, weight: LocAlgChar | None = None) -> "QExpansion":
        return QExpansion([fn(n, c) for n, c in enumerate(self.coeffs)],
                          self.prec, weight, self.level)

    # -- ring operations -------------------------------------------------

    def _meet_weight(self, other: "QExpansion", combine) -> LocAlgChar | None:
        if self.weight is None or other.weight is None:
            return None
        return combine(self.weight, other.weight)

    def __add__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        prec = min(self.prec, other.prec)
        w = self.weight if (self.weight is not None and self.weight == other.weight) else None
        lev = lcm(self.level, other.level) if self.level and other.level else None
        return QExpansion([self.coeffs[n] + other.coeffs[n] for n in range(prec)],
                          prec, w, lev)

    def __neg__(self):
        return QExpansion([-c for c in self.coeffs], self.prec, self.weight, self.level)

    def __sub__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, QExpansion):
            # scalar multiple
            return QExpansion([c * other if not coeff_is_zero(c) else 0
                               for c in self.coeffs],
                              self.prec, self.weight, self.level)
        prec = min(self.prec, other.prec)
        out = [0] * prec
        for i, ci in enumerate(self.coeffs[:prec]):
            if coeff_is_zero(ci):
                continue
            for j in range(prec - i):
                cj = other.coeffs[j]
                if not coeff_is_zero(cj):
                    out[i + j] = out[i + j] + ci * cj
        w = self._meet_weight(other, lambda a, b: a + b)
        lev = lcm(self.level, other.level) if self.level and other.level else None
        return QExpansion(out, prec, w, lev)

    def __rmul__(self, other):
        return self.__mul__(other)

    # -- operators from the p-adic theory ---------------------------------

    def u_p(self, p: int) -> "QExpansion":
        """a_n -> a_{pn}; the precision drops to ceil(prec / p)."""
        new_prec = (self.prec + p - 1) // p
        return QExpansion([self.coeffs[p * n] for n in range(new_prec)],
                          new_prec, self.weight, self.level)

    def v_p(self, p: int) -> "QExpansion":
        """q -> q^p; the precision rises to p*(prec-1)+1."""
        new_prec = p * (self.prec - 1) + 1
        out = [0] * new_prec
        for n, c in enumerate(self.coeffs):
            out[p * n] = c
        return QExpansion(out, new_prec, self.weight, self.level)

    def depleted(self, p: int) -> "QExpansion":
        """Drop every coefficient with p | n (p-depletion)."""
        return QExpansion([0 if (n % p == 0) else c for n, c in enumerate(self.coeffs)],
                          self.prec, self.weight, self.level)

    def theta_twist(self, tau: LocAlgChar) -> "QExpansion":
        """a_n -> char_eval(tau, n) a_n on p-coprime n, 0 on p | n; weight += 2 tau."""
        p = tau.p
        zcache: dict[tuple[int, int], CycloNumber] = {}
        out: list = [0] * self.prec
        for n in range(1, self.prec):
            if n % p == 0:
                continue
            c = self.coeffs[n]
            if coeff_is_zero(c):
                continue
            t = tau.value_log_int(n)
            if t is None:
                continue
            val = c * (Fraction(n) ** tau.w)
            if t != 0:
                key = (t.denominator, t.numerator)
                z = zcache.get(key)
                if z is None:
                    z = CycloNumber.zeta(t.denominator, t.numerator)
                    zcache[key] = z
                val = val * z
            out[n] = val
        w = self.weight + tau.scale(2) if self.weight is not None else None
        return QExpansion(out, self.prec, w, self.level)

    # -- comparison --------------------------------------------------------

    def first_mismatch(self, other: "QExpansion") -> int | None:
        """Smallest n below both precisions where coefficients differ, else None."""
        prec = min(self.prec, other.prec)
        for n in range(prec):
            if not coeff_is_zero(self.coeffs[n] - other.coeffs[n]):
                return n
        return None

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        return self.prec == other.prec and self.first_mismatch(other) is None

    __hash__ = None

    def __repr__(self):
        shown = ", ".join(repr(c) for c in self.coeffs[:6])
        more = ", ..." if self.prec > 6 else ""
        return f"QExpansion([{shown}{more}], prec={self.prec})"


def p_stabilise_qexp(f: QExpansion, beta, p: int) -> QExpansion:
    """f - beta * V_p f, the U_p-eigenform expansion attached to the root alpha."""
    vf = f.v_p(p)
    shifted = QExpansion([vf.coeffs[n] * beta if not coeff_is_zero(vf.coeffs[n]) else 0
                          for n in range(f.prec)], f.prec, f.weight, f.level)
    return f - shifted


def delta_qexp(prec: int) -> QExpansion:
    """q-expansion of the discriminant cusp form (weight 12, level 1), exact ints.

    eta(q)^24 is computed from the pentagonal-number expansion of
    prod (1 - q^n) by three squarings and a final product (24 = 16 + 8).
    """
    if prec < 1:
        raise ValueError("q-precision must be at least 1")
    n_eta = max(prec - 1, 1)
    eta1 = [0] * n_eta
    eta1[0] = 1
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 >= n_eta and g2 >= n_eta:
            break
        sign = -1 if k % 2 else 1
        if g1 < n_eta:
            eta1[g1] += sign
        if g2 < n_eta:
            eta1[g2] += sign
        k += 1

    def sq(a: list[int]) -> list[int]:
        out = [0] * n_eta
        for i, ai in enumerate(a):
            if ai:
                if 2 * i < n_eta:
                    out[2 * i] += ai * ai
                for j in range(i + 1, n_eta - i):
                    aj = a[j]
                    if aj:
                        out[i + j] += 2 * ai * aj
        return out

    e2 = sq(eta1)
    e4 = sq(e2)
    e8 = sq(e4)
    e16 = sq(e8)
    e24 = [0] * n_eta
    for i, ai in enumerate(e16):
        if ai:
            for j in range(n_eta - i):
                bj = e8[j]
                if bj:
                    e24[i + j] += ai * bj
    coeffs = [0] + e24[: prec - 1]
    return QExpansion(coeffs, prec, weight=None, level=1)
