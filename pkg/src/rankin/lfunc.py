"""Imprimitive Rankin-Selberg L-function: exact coefficients and numeric values.

For eigenforms f1, f2 and a twisting character chi, the series computed here is

    L(s) = [ sum over m coprime to M of psi(m) m^(k1+k2-2-2s) ]
           * [ sum over n of a_n(f1) a_n(f2) chi(n) n^(-s) ],

with psi = eps1 eps2 chi^2 and M = (full level of f1)(full level of f2)(cond chi).
Since m^(k1+k2-2-2s) n^(-s) = m^(k1+k2-2) (m^2 n)^(-s), the product is a
Dirichlet series whose coefficient at N collects pairs (m, n) with m^2 n = N;
the table keeps those pairs separate so both assembly routes stay auditable.

At good primes l (coprime to M) the local sum is the inverse of the quartic

    P_l(X) = 1 - s1 s2 X + (n2 s1^2 + n1 s2^2 - 2 n1 n2) X^2
               - n1 n2 s1 s2 X^3 + (n1 n2)^2 X^4,

s_i = a_l(f_i), n_i = l^(k_i - 1) eps_i(l), evaluated at X = chi(l) l^(-s).
euler_coefficients rebuilds the table from these local inverses; criterion
tests compare the two routes coefficient by coefficient.

The numeric evaluator sums the table directly and certifies a tail bound
that assumes the Deligne bound |a_n| <= d(n) n^((k-1)/2) for both forms
(true for holomorphic newforms; synthetic records must respect it for the
bound to be meaningful): |C_N| <= 45 N^(w+1) with w = (k1+k2-2)/2, using
d(n) <= 3.53 n^(1/3), so the tail past T is at most
45 T^(w+2-s) (1/(s-w-2) + 1/T) in the convergence region s > w + 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

import mpmath

from .characters import DirichletCharacter
from .cyclo import ComplexAP, CycloNumber
from .formdb import DataError, Eigenform, _smallest_prime_factors
from .quadratic import QuadExt


def full_level(f: Eigenform) -> int:
    if f.p is None:
        return f.N_f
    r = 1
    if f.eps_p is not None and f.eps_p.conductor > 1:
        c, r = f.eps_p.conductor, 0
        while c > 1:
            c //= f.p
            r += 1
    return f.N_f * f.p**r


def full_nebentypus(f: Eigenform) -> DirichletCharacter:
    """eps as a character modulo the full level (zero at all bad primes)."""
    eps = f.eps_N
    if f.eps_p is not None:
        eps = eps * f.eps_p
    # view modulo the full level so that all bad primes evaluate to zero
    target = full_level(f)
    if target % eps.conductor:
        raise DataError(f"{f.label}: nebentypus conductor {eps.conductor} "
                        f"does not divide the level {target}")
    return eps.extend_to(target)


def aux_modulus(f1: Eigenform, f2: Eigenform, chi: DirichletCharacter) -> int:
    return full_level(f1) * full_level(f2) * chi.conductor


def _chi_int_table(chi: DirichletCharacter) -> list[int] | None:
    """Value table as ints when chi is real-rational (order <= 2), else None."""
    if chi.order > 2:
        return None
    chi.build_table()
    out = []
    for a in range(chi.modulus):
        t = chi.value_log(a)
        if t is None:
            out.append(0)
        else:
            out.append(1 if t == 0 else -1)
    return out


def _chi_value(chi: DirichletCharacter, table: list[int] | None, n: int):
    if table is not None:
        return table[n % chi.modulus] if chi.modulus > 1 else 1
    return chi(n)


def local_factor(f1: Eigenform, f2: Eigenform, l: int) -> list:
    """Coefficients [1, c1, c2, c3, c4] of the degree-4 local polynomial at good l."""
    if gcd(l, full_level(f1) * full_level(f2)) != 1:
        raise DataError(f"l = {l} divides a level; the quartic local factor "
                        "is defined at good primes only")
    s1, s2 = f1.a_prime(l), f2.a_prime(l)
    n1 = l ** (f1.k - 1) * full_nebentypus(f1)(l)
    n2 = l ** (f2.k - 1) * full_nebentypus(f2)(l)
    n1n2 = n1 * n2
    return [
        1,
        -(s1 * s2),
        n2 * (s1 * s1) + n1 * (s2 * s2) - 2 * n1n2,
        -(n1n2 * s1 * s2),
        n1n2 * n1n2,
    ]


def local_inverse_coefficients(f1: Eigenform, f2: Eigenform, l: int,
                               chi: DirichletCharacter, r_max: int) -> list:
    """[C_{l^0}, ..., C_{l^r_max}] from the power-series inverse of P_l(chi(l) X)."""
    poly = local_factor(f1, f2, l)
    z = chi(l)
    zp = [CycloNumber.one()]
    for _ in range(4):
        zp.append(zp[-1] * z)
    twisted = [poly[i] * zp[i] for i in range(5)]
    out = [1]
    for r in range(1, r_max + 1):
        acc = 0
        for i in range(1, min(4, r) + 1):
            acc = acc + twisted[i] * out[r - i]
        out.append(-acc)
    return out


@dataclass
class ConvolutionTable:
    """Dirichlet coefficients of the imprimitive Rankin-Selberg product.

    pairs[N] lists (value, m) contributions with m^2 | N: value already
    includes psi(m) m^(k1+k2-2) a_n(f1) a_n(f2) chi(n) for n = N / m^2.
    """

    n_max: int
    pairs: list[list[tuple[object, int]]]

    def collapse(self) -> list:
        out = [0] * (self.n_max + 1)
        for n in range(1, self.n_max + 1):
            acc = 0
            for v, _ in self.pairs[n]:
                acc = acc + v
            out[n] = acc
        return out


def dirichlet_coefficients(f1: Eigenform, f2: Eigenform, chi: DirichletCharacter,
                           n_max: int) -> ConvolutionTable:
    """Exact convolution table up to n_max."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    big_m = aux_modulus(f1, f2, chi)
    psi = full_nebentypus(f1) * full_nebentypus(f2) * (chi * chi)
    psi = psi.extend_to(big_m) if big_m % psi.conductor == 0 else psi
    chi_t = _chi_int_table(chi)
    psi_t = _chi_int_table(psi)
    a1 = f1.coefficients(n_max)
    a2 = f2.coefficients(n_max)
    w2 = f1.k + f2.k - 2
    pairs: list[list[tuple[object, int]]] = [[] for _ in range(n_max + 1)]
    m = 1
    while m * m <= n_max:
        if gcd(m, big_m) == 1:
            pm = _chi_value(psi, psi_t, m)
            base = pm * m**w2 if not isinstance(pm, CycloNumber) else pm * (m**w2)
            mm = m * m
            for n in range(1, n_max // mm + 1):
                prod = a1[n] * a2[n]
                if isinstance(prod, int) and prod == 0:
                    continue
                cv = _chi_value(chi, chi_t, n)
                if isinstance(cv, int):
                    if cv == 0:
                        continue
                    val = base * prod if cv == 1 else -(base * prod)
                else:
                    if cv.is_zero():
                        continue
                    val = base * prod * cv
                pairs[mm * n].append((val, m))
        m += 1
    return ConvolutionTable(n_max, pairs)


def euler_coefficients(f1: Eigenform, f2: Eigenform, chi: DirichletCharacter,
                       n_max: int) -> list:
    """[C_0 .. C_n_max] assembled multiplicatively from local data."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    big_m = aux_modulus(f1, f2, chi)
    chi_t = _chi_int_table(chi)
    out = [0] * (n_max + 1)
    out[1] = 1
    spf = _smallest_prime_factors(n_max)
    local: dict[tuple[int, int], object] = {}

    def local_coeff(l: int, r: int):
        key = (l, r)
        if key in local:
            return local[key]
        if gcd(l, big_m) == 1:
            seq = local_inverse_coefficients(f1, f2, l, chi, r)
        else:
            # bad prime: the m-sum contributes only m = 1
            s1 = f1.a_prime_power(l, r)
            s2 = f2.a_prime_power(l, r)
            seq = []
            for rr in range(r + 1):
                cv = _chi_value(chi, chi_t, l**rr)
                prod = s1[rr] * s2[rr]
                if isinstance(cv, int):
                    seq.append(cv * prod if cv else 0)
                else:
                    seq.append(prod * cv)
        for rr, v in enumerate(seq):
            local[(l, rr)] = v
        return seq[r]

    for n in range(2, n_max + 1):
        l = spf[n]
        m, r = n, 0
        while m % l == 0:
            m //= l
            r += 1
        lv = local_coeff(l, r)
        out[n] = lv if m == 1 else out[m] * lv
    return out


# -- numeric evaluation ------------------------------------------------------


def _embed_scalar(x, dps_guard: int):
    if isinstance(x, int):
        return mpmath.mpf(x)
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, CycloNumber):
        if x.is_rational():
            r = x.as_rational()
            return mpmath.mpf(r.numerator) / r.denominator
        return x.embed(dps_guard)._mpc()
    if isinstance(x, QuadExt):
        return x.embed(dps_guard)._mpc()
    raise TypeError(f"cannot embed {type(x).__name__}")


def convergence_bound(f1: Eigenform, f2: Eigenform) -> Fraction:
    """Series converges (with certified tail) for s strictly above this."""
    return Fraction(f1.k + f2.k, 2) + 1


def tail_bound(f1: Eigenform, f2: Eigenform, s: int, t: int, digits: int = 50):
    """Certified bound on the absolute tail past N = t, as an mpf.

    Assumes the Deligne bound for both forms' coefficients.
    """
    w = Fraction(f1.k + f2.k - 2, 2)
    margin = s - w - 2
    if margin <= 0:
        raise ValueError(
            f"s = {s} is outside the convergence region s > {w + 2} "
            f"(= (k1+k2)/2 + 1)"
        )
    with mpmath.workdps(digits + 10):
        tm = mpmath.mpf(t)
        expo = mpmath.mpf(w.numerator) / w.denominator + 2 - s
        return 45 * tm**expo * (1 / (mpmath.mpf(margin.numerator) / margin.denominator)
                                + 1 / tm)


def pole_condition(f1: Eigenform, f2: Eigenform, chi: DirichletCharacter) -> bool:
    """Heuristic check that f2 is the eps1^(-1) chi^(-1) twist of f1.

    When it holds the completed function has a pole at s = k1; detection is
    advisory (the convergence precondition already excludes that point).
    """
    if f1.k != f2.k:
        return False
    inv = full_nebentypus(f1).inverse()
    for l in sorted(set(f1.ap) & set(f2.ap))[:25]:
        if gcd(l, aux_modulus(f1, f2, chi)) != 1:
            continue
        lhs = f2.a_prime(l)
        rhs = inv(l) * chi.inverse()(l) * f1.a_prime(l)
        if not (rhs - lhs == 0 if isinstance(rhs, (CycloNumber, QuadExt))
                else lhs == rhs):
            return False
    return True


@dataclass
class LValueResult:
    value: ComplexAP
    tail: str
    s: int
    n_max: int
    digits: int
    route: str
    warnings: list[str]

    def as_dict(self) -> dict:
        re_s, im_s = self.value.to_strings()
        return {
            "re": re_s,
            "im": im_s,
            "digits": self.digits,
            "tail_bound": self.tail,
            "s": self.s,
            "n_max": self.n_max,
            "route": self.route,
            "warnings": self.warnings,
        }


def evaluate_L(f1: Eigenform, f2: Eigenform, chi: DirichletCharacter, s: int,
               digits: int = 50, n_max: int = 10**5,
               route: str = "convolution") -> LValueResult:
    """Numeric value of the series at integer s in the convergence region."""
    bound = convergence_bound(f1, f2)
    if not s > bound:
        raise ValueError(
            f"s = {s} is outside the convergence region s > {bound} "
            f"(= (k1+k2)/2 + 1); analytic continuation not implemented"
        )
    warnings: list[str] = []
    if pole_condition(f1, f2, chi) and s == f1.k:
        warnings.append(
            f"pole condition detected: the completed function has a pole at s = {f1.k}"
        )
    if route == "convolution":
        coeffs = dirichlet_coefficients(f1, f2, chi, n_max).collapse()
    elif route == "euler":
        coeffs = euler_coefficients(f1, f2, chi, n_max)
    else:
        raise ValueError(f"unknown route {route!r}")
    guard = digits + 15
    with mpmath.workdps(guard):
        total = mpmath.mpc(0)
        for n in range(1, n_max + 1):
            c = coeffs[n]
            if isinstance(c, int):
                if c == 0:
                    continue
                total += c * mpmath.mpf(n) ** (-s)
            else:
                total += _embed_scalar(c, guard) * mpmath.mpf(n) ** (-s)
        tail = tail_bound(f1, f2, s, n_max, digits)
        value = ComplexAP.from_mpc(total, digits)
        tail_str = mpmath.nstr(tail, 8)
    return LValueResult(value, tail_str, s, n_max, digits, route, warnings)
