"""Elementary number-theoretic helpers used across the package.

Everything here works on plain Python ints and is exact.  The inputs we
care about are small (moduli of characters, levels, primes below 10^5),
so trial division is the right tool; no probabilistic shortcuts.
"""

from __future__ import annotations

from functools import lru_cache


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as {prime: exponent}."""
    if n < 1:
        raise ValueError(f"factorize expects n >= 1, got {n}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 5
    while d * d <= n:
        for p in (d, d + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        d += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return factorize(n) == {n: 1}


def divisors(n: int) -> list[int]:
    """Sorted list of positive divisors of n."""
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def euler_phi(n: int) -> int:
    phi = 1
    for p, e in factorize(n).items():
        phi *= p ** (e - 1) * (p - 1)
    return phi


def moebius(n: int) -> int:
    mu = 1
    for _, e in factorize(n).items():
        if e > 1:
            return 0
        mu = -mu
    return mu


def primes_up_to(bound: int) -> list[int]:
    """All primes <= bound, by sieve of Eratosthenes."""
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(bound**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i in range(2, bound + 1) if sieve[i]]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def crt_lift(residues: list[int], moduli: list[int]) -> int:
    """x mod prod(moduli) with x = residues[i] mod moduli[i] (moduli coprime)."""
    x, m = 0, 1
    for r, q in zip(residues, moduli):
        g, s, _ = xgcd(m, q)
        if g != 1:
            raise ValueError("crt_lift needs pairwise coprime moduli")
        x = (x + (r - x) * s % q * m) % (m * q)
        m *= q
    return x


def multiplicative_order(a: int, m: int) -> int:
    """Order of a in (Z/m)^*; a must be a unit mod m."""
    from math import gcd

    if gcd(a, m) != 1:
        raise ValueError(f"{a} is not a unit mod {m}")
    order = euler_phi(m)
    for p in factorize(order):
        while order % p == 0 and pow(a, order // p, m) == 1:
            order //= p
    return order


@lru_cache(maxsize=None)
def primitive_root(q: int) -> int:
    """Smallest primitive root mod q, for q an odd prime power or q in {2, 4}."""
    if q in (2, 4):
        return q - 1
    fac = factorize(q)
    if len(fac) != 1 or 2 in fac:
        raise ValueError(f"{q} has no primitive root")
    (p, e), = fac.items()
    phi_p = p - 1
    g = None
    for cand in range(2, p):
        if multiplicative_order(cand, p) == phi_p:
            g = cand
            break
    if g is None:  # p = 2 handled above; p odd prime always has one
        raise ValueError(f"no primitive root mod {p}")
    if e == 1:
        return g
    # lift to p^e: g works unless g^(p-1) = 1 mod p^2, in which case g + p does
    if pow(g, p - 1, p * p) == 1:
        g += p
    return g
