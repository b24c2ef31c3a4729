"""Regenerate the packaged eigenform data files (a_l for all primes l < 10^5).

1.12.a.a (weight 12, level 1): coefficients of the discriminant form via
the cube of the eta product.  prod(1-q^n)^3 has the sparse expansion
sum (-1)^k (2k+1) q^(k(k+1)/2); squaring it twice more gives the 24th
power.  The 6th power fits int64 exactly (|a_n| <= d(n) n for the weight-3
form, ~1.3e7 here); the 12th and 24th powers overflow doubles, so those two
squarings run modulo a battery of primes < 128 through real FFTs and are
recombined by CRT.  FFT exactness margin: each convolution entry is a sum
of <= 1e5 products of residues < 127^2, so magnitudes stay below 1.7e9 and
the worst-case float64 FFT error (~2^18 * 1.7e9 * 2^-53 ~ 0.05) is far
under the 0.5 rounding threshold.

11.2.a.a (weight 2, level 11): point counts of y^2 + y = x^3 - x^2 - 10x - 20
over F_l.  For odd l the substitution (2y+1)^2 = 4f(x)+1 turns the fiber
count into a Legendre-symbol sum, evaluated with numpy square tables.

Both tables are validated before writing: initial segments against exact
pure-Python eta products, the Ramanujan congruence mod 691 at every prime,
Hasse/Deligne bounds at every prime, and pinned small values.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np
from scipy.signal import fftconvolve

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from rankin.arith import primes_up_to, xgcd  # noqa: E402
from rankin.qseries import delta_qexp  # noqa: E402

BOUND = 10**5
OUT_DIR = Path(__file__).resolve().parent.parent / "src" / "rankin" / "data" / "forms"

CRT_PRIMES = [127, 113, 109, 107, 103, 101, 97, 89, 83, 79, 73, 71, 67, 61, 59]


def eta_power_24(length: int) -> dict[int, int]:
    """{prime l: tau(l)} for l < length, via eta^3 -> eta^6 -> (mod-m FFT)^2."""
    # sparse eta^3: exponents k(k+1)/2, values (-1)^k (2k+1)
    exps, vals = [], []
    k = 0
    while k * (k + 1) // 2 < length:
        exps.append(k * (k + 1) // 2)
        vals.append((2 * k + 1) * (-1 if k % 2 else 1))
        k += 1
    exps_a = np.array(exps, dtype=np.int64)
    vals_a = np.array(vals, dtype=np.int64)

    # exact eta^6 by sparse self-convolution
    e6 = np.zeros(length, dtype=np.int64)
    for i in range(len(exps_a)):
        rest = length - exps_a[i]
        sel = exps_a < rest
        np.add.at(e6, exps_a[i] + exps_a[sel], vals_a[i] * vals_a[sel])
    assert int(np.abs(e6).max()) < 2**40

    primes = primes_up_to(length - 1)
    big = 1
    for m in CRT_PRIMES:
        big *= m
    # CRT basis
    basis = []
    for m in CRT_PRIMES:
        rest = big // m
        _, inv, _ = xgcd(rest % m, m)
        basis.append(rest * (inv % m))

    residues = np.zeros((len(CRT_PRIMES), len(primes)), dtype=np.int64)
    for mi, m in enumerate(CRT_PRIMES):
        a = (e6 % m).astype(np.float64)
        c12 = np.rint(fftconvolve(a, a)[:length])
        a12 = np.mod(c12.astype(np.int64), m).astype(np.float64)
        c24 = np.rint(fftconvolve(a12, a12)[:length])
        a24 = np.mod(c24.astype(np.int64), m)
        # tau(n) = [q^(n-1)] eta^24
        residues[mi] = a24[np.array(primes) - 1]

    table: dict[int, int] = {}
    half = big // 2
    for idx, l in enumerate(primes):
        x = 0
        for mi in range(len(CRT_PRIMES)):
            x += int(residues[mi, idx]) * basis[mi]
        x %= big
        if x > half:
            x -= big
        table[l] = x
    return table


def curve_11a(length: int) -> dict[int, int]:
    """{prime l: a_l} for the level-11 elliptic curve, l < length."""
    table: dict[int, int] = {}
    for l in primes_up_to(length - 1):
        if l == 2:
            # brute force the affine points of y^2 + y = x^3 - x^2 - 10x - 20 over F_2
            count = 1  # infinity
            for x in range(2):
                for y in range(2):
                    if (y * y + y - (x**3 - x * x - 10 * x - 20)) % 2 == 0:
                        count += 1
            table[2] = 2 + 1 - count
            continue
        if l == 11:
            table[11] = 1  # split multiplicative reduction at the conductor
            continue
        xs = np.arange(l, dtype=np.int64)
        f = (xs * xs % l * xs - xs * xs - 10 * xs - 20) % l
        arg = (4 * f + 1) % l
        sq = np.zeros(l, dtype=np.int8)
        sq[(xs * xs) % l] = 1
        chi = np.where(arg == 0, 0, np.where(sq[arg] == 1, 1, -1))
        table[l] = -int(chi.sum())
    return table


def validate_tau(table: dict[int, int]) -> None:
    known = {2: -24, 3: 252, 5: 4830, 7: -16744, 11: 534612, 13: -577738}
    for l, v in known.items():
        assert table[l] == v, (l, table[l], v)
    exact = delta_qexp(2001)
    for l in primes_up_to(2000):
        assert table[l] == exact.coeffs[l], f"tau({l}) mismatch vs exact eta product"
    for l, v in table.items():
        assert (v - 1 - l**11) % 691 == 0, f"tau({l}) fails the mod-691 congruence"
        assert v * v <= 4 * l**11, f"tau({l}) breaks the Deligne bound"
    print(f"tau table validated on {len(table)} primes")


def validate_11a(table: dict[int, int]) -> None:
    known = {2: -2, 3: -1, 5: 1, 7: -2, 11: 1, 13: 4, 89: 15, 97: -7}
    for l, v in known.items():
        assert table[l] == v, (l, table[l], v)
    # exact eta(q)^2 eta(q^11)^2 up to 3000
    n = 3000
    e1 = [0] * n
    e1[0] = 1
    k = 1
    while k * (3 * k - 1) // 2 < n or k * (3 * k + 1) // 2 < n:
        for g in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            if g < n:
                e1[g] += -1 if k % 2 else 1
        k += 1

    def mul(a, b):
        out = [0] * n
        for i, ai in enumerate(a):
            if ai:
                for j in range(n - i):
                    if b[j]:
                        out[i + j] += ai * b[j]
        return out

    e2 = mul(e1, e1)
    e2_11 = [0] * n
    for i in range(0, n, 11):
        e2_11[i] = e2[i // 11]
    prod = mul(e2, e2_11)
    coeffs = [0] + prod[: n - 1]  # multiply by q
    for l in primes_up_to(n - 1):
        assert table[l] == coeffs[l], f"a_{l} mismatch vs exact eta product"
    for l, v in table.items():
        if l != 11:
            assert v * v <= 4 * l, f"a_{l} breaks the Hasse bound"
    print(f"11a table validated on {len(table)} primes")


def trivial_character_spec(modulus: int) -> dict:
    from rankin.characters import DirichletCharacter

    return DirichletCharacter.trivial(modulus).to_json()


def write_record(path: Path, label: str, k: int, level: int,
                 ap: dict[int, int]) -> None:
    record = {
        "label": label,
        "k": k,
        "N_f": level,
        "p": None,
        "eps_N": trivial_character_spec(level),
        "eps_p": None,
        "ap": {str(l): v for l, v in sorted(ap.items())},
        "alpha": None,
        "beta": None,
        "crystalline": False,
        "petersson_norm": None,
    }
    path.write_text(json.dumps(record, separators=(",", ":")) + "\n")
    print(f"wrote {path} ({path.stat().st_size} bytes)")


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    tau = eta_power_24(BOUND)
    validate_tau(tau)
    write_record(OUT_DIR / "1.12.a.a.json", "1.12.a.a", 12, 1, tau)
    a11 = curve_11a(BOUND)
    validate_11a(a11)
    write_record(OUT_DIR / "11.2.a.a.json", "11.2.a.a", 2, 11, a11)


if __name__ == "__main__":
    main()
