"""Eigenform records: validation, coefficient assembly, p-stabilisation.

A record is either a source newform (p is None; ap holds Hecke eigenvalues
at primes including those dividing the level) or a p-level U_p-eigenform
(p set; ap holds the tame eigenvalues and alpha is the U_p eigenvalue).
Coefficients at prime powers follow the Hecke recurrence

    a_{l^(r+1)} = a_l a_{l^r} - l^(k-1) eps(l) a_{l^(r-1)}

with eps(l) = 0 at primes dividing the full level (which includes p for
stabilised records, so a_{p^r} = alpha^r automatically), and extend
multiplicatively.

p-stabilisation picks a root of X^2 - a_p X + p^(k-1) eps_N(p): exact
rational roots when the discriminant is a rational square, an exact
QuadExt root otherwise.  alpha = beta (non-regular) is an error.

The conjugate form twists the prime-to-level eigenvalues by eps_N^(-1)
and inverts the tame nebentypus; the p-part of the nebentypus and the
slope at p are untouched, which is the point of using it instead of
complex conjugation.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import gcd, isqrt
from pathlib import Path

from .arith import is_prime, primes_up_to
from .characters import DirichletCharacter, LocAlgChar
from .cyclo import CycloNumber
from .jsonio import normalize_exact, scalar_from_json, scalar_to_json
from .qseries import QExpansion
from .quadratic import QuadContext, sqrt_rational


class DataError(ValueError):
    """A form record or database input failed validation."""


def _is_exact_scalar(x) -> bool:
    from .quadratic import QuadExt

    return isinstance(x, (int, Fraction, CycloNumber, QuadExt))


class Eigenform:
    """One eigenform record; immutable once constructed."""

    __slots__ = ("label", "k", "N_f", "p", "eps_N", "eps_p", "ap",
                 "alpha", "beta", "crystalline", "petersson_norm")

    def __init__(self, label: str, k: int, N_f: int, eps_N: DirichletCharacter,
                 ap: dict[int, object], p: int | None = None,
                 eps_p: DirichletCharacter | None = None,
                 alpha=None, beta=None, crystalline: bool = False,
                 petersson_norm: str | None = None):
        if k < 1:
            raise DataError(f"{label}: weight k must be >= 1, got {k}")
        if N_f < 1:
            raise DataError(f"{label}: tame level must be >= 1, got {N_f}")
        if p is not None:
            if not is_prime(p):
                raise DataError(f"{label}: p = {p} is not prime")
            if N_f % p == 0:
                raise DataError(f"{label}: tame level {N_f} must be coprime to p = {p}")
        if eps_N.conductor and N_f % eps_N.conductor:
            raise DataError(
                f"{label}: eps_N conductor {eps_N.conductor} does not divide N_f = {N_f}"
            )
        eps_N = eps_N.extend_to(N_f)
        if eps_p is not None:
            if p is None:
                raise DataError(f"{label}: eps_p given without p")
            LocAlgChar(0, eps_p, p)  # validates p-power conductor
            eps_p = eps_p.primitive_part()
        for l in ap:
            if not is_prime(l):
                raise DataError(f"{label}: ap key {l} is not prime")
        for l, v in ap.items():
            if not _is_exact_scalar(v):
                raise DataError(f"{label}: ap[{l}] is not an exact scalar")
        if crystalline:
            if p is None:
                raise DataError(f"{label}: crystalline record needs p")
            if alpha is None or beta is None:
                raise DataError(f"{label}: crystalline record needs alpha and beta")
            aps = ap.get(p)
            if aps is None:
                raise DataError(f"{label}: crystalline record needs ap[{p}]")
            if not (alpha + beta == aps):
                raise DataError(f"{label}: alpha + beta != a_p (field alpha/beta)")
            expected = p ** (k - 1) * eps_N(p)
            if not (alpha * beta == expected):
                raise DataError(f"{label}: alpha * beta != p^(k-1) eps_N(p) (field alpha/beta)")
        self.label = label
        self.k = k
        self.N_f = N_f
        self.p = p
        self.eps_N = eps_N
        self.eps_p = eps_p
        self.ap = dict(ap)
        self.alpha = alpha
        self.beta = beta
        self.crystalline = crystalline
        self.petersson_norm = petersson_norm

    # -- nebentypus -------------------------------------------------------

    def eps_at(self, l: int):
        """Full nebentypus value at a prime l (0 at primes dividing the level)."""
        if self.p is not None and l == self.p:
            return CycloNumber.zero()
        v = self.eps_N(l)
        if self.eps_p is not None:
            v = v * self.eps_p(l)
        return v

    def eps_tame_p(self) -> CycloNumber:
        """eps_N evaluated at p, the quantity entering the Hecke quadratic."""
        if self.p is None:
            raise DataError(f"{self.label}: record has no stabilisation prime")
        return self.eps_N(self.p)

    @property
    def weight_char(self) -> LocAlgChar | None:
        if self.p is None:
            return None
        fin = self.eps_p if self.eps_p is not None else DirichletCharacter.trivial(1)
        return LocAlgChar(self.k, fin, self.p)

    # -- coefficients -------------------------------------------------------

    def a_prime(self, l: int):
        if self.p is not None and l == self.p:
            if self.alpha is None:
                raise DataError(f"{self.label}: no U_p eigenvalue stored")
            return self.alpha
        if l not in self.ap:
            raise DataError(f"{self.label}: missing Hecke eigenvalues at primes [{l}]")
        return self.ap[l]

    def check_primes(self, bound: int) -> None:
        """Raise, listing every prime < bound the record lacks."""
        missing = [l for l in primes_up_to(bound - 1)
                   if l not in self.ap and not (self.p == l and self.alpha is not None)]
        if missing:
            shown = ", ".join(map(str, missing[:10]))
            more = ", ..." if len(missing) > 10 else ""
            raise DataError(
                f"{self.label}: missing Hecke eigenvalues at primes [{shown}{more}]"
            )

    def a_prime_power(self, l: int, r: int) -> list:
        """[a_{l^0}, ..., a_{l^r}] by the Hecke recurrence."""
        seq = [1]
        if r >= 1:
            al = self.a_prime(l)
            seq.append(al)
            mult = l ** (self.k - 1) * self.eps_at(l)
            for _ in range(1, r):
                seq.append(al * seq[-1] - mult * seq[-2])
        return seq

    def coefficients(self, n_max: int) -> list:
        """[a_0 .. a_{n_max}] with a_0 = 0, assembled multiplicatively."""
        self.check_primes(n_max + 1)
        out = [0] * (n_max + 1)
        if n_max >= 1:
            out[1] = 1
        spf = _smallest_prime_factors(n_max)
        prime_pows: dict[tuple[int, int], object] = {}
        for n in range(2, n_max + 1):
            l = spf[n]
            m, r = n, 0
            while m % l == 0:
                m //= l
                r += 1
            key = (l, r)
            if key not in prime_pows:
                seq = self.a_prime_power(l, r)
                for rr in range(r + 1):
                    prime_pows[(l, rr)] = seq[rr]
            out[n] = prime_pows[key] if m == 1 else out[m] * prime_pows[key]
        return out

    def q_expansion(self, prec: int) -> QExpansion:
        coeffs = self.coefficients(prec - 1) if prec > 1 else [0]
        return QExpansion(coeffs, prec, weight=self.weight_char, level=self.N_f)

    # -- stabilisation and conjugation ---------------------------------------

    def hecke_quadratic(self, p: int) -> tuple:
        """(trace, norm) = (a_p, p^(k-1) eps_N(p)) of the stabilisation quadratic."""
        if self.p is not None:
            raise DataError(f"{self.label}: record is already a p-level eigenform")
        if self.N_f % p == 0:
            raise DataError(f"{self.label}: p = {p} divides the level; not crystalline")
        if p not in self.ap:
            raise DataError(f"{self.label}: missing Hecke eigenvalues at primes [{p}]")
        return self.ap[p], p ** (self.k - 1) * self.eps_N(p)

    def stabilise(self, p: int, root: str = "alpha", alpha=None) -> "Eigenform":
        """The U_p eigenform f - beta V_p f with U_p eigenvalue alpha.

        root picks which root of the Hecke quadratic becomes alpha when it
        is not supplied explicitly: "alpha" takes the principal branch of
        the square root of the discriminant, "beta" the other.
        """
        s, n = self.hecke_quadratic(p)
        s_c = s if isinstance(s, CycloNumber) else CycloNumber.from_rational(Fraction(s))
        n_c = n if isinstance(n, CycloNumber) else CycloNumber.from_rational(Fraction(n))
        disc = s_c * s_c - 4 * n_c
        if disc.is_zero():
            raise DataError(f"{self.label}: non-regular stabilisation at p = {p} (alpha = beta)")
        if alpha is not None:
            if not (alpha * alpha - s * alpha + n == 0):
                raise DataError(
                    f"{self.label}: supplied alpha is not a root of the Hecke quadratic at {p}"
                )
            a_val, b_val = alpha, normalize_exact(s - alpha)
        elif disc.is_rational() and s_c.is_rational() and sqrt_rational(disc.as_rational()) is not None:
            rt = sqrt_rational(disc.as_rational())
            a_val = (s_c.as_rational() + rt) / 2
            b_val = (s_c.as_rational() - rt) / 2
            if root == "beta":
                a_val, b_val = b_val, a_val
            a_val, b_val = normalize_exact(a_val), normalize_exact(b_val)
        else:
            ctx = QuadContext(s_c, n_c, "plus" if root != "beta" else "minus")
            a_val, b_val = ctx.alpha(), ctx.beta()
        return Eigenform(
            f"{self.label}(p={p},{root})", self.k, self.N_f, self.eps_N,
            {l: v for l, v in self.ap.items() if l != p} | {p: self.ap[p]},
            p=p, eps_p=DirichletCharacter.trivial(1),
            alpha=a_val, beta=b_val, crystalline=True,
            petersson_norm=self.petersson_norm,
        )

    def base_form(self) -> "Eigenform":
        """The underlying prime-to-p record, dropping the stabilisation data."""
        if self.p is None:
            return self
        if self.eps_p is not None and not self.eps_p.is_trivial():
            raise DataError(
                f"{self.label}: non-trivial character at p; no prime-to-p base form"
            )
        label = self.label
        marker = f"(p={self.p},"
        cut = label.rfind(marker)
        base_label = label[:cut] if cut != -1 and label.endswith(")") else f"{label}(base)"
        return Eigenform(base_label, self.k, self.N_f, self.eps_N, self.ap,
                         petersson_norm=self.petersson_norm)

    def conjugate(self) -> "Eigenform":
        """Twist by eps_N^(-1): a_l -> eps_N(l)^(-1) a_l away from the level."""
        inv = self.eps_N.inverse()
        new_ap = {}
        for l, v in self.ap.items():
            if gcd(l, self.N_f) == 1 and not (self.p is not None and l == self.p):
                new_ap[l] = normalize_exact(inv(l) * v)
            else:
                new_ap[l] = v
        new_alpha, new_beta = self.alpha, self.beta
        if self.p is not None and self.alpha is not None:
            scale = inv(self.p)
            new_alpha = normalize_exact(scale * self.alpha)
            if self.beta is not None:
                new_beta = normalize_exact(scale * self.beta)
        return Eigenform(
            f"{self.label}^c", self.k, self.N_f, inv, new_ap,
            p=self.p, eps_p=self.eps_p, alpha=new_alpha, beta=new_beta,
            crystalline=self.crystalline, petersson_norm=self.petersson_norm,
        )

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "k": self.k,
            "N_f": self.N_f,
            "p": self.p,
            "eps_N": self.eps_N.to_json(),
            "eps_p": self.eps_p.to_json() if self.eps_p is not None else None,
            "ap": {str(l): scalar_to_json(v) for l, v in sorted(self.ap.items())},
            "alpha": scalar_to_json(self.alpha) if self.alpha is not None else None,
            "beta": scalar_to_json(self.beta) if self.beta is not None else None,
            "crystalline": self.crystalline,
            "petersson_norm": self.petersson_norm,
        }

    @staticmethod
    def from_json(obj: dict) -> "Eigenform":
        try:
            label = obj["label"]
            k = int(obj["k"])
            n_f = int(obj["N_f"])
            p = obj.get("p")
            eps_n = DirichletCharacter.from_json(obj["eps_N"])
            eps_p = obj.get("eps_p")
            ap_raw = obj["ap"]
            crystalline = bool(obj.get("crystalline", False))
            norm = obj.get("petersson_norm")
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"malformed eigenform record: {exc}") from exc
        ap: dict[int, object] = {}
        for key, val in ap_raw.items():
            try:
                l = int(key)
                ap[l] = scalar_from_json(val)
            except ValueError as exc:
                raise DataError(f"{label}: bad ap entry {key!r}: {exc}") from exc
        alpha = scalar_from_json(obj["alpha"]) if obj.get("alpha") is not None else None
        beta = scalar_from_json(obj["beta"]) if obj.get("beta") is not None else None
        if norm is not None and not isinstance(norm, str):
            raise DataError(f"{label}: petersson_norm must be a decimal string or null")
        return Eigenform(
            label, k, n_f, eps_n, ap,
            p=int(p) if p is not None else None,
            eps_p=DirichletCharacter.from_json(eps_p) if eps_p is not None else None,
            alpha=alpha, beta=beta, crystalline=crystalline, petersson_norm=norm,
        )

    def __repr__(self):
        tag = f", p={self.p}" if self.p is not None else ""
        return f"Eigenform({self.label}: k={self.k}, N={self.N_f}{tag})"


@lru_cache(maxsize=4)
def _smallest_prime_factors(n_max: int) -> list[int]:
    spf = list(range(n_max + 1))
    for i in range(2, isqrt(n_max) + 1):
        if spf[i] == i:
            for j in range(i * i, n_max + 1, i):
                if spf[j] == j:
                    spf[j] = i
    return spf


def default_data_dir() -> Path:
    env = os.environ.get("RANKIN_DATA_DIR")
    if env:
        return Path(env)
    return Path(resources.files("rankin") / "data" / "forms")


class FormDatabase:
    """Directory of eigenform JSON records keyed by label, loaded lazily."""

    def __init__(self, root: str | Path | None = None):
        self.root = Path(root) if root is not None else default_data_dir()
        self._cache: dict[str, Eigenform] = {}

    def labels(self) -> list[str]:
        if not self.root.is_dir():
            return sorted(self._cache)
        disk = {path.stem for path in self.root.glob("*.json")}
        return sorted(disk | set(self._cache))

    def get(self, label: str) -> Eigenform:
        if label in self._cache:
            return self._cache[label]
        path = self.root / f"{label}.json"
        if not path.is_file():
            raise DataError(f"unknown eigenform label {label!r} (no {path})")
        try:
            obj = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: invalid JSON: {exc}") from exc
        form = Eigenform.from_json(obj)
        self._cache[label] = form
        return form

    def add(self, form: Eigenform) -> None:
        """Register an in-memory record (used for synthetic test forms)."""
        self._cache[form.label] = form
