"""Dirichlet characters stored by discrete logs on canonical unit-group generators.

The unit group (Z/M)^* is decomposed by CRT into cyclic pieces: one
generator per odd prime power, and the pair (-1, 5) for 2^e with e >= 3.
A character is the tuple of its values on these generators, each value
recorded as the exponent fraction t with chi(g) = e^(2 pi i t).  Values
are exact CycloNumbers in the smallest cyclotomic field containing them.

Labels follow the Conrey convention "M.n" (n a unit mod M indexing the
character), with "triv" and "quad<p>" accepted as conveniences.

LocAlgChar models a locally algebraic character u -> u^n * chi(u) of Z_p^*:
an integer weight plus a finite-order part of p-power conductor, stored
primitive.  These are the weight-characters the Eisenstein constructors
and twists consume.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .arith import crt_lift, divisors, euler_phi, factorize, primitive_root
from .cyclo import CycloNumber


class _Component:
    """One CRT factor q = p^e of the modulus with its generators and dlog table."""

    __slots__ = ("q", "gens", "orders", "_table")

    def __init__(self, q: int, local_gens: list[tuple[int, int]], modulus: int):
        self.q = q
        rest = modulus // q
        self.gens = tuple(
            crt_lift([g, 1], [q, rest]) if rest > 1 else g for g, _ in local_gens
        )
        self.orders = tuple(s for _, s in local_gens)
        self._table: dict[int, tuple[int, ...]] | None = None

    def dlog(self, a: int) -> tuple[int, ...]:
        """Exponent tuple of a mod q on the local generators."""
        if self._table is None:
            table: dict[int, tuple[int, ...]] = {}

            def all_tuples(i: int):
                if i == len(self.gens):
                    yield ()
                    return
                for head in all_tuples(i + 1):
                    for k in range(self.orders[i]):
                        yield (k,) + head

            for tup in all_tuples(0):
                v = 1
                for g, k in zip(self.gens, tup):
                    v = v * pow(g, k, self.q) % self.q
                table.setdefault(v, tup)
            self._table = table
        key = a % self.q
        if key not in self._table:
            raise ValueError(f"{a} is not a unit modulo {self.q}")
        return self._table[key]


class _UnitGroup:
    __slots__ = ("modulus", "components", "gens", "orders")

    def __init__(self, modulus: int):
        self.modulus = modulus
        comps: list[_Component] = []
        for p, e in sorted(factorize(modulus).items()):
            q = p**e
            if p == 2:
                if e == 1:
                    continue
                if e == 2:
                    comps.append(_Component(q, [(3, 2)], modulus))
                else:
                    comps.append(
                        _Component(q, [(q - 1, 2), (5, 2 ** (e - 2))], modulus)
                    )
            else:
                comps.append(_Component(q, [(primitive_root(q), euler_phi(q))], modulus))
        self.components = tuple(comps)
        self.gens = tuple(g for c in comps for g in c.gens)
        self.orders = tuple(s for c in comps for s in c.orders)

    def dlog(self, a: int) -> tuple[int, ...]:
        if gcd(a, self.modulus) != 1:
            raise ValueError(f"{a} is not a unit modulo {self.modulus}")
        out: list[int] = []
        for c in self.components:
            out.extend(c.dlog(a))
        return tuple(out)


@lru_cache(maxsize=None)
def unit_group(modulus: int) -> _UnitGroup:
    if modulus < 1:
        raise ValueError("modulus must be >= 1")
    return _UnitGroup(modulus)


def _norm_frac(t: Fraction) -> Fraction:
    return t - (t.numerator // t.denominator)  # representative in [0, 1)


class DirichletCharacter:
    """Character of (Z/M)^*, zero on non-units, values exact roots of unity."""

    __slots__ = ("modulus", "logs", "_cond", "_log_table")

    def __init__(self, modulus: int, logs):
        group = unit_group(modulus)
        logs = tuple(_norm_frac(Fraction(t)) for t in logs)
        if len(logs) != len(group.gens):
            raise ValueError(
                f"modulus {modulus} has {len(group.gens)} canonical generators, "
                f"got {len(logs)} values"
            )
        for t, s in zip(logs, group.orders):
            if (t * s).denominator != 1:
                raise ValueError(
                    f"value exponent {t} has order not dividing the generator order {s}"
                )
        self.modulus = modulus
        self.logs = logs
        self._cond: int | None = None
        self._log_table: list[Fraction | None] | None = None

    # -- constructors ---------------------------------------------------

    @staticmethod
    def trivial(modulus: int = 1) -> "DirichletCharacter":
        return DirichletCharacter(modulus, [Fraction(0)] * len(unit_group(modulus).gens))

    @staticmethod
    def from_conrey(modulus: int, index: int) -> "DirichletCharacter":
        """Conrey character chi_modulus(index, .)."""
        if gcd(index, modulus) != 1:
            raise ValueError(f"Conrey index {index} is not a unit mod {modulus}")
        group = unit_group(modulus)
        logs: list[Fraction] = []
        pos = 0
        for comp in group.components:
            exps = comp.dlog(index)
            for k, s, g in zip(exps, comp.orders, comp.gens):
                del g
                logs.append(Fraction(k, s))
                pos += 1
        # chi_n(g_i) = e(b_i a_i / s_i) where n = prod g_i^{b_i}: the value at
        # generator g_i (a_i = delta_ij) is e(b_i / s_i)
        return DirichletCharacter(modulus, logs)

    # -- evaluation -----------------------------------------------------

    def value_log(self, a: int) -> Fraction | None:
        """Exponent t with chi(a) = e^(2 pi i t), or None when gcd(a, M) > 1."""
        a %= self.modulus
        if self.modulus == 1:
            return Fraction(0)
        if gcd(a, self.modulus) != 1:
            return None
        if self._log_table is not None:
            return self._log_table[a]
        group = unit_group(self.modulus)
        exps = group.dlog(a)
        return _norm_frac(sum((k * t for k, t in zip(exps, self.logs)), Fraction(0)))

    def build_table(self) -> None:
        """Precompute value_log for every residue (speeds up summations)."""
        if self._log_table is None:
            table: list[Fraction | None] = [None] * self.modulus
            for a in range(self.modulus):
                if gcd(a, self.modulus) == 1:
                    group = unit_group(self.modulus)
                    exps = group.dlog(a)
                    table[a] = _norm_frac(
                        sum((k * t for k, t in zip(exps, self.logs)), Fraction(0))
                    )
            if self.modulus == 1:
                table[0] = Fraction(0)
            self._log_table = table

    def __call__(self, a: int) -> CycloNumber:
        t = self.value_log(a)
        if t is None:
            return CycloNumber.zero()
        return CycloNumber.zeta(t.denominator, t.numerator)

    # -- invariants -----------------------------------------------------

    @property
    def order(self) -> int:
        return lcm(1, *(t.denominator for t in self.logs)) if self.logs else 1

    def parity(self) -> int:
        """chi(-1) as +1 or -1."""
        t = self.value_log(self.modulus - 1) if self.modulus > 1 else Fraction(0)
        return -1 if t == Fraction(1, 2) else 1

    def is_trivial(self) -> bool:
        return all(t == 0 for t in self.logs)

    @property
    def conductor(self) -> int:
        if self._cond is None:
            cond = self.modulus
            for f in divisors(self.modulus):
                # trivial on the kernel of (Z/M)* -> (Z/f)*?
                ok = True
                for a in range(1 % self.modulus, self.modulus, max(f, 1)):
                    if gcd(a, self.modulus) == 1 and self.value_log(a) != 0:
                        ok = False
                        break
                if ok:
                    cond = f
                    break
            self._cond = max(cond, 1)
        return self._cond

    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def primitive_part(self) -> "DirichletCharacter":
        """The primitive character of modulus cond(chi) inducing chi."""
        f = self.conductor
        if f == self.modulus:
            return self
        group = unit_group(f)
        logs: list[Fraction] = []
        for g in group.gens:
            b = g
            while gcd(b, self.modulus) != 1:
                b += f
            logs.append(self.value_log(b))
        return DirichletCharacter(f, logs)

    def _lift_to_multiple(self, m: int) -> "DirichletCharacter":
        """Same character viewed mod m, where modulus | m."""
        if m == self.modulus:
            return self
        if m % self.modulus:
            raise ValueError(f"{m} is not a multiple of the modulus {self.modulus}")
        group = unit_group(m)
        return DirichletCharacter(m, [self.value_log(g) for g in group.gens])

    def extend_to(self, m: int) -> "DirichletCharacter":
        """Induce to modulus m; requires cond(chi) | m."""
        if m % self.conductor:
            raise ValueError(
                f"cannot induce: conductor {self.conductor} does not divide {m}"
            )
        return self.primitive_part()._lift_to_multiple(m)

    # -- algebra ----------------------------------------------------------

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        m = lcm(self.modulus, other.modulus)
        a = self._lift_to_multiple(m)
        b = other._lift_to_multiple(m)
        return DirichletCharacter(m, [s + t for s, t in zip(a.logs, b.logs)])

    def inverse(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, [-t for t in self.logs])

    def __pow__(self, k: int) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, [k * t for t in self.logs])

    def __eq__(self, other):
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        return self.modulus == other.modulus and self.logs == other.logs

    __hash__ = None

    # -- labels and serialization ----------------------------------------

    @property
    def conrey_index(self) -> int:
        group = unit_group(self.modulus)
        residues: list[int] = []
        moduli: list[int] = []
        pos = 0
        for comp in group.components:
            n_local = 1
            for g, s in zip(comp.gens, comp.orders):
                t = self.logs[pos]
                pos += 1
                b = int(t * s)
                n_local = n_local * pow(g % comp.q, b, comp.q) % comp.q
            residues.append(n_local)
            moduli.append(comp.q)
        # fill in the CRT factors without generators (2^1)
        covered = 1
        for q in moduli:
            covered *= q
        rest = self.modulus // covered if covered else self.modulus
        if rest > 1:
            residues.append(1)
            moduli.append(rest)
        if not moduli:
            return 1
        return crt_lift(residues, moduli) or 1

    @property
    def label(self) -> str:
        if self.modulus == 1:
            return "triv"
        return f"{self.modulus}.{self.conrey_index}"

    def to_json(self) -> dict:
        w = self.order
        group = unit_group(self.modulus)
        return {
            "modulus": self.modulus,
            "value_order": w,
            "gens": {str(g): int(t * w) for g, t in zip(group.gens, self.logs)},
        }

    @staticmethod
    def from_json(obj: dict) -> "DirichletCharacter":
        try:
            modulus = int(obj["modulus"])
            w = int(obj["value_order"])
            gens = {int(k): int(v) for k, v in obj["gens"].items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed character spec: {exc}") from exc
        group = unit_group(modulus)
        if set(gens) != set(group.gens):
            raise ValueError(
                f"character spec for modulus {modulus} must give values on the "
                f"canonical generators {sorted(group.gens)}, got {sorted(gens)}"
            )
        return DirichletCharacter(modulus, [Fraction(gens[g], w) for g in group.gens])

    def __repr__(self):
        return f"DirichletCharacter({self.label})"


def all_characters(modulus: int) -> list[DirichletCharacter]:
    """Every Dirichlet character mod modulus."""
    group = unit_group(modulus)
    chars: list[DirichletCharacter] = []

    def rec(i: int, logs: list[Fraction]):
        if i == len(group.orders):
            chars.append(DirichletCharacter(modulus, logs))
            return
        for k in range(group.orders[i]):
            rec(i + 1, logs + [Fraction(k, group.orders[i])])

    rec(0, [])
    return chars


def primitive_characters(conductor: int) -> list[DirichletCharacter]:
    return [c for c in all_characters(conductor) if c.is_primitive()]


def quadratic_character(modulus: int) -> DirichletCharacter:
    """The unique primitive quadratic character mod modulus, if unique."""
    cands = [c for c in primitive_characters(modulus) if c.order == 2]
    if len(cands) != 1:
        raise ValueError(
            f"modulus {modulus} has {len(cands)} primitive quadratic characters; "
            "use a Conrey label instead"
        )
    return cands[0]


def parse_character_label(label: str) -> DirichletCharacter:
    """Parse 'triv', 'quad<M>', or a Conrey label '<M>.<n>'."""
    label = label.strip()
    if label in ("triv", "1.1"):
        return DirichletCharacter.trivial(1)
    if label.startswith("quad"):
        try:
            m = int(label[4:])
        except ValueError:
            raise ValueError(f"bad character label {label!r}") from None
        return quadratic_character(m)
    parts = label.split(".")
    if len(parts) == 2:
        try:
            m, n = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"bad character label {label!r}") from None
        return DirichletCharacter.from_conrey(m, n)
    raise ValueError(f"bad character label {label!r}")


def gauss_sum(chi: DirichletCharacter) -> CycloNumber:
    """G(chi) = sum over units a mod M of chi(a) zeta_M^a, exact."""
    m = chi.modulus
    chi.build_table()
    big = lcm(m, chi.order)
    terms: dict[int, Fraction] = {}
    for a in range(m):
        t = chi.value_log(a)
        if t is None:
            continue
        e = (t.numerator * (big // t.denominator) + a * (big // m)) % big
        terms[e] = terms.get(e, Fraction(0)) + 1
    if m == 1:
        return CycloNumber.one()
    return CycloNumber.from_zeta_powers(big, terms)


# -- locally algebraic characters of Z_p^* ---------------------------------


class LocAlgChar:
    """u -> u^w * chi(u) on Z_p^*: integer weight plus finite part.

    The finite part is stored primitive and must have p-power conductor.
    """

    __slots__ = ("w", "fin", "p")

    def __init__(self, w: int, fin: DirichletCharacter, p: int):
        if p < 2:
            raise ValueError("p must be a prime >= 2")
        fin = fin.primitive_part()
        c = fin.conductor
        while c % p == 0:
            c //= p
        if c != 1:
            raise ValueError(
                f"finite part has conductor {fin.conductor}, not a power of p={p}"
            )
        self.w = w
        self.fin = fin
        self.p = p

    @staticmethod
    def of(k, p: int) -> "LocAlgChar":
        """Coerce an int (algebraic weight) or pass through a LocAlgChar."""
        if isinstance(k, LocAlgChar):
            return k
        if isinstance(k, int):
            return LocAlgChar(k, DirichletCharacter.trivial(1), p)
        raise TypeError(f"cannot interpret {k!r} as a weight-character")

    @property
    def conductor_exponent(self) -> int:
        c, r = self.fin.conductor, 0
        while c > 1:
            c //= self.p
            r += 1
        return r

    def is_algebraic(self) -> bool:
        return self.fin.is_trivial()

    def __add__(self, other: "LocAlgChar") -> "LocAlgChar":
        if not isinstance(other, LocAlgChar):
            return NotImplemented
        if other.p != self.p:
            raise ValueError(f"cannot combine characters of Z_{self.p}^* and Z_{other.p}^*")
        return LocAlgChar(self.w + other.w, self.fin * other.fin, self.p)

    def __sub__(self, other: "LocAlgChar") -> "LocAlgChar":
        if not isinstance(other, LocAlgChar):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "LocAlgChar":
        return LocAlgChar(-self.w, self.fin.inverse(), self.p)

    def scale(self, k: int) -> "LocAlgChar":
        return LocAlgChar(k * self.w, self.fin**k, self.p)

    def shift(self, j: int) -> "LocAlgChar":
        """Add an integer to the algebraic weight, finite part unchanged."""
        return LocAlgChar(self.w + j, self.fin, self.p)

    def __eq__(self, other):
        if not isinstance(other, LocAlgChar):
            return NotImplemented
        return (
            self.w == other.w
            and self.p == other.p
            and self.fin.modulus == other.fin.modulus
            and self.fin.logs == other.fin.logs
        )

    __hash__ = None

    def eval(self, u) -> CycloNumber:
        """Value at a rational u with p dividing neither numerator nor denominator."""
        u = Fraction(u)
        if u == 0:
            raise ValueError("locally algebraic character undefined at 0")
        if u.numerator % self.p == 0 or u.denominator % self.p == 0:
            raise ValueError(f"{u} is not a unit at p={self.p}")
        chi_val = self.fin(u.numerator % self.fin.modulus) if self.fin.modulus > 1 else CycloNumber.one()
        if self.fin.modulus > 1 and u.denominator > 1:
            chi_val = chi_val * self.fin(u.denominator % self.fin.modulus).inverse()
        return chi_val * (u**self.w)

    def value_log_int(self, n: int) -> Fraction | None:
        """Finite-part exponent at an integer n, None when gcd(n, cond) > 1."""
        if self.fin.modulus == 1:
            return Fraction(0)
        return self.fin.value_log(n)

    def __repr__(self):
        if self.is_algebraic():
            return f"LocAlgChar({self.w}, p={self.p})"
        return f"LocAlgChar({self.w} + {self.fin.label}, p={self.p})"


def char_eval(kappa: "LocAlgChar | int", u, p: int | None = None) -> CycloNumber:
    """Evaluate a weight-character at u; plain ints act as u -> u^k."""
    if isinstance(kappa, int):
        return CycloNumber.from_rational(Fraction(u) ** kappa)
    if p is not None and kappa.p != p:
        raise ValueError(f"weight-character lives at p={kappa.p}, not {p}")
    return kappa.eval(u)
