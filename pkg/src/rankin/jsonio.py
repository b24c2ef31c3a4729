"""JSON encoding of the scalar tower: int, Fraction, CycloNumber, QuadExt, ComplexAP.

Canonical emission (deterministic, round-trips exactly):
  int            -> JSON int
  Fraction       -> "num/den" string (integers collapse to JSON ints)
  CycloNumber    -> {"M": int, "coeffs": [[num, den], ...]}
  QuadExt        -> {"quadratic": {"c0":…, "c1":…, "trace":…, "norm":…, "root":…}}
  ComplexAP      -> {"re": str, "im": str, "digits": int}

Accepted on input, additionally: [num, den] pairs for rationals.
"""

from __future__ import annotations

from fractions import Fraction

from .cyclo import ComplexAP, CycloNumber
from .quadratic import QuadContext, QuadExt


def scalar_to_json(x):
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return int(x)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, CycloNumber):
        return x.to_json()
    if isinstance(x, QuadExt):
        return {
            "quadratic": {
                "c0": scalar_to_json(x.c0),
                "c1": scalar_to_json(x.c1),
                "trace": scalar_to_json(x.ctx.s),
                "norm": scalar_to_json(x.ctx.n),
                "root": x.ctx.root,
            }
        }
    if isinstance(x, ComplexAP):
        re_s, im_s = x.to_strings()
        return {"re": re_s, "im": im_s, "digits": x.digits}
    raise TypeError(f"cannot serialize scalar of type {type(x).__name__}")


def scalar_from_json(obj):
    if isinstance(obj, bool):
        raise ValueError("bool is not a scalar")
    if isinstance(obj, int):
        return obj
    if isinstance(obj, str):
        parts = obj.split("/")
        if len(parts) == 1:
            return Fraction(int(parts[0]))
        if len(parts) == 2:
            return Fraction(int(parts[0]), int(parts[1]))
        raise ValueError(f"bad rational literal {obj!r}")
    if isinstance(obj, list):
        if len(obj) == 2 and all(isinstance(v, int) for v in obj):
            return Fraction(obj[0], obj[1])
        raise ValueError(f"bad rational pair {obj!r}")
    if isinstance(obj, dict):
        if "M" in obj:
            return CycloNumber.from_json(obj)
        if "quadratic" in obj:
            q = obj["quadratic"]
            try:
                ctx = QuadContext(
                    _as_cyclo(scalar_from_json(q["trace"])),
                    _as_cyclo(scalar_from_json(q["norm"])),
                    q.get("root", "plus"),
                )
                return QuadExt(
                    ctx,
                    _as_cyclo(scalar_from_json(q["c0"])),
                    _as_cyclo(scalar_from_json(q.get("c1", 1))),
                )
            except (KeyError, TypeError) as exc:
                raise ValueError(f"bad quadratic scalar: {exc}") from exc
        if "re" in obj and "im" in obj:
            return ComplexAP(obj["re"], obj["im"], int(obj.get("digits", 50)))
        raise ValueError(f"unrecognized scalar object with keys {sorted(obj)}")
    raise ValueError(f"cannot parse scalar from {type(obj).__name__}")


def _as_cyclo(x):
    if isinstance(x, CycloNumber):
        return x
    if isinstance(x, (int, Fraction)):
        return CycloNumber.from_rational(x)
    raise ValueError(f"{x!r} is not an exact scalar")


def normalize_exact(x):
    """Collapse exact scalars to their simplest type (for canonical output)."""
    if isinstance(x, QuadExt) and x.is_scalar():
        x = x.as_cyclo()
    if isinstance(x, CycloNumber) and x.is_rational():
        x = x.as_rational()
    if isinstance(x, Fraction) and x.denominator == 1:
        x = int(x)
    return x
