"""Command handlers shared by the HTTP routes and the local CLI path.

Each handler takes a request model and returns a response model; domain
failures surface as SpecError (malformed request text) or DataError
(records, labels, precondition violations), never as HTTP concepts.
"""

from __future__ import annotations

import json
from itertools import product

from .. import verify as verify_mod
from ..characters import DirichletCharacter, LocAlgChar, parse_character_label
from ..eisenstein import eis_E, eis_F, eis_script, eis_tilde
from ..formdb import DataError, Eigenform, FormDatabase
from ..interp import (InterpInput, predicted_I_crystalline,
                      predicted_I_noncrystalline, prefactor_routes)
from ..jsonio import normalize_exact, scalar_to_json
from ..lfunc import evaluate_L
from ..qseries import QExpansion
from ..quadratic import IncompatibleExtension
from .models import (FormResponse, FormsResponse, InterpRequest,
                     InterpResponse, LValueRequest, LValueResponse,
                     QexpRequest, QexpResponse, VerifyRequest, VerifyResponse)


class SpecError(ValueError):
    """A spec string or parameter combination could not be parsed."""


def resolve_character(text: str) -> DirichletCharacter:
    """A character from a registry label or an inline JSON spec."""
    text = text.strip()
    if text.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"bad character JSON: {exc}") from exc
        return DirichletCharacter.from_json(obj)
    try:
        return parse_character_label(text)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc


def _conductor_prime(chi: DirichletCharacter) -> int | None:
    c = chi.conductor
    if c <= 1:
        return None
    for l in range(2, c + 1):
        if c % l == 0:
            return l
    return None


def _parse_kv(tokens: list[str], allowed: set[str], kind: str) -> dict[str, str]:
    kv: dict[str, str] = {}
    for tok in tokens:
        if "=" not in tok:
            raise SpecError(f"bad token {tok!r} in {kind} spec (expect key=value)")
        key, val = tok.split("=", 1)
        if key not in allowed:
            raise SpecError(f"unknown key {key!r} in {kind} spec")
        if key in kv:
            raise SpecError(f"duplicate key {key!r} in {kind} spec")
        kv[key] = val
    return kv


def _kv_int(kv: dict[str, str], key: str, kind: str, default=None) -> int:
    if key not in kv:
        if default is None:
            raise SpecError(f"{kind} spec needs {key}=<int>")
        return default
    try:
        return int(kv[key])
    except ValueError:
        raise SpecError(f"{kind} spec: {key}={kv[key]!r} is not an integer") from None


def build_qexp(spec: str, prec: int,
               db: FormDatabase | None = None) -> QExpansion:
    """A q-expansion from a spec string.

    Kinds: `eisE k= N= p= [chi=]`, `eisF k= N= p= [chi=]`,
    `scriptE k1= k2= j= N= p= [chi=]`, `tilde k1= k2= j= chi= N= p=`,
    `form <label> [stab=alpha|beta p=<prime>]`.  Any kind accepts a
    trailing `twist=<t>` (with optional `twistchi=<label>`) applying a
    theta twist.
    """
    tokens = spec.split()
    if not tokens:
        raise SpecError("empty q-expansion spec")
    kind, rest = tokens[0], tokens[1:]

    def theta_args(kv, p):
        if "twist" not in kv and "twistchi" not in kv:
            return None
        t = _kv_int(kv, "twist", kind, default=0)
        chi = resolve_character(kv["twistchi"]) if "twistchi" in kv \
            else DirichletCharacter.trivial(1)
        return LocAlgChar(t, chi, p)

    if kind in ("eisE", "eisF"):
        kv = _parse_kv(rest, {"k", "N", "p", "chi", "twist", "twistchi"}, kind)
        k = _kv_int(kv, "k", kind)
        n_lvl = _kv_int(kv, "N", kind)
        p = _kv_int(kv, "p", kind)
        chi = resolve_character(kv["chi"]) if "chi" in kv \
            else DirichletCharacter.trivial(1)
        kappa = LocAlgChar(k, chi, p)
        builder = eis_E if kind == "eisE" else eis_F
        q = builder(kappa, n_lvl, p, prec)
        tw = theta_args(kv, p)
        return q.theta_twist(tw) if tw is not None else q
    if kind == "scriptE":
        kv = _parse_kv(rest, {"k1", "k2", "j", "N", "p", "chi", "twist",
                              "twistchi"}, kind)
        k1 = _kv_int(kv, "k1", kind)
        k2 = _kv_int(kv, "k2", kind)
        j = _kv_int(kv, "j", kind)
        n_lvl = _kv_int(kv, "N", kind)
        p = _kv_int(kv, "p", kind)
        chi = resolve_character(kv["chi"]) if "chi" in kv \
            else DirichletCharacter.trivial(1)
        sigma = LocAlgChar(j, chi, p)
        q = eis_script(LocAlgChar.of(k1, p), LocAlgChar.of(k2, p), sigma,
                       n_lvl, p, prec)
        tw = theta_args(kv, p)
        return q.theta_twist(tw) if tw is not None else q
    if kind == "tilde":
        kv = _parse_kv(rest, {"k1", "k2", "j", "chi", "N", "p", "twist",
                              "twistchi"}, kind)
        if "chi" not in kv:
            raise SpecError("tilde spec needs chi=<label>")
        chi = resolve_character(kv["chi"])
        p = _kv_int(kv, "p", kind)
        q = eis_tilde(_kv_int(kv, "k1", kind), _kv_int(kv, "k2", kind),
                      _kv_int(kv, "j", kind), chi, _kv_int(kv, "N", kind),
                      p, prec)
        tw = theta_args(kv, p)
        return q.theta_twist(tw) if tw is not None else q
    if kind == "form":
        if not rest:
            raise SpecError("form spec needs a label")
        label, kv = rest[0], _parse_kv(
            rest[1:], {"stab", "p", "twist", "twistchi"}, kind)
        form = (db or FormDatabase()).get(label)
        if "stab" in kv:
            if kv["stab"] not in ("alpha", "beta"):
                raise SpecError("stab must be alpha or beta")
            p = _kv_int(kv, "p", kind)
            form = form.stabilise(p, root=kv["stab"])
        q = form.q_expansion(prec)
        if "twist" in kv or "twistchi" in kv:
            p = form.p if form.p is not None else _kv_int(kv, "p", kind)
            tw = theta_args(kv, p)
            return q.theta_twist(tw)
        return q
    raise SpecError(f"unknown q-expansion kind {kind!r} "
                    "(expect eisE, eisF, scriptE, tilde, or form)")


def handle_qexp(req: QexpRequest, db: FormDatabase | None = None) -> QexpResponse:
    q = build_qexp(req.spec, req.prec, db=db)
    return QexpResponse(
        spec=req.spec,
        prec=q.prec,
        weight=repr(q.weight) if q.weight is not None else None,
        level=q.level,
        coefficients=[scalar_to_json(normalize_exact(c)) for c in q.coeffs],
    )


def handle_verify(req: VerifyRequest, db: FormDatabase | None = None) -> VerifyResponse:
    db = db or FormDatabase()
    cases = []
    if req.suite in ("slice", "all"):
        prec = req.prec or 200
        cases += verify_mod.slice_grid_cases(
            req.k1 or [12], req.k2 or [2], req.tau or list(range(6)),
            N=req.N, p=req.p or 3, prec=prec)
        if req.finite or req.suite == "all":
            cases += verify_mod.finite_slice_cases(N=req.N, prec=prec)
    if req.suite in ("twist", "all"):
        prec = req.prec or 100
        custom = any(x is not None for x in (req.k1, req.k2, req.j, req.chi))
        if custom and req.suite == "twist":
            chis = ([resolve_character(req.chi)] if req.chi else
                    verify_mod.primitive_characters_of_conductor(3)
                    + verify_mod.primitive_characters_of_conductor(9))
            for k1, k2 in product(req.k1 or [12], req.k2 or [2]):
                for chi in chis:
                    p = req.p or _conductor_prime(chi)
                    if p is None:
                        raise SpecError("twist suite needs a non-trivial chi or p")
                    for j in (req.j or range(k2, k1)):
                        if not k2 <= j <= k1 - 1:
                            continue
                        cases.append(verify_mod.verify_twist_identity(
                            k1, k2, j, chi, req.N, p, prec))
        else:
            cases += verify_mod.twist_grid_cases(N=req.N, prec=prec)
    if req.suite in ("euler", "all"):
        f1 = db.get(req.f1 or "11.2.a.a")
        f2 = db.get(req.f2 or "11.2.a.a")
        chis = ([resolve_character(req.chi)] if req.chi else
                [DirichletCharacter.trivial(1),
                 parse_character_label("quad3")])
        for chi in chis:
            cases += verify_mod.euler_cases(f1, f2, chi, l_max=req.lmax,
                                            power_bound=req.power_bound)
    passed = sum(1 for c in cases if c.ok)
    return VerifyResponse(
        suite=req.suite,
        total=len(cases),
        passed=passed,
        ok=passed == len(cases),
        cases=[c.as_dict() for c in cases],
    )


def handle_lvalue(req: LValueRequest, db: FormDatabase | None = None) -> LValueResponse:
    db = db or FormDatabase()
    f1, f2 = db.get(req.f1), db.get(req.f2)
    chi = resolve_character(req.chi)
    res = evaluate_L(f1, f2, chi, req.j, digits=req.digits, n_max=req.nmax,
                     route=req.route)
    return LValueResponse(**res.as_dict())


def _working_prime(req: InterpRequest, chi: DirichletCharacter,
                   f1: Eigenform, f2: Eigenform) -> int:
    if req.p is not None:
        return req.p
    p = _conductor_prime(chi) or f1.p or f2.p
    if p is None:
        raise SpecError("cannot infer the working prime; pass p")
    return p


def handle_interp(req: InterpRequest, db: FormDatabase | None = None) -> InterpResponse:
    db = db or FormDatabase()
    f1, f2 = db.get(req.f1), db.get(req.f2)
    chi = resolve_character(req.chi)
    p = _working_prime(req, chi, f1, f2)
    if f1.p is None:
        f1 = f1.stabilise(p, root=req.stab1)
    if f2.p is None:
        f2 = f2.stabilise(p, root=req.stab2)
    inp = InterpInput(f1, f2, req.j, chi)
    if inp.regime == "crystalline":
        res = predicted_I_crystalline(inp, digits=req.digits,
                                      lvalue=req.lvalue,
                                      petersson=req.petersson)
    else:
        res = predicted_I_noncrystalline(inp, digits=req.digits,
                                         lvalue=req.lvalue,
                                         petersson=req.petersson)
    warnings = list(res.warnings)
    routes_match: bool | None = None
    if inp.regime == "crystalline" and not inp.chi.is_trivial():
        try:
            r1, r2 = prefactor_routes(f1, f2, req.j, chi)
            routes_match = r1 == r2
        except IncompatibleExtension:
            warnings.append("prefactor routes mix roots of different Hecke "
                            "polynomials; equality not checked exactly")
    d = res.as_dict()
    return InterpResponse(
        euler_ratio=d["euler_ratio"],
        archimedean=d["archimedean"],
        gauss_block=d["gauss_block"],
        lvalue=d["lvalue"],
        total=d["total"],
        regime=d["regime"],
        exact=d["exact"],
        digits=d["digits"],
        routes_match=routes_match,
        warnings=warnings,
    )


def handle_forms(db: FormDatabase | None = None) -> FormsResponse:
    return FormsResponse(labels=(db or FormDatabase()).labels())


def handle_form(label: str, db: FormDatabase | None = None) -> FormResponse:
    return FormResponse(record=(db or FormDatabase()).get(label).to_json())
