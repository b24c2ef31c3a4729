"""Request and response schemas shared by the HTTP service and the CLI."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class QexpRequest(BaseModel):
    spec: str
    prec: int = Field(10, ge=1, le=5000)


class QexpResponse(BaseModel):
    spec: str
    prec: int
    weight: str | None
    level: int | None
    coefficients: list


class VerifyRequest(BaseModel):
    suite: Literal["slice", "twist", "euler", "all"] = "all"
    k1: list[int] | None = None
    k2: list[int] | None = None
    tau: list[int] | None = None
    j: list[int] | None = None
    chi: str | None = None
    p: int | None = None
    N: int = Field(4, ge=1)
    prec: int | None = Field(None, ge=2, le=2000)
    finite: bool = False
    f1: str | None = None
    f2: str | None = None
    lmax: int = Field(97, ge=2)
    power_bound: int = Field(10**4, ge=2)


class VerifyResponse(BaseModel):
    suite: str
    total: int
    passed: int
    ok: bool
    cases: list[dict]


class LValueRequest(BaseModel):
    f1: str
    f2: str
    j: int
    chi: str = "triv"
    digits: int = Field(50, ge=5, le=500)
    nmax: int = Field(10**5, ge=10)
    route: Literal["convolution", "euler"] = "convolution"


class LValueResponse(BaseModel):
    re: str
    im: str
    digits: int
    tail_bound: str
    s: int
    n_max: int
    route: str
    warnings: list[str]


class ComplexString(BaseModel):
    re: str
    im: str


class InterpRequest(BaseModel):
    f1: str
    f2: str
    j: int
    chi: str = "triv"
    digits: int = Field(50, ge=5, le=500)
    lvalue: str | None = None
    p: int | None = None
    stab1: Literal["alpha", "beta"] = "alpha"
    stab2: Literal["alpha", "beta"] = "alpha"
    petersson: str | None = None


class InterpResponse(BaseModel):
    euler_ratio: ComplexString
    archimedean: ComplexString
    gauss_block: ComplexString
    lvalue: ComplexString
    total: ComplexString
    regime: str
    exact: dict[str, bool]
    digits: int
    routes_match: bool | None
    warnings: list[str]


class FormsResponse(BaseModel):
    labels: list[str]


class FormResponse(BaseModel):
    record: dict
