"""HTTP service exposing the verdict pipelines.

Every endpoint takes a JobDocument (profile + module + optional
subobjects and lattices), runs a pure computation, and returns a
structured response plus deterministic human-readable report lines.
Status semantics: "ok" = conclusive verdict, "inconclusive" = not
determined at the working precision, "invalid" = the input fails its
preconditions.  There is no server-side state; concurrent requests do
not interact.
"""

from __future__ import annotations

from typing import Literal, Optional

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field

from . import __version__
from .bmodel import ADMISSIBLE_MIXED, classify, vcris_rank, wdr_basis
from .documents import (
    JobDocument,
    StrictModel,
    breuil_witnesses,
    build_lattices,
    build_module,
    build_profile,
    build_subobjects,
    export_breuil,
    export_module,
    export_series,
)
from .errors import Inconclusive, InvalidInput, PadicmfError, UnsupportedShape
from .filtered import (
    CLOSED,
    GENERIC,
    check_punctual_weak_admissibility,
    hodge_number,
    newton_number,
    specialize_closed,
    validate,
    verify_strongly_divisible,
)

app = FastAPI(
    title="padicmf",
    version=__version__,
    description="Filtered Frobenius-module admissibility verdicts over "
                "p-adic power-series rings",
)


class JobRequest(StrictModel):
    job: JobDocument


class NewtonRequest(StrictModel):
    job: JobDocument
    point: Literal["closed", "generic"] = "closed"


class WeakAdmRequest(StrictModel):
    job: JobDocument
    auto: bool = False


class BaseResponse(BaseModel):
    model_config = ConfigDict(extra="forbid")
    status: Literal["ok", "inconclusive", "invalid"]
    report: list[str]


class ValidateResponse(BaseResponse):
    passed: Optional[bool]


class HodgeResponse(BaseResponse):
    hodge: int
    modulus: str


class NewtonResponse(BaseResponse):
    newton: str
    point: str
    modulus: str


class WeakAdmResponse(BaseResponse):
    admissible: Optional[bool]
    mode: str
    lattices: list[dict] = Field(default_factory=list)


class RankResponse(BaseResponse):
    rank: int
    weierstrass_degree: int


class ClassifyResponse(BaseResponse):
    classification: str
    evidence: dict


class BreuilResponse(BaseResponse):
    passed: Optional[bool]
    export: dict


class EchoResponse(BaseResponse):
    module: dict


@app.exception_handler(Inconclusive)
async def _handle_inconclusive(request, exc):
    return JSONResponse(status_code=200, content={
        "status": "inconclusive",
        "report": [f"inconclusive at current precision: {exc}"],
        "error": type(exc).__name__,
        "detail": str(exc),
    })


@app.exception_handler(PadicmfError)
async def _handle_invalid(request, exc):
    return JSONResponse(status_code=400, content={
        "status": "invalid",
        "report": [f"invalid input: {exc}"],
        "error": type(exc).__name__,
        "detail": str(exc),
    })


def _load(job: JobDocument):
    profile = build_profile(job.profile)
    module = build_module(profile, job.module)
    return profile, module


@app.get("/")
def info():
    return {"name": "padicmf", "version": __version__}


@app.get("/healthz")
def healthz():
    return {"status": "ok"}


@app.post("/v1/validate", response_model=ValidateResponse)
def validate_endpoint(req: JobRequest):
    _, module = _load(req.job)
    verdict = validate(module)
    status = {True: "ok", False: "invalid", None: "inconclusive"}[
        verdict.passed]
    return ValidateResponse(status=status, passed=verdict.passed,
                            report=verdict.lines())


@app.post("/v1/hodge", response_model=HodgeResponse)
def hodge_endpoint(req: JobRequest):
    profile, module = _load(req.job)
    t_h = hodge_number(module)
    mod = profile.modulus(("Y", profile.trunc_y))
    return HodgeResponse(status="ok", hodge=t_h, modulus=mod,
                         report=[f"t_H = {t_h} ({mod})"])


@app.post("/v1/newton", response_model=NewtonResponse)
def newton_endpoint(req: NewtonRequest):
    profile, module = _load(req.job)
    t_n = newton_number(module, req.point)
    mod = profile.modulus(("Y", profile.trunc_y))
    return NewtonResponse(status="ok", newton=str(t_n), point=req.point,
                          modulus=mod,
                          report=[f"t_N({req.point}) = {t_n} ({mod})"])


@app.post("/v1/weakadm", response_model=WeakAdmResponse)
def weakadm_endpoint(req: WeakAdmRequest):
    profile, module = _load(req.job)
    subs = build_subobjects(profile, req.job.subobjects)
    verdict = check_punctual_weak_admissibility(
        module, subobjects=subs, auto=req.auto)
    report = verdict.lines()
    lattice_out = []
    for lat in build_lattices(profile, req.job.lattices):
        lv = _lattice_verdict(profile, module, lat)
        report.extend(lv.lines())
        lattice_out.append(lv.as_dict())
    status = {True: "ok", False: "ok", None: "inconclusive"}[verdict.passed]
    return WeakAdmResponse(status=status, admissible=verdict.passed,
                           mode=verdict.mode, lattices=lattice_out,
                           report=report)


def _lattice_verdict(profile, module, lattice):
    fil1 = module.step_generators(1)
    if lattice.point == CLOSED:
        point = specialize_closed(module)
        ambient = [[x.eval_zero() for x in vec] for vec in fil1]
        return verify_strongly_divisible(lattice, point.phi, ambient,
                                         profile)
    return verify_strongly_divisible(lattice, module.frobenius, fil1,
                                     profile)


@app.post("/v1/bpair-rank", response_model=RankResponse)
def bpair_rank_endpoint(req: JobRequest):
    profile, module = _load(req.job)
    f, g = _fil1_pair(module)
    res = vcris_rank(f, g)
    report = [f"scalar-solution rank = {res.rank} "
              f"(Weierstrass degree of f = {res.weierstrass_degree_f})"]
    report.extend(res.verdict.lines())
    return RankResponse(status="ok", rank=res.rank,
                        weierstrass_degree=res.weierstrass_degree_f,
                        report=report)


def _fil1_pair(module):
    from .bmodel import _fil1_line, _fil1_rank
    if module.rank != 2:
        raise UnsupportedShape("rank-2 module required")
    if _fil1_rank(module) != 1:
        raise UnsupportedShape("weight-one step must have rank 1")
    return _fil1_line(module)


@app.post("/v1/classify", response_model=ClassifyResponse)
def classify_endpoint(req: JobRequest):
    profile, module = _load(req.job)
    result = classify(module)
    report = result.lines()
    report.extend(result.weak_admissibility.lines())
    if result.breuil_verdict is not None:
        report.extend(result.breuil_verdict.lines())
    evidence = {
        "hodge": result.hodge,
        "newton_closed": str(result.newton_closed),
        "newton_generic": str(result.newton_generic),
        "weak_admissibility": result.weak_admissibility.as_dict(),
        "validation": result.validation.as_dict(),
        "residue_note": result.residue_degree_note,
    }
    if result.vcris is not None:
        evidence["vcris_rank"] = result.vcris.rank
        evidence["weierstrass_degree_f"] = result.vcris.weierstrass_degree_f
    if result.breuil_verdict is not None:
        evidence["breuil"] = result.breuil_verdict.as_dict()
    return ClassifyResponse(status="ok", classification=result.verdict,
                            evidence=evidence, report=report)


@app.post("/v1/breuil", response_model=BreuilResponse)
def breuil_endpoint(req: JobRequest):
    profile, module = _load(req.job)
    result = classify(module)
    if result.verdict != ADMISSIBLE_MIXED:
        raise InvalidInput(
            f"module is not in the admissible mixed class "
            f"(classified {result.verdict})")
    witnesses = breuil_witnesses(result.breuil_module)
    export = export_breuil(result.breuil_module, witnesses)
    report = result.breuil_verdict.lines()
    return BreuilResponse(status="ok", passed=result.breuil_verdict.passed,
                          export=export, report=report)


@app.post("/v1/echo", response_model=EchoResponse)
def echo_endpoint(req: JobRequest):
    """Parse and re-export the module document (round-trip check)."""
    _, module = _load(req.job)
    return EchoResponse(status="ok", module=export_module(module),
                        report=["module parsed"])
