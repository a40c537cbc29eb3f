"""JSON document schemas and conversion to/from core objects.

The outer document shapes are pydantic models with unknown fields
rejected; series and coefficient literals are validated by hand so the
error messages can carry a JSON path.

Series literal: either an integer (constant), a list of coefficient
descriptors from degree 0, or {"scale": s, "coeffs": [...]}.  Coefficient
descriptor: an integer, a list of m integers (the w-power coordinates),
{"coeffs": [...], "pscale": k}, or {"pi_coeffs": [...]} over a ramified
base.
"""

from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from .breuil import BreuilModule, SElement
from .errors import InvalidInput
from .filtered import FilteredModule, FiltrationStep, PointLattice
from .padic import PrecisionProfile
from .series import Series


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ProfileDoc(StrictModel):
    p: int
    m: int = 1
    N_p: int = 12
    e: int = 1
    eisenstein: Optional[list[int]] = None
    M_Y: int = 16
    M_u: int = 24
    M_c: int = 16
    t_window: int = 2


class FiltrationStepDoc(StrictModel):
    weight: int
    generators: list[list[Any]]


class ModuleDoc(StrictModel):
    rank: int
    frobenius: list[list[Any]]
    connection: list[list[Any]]
    filtration: list[FiltrationStepDoc]


class SubobjectDoc(StrictModel):
    generators: list[list[Any]]


class LatticeDoc(StrictModel):
    point: Literal["closed", "generic"]
    basis: list[list[Any]]
    fil1: list[list[Any]]


class JobDocument(StrictModel):
    profile: ProfileDoc
    module: ModuleDoc
    subobjects: list[SubobjectDoc] = Field(default_factory=list)
    lattices: list[LatticeDoc] = Field(default_factory=list)


# ----------------------------------------------------------------------
# profile construction
# ----------------------------------------------------------------------

def build_profile(doc: ProfileDoc, overrides: dict | None = None
                  ) -> PrecisionProfile:
    o = overrides or {}
    return PrecisionProfile(
        p=doc.p,
        m=doc.m,
        prec_p=o.get("prec_p", doc.N_p),
        e=doc.e,
        eisenstein=doc.eisenstein,
        trunc_y=o.get("trunc_y", doc.M_Y),
        trunc_u=o.get("trunc_u", doc.M_u),
        trunc_c=o.get("trunc_c", doc.M_c),
        t_window=doc.t_window,
    )


# ----------------------------------------------------------------------
# series parsing and export
# ----------------------------------------------------------------------

def parse_series(ring, length, doc, where="series"):
    if isinstance(doc, bool):
        raise InvalidInput(f"{where}: boolean is not a series")
    if isinstance(doc, int):
        return Series.constant(ring, "Y", length, ring.from_int(doc))
    if isinstance(doc, list):
        return _series_from_coeff_list(ring, length, doc, 0, where)
    if isinstance(doc, dict):
        unknown = set(doc) - {"scale", "coeffs"}
        if unknown:
            raise InvalidInput(
                f"{where}: unknown series fields {sorted(unknown)}")
        coeffs = doc.get("coeffs")
        if not isinstance(coeffs, list):
            raise InvalidInput(f"{where}: 'coeffs' must be a list")
        scale = doc.get("scale", 0)
        if not isinstance(scale, int) or isinstance(scale, bool):
            raise InvalidInput(f"{where}: 'scale' must be an integer")
        return _series_from_coeff_list(ring, length, coeffs, scale, where)
    raise InvalidInput(f"{where}: bad series literal {doc!r}")


def _series_from_coeff_list(ring, length, coeffs, scale, where):
    if len(coeffs) > length:
        raise InvalidInput(
            f"{where}: {len(coeffs)} coefficients exceed truncation {length}")
    out = []
    for i, c in enumerate(coeffs):
        try:
            out.append(ring.from_descriptor(c))
        except InvalidInput as exc:
            raise InvalidInput(f"{where}[{i}]: {exc}") from None
    return Series.from_coeffs(ring, "Y", length, out, scale)


def export_series(f: Series):
    ring = f.ring
    coeffs = [ring.export(c) for c in f.coeffs]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return {"scale": f.scale, "coeffs": coeffs}


# ----------------------------------------------------------------------
# module documents
# ----------------------------------------------------------------------

def build_module(profile: PrecisionProfile, doc: ModuleDoc) -> FilteredModule:
    n = doc.rank
    if n < 1:
        raise InvalidInput("rank must be >= 1")
    wr = profile.w_ring
    rr = profile.ok_ring
    my = profile.trunc_y

    def matrix(rows, name):
        if len(rows) != n or any(len(r) != n for r in rows):
            raise InvalidInput(f"{name} must be a {n}x{n} matrix")
        return [[parse_series(wr, my, rows[i][j], f"{name}[{i}][{j}]")
                 for j in range(n)] for i in range(n)]

    phi = matrix(doc.frobenius, "frobenius")
    conn = matrix(doc.connection, "connection")
    steps = []
    for k, step in enumerate(doc.filtration):
        gens = []
        for gidx, vec in enumerate(step.generators):
            if len(vec) != n:
                raise InvalidInput(
                    f"filtration[{k}].generators[{gidx}] must have length {n}")
            gens.append([parse_series(rr, my, x,
                                      f"filtration[{k}].gen[{gidx}][{i}]")
                         for i, x in enumerate(vec)])
        steps.append(FiltrationStep(step.weight, gens))
    return FilteredModule(profile, n, phi, conn, steps)


def export_module(D: FilteredModule) -> dict:
    return {
        "rank": D.rank,
        "frobenius": [[export_series(s) for s in row] for row in D.frobenius],
        "connection": [[export_series(s) for s in row]
                       for row in D.connection],
        "filtration": [
            {"weight": step.weight,
             "generators": [[export_series(x) for x in vec]
                            for vec in step.generators]}
            for step in D.filtration
        ],
    }


def build_subobjects(profile, docs):
    from .filtered import SubobjectSpec
    wr = profile.w_ring
    my = profile.trunc_y
    out = []
    for k, doc in enumerate(docs):
        gens = []
        for gidx, vec in enumerate(doc.generators):
            gens.append([parse_series(wr, my, x,
                                      f"subobjects[{k}].gen[{gidx}][{i}]")
                         for i, x in enumerate(vec)])
        out.append(SubobjectSpec(gens))
    return out


def build_lattices(profile, docs):
    wr = profile.w_ring
    my = profile.trunc_y
    out = []
    for k, doc in enumerate(docs):
        basis = [[parse_series(wr, my, x, f"lattices[{k}].basis[{g}][{i}]")
                  for i, x in enumerate(vec)]
                 for g, vec in enumerate(doc.basis)]
        fil1 = [[parse_series(wr, my, x, f"lattices[{k}].fil1[{g}][{i}]")
                 for i, x in enumerate(vec)]
                for g, vec in enumerate(doc.fil1)]
        if doc.point == "closed":
            basis = [[s.eval_zero() for s in vec] for vec in basis]
            fil1 = [[s.eval_zero() for s in vec] for vec in fil1]
        out.append(PointLattice(doc.point, basis, fil1))
    return out


# ----------------------------------------------------------------------
# Breuil module export
# ----------------------------------------------------------------------

def export_s_element(x: SElement) -> dict:
    coeffs = [export_series(f) for f in x.coeffs]
    while len(coeffs) > 1 and coeffs[-1] == {"scale": 0, "coeffs": [0]}:
        coeffs.pop()
    return {"scale": x.scale, "coeffs": coeffs}


def export_breuil(M: BreuilModule, witnesses: dict | None = None) -> dict:
    gen1, gen2 = M.fil1_generator()
    doc = {
        "basis": ["e1", "e2"],
        "frobenius_exponents": list(M.phi_exponents),
        "fil1_generator": {
            "e1": export_s_element(gen1),
            "e2": export_s_element(gen2),
        },
        "connection": [[export_s_element(x) for x in row]
                       for row in M.connection],
        "n_derivation": [[export_s_element(x) for x in row]
                         for row in M.n_derivation],
    }
    if witnesses:
        doc["witnesses"] = {k: export_s_element(v)
                            for k, v in witnesses.items()}
    return doc


def breuil_witnesses(M: BreuilModule) -> dict:
    """The explicit coefficients realizing p e1 and p e2."""
    from .breuil import SElement as _S, phi_S
    prof = M.profile
    E = _S.eisenstein(prof)
    mu = phi_S(E).scale_p(-1)
    mu_inv = mu.inv()
    a1, a2 = M.phi_exponents
    x2 = mu_inv.scale_p(-a2)
    c = _S.one(prof).scale_p(1 - a1)
    d = -(c * phi_S(M.g1_lift) * mu_inv)
    return {"p_e2_coefficient": x2, "p_e1_coefficient_on_generator": c,
            "p_e1_coefficient_on_E_e2": d}
