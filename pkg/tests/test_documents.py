"""Document parsing, export round-trips, and schema strictness."""

import json
import pathlib

import pytest
from pydantic import ValidationError

from padicmf.documents import (
    JobDocument,
    build_lattices,
    build_module,
    build_profile,
    build_subobjects,
    export_module,
    export_series,
    parse_series,
)
from padicmf.errors import InvalidInput

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def load_fixture(name):
    with open(FIXTURES / name, "r", encoding="utf-8") as fh:
        return JobDocument.model_validate(json.load(fh))


def test_all_fixtures_parse():
    for path in sorted(FIXTURES.glob("*.json")):
        job = load_fixture(path.name)
        profile = build_profile(job.profile)
        module = build_module(profile, job.module)
        assert module.rank == job.module.rank
        build_subobjects(profile, job.subobjects)
        build_lattices(profile, job.lattices)


def test_unknown_fields_rejected():
    doc = {"profile": {"p": 3, "bogus": 1},
           "module": {"rank": 1, "frobenius": [[1]], "connection": [[0]],
                      "filtration": []}}
    with pytest.raises(ValidationError):
        JobDocument.model_validate(doc)


def test_unknown_series_fields_rejected(prof3):
    with pytest.raises(InvalidInput):
        parse_series(prof3.w_ring, prof3.trunc_y, {"coeffs": [1], "x": 2})
    with pytest.raises(InvalidInput):
        parse_series(prof3.w_ring, prof3.trunc_y,
                     {"coeffs": [{"coeffs": [1], "weird": 0}]})


def test_series_literal_forms(prof3):
    w = prof3.w_ring
    my = prof3.trunc_y
    a = parse_series(w, my, 5)
    b = parse_series(w, my, [5])
    c = parse_series(w, my, {"scale": 0, "coeffs": [5]})
    assert (a - b).is_zero() and (b - c).is_zero()
    scaled = parse_series(w, my, {"scale": -1, "coeffs": [3]})
    assert (scaled - parse_series(w, my, 1)).is_zero()
    neg = parse_series(w, my, {"coeffs": [{"coeffs": [1], "pscale": -1},
                                          0, 1]})
    assert neg.coefficient(0).val_p() == -1


def test_too_many_coefficients(prof3):
    with pytest.raises(InvalidInput):
        parse_series(prof3.w_ring, 4, [1, 2, 3, 4, 5])


def test_round_trip_module():
    job = load_fixture("counterexample.json")
    profile = build_profile(job.profile)
    module = build_module(profile, job.module)
    doc = export_module(module)
    from padicmf.documents import ModuleDoc
    module2 = build_module(profile, ModuleDoc.model_validate(doc))
    assert export_module(module2) == doc
    # semantic equality of every entry
    for r1, r2 in zip(module.frobenius, module2.frobenius):
        for s1, s2 in zip(r1, r2):
            assert (s1 - s2).is_zero()


def test_series_export_round_trip(prof3, rng):
    from conftest import random_series
    w = prof3.w_ring
    for _ in range(20):
        f = random_series(prof3, rng, val_floor=rng.randint(-2, 1))
        doc = export_series(f)
        g = parse_series(w, prof3.trunc_y, doc)
        assert (f - g).is_zero()
        assert export_series(g) == doc


def test_profile_overrides():
    job = load_fixture("counterexample.json")
    prof = build_profile(job.profile, {"prec_p": 18, "trunc_y": 24})
    assert prof.prec_p == 18 and prof.trunc_y == 24
    assert prof.trunc_u == job.profile.M_u
