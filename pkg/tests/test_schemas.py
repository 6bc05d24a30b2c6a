import json

import jsonschema
import pytest

from strengthlab import expsum, family, rank, schema, suites, variety
from strengthlab.gf import field_create
from strengthlab.poly import multilinearize, parse


@pytest.mark.parametrize("name", schema.NAMES)
def test_schemas_are_valid(name):
    jsonschema.Draft202012Validator.check_schema(schema.load(name))


def test_library_reports_validate():
    F3 = field_create(3, 2)
    P = parse("x1*x2 + t*x2^2", F3)
    v = lambda name, obj: jsonschema.validate(json.loads(json.dumps(obj)), schema.load(name))
    v("bias_report", expsum.bias(P).to_json(expsum.analytic_rank(P)))
    v("bias_report", expsum.bias(P, "mc", samples=100).to_json(expsum.analytic_rank(P, "mc", samples=100)))
    cert = rank.prank_upper_search(multilinearize(parse("x1*x2*x3", field_create(2))))
    v("certificate", cert.to_json())
    fam = family.PolyFamily([parse("x1*x2", F3), parse("x1", F3, 2)])
    v("span_rank", family.family_min_arank(fam).to_json())
    v("fibers", expsum.joint_distribution(fam).to_json())
    v("search_report", family.search_shifts(P, 1, 3, 0).to_json())
    F2 = field_create(2)
    v("variety_report", variety.codim_singular([parse("x1*x2", F2)], 2).to_json())
    v("variety_report", variety.codim_singular([parse("x1", F2, 2), parse("x1 + 1", F2, 2)], 1).to_json(False))


def test_unknown_schema():
    with pytest.raises(KeyError):
        schema.load("nope")


def test_suite_reports_are_deterministic_json():
    r = suites.run("equidistribution")
    assert json.loads(r.dumps()) == r.to_json()
