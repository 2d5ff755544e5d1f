import copy
import json
from fractions import Fraction

import pytest

from conftest import fixture_path, fixture_spec

from nonfill_scl.errors import InvalidSpec, ParseError
from nonfill_scl.homology import build_cell_complex, check_null_homologous
from nonfill_scl.model import (format_rational, load_spec, parse_rational, spec_from_dict,
                               spec_to_dict, validate)


def sep2_doc():
    return json.loads(fixture_path("SEP2").read_text())


def codes(report):
    return {f.code for f in report.failures}


def test_sep2_validates_to_genus_two_with_four_turn_arcs():
    rep = validate(fixture_spec("SEP2"))
    assert rep.valid and rep.status == "valid"
    assert rep.derived_genus == 2
    assert len(rep.derived_turn_arcs) == 4


def test_duplicate_long_side():
    doc = sep2_doc()
    doc["disks"][0]["boundary"][5] = dict(doc["disks"][0]["boundary"][1])
    rep = validate(spec_from_dict(doc))
    assert not rep.valid and "DUPLICATE_LONG_SIDE" in codes(rep)


def test_orientation_convention():
    doc = sep2_doc()
    for e in doc["disks"][0]["boundary"]:
        if e.get("handle") == "h1":
            e["reversed"] = False
    rep = validate(spec_from_dict(doc))
    assert "ORIENTATION_CONVENTION" in codes(rep)


def test_status_valid_iff_no_failures():
    doc = sep2_doc()
    doc["chain"][0]["weight"] = "0"
    rep = validate(spec_from_dict(doc))
    assert rep.status == "invalid" and rep.failures
    assert "NONPOSITIVE_WEIGHT" in codes(rep)


def test_unused_and_unknown_strands():
    doc = sep2_doc()
    route = doc["chain"][0]["route"]
    route[0] = {"handle": "h1", "strand": "nope"}
    assert {"UNKNOWN_STRAND", "STRAND_UNUSED"} <= codes(validate(spec_from_dict(doc)))


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("format"),
    lambda d: d.update(format=2),
    lambda d: d.update(extra=1),
    lambda d: d["chain"][0].update(weight="x/y"),
    lambda d: d["chain"][0].update(weight=True),
    lambda d: d.pop("disks"),
])
def test_malformed_documents_raise(mutate):
    doc = sep2_doc()
    mutate(doc)
    with pytest.raises(ParseError) as info:
        spec_from_dict(doc)
    assert info.value.code == "MALFORMED_INPUT"


def test_load_spec_reports_bad_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ParseError):
        load_spec(p)
    with pytest.raises(ParseError):
        load_spec(tmp_path / "missing.json")


def test_rationals():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational(4) == 4
    assert format_rational(0) == "0/1"
    assert format_rational(Fraction(-4, 6)) == "-2/3"
    with pytest.raises(ParseError):
        parse_rational(0.5)


def test_dict_round_trip_and_determinism():
    spec = fixture_spec("SEP2")
    assert spec_from_dict(spec_to_dict(spec)) == spec
    assert validate(spec) == validate(spec_from_dict(copy.deepcopy(spec_to_dict(spec))))


@pytest.mark.parametrize("name", ["SEP2", "ANN", "NONSEP"])
def test_turn_arcs_one_per_strand(name):
    spec = fixture_spec(name)
    rep = validate(spec)
    assert len(rep.derived_turn_arcs) == sum(len(h.strands) for h in spec.handles)


def test_scaled_and_reversed():
    spec = fixture_spec("SEP2")
    assert all(c.weight == 3 for c in spec.scaled(3).chain)
    twice = spec.reversed_chain().reversed_chain()
    assert twice == spec
    assert validate(spec.reversed_chain()).valid


# ---------------------------------------------------------------- homology

@pytest.mark.parametrize("name,expected", [("SEP2", True), ("ANN", True), ("NONSEP", False)])
def test_null_homology(name, expected):
    assert check_null_homologous(fixture_spec(name)) is expected


@pytest.mark.parametrize("name", ["SEP2", "ANN", "NONSEP"])
def test_cell_complex_euler_characteristic(name):
    rep = validate(fixture_spec(name))
    cx = build_cell_complex(rep.layout)
    assert cx.euler_characteristic() == 2 - 2 * rep.derived_genus


def test_null_homology_invariant_under_route_rotation():
    doc = sep2_doc()
    route = doc["chain"][0]["route"]
    doc["chain"][0]["route"] = route[1:] + route[:1]
    assert check_null_homologous(spec_from_dict(doc))


def test_null_homology_needs_a_valid_spec():
    doc = sep2_doc()
    doc["chain"][0]["weight"] = "-1"
    with pytest.raises(InvalidSpec) as info:
        check_null_homologous(spec_from_dict(doc))
    assert info.value.code == "INVALID_SPEC"
