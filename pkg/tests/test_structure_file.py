import json
from fractions import Fraction

import pytest

from models.dirac import Case1, Case2, Case3, Case41, Case42, DiracStructure
from services.helper import StructureFileError, load_structure_file, parse_structure, serialize_structure

EXACT = [Case1(), Case41(Fraction(1, 3)), Case42(Fraction(-2), Fraction(5, 7)), Case3(-1), Case2(), Case3(1)]
FLOATS = [Case41(0.1), Case42(0.5, -1.25), Case2(), Case41(-2.75), Case42(-3.0, 0.0), Case1()]


@pytest.mark.parametrize("cases", [EXACT, FLOATS], ids=["exact", "float"])
def test_serialized_structures_parse_back(build, conf, cases):
    rs = build("A3")
    structure = DiracStructure.from_cases(rs, cases)
    doc = serialize_structure(structure)
    back = parse_structure(json.loads(json.dumps(doc)), conf.tolerance)
    assert back.rs.spec == rs.spec
    assert list(back.assignment.items()) == list(structure.assignment.items())
    assert serialize_structure(back) == doc


def test_exact_parameters_stay_exact(build, conf):
    doc = serialize_structure(DiracStructure.from_cases(build("A3"), EXACT))
    assert doc["assignment"]["[0,1,0]"] == {"case": "4.1", "a1": "1", "b1": "1/3"}
    assert doc["assignment"]["[0,0,1]"] == {"case": "4.2", "x": "-2", "a": "5/7"}
    back = parse_structure(doc, conf.tolerance)
    assert isinstance(back.case(back.rs.root_by_name("[0,0,1]")).a, Fraction)


def test_unnormalized_pair_is_canonicalized(build, conf):
    doc = {"algebra": {"family": "a", "rank": 1}, "assignment": {"[1]": {"case": "4.1", "a1": "2", "b1": "3"}}}
    back = parse_structure(doc, conf.tolerance)
    assert back.case(back.rs.positive_roots[0]) == Case41(Fraction(3, 2))
    assert serialize_structure(back)["assignment"]["[1]"] == {"case": "4.1", "a1": "1", "b1": "3/2"}


def test_file_round_trip(tmp_path, build, conf):
    structure = DiracStructure.from_cases(build("B2"), EXACT[:4])
    path = tmp_path / "b2.json"
    path.write_text(json.dumps(serialize_structure(structure)))
    back = load_structure_file(str(path), conf.tolerance)
    assert serialize_structure(back) == serialize_structure(structure)


def test_unknown_algebra_is_a_diagnostic(conf):
    with pytest.raises(StructureFileError) as excinfo:
        parse_structure({"algebra": {"family": "Q", "rank": 2}, "assignment": {}}, conf.tolerance)
    assert excinfo.value.diagnostics[0].startswith("algebra:")
