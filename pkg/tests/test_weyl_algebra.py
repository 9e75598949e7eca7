from fractions import Fraction

import pytest

from controllers.WeylAlgebraController import WeylAlgebraController, string_depth
from models.algebra import Root, StructureConstants


@pytest.fixture
def weyl(conf):
    return WeylAlgebraController(conf)


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3", "B3", "C3", "D4"])
def test_structure_identities_hold(build, weyl, name):
    rs = build(name)
    sc = weyl.structure_constants(rs)
    assert weyl.check_structure_identities(sc, rs) == []


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "C3"])
def test_flipped_signs_also_satisfy_identities(build, weyl, name):
    rs = build(name)
    sc = weyl.structure_constants(rs, flip_signs=True)
    assert sc.flipped
    assert weyl.check_structure_identities(sc, rs) == []


@pytest.mark.parametrize("name,largest", [("A3", 1), ("B2", 2), ("C3", 2), ("G2", 3)])
def test_magnitudes(build, weyl, name, largest):
    rs = build(name)
    sc = weyl.structure_constants(rs)
    assert max(abs(v) for v in sc.table.values()) == largest
    for (a, b), value in sc.table.items():
        assert abs(value) == string_depth(rs, a, b) + 1


def test_b2_values(b2, weyl):
    sc = weyl.structure_constants(b2)
    assert abs(sc.m(Root((1, 0)), Root((0, 1)))) == 1
    assert abs(sc.m(Root((0, 1)), Root((1, 1)))) == 2
    assert sc.m(Root((1, 0)), Root((1, 1))) == 0


def test_every_root_pair_with_root_sum_is_tabulated(build, weyl):
    rs = build("B3")
    sc = weyl.structure_constants(rs)
    roots = list(rs.all_roots())
    expected = sum(1 for a in roots for b in roots if rs.sum(a, b) is not None)
    assert len(sc) == expected


def test_injected_antisymmetry_violation_is_reported(a2, weyl):
    sc = weyl.structure_constants(a2)
    alpha, beta = a2.simple_roots
    table = dict(sc.table)
    table[(alpha, beta)] = -table[(alpha, beta)]
    broken = StructureConstants(table=table, flipped=False)
    violations = weyl.check_structure_identities(broken, a2)
    identities = {v["identity"] for v in violations}
    assert "antisymmetry" in identities
    assert any(v["roots"] == [alpha.name, beta.name] for v in violations if v["identity"] == "antisymmetry")


def test_injected_magnitude_violation_is_reported(b2, weyl):
    sc = weyl.structure_constants(b2)
    pair = (Root((0, 1)), Root((1, 1)))
    table = dict(sc.table)
    table[pair] = Fraction(1) if table[pair] > 0 else Fraction(-1)
    violations = weyl.check_structure_identities(StructureConstants(table=table, flipped=False), b2)
    assert any(v["identity"] == "magnitude" and v["roots"] == ["[0,1]", "[1,1]"] for v in violations)


def test_flipping_negates_extraspecial_pairs(a2, weyl):
    alpha, beta = a2.simple_roots
    plain = weyl.structure_constants(a2)
    flipped = weyl.structure_constants(a2, flip_signs=True)
    assert flipped.m(alpha, beta) == -plain.m(alpha, beta)


def test_string_depth(b2):
    short = Root((0, 1))
    assert string_depth(b2, short, Root((1, 2))) == 2
    assert string_depth(b2, Root((1, 0)), short) == 0
