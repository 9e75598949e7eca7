import pytest

from controllers.RootSystemController import RootSystemController, _build, cartan_matrix
from models.algebra import CartanSpec, Root

POSITIVE_ROOT_COUNTS = {
    "A1": 1, "A2": 3, "A3": 6, "A4": 10,
    "B2": 4, "B3": 9, "B4": 16,
    "C3": 9, "C4": 16,
    "D4": 12, "D5": 20,
    "E6": 36, "E7": 63, "E8": 120,
    "F4": 24, "G2": 6,
}


@pytest.mark.parametrize("name,count", sorted(POSITIVE_ROOT_COUNTS.items()))
def test_positive_root_counts(build, name, count):
    rs = build(name)
    assert rs.l == count
    assert len(set(rs.positive_roots)) == count
    assert all(r.is_positive for r in rs.positive_roots)


@pytest.mark.parametrize("name", ["A2", "B3", "G2", "F4"])
def test_simple_roots_come_first(build, name):
    rs = build(name)
    rank = rs.spec.rank
    assert rs.simple_roots == rs.positive_roots[:rank]
    assert [r.coeffs for r in rs.simple_roots] == [
        tuple(1 if i == j else 0 for i in range(rank)) for j in range(rank)
    ]


def test_a2_roots_and_single_triple(a2, root_systems):
    assert [r.name for r in a2.positive_roots] == ["[1,0]", "[0,1]", "[1,1]"]
    triples = root_systems.sum_triples(a2)
    assert [(a.name, b.name, c.name) for a, b, c in triples] == [("[1,0]", "[0,1]", "[1,1]")]


def test_a1_has_no_triples(build, root_systems):
    rs = build("A1")
    assert rs.l == 1
    assert root_systems.sum_triples(rs) == []


def test_a3_height_histogram(build):
    assert build("A3").height_histogram() == {1: 3, 2: 2, 3: 1}


@pytest.mark.parametrize("name,triples", [("A3", 4), ("A4", 10), ("B2", 2), ("G2", 5)])
def test_triple_counts(build, root_systems, name, triples):
    assert len(root_systems.sum_triples(build(name))) == triples


def test_b2_triples(b2, root_systems):
    names = [(a.name, b.name, c.name) for a, b, c in root_systems.sum_triples(b2)]
    assert names == [("[1,0]", "[0,1]", "[1,1]"), ("[0,1]", "[1,1]", "[1,2]")]


def test_b2_lengths(b2):
    long_root, short_root = b2.simple_roots
    assert b2.length(long_root) == 2 * b2.length(short_root)
    assert b2.length(Root((1, 2))) == b2.length(long_root)


def test_triples_are_canonical(build, root_systems):
    rs = build("D4")
    for alpha, beta, total in root_systems.sum_triples(rs):
        assert rs.index(alpha) < rs.index(beta)
        assert alpha + beta == total
        assert rs.heights[total] == rs.heights[alpha] + rs.heights[beta]


@pytest.mark.parametrize("name", ["A3", "B3", "C4", "D5", "E6", "F4", "G2"])
def test_construction_is_deterministic(name):
    spec = CartanSpec.parse(name)
    first = _build.__wrapped__(spec)
    second = _build.__wrapped__(CartanSpec.parse(name.lower()))
    assert first is not second
    assert first.positive_roots == second.positive_roots
    assert first.sum_table == second.sum_table
    assert RootSystemController().build_root_system(spec).positive_roots == first.positive_roots


def test_heights_are_sorted(build):
    rs = build("F4")
    heights = [rs.heights[r] for r in rs.positive_roots]
    assert heights == sorted(heights)
    assert max(heights) == 11


def test_height_of_unknown_root(a2, root_systems):
    assert root_systems.height(a2, Root((1, 1))) == 2
    with pytest.raises(ValueError, match="not a positive root"):
        root_systems.height(a2, Root((2, 1)))


@pytest.mark.parametrize("text", ["A0", "B1", "C1", "D2", "E5", "E9", "F3", "G3", "H2", "A", "2A"])
def test_invalid_cartan_types(text):
    with pytest.raises(ValueError):
        CartanSpec.parse(text)


def test_cartan_matrices():
    assert cartan_matrix(CartanSpec("A", 2)) == ((2, -1), (-1, 2))
    assert cartan_matrix(CartanSpec("B", 2)) == ((2, -1), (-2, 2))
    assert cartan_matrix(CartanSpec("C", 2)) == ((2, -2), (-1, 2))
    assert cartan_matrix(CartanSpec("G", 2)) == ((2, -3), (-1, 2))


def test_root_by_name(a2):
    assert a2.root_by_name(" [1,1] ") == Root((1, 1))
    for bad in ["1,1", "[1,a]", "[1,1,0]", "[2,0]"]:
        with pytest.raises(ValueError):
            a2.root_by_name(bad)


def test_mixed_sign_coefficients_rejected():
    with pytest.raises(ValueError):
        Root((1, -1))
