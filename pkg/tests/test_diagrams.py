import random

import pytest

from diaghom.diagrams import (
    Diagram,
    DiagramError,
    DiagramParseError,
    Family,
    ResourceGuardError,
    all_diagrams,
    as_permutation,
    bell_number,
    component_stats,
    compose,
    is_permutation,
    parse_diagram,
    parse_family,
    permutation_diagram,
    propagating_count,
)


def bell_triangle(k):
    # Peirce triangle, independent of the library's helper
    rows = [[1]]
    for _ in range(k):
        prev = rows[-1]
        new = [prev[-1]]
        for v in prev:
            new.append(new[-1] + v)
        rows.append(new)
    return rows[k][0]


def test_canonical_form_is_idempotent():
    d = Diagram(3, [[-3, 3], [2, 1, -2], [-1]])
    again = Diagram(3, d.blocks)
    assert d == again
    assert d.blocks == ((1, 2, -2), (3, -3), (-1,))


def test_equivalent_inputs_give_equal_values():
    a = Diagram(2, [[1, -1], [2, -2]])
    b = Diagram(2, [[-2, 2], [-1, 1]])
    assert a == b
    assert hash(a) == hash(b)
    assert a == Diagram.identity(2)


def test_structural_validation():
    with pytest.raises(DiagramError):
        Diagram(2, [[1, 2], [-1]])  # -2 missing
    with pytest.raises(DiagramError):
        Diagram(2, [[1, 2, -1, -2], [1]])  # duplicate
    with pytest.raises(DiagramError):
        Diagram(2, [[1, 2, 3, -1, -2]])  # out of range


def test_text_round_trip():
    s = "4:{1 3 -3}|{2}|{4}|{-1 -2}|{-4}"
    assert str(parse_diagram(s)) == s
    assert str(parse_diagram("2:{-2 2}|{-1 1}")) == "2:{1 -1}|{2 -2}"


def test_parse_errors_carry_position():
    for bad in ["{1}", "x:{1}|{-1}", "1:{1}{-1}", "1:{1} {-1}", "2:{1 -1}|{2 -3}",
                "1:{1 y}|{-1}", "1:", "1:{}|{1 -1}"]:
        with pytest.raises(DiagramParseError) as err:
            parse_diagram(bad)
        assert err.value.position >= 0


def test_worked_composition_example():
    d1 = parse_diagram("4:{1 3 -2}|{2}|{4}|{-1}|{-3 -4}")
    d2 = parse_diagram("4:{1}|{2 -3}|{3 4}|{-1 -2}|{-4}")
    alpha, d3 = compose(d1, d2)
    assert alpha == 2
    assert str(d3) == "4:{1 3 -3}|{2}|{4}|{-1 -2}|{-4}"


def test_identity_is_neutral_for_composition():
    ident = Diagram.identity(3)
    for d in all_diagrams(3)[:40]:
        assert compose(ident, d) == (0, d)
        assert compose(d, ident) == (0, d)


def test_lone_strand_self_composition_closes_middle():
    d = parse_diagram("1:{1}|{-1}")
    alpha, d3 = compose(d, d)
    assert alpha == 1
    assert d3 == d


def test_mismatched_sizes_rejected():
    with pytest.raises(DiagramError):
        compose(Diagram.identity(2), Diagram.identity(3))


def test_component_stats():
    d = parse_diagram("4:{1 3 -2}|{2}|{4}|{-1}|{-3 -4}")
    stats = {block: s for block, s in zip(d.blocks, component_stats(d))}
    assert stats[(1, 3, -2)] == (2, 1, 1)
    assert stats[(-3, -4)] == (0, 2, 2)
    ident = Diagram.identity(2)
    assert component_stats(ident) == [(1, 1, 0), (1, 1, 0)]


def test_propagating_count():
    assert propagating_count(Diagram.identity(2)) == 2
    assert propagating_count(parse_diagram("2:{1 2 -1 -2}")) == 1
    assert propagating_count(parse_diagram("2:{1 2}|{-1 -2}")) == 0


def test_permutation_predicates():
    assert is_permutation(Diagram.identity(3))
    assert as_permutation(Diagram.identity(3)) == (1, 2, 3)
    swap = parse_diagram("2:{1 -2}|{2 -1}")
    assert is_permutation(swap)
    assert as_permutation(swap) == (2, 1)
    merge = parse_diagram("2:{1 2 -1 -2}")
    assert not is_permutation(merge)
    with pytest.raises(DiagramError):
        as_permutation(merge)
    assert permutation_diagram(2, (2, 1)) == swap


def test_family_examples():
    t2 = Family("T", 2)
    assert t2.admits(parse_diagram("2:{1 2}|{-1 -2}"))
    singles = Diagram(2, [[1], [2], [-1], [-2]])
    assert not t2.admits(singles)
    t1 = Family("T", 1)
    for d in all_diagrams(2):
        assert t1.admits(d)
    u = Family("U")
    tpp = Family("TPP")
    assert u.admits(Diagram.identity(2))
    assert not u.admits(parse_diagram("2:{1 2}|{-1 -2}"))
    assert not tpp.admits(parse_diagram("2:{1 2}|{-1 -2}"))


def test_family_validation():
    with pytest.raises(ValueError):
        Family("T", 0)
    with pytest.raises(ValueError):
        Family("X")
    with pytest.raises(ValueError):
        parse_family("T:frog")
    assert parse_family("T:2") == Family("T", 2)
    assert str(parse_family("T:2")) == "T:2"


def test_uniform_implies_tanabe_and_propagating():
    u = Family("U")
    tpp = Family("TPP")
    for d in all_diagrams(3):
        if u.admits(d):
            assert tpp.admits(d)
            for r in (2, 3, 4, 5):
                assert Family("T", r).admits(d)
        if Family("T", 2).admits(d):
            assert all(len(b) >= 2 for b in d.blocks)


def test_composition_associative_exhaustive_n2():
    basis = all_diagrams(2)
    assert len(basis) == 15
    for d1 in basis:
        for d2 in basis:
            a12, e12 = compose(d1, d2)
            for d3 in basis:
                a23, e23 = compose(d2, d3)
                left = compose(e12, d3)
                right = compose(d1, e23)
                assert left.diagram == right.diagram
                assert a12 + left.alpha == a23 + right.alpha


def test_composition_associative_random_n3():
    basis = all_diagrams(3)
    rng = random.Random(11)
    for _ in range(1000):
        d1, d2, d3 = (basis[rng.randrange(len(basis))] for _ in range(3))
        a12, e12 = compose(d1, d2)
        a23, e23 = compose(d2, d3)
        left = compose(e12, d3)
        right = compose(d1, e23)
        assert left.diagram == right.diagram
        assert a12 + left.alpha == a23 + right.alpha


def test_families_closed_under_composition():
    for n in (2, 3):
        basis = all_diagrams(n)
        for family in (Family("T", 2), Family("T", 3), Family("TPP"), Family("U")):
            members = [d for d in basis if family.admits(d)]
            for d1 in members:
                for d2 in members:
                    alpha, d3 = compose(d1, d2)
                    assert family.admits(d3)
                    if family.kind in ("TPP", "U"):
                        assert alpha == 0


def test_enumeration_counts_match_bell_oracle():
    for n in (1, 2, 3):
        diagrams = all_diagrams(n)
        assert len(diagrams) == bell_triangle(2 * n)
        assert len(set(diagrams)) == len(diagrams)
        assert diagrams == sorted(diagrams, key=Diagram.sort_key)


def test_enumeration_guard():
    with pytest.raises(ResourceGuardError) as err:
        all_diagrams(6)
    assert str(bell_triangle(12)) in str(err.value)


def test_bell_number_helper_agrees():
    for k in range(9):
        assert bell_number(k) == bell_triangle(k)
