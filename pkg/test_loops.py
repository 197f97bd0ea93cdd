from fractions import Fraction

import pytest

from quasigate.core.errors import GenericityError, InputError, MalformedLoopError, WordError
from quasigate.core.loops import (
    CONSTANT_LOOP,
    Chord,
    ClassTable,
    GenericLoop,
    YPath,
    based_word,
    check_family,
    class_of,
    intersection_number,
    is_contractible,
    loop_from_word,
    mid_word,
    self_intersections,
    subword,
    validate_loop,
)
from quasigate.core.surface import BoundaryPoint
from quasigate.core.words import CyclicWord, Letter, format_word, parse_word

F = Fraction


def _chord(g1, u1, g2, u2):
    return Chord(BoundaryPoint(g1, F(u1)), BoundaryPoint(g2, F(u2)))


def test_cyclic_words_are_canonical():
    w = CyclicWord.parse("y1^-1.g1.g2^-1")
    assert str(w) == "g1.g2^-1.y1^-1"
    assert w == CyclicWord.parse("g2^-1.y1^-1.g1")
    assert CyclicWord.parse("y2.g1.g1^-1.y2^-1").is_trivial
    assert str(CyclicWord.parse("1")) == "1"
    assert str(w.inverse()) == "g1^-1.y1.g2"
    assert len(w.power(3)) == 9
    assert format_word(parse_word("g1^1.y2")) == "g1.y2"
    with pytest.raises(InputError):
        parse_word("g1..g2")


def test_class_and_intersection_numbers(fixture_scenario, w):
    a = fixture_scenario.loop("a")
    assert class_of(a) == w
    assert intersection_number(a, "G1") == 1
    assert intersection_number(a, "G2") == -1
    assert [c.sign for c in a.crossing_list] == [1, -1]


def test_u_turn_is_contractible(fixture_scenario):
    t = fixture_scenario.loop("t")
    assert t.chords[0].is_u_turn
    assert is_contractible(t)
    assert intersection_number(t, "G1") == 0
    assert is_contractible(fixture_scenario.loop("e"))
    assert str(fixture_scenario.class_of("c")) == "y2"


def test_based_and_sub_words(fixture_scenario):
    a = fixture_scenario.loop("a")
    entry, leave = a.crossing_list
    assert format_word(based_word(a, entry)) == "g1.g2^-1.y1^-1"
    assert format_word(based_word(a, leave)) == "y1^-1.g1.g2^-1"
    assert format_word(mid_word(a, 0)) == "g2^-1.y1^-1.g1"
    # p1 = p2 is the whole loop
    assert format_word(subword(a, entry, entry)) == "g1.g2^-1.y1^-1"
    with pytest.raises(InputError):
        subword(a, entry, leave)


def test_subwords_of_a_double_loop(w2_scenario, w):
    loop = w2_scenario.loop("w2")
    p0, p2 = loop.on_gate("G1")
    assert (p0.position, p2.position) == (0, 2)
    assert CyclicWord(subword(loop, p0, p2)) == w
    assert CyclicWord(subword(loop, p2, p0)) == w
    assert class_of(loop) == w.power(2)


def test_self_intersection_splits_into_halves(w2_scenario, w):
    (crossing,) = self_intersections(w2_scenario.loop("w2"))
    assert (crossing.first, crossing.second) == (0, 1)
    assert crossing.halves == (w, w)


def test_forced_crossing_loop(forced_scenario):
    x = forced_scenario.loop("x")
    assert str(class_of(x)) == "g1.g3^-1.g2.g4^-1"
    assert len(self_intersections(x)) == 1


def test_loop_from_word_gives_the_class(surface, allocator, w):
    for text in ("g1.g2^-1.y1^-1", "g1.g2^-1.y1^-1.g1.g2^-1.y1^-1", "g1.g1^-1.y2", "y2", "g2.g2^-1"):
        word = CyclicWord.parse(text)
        loop = validate_loop(loop_from_word(word, allocator), surface)
        assert class_of(loop) == word
    assert loop_from_word(CyclicWord(), allocator) is CONSTANT_LOOP
    pure = loop_from_word(CyclicWord.parse("y2"), allocator)
    assert pure.chords == () and pure.paths[0].letters == (Letter("y2", 1),)


def test_loop_from_word_rejects_open_paths(allocator):
    with pytest.raises(WordError):
        loop_from_word(CyclicWord.parse("g1.g2"), allocator)
    with pytest.raises(WordError):
        loop_from_word(CyclicWord.parse("y1"), allocator)
    with pytest.raises(WordError):
        loop_from_word(CyclicWord.parse("z9.y2"), allocator)


def test_allocator_never_repeats(allocator):
    gate = allocator.surface.gate("G1")
    seen = {allocator.allocate("G1") for _ in range(50)}
    assert len(seen) == 50
    assert all(gate.lo < u < gate.hi for u in seen)
    assert all(allocator.is_used(u) for u in seen)
    inner = allocator.allocate_between("G1", F(3, 25), F(13, 100))
    assert F(3, 25) < inner < F(13, 100)
    with pytest.raises(GenericityError):
        allocator.allocate_between("G1", F(1, 2), F(3, 5))


def test_reserved_coordinates_are_skipped(fixture_scenario, allocator):
    allocator.reserve(fixture_scenario.loops.values())
    assert allocator.is_used(F(3, 25))
    assert not allocator.is_used(F(1, 7))


def test_class_table_is_append_only(surface, w):
    table = ClassTable(surface, seed=3)
    first = table.representative(w)
    assert table.representative(w) is first
    assert w in table and len(table) == 1
    family = table.fresh_family([w, w, w])
    check_family(family)
    assert all(class_of(loop) == w for loop in family)


def test_register_keeps_existing_representative(fixture_scenario, w):
    table = ClassTable(fixture_scenario.surface, seed=3)
    assert table.register(fixture_scenario.loop("a")) == w
    table.register(fixture_scenario.loop("a2"))
    assert table.representative(w) is fixture_scenario.loop("a")


def test_malformed_loops_are_rejected(surface):
    # 1. path does not lead back to the next chord
    broken = GenericLoop((_chord("G1", "0.12", "G2", "0.45"),), (YPath(),))
    with pytest.raises(MalformedLoopError):
        validate_loop(broken, surface)

    # 2. point outside its gate arc
    outside = GenericLoop((_chord("G1", "0.3", "G2", "0.45"),), (YPath((Letter("y1", -1),)),))
    with pytest.raises(MalformedLoopError):
        validate_loop(outside, surface)

    # 3. star letter inside a Y path
    starred = GenericLoop((_chord("G1", "0.12", "G1", "0.19"),), (YPath((Letter("g1", 1), Letter("g1", -1))),))
    with pytest.raises(MalformedLoopError):
        validate_loop(starred, surface)

    # 4. letter that is not an edge of the surface
    unknown = GenericLoop((_chord("G1", "0.12", "G2", "0.45"),), (YPath((Letter("z9", 1),)),))
    with pytest.raises(MalformedLoopError, match="z9"):
        validate_loop(unknown, surface)

    # 4. repeated coordinate
    repeated = GenericLoop(
        (_chord("G1", "0.12", "G1", "0.15"), _chord("G1", "0.12", "G1", "0.17")),
        (YPath(), YPath()),
    )
    with pytest.raises(GenericityError):
        validate_loop(repeated, surface)


def test_family_must_not_share_coordinates(fixture_scenario):
    a = fixture_scenario.loop("a")
    with pytest.raises(GenericityError):
        check_family([a, a])
