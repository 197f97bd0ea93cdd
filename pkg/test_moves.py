from fractions import Fraction

import numpy as np
import pytest

from quasigate.core.errors import MoveError
from quasigate.core.loops import (
    Chord,
    CoordinateAllocator,
    GenericLoop,
    YPath,
    class_of,
    self_intersections,
    validate_loop,
)
from quasigate.core.moves import (
    excursion_insert,
    excursion_remove,
    finger_insert,
    finger_remove,
    make_simple,
    random_moves,
    rotate_strands,
    slide,
    y_insert_cancel_pair,
)
from quasigate.core.surface import BoundaryPoint
from quasigate.core.verifier import verify

F = Fraction


def test_slide_keeps_class(fixture_scenario, w):
    a = fixture_scenario.loop("a")
    entry = a.find_crossing(0, entry=True)
    moved = slide(a, entry, F(7, 50), fixture_scenario.surface)
    assert moved.chords[0].enter.u == F(7, 50)
    assert class_of(moved) == w


def test_finger_insert_and_remove_are_inverse(forced_scenario):
    qs = forced_scenario.surface
    loop = GenericLoop((Chord(BoundaryPoint("G1", F(1, 8)), BoundaryPoint("G2", F(3, 8))),), (YPath(),))
    validate_loop(loop, qs)
    fingered = finger_insert(loop, 0, "G3", F(5, 8), F(21, 32), qs)
    assert [c.exit.gate for c in fingered.chords] == ["G3", "G2"]
    assert class_of(fingered) == class_of(loop)
    assert finger_remove(fingered, 0, qs) == loop


def test_finger_remove_needs_a_finger(fixture_scenario):
    with pytest.raises(MoveError):
        finger_remove(fixture_scenario.loop("a"), 0, fixture_scenario.surface)


def test_excursions(fixture_scenario, w):
    qs = fixture_scenario.surface
    a = fixture_scenario.loop("a")
    # 1. a u-turn through G2 right after the chord exits at v2
    bumped = excursion_insert(a, 0, 0, "G2", F(41, 100), F(21, 50), qs)
    assert len(bumped.chords) == 2 and bumped.chords[1].is_u_turn
    assert class_of(bumped) == w

    # 2. removing it gives the loop back
    assert excursion_remove(bumped, 1, qs) == a

    # 3. G1 is not attached at v2
    with pytest.raises(MoveError):
        excursion_insert(a, 0, 0, "G1", F(11, 100), F(3, 20), qs)


def test_excursion_on_a_pure_y_loop(fixture_scenario):
    qs = fixture_scenario.surface
    c = fixture_scenario.loop("c")
    bumped = excursion_insert(c, 0, 0, "G2", F(41, 100), F(21, 50), qs)
    assert str(class_of(bumped)) == "y2"
    assert excursion_remove(bumped, 0, qs) == c
    with pytest.raises(MoveError):
        excursion_insert(fixture_scenario.loop("e"), 0, 0, "G2", F(41, 100), F(21, 50), qs)


def test_cancelling_pair_in_a_y_path(fixture_scenario, w):
    qs = fixture_scenario.surface
    a = fixture_scenario.loop("a")
    padded = y_insert_cancel_pair(a, 0, 1, "y1", 1, qs)
    assert [str(l) for l in padded.paths[0].letters] == ["y1^-1", "y1", "y1^-1"]
    assert class_of(padded) == w
    with pytest.raises(MoveError):
        y_insert_cancel_pair(a, 0, 1, "y2", 1, qs)


def test_rotate_strands_is_the_same_loop(w2_scenario):
    loop = w2_scenario.loop("w2")
    turned = rotate_strands(loop, 1)
    assert turned.chords[0] == loop.chords[1]
    assert class_of(turned) == class_of(loop)


def test_random_moves_keep_class_and_genericity(fixture_scenario, w):
    qs = fixture_scenario.surface
    a = fixture_scenario.loop("a")
    others = [fixture_scenario.loop(name) for name in ("a2", "t")]
    alloc = CoordinateAllocator(qs, seed=9)
    moved, names = random_moves(a, np.random.default_rng(4), alloc, 30, others=others)
    assert len(names) == 30
    validate_loop(moved, qs)
    assert class_of(moved) == w


def test_make_simple_removes_forced_crossing(forced_scenario):
    x = forced_scenario.loop("x")
    alloc = CoordinateAllocator(forced_scenario.surface, seed=2)
    result = make_simple(x, alloc)
    assert self_intersections(result.loop) == []
    assert class_of(result.loop) == class_of(x)
    assert result.moves > 0


def test_make_simple_on_a_proper_power(w2_scenario, w):
    result = w2_scenario.simplify("w2")
    assert self_intersections(result.loop) == []
    assert class_of(result.loop) == w.power(2)


def test_simple_loop_is_returned_unchanged(fixture_scenario):
    result = fixture_scenario.simplify("a")
    assert result.loop == fixture_scenario.loop("a")
    assert (result.moves, result.rounds) == (0, 0)


def test_random_loops_simplify():
    report = verify("simple", seed=3, trials=12)
    assert report.passed, report.to_json()["first_witness"]
