"""
Homotopy moves on generic loops and the simplification procedure.

Every move changes coordinates or inserts/removes a cancelling pair of
letters, so the free homotopy class is preserved by construction. Moves
check that the result is still a valid loop and, when other loops of a
family are given, that the family stays generic.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .. import config
from .errors import GenericityError, MoveError, SimplificationError
from .loops import (
    CONSTANT_LOOP,
    Chord,
    CoordinateAllocator,
    Crossing,
    GenericLoop,
    YPath,
    check_family,
    self_intersections,
    validate_loop,
)
from .surface import BoundaryPoint, QuasiSurface
from .words import Letter

logger = logging.getLogger(__name__)


def _finish(loop: GenericLoop, qs: QuasiSurface, others: Sequence[GenericLoop]) -> GenericLoop:
    validate_loop(loop, qs)
    if others:
        check_family([loop, *others])
    return loop


def rotate_strands(loop: GenericLoop, k: int) -> GenericLoop:
    """Start the loop at chord k; the loop itself is unchanged."""
    if not loop.chords:
        return loop
    k %= len(loop.chords)
    return GenericLoop(loop.chords[k:] + loop.chords[:k], loop.paths[k:] + loop.paths[:k])


def slide(loop: GenericLoop, crossing: Crossing, new_u: Fraction, qs: QuasiSurface,
          others: Sequence[GenericLoop] = ()) -> GenericLoop:
    """Move one gate point inside its gate."""
    chord = loop.chords[crossing.chord]
    point = BoundaryPoint(crossing.gate, Fraction(new_u))
    moved = Chord(point, chord.exit) if crossing.is_entry else Chord(chord.enter, point)
    chords = loop.chords[:crossing.chord] + (moved,) + loop.chords[crossing.chord + 1:]
    return _finish(GenericLoop(chords, loop.paths), qs, others)


def finger_insert(loop: GenericLoop, chord_index: int, gate_id: str, exit_u: Fraction, entry_u: Fraction,
                  qs: QuasiSurface, others: Sequence[GenericLoop] = ()) -> GenericLoop:
    """
    Push chord `chord_index` out through gate k and back in: (k1 -> k2)
    becomes (k1 -> k) + empty path + (k -> k2). The order of exit_u and
    entry_u along the gate fixes the side of the finger.
    """
    if not 0 <= chord_index < len(loop.chords):
        raise MoveError(f"no chord {chord_index}")
    chord = loop.chords[chord_index]
    outward = Chord(chord.enter, BoundaryPoint(gate_id, Fraction(exit_u)))
    inward = Chord(BoundaryPoint(gate_id, Fraction(entry_u)), chord.exit)
    chords = loop.chords[:chord_index] + (outward, inward) + loop.chords[chord_index + 1:]
    paths = loop.paths[:chord_index] + (YPath(),) + loop.paths[chord_index:]
    return _finish(GenericLoop(chords, paths), qs, others)


def finger_remove(loop: GenericLoop, chord_index: int, qs: QuasiSurface) -> GenericLoop:
    """Inverse of finger_insert: merge chord i and i+1 across an empty path."""
    n = len(loop.chords)
    if n < 2 or not 0 <= chord_index < n:
        raise MoveError("finger_remove needs two consecutive chords")
    rotated = rotate_strands(loop, chord_index)
    first, second = rotated.chords[0], rotated.chords[1]
    if rotated.paths[0].letters or first.exit.gate != second.enter.gate:
        raise MoveError(f"chord {chord_index} is not followed by a finger through one gate")
    merged = Chord(first.enter, second.exit)
    return validate_loop(GenericLoop((merged,) + rotated.chords[2:], rotated.paths[1:]), qs)


def _vertex_at(loop: GenericLoop, path_index: int, position: int, qs: QuasiSurface) -> str:
    if loop.chords:
        here = qs.vertex_of(loop.chords[path_index].exit.gate)
    else:
        here = qs.letter_endpoints(loop.paths[0].letters[0])[0]
    for letter in loop.paths[path_index].letters[:position]:
        here = qs.letter_endpoints(letter)[1]
    return here


def excursion_insert(loop: GenericLoop, path_index: int, position: int, gate_id: str,
                     enter_u: Fraction, exit_u: Fraction, qs: QuasiSurface,
                     others: Sequence[GenericLoop] = ()) -> GenericLoop:
    """Insert a u-turn chord (k -> k) into a Y path at a vertex carrying gate k."""
    if loop.is_constant:
        raise MoveError("the constant loop has no basepoint for an excursion")
    if not 0 <= path_index < len(loop.paths):
        raise MoveError(f"no Y path {path_index}")
    letters = loop.paths[path_index].letters
    if not 0 <= position <= len(letters):
        raise MoveError(f"position {position} outside Y path {path_index}")
    if _vertex_at(loop, path_index, position, qs) != qs.vertex_of(gate_id):
        raise MoveError(f"gate {gate_id} is not attached at that point of the path")
    excursion = Chord(BoundaryPoint(gate_id, Fraction(enter_u)), BoundaryPoint(gate_id, Fraction(exit_u)))
    if not loop.chords:
        result = GenericLoop((excursion,), (YPath(letters[position:] + letters[:position]),))
    else:
        chords = loop.chords[:path_index + 1] + (excursion,) + loop.chords[path_index + 1:]
        paths = (loop.paths[:path_index] + (YPath(letters[:position]), YPath(letters[position:]))
                 + loop.paths[path_index + 1:])
        result = GenericLoop(chords, paths)
    return _finish(result, qs, others)


def excursion_remove(loop: GenericLoop, chord_index: int, qs: QuasiSurface) -> GenericLoop:
    """Drop a u-turn chord and join the Y paths around it."""
    if not 0 <= chord_index < len(loop.chords) or not loop.chords[chord_index].is_u_turn:
        raise MoveError(f"chord {chord_index} is not a u-turn")
    rotated = rotate_strands(loop, chord_index)
    if len(rotated.chords) == 1:
        letters = rotated.paths[0].letters
        return validate_loop(GenericLoop((), (YPath(letters),)) if letters else CONSTANT_LOOP, qs)
    joined = YPath(rotated.paths[-1].letters + rotated.paths[0].letters)
    return validate_loop(GenericLoop(rotated.chords[1:], rotated.paths[1:-1] + (joined,)), qs)


def y_insert_cancel_pair(loop: GenericLoop, path_index: int, position: int, edge_id: str, power: int,
                         qs: QuasiSurface) -> GenericLoop:
    """Insert y^p . y^-p into a Y path where y^p starts."""
    if loop.is_constant:
        raise MoveError("the constant loop has no Y path")
    letters = loop.paths[path_index].letters
    if not 0 <= position <= len(letters):
        raise MoveError(f"position {position} outside Y path {path_index}")
    letter = Letter(qs.edge(edge_id).id, 1 if power > 0 else -1)
    if qs.letter_endpoints(letter)[0] != _vertex_at(loop, path_index, position, qs):
        raise MoveError(f"{letter} does not start at that point of the path")
    spliced = YPath(letters[:position] + (letter, letter.inverse()) + letters[position:])
    paths = loop.paths[:path_index] + (spliced,) + loop.paths[path_index + 1:]
    return validate_loop(GenericLoop(loop.chords, paths), qs)


# --- random moves ----------------------------------------------------------

MOVE_NAMES = ("slide", "finger_insert", "finger_remove", "excursion_insert",
              "excursion_remove", "y_insert", "rotate")


def random_move(loop: GenericLoop, rng: np.random.Generator, alloc: CoordinateAllocator,
                others: Sequence[GenericLoop] = (), attempts: int = 12) -> Tuple[str, GenericLoop]:
    """One applicable move chosen at random; ("none", loop) if nothing applies."""
    qs = alloc.surface
    alloc.reserve([loop, *others])
    for _ in range(attempts):
        name = MOVE_NAMES[int(rng.integers(len(MOVE_NAMES)))]
        try:
            moved = _try_move(name, loop, rng, alloc, others)
        except (MoveError, GenericityError):
            continue
        if moved is not None:
            return name, moved
    return "none", loop


def _try_move(name, loop, rng, alloc, others) -> Optional[GenericLoop]:
    qs = alloc.surface
    n = len(loop.chords)
    pick = lambda size: int(rng.integers(size))  # noqa: E731
    if name == "slide" and n:
        crossing = loop.crossing_list[pick(2 * n)]
        return slide(loop, crossing, alloc.allocate(crossing.gate), qs, others)
    if name == "finger_insert" and n:
        gate = qs.gates[pick(len(qs.gates))].id
        return finger_insert(loop, pick(n), gate, alloc.allocate(gate), alloc.allocate(gate), qs, others)
    if name == "finger_remove" and n >= 2:
        return finger_remove(loop, pick(n), qs)
    if name == "excursion_insert" and not loop.is_constant:
        index = pick(len(loop.paths))
        position = pick(len(loop.paths[index].letters) + 1)
        vertex = _vertex_at(loop, index, position, qs)
        gates = [g.id for g in qs.gates if g.vertex == vertex]
        if not gates:
            return None
        gate = gates[pick(len(gates))]
        return excursion_insert(loop, index, position, gate, alloc.allocate(gate), alloc.allocate(gate), qs, others)
    if name == "excursion_remove":
        turns = [i for i, c in enumerate(loop.chords) if c.is_u_turn]
        return excursion_remove(loop, turns[pick(len(turns))], qs) if turns else None
    if name == "y_insert" and not loop.is_constant and qs.edges:
        index = pick(len(loop.paths))
        position = pick(len(loop.paths[index].letters) + 1)
        vertex = _vertex_at(loop, index, position, qs)
        choices = [(e.id, 1) for e in qs.edges if e.source == vertex]
        choices += [(e.id, -1) for e in qs.edges if e.target == vertex]
        if not choices:
            return None
        edge_id, power = choices[pick(len(choices))]
        return y_insert_cancel_pair(loop, index, position, edge_id, power, qs)
    if name == "rotate" and n:
        return rotate_strands(loop, pick(n))
    return None


def random_moves(loop: GenericLoop, rng: np.random.Generator, alloc: CoordinateAllocator, steps: int,
                 others: Sequence[GenericLoop] = ()) -> Tuple[GenericLoop, List[str]]:
    applied = []
    for _ in range(steps):
        name, loop = random_move(loop, rng, alloc, others)
        applied.append(name)
    return loop, applied


# --- simplification ----------------------------------------------------------

@dataclass(frozen=True)
class SimplifyResult:
    loop: GenericLoop
    moves: int
    rounds: int


def _hop_path(qs: QuasiSurface, start: str, end: str) -> List[str]:
    """Intermediate gates on the shorter way around the circle."""
    n = len(qs.gates)
    a, b = qs.gate_index(start), qs.gate_index(end)
    forward = (b - a) % n
    if forward <= n - forward:
        steps = [(a + s) % n for s in range(1, forward)]
    else:
        steps = [(a - s) % n for s in range(1, n - forward)]
    return [qs.gates[i].id for i in steps]


def hop_decompose(loop: GenericLoop, alloc: CoordinateAllocator) -> Tuple[GenericLoop, int]:
    """Finger every chord through the gates between its ends."""
    qs = alloc.surface
    moves = 0
    i = 0
    while i < len(loop.chords):
        chord = loop.chords[i]
        if not chord.is_u_turn:
            for gate in _hop_path(qs, chord.enter.gate, chord.exit.gate):
                loop = finger_insert(loop, i, gate, alloc.allocate(gate), alloc.allocate(gate), qs)
                moves += 1
                i += 1
        i += 1
    return loop, moves


def nested_placement(loop: GenericLoop, alloc: CoordinateAllocator) -> Tuple[GenericLoop, int]:
    """
    Reassign gate points of a loop made of hops between neighbouring gates
    and u-turns so that no two chords cross. On gate j the points are, in
    increasing u: hops from gate j-1 (outermost first), u-turn pairs, hops to
    gate j+1 (outermost first).
    """
    qs = alloc.surface
    n = len(qs.gates)
    lower = {g.id: [] for g in qs.gates}
    middle = {g.id: [] for g in qs.gates}
    upper = {g.id: [] for g in qs.gates}
    for i, chord in enumerate(loop.chords):
        if chord.is_u_turn:
            middle[chord.enter.gate].extend([(i, True), (i, False)])
            continue
        a, b = qs.gate_index(chord.enter.gate), qs.gate_index(chord.exit.gate)
        if (b - a) % n == 1:
            upper[chord.enter.gate].append((i, True))
            lower[chord.exit.gate].append((i, False))
        elif (a - b) % n == 1:
            upper[chord.exit.gate].append((i, False))
            lower[chord.enter.gate].append((i, True))
        else:
            raise SimplificationError(f"chord {i} joins gates that are not neighbours")

    moves = 0
    for gate in qs.gates:
        slots = list(reversed(lower[gate.id])) + middle[gate.id] + upper[gate.id]
        targets = sorted(alloc.allocate(gate.id) for _ in slots)
        for (chord, entry), u in zip(slots, targets):
            loop = slide(loop, loop.find_crossing(chord, entry), u, qs)
            moves += 1
    return loop, moves


def _neighbours(loop: GenericLoop, gate_id: str, u: Fraction, qs: QuasiSurface) -> Tuple[Fraction, Fraction]:
    gate = qs.gate(gate_id)
    below = [c.u for c in loop.on_gate(gate_id) if c.u < u]
    above = [c.u for c in loop.on_gate(gate_id) if c.u > u]
    return (max(below) if below else gate.lo, min(above) if above else gate.hi)


def push_across_gate(loop: GenericLoop, alloc: CoordinateAllocator) -> GenericLoop:
    """
    Take the first self-crossing, follow its first branch to the gate point
    where it leaves the disk and push the other branch across that gate
    right next to it. Of the two sides, keep the one with fewer crossings.
    """
    qs = alloc.surface
    crossing = self_intersections(loop)[0]
    leave = loop.chords[crossing.first].exit
    low, high = _neighbours(loop, leave.gate, leave.u, qs)
    below = alloc.allocate_between(leave.gate, low, leave.u)
    above = alloc.allocate_between(leave.gate, leave.u, high)
    options = [
        finger_insert(loop, crossing.second, leave.gate, below, above, qs),
        finger_insert(loop, crossing.second, leave.gate, above, below, qs),
    ]
    return min(options, key=lambda candidate: len(self_intersections(candidate)))


def make_simple(loop: GenericLoop, alloc: CoordinateAllocator, max_rounds: Optional[int] = None) -> SimplifyResult:
    """A representative of the same class with no self-crossings."""
    qs = alloc.surface
    validate_loop(loop, qs)
    if not loop.chords or not self_intersections(loop):
        return SimplifyResult(loop, 0, 0)
    alloc.reserve([loop])
    max_rounds = config.SIMPLIFY_ROUNDS if max_rounds is None else max_rounds

    current, moves = hop_decompose(loop, alloc)
    current, placed = nested_placement(current, alloc)
    moves += placed
    rounds = 0
    while self_intersections(current):
        if rounds >= max_rounds:
            raise SimplificationError(f"still {len(self_intersections(current))} crossings after {rounds} rounds")
        current = push_across_gate(current, alloc)
        moves += 1
        rounds += 1
        logger.info("[SIMPLIFY] push-across round %d", rounds)
    logger.debug("[SIMPLIFY] %d chords -> %d chords in %d moves", len(loop.chords), len(current.chords), moves)
    return SimplifyResult(current, moves, rounds)
