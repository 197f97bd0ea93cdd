"""
Generic loops on the quasi-surface.

A loop is a cyclic alternation of straight disk chords and edge paths in Y.
Chord i enters the disk at a point of gate `enter.gate` and leaves at a point
of gate `exit.gate`; path i then runs in Y from the exit vertex to the entry
vertex of chord i+1. A loop with no chords is a closed path in Y, and the
loop with neither chords nor letters is the constant loop e.

Reading a loop as a word in G = Y + star: chord (k -> k') contributes
g_k . g_k'^-1 and a path contributes its letters. Every gate point and every
disk crossing is a cut position in that letter sequence, which is how based
loops and their products are computed.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .. import config
from .errors import GenericityError, InputError, MalformedLoopError, QuasiGateError, WordError
from .surface import (
    BoundaryPoint,
    QuasiSurface,
    Span,
    chords_cross,
    find_concurrences,
)
from .words import CyclicWord, Letter, Word, free_reduce, star_letter

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Chord:
    enter: BoundaryPoint
    exit: BoundaryPoint

    @property
    def span(self) -> Span:
        return (self.enter.u, self.exit.u)

    @property
    def is_u_turn(self) -> bool:
        return self.enter.gate == self.exit.gate

    def letters(self) -> Tuple[Letter, Letter]:
        return (star_letter(self.enter.gate, 1), star_letter(self.exit.gate, -1))


@dataclass(frozen=True)
class YPath:
    letters: Tuple[Letter, ...] = ()


@dataclass(frozen=True)
class Crossing:
    """A point of the loop on a gate; sign +1 at chord entries, -1 at exits."""

    gate: str
    u: Fraction
    sign: int
    chord: int
    position: int
    cut: int

    @property
    def is_entry(self) -> bool:
        return self.sign == 1

    @property
    def point(self) -> BoundaryPoint:
        return BoundaryPoint(self.gate, self.u)


@dataclass(frozen=True)
class SelfIntersection:
    """
    Chords `first` and `second` of one loop cross with (d_first, d_second)
    positively oriented. `first_half` starts at the crossing along `first`
    and returns along `second`; `second_half` is the rest of the loop.
    """

    first: int
    second: int
    first_half: Word
    second_half: Word

    @property
    def halves(self) -> Tuple[CyclicWord, CyclicWord]:
        return CyclicWord(self.first_half), CyclicWord(self.second_half)


@dataclass(frozen=True)
class LoopTrace:
    letters: Word
    entry_cuts: Tuple[int, ...]
    mid_cuts: Tuple[int, ...]
    exit_cuts: Tuple[int, ...]


@dataclass(frozen=True)
class GenericLoop:
    chords: Tuple[Chord, ...] = ()
    paths: Tuple[YPath, ...] = ()

    @property
    def is_constant(self) -> bool:
        return not self.chords and not any(p.letters for p in self.paths)

    @property
    def coordinates(self) -> List[Fraction]:
        out = []
        for chord in self.chords:
            out.extend((chord.enter.u, chord.exit.u))
        return out

    @cached_property
    def trace(self) -> LoopTrace:
        letters: List[Letter] = []
        entries, mids, exits = [], [], []
        for chord, path in zip(self.chords, self.paths):
            entries.append(len(letters))
            enter, leave = chord.letters()
            letters.append(enter)
            mids.append(len(letters))
            letters.append(leave)
            exits.append(len(letters))
            letters.extend(path.letters)
        if not self.chords:
            for path in self.paths:
                letters.extend(path.letters)
        return LoopTrace(tuple(letters), tuple(entries), tuple(mids), tuple(exits))

    @cached_property
    def crossing_list(self) -> Tuple[Crossing, ...]:
        """All gate points in loop order."""
        trace = self.trace
        out = []
        for i, chord in enumerate(self.chords):
            out.append(Crossing(chord.enter.gate, chord.enter.u, 1, i, 2 * i, trace.entry_cuts[i]))
            out.append(Crossing(chord.exit.gate, chord.exit.u, -1, i, 2 * i + 1, trace.exit_cuts[i]))
        return tuple(out)

    @cached_property
    def crossing_map(self) -> Dict[str, Tuple[Crossing, ...]]:
        grouped: Dict[str, List[Crossing]] = {}
        for crossing in self.crossing_list:
            grouped.setdefault(crossing.gate, []).append(crossing)
        return {gate: tuple(sorted(pts, key=lambda c: c.u)) for gate, pts in grouped.items()}

    def on_gate(self, gate_id: str) -> Tuple[Crossing, ...]:
        return self.crossing_map.get(gate_id, ())

    def find_crossing(self, chord: int, entry: bool) -> Crossing:
        return self.crossing_list[2 * chord + (0 if entry else 1)]


CONSTANT_LOOP = GenericLoop()


# --- validation ------------------------------------------------------------

def _walk(qs: QuasiSurface, start: str, letters: Sequence[Letter], where: str) -> str:
    here = start
    for letter in letters:
        if qs.gate_for_letter(letter.name) is not None:
            raise MalformedLoopError(f"{where}: star letter {letter} inside a Y path")
        try:
            src, dst = qs.letter_endpoints(letter)
        except QuasiGateError as exc:
            raise MalformedLoopError(f"{where}: {exc}") from exc
        if src != here:
            raise MalformedLoopError(f"{where}: letter {letter} starts at {src}, path is at {here}")
        here = dst
    return here


def validate_loop(loop: GenericLoop, qs: QuasiSurface) -> GenericLoop:
    """Raise unless the loop is well formed on `qs` and self-generic."""
    if not loop.chords:
        if len(loop.paths) > 1:
            raise MalformedLoopError("a loop without chords has at most one Y path")
        if loop.paths and loop.paths[0].letters:
            letters = loop.paths[0].letters
            start, _ = qs.letter_endpoints(letters[0])
            if _walk(qs, start, letters, "closed Y path") != start:
                raise MalformedLoopError("Y path of a chordless loop is not closed")
        return loop
    if len(loop.paths) != len(loop.chords):
        raise MalformedLoopError("chords and Y paths must alternate")
    n = len(loop.chords)
    for i, chord in enumerate(loop.chords):
        for point in (chord.enter, chord.exit):
            gate = qs.gate(point.gate)
            if not gate.contains(point.u):
                raise MalformedLoopError(f"chord {i}: {point} is not inside gate arc [{gate.lo}, {gate.hi}]")
        start = qs.vertex_of(chord.exit.gate)
        target = qs.vertex_of(loop.chords[(i + 1) % n].enter.gate)
        end = _walk(qs, start, loop.paths[i].letters, f"Y path {i}")
        if end != target:
            raise MalformedLoopError(f"Y path {i} ends at {end}, next chord enters from {target}")
    coords = loop.coordinates
    if len(set(coords)) != len(coords):
        raise GenericityError("boundary coordinates of a loop must be pairwise distinct")
    return loop


def check_family(loops: Sequence[GenericLoop]) -> None:
    """Distinct coordinates across the family and no triple chord points."""
    seen = set()
    for loop in loops:
        for u in loop.coordinates:
            if u in seen:
                raise GenericityError(f"boundary coordinate {u} is used twice in the family")
            seen.add(u)
    labelled = [((n, i), chord.span) for n, loop in enumerate(loops) for i, chord in enumerate(loop.chords)]
    bad = find_concurrences(labelled)
    if bad:
        point, labels = bad[0]
        raise GenericityError(f"chords {labels} meet at one point {point}")


# --- words -----------------------------------------------------------------

def class_of(loop: GenericLoop) -> CyclicWord:
    return CyclicWord(loop.trace.letters)


def is_contractible(loop: GenericLoop) -> bool:
    return class_of(loop).is_trivial


def crossings(loop: GenericLoop) -> Dict[str, Tuple[Crossing, ...]]:
    return loop.crossing_map


def intersection_number(loop: GenericLoop, gate_id: str) -> int:
    return sum(c.sign for c in loop.on_gate(gate_id))


def _arc(letters: Word, cut_a: int, pos_a: int, cut_b: int, pos_b: int) -> Word:
    """Letters met going from position a to position b along the loop."""
    if pos_a < pos_b:
        return letters[cut_a:cut_b]
    return letters[cut_a:] + letters[:cut_b]


def based_word(loop: GenericLoop, p: Crossing) -> Word:
    """The loop read from p, based at the vertex of p's gate."""
    letters = loop.trace.letters
    return free_reduce(letters[p.cut:] + letters[:p.cut])


def subword(loop: GenericLoop, p1: Crossing, p2: Crossing) -> Word:
    """a_{p1,p2}: along the loop from p1 to p2, closed through the gate; p1 = p2 gives the whole loop."""
    if p1.gate != p2.gate:
        raise InputError(f"subword needs points on one gate, got {p1.gate} and {p2.gate}")
    return free_reduce(_arc(loop.trace.letters, p1.cut, p1.position, p2.cut, p2.position))


def mid_word(loop: GenericLoop, chord: int) -> Word:
    """The loop read from the middle of a chord (based at the disk center)."""
    letters = loop.trace.letters
    cut = loop.trace.mid_cuts[chord]
    return letters[cut:] + letters[:cut]


def self_intersections(loop: GenericLoop) -> List[SelfIntersection]:
    bad = find_concurrences([(i, c.span) for i, c in enumerate(loop.chords)])
    if bad:
        raise GenericityError(f"chords {bad[0][1]} of one loop meet at a single point")
    trace = loop.trace
    out = []
    for i in range(len(loop.chords)):
        for j in range(i + 1, len(loop.chords)):
            sign = chords_cross(loop.chords[i].span, loop.chords[j].span)
            if sign is None:
                continue
            first, second = (i, j) if sign > 0 else (j, i)
            m1, m2 = trace.mid_cuts[first], trace.mid_cuts[second]
            out.append(SelfIntersection(
                first=first,
                second=second,
                first_half=_arc(trace.letters, m1, first, m2, second),
                second_half=_arc(trace.letters, m2, second, m1, first),
            ))
    return out


# --- representatives -------------------------------------------------------

class CoordinateAllocator:
    """
    Hands out fresh boundary coordinates lo + (hi - lo) * num / q inside a
    gate arc, with q strictly increasing and num drawn from a seeded RNG.
    No coordinate is ever handed out twice.
    """

    def __init__(self, surface: QuasiSurface, seed: Optional[int] = None, denominator_base: Optional[int] = None):
        self.surface = surface
        self.seed = config.SEED if seed is None else seed
        self._rng = np.random.default_rng(self.seed)
        self._denominator = config.DENOMINATOR_BASE if denominator_base is None else denominator_base
        self._used = set()

    def reserve(self, loops: Iterable[GenericLoop]) -> None:
        for loop in loops:
            self._used.update(loop.coordinates)

    def is_used(self, u: Fraction) -> bool:
        return u in self._used

    def allocate_between(self, gate_id: str, lo: Fraction, hi: Fraction) -> Fraction:
        gate = self.surface.gate(gate_id)
        lo, hi = max(lo, gate.lo), min(hi, gate.hi)
        if not lo < hi:
            raise GenericityError(f"empty interval on gate {gate_id}")
        while True:
            self._denominator += 1
            q = self._denominator
            u = lo + (hi - lo) * Fraction(int(self._rng.integers(1, q)), q)
            if u not in self._used:
                self._used.add(u)
                return u

    def allocate(self, gate_id: str) -> Fraction:
        gate = self.surface.gate(gate_id)
        return self.allocate_between(gate_id, gate.lo, gate.hi)


def _check_edge_cycle(qs: QuasiSurface, letters: Word) -> None:
    for i, letter in enumerate(letters):
        nxt = letters[(i + 1) % len(letters)]
        try:
            end = qs.letter_endpoints(letter)[1]
            start = qs.letter_endpoints(nxt)[0]
        except QuasiGateError as exc:
            raise WordError(str(exc)) from exc
        if end != start:
            raise WordError(f"{letter} ends at {end} but {nxt} starts at {start}")


def _parse_strands(qs: QuasiSurface, letters: Word) -> List[Tuple[Optional[Tuple[str, str]], Word]]:
    """Split a cyclic edge-cycle word into (chord gates, following Y letters)."""
    is_star = [qs.gate_for_letter(l.name) is not None for l in letters]
    if not any(is_star):
        return [(None, letters)]
    start = next(i for i, (s, l) in enumerate(zip(is_star, letters)) if s and l.power == 1)
    letters = letters[start:] + letters[:start]
    is_star = is_star[start:] + is_star[:start]
    strands = []
    i, n = 0, len(letters)
    while i < n:
        enter, leave = letters[i], letters[(i + 1) % n]
        if not (is_star[i] and enter.power == 1 and i + 1 < n and is_star[i + 1] and leave.power == -1):
            raise WordError(f"star letters must come in pairs g_k.g_k'^-1 at position {i}")
        j = i + 2
        while j < n and not is_star[j]:
            j += 1
        strands.append((
            (qs.gate_for_letter(enter.name).id, qs.gate_for_letter(leave.name).id),
            letters[i + 2:j],
        ))
        i = j
    return strands


def loop_from_word(word: CyclicWord, alloc: CoordinateAllocator, retries: Optional[int] = None) -> GenericLoop:
    """A representative with fresh coordinates; e maps to the constant loop."""
    if word.is_trivial:
        return CONSTANT_LOOP
    qs = alloc.surface
    _check_edge_cycle(qs, word.letters)
    strands = _parse_strands(qs, word.letters)
    if strands[0][0] is None:
        return GenericLoop((), (YPath(strands[0][1]),))
    retries = config.GENERIC_RETRIES if retries is None else retries
    for attempt in range(retries + 1):
        chords, paths = [], []
        for (enter, leave), tail in strands:
            chords.append(Chord(
                BoundaryPoint(enter, alloc.allocate(enter)),
                BoundaryPoint(leave, alloc.allocate(leave)),
            ))
            paths.append(YPath(tuple(tail)))
        loop = GenericLoop(tuple(chords), tuple(paths))
        if not find_concurrences([(i, c.span) for i, c in enumerate(loop.chords)]):
            return loop
        logger.debug("[LOOPS] concurrent chords for %s, retry %d", word, attempt + 1)
    raise GenericityError(f"no generic representative of {word} after {retries} retries")


class ClassTable:
    """Append-only registry class -> representative, plus fresh families."""

    def __init__(self, surface: QuasiSurface, allocator: Optional[CoordinateAllocator] = None,
                 seed: Optional[int] = None, retries: Optional[int] = None):
        self.surface = surface
        self.allocator = allocator or CoordinateAllocator(surface, seed=seed)
        self.retries = config.GENERIC_RETRIES if retries is None else retries
        self._store: Dict[CyclicWord, GenericLoop] = {}

    def __contains__(self, word: CyclicWord) -> bool:
        return word in self._store

    def __len__(self):
        return len(self._store)

    def representative(self, word: CyclicWord) -> GenericLoop:
        loop = self._store.get(word)
        if loop is None:
            loop = loop_from_word(word, self.allocator, self.retries)
            self._store[word] = loop
        return loop

    def register(self, loop: GenericLoop) -> CyclicWord:
        """Store `loop` as representative of its class unless one exists."""
        word = class_of(loop)
        self.allocator.reserve([loop])
        self._store.setdefault(word, loop)
        return word

    def fresh(self, word: CyclicWord) -> GenericLoop:
        return loop_from_word(word, self.allocator, self.retries)

    def fresh_family(self, words: Sequence[CyclicWord]) -> Tuple[GenericLoop, ...]:
        """Freshly allocated, jointly generic representatives."""
        for attempt in range(self.retries + 1):
            family = tuple(self.fresh(w) for w in words)
            try:
                check_family(family)
                return family
            except GenericityError:
                logger.debug("[LOOPS] degenerate family %s, retry %d", [str(w) for w in words], attempt + 1)
        raise GenericityError(f"no generic family for {[str(w) for w in words]}")
