"""
The combinatorial quasi-surface.

The core is the unit disk, oriented counterclockwise. Its boundary is
parametrized by u in (0,1) through `realize`. Gates are closed arcs
[lo, hi] of that parameter; each gate is collapsed to a vertex of the graph
Y. Up to homotopy X is the graph G = Y + star, where the star edge g_k runs
from vertex(k) to the disk center.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import networkx as nx

from .errors import GenericityError, InputError, SurfaceError
from .words import Letter, star_letter_name

logger = logging.getLogger(__name__)

CENTER = "c*"

Point = Tuple[Fraction, Fraction]
Span = Tuple[Fraction, Fraction]


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    try:
        return Fraction(str(value)) if not isinstance(value, int) else Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not an exact rational: {value!r}") from exc


@dataclass(frozen=True)
class Gate:
    id: str
    lo: Fraction
    hi: Fraction
    vertex: str

    @property
    def letter_name(self) -> str:
        return star_letter_name(self.id)

    def contains(self, u: Fraction) -> bool:
        """Strict interior of the arc."""
        return self.lo < u < self.hi


@dataclass(frozen=True)
class YEdge:
    id: str
    source: str
    target: str


@dataclass(frozen=True)
class BoundaryPoint:
    gate: str
    u: Fraction

    def __str__(self):
        return f"{self.gate}@{self.u}"


@dataclass
class ValidationReport:
    valid: bool = True
    problems: List[str] = field(default_factory=list)

    def fail(self, message: str) -> None:
        self.valid = False
        self.problems.append(message)

    def to_json(self):
        return {"valid": self.valid, "problems": list(self.problems)}


@dataclass(frozen=True)
class QuasiSurface:
    gates: Tuple[Gate, ...]
    vertices: Tuple[str, ...]
    edges: Tuple[YEdge, ...] = ()

    @cached_property
    def _gates_by_id(self) -> Dict[str, Gate]:
        return {g.id: g for g in self.gates}

    @cached_property
    def _edges_by_id(self) -> Dict[str, YEdge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _gates_by_letter(self) -> Dict[str, Gate]:
        return {g.letter_name: g for g in self.gates}

    @property
    def gate_ids(self) -> Tuple[str, ...]:
        return tuple(g.id for g in self.gates)

    def gate(self, gate_id: str) -> Gate:
        try:
            return self._gates_by_id[gate_id]
        except KeyError:
            raise SurfaceError(f"unknown gate {gate_id!r}") from None

    def edge(self, edge_id: str) -> YEdge:
        try:
            return self._edges_by_id[edge_id]
        except KeyError:
            raise SurfaceError(f"unknown Y edge {edge_id!r}") from None

    def vertex_of(self, gate_id: str) -> str:
        return self.gate(gate_id).vertex

    def gate_index(self, gate_id: str) -> int:
        return self.gate_ids.index(self.gate(gate_id).id)

    def gate_for_letter(self, name: str) -> Optional[Gate]:
        return self._gates_by_letter.get(name)

    def letter_endpoints(self, letter: Letter) -> Tuple[str, str]:
        """(start, end) of a signed letter as an oriented edge of G."""
        gate = self._gates_by_letter.get(letter.name)
        if gate is not None:
            ends = (gate.vertex, CENTER)
        else:
            edge = self._edges_by_id.get(letter.name)
            if edge is None:
                raise SurfaceError(f"letter {letter} is neither a star letter nor a Y edge")
            ends = (edge.source, edge.target)
        return ends if letter.power == 1 else (ends[1], ends[0])

    def graph(self) -> nx.MultiGraph:
        """Y + star as an undirected multigraph; edge keys are letter names."""
        g = nx.MultiGraph()
        g.add_nodes_from(self.vertices)
        g.add_node(CENTER)
        for gate in self.gates:
            g.add_edge(gate.vertex, CENTER, key=gate.letter_name)
        for edge in self.edges:
            g.add_edge(edge.source, edge.target, key=edge.id)
        return g

    @property
    def rank(self) -> int:
        """Free rank of pi_1(X) for a connected Y + star."""
        return len(self.edges) + len(self.gates) - len(self.vertices)

    def gate_at(self, u: Fraction) -> Optional[Gate]:
        for gate in self.gates:
            if gate.contains(u):
                return gate
        return None

    def require_valid(self) -> "QuasiSurface":
        report = validate(self)
        if not report.valid:
            raise SurfaceError("; ".join(report.problems))
        return self


def validate(qs: QuasiSurface) -> ValidationReport:
    report = ValidationReport()
    if not qs.gates:
        report.fail("a quasi-surface needs at least one gate")
    vertex_set = set(qs.vertices)
    if len(vertex_set) != len(qs.vertices):
        report.fail("duplicate Y vertex ids")
    if CENTER in vertex_set:
        report.fail(f"vertex id {CENTER!r} is reserved for the disk center")

    seen_ids = set()
    for gate in qs.gates:
        if gate.id in seen_ids:
            report.fail(f"duplicate gate id {gate.id!r}")
        seen_ids.add(gate.id)
        if not (0 < gate.lo < gate.hi < 1):
            report.fail(f"gate {gate.id}: arc [{gate.lo}, {gate.hi}] is not a proper subinterval of (0,1)")
        if gate.vertex not in vertex_set:
            report.fail(f"gate {gate.id}: vertex {gate.vertex!r} is not in Y")
    for left, right in zip(qs.gates, qs.gates[1:]):
        if not left.hi < right.lo:
            report.fail(f"gates {left.id} and {right.id} overlap or are out of order: "
                        f"[{left.lo}, {left.hi}] vs [{right.lo}, {right.hi}]")

    letter_names = [g.letter_name for g in qs.gates]
    edge_ids = [e.id for e in qs.edges]
    if len(set(edge_ids)) != len(edge_ids):
        report.fail("duplicate Y edge ids")
    if len(set(letter_names)) != len(letter_names):
        report.fail("two gates share a star letter name")
    for clash in sorted(set(letter_names) & set(edge_ids)):
        report.fail(f"Y edge id {clash!r} collides with a star letter")
    for edge in qs.edges:
        for end in (edge.source, edge.target):
            if end not in vertex_set:
                report.fail(f"edge {edge.id}: endpoint {end!r} is not a Y vertex")

    if report.valid and not nx.is_connected(qs.graph()):
        report.fail("Y + star is not connected")
    return report


# --- orientation ----------------------------------------------------------

@dataclass(frozen=True)
class GateOrientation:
    """ω: +1 on a gate means the direction of increasing u."""

    signs: Tuple[Tuple[str, int], ...]

    @cached_property
    def _lookup(self) -> Dict[str, int]:
        return dict(self.signs)

    def __getitem__(self, gate_id: str) -> int:
        try:
            return self._lookup[gate_id]
        except KeyError:
            raise SurfaceError(f"orientation has no value on gate {gate_id!r}") from None

    @classmethod
    def constant(cls, qs: QuasiSurface, sign: int = 1) -> "GateOrientation":
        return cls(tuple((g.id, sign) for g in qs.gates))

    @classmethod
    def from_mapping(cls, qs: QuasiSurface, mapping: Mapping[str, int]) -> "GateOrientation":
        missing = [g.id for g in qs.gates if g.id not in mapping]
        if missing:
            raise InputError(f"orientation missing gates {missing}")
        return cls(tuple((g.id, 1 if mapping[g.id] > 0 else -1) for g in qs.gates))

    @classmethod
    def from_bits(cls, qs: QuasiSurface, bits: Optional[str]) -> "GateOrientation":
        """'10' -> (+1, -1) in gate order; None means all +1."""
        if bits is None or bits == "":
            return cls.constant(qs)
        if len(bits) != len(qs.gates) or set(bits) - {"0", "1"}:
            raise InputError(f"omega bitstring {bits!r} must have one 0/1 per gate ({len(qs.gates)})")
        return cls(tuple((g.id, 1 if b == "1" else -1) for g, b in zip(qs.gates, bits)))

    def reversed(self) -> "GateOrientation":
        return GateOrientation(tuple((k, -s) for k, s in self.signs))

    def bits(self) -> str:
        return "".join("1" if s > 0 else "0" for _, s in self.signs)


def all_orientations(qs: QuasiSurface) -> List[GateOrientation]:
    return [
        GateOrientation(tuple(zip(qs.gate_ids, signs)))
        for signs in product((1, -1), repeat=len(qs.gates))
    ]


def epsilon_gate(omega: GateOrientation, gate_id: str) -> int:
    """ε(ω,k): (ccw tangent, inward normal) is positive, so this is ω(k)."""
    return omega[gate_id]


def precedes(omega: GateOrientation, gate_id: str, u: Fraction, v: Fraction) -> bool:
    """u <_ω v on gate k."""
    return (u < v) != (omega[gate_id] == -1)


# --- exact geometry -------------------------------------------------------

@lru_cache(maxsize=65536)
def realize(u: Fraction) -> Point:
    """Rational point of the unit circle; counterclockwise and injective in u."""
    u = as_fraction(u)
    if not 0 < u < 1:
        raise InputError(f"boundary coordinate {u} is outside (0,1)")
    s = (2 * u - 1) / (u * (1 - u))
    denom = 1 + s * s
    return ((1 - s * s) / denom, 2 * s / denom)


def _sub(p: Point, q: Point) -> Point:
    return (p[0] - q[0], p[1] - q[1])


def _cross(a: Point, b: Point) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def _orient(p: Point, q: Point, r: Point) -> int:
    value = _cross(_sub(q, p), _sub(r, p))
    return (value > 0) - (value < 0)


def _require_distinct(c1: Span, c2: Span) -> None:
    if len({c1[0], c1[1], c2[0], c2[1]}) != 4:
        raise GenericityError(f"chords {c1} and {c2} share an endpoint")


def chords_interleave(c1: Span, c2: Span) -> bool:
    """Combinatorial test: exactly one endpoint of c2 lies between those of c1."""
    lo, hi = sorted(c1)
    return (lo < c2[0] < hi) != (lo < c2[1] < hi)


def segments_intersect(c1: Span, c2: Span) -> bool:
    """Exact geometric test on the realized straight segments."""
    p1, p2 = realize(c1[0]), realize(c1[1])
    q1, q2 = realize(c2[0]), realize(c2[1])
    return (_orient(p1, p2, q1) * _orient(p1, p2, q2) < 0
            and _orient(q1, q2, p1) * _orient(q1, q2, p2) < 0)


def chord_direction(c: Span) -> Point:
    return _sub(realize(c[1]), realize(c[0]))


def chords_cross(c1: Span, c2: Span) -> Optional[int]:
    """None if the chords miss; otherwise the sign of d1 × d2."""
    _require_distinct(c1, c2)
    if not chords_interleave(c1, c2):
        return None
    value = _cross(chord_direction(c1), chord_direction(c2))
    return 1 if value > 0 else -1


def chord_intersection_point(c1: Span, c2: Span) -> Point:
    """Meeting point of two crossing chords, exact."""
    p = realize(c1[0])
    d1, d2 = chord_direction(c1), chord_direction(c2)
    t = _cross(_sub(realize(c2[0]), p), d2) / _cross(d1, d2)
    return (p[0] + t * d1[0], p[1] + t * d1[1])


def find_concurrences(chords: Iterable[Tuple[object, Span]]) -> List[Tuple[Point, List[object]]]:
    """Points where three or more of the labelled chords meet."""
    labelled = list(chords)
    meeting: Dict[Point, List[object]] = {}
    for i, (label_a, span_a) in enumerate(labelled):
        for label_b, span_b in labelled[i + 1:]:
            if chords_interleave(span_a, span_b):
                point = chord_intersection_point(span_a, span_b)
                members = meeting.setdefault(point, [])
                for label in (label_a, label_b):
                    if label not in members:
                        members.append(label)
    return [(pt, labels) for pt, labels in meeting.items() if len(labels) >= 3]
