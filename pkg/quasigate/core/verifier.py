"""
Randomized verification harness.

Each trial draws a small random quasi-surface and random loop classes from a
per-trial generator seeded with (seed, trial index), evaluates both sides of
one identity exactly and records the outcome. Reports are sorted by trial
index, so output depends only on the seed and the options.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .. import config
from .errors import InputError, QuasiGateError
from .loops import CoordinateAllocator, class_of, loop_from_word, self_intersections
from .moves import make_simple, random_moves
from .quasi_lie import (
    CheckReport,
    associator_pair,
    basis_keys,
    check_quasi_lie_algebra,
    check_quasi_lie_bialgebra,
    check_quasi_lie_coalgebra,
    coboundary,
    delta,
    is_fully_symmetric,
    pair_from_bilinear,
    random_bilinear,
    subtract_symmetric,
    transpose_symmetric_part,
)
from .rings import INTEGERS, RATIONALS, Ring
from .string_ops import (
    LoopAlgebra,
    bracket_omega,
    core_bracket,
    core_cobracket,
    nu_omega,
    project_tensor,
    total_gamma,
    total_mu,
    zeta_loops,
)
from .surface import CENTER, Gate, GateOrientation, QuasiSurface, YEdge, all_orientations
from .words import CyclicWord, Letter, star_letter

logger = logging.getLogger(__name__)

THEOREMS = (
    "jacobi", "cojacobi", "coboundary", "bialgebra", "lemma22", "omega-indep", "moves", "simple",
    "associator", "recover-omega", "core-reduction",
)

MAX_GATES = 3
MAX_EDGES = 3
MAX_CHORDS = 4
MAX_CHORDS_SIMPLE = 6
MOVE_STEPS = 20


# --- random instances ------------------------------------------------------

def random_surface(rng: np.random.Generator, max_gates: int = MAX_GATES, max_edges: int = MAX_EDGES) -> QuasiSurface:
    """1..max_gates evenly spread gates, a connected Y with up to max_edges edges, rank >= 1."""
    n = int(rng.integers(1, max_gates + 1))
    n_vertices = int(rng.integers(1, n + 1))
    vertices = tuple(f"v{i + 1}" for i in range(n_vertices))
    owners = list(range(n_vertices)) + [int(rng.integers(n_vertices)) for _ in range(n - n_vertices)]
    rng.shuffle(owners)
    gates = tuple(
        Gate(f"G{i + 1}", Fraction(4 * i + 1, 4 * n), Fraction(4 * i + 3, 4 * n), vertices[owners[i]])
        for i in range(n)
    )
    n_edges = int(rng.integers(0, max_edges + 1))
    if n_edges + n - n_vertices < 1:
        n_edges = 1
    edges = tuple(
        YEdge(f"y{j + 1}", vertices[int(rng.integers(n_vertices))], vertices[int(rng.integers(n_vertices))])
        for j in range(n_edges)
    )
    return QuasiSurface(gates, vertices, edges)


def _oriented(qs: QuasiSurface, name: str, start: str, end: str,
              rng: Optional[np.random.Generator] = None) -> Letter:
    source, target = qs.letter_endpoints(Letter(name, 1))
    if source == target:
        return Letter(name, -1 if rng is not None and rng.integers(2) else 1)
    return Letter(name, 1 if (source, target) == (start, end) else -1)


def _walk_letters(qs: QuasiSurface, graph: nx.MultiGraph, path: Sequence[str],
                  rng: Optional[np.random.Generator] = None) -> List[Letter]:
    letters = []
    for a, b in zip(path, path[1:]):
        keys = sorted(graph[a][b])
        key = keys[int(rng.integers(len(keys)))] if rng is not None else keys[0]
        letters.append(_oriented(qs, key, a, b, rng))
    return letters


def random_word(rng: np.random.Generator, qs: QuasiSurface, max_chords: int = MAX_CHORDS,
                max_steps: int = 8, attempts: int = 32) -> CyclicWord:
    """Class of a random closed walk in Y + star with at most max_chords chords."""
    graph = qs.graph()
    nodes = sorted(graph.nodes)
    for _ in range(attempts):
        start = nodes[int(rng.integers(len(nodes)))]
        current, letters = start, []
        for _ in range(int(rng.integers(1, max_steps + 1))):
            incident = sorted(graph.edges(current, keys=True), key=lambda e: (e[2], e[1]))
            _, other, key = incident[int(rng.integers(len(incident)))]
            letters.append(_oriented(qs, key, current, other, rng))
            current = other
        letters += _walk_letters(qs, graph, nx.shortest_path(graph, current, start), rng)
        word = CyclicWord(letters)
        chords = sum(1 for l in word if l.power == 1 and qs.gate_for_letter(l.name) is not None)
        if chords <= max_chords:
            return word
    return CyclicWord()


def generator_word(qs: QuasiSurface) -> CyclicWord:
    """The free generator of pi_1(G) given by the first edge outside a spanning tree."""
    graph = qs.graph()
    tree = nx.minimum_spanning_tree(graph)
    u, v, key = next(
        e for e in sorted(graph.edges(keys=True), key=lambda e: (e[2], e[0], e[1]))
        if not tree.has_edge(e[0], e[1], key=e[2])
    )
    letters = _walk_letters(qs, tree, nx.shortest_path(tree, CENTER, u))
    letters.append(_oriented(qs, key, u, v))
    letters += _walk_letters(qs, tree, nx.shortest_path(tree, v, CENTER))
    return CyclicWord(letters)


def random_class(rng: np.random.Generator, qs: QuasiSurface, max_chords: int = MAX_CHORDS,
                 attempts: int = 32) -> CyclicWord:
    """A nontrivial random class; falls back to a free generator."""
    for _ in range(attempts):
        word = random_word(rng, qs, max_chords)
        if not word.is_trivial:
            return word
    return generator_word(qs)


def random_orientation(rng: np.random.Generator, qs: QuasiSurface) -> GateOrientation:
    bits = "".join("1" if rng.integers(2) else "0" for _ in qs.gates)
    return GateOrientation.from_bits(qs, bits)


def bouquet_surface(rng: np.random.Generator, min_gates: int = 4, max_gates: int = 6,
                    max_edges: int = 2) -> QuasiSurface:
    """All gates on one vertex; Y is a bouquet of up to max_edges loops."""
    n = int(rng.integers(min_gates, max_gates + 1))
    gates = tuple(Gate(f"G{i + 1}", Fraction(4 * i + 1, 4 * n), Fraction(4 * i + 3, 4 * n), "v1") for i in range(n))
    edges = tuple(YEdge(f"y{j + 1}", "v1", "v1") for j in range(int(rng.integers(0, max_edges + 1))))
    return QuasiSurface(gates, ("v1",), edges)


def paired_gate_word(rng: np.random.Generator, qs: QuasiSurface, gate_ids: Sequence[str]) -> CyclicWord:
    """
    A class on a bouquet surface whose representatives cross each of the
    given gates exactly once: consecutive gates are joined by a chord, and
    each Y edge is traversed at most once between two chords.
    """
    letters = []
    for enter, leave in zip(gate_ids[0::2], gate_ids[1::2]):
        letters += [star_letter(enter), star_letter(leave, -1)]
        for edge in qs.edges:
            if rng.integers(2):
                letters.append(Letter(edge.id, 1 if rng.integers(2) else -1))
    return CyclicWord(letters)


# --- reports ---------------------------------------------------------------

@dataclass
class TrialResult:
    index: int
    passed: bool
    checked: int
    instance: Dict[str, Any] = field(default_factory=dict)
    witness: Optional[Dict[str, Any]] = None

    def to_json(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "passed": self.passed,
            "checked": self.checked,
            "instance": self.instance,
            "witness": self.witness,
        }


@dataclass
class VerifyReport:
    theorem: str
    seed: int
    trials: int
    flip_gate_sign: bool = False
    results: List[TrialResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failed(self) -> List[int]:
        return [r.index for r in self.results if not r.passed]

    def to_json(self) -> Dict[str, Any]:
        ordered = sorted(self.results, key=lambda r: r.index)
        first = next((r for r in ordered if not r.passed), None)
        return {
            "theorem": self.theorem,
            "seed": self.seed,
            "trials": self.trials,
            "flip_gate_sign": self.flip_gate_sign,
            "passed": self.passed,
            "checked": sum(r.checked for r in ordered),
            "failed_trials": self.failed,
            "first_witness": None if first is None else {"trial": first.index, **(first.witness or {})},
            "results": [r.to_json() for r in ordered],
        }


def _describe(qs: QuasiSurface, words: Sequence[CyclicWord]) -> Dict[str, Any]:
    return {
        "gates": [g.id + "@" + g.vertex for g in qs.gates],
        "edges": [f"{e.id}:{e.source}->{e.target}" for e in qs.edges],
        "classes": [str(w) for w in words],
    }


# --- trials ----------------------------------------------------------------

@dataclass
class TrialContext:
    rng: np.random.Generator
    seed: int
    ring: Ring
    flip_gate_sign: bool


def _setup(ctx: TrialContext, count: int, ring: Optional[Ring] = None,
           max_chords: int = MAX_CHORDS) -> Tuple[LoopAlgebra, List[CyclicWord]]:
    qs = random_surface(ctx.rng)
    omega = random_orientation(ctx.rng, qs)
    algebra = LoopAlgebra(qs, ring or ctx.ring, omega, seed=ctx.seed, flip_gate_sign=ctx.flip_gate_sign)
    words = [random_class(ctx.rng, qs, max_chords) for _ in range(count)]
    return algebra, words


def trial_jacobi(ctx: TrialContext) -> Tuple[CheckReport, Dict]:
    algebra, (x, y, z) = _setup(ctx, 3)
    report = check_quasi_lie_algebra(algebra.bracket, algebra.mu3, [(x, y, z), (x, x, y)])
    return report, _describe(algebra.surface, (x, y, z))


def trial_cojacobi(ctx: TrialContext) -> Tuple[CheckReport, Dict]:
    algebra, (x,) = _setup(ctx, 1)
    report = check_quasi_lie_coalgebra(algebra.nu, algebra.gamma3, [x])
    return report, _describe(algebra.surface, (x,))


def trial_coboundary(ctx: TrialContext) -> Tuple[CheckReport, Dict]:
    """(ψ⊗ψ)(δζ - 2∂ν) = 0 on one basis pair."""
    algebra, (x, y) = _setup(ctx, 2)
    report = CheckReport("coboundary")
    skewed = delta(algebra.zeta)
    boundary = coboundary(algebra.bracket, algebra.nu)
    lhs = project_tensor(skewed.on_basis(x, y))
    rhs = project_tensor(boundary.on_basis(x, y).scale(2))
    report.record(lhs == rhs, "delta(zeta) = 2 d(nu)", (x, y), lhs, rhs)
    return report, _describe(algebra.surface, (x, y))


def trial_bialgebra(ctx: TrialContext) -> Tuple[CheckReport, Dict]:
    ring = ctx.ring if ctx.ring.has_half else RATIONALS
    algebra, (x, y, z) = _setup(ctx, 3, ring=ring, max_chords=3)
    b2, b3, nu, gamma, zeta = algebra.quotient_structures()
    report = check_quasi_lie_bialgebra(
        b2, b3, nu, gamma, zeta,
        sample=[x, y, z],
        triples=[(x, y, z)],
        pairs=[(x, y), (y, z)],
    )
    return report, _describe(algebra.surface, (x, y, z))


def trial_lemma22(ctx: TrialContext) -> Tuple[CheckReport, Dict]:
    rank = int(ctx.rng.integers(3, 6))
    dot = random_bilinear(ctx.rng, rank, ring=ctx.ring)
    skew, ternary = pair_from_bilinear(dot)
    keys = basis_keys(rank)
    triples = [(x, y, z) for x in keys for y in keys for z in keys]
    return check_quasi_lie_algebra(skew, ternary, triples), {"rank": rank}


def trial_associator(ctx: TrialContext) -> Tuple[CheckReport, Dict]:
    """Shifting J + J^t by its fully symmetric part u leaves the cyclic associator pair."""
    rank = int(ctx.rng.integers(3, 6))
    dot = random_bilinear(ctx.rng, rank, ring=ctx.ring)
    skew, ternary = pair_from_bilinear(dot)
    u = transpose_symmetric_part(dot)
    shifted = subtract_symmetric(ternary, u)
    _, cyclic = associator_pair(dot)
    keys = basis_keys(rank)
    triples = [(x, y, z) for x in keys for y in keys for z in keys]
    report = CheckReport("symmetric shift")
    for t in triples:
        report.record(is_fully_symmetric(u, [t]), "u fully symmetric", t, u.on_basis(*t), u.on_basis(*t[::-1]))
        report.record(shifted.on_basis(*t) == cyclic.on_basis(*t), "shift is the associator sum", t,
                      shifted.on_basis(*t), cyclic.on_basis(*t))
    report.absorb(check_quasi_lie_algebra(skew, shifted, triples))
    return report, {"rank": rank}


def trial_omega_independence(ctx: TrialContext) -> Tuple[CheckReport, Dict]:
    algebra, (x, y) = _setup(ctx, 2)
    report = CheckReport("omega independence")
    base_bracket, base_nu = algebra.bracket.on_basis(x, y), algebra.nu.on_basis(x)
    for omega in all_orientations(algebra.surface):
        other = algebra.with_orientation(omega)
        value = other.bracket.on_basis(x, y)
        report.record(value == base_bracket, f"bracket under omega={omega.bits()}", (x, y), value, base_bracket)
        value = other.nu.on_basis(x)
        report.record(value == base_nu, f"nu under omega={omega.bits()}", (x,), value, base_nu)
    return report, _describe(algebra.surface, (x, y))


def trial_recover_omega(ctx: TrialContext) -> Tuple[CheckReport, Dict]:
    """2[x,y]_ω and 2ν_ω(x) from the skew operations plus ε-weighted gate 2-operations."""
    algebra, (x, y) = _setup(ctx, 2)
    report = CheckReport("omega recovery")
    for left, right in ((x, y), (y, x)):
        lhs = algebra.doubled_bracket_omega.on_basis(left, right)
        rhs = algebra.bracket_omega.on_basis(left, right).scale(2)
        report.record(lhs == rhs, "2 bracket-omega", (left, right), lhs, rhs)
    for word in (x, y):
        lhs, rhs = algebra.doubled_nu_omega.on_basis(word), algebra.nu_omega.on_basis(word).scale(2)
        report.record(lhs == rhs, "2 nu-omega", (word,), lhs, rhs)
    return report, _describe(algebra.surface, (x, y))


def trial_core_reduction(ctx: TrialContext) -> Tuple[CheckReport, Dict]:
    """
    Loops that share no gate bracket through the disk alone, and a loop
    crossing each gate at most once cobrackets through its self-crossings
    alone; the skew operations are then twice those core values.
    """
    qs = bouquet_surface(ctx.rng)
    order = [str(g) for g in ctx.rng.permutation(qs.gate_ids)]
    half = 2 * max(1, len(order) // 4)
    side_a, side_b = order[:half], order[half:]
    side_b = side_b[:len(side_b) - len(side_b) % 2]
    everything = order[:len(order) - len(order) % 2]
    words = [paired_gate_word(ctx.rng, qs, side) for side in (side_a, side_b, everything)]
    algebra = LoopAlgebra(qs, ctx.ring, random_orientation(ctx.rng, qs), seed=ctx.seed,
                          flip_gate_sign=ctx.flip_gate_sign)
    a, b, c = algebra.table.fresh_family(words)
    x, y, z = words
    report = CheckReport("core reduction")
    core = core_bracket(a, b, ctx.ring)
    value = bracket_omega(a, b, algebra.omega, ctx.ring, ctx.flip_gate_sign)
    report.record(value == core, "bracket-omega on gate-disjoint loops", (x, y), value, core)
    value, twice = algebra.bracket.on_basis(x, y), core.scale(2)
    report.record(value == twice, "bracket is twice the core bracket", (x, y), value, twice)
    core = core_cobracket(c, ctx.ring)
    value = nu_omega(c, algebra.omega, ctx.ring, ctx.flip_gate_sign)
    report.record(value == core, "nu-omega with one point per gate", (z,), value, core)
    value, twice = algebra.nu.on_basis(z), core.scale(2)
    report.record(value == twice, "nu is twice the core cobracket", (z,), value, twice)
    return report, _describe(qs, words)


def _loop_values(a, b, c, algebra: LoopAlgebra) -> Dict[str, Any]:
    qs, ring, omega, flip = algebra.surface, algebra.ring, algebra.omega, algebra.flip_gate_sign
    return {
        "classes": tuple(class_of(loop) for loop in (a, b, c)),
        "bracket-omega": bracket_omega(a, b, omega, ring, flip),
        "bracket-omega reversed": bracket_omega(b, a, omega, ring, flip),
        "nu-omega": nu_omega(a, omega, ring, flip),
        "mu2": total_mu([a, b], qs, ring),
        "mu3": total_mu([a, b, c], qs, ring),
        "gamma2": total_gamma(2, a, qs, ring),
        "gamma3": total_gamma(3, a, qs, ring),
        "zeta": zeta_loops(a, b, qs, ring),
        "zeta reversed": zeta_loops(b, a, qs, ring),
    }


def trial_moves(ctx: TrialContext) -> Tuple[CheckReport, Dict]:
    """Every loop-level operation is unchanged by a random move sequence on one of its inputs."""
    algebra, words = _setup(ctx, 3)
    family = list(algebra.table.fresh_family(words))
    before = _loop_values(*family, algebra)
    slot = int(ctx.rng.integers(3))
    others = tuple(loop for i, loop in enumerate(family) if i != slot)
    family[slot], names = random_moves(family[slot], ctx.rng, algebra.table.allocator, MOVE_STEPS, others=others)
    after = _loop_values(*family, algebra)
    report = CheckReport("move invariance")
    for name, value in before.items():
        other = after[name]
        if isinstance(value, tuple):
            report.record(value == other, name, words,
                          _Text(", ".join(map(str, other))), _Text(", ".join(map(str, value))))
        else:
            report.record(value == other, name, words, other, value)
    instance = _describe(algebra.surface, words)
    instance.update(moved_slot=slot, moves=names)
    return report, instance


def trial_simple(ctx: TrialContext) -> Tuple[CheckReport, Dict]:
    qs = random_surface(ctx.rng)
    word = random_class(ctx.rng, qs, MAX_CHORDS_SIMPLE)
    alloc = CoordinateAllocator(qs, seed=ctx.seed)
    loop = loop_from_word(word, alloc)
    result = make_simple(loop, alloc)
    report = CheckReport("make_simple")
    crossings = len(self_intersections(result.loop))
    report.record(crossings == 0, "no self-crossings", (word,), _Text(crossings), _Text(0))
    after = class_of(result.loop)
    report.record(after == word, "class preserved", (word,), _Text(after), _Text(word))
    instance = _describe(qs, (word,))
    instance.update(chords_before=len(loop.chords), chords_after=len(result.loop.chords), moves=result.moves)
    return report, instance


class _Text:
    """Adapter so plain values can sit in a CheckReport witness."""

    def __init__(self, value):
        self.value = value

    def to_json(self):
        return str(self.value)


TRIALS: Dict[str, Callable[[TrialContext], Tuple[CheckReport, Dict]]] = {
    "jacobi": trial_jacobi,
    "cojacobi": trial_cojacobi,
    "coboundary": trial_coboundary,
    "bialgebra": trial_bialgebra,
    "lemma22": trial_lemma22,
    "omega-indep": trial_omega_independence,
    "moves": trial_moves,
    "simple": trial_simple,
    "associator": trial_associator,
    "recover-omega": trial_recover_omega,
    "core-reduction": trial_core_reduction,
}


def run_trial(theorem: str, seed: int, index: int, ring: Ring = INTEGERS,
              flip_gate_sign: bool = False) -> TrialResult:
    ctx = TrialContext(np.random.default_rng([seed, index]), seed + index, ring, flip_gate_sign)
    try:
        report, instance = TRIALS[theorem](ctx)
    except QuasiGateError as exc:
        logger.warning("[VERIFY] %s trial %d raised %s", theorem, index, exc)
        return TrialResult(index, False, 0, witness={"error": f"{type(exc).__name__}: {exc}"})
    logger.debug("[VERIFY] %s trial %d: %s (%d checks)", theorem, index, report.passed, report.checked)
    return TrialResult(index, report.passed, report.checked, instance, report.witness)


def verify(theorem: str, seed: Optional[int] = None, trials: Optional[int] = None, ring: Ring = INTEGERS,
           flip_gate_sign: bool = False) -> VerifyReport:
    if theorem not in TRIALS:
        raise InputError(f"unknown theorem {theorem!r}; expected one of {', '.join(THEOREMS)}")
    seed = config.SEED if seed is None else seed
    trials = config.TRIALS if trials is None else trials
    report = VerifyReport(theorem, seed, trials, flip_gate_sign)
    for index in range(trials):
        report.results.append(run_trial(theorem, seed, index, ring, flip_gate_sign))
    report.results.sort(key=lambda r: r.index)
    logger.info("[VERIFY] %s: %d/%d trials passed", theorem, trials - len(report.failed), trials)
    return report
