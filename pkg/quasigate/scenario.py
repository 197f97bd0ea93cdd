"""
Loaded scenarios and the operations the CLI and the HTTP routes expose.

A Scenario is a validated surface with named, jointly generic loops, a
coefficient ring, a gate orientation and a seed. `evaluate` dispatches one
named operation on loop names or word texts and returns a formal sum.
"""
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple, Union

from pydantic import ValidationError

from . import config
from .core.algebra import FormalSum, permute_P
from .core.errors import InputError, QuasiGateError
from .core.loops import (
    ClassTable,
    CoordinateAllocator,
    GenericLoop,
    check_family,
    class_of,
    validate_loop,
)
from .core.moves import SimplifyResult, make_simple
from .core.quasi_lie import coboundary, cojacobiator, jacobiator
from .core.rings import Ring, parse_ring
from .core.string_ops import (
    LoopAlgebra,
    bracket_omega,
    gate_gamma,
    gate_mu,
    gate_zeta,
    nu_omega,
    total_gamma,
    total_mu,
    zeta_loops,
)
from .core.surface import GateOrientation, QuasiSurface
from .core.words import CyclicWord
from .models import LoopModel, ScenarioModel

logger = logging.getLogger(__name__)

# bad input rather than a failed identity
INPUT_ERRORS = (QuasiGateError, ValidationError)

OPERATIONS = (
    "bracket-omega", "bracket", "mu", "gamma", "nu-omega", "nu",
    "zeta", "jacobiator", "cojacobiator", "coboundary",
)

ARITY = {
    "bracket-omega": 2, "bracket": 2, "gamma": 1, "nu-omega": 1, "nu": 1,
    "zeta": 2, "jacobiator": 3, "cojacobiator": 1, "coboundary": 2,
}


@dataclass
class Scenario:
    surface: QuasiSurface
    loops: Dict[str, GenericLoop] = field(default_factory=dict)
    ring: Ring = field(default_factory=lambda: parse_ring("Z"))
    omega: Optional[GateOrientation] = None
    seed: int = config.SEED

    def __post_init__(self):
        if self.omega is None:
            self.omega = GateOrientation.constant(self.surface)

    # --- loading --------------------------------------------------------
    @classmethod
    def from_model(cls, model: ScenarioModel, ring: Optional[str] = None, omega: Optional[str] = None,
                   seed: Optional[int] = None) -> "Scenario":
        """Validate the surface, every loop and the family; flags override file values."""
        surface = model.surface.to_core().require_valid()
        loops = {name: validate_loop(lm.to_core(), surface) for name, lm in model.loops.items()}
        check_family(list(loops.values()))
        seed = seed if seed is not None else model.seed if model.seed is not None else config.SEED
        scenario = cls(
            surface=surface,
            loops=loops,
            ring=parse_ring(ring or model.ring),
            omega=GateOrientation.from_bits(surface, omega if omega is not None else model.omega),
            seed=seed,
        )
        logger.debug("[SCENARIO] %d gates, loops %s", len(surface.gates), sorted(loops))
        return scenario

    @classmethod
    def load(cls, path: Union[str, Path], **overrides) -> "Scenario":
        return cls.from_model(read_model(path), **overrides)

    # --- lookups --------------------------------------------------------
    def loop(self, name: str) -> GenericLoop:
        try:
            return self.loops[name]
        except KeyError:
            raise InputError(f"no loop named {name!r}; scenario has {sorted(self.loops)}") from None

    def word(self, ref: str) -> CyclicWord:
        """A loop name from the scenario, or else a word text such as 'g1.g2^-1'."""
        if ref in self.loops:
            return class_of(self.loops[ref])
        return CyclicWord.parse(ref)

    def algebra(self) -> LoopAlgebra:
        table = ClassTable(self.surface, seed=self.seed)
        for name in sorted(self.loops):
            table.register(self.loops[name])
        return LoopAlgebra(self.surface, self.ring, self.omega, table)

    def loops_for(self, refs: Sequence[str], table: ClassTable) -> Tuple[GenericLoop, ...]:
        """The scenario's own loops when refs name distinct loops, else fresh representatives."""
        if all(ref in self.loops for ref in refs) and len(set(refs)) == len(refs):
            return tuple(self.loops[ref] for ref in refs)
        return table.fresh_family([self.word(ref) for ref in refs])

    # --- commands -------------------------------------------------------
    def class_of(self, name: str) -> CyclicWord:
        return class_of(self.loop(name))

    def simplify(self, name: str) -> SimplifyResult:
        alloc = CoordinateAllocator(self.surface, seed=self.seed)
        alloc.reserve(self.loops.values())
        return make_simple(self.loop(name), alloc)

    def evaluate(self, op: str, refs: Sequence[str], m: Optional[int] = None,
                 gate: Optional[str] = None) -> FormalSum:
        if op not in OPERATIONS:
            raise InputError(f"unknown operation {op!r}; expected one of {', '.join(OPERATIONS)}")
        expected = ARITY.get(op)
        if expected is not None and len(refs) != expected:
            raise InputError(f"{op} takes {expected} arguments, got {len(refs)}")
        if op == "mu" and (not refs or (m is not None and m != len(refs))):
            raise InputError(f"mu takes m >= 1 arguments, got {len(refs)} with m={m}")
        if gate is not None:
            self.surface.gate(gate)
        algebra = self.algebra()
        qs, ring, omega = self.surface, self.ring, self.omega
        words = [self.word(ref) for ref in refs]
        logger.info("[OPS] %s on %s", op, [str(w) for w in words])

        if op in ("jacobiator", "cojacobiator", "coboundary"):
            if op == "jacobiator":
                return jacobiator(algebra.bracket).on_basis(*words)
            if op == "cojacobiator":
                return cojacobiator(algebra.nu).on_basis(words[0])
            return coboundary(algebra.bracket, algebra.nu).on_basis(*words)

        loops = self.loops_for(refs, algebra.table)
        if op == "bracket-omega":
            return bracket_omega(loops[0], loops[1], omega, ring)
        if op == "bracket":
            return bracket_omega(loops[0], loops[1], omega, ring) - bracket_omega(loops[1], loops[0], omega, ring)
        if op == "mu":
            return gate_mu(gate, loops, ring) if gate else total_mu(loops, qs, ring)
        if op == "gamma":
            m = m or 2
            return gate_gamma(gate, m, loops[0], ring) if gate else total_gamma(m, loops[0], qs, ring)
        if op == "nu-omega":
            return nu_omega(loops[0], omega, ring)
        if op == "nu":
            value = nu_omega(loops[0], omega, ring)
            return value - permute_P(value)
        return gate_zeta(gate, loops[0], loops[1], ring) if gate else zeta_loops(loops[0], loops[1], qs, ring)


def read_model(path: Union[str, Path]) -> ScenarioModel:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read scenario {path}: {exc}") from exc
    return ScenarioModel.model_validate(raw)


def loop_json(loop: GenericLoop) -> Dict[str, Any]:
    return LoopModel.from_core(loop).dump()
