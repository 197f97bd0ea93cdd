"""
Operations on loops and their linear extensions to the free module M.

Loop-level functions take generic loops and return formal sums of classes.
LoopAlgebra resolves basis classes to freshly allocated, jointly generic
representatives and packages the operations as brackets, cobrackets and a
bi-endomorphism that plug into the quasi-Lie checkers.

Terms that pass through <.>_0 (cobrackets, gate cobrackets, zeta) drop every
tensor with a contractible factor; brackets keep the trivial class.
"""
import itertools
import logging
from typing import Iterable, List, Optional, Sequence, Tuple

from .algebra import BiEndomorphism, ModuleElement, Tensor, permute_P
from .errors import InputError
from .loops import (
    ClassTable,
    Crossing,
    GenericLoop,
    based_word,
    check_family,
    class_of,
    mid_word,
    self_intersections,
    subword,
)
from .quasi_lie import Bracket2, Bracket3, Cobracket, equivariantize
from .rings import INTEGERS, Ring
from .surface import GateOrientation, QuasiSurface, chords_cross, epsilon_gate, precedes
from .words import EMPTY, CyclicWord

logger = logging.getLogger(__name__)


def _gate_sign(omega: GateOrientation, gate: str, flip: bool) -> int:
    sign = epsilon_gate(omega, gate)
    return -sign if flip else sign


def _nontrivial(*words: CyclicWord) -> bool:
    return not any(w.is_trivial for w in words)


# --- brackets --------------------------------------------------------------

def core_bracket(a: GenericLoop, b: GenericLoop, ring: Ring = INTEGERS) -> ModuleElement:
    """Signed disk crossings of a and b, each giving the product of the loops based there."""
    check_family([a, b])
    terms = []
    for i, chord_a in enumerate(a.chords):
        for j, chord_b in enumerate(b.chords):
            sign = chords_cross(chord_a.span, chord_b.span)
            if sign is not None:
                terms.append((CyclicWord(mid_word(a, i) + mid_word(b, j)), sign))
    return ModuleElement(terms, ring)


def bracket_omega(a: GenericLoop, b: GenericLoop, omega: GateOrientation, ring: Ring = INTEGERS,
                  flip_gate_sign: bool = False) -> ModuleElement:
    """Disk crossings of a and b plus the ω-ordered gate chords of the pair."""
    terms = []
    for gate, points in a.crossing_map.items():
        others = b.on_gate(gate)
        if not others:
            continue
        eps = _gate_sign(omega, gate, flip_gate_sign)
        for p in points:
            for q in others:
                if precedes(omega, gate, q.u, p.u):
                    word = CyclicWord(based_word(a, p) + based_word(b, q))
                    terms.append((word, eps * p.sign * q.sign))
    return core_bracket(a, b, ring) + ModuleElement(terms, ring)


def gate_mu(gate: str, loops: Sequence[GenericLoop], ring: Ring = INTEGERS) -> ModuleElement:
    """μ^m_C: products of the loops based at one point of C each."""
    check_family(loops)
    terms = []
    for points in itertools.product(*(loop.on_gate(gate) for loop in loops)):
        sign = 1
        word = ()
        for loop, p in zip(loops, points):
            sign *= p.sign
            word += based_word(loop, p)
        terms.append((CyclicWord(word), sign))
    return ModuleElement(terms, ring)


def total_mu(loops: Sequence[GenericLoop], surface: QuasiSurface, ring: Ring = INTEGERS) -> ModuleElement:
    total = ModuleElement.zero(ring)
    for gate in surface.gate_ids:
        total = total + gate_mu(gate, loops, ring)
    return total


def gate_bracket_sum(a: GenericLoop, b: GenericLoop, omega: GateOrientation, surface: QuasiSurface,
                     ring: Ring = INTEGERS, flip_gate_sign: bool = False) -> ModuleElement:
    """Σ_k ε(ω,k)·μ²_k(a, b)."""
    total = ModuleElement.zero(ring)
    for gate in surface.gate_ids:
        total = total + gate_mu(gate, [a, b], ring).scale(_gate_sign(omega, gate, flip_gate_sign))
    return total


# --- cobrackets ------------------------------------------------------------

def core_cobracket(a: GenericLoop, ring: Ring = INTEGERS) -> Tensor:
    """Skew splittings of a at its disk self-crossings, contractible halves dropped."""
    terms = []
    for crossing in self_intersections(a):
        first, second = crossing.halves
        if _nontrivial(first, second):
            terms.append(((first, second), 1))
            terms.append(((second, first), -1))
    return Tensor(terms, ring, degree=2)


def nu_omega(a: GenericLoop, omega: GateOrientation, ring: Ring = INTEGERS,
             flip_gate_sign: bool = False) -> Tensor:
    """Self-crossing splittings plus ω-ordered pairs of points on one gate."""
    terms = []
    for gate, points in a.crossing_map.items():
        eps = _gate_sign(omega, gate, flip_gate_sign)
        for p1, p2 in itertools.permutations(points, 2):
            if not precedes(omega, gate, p1.u, p2.u):
                continue
            left, right = CyclicWord(subword(a, p2, p1)), CyclicWord(subword(a, p1, p2))
            if _nontrivial(left, right):
                terms.append(((left, right), eps * p1.sign * p2.sign))
    return core_cobracket(a, ring) + Tensor(terms, ring, degree=2)


def m_sequences(points: Iterable[Crossing], m: int) -> List[Tuple[Crossing, ...]]:
    """Ordered m-tuples of distinct points listed in their cyclic order along the loop."""
    ordered = sorted(points, key=lambda c: c.position)
    out = []
    for subset in itertools.combinations(ordered, m):
        for r in range(m):
            out.append(subset[r:] + subset[:r])
    return out


def gate_gamma(gate: str, m: int, a: GenericLoop, ring: Ring = INTEGERS) -> Tensor:
    """γ_{C,m}: cut the loop at m points of C into m loops."""
    terms = []
    for seq in m_sequences(a.on_gate(gate), m):
        sign = 1
        factors = []
        for i, p in enumerate(seq):
            sign *= p.sign
            factors.append(CyclicWord(subword(a, p, seq[(i + 1) % m])))
        if _nontrivial(*factors):
            terms.append((tuple(factors), sign))
    return Tensor(terms, ring, degree=m)


def total_gamma(m: int, a: GenericLoop, surface: QuasiSurface, ring: Ring = INTEGERS) -> Tensor:
    total = Tensor.zero(m, ring)
    for gate in surface.gate_ids:
        total = total + gate_gamma(gate, m, a, ring)
    return total


def gate_cobracket_sum(a: GenericLoop, omega: GateOrientation, surface: QuasiSurface,
                       ring: Ring = INTEGERS, flip_gate_sign: bool = False) -> Tensor:
    """Σ_k ε(ω,k)·γ_{k,2}(a)."""
    total = Tensor.zero(2, ring)
    for gate in surface.gate_ids:
        total = total + gate_gamma(gate, 2, a, ring).scale(_gate_sign(omega, gate, flip_gate_sign))
    return total


# --- bi-endomorphism -------------------------------------------------------

def gate_zeta(gate: str, a: GenericLoop, b: GenericLoop, ring: Ring = INTEGERS) -> Tensor:
    points_a, points_b = a.on_gate(gate), b.on_gate(gate)
    if not points_a or not points_b:
        return Tensor.zero(2, ring)
    check_family([a, b])
    terms = []
    whole_a, whole_b = class_of(a), class_of(b)
    b_dot_c = sum(q.sign for q in points_b)
    if b_dot_c and _nontrivial(whole_a, whole_b):
        terms.append(((whole_a, whole_b), len(points_a) * b_dot_c))
    for p1, p2 in itertools.permutations(points_a, 2):
        left = CyclicWord(subword(a, p1, p2))
        if left.is_trivial:
            continue
        back = subword(a, p2, p1)
        for q in points_b:
            right = CyclicWord(back + based_word(b, q))
            if not right.is_trivial:
                terms.append(((left, right), 2 * p1.sign * p2.sign * q.sign))
    return Tensor(terms, ring, degree=2)


def zeta_loops(a: GenericLoop, b: GenericLoop, surface: QuasiSurface, ring: Ring = INTEGERS) -> Tensor:
    total = Tensor.zero(2, ring)
    for gate in surface.gate_ids:
        total = total + gate_zeta(gate, a, b, ring)
    return total


# --- quotient M / Re ---------------------------------------------------------

def project_quotient(x: ModuleElement) -> ModuleElement:
    return x.drop(lambda key: key == EMPTY)


def project_tensor(t: Tensor) -> Tensor:
    return t.drop(lambda key: EMPTY in key)


# --- linear extension ------------------------------------------------------

class LoopAlgebra:
    """
    The operations of a quasi-surface on its free module of loop classes.
    Every evaluation on basis classes draws fresh representatives from the
    class table, so each evaluated tuple of loops is jointly generic.
    """

    def __init__(self, surface: QuasiSurface, ring: Ring = INTEGERS, omega: Optional[GateOrientation] = None,
                 table: Optional[ClassTable] = None, seed: Optional[int] = None, flip_gate_sign: bool = False):
        self.surface = surface.require_valid()
        self.ring = ring
        self.omega = omega or GateOrientation.constant(surface)
        self.table = table or ClassTable(surface, seed=seed)
        self.flip_gate_sign = flip_gate_sign

        self.bracket = Bracket2(self._bracket_basis, ring, name="[,]_X")
        self.bracket_omega = Bracket2(self._bracket_omega_basis, ring, name="[,]_ω")
        self.mu3 = Bracket3(lambda x, y, z: self._mu_basis((x, y, z)), ring, name="μ³")
        self.nu = Cobracket(self._nu_basis, 2, ring, name="ν_X")
        self.nu_omega = Cobracket(self._nu_omega_basis, 2, ring, name="ν_ω")
        self.gamma3 = Cobracket(lambda x: self._gamma_basis(3, x), 3, ring, name="γ³")
        self.zeta = BiEndomorphism(self._zeta_basis, ring)
        # twice the ω-operations, rebuilt from the skew ones and the gate 2-operations
        self.doubled_bracket_omega = Bracket2(self._doubled_bracket_omega_basis, ring, name="2[,]_ω")
        self.doubled_nu_omega = Cobracket(self._doubled_nu_omega_basis, 2, ring, name="2ν_ω")

    def with_orientation(self, omega: GateOrientation) -> "LoopAlgebra":
        """Same surface, ring and class table under another gate orientation."""
        return LoopAlgebra(self.surface, self.ring, omega, self.table, flip_gate_sign=self.flip_gate_sign)

    def _pair(self, x: CyclicWord, y: CyclicWord) -> Tuple[GenericLoop, GenericLoop]:
        return self.table.fresh_family([x, y])

    def _bracket_omega_basis(self, x: CyclicWord, y: CyclicWord) -> ModuleElement:
        if x.is_trivial or y.is_trivial:
            return ModuleElement.zero(self.ring)
        a, b = self._pair(x, y)
        return bracket_omega(a, b, self.omega, self.ring, self.flip_gate_sign)

    def _bracket_basis(self, x: CyclicWord, y: CyclicWord) -> ModuleElement:
        if x.is_trivial or y.is_trivial:
            return ModuleElement.zero(self.ring)
        a, b = self._pair(x, y)
        return (bracket_omega(a, b, self.omega, self.ring, self.flip_gate_sign)
                - bracket_omega(b, a, self.omega, self.ring, self.flip_gate_sign))

    def _mu_basis(self, words: Tuple[CyclicWord, ...]) -> ModuleElement:
        if any(w.is_trivial for w in words):
            return ModuleElement.zero(self.ring)
        return total_mu(self.table.fresh_family(words), self.surface, self.ring)

    def _nu_omega_basis(self, x: CyclicWord) -> Tensor:
        if x.is_trivial:
            return Tensor.zero(2, self.ring)
        return nu_omega(self.table.representative(x), self.omega, self.ring, self.flip_gate_sign)

    def _nu_basis(self, x: CyclicWord) -> Tensor:
        t = self._nu_omega_basis(x)
        return t - permute_P(t)

    def _gamma_basis(self, m: int, x: CyclicWord) -> Tensor:
        if x.is_trivial:
            return Tensor.zero(m, self.ring)
        return total_gamma(m, self.table.representative(x), self.surface, self.ring)

    def _doubled_bracket_omega_basis(self, x: CyclicWord, y: CyclicWord) -> ModuleElement:
        if x.is_trivial or y.is_trivial:
            return ModuleElement.zero(self.ring)
        a, b = self._pair(x, y)
        gates = gate_bracket_sum(a, b, self.omega, self.surface, self.ring, self.flip_gate_sign)
        return self.bracket.on_basis(x, y) + gates

    def _doubled_nu_omega_basis(self, x: CyclicWord) -> Tensor:
        if x.is_trivial:
            return Tensor.zero(2, self.ring)
        gates = gate_cobracket_sum(self.table.representative(x), self.omega, self.surface, self.ring,
                                   self.flip_gate_sign)
        return self.nu.on_basis(x) + gates

    def _zeta_basis(self, x: CyclicWord, y: CyclicWord) -> Tensor:
        if x.is_trivial or y.is_trivial:
            return Tensor.zero(2, self.ring)
        a, b = self._pair(x, y)
        return zeta_loops(a, b, self.surface, self.ring)

    # general arity, not memoized
    def mu(self, *elements: ModuleElement) -> ModuleElement:
        acc = ModuleElement.zero(self.ring)
        for combo in itertools.product(*(e.items() for e in elements)):
            coeff = self.ring.one
            for _, c in combo:
                coeff = self.ring.mul(coeff, c)
            acc = acc + self._mu_basis(tuple(k for k, _ in combo)).scale(coeff)
        return acc

    def gamma(self, m: int, x: ModuleElement) -> Tensor:
        acc = Tensor.zero(m, self.ring)
        for key, coeff in x.items():
            acc = acc + self._gamma_basis(m, key).scale(coeff)
        return acc

    def element(self, *words) -> ModuleElement:
        """Sum of the given classes (CyclicWord or word text)."""
        keys = [w if isinstance(w, CyclicWord) else CyclicWord.parse(w) for w in words]
        return ModuleElement([(k, 1) for k in keys], self.ring)

    # --- quotient structures over a ring containing 1/2 ---------------------
    def quotient_structures(self):
        """([,]∘, μ∘, ν∘, γ∘, ¼(ζ∘)^eq) on M∘ = M / Re."""
        if not self.ring.has_half:
            raise InputError(f"the quotient bi-endomorphism needs 1/2 in the ring, not {self.ring.name}")
        quarter = self.ring.half(self.ring.half(self.ring.one))
        b2 = Bracket2(lambda x, y: project_quotient(self.bracket.on_basis(x, y)), self.ring, name="[,]∘")
        b3 = Bracket3(lambda x, y, z: project_quotient(self.mu3.on_basis(x, y, z)), self.ring, name="μ∘")
        nu = Cobracket(lambda x: project_tensor(self.nu.on_basis(x)), 2, self.ring, name="ν∘")
        gamma = Cobracket(lambda x: project_tensor(self.gamma3.on_basis(x)), 3, self.ring, name="γ∘")
        zeta = equivariantize(BiEndomorphism(
            lambda x, y: project_tensor(self.zeta.on_basis(x, y)), self.ring,
        )).scale(quarter)
        return b2, b3, nu, gamma, zeta


# free-function forms of the linear extensions

def bracket_X(x: ModuleElement, y: ModuleElement, algebra: LoopAlgebra) -> ModuleElement:
    return algebra.bracket(x, y)


def nu_X(x: ModuleElement, algebra: LoopAlgebra) -> Tensor:
    return algebra.nu(x)


def total_zeta(t: Tensor, algebra: LoopAlgebra) -> Tensor:
    return algebra.zeta(t)
