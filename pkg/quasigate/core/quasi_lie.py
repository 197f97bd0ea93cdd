"""
Quasi-Lie algebra, coalgebra and bialgebra structures on a free module.

Brackets and cobrackets are given on basis keys and extended (multi)linearly.
Values on basis keys are memoized; the memo tables only ever grow and every
entry is a deterministic function of its key.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import (
    BiEndomorphism,
    ModuleElement,
    Tensor,
    antisym_E,
    extend_linearly,
    pbar,
    permute_P,
    rotate_Q,
    tensor,
)
from .errors import InputError
from .rings import INTEGERS, Ring

logger = logging.getLogger(__name__)


class Bracket:
    """An m-bracket M^m -> M."""

    arity = 0

    def __init__(self, on_basis: Callable[..., ModuleElement], ring: Ring = INTEGERS, name: str = ""):
        self.ring = ring
        self.name = name
        self._on_basis = on_basis
        self._memo: Dict[Tuple, ModuleElement] = {}

    def on_basis(self, *keys) -> ModuleElement:
        cached = self._memo.get(keys)
        if cached is None:
            cached = self._on_basis(*keys)
            self._memo[keys] = cached
        return cached

    def __call__(self, *elements: ModuleElement) -> ModuleElement:
        if len(elements) != self.arity:
            raise TypeError(f"{self.name or type(self).__name__} takes {self.arity} arguments")
        ring = self.ring
        acc: Dict[Hashable, Any] = {}
        zero = ModuleElement.zero(ring)
        for combo in itertools.product(*(e.items() for e in elements)):
            coeff = ring.one
            for _, c in combo:
                coeff = ring.mul(coeff, c)
            image = self.on_basis(*(k for k, _ in combo))
            for key, value in image.items():
                zero._accumulate(acc, key, ring.mul(coeff, value))
        return zero._like(acc)

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r})"


class Bracket2(Bracket):
    arity = 2


class Bracket3(Bracket):
    arity = 3


class Cobracket:
    """A linear map M -> M^{⊗degree}."""

    def __init__(self, on_basis: Callable[[Hashable], Tensor], degree: int = 2, ring: Ring = INTEGERS, name: str = ""):
        self.degree = degree
        self.ring = ring
        self.name = name
        self._on_basis = on_basis
        self._memo: Dict[Hashable, Tensor] = {}

    def on_basis(self, key) -> Tensor:
        cached = self._memo.get(key)
        if cached is None:
            cached = self._on_basis(key)
            self._memo[key] = cached
        return cached

    def __call__(self, x: ModuleElement) -> Tensor:
        return extend_linearly(x, self.on_basis, Tensor.zero(self.degree, self.ring))


def zero_bracket(arity: int, ring: Ring = INTEGERS) -> Bracket:
    cls = Bracket2 if arity == 2 else Bracket3
    return cls(lambda *keys: ModuleElement.zero(ring), ring, name="zero")


def zero_cobracket(degree: int, ring: Ring = INTEGERS) -> Cobracket:
    return Cobracket(lambda key: Tensor.zero(degree, ring), degree, ring, name="zero")


def _basis(key, ring):
    return ModuleElement.basis(key, ring)


# --- derived operators ----------------------------------------------------

def transpose(b: Bracket2) -> Bracket2:
    return Bracket2(lambda x, y: b.on_basis(y, x), b.ring, name=f"{b.name}^t")


def jacobiator(b: Bracket2) -> Bracket3:
    """J_b(x,y,z) = b(b(x,y),z) + b(b(y,z),x) + b(b(z,x),y)."""
    ring = b.ring

    def on_basis(x, y, z):
        return (
            b(b.on_basis(x, y), _basis(z, ring))
            + b(b.on_basis(y, z), _basis(x, ring))
            + b(b.on_basis(z, x), _basis(y, ring))
        )

    return Bracket3(on_basis, ring, name=f"J[{b.name}]")


def pair_from_bilinear(dot: Bracket2) -> Tuple[Bracket2, Bracket3]:
    """Commutator of `dot` together with J_dot + J_{dot^t}."""
    ring = dot.ring
    j_dot = jacobiator(dot)
    j_dot_t = jacobiator(transpose(dot))
    skew = Bracket2(lambda x, y: dot.on_basis(x, y) - dot.on_basis(y, x), ring, name="commutator")
    ternary = Bracket3(lambda x, y, z: j_dot.on_basis(x, y, z) + j_dot_t.on_basis(x, y, z), ring, name="J+Jt")
    return skew, ternary


def associator_pair(dot: Bracket2) -> Tuple[Bracket2, Bracket3]:
    """Commutator together with the cyclic sum of associators of `dot`."""
    ring = dot.ring

    def associator(x, y, z):
        return dot(dot.on_basis(x, y), _basis(z, ring)) - dot(_basis(x, ring), dot.on_basis(y, z))

    skew = Bracket2(lambda x, y: dot.on_basis(x, y) - dot.on_basis(y, x), ring, name="commutator")
    ternary = Bracket3(
        lambda x, y, z: associator(x, y, z) + associator(y, z, x) + associator(z, x, y),
        ring,
        name="cyclic associator",
    )
    return skew, ternary


def symmetrize(b2: Bracket2, b3: Bracket3) -> Bracket3:
    """s(x,y,z) = [x,y,z] + [z,y,x]; fully symmetric for a quasi-Lie pair."""
    return Bracket3(lambda x, y, z: b3.on_basis(x, y, z) + b3.on_basis(z, y, x), b3.ring, name="s")


def recover_ternary(b2: Bracket2, s: Bracket3) -> Bracket3:
    """Inverse of `symmetrize`: [x,y,z] = (s + J)/2. Needs 1/2 in the ring."""
    ring = s.ring
    if not ring.has_half:
        raise InputError(f"recovering the 3-bracket needs 1/2 in the ring, {ring.name} has none")
    j = jacobiator(b2)

    def on_basis(x, y, z):
        total = s.on_basis(x, y, z) + j.on_basis(x, y, z)
        return ModuleElement([(k, ring.half(c)) for k, c in total.items()], ring)

    return Bracket3(on_basis, ring, name="recovered")


def is_fully_symmetric(u: Bracket3, triples: Iterable[Tuple]) -> bool:
    for triple in triples:
        value = u.on_basis(*triple)
        if any(u.on_basis(*other) != value for other in itertools.permutations(triple)):
            return False
    return True


def subtract_symmetric(b3: Bracket3, u: Bracket3) -> Bracket3:
    """[x,y,z] - u(x,y,z). A quasi-Lie pair stays one when u is fully symmetric."""
    return Bracket3(lambda x, y, z: b3.on_basis(x, y, z) - u.on_basis(x, y, z), b3.ring,
                    name=f"{b3.name}-{u.name}")


def transpose_symmetric_part(dot: Bracket2) -> Bracket3:
    """u(x,y,z) = J_{dot^t}(x,y,z) + J_{dot^t}(z,y,x), a fully symmetric 3-bracket."""
    j = jacobiator(transpose(dot))
    return Bracket3(lambda x, y, z: j.on_basis(x, y, z) + j.on_basis(z, y, x), dot.ring, name="u")


def iterate_left(nu: Cobracket) -> Cobracket:
    """nu^2 = (nu ⊗ id) ∘ nu."""
    ring = nu.ring

    def on_basis(x):
        acc = Tensor.zero(3, ring)
        for (u, v), c in nu.on_basis(x).items():
            acc = acc + tensor(nu.on_basis(u), _basis(v, ring)).scale(c)
        return acc

    return Cobracket(on_basis, 3, ring, name=f"{nu.name}^2")


def cojacobiator(nu: Cobracket) -> Cobracket:
    """j_nu = (I + Q + Q^2) ∘ nu^2."""
    square = iterate_left(nu)

    def on_basis(x):
        t = square.on_basis(x)
        once = rotate_Q(t)
        return t + once + rotate_Q(once)

    return Cobracket(on_basis, 3, nu.ring, name=f"j[{nu.name}]")


def adjoint_action(b: Bracket2, z, t: Tensor) -> Tensor:
    """ad_z(x⊗y) = b(z,x)⊗y + x⊗b(z,y), extended linearly in t."""
    ring = b.ring
    acc = Tensor.zero(2, ring)
    for (x, y), c in t.items():
        acc = acc + tensor(b.on_basis(z, x), _basis(y, ring)).scale(c)
        acc = acc + tensor(_basis(x, ring), b.on_basis(z, y)).scale(c)
    return acc


def coboundary(b: Bracket2, nu: Cobracket) -> BiEndomorphism:
    """∂nu(x⊗y) = nu(b(x,y)) - ad_x(nu(y)) + ad_y(nu(x))."""

    def on_pair(x, y):
        return (
            nu(b.on_basis(x, y))
            - adjoint_action(b, x, nu.on_basis(y))
            + adjoint_action(b, y, nu.on_basis(x))
        )

    return BiEndomorphism(on_pair, b.ring)


def delta(zeta: BiEndomorphism) -> BiEndomorphism:
    """δ(ζ) = P̄ ∘ ζ ∘ P̄."""
    return BiEndomorphism(lambda x, y: pbar(zeta.on_basis(x, y) - zeta.on_basis(y, x)), zeta.ring)


def equivariantize(zeta: BiEndomorphism) -> BiEndomorphism:
    """ζ^eq = ζ + PζP."""
    return BiEndomorphism(lambda x, y: zeta.on_basis(x, y) + permute_P(zeta.on_basis(y, x)), zeta.ring)


def is_skew(zeta: BiEndomorphism, pairs: Iterable[Tuple]) -> bool:
    """P∘ζ = ζ∘P = -ζ on the sampled generator pairs."""
    for x, y in pairs:
        image = zeta.on_basis(x, y)
        if permute_P(image) != -image or zeta.on_basis(y, x) != -image:
            return False
    return True


def is_equivariant(zeta: BiEndomorphism, pairs: Iterable[Tuple]) -> bool:
    """P∘ζ = ζ∘P on the sampled generator pairs."""
    return all(permute_P(zeta.on_basis(x, y)) == zeta.on_basis(y, x) for x, y in pairs)


# --- checkers -------------------------------------------------------------

@dataclass
class CheckReport:
    name: str
    passed: bool = True
    checked: int = 0
    failures: int = 0
    witness: Optional[Dict[str, Any]] = None
    parts: List["CheckReport"] = field(default_factory=list)

    def record(self, ok: bool, prop: str, inputs: Sequence, left, right) -> bool:
        self.checked += 1
        if not ok:
            self.failures += 1
            self.passed = False
            if self.witness is None:
                self.witness = {
                    "property": prop,
                    "inputs": [str(i) for i in inputs],
                    "left": left.to_json(),
                    "right": right.to_json(),
                }
        return ok

    def absorb(self, other: "CheckReport") -> None:
        self.parts.append(other)
        self.checked += other.checked
        self.failures += other.failures
        if not other.passed:
            self.passed = False
            if self.witness is None:
                self.witness = dict(other.witness or {}, check=other.name)

    def to_json(self) -> Dict[str, Any]:
        out = {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "failures": self.failures,
            "witness": self.witness,
        }
        if self.parts:
            out["parts"] = [p.to_json() for p in self.parts]
        return out


def check_quasi_lie_algebra(b2: Bracket2, b3: Bracket3, sample: Iterable[Tuple]) -> CheckReport:
    report = CheckReport("quasi-Lie algebra")
    j = jacobiator(b2)
    for x, y, z in sample:
        forward, backward = b2.on_basis(x, y), b2.on_basis(y, x)
        report.record(forward == -backward, "skew", (x, y), forward, -backward)
        rolled = b3.on_basis(y, z, x)
        report.record(b3.on_basis(x, y, z) == rolled, "cyclic", (x, y, z), b3.on_basis(x, y, z), rolled)
        lhs = j.on_basis(x, y, z)
        rhs = b3.on_basis(x, y, z) - b3.on_basis(z, y, x)
        report.record(lhs == rhs, "jacobiator", (x, y, z), lhs, rhs)
    logger.debug("[QUASI-LIE] algebra check %s after %d comparisons", report.passed, report.checked)
    return report


def check_quasi_lie_coalgebra(nu: Cobracket, gamma: Cobracket, sample: Iterable[Hashable]) -> CheckReport:
    report = CheckReport("quasi-Lie coalgebra")
    j = cojacobiator(nu)
    for x in sample:
        image = nu.on_basis(x)
        report.record(permute_P(image) == -image, "skew", (x,), permute_P(image), -image)
        g = gamma.on_basis(x)
        report.record(rotate_Q(g) == g, "cyclic", (x,), rotate_Q(g), g)
        lhs, rhs = j.on_basis(x), antisym_E(g)
        report.record(lhs == rhs, "cojacobiator", (x,), lhs, rhs)
    logger.debug("[QUASI-LIE] coalgebra check %s after %d comparisons", report.passed, report.checked)
    return report


def check_quasi_lie_bialgebra(
    b2: Bracket2,
    b3: Bracket3,
    nu: Cobracket,
    gamma: Cobracket,
    zeta: BiEndomorphism,
    sample: Sequence[Hashable],
    triples: Optional[Iterable[Tuple]] = None,
    pairs: Optional[Iterable[Tuple]] = None,
) -> CheckReport:
    """Both one-sided checks plus Pζ = ζP and ∂ν = δ(ζ) on sampled pairs."""
    keys = list(sample)
    if triples is None:
        triples = itertools.product(keys, repeat=3)
    if pairs is None:
        pairs = itertools.product(keys, repeat=2)

    report = CheckReport("quasi-Lie bialgebra")
    report.absorb(check_quasi_lie_algebra(b2, b3, triples))
    report.absorb(check_quasi_lie_coalgebra(nu, gamma, keys))

    compat = CheckReport("coboundary")
    boundary = coboundary(b2, nu)
    skewed = delta(zeta)
    for x, y in pairs:
        lhs = permute_P(zeta.on_basis(x, y))
        rhs = zeta.on_basis(y, x)
        compat.record(lhs == rhs, "equivariant", (x, y), lhs, rhs)
        lhs, rhs = boundary.on_basis(x, y), skewed.on_basis(x, y)
        compat.record(lhs == rhs, "coboundary", (x, y), lhs, rhs)
    report.absorb(compat)
    return report


# --- finite free modules for the abstract tests -------------------------

def basis_keys(rank: int) -> List[str]:
    return [f"e{i}" for i in range(1, rank + 1)]


def bilinear_from_constants(constants, ring: Ring = INTEGERS) -> Bracket2:
    """Bracket with x_i • x_j = Σ_k constants[i][j][k] x_k."""
    keys = basis_keys(len(constants))
    index = {k: i for i, k in enumerate(keys)}

    def on_basis(x, y):
        row = constants[index[x]][index[y]]
        return ModuleElement(((keys[k], int(c)) for k, c in enumerate(row)), ring)

    return Bracket2(on_basis, ring, name="dot")


def random_bilinear(rng: np.random.Generator, rank: int, low: int = -3, high: int = 3, ring: Ring = INTEGERS) -> Bracket2:
    constants = rng.integers(low, high + 1, size=(rank, rank, rank))
    return bilinear_from_constants(constants.tolist(), ring)
