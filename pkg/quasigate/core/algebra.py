"""
Formal linear combinations over an exact ring.

ModuleElement is a finite R-linear combination of basis keys (free homotopy
classes in practice, but any hashable key works). Tensor is the same over
ordered tuples of keys. Both keep a canonical sparse form: zero coefficients
are never stored, so equality is plain map equality.
"""
import json
from typing import Any, Callable, Dict, Hashable, Iterable, Iterator, Mapping, Optional, Tuple

from .errors import InputError
from .rings import INTEGERS, Ring


def _sort_key(key) -> Tuple[str, ...]:
    if isinstance(key, tuple):
        return tuple(str(k) for k in key)
    return (str(key),)


def key_text(key) -> str:
    if isinstance(key, tuple):
        return " ⊗ ".join(str(k) for k in key)
    return str(key)


class FormalSum:
    """Sparse map key -> nonzero scalar. Immutable by convention."""

    __slots__ = ("ring", "_terms")

    def __init__(self, terms: Optional[Iterable[Tuple[Hashable, Any]]] = None, ring: Ring = INTEGERS):
        self.ring = ring
        acc: Dict[Hashable, Any] = {}
        if terms is not None:
            if isinstance(terms, Mapping):
                terms = terms.items()
            for key, coeff in terms:
                self._accumulate(acc, key, ring.coerce(coeff))
        self._terms = acc

    def _accumulate(self, acc, key, coeff):
        current = acc.get(key)
        value = coeff if current is None else self.ring.add(current, coeff)
        if self.ring.is_zero(value):
            acc.pop(key, None)
        else:
            acc[key] = value

    def _like(self, terms: Dict[Hashable, Any]):
        """Build a sibling from an already canonical term dict."""
        out = object.__new__(type(self))
        out.ring = self.ring
        out._terms = terms
        return out

    # --- inspection -------------------------------------------------------
    def coefficient(self, key):
        return self._terms.get(key, self.ring.zero)

    def keys(self):
        return self._terms.keys()

    def items(self):
        return self._terms.items()

    def terms(self):
        """Terms sorted by key text; stable across runs."""
        return sorted(self._terms.items(), key=lambda kv: _sort_key(kv[0]))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __iter__(self) -> Iterator:
        return iter(self._terms)

    def __eq__(self, other):
        if not isinstance(other, FormalSum):
            return NotImplemented
        return type(self) is type(other) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # --- arithmetic -------------------------------------------------------
    def __add__(self, other):
        acc = dict(self._terms)
        for key, coeff in other._terms.items():
            self._accumulate(acc, key, coeff)
        return self._like(acc)

    def __neg__(self):
        neg = self.ring.neg
        return self._like({k: neg(c) for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, scalar):
        scalar = self.ring.coerce(scalar)
        if self.ring.is_zero(scalar):
            return self._like({})
        mul = self.ring.mul
        acc = {}
        for key, coeff in self._terms.items():
            value = mul(scalar, coeff)
            if not self.ring.is_zero(value):
                acc[key] = value
        return self._like(acc)

    def __rmul__(self, scalar):
        return self.scale(scalar)

    def map_keys(self, fn: Callable[[Hashable], Hashable]):
        """Linear map sending each key to a single key."""
        acc: Dict[Hashable, Any] = {}
        for key, coeff in self._terms.items():
            self._accumulate(acc, fn(key), coeff)
        return self._like(acc)

    def drop(self, predicate: Callable[[Hashable], bool]):
        return self._like({k: c for k, c in self._terms.items() if not predicate(k)})

    # --- serialization ----------------------------------------------------
    def to_json(self) -> Dict[str, str]:
        return {key_text(k): self.ring.format(c) for k, c in self.terms()}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False)

    def __repr__(self):
        if not self._terms:
            return f"{type(self).__name__}(0)"
        body = " + ".join(f"{self.ring.format(c)}*[{key_text(k)}]" for k, c in self.terms())
        return f"{type(self).__name__}({body})"


class ModuleElement(FormalSum):
    __slots__ = ()

    @classmethod
    def zero(cls, ring: Ring = INTEGERS) -> "ModuleElement":
        return cls(ring=ring)

    @classmethod
    def basis(cls, key, ring: Ring = INTEGERS, coeff=None) -> "ModuleElement":
        return cls([(key, ring.one if coeff is None else coeff)], ring=ring)


class Tensor(FormalSum):
    """Element of M^{⊗degree}; keys are tuples of length `degree`."""

    __slots__ = ("degree",)

    def __init__(self, terms=None, ring: Ring = INTEGERS, degree: int = 2):
        self.degree = degree
        super().__init__(terms, ring)

    def _like(self, terms):
        out = super()._like(terms)
        out.degree = self.degree
        return out

    @classmethod
    def zero(cls, degree: int = 2, ring: Ring = INTEGERS) -> "Tensor":
        return cls(ring=ring, degree=degree)

    @classmethod
    def basis(cls, keys: Tuple, ring: Ring = INTEGERS, coeff=None) -> "Tensor":
        return cls([(tuple(keys), ring.one if coeff is None else coeff)], ring=ring, degree=len(keys))

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.degree == other.degree and self._terms == other._terms

    __hash__ = FormalSum.__hash__


def tensor(*factors: FormalSum) -> Tensor:
    """Tensor product of module elements (or tensors), keys concatenated."""
    ring = factors[0].ring
    degree = sum(getattr(f, "degree", 1) for f in factors)
    acc = [((), ring.one)]
    for factor in factors:
        as_tuple = isinstance(factor, Tensor)
        step = []
        for prefix, coeff in acc:
            for key, value in factor.items():
                step.append((prefix + (key if as_tuple else (key,)), ring.mul(coeff, value)))
        acc = step
    return Tensor(acc, ring=ring, degree=degree)


def extend_linearly(element: FormalSum, on_key: Callable[[Hashable], FormalSum], zero: FormalSum) -> FormalSum:
    """Sum of coeff * on_key(key) over the terms of `element`."""
    ring = element.ring
    result: Dict[Hashable, Any] = {}
    for key, coeff in element.items():
        image = on_key(key)
        for out_key, value in image.items():
            zero._accumulate(result, out_key, ring.mul(coeff, value))
    return zero._like(result)


# --- fixed endomorphisms of tensor powers --------------------------------

def permute_P(t: Tensor) -> Tensor:
    """x⊗y -> y⊗x."""
    return t.map_keys(lambda k: (k[1], k[0]))


def rotate_Q(t: Tensor) -> Tensor:
    """Q_m: first factor moved to the end."""
    return t.map_keys(lambda k: k[1:] + k[:1])


def rotate_Q3(t: Tensor) -> Tensor:
    """x⊗y⊗z -> y⊗z⊗x."""
    if t.degree != 3:
        raise InputError(f"rotate_Q3 expects degree 3, got {t.degree}")
    return rotate_Q(t)


def swap_outer(t: Tensor) -> Tensor:
    return t.map_keys(lambda k: k[::-1])


def antisym_E(t: Tensor) -> Tensor:
    """x⊗y⊗z -> x⊗y⊗z - z⊗y⊗x."""
    return t - swap_outer(t)


def pbar(t: Tensor) -> Tensor:
    """P-bar = id - P."""
    return t - permute_P(t)


class BiEndomorphism:
    """
    Linear endomorphism of M⊗M, given on generator pairs and extended
    linearly. Results on generators are cached (append-only).
    """

    def __init__(self, on_pair: Callable[[Hashable, Hashable], Tensor], ring: Ring = INTEGERS):
        self.ring = ring
        self._on_pair = on_pair
        self._memo: Dict[Tuple, Tensor] = {}

    def on_basis(self, left, right) -> Tensor:
        key = (left, right)
        cached = self._memo.get(key)
        if cached is None:
            cached = self._on_pair(left, right)
            self._memo[key] = cached
        return cached

    def __call__(self, t: Tensor) -> Tensor:
        return extend_linearly(t, lambda k: self.on_basis(k[0], k[1]), Tensor.zero(2, self.ring))

    def compose(self, inner: "BiEndomorphism") -> "BiEndomorphism":
        """self ∘ inner."""
        return BiEndomorphism(lambda x, y: self(inner.on_basis(x, y)), self.ring)

    def __add__(self, other: "BiEndomorphism") -> "BiEndomorphism":
        return BiEndomorphism(lambda x, y: self.on_basis(x, y) + other.on_basis(x, y), self.ring)

    def __neg__(self) -> "BiEndomorphism":
        return BiEndomorphism(lambda x, y: -self.on_basis(x, y), self.ring)

    def __sub__(self, other: "BiEndomorphism") -> "BiEndomorphism":
        return self + (-other)

    def scale(self, scalar) -> "BiEndomorphism":
        return BiEndomorphism(lambda x, y: self.on_basis(x, y).scale(scalar), self.ring)

    def post(self, fn: Callable[[Tensor], Tensor]) -> "BiEndomorphism":
        """fn ∘ self for a fixed linear map fn on tensors."""
        return BiEndomorphism(lambda x, y: fn(self.on_basis(x, y)), self.ring)

    @classmethod
    def identity(cls, ring: Ring = INTEGERS) -> "BiEndomorphism":
        return cls(lambda x, y: Tensor.basis((x, y), ring), ring)

    @classmethod
    def swap(cls, ring: Ring = INTEGERS) -> "BiEndomorphism":
        """The permutation P as a bi-endomorphism."""
        return cls(lambda x, y: Tensor.basis((y, x), ring), ring)

    @classmethod
    def from_matrix(cls, matrix: Mapping[Tuple, Tensor], ring: Ring = INTEGERS) -> "BiEndomorphism":
        """Sparse matrix on an enumerated sub-basis; unlisted generators map to 0."""
        table = dict(matrix)
        return cls(lambda x, y: table.get((x, y), Tensor.zero(2, ring)), ring)
