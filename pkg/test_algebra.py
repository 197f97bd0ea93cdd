from fractions import Fraction

import pytest

from quasigate.core.algebra import (
    BiEndomorphism,
    ModuleElement,
    Tensor,
    antisym_E,
    pbar,
    permute_P,
    rotate_Q,
    rotate_Q3,
    swap_outer,
    tensor,
)
from quasigate.core.errors import InputError
from quasigate.core.rings import INTEGERS, RATIONALS, modular, parse_ring


def test_parse_ring():
    assert parse_ring("Z") is INTEGERS
    assert parse_ring("Q") is RATIONALS
    assert parse_ring("Zn:5").name == "Zn:5"
    assert parse_ring("Z/7").name == "Zn:7"
    with pytest.raises(InputError):
        parse_ring("R")
    with pytest.raises(InputError):
        modular(1)


def test_half_availability():
    assert RATIONALS.has_half and RATIONALS.half(Fraction(1)) == Fraction(1, 2)
    assert not INTEGERS.has_half
    assert not modular(4).has_half
    z5 = modular(5)
    assert z5.mul(z5.half(1), 2) == 1


def test_zero_terms_are_never_stored():
    x = ModuleElement([("a", 2), ("b", -1), ("a", -2)])
    assert list(x.keys()) == ["b"]
    assert (x + (-x)).is_zero()
    assert x - x == ModuleElement.zero()


def test_modular_coefficients_wrap():
    z3 = modular(3)
    x = ModuleElement([("a", 2)], z3) + ModuleElement([("a", 1)], z3)
    assert x.is_zero()
    assert ModuleElement([("b", 7)], z3).coefficient("b") == 1


def test_scale_and_serialization():
    x = ModuleElement([("b", 1), ("a", 3)])
    assert x.scale(2).coefficient("a") == 6
    assert x.scale(0).is_zero()
    assert x.to_json() == {"a": "3", "b": "1"}
    assert x.dumps() == '{"a": "3", "b": "1"}'


def test_tensor_product_and_key_text():
    t = tensor(ModuleElement([("x", 2)]), ModuleElement([("y", 1), ("z", -1)]))
    assert t.degree == 2
    assert t.to_json() == {"x ⊗ y": "2", "x ⊗ z": "-2"}


def test_permutation_identities():
    t = Tensor([(("x", "y"), 1), (("y", "z"), 3)])
    assert permute_P(permute_P(t)) == t
    assert pbar(permute_P(t)) == -pbar(t)
    assert permute_P(pbar(t)) == -pbar(t)


def test_cyclic_rotation_has_order_three():
    t = Tensor([(("x", "y", "z"), 1), (("x", "x", "y"), -2)], degree=3)
    assert rotate_Q3(rotate_Q3(rotate_Q3(t))) == t
    assert rotate_Q3(Tensor.basis(("x", "y", "z"))) == Tensor.basis(("y", "z", "x"))
    with pytest.raises(InputError):
        rotate_Q3(Tensor.basis(("x", "y")))
    assert rotate_Q(Tensor.basis(("a", "b", "c", "d"))) == Tensor.basis(("b", "c", "d", "a"))


def test_antisymmetrizer_reverses_outer_factors():
    t = Tensor.basis(("x", "y", "z"))
    assert antisym_E(t) == Tensor([(("x", "y", "z"), 1), (("z", "y", "x"), -1)], degree=3)
    assert antisym_E(Tensor.basis(("x", "y", "x"))).is_zero()
    assert swap_outer(swap_outer(t)) == t


def test_bi_endomorphism_algebra():
    swap = BiEndomorphism.swap()
    ident = BiEndomorphism.identity()
    t = Tensor([(("x", "y"), 2)])
    assert swap.compose(swap)(t) == t
    assert (ident - swap)(t) == pbar(t)
    assert (ident + swap).scale(3)(t) == Tensor([(("x", "y"), 6), (("y", "x"), 6)])
    assert (-ident)(t) == -t


def test_bi_endomorphism_from_matrix():
    zeta = BiEndomorphism.from_matrix({("x", "y"): Tensor.basis(("y", "y"))})
    assert zeta(Tensor([(("x", "y"), 3), (("y", "x"), 1)])) == Tensor([(("y", "y"), 3)])
