"""
Words in the free group pi_1(Y + star).

Letters are (name, power) pairs with power ±1. A CyclicWord is a conjugacy
class: the cyclically reduced word stored as its lexicographically minimal
rotation, so two classes are equal iff their letter tuples are equal.
"""
from typing import Iterable, List, NamedTuple, Sequence, Tuple

from .errors import InputError


class Letter(NamedTuple):
    name: str
    power: int

    def inverse(self) -> "Letter":
        return Letter(self.name, -self.power)

    def __str__(self):
        return self.name if self.power == 1 else f"{self.name}^-1"


Word = Tuple[Letter, ...]


def star_letter_name(gate_id: str) -> str:
    """G1 -> g1; ids without a leading G get a g prefix."""
    gate_id = str(gate_id)
    if len(gate_id) > 1 and gate_id[0] in "Gg":
        return "g" + gate_id[1:]
    return "g" + gate_id


def star_letter(gate_id: str, power: int = 1) -> Letter:
    return Letter(star_letter_name(gate_id), power)


def parse_letter(text: str) -> Letter:
    text = text.strip()
    if text.endswith("^-1"):
        name, power = text[:-3], -1
    elif text.endswith("^1"):
        name, power = text[:-2], 1
    else:
        name, power = text, 1
    if not name or "^" in name or "." in name:
        raise InputError(f"bad letter {text!r}")
    return Letter(name, power)


def parse_word(text: str) -> Word:
    """'g1.g2^-1.y1^-1' -> letters; '1' or '' is the empty word."""
    text = text.strip()
    if text in ("", "1", "e"):
        return ()
    return tuple(parse_letter(part) for part in text.split("."))


def format_word(word: Sequence[Letter]) -> str:
    return ".".join(str(letter) for letter in word) if word else "1"


def free_reduce(letters: Iterable[Letter]) -> Word:
    stack: List[Letter] = []
    for letter in letters:
        if stack and stack[-1].name == letter.name and stack[-1].power == -letter.power:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def cyclic_reduce(letters: Iterable[Letter]) -> Word:
    word = free_reduce(letters)
    start, end = 0, len(word)
    while end - start >= 2 and word[start] == word[end - 1].inverse():
        start += 1
        end -= 1
    return word[start:end]


def minimal_rotation(word: Word) -> Word:
    if not word:
        return word
    return min(word[i:] + word[:i] for i in range(len(word)))


def invert(word: Sequence[Letter]) -> Word:
    return tuple(letter.inverse() for letter in reversed(word))


class CyclicWord:
    """Canonical free homotopy class; the empty word is the trivial class e."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[Letter] = ()):
        canonical = minimal_rotation(cyclic_reduce(letters))
        object.__setattr__(self, "letters", canonical)
        object.__setattr__(self, "_hash", hash(canonical))

    def __setattr__(self, name, value):
        raise AttributeError("CyclicWord is immutable")

    @classmethod
    def parse(cls, text: str) -> "CyclicWord":
        return cls(parse_word(text))

    @property
    def is_trivial(self) -> bool:
        return not self.letters

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def inverse(self) -> "CyclicWord":
        return CyclicWord(invert(self.letters))

    def power(self, n: int) -> "CyclicWord":
        return CyclicWord(self.letters * n) if n >= 0 else self.inverse().power(-n)

    def __eq__(self, other):
        return isinstance(other, CyclicWord) and self.letters == other.letters

    def __lt__(self, other):
        return (len(self.letters), self.letters) < (len(other.letters), other.letters)

    def __hash__(self):
        return self._hash

    def __str__(self):
        return format_word(self.letters)

    def __repr__(self):
        return f"CyclicWord({format_word(self.letters)!r})"

    def to_json(self) -> List[str]:
        return [str(letter) for letter in self.letters]


EMPTY = CyclicWord()
