"""Free reduction, commutator powers, abelianization and the single-commutator test."""

from __future__ import annotations

import logging
import string
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from typing import Any

from earring_workbench.errors import DomainError, WordError

logger = logging.getLogger(__name__)

Letter = tuple[int, int]

_LOWER = string.ascii_lowercase


def _check_letter(letter: Letter) -> Letter:
    gen, sign = letter
    if isinstance(gen, bool) or not isinstance(gen, int) or gen < 1 or sign not in (1, -1):
        raise WordError(f"invalid letter {letter!r}")
    return gen, sign


@dataclass(frozen=True)
class Word:
    """Freely reduced word; generator 1 prints as ``a``, its inverse as ``A``."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        letters = tuple(_check_letter(letter) for letter in self.letters)
        for (g, e), (h, f) in zip(letters, letters[1:]):
            if g == h and e == -f:
                raise WordError("word is not freely reduced; build it with reduce()")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def parse(cls, text: str) -> Word:
        """Parse ``"abAB"``; ``""`` and ``"1"`` are the identity."""
        text = text.strip()
        if text in ("", "1"):
            return cls()
        letters: list[Letter] = []
        for char in text:
            if char in _LOWER:
                letters.append((_LOWER.index(char) + 1, 1))
            elif char.lower() in _LOWER:
                letters.append((_LOWER.index(char.lower()) + 1, -1))
            else:
                raise WordError(f"unexpected character {char!r} in word literal {text!r}")
        return reduce(letters)

    @classmethod
    def generator(cls, index: int) -> Word:
        return cls(((index, 1),))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __mul__(self, other: Word) -> Word:
        return reduce(self.letters + other.letters)

    def __pow__(self, n: int) -> Word:
        if n < 0:
            return self.inverse() ** (-n)
        return reduce(self.letters * n)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return "".join(
            _LOWER[g - 1] if e == 1 else _LOWER[g - 1].upper() for g, e in self.letters
        )

    def inverse(self) -> Word:
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    @property
    def generator_count(self) -> int:
        return max((g for g, _ in self.letters), default=0)


def _invert(letters: tuple[Letter, ...]) -> tuple[Letter, ...]:
    return tuple((g, -e) for g, e in reversed(letters))


def reduce(letters: Iterable[Letter]) -> Word:
    """Freely reduce with a single left-to-right stack pass."""
    stack: list[Letter] = []
    for letter in letters:
        gen, sign = _check_letter(letter)
        if stack and stack[-1] == (gen, -sign):
            stack.pop()
        else:
            stack.append((gen, sign))
    return Word(tuple(stack))


def commutator(x: Word, y: Word) -> Word:
    return x * y * x.inverse() * y.inverse()


def commutator_power(x: Word, y: Word, n: int) -> Word:
    """Reduced form of ``(x y x^-1 y^-1)**n``."""
    if n < 0:
        raise DomainError(f"commutator power needs n >= 0, got {n}")
    return commutator(x, y) ** n


@dataclass(frozen=True)
class AbelianImage:
    exponents: tuple[int, ...]

    def __add__(self, other: AbelianImage) -> AbelianImage:
        size = max(len(self.exponents), len(other.exponents))
        left = self.exponents + (0,) * (size - len(self.exponents))
        right = other.exponents + (0,) * (size - len(other.exponents))
        return AbelianImage(tuple(a + b for a, b in zip(left, right)))

    @property
    def is_zero(self) -> bool:
        return not any(self.exponents)

    def __str__(self) -> str:
        return "(" + ",".join(str(e) for e in self.exponents) + ")"


def abelianize(w: Word, generators: int = 2) -> AbelianImage:
    """Exponent-sum vector; zero exactly on the commutator subgroup."""
    size = max(generators, w.generator_count)
    sums = [0] * size
    for gen, sign in w.letters:
        sums[gen - 1] += sign
    return AbelianImage(tuple(sums))


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Split ``w = g * core * g^-1`` with ``core`` cyclically reduced."""
    letters = w.letters
    lo, hi = 0, len(letters)
    while hi - lo >= 2 and letters[lo] == (letters[hi - 1][0], -letters[hi - 1][1]):
        lo += 1
        hi -= 1
    return Word(letters[:lo]), Word(letters[lo:hi])


def rotations(w: Word) -> list[Word]:
    """Every cyclic rotation of the cyclically reduced core of ``w``."""
    _, core = cyclic_reduce(w)
    letters = core.letters
    return [Word(letters[i:] + letters[:i]) for i in range(len(letters))] or [core]


@dataclass(frozen=True)
class CommutatorWitness:
    """``rotation`` of the cyclic core reads literally as ``X Y Z X^-1 Y^-1 Z^-1``."""

    x_part: Word
    y_part: Word
    z_part: Word
    rotation: int
    x: Word
    y: Word


@dataclass(frozen=True)
class CommutatorSearch:
    word: Word
    is_commutator: bool
    witness: CommutatorWitness | None

    def to_json(self) -> dict[str, Any]:
        witness = None
        if self.witness is not None:
            witness = {
                "A": str(self.witness.x_part),
                "B": str(self.witness.y_part),
                "C": str(self.witness.z_part),
                "rotation": self.witness.rotation,
                "x": str(self.witness.x),
                "y": str(self.witness.y),
            }
        return {"word": str(self.word), "is_commutator": self.is_commutator, "witness": witness}


def is_single_commutator(w: Word) -> CommutatorSearch:
    """Exhaustive search of cyclic decompositions ``A B C A^-1 B^-1 C^-1`` of ``w``."""
    if not w.letters:
        empty = Word()
        return CommutatorSearch(w, True, CommutatorWitness(empty, empty, empty, 0, empty, empty))
    if not abelianize(w).is_zero:
        return CommutatorSearch(w, False, None)
    conjugator, core = cyclic_reduce(w)
    length = len(core)
    if length % 2:
        return CommutatorSearch(w, False, None)
    half = length // 2
    for rotation, rotated_word in enumerate(rotations(core)):
        rotated = rotated_word.letters
        for k in range(half + 1):
            for i in range(half - k, -1, -1):
                j = half - i - k
                xs = rotated[:i]
                ys = rotated[i:i + j]
                zs = rotated[i + j:half]
                if rotated[half:] != _invert(xs) + _invert(ys) + _invert(zs):
                    continue
                h = conjugator * Word(core.letters[:rotation])
                x = h * Word(xs) * Word(ys) * h.inverse()
                y = h * Word(zs) * Word(xs).inverse() * h.inverse()
                logger.debug("%s is a commutator, rotation %d split (%d,%d,%d)", w, rotation,
                             i, j, k)
                return CommutatorSearch(
                    w, True, CommutatorWitness(Word(xs), Word(ys), Word(zs), rotation, x, y)
                )
    return CommutatorSearch(w, False, None)


def commutator_search_report(w: Word | str) -> dict[str, Any]:
    word = Word.parse(w) if isinstance(w, str) else w
    return is_single_commutator(word).to_json()
