from __future__ import annotations

from logging import getLogger
from typing import Collection, Iterable, Iterator

from . import AlphabetError
from .constants import Comparison

logger = getLogger(__name__)

Letter = tuple[str, int]

_SEPARATORS = frozenset(" \t\n·*.")


class GeneratorOrdering:
    """Total order on signed letters. Every generator x is immediately followed by x⁻¹"""

    def __init__(self, symbols: Iterable[str]):
        symbols = tuple(symbols)
        if len(set(symbols)) != len(symbols):
            raise AlphabetError(f"duplicate generator names in ordering: {', '.join(symbols)}")
        for name in symbols:
            _check_name(name)
        self.symbols = symbols
        self._rank = {name: index for index, name in enumerate(symbols)}

    @classmethod
    def from_order(cls, tokens: Iterable[str]) -> "GeneratorOrdering":
        """Build from the file syntax `a,a',b,b'`: each inverse must follow its generator"""
        tokens = [token.strip() for token in tokens if token.strip()]
        if len(tokens) % 2:
            raise AlphabetError(f"order lists every generator and its inverse: {','.join(tokens)}")
        symbols = []
        for name, inverse in zip(tokens[::2], tokens[1::2]):
            if name.startswith("[") and name.endswith("]"):
                name = name[1:-1]
            if inverse not in (f"{name}'", f"[{name}]'"):
                raise AlphabetError(f"inverse of {name} must follow it directly, got {inverse}")
            symbols.append(name)
        return cls(symbols)

    def __contains__(self, name: object) -> bool:
        return name in self._rank

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GeneratorOrdering) and self.symbols == other.symbols

    def __hash__(self) -> int:
        return hash(self.symbols)

    def __repr__(self) -> str:
        return "<GeneratorOrdering {}>".format(",".join(self.order_tokens()))

    def letters(self) -> list[Letter]:
        return [(name, sign) for name in self.symbols for sign in (1, -1)]

    def order_tokens(self) -> list[str]:
        return [render_word(Word((letter,))) for letter in self.letters()]

    def key(self, letter: Letter) -> tuple[int, int]:
        name, sign = letter
        try:
            return self._rank[name], 0 if sign > 0 else 1
        except KeyError:
            raise AlphabetError(f"generator {name} is not in the ordering") from None

    def word_key(self, word: Iterable[Letter]) -> tuple[int, tuple[tuple[int, int], ...]]:
        keys = tuple(self.key(letter) for letter in word)
        return len(keys), keys

    def merged(self, other: "GeneratorOrdering") -> "GeneratorOrdering":
        return GeneratorOrdering(self.symbols + other.symbols)


class Word(tuple):
    """Freely reduced word; build instances through free_reduce or parse_word"""

    def __mul__(self, other: object) -> "Word":  # type: ignore[override]
        if not isinstance(other, tuple):
            return NotImplemented
        return free_reduce(tuple(self) + tuple(other))

    def __pow__(self, exponent: int) -> "Word":
        base = self if exponent >= 0 else invert(self)
        return free_reduce(tuple(base) * abs(exponent))

    def __str__(self) -> str:
        return render_word(self)

    def __repr__(self) -> str:
        return "<Word {}>".format(render_word(self))

    @property
    def inverse(self) -> "Word":
        return invert(self)

    @property
    def names(self) -> frozenset[str]:
        return frozenset(name for name, _ in self)


EMPTY = Word(())


def _check_name(name: str):
    if not name or any(ch in name for ch in "[]',= #") or name == "1":
        raise AlphabetError(f"invalid generator name: {name!r}")


def letter(name: str, sign: int = 1) -> Word:
    return Word(((name, sign),))


def free_reduce(raw: Iterable[Letter], alphabet: Collection[str] | None = None) -> Word:
    stack: list[Letter] = []
    for name, sign in raw:
        if sign not in (1, -1):
            raise AlphabetError(f"letter {name} has sign {sign}")
        if alphabet is not None and name not in alphabet:
            raise AlphabetError(f"generator {name} is not in the alphabet")
        if stack and stack[-1] == (name, -sign):
            stack.pop()
        else:
            stack.append((name, sign))
    return Word(stack)


def invert(w: Iterable[Letter]) -> Word:
    return Word((name, -sign) for name, sign in reversed(tuple(w)))


def shortlex_compare(w1: Iterable[Letter], w2: Iterable[Letter], ordering: GeneratorOrdering) -> Comparison:
    k1, k2 = ordering.word_key(w1), ordering.word_key(w2)
    if k1 < k2:
        return Comparison.LT
    if k1 > k2:
        return Comparison.GT
    return Comparison.EQ


def parse_word(text: str, alphabet: Collection[str] | None = None) -> Word:
    """Parse `aba'b'`, `[g1][g2]'` or `1`"""
    letters: list[Letter] = []
    position = 0
    while position < len(text):
        char = text[position]
        if char in _SEPARATORS or char == "1":
            position += 1
            continue
        if char == "'":
            if not letters:
                raise AlphabetError(f"inverse mark without a letter in {text!r}")
            name, sign = letters[-1]
            letters[-1] = (name, -sign)
            position += 1
            continue
        if char == "[":
            end = text.find("]", position)
            if end < 0:
                raise AlphabetError(f"unclosed bracket in {text!r}")
            name = text[position + 1:end]
            position = end + 1
        elif char == "]":
            raise AlphabetError(f"unmatched bracket in {text!r}")
        else:
            name = char
            position += 1
        _check_name(name)
        letters.append((name, 1))
    return free_reduce(letters, alphabet)


def render_word(w: Iterable[Letter]) -> str:
    parts = []
    for name, sign in w:
        parts.append(name if len(name) == 1 else f"[{name}]")
        if sign < 0:
            parts.append("'")
    return "".join(parts) or "1"
