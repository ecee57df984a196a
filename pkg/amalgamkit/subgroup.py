from __future__ import annotations

from logging import getLogger
from typing import Callable, Iterator, Sequence

from . import BudgetError
from .amalgam import AmalgamPresentation, CanonicalForm, Syllable, WordLike
from .words import EMPTY, GeneratorOrdering, Letter, Word, letter

logger = getLogger(__name__)


class SubgroupBall:
    """All elements of H = ⟨generators⟩ of H-length at most `radius`.

    Elements are keyed by canonical form and carry a shortest, shortlex-least spelling over
    the generator names. Iteration follows BFS order, which makes every search over the ball
    deterministic.
    """

    def __init__(self, P: AmalgamPresentation, generators: Sequence[WordLike], radius: int,
                 names: Sequence[str] | None = None, limit: int | None = None):
        self.presentation = P
        self.generators = tuple(P.element(g) for g in generators)
        self.names = tuple(names) if names is not None else tuple(f"h{i + 1}" for i in range(len(self.generators)))
        self.ordering = GeneratorOrdering(self.names)
        self.radius = radius
        steps: list[tuple[Letter, tuple[Syllable, ...]]] = []
        for name, generator in zip(self.names, self.generators):
            steps.append(((name, 1), P.syllables_with_tail(generator)))
            steps.append(((name, -1), P.syllables_with_tail(P.inverse(generator))))
        identity = P.identity
        self._words: dict[CanonicalForm, Word] = {identity: EMPTY}
        self._lengths: dict[CanonicalForm, int] = {identity: 0}
        self._order = [identity]
        self.sphere_sizes = [1]
        layer = [identity]
        for r in range(1, radius + 1):
            sphere = []
            for g in layer:
                prefix = P.syllables_with_tail(g)
                for read, syllables in steps:
                    h = P.canonical_from_syllables(prefix + syllables)
                    if h not in self._words:
                        self._words[h] = self._words[g] * Word((read,))
                        self._lengths[h] = r
                        sphere.append(h)
                        if limit is not None and len(self._words) > limit:
                            raise BudgetError("subgroup ball exceeds the memory budget", r - 1)
            if not sphere:
                break
            self.sphere_sizes.append(len(sphere))
            self._order.extend(sphere)
            layer = sphere
        logger.debug("H-ball of radius %s: sizes %s", radius, self.sphere_sizes)

    def __len__(self) -> int:
        return len(self._order)

    def __iter__(self) -> Iterator[CanonicalForm]:
        return iter(self._order)

    def __contains__(self, g: object) -> bool:
        return g in self._words

    def items(self) -> Iterator[tuple[CanonicalForm, Word]]:
        for g in self._order:
            yield g, self._words[g]

    def spelling(self, g: WordLike) -> Word | None:
        return self._words.get(self.presentation.element(g))

    def length(self, g: WordLike) -> int | None:
        return self._lengths.get(self.presentation.element(g))

    def find(self, predicate: Callable[[CanonicalForm], bool]) -> tuple[CanonicalForm, Word] | None:
        for g in self._order:
            if predicate(g):
                return g, self._words[g]
        return None

    def find_all(self, predicate: Callable[[CanonicalForm], bool]) -> list[tuple[CanonicalForm, Word]]:
        return [(g, self._words[g]) for g in self._order if predicate(g)]

    def evaluate(self, word: Sequence[Letter]) -> CanonicalForm:
        P = self.presentation
        values = dict(zip(self.names, self.generators))
        syllables: list[Syllable] = []
        for name, sign in word:
            value = values[name] if sign > 0 else P.inverse(values[name])
            syllables.extend(P.syllables_with_tail(value))
        return P.canonical_from_syllables(syllables)

    def generator_word(self, index: int) -> Word:
        return letter(self.names[index])
