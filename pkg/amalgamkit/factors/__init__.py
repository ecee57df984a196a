from __future__ import annotations

from abc import ABC, abstractmethod
from logging import getLogger
from typing import Hashable, Iterable, NamedTuple, Sequence

from .. import BudgetError
from ..constants import CosetSide
from ..words import EMPTY, GeneratorOrdering, Word, parse_word, render_word

logger = getLogger(__name__)

Element = Hashable


class Ball(NamedTuple):
    """Exact word-metric ball; `elements` is in shortlex order of the geodesic spellings"""

    radius: int
    elements: list
    distances: dict
    sphere_sizes: list[int]
    complete: bool


class SubgroupRecognizer(ABC):
    """Exact membership for a finitely generated subgroup of a factor.

    Certificates are words over `labels`, one label per defining generator.
    """

    def __init__(self, generators: Sequence[Element], labels: Sequence[str] | None = None):
        self.generators = tuple(generators)
        self.labels = tuple(labels) if labels is not None else tuple(f"t{i + 1}" for i in range(len(self.generators)))
        if len(self.labels) != len(self.generators):
            raise ValueError("one label per generator is required")

    @abstractmethod
    def express(self, g: Element) -> Word | None: ...

    @property
    @abstractmethod
    def is_trivial(self) -> bool: ...

    @property
    @abstractmethod
    def is_finite(self) -> bool: ...

    def is_member(self, g: Element) -> bool:
        return self.express(g) is not None

    def __contains__(self, g: Element) -> bool:
        return self.is_member(g)

    def __repr__(self) -> str:
        return "<{} {}>".format(type(self).__name__, ", ".join(self.labels))


class FactorGroup(ABC):
    """A factor A_i with a fixed ordered generating set X_i"""

    kind: str = ""

    def __init__(self, ordering: GeneratorOrdering):
        self.ordering = ordering
        self._cosets: dict[tuple[SubgroupRecognizer, Element, CosetSide], Element] = {}

    @property
    def generators(self) -> tuple[str, ...]:
        return self.ordering.symbols

    @property
    @abstractmethod
    def identity(self) -> Element: ...

    @property
    @abstractmethod
    def is_finite(self) -> bool: ...

    @property
    def size(self) -> int | None:
        return None

    @abstractmethod
    def multiply(self, g: Element, h: Element) -> Element: ...

    @abstractmethod
    def inverse(self, g: Element) -> Element: ...

    @abstractmethod
    def evaluate(self, word: Iterable[tuple[str, int]]) -> Element: ...

    @abstractmethod
    def spell(self, g: Element) -> Word:
        """Shortlex-least geodesic word for g"""

    @abstractmethod
    def build_recognizer(self, gens: Sequence[Element], labels: Sequence[str] | None = None) -> SubgroupRecognizer: ...

    @abstractmethod
    def _coset_representative(self, recognizer: SubgroupRecognizer, g: Element, side: CosetSide) -> Element: ...

    @abstractmethod
    def intersect(self, first: SubgroupRecognizer, second: SubgroupRecognizer) -> list: ...

    def length(self, g: Element) -> int:
        return len(self.spell(g))

    def key(self, g: Element) -> tuple:
        return self.ordering.word_key(self.spell(g))

    def product(self, *elements: Element) -> Element:
        result = self.identity
        for element in elements:
            result = self.multiply(result, element)
        return result

    def conjugate(self, g: Element, x: Element) -> Element:
        """x·g·x⁻¹"""
        return self.product(x, g, self.inverse(x))

    def power(self, g: Element, exponent: int) -> Element:
        base = g if exponent >= 0 else self.inverse(g)
        result = self.identity
        for _ in range(abs(exponent)):
            result = self.multiply(result, base)
        return result

    def is_identity(self, g: Element) -> bool:
        return g == self.identity

    def parse(self, text: str) -> Element:
        return self.evaluate(parse_word(text, self.ordering))

    def render(self, g: Element) -> str:
        return render_word(self.spell(g))

    def coset_representative(self, recognizer: SubgroupRecognizer, g: Element, side: CosetSide = CosetSide.LEFT) -> Element:
        key = (recognizer, g, side)
        if key not in self._cosets:
            self._cosets[key] = self.identity if recognizer.is_member(g) else self._coset_representative(recognizer, g, side)
        return self._cosets[key]

    def enumerate_ball(self, radius: int, limit: int | None = None) -> Ball:
        if radius < 0:
            raise ValueError("radius must be non-negative")
        letters = [(self.evaluate((letter,)), letter) for letter in self.ordering.letters()]
        distances = {self.identity: 0}
        elements = [self.identity]
        layer = [self.identity]
        sizes = [1]
        exhausted = False
        for r in range(1, radius + 1):
            sphere = []
            for g in layer:
                for value, _ in letters:
                    h = self.multiply(g, value)
                    if h not in distances:
                        distances[h] = r
                        sphere.append(h)
                        if limit is not None and len(distances) > limit:
                            raise BudgetError(f"ball of {self!r} exceeds {limit} elements", r - 1)
            if not sphere:
                exhausted = True
                break
            sizes.append(len(sphere))
            elements.extend(sphere)
            layer = sphere
        complete = exhausted or (self.size is not None and len(distances) == self.size)
        logger.debug("ball of radius %s in %r: sizes %s", radius, self, sizes)
        return Ball(radius, elements, distances, sizes, complete)

    def __repr__(self) -> str:
        return "<{} {}>".format(type(self).__name__, ",".join(self.generators))


__all__ = ["Ball", "Element", "EMPTY", "FactorGroup", "SubgroupRecognizer"]
