"""Exact balls in the Cayley graph of G over X₁ ∪ X₋₁.

Elements are keyed by canonical form, so two words land on the same vertex exactly when they
are equal in G. Layers are expanded in order and merged in order, which keeps the ball (and
every parent pointer) independent of the number of worker threads.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from logging import getLogger
from typing import Iterator, Sequence

from .. import BudgetError
from ..amalgam import AmalgamPresentation, CanonicalForm, Syllable, WordLike
from ..words import EMPTY, Letter, Word

logger = getLogger(__name__)


def generator_steps(P: AmalgamPresentation) -> list[tuple[Letter, tuple[Syllable, ...]]]:
    """Letters x^±1 of G in shortlex order, each with the reduced form of its value"""
    steps = []
    for read in P.ordering.letters():
        steps.append((read, P.syllables_with_tail(P.element(Word((read,))))))
    return steps


class CayleyBall:
    def __init__(self, P: AmalgamPresentation, radius: int, limit: int | None = None, threads: int = 1):
        self.presentation = P
        self.radius = radius
        self.steps = generator_steps(P)
        identity = P.identity
        self._distance: dict[CanonicalForm, int] = {identity: 0}
        self._parent: dict[CanonicalForm, tuple[CanonicalForm, Letter]] = {}
        self.spheres: list[list[CanonicalForm]] = [[identity]]
        with ThreadPoolExecutor(max_workers=max(threads, 1)) as pool:
            for r in range(1, radius + 1):
                sphere = []
                for g, neighbours in zip(self.spheres[-1], pool.map(self._expand, self.spheres[-1])):
                    for read, h in neighbours:
                        if h in self._distance:
                            continue
                        self._distance[h] = r
                        self._parent[h] = (g, read)
                        sphere.append(h)
                        if limit is not None and len(self._distance) > limit:
                            raise BudgetError(f"Cayley ball of radius {radius} exceeds the memory budget", r - 1)
                if not sphere:
                    break
                self.spheres.append(sphere)
        logger.debug("Cayley ball of radius %s: sphere sizes %s", radius, self.sphere_sizes)

    def __repr__(self) -> str:
        return "<CayleyBall R={} size={}>".format(self.radius, len(self))

    def _expand(self, g: CanonicalForm) -> list[tuple[Letter, CanonicalForm]]:
        P = self.presentation
        prefix = P.syllables_with_tail(g)
        return [(read, P.canonical_from_syllables(prefix + syllables)) for read, syllables in self.steps]

    def __len__(self) -> int:
        return len(self._distance)

    def __contains__(self, g: object) -> bool:
        return g in self._distance

    def __iter__(self) -> Iterator[CanonicalForm]:
        for sphere in self.spheres:
            yield from sphere

    @property
    def sphere_sizes(self) -> list[int]:
        return [len(sphere) for sphere in self.spheres]

    def size(self, r: int) -> int:
        """Number of elements of length at most r"""
        return sum(self.sphere_sizes[:r + 1])

    def distance(self, g: WordLike) -> int | None:
        return self._distance.get(self.presentation.element(g))

    def require(self, g: WordLike) -> int:
        d = self.distance(g)
        if d is None:
            raise BudgetError(f"{self.presentation.render(g)} lies outside the Cayley ball", self.radius)
        return d

    def geodesic(self, g: WordLike) -> Word:
        """The geodesic recorded by the parent pointers (shortlex-least among the BFS choices)"""
        g = self.presentation.element(g)
        self.require(g)
        letters: list[Letter] = []
        while g in self._parent:
            g, read = self._parent[g]
            letters.append(read)
        return Word(tuple(reversed(letters)))

    def predecessors(self, g: CanonicalForm) -> list[tuple[Letter, CanonicalForm]]:
        """(x, g·x⁻¹) for every letter x that ends a geodesic to g"""
        P = self.presentation
        d = self._distance[g]
        out = []
        for read, _ in self.steps:
            h = P.multiply(g, Word(((read[0], -read[1]),)))
            if self._distance.get(h) == d - 1:
                out.append((read, h))
        return out


def cayley_ball(P: AmalgamPresentation, R: int, limit: int | None = None, threads: int = 1) -> CayleyBall:
    if R < 0:
        raise ValueError(f"radius must be non-negative : {R}")
    return CayleyBall(P, R, limit, threads)


def all_geodesics(P: AmalgamPresentation, g: WordLike, cap: int, ball: CayleyBall | None = None) -> list[Word]:
    """Every geodesic word for g, by a layered backward walk through the ball"""
    if ball is None or ball.radius < cap:
        ball = CayleyBall(P, cap)
    target = P.element(g)
    d = ball.distance(target)
    if d is None or d > cap:
        raise BudgetError(f"{P.render(target)} is longer than the geodesic cap {cap}", ball.radius)
    memo: dict[CanonicalForm, list[Word]] = {P.identity: [EMPTY]}

    def walk(h: CanonicalForm) -> list[Word]:
        if h not in memo:
            memo[h] = [w * Word((read,)) for read, previous in ball.predecessors(h) for w in walk(previous)]
        return memo[h]

    return sorted(walk(target), key=P.ordering.word_key)


def geodesic_points(P: AmalgamPresentation, word: Sequence[Letter]) -> list[CanonicalForm]:
    """Vertices 1, w₁, w₁w₂, … visited by the path of a word"""
    points = [P.identity]
    for read in word:
        points.append(P.multiply(points[-1], Word((read,))))
    return points
