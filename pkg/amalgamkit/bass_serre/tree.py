from __future__ import annotations

from dataclasses import dataclass
from logging import getLogger
from typing import Iterable, NamedTuple

from ..amalgam import AmalgamPresentation, CanonicalForm, Syllable, WordLike
from ..constants import CosetSide, Side

logger = getLogger(__name__)


@dataclass(frozen=True)
class TreeVertex:
    """The coset s_v·A_side, with s_v stored as its canonical transversal syllables"""

    side: Side
    path: tuple[Syllable, ...]

    @property
    def depth(self) -> int:
        first = self.path[0].side if self.path else self.side
        return len(self.path) + (1 if first is Side.MINUS else 0)

    @property
    def is_root(self) -> bool:
        return not self.path

    @property
    def label(self) -> Syllable | None:
        """Label of the edge from the preceding vertex; None for the edge (d₁, d₋₁)"""
        return self.path[-1] if self.path else None


D1 = TreeVertex(Side.PLUS, ())
D_MINUS = TreeVertex(Side.MINUS, ())


class TreeEdge(NamedTuple):
    source: TreeVertex
    target: TreeVertex
    label: Syllable | None


class Neighborhood(NamedTuple):
    edges: list[TreeEdge]
    truncated: bool


def vertex_key(P: AmalgamPresentation, v: TreeVertex) -> tuple:
    return v.depth, int(v.side) * -1, tuple((int(s.side) * -1, P.factor(s.side).key(s.element)) for s in v.path)


def sort_vertices(P: AmalgamPresentation, vertices: Iterable[TreeVertex]) -> list[TreeVertex]:
    return sorted(vertices, key=lambda v: vertex_key(P, v))


def s_element(P: AmalgamPresentation, v: TreeVertex) -> CanonicalForm:
    return P.canonical_from_syllables(v.path)


def vertex_at(P: AmalgamPresentation, g: WordLike, side: Side) -> TreeVertex:
    """The vertex g·A_side"""
    syllables = P.element(g).syllables
    if syllables and syllables[-1].side == side:
        syllables = syllables[:-1]
    return TreeVertex(side, syllables)


def preceding(v: TreeVertex) -> TreeVertex | None:
    if v == D1:
        return None
    if not v.path:
        return D1
    return TreeVertex(v.side.other, v.path[:-1])


def ancestors(v: TreeVertex) -> list[TreeVertex]:
    """v, its preceding vertex, …, d₁"""
    chain = [v]
    while (parent := preceding(chain[-1])) is not None:
        chain.append(parent)
    return chain


def precedes(u: TreeVertex, v: TreeVertex) -> bool:
    """u ≤ v: u lies on the reduced path from d₁ to v"""
    return u in ancestors(v)


def tree_path(u: TreeVertex, v: TreeVertex) -> list[TreeVertex]:
    up, down = ancestors(u), ancestors(v)
    common = set(up) & set(down)
    meet = next(x for x in up if x in common)
    return up[: up.index(meet) + 1] + list(reversed(down[: down.index(meet)]))


def hull(vertices: Iterable[TreeVertex]) -> set[TreeVertex]:
    closure: set[TreeVertex] = set()
    for v in vertices:
        closure.update(ancestors(v))
    return closure


def parent_edge(v: TreeVertex) -> TreeEdge | None:
    parent = preceding(v)
    return None if parent is None else TreeEdge(parent, v, v.label)


def child(v: TreeVertex, label: Syllable) -> TreeVertex:
    return TreeVertex(v.side.other, v.path + (label,))


def act(P: AmalgamPresentation, g: WordLike, v: TreeVertex) -> TreeVertex:
    return vertex_at(P, P.multiply(g, s_element(P, v)), v.side)


def fixes(P: AmalgamPresentation, g: WordLike, v: TreeVertex) -> bool:
    return act(P, g, v) == v


def vertex_neighbors(P: AmalgamPresentation, v: TreeVertex, budget: int) -> Neighborhood:
    factor = P.factor(v.side)
    recognizer = P.recognizer(v.side)
    edges = []
    parent = parent_edge(v)
    if parent is not None:
        edges.append(parent)
    if v == D1:
        edges.append(TreeEdge(D1, D_MINUS, None))
    ball = factor.enumerate_ball(budget)
    labels = {factor.coset_representative(recognizer, g, CosetSide.LEFT) for g in ball.elements}
    for t in sorted(labels, key=factor.key):
        if not factor.is_identity(t) and factor.length(t) <= budget:
            edges.append(TreeEdge(v, child(v, Syllable(v.side, t)), Syllable(v.side, t)))
    truncated = not ball.complete
    if truncated:
        logger.debug("neighbours of %s truncated at label length %s", v, budget)
    return Neighborhood(edges, truncated)


def render_vertex(P: AmalgamPresentation, v: TreeVertex) -> str:
    path = " ".join(P.render_syllable(s) for s in v.path) or "1"
    return f"{path}·A{v.side.label}"
