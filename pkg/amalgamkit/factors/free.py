from __future__ import annotations

from collections import defaultdict, deque
from copy import deepcopy
from logging import getLogger
from typing import Iterable, Iterator, Sequence

from . import FactorGroup, SubgroupRecognizer
from ..constants import CosetSide
from ..words import EMPTY, GeneratorOrdering, Letter, Word, free_reduce, invert, letter

logger = getLogger(__name__)


class FoldedGraph:
    """Labelled Stallings graph with a base vertex.

    Every edge carries, besides its generator name, a certificate label: a word over the
    subgroup's abstract generators. Reading a closed path at the base multiplies the labels
    and yields an expression of the spelled element in those generators.
    """

    def __init__(self):
        self.base = 0
        self._vertices = {0}
        self._next_vertex = 1
        self._next_edge = 0
        self._edges: dict[int, tuple[int, str, int, Word]] = {}
        self._out: defaultdict[tuple[int, str], set[int]] = defaultdict(set)
        self._in: defaultdict[tuple[int, str], set[int]] = defaultdict(set)
        self._incident: defaultdict[int, set[int]] = defaultdict(set)
        self._alias: dict[int, int] = {}
        self._pending: list[tuple[str, int, str]] = []

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self._vertices)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def copy(self) -> "FoldedGraph":
        return deepcopy(self)

    def add_vertex(self) -> int:
        vertex = self._next_vertex
        self._next_vertex += 1
        self._vertices.add(vertex)
        return vertex

    def add_edge(self, source: int, name: str, target: int, label: Word = EMPTY) -> int:
        edge = self._next_edge
        self._next_edge += 1
        self._edges[edge] = (source, name, target, label)
        self._out[(source, name)].add(edge)
        self._in[(target, name)].add(edge)
        self._incident[source].add(edge)
        self._incident[target].add(edge)
        self._pending.append(("out", source, name))
        self._pending.append(("in", target, name))
        return edge

    def _remove_edge(self, edge: int):
        source, name, target, _ = self._edges.pop(edge)
        self._out[(source, name)].discard(edge)
        self._in[(target, name)].discard(edge)
        self._incident[source].discard(edge)
        self._incident[target].discard(edge)

    def add_path(self, start: int, word: Sequence[Letter], end: int | None = None, label: Word = EMPTY) -> int:
        """Attach a path spelling `word` from `start`; the first edge reads `label`"""
        current = start
        for position, (name, sign) in enumerate(word):
            last = position == len(word) - 1
            following = end if last and end is not None else self.add_vertex()
            edge_label = label if position == 0 else EMPTY
            if sign > 0:
                self.add_edge(current, name, following, edge_label)
            else:
                self.add_edge(following, name, current, invert(edge_label))
            current = following
        return current

    def find(self, vertex: int) -> int:
        while vertex in self._alias:
            vertex = self._alias[vertex]
        return vertex

    def _merge(self, old: int, new: int, delta: Word):
        logger.debug("folding vertex %s into %s", old, new)
        for edge in list(self._incident[old]):
            source, name, target, label = self._edges[edge]
            self._remove_edge(edge)
            if source == old:
                source = new
                label = delta * label
            if target == old:
                target = new
                label = label * invert(delta)
            self.add_edge(source, name, target, label)
        self._vertices.discard(old)
        self._incident.pop(old, None)
        self._alias[old] = new

    def fold(self) -> "FoldedGraph":
        while self._pending:
            kind, vertex, name = self._pending.pop()
            if vertex not in self._vertices:
                continue
            index = self._out if kind == "out" else self._in
            edges = index.get((vertex, name))
            if not edges or len(edges) < 2:
                continue
            first, second = sorted(edges)[:2]
            if kind == "out":
                end1, end2 = self._edges[first][2], self._edges[second][2]
                delta = invert(self._edges[first][3]) * self._edges[second][3]
            else:
                end1, end2 = self._edges[first][0], self._edges[second][0]
                delta = self._edges[first][3] * invert(self._edges[second][3])
            self._remove_edge(second)
            if end1 != end2:
                if end2 == self.base:
                    end1, end2, delta = end2, end1, invert(delta)
                self._merge(end2, end1, delta)
            self._pending.append((kind, self.find(vertex), name))
        return self

    def degree(self, vertex: int) -> int:
        return sum(2 if self._edges[e][0] == self._edges[e][2] else 1 for e in self._incident[vertex])

    def prune(self, keep: Iterable[int] = ()) -> "FoldedGraph":
        """Remove hanging trees so that only the core (and `keep`) remains"""
        protected = {self.base, *keep}
        stack = [v for v in self._vertices if v not in protected and self.degree(v) <= 1]
        while stack:
            vertex = stack.pop()
            if vertex not in self._vertices or self.degree(vertex) > 1:
                continue
            neighbours = [self._edges[e][0] + self._edges[e][2] - vertex for e in self._incident[vertex]]
            for edge in list(self._incident[vertex]):
                self._remove_edge(edge)
            self._vertices.discard(vertex)
            self._incident.pop(vertex, None)
            stack.extend(v for v in neighbours if v not in protected and v in self._vertices)
        return self

    def neighbours(self, vertex: int) -> Iterator[tuple[Letter, int, Word]]:
        """(letter read, endpoint, label read) for every way of leaving `vertex`"""
        for edge in sorted(self._incident[vertex]):
            source, name, target, label = self._edges[edge]
            if source == vertex:
                yield (name, 1), target, label
            if target == vertex:
                yield (name, -1), source, invert(label)

    def step(self, vertex: int, name: str, sign: int) -> tuple[int, Word] | None:
        index = self._out if sign > 0 else self._in
        edges = index.get((vertex, name))
        if not edges:
            return None
        source, _, target, label = self._edges[next(iter(edges))]
        return (target, label) if sign > 0 else (source, invert(label))

    def read(self, word: Iterable[Letter], start: int | None = None) -> tuple[int, Word] | None:
        vertex = self.base if start is None else start
        certificate: list[Letter] = []
        for name, sign in word:
            stepped = self.step(vertex, name, sign)
            if stepped is None:
                return None
            vertex, label = stepped
            certificate.extend(label)
        return vertex, free_reduce(certificate)

    def geodesic(self, source: int, target: int, ordering: GeneratorOrdering) -> Word:
        """Shortlex-least among the shortest words read from source to target"""
        distance = {target: 0}
        queue = deque([target])
        while queue:
            vertex = queue.popleft()
            for _, other, _ in self.neighbours(vertex):
                if other not in distance:
                    distance[other] = distance[vertex] + 1
                    queue.append(other)
        if source not in distance:
            raise ValueError(f"vertex {source} does not reach {target}")
        letters: list[Letter] = []
        vertex = source
        while vertex != target:
            moves = [(ordering.key(read), read, other) for read, other, _ in self.neighbours(vertex)
                     if distance.get(other) == distance[vertex] - 1]
            _, read, vertex = min(moves)
            letters.append(read)
        return Word(letters)


class FreeSubgroupRecognizer(SubgroupRecognizer):
    def __init__(self, generators: Sequence[Word], labels: Sequence[str] | None = None):
        super().__init__(generators, labels)
        graph = FoldedGraph()
        for generator, label in zip(self.generators, self.labels):
            if generator:
                graph.add_path(graph.base, generator, graph.base, letter(label))
        self.graph = graph.fold().prune()
        logger.debug("folded subgroup graph: %s vertices, %s edges", len(graph.vertices), graph.edge_count)

    @property
    def is_trivial(self) -> bool:
        return self.graph.edge_count == 0

    @property
    def is_finite(self) -> bool:
        return self.is_trivial

    def express(self, g: Word) -> Word | None:
        read = self.graph.read(g)
        if read is None or read[0] != self.graph.base:
            return None
        return read[1]


class FreeGroup(FactorGroup):
    kind = "free"

    @property
    def identity(self) -> Word:
        return EMPTY

    @property
    def is_finite(self) -> bool:
        return not self.generators

    @property
    def size(self) -> int | None:
        return 1 if not self.generators else None

    def multiply(self, g: Word, h: Word) -> Word:
        return free_reduce(tuple(g) + tuple(h))

    def inverse(self, g: Word) -> Word:
        return invert(g)

    def evaluate(self, word: Iterable[Letter]) -> Word:
        return free_reduce(word, self.ordering)

    def spell(self, g: Word) -> Word:
        return g

    def length(self, g: Word) -> int:
        return len(g)

    def key(self, g: Word) -> tuple:
        return self.ordering.word_key(g)

    def build_recognizer(self, gens: Sequence[Word], labels: Sequence[str] | None = None) -> FreeSubgroupRecognizer:
        return FreeSubgroupRecognizer([self.evaluate(g) for g in gens], labels)

    def _coset_representative(self, recognizer: FreeSubgroupRecognizer, g: Word, side: CosetSide) -> Word:
        graph = recognizer.graph.copy()
        hair = graph.add_vertex()
        if side is CosetSide.LEFT:
            # words read from the hair end to the base are exactly the elements of gC
            graph.add_path(hair, g, graph.base)
            graph.fold()
            source, target = graph.find(hair), graph.base
        else:
            graph.add_path(graph.base, g, hair)
            graph.fold()
            source, target = graph.base, graph.find(hair)
        return graph.geodesic(source, target, self.ordering)

    def intersect(self, first: FreeSubgroupRecognizer, second: FreeSubgroupRecognizer) -> list[Word]:
        return pullback_generators(first.graph, second.graph)


def pullback_generators(first: FoldedGraph, second: FoldedGraph) -> list[Word]:
    """Free basis of the intersection of two subgroups, read off their product graph"""
    start = (first.base, second.base)
    path = {start: EMPTY}
    tree_edges = set()
    product_edges = []
    queue = deque([start])
    while queue:
        state = queue.popleft()
        p, q = state
        for read, p2, _ in first.neighbours(p):
            stepped = second.step(q, *read)
            if stepped is None:
                continue
            target = (p2, stepped[0])
            if target not in path:
                path[target] = path[state] * Word((read,))
                tree_edges.add((target, invert((read,))[0], state))
                tree_edges.add((state, read, target))
                queue.append(target)
            if read[1] > 0:
                product_edges.append((state, read, target))
    generators = []
    for state, read, target in product_edges:
        if (state, read, target) in tree_edges:
            continue
        generator = path[state] * Word((read,)) * invert(path[target])
        if generator and generator not in generators and invert(generator) not in generators:
            generators.append(generator)
    return generators
