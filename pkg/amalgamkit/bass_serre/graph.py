from __future__ import annotations

from logging import getLogger
from typing import NamedTuple

import networkx as nx

from ..amalgam import CanonicalForm, Syllable
from ..factors import Element, SubgroupRecognizer
from ..words import EMPTY, Word, letter, render_word
from .domain import FundamentalDomain
from .tree import TreeVertex, preceding, render_vertex

logger = getLogger(__name__)


class BEdge(NamedTuple):
    """Positive edge of 𝔹.

    Edge groups are kept as words over the generators of C: the edge group of e is
    {c ∈ C : α_e(c) ∈ A_source} with α_e(c) = b·c·b⁻¹ and, for stable edges, ω_e(c) = a·c·a⁻¹ in
    the factor of the target.
    """

    name: str
    source: TreeVertex
    target: TreeVertex
    child: TreeVertex
    label: Syllable | None
    a: Element | None
    group: tuple[Word, ...]

    @property
    def is_stable(self) -> bool:
        return self.a is not None


class GraphOfGroups:
    def __init__(self, D: FundamentalDomain):
        self.domain = D
        self.presentation = D.presentation
        self.vertices = D.y1
        edges = []
        for v in D.y1[1:]:
            parent = preceding(v)
            assert parent is not None
            edges.append(BEdge(D.tree_letter(v), parent, v, v, v.label, None, self._edge_group(parent, v.label)))
        for pairing in D.pairings:
            edges.append(BEdge(pairing.name, pairing.parent, pairing.partner, pairing.vertex, pairing.vertex.label,
                               pairing.a, self._edge_group(pairing.parent, pairing.vertex.label)))
        self.edges = tuple(edges)
        self._by_name = {e.name: e for e in self.edges}
        self._boundaries: dict[tuple[str, bool], SubgroupRecognizer] = {}
        self._paths: dict[tuple[TreeVertex, TreeVertex], tuple[TreeVertex, ...]] = {}
        self.tree = nx.Graph()
        self.tree.add_nodes_from(D.y1)
        self.tree.add_edges_from((e.source, e.target) for e in self.edges if not e.is_stable)
        self.graph = nx.MultiGraph()
        self.graph.add_nodes_from(D.y1)
        for e in self.edges:
            self.graph.add_edge(e.source, e.target, key=e.name)
        logger.debug("graph of groups: %s vertices, %s edges", len(self.vertices), len(self.edges))

    def __repr__(self) -> str:
        return "<GraphOfGroups V={} E={}>".format(len(self.vertices), len(self.edges))

    def _edge_group(self, u: TreeVertex, label: Syllable | None) -> tuple[Word, ...]:
        P = self.presentation
        side = u.side
        factor = P.factor(side)
        group = self.domain.groups[u]
        if group.is_trivial:
            return ()
        b = factor.identity if label is None else label.element
        conjugated = factor.build_recognizer([factor.conjugate(x, factor.inverse(b)) for x in group.generators])
        common = factor.intersect(conjugated, P.recognizer(side))
        return tuple(P.c_word(side, c) for c in common if not factor.is_identity(c))

    def edge(self, name: str) -> BEdge:
        return self._by_name[name]

    @property
    def stable_edges(self) -> list[BEdge]:
        return [e for e in self.edges if e.is_stable]

    @property
    def tree_edges(self) -> list[BEdge]:
        return [e for e in self.edges if not e.is_stable]

    def is_maximal_subtree(self) -> bool:
        return nx.is_tree(self.tree) and self.tree.number_of_nodes() == self.graph.number_of_nodes()

    def tree_path(self, u: TreeVertex, v: TreeVertex) -> tuple[TreeVertex, ...]:
        if (u, v) not in self._paths:
            self._paths[(u, v)] = tuple(nx.shortest_path(self.tree, u, v))
        return self._paths[(u, v)]

    def path_letters(self, u: TreeVertex, v: TreeVertex) -> Word:
        """Tree-edge letters along the Y₁ path from u to v"""
        path = self.tree_path(u, v)
        word = EMPTY
        for x, y in zip(path, path[1:]):
            if preceding(y) == x:
                word = word * letter(self.domain.tree_letter(y))
            else:
                word = word * letter(self.domain.tree_letter(x), -1)
        return word

    def alpha(self, e: BEdge, c: Word) -> Element:
        """α_e(c) in the factor of the source vertex"""
        P = self.presentation
        side = e.source.side
        factor = P.factor(side)
        b = factor.identity if e.label is None else e.label.element
        return factor.conjugate(P.evaluate_c(c, side), b)

    def omega(self, e: BEdge, c: Word) -> Element:
        """ω_e(c) in the factor of the target vertex"""
        P = self.presentation
        side = e.target.side
        factor = P.factor(side)
        value = P.evaluate_c(c, side)
        return value if e.a is None else factor.conjugate(value, e.a)

    def _boundary(self, e: BEdge, at_source: bool) -> SubgroupRecognizer:
        key = (e.name, at_source)
        if key not in self._boundaries:
            vertex = e.source if at_source else e.target
            images = [self.alpha(e, c) if at_source else self.omega(e, c) for c in e.group]
            labels = [f"c{k + 1}" for k in range(len(images))]
            self._boundaries[key] = self.presentation.factor(vertex.side).build_recognizer(images, labels)
        return self._boundaries[key]

    def transport(self, e: BEdge, x: Element, forward: bool = True) -> Element | None:
        """ω_e(α_e⁻¹(x)) when forward, α_e(ω_e⁻¹(x)) otherwise; None when x is outside the boundary image"""
        start, end = (e.source, e.target) if forward else (e.target, e.source)
        if self.presentation.factor(start.side).is_identity(x):
            return self.presentation.factor(end.side).identity
        if not e.group:
            return None
        certificate = self._boundary(e, at_source=forward).express(x)
        if certificate is None:
            return None
        c = EMPTY
        for name, sign in certificate:
            c = c * e.group[int(name[1:]) - 1] ** sign
        return self.omega(e, c) if forward else self.alpha(e, c)

    def local_to_global(self, v: TreeVertex, element: Element) -> CanonicalForm:
        P = self.presentation
        s = self.domain.s(v)
        return P.multiply(s, P.embed(v.side, element), P.inverse(s))

    def vertex_group(self, v: TreeVertex) -> list[CanonicalForm]:
        """Generators of B_v = s_v·A_v·s_v⁻¹"""
        return [self.local_to_global(v, g) for g in self.domain.group(v).generators]

    def relators(self) -> list[Word]:
        """e⁻¹·α_e(c)·e·ω_e(c)⁻¹ for every edge and edge-group generator, plus y = 1 for tree edges"""
        D = self.domain
        relators = [letter(e.name) for e in self.tree_edges]
        for e in self.edges:
            for c in e.group:
                alpha = D.group(e.source).express(self.alpha(e, c))
                omega = D.group(e.target).express(self.omega(e, c))
                if alpha is None or omega is None:
                    logger.warning("edge group generator %s of %s is not in its vertex groups", render_word(c), e.name)
                    continue
                relators.append(letter(e.name, -1) * alpha * letter(e.name) * omega.inverse)
        return relators

    def evaluate(self, word: Word) -> CanonicalForm:
        return self.domain.evaluate_z(word)

    def relator_failures(self) -> list[str]:
        return [render_word(r) for r in self.relators() if not self.evaluate(r).is_identity]

    def generators_in_h(self) -> bool:
        """Every listed generator of presentation (2) evaluates into the H-ball"""
        D = self.domain
        return all(D.z_value(name) in D.ball for name in D.z_names)

    @property
    def rank(self) -> int | None:
        """Rank of the free group π₁(𝔹, Y₁) when every vertex group is trivial"""
        if not self.domain.has_trivial_stabilizers:
            return None
        return len(self.stable_edges)

    def describe(self) -> list[str]:
        P = self.presentation
        D = self.domain
        lines = []
        for v in self.vertices:
            group = D.groups[v]
            gens = ", ".join(f"{name} = {P.render(g)}" for name, g in zip(group.names, self.vertex_group(v)))
            lines.append(f"vertex: v{group.index} = {render_vertex(P, v)} ; B_v = <{gens or '1'}>")
        for e in self.edges:
            kind = "stable" if e.is_stable else "tree"
            edge_group = ", ".join(render_word(c) for c in e.group) or "1"
            lines.append(f"edge: {e.name} = v{D.index(e.source)} -> v{D.index(e.target)} ; {kind} ; B_e = <{edge_group}>")
        return lines


def induced_graph_of_groups(D: FundamentalDomain) -> GraphOfGroups:
    return GraphOfGroups(D)