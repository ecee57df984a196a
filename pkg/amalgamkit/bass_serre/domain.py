from __future__ import annotations

from dataclasses import dataclass, field
from logging import getLogger
from typing import Iterable, NamedTuple, Sequence

from .. import BudgetError, DomainError
from ..amalgam import AmalgamPresentation, CanonicalForm, WordLike
from ..constants import Budgets, Side
from ..factors import Element, SubgroupRecognizer
from ..subgroup import SubgroupBall
from ..words import EMPTY, Letter, Word, letter
from .tree import (D1, D_MINUS, TreeEdge, TreeVertex, act, fixes, hull, preceding, render_vertex, s_element,
                   sort_vertices, vertex_at)

logger = getLogger(__name__)


class Pairing(NamedTuple):
    """A vertex v of Y − Y₁ together with its H-equivalent vertex q of Y₁.

    `a` lies in the factor of v's type and h_v = s_v·a⁻¹·s_q⁻¹ maps q to v.
    """

    vertex: TreeVertex
    partner: TreeVertex
    a: Element
    h: CanonicalForm
    h_word: Word
    name: str

    @property
    def parent(self) -> TreeVertex:
        parent = preceding(self.vertex)
        assert parent is not None
        return parent


class VertexGroup:
    """Generators of A_v = A_i ∩ s_v⁻¹·H·s_v found so far, named v<k>.<j>"""

    def __init__(self, P: AmalgamPresentation, vertex: TreeVertex, index: int):
        self.vertex = vertex
        self.index = index
        self.side = vertex.side
        self.factor = P.factor(vertex.side)
        self.generators: list[Element] = []
        self.names: list[str] = []
        self._recognizer: SubgroupRecognizer | None = None

    def __repr__(self) -> str:
        return "<VertexGroup {} {}>".format(self.index, ", ".join(self.factor.render(g) for g in self.generators) or "1")

    @property
    def is_trivial(self) -> bool:
        return not self.generators

    @property
    def recognizer(self) -> SubgroupRecognizer:
        if self._recognizer is None:
            self._recognizer = self.factor.build_recognizer(self.generators, self.names)
        return self._recognizer

    def express(self, a: Element) -> Word | None:
        if self.factor.is_identity(a):
            return EMPTY
        if not self.generators:
            return None
        return self.recognizer.express(a)

    def add(self, a: Element) -> str:
        name = f"v{self.index}.{len(self.generators) + 1}"
        self.generators.append(a)
        self.names.append(name)
        self._recognizer = None
        logger.debug("vertex group %s gains %s", self.index, self.factor.render(a))
        return name

    def word_for(self, a: Element) -> Word:
        word = self.express(a)
        if word is None:
            word = letter(self.add(a))
        return word


@dataclass
class EllipticCertificate:
    """H fixes `vertex`; s_vertex⁻¹·H·s_vertex lies in the factor A_side and is generated by `generators`"""

    vertex: TreeVertex
    side: Side
    generators: tuple[Element, ...]
    reason: str
    conjugator: CanonicalForm


@dataclass
class Inconclusive:
    reason: str
    diagnostics: list[str] = field(default_factory=list)


@dataclass(eq=False)
class FundamentalDomain:
    presentation: AmalgamPresentation
    generators: tuple[CanonicalForm, ...]
    ball: SubgroupBall
    budgets: Budgets
    y1: tuple[TreeVertex, ...]
    pairings: tuple[Pairing, ...]
    groups: dict[TreeVertex, VertexGroup]
    expressions: tuple[Word, ...]
    diagnostics: tuple[str, ...]
    certified: bool
    explored: int = 0

    def __post_init__(self):
        self._index = {v: k for k, v in enumerate(self.y1)}
        self._pairing = {p.vertex: p for p in self.pairings}
        self._stable = {p.name: p for p in self.pairings}
        self._s = {v: s_element(self.presentation, v) for v in self.vertices}

    def __repr__(self) -> str:
        return "<FundamentalDomain Y1={} pairings={} certified={}>".format(len(self.y1), len(self.pairings), self.certified)

    @property
    def vertices(self) -> list[TreeVertex]:
        return list(self.y1) + [p.vertex for p in self.pairings]

    @property
    def tree_edges(self) -> list[TreeEdge]:
        """Edges of Y₁ oriented away from d₁"""
        return [TreeEdge(preceding(v), v, v.label) for v in self.y1[1:]]  # type: ignore[arg-type]

    @property
    def edges(self) -> list[TreeEdge]:
        return self.tree_edges + [TreeEdge(p.parent, p.vertex, p.vertex.label) for p in self.pairings]

    @property
    def has_trivial_stabilizers(self) -> bool:
        return all(group.is_trivial for group in self.groups.values())

    @property
    def stable_letters(self) -> list[str]:
        return [p.name for p in self.pairings]

    def in_y1(self, v: TreeVertex) -> bool:
        return v in self._index

    def __contains__(self, v: object) -> bool:
        return v in self._index or v in self._pairing

    def require(self, v: TreeVertex):
        if v not in self:
            raise DomainError(f"{render_vertex(self.presentation, v)} is not a vertex of the fundamental domain")

    def index(self, v: TreeVertex) -> int:
        if v not in self._index:
            raise DomainError(f"{render_vertex(self.presentation, v)} is not a vertex of Y1")
        return self._index[v]

    def pairing(self, v: TreeVertex) -> Pairing | None:
        return self._pairing.get(v)

    def s(self, v: TreeVertex) -> CanonicalForm:
        self.require(v)
        return self._s[v]

    def group(self, v: TreeVertex) -> VertexGroup:
        self.index(v)
        return self.groups[v]

    def tree_letter(self, v: TreeVertex) -> str:
        """Name of the Y₁ edge ending in v"""
        return f"y{self.index(v)}"

    @property
    def z_names(self) -> list[str]:
        names = [name for v in self.y1 for name in self.groups[v].names]
        return names + self.stable_letters

    def z_value(self, name: str) -> CanonicalForm:
        P = self.presentation
        if name in self._stable:
            return self._stable[name].h
        if name.startswith("y"):
            return P.identity
        if name.startswith("v") and "." in name:
            k, j = name[1:].split(".", 1)
            group = self.groups[self.y1[int(k)]]
            element = group.generators[int(j) - 1]
            s = self._s[group.vertex]
            return P.multiply(s, P.embed(group.side, element), P.inverse(s))
        raise DomainError(f"{name} is not a generator of the induced presentation")

    def evaluate_z(self, word: Iterable[Letter]) -> CanonicalForm:
        P = self.presentation
        syllables = []
        for name, sign in word:
            value = self.z_value(name)
            syllables.extend(P.syllables_with_tail(value if sign > 0 else P.inverse(value)))
        return P.canonical_from_syllables(syllables)

    def is_free_on_stable_letters(self) -> bool:
        """H is free on the h_v when every vertex group is trivial"""
        return self.certified and self.has_trivial_stabilizers


DomainResult = FundamentalDomain | EllipticCertificate | Inconclusive


class _Placement(NamedTuple):
    """g·x = vertex with g ∈ H spelled by `word` over the induced generators"""

    vertex: TreeVertex
    g: CanonicalForm
    word: Word


class _DomainBuilder:
    def __init__(self, P: AmalgamPresentation, generators: Sequence[CanonicalForm], ball: SubgroupBall, budgets: Budgets):
        self.P = P
        self.generators = tuple(generators)
        self.ball = ball
        self.budgets = budgets
        self.y1: list[TreeVertex] = []
        self.groups: dict[TreeVertex, VertexGroup] = {}
        self.pairings: dict[TreeVertex, Pairing] = {}
        self.placements: dict[TreeVertex, _Placement] = {}
        self.diagnostics: list[str] = []
        self._s: dict[TreeVertex, CanonicalForm] = {}

    def s(self, v: TreeVertex) -> CanonicalForm:
        if v not in self._s:
            self._s[v] = s_element(self.P, v)
        return self._s[v]

    def add_vertex(self, v: TreeVertex):
        self.groups[v] = VertexGroup(self.P, v, len(self.y1))
        self.y1.append(v)
        logger.debug("Y1 gains %s", render_vertex(self.P, v))

    def stabilizer_word(self, q: TreeVertex, h: CanonicalForm) -> Word:
        P = self.P
        s = self.s(q)
        local = P.local(P.multiply(P.inverse(s), h, s), q.side)
        if local is None:
            raise DomainError(f"{P.render(h)} does not fix {render_vertex(P, q)}")
        return self.groups[q].word_for(local)

    def settle(self, v: TreeVertex, g: CanonicalForm, word: Word) -> _Placement:
        """Move a vertex of Y into Y₁ along its pairing"""
        pairing = self.pairings.get(v)
        if pairing is None:
            return _Placement(v, g, word)
        P = self.P
        return _Placement(pairing.partner, P.multiply(P.inverse(pairing.h), g), letter(pairing.name, -1) * word)

    def express(self, h: CanonicalForm, source: TreeVertex, target: TreeVertex) -> Word:
        """Word for h ∈ H with h·source = target, source in Y and target in Y₁"""
        P = self.P
        settled = self.settle(source, P.identity, EMPTY)
        if settled.vertex != target:
            raise DomainError(
                f"{render_vertex(P, settled.vertex)} and {render_vertex(P, target)} are distinct H-equivalent vertices of Y1"
            )
        return self.stabilizer_word(target, P.multiply(h, P.inverse(settled.g))) * settled.word

    def edge_children(self) -> list[TreeVertex]:
        return self.y1[1:] + list(self.pairings)

    def find_edge(self, target: TreeVertex) -> tuple[TreeVertex, CanonicalForm] | None:
        """An edge of Y carried by some h of the ball onto the edge ending in `target`"""
        P = self.P
        s_target_inverse = P.inverse(self.s(target))
        for c in self.edge_children():
            s_c = self.s(c)
            found = self.ball.find(lambda h: P.multiply(s_target_inverse, h, s_c).in_c)
            if found is not None:
                return c, found[0]
        return None

    def find_vertex(self, v: TreeVertex) -> tuple[TreeVertex, CanonicalForm, Word, Element] | None:
        """The vertex q of Y₁ H-equivalent to v and the shortlex-least a with h = s_v·a⁻¹·s_q⁻¹ in the ball"""
        P = self.P
        factor = P.factor(v.side)
        s_v_inverse = P.inverse(self.s(v))
        for q in self.y1:
            if q.side != v.side:
                continue
            s_q = self.s(q)
            best: tuple[CanonicalForm, Word, Element] | None = None
            for h, word in self.ball.items():
                local = P.local(P.multiply(s_v_inverse, h, s_q), v.side)
                if local is None:
                    continue
                a = factor.inverse(local)
                if best is None or factor.key(a) < factor.key(best[2]):
                    best = (h, word, a)
            if best is not None:
                return (q, *best)
        return None

    def place(self, x: TreeVertex):
        P = self.P
        parent = preceding(x)
        assert parent is not None
        q, g, word = self.placements[parent]
        image = act(P, g, x)
        if image in self.groups or image in self.pairings:
            self.placements[x] = self.settle(image, g, word)
            return
        edge = self.find_edge(image)
        if edge is not None:
            c, h = edge
            c_parent = preceding(c)
            assert c_parent is not None
            near, far = (c, c_parent) if c.side == q.side else (c_parent, c)
            try:
                h_word = self.express(h, near, q)
            except DomainError as e:
                self.diagnostics.append(str(e))
            else:
                self.placements[x] = self.settle(far, P.multiply(P.inverse(h), g), h_word.inverse * word)
                return
        vertex = self.find_vertex(image)
        if vertex is not None:
            partner, h, h_word, a = vertex
            name = f"e{len(self.pairings) + 1}"
            self.pairings[image] = Pairing(image, partner, a, h, h_word, name)
            logger.debug("pairing %s: %s ~ %s", name, render_vertex(P, image), render_vertex(P, partner))
            self.placements[x] = self.settle(image, g, word)
            return
        self.add_vertex(image)
        self.placements[x] = _Placement(image, g, word)

    def collect_stabilizers(self):
        P = self.P
        for q in self.y1:
            factor = P.factor(q.side)
            s = self.s(q)
            s_inverse = P.inverse(s)
            group = self.groups[q]
            for a in factor.enumerate_ball(self.budgets.hball, self.budgets.memory).elements:
                if group.express(a) is not None:
                    continue
                if P.multiply(s, P.embed(q.side, a), s_inverse) in self.ball:
                    group.add(a)

    def regenerate(self) -> list[Word]:
        P = self.P
        expressions = []
        for generator in self.generators:
            q, g, word = self.placements[vertex_at(P, generator, Side.PLUS)]
            try:
                expressions.append(word.inverse * self.express(P.multiply(g, generator), D1, q))
            except DomainError as e:
                self.diagnostics.append(str(e))
                expressions.append(EMPTY)
        return expressions

    def build(self) -> FundamentalDomain | Inconclusive:
        P = self.P
        seeds = [D1, D_MINUS]
        for generator in self.generators:
            seeds.extend(vertex_at(P, generator, side) for side in Side)
        explored = sort_vertices(P, hull(seeds))
        deepest = max(v.depth for v in explored)
        if deepest > self.budgets.depth:
            return Inconclusive(
                f"the generators move d1 to depth {deepest}, beyond the depth budget {self.budgets.depth}",
                [f"raise --depth to at least {deepest}"],
            )
        self.add_vertex(D1)
        self.placements[D1] = _Placement(D1, P.identity, EMPTY)
        for x in explored[1:]:
            self.place(x)
        self.collect_stabilizers()
        expressions = self.regenerate()
        domain = FundamentalDomain(
            presentation=P,
            generators=self.generators,
            ball=self.ball,
            budgets=self.budgets,
            y1=tuple(self.y1),
            pairings=tuple(self.pairings.values()),
            groups=self.groups,
            expressions=tuple(expressions),
            diagnostics=tuple(self.diagnostics),
            certified=False,
            explored=len(explored),
        )
        problems = certification_problems(domain)
        domain.diagnostics = tuple(self.diagnostics + problems)
        domain.certified = not domain.diagnostics
        logger.info("%r after exploring %s vertices", domain, len(explored))
        return domain


def certification_problems(D: FundamentalDomain) -> list[str]:
    """Checks that the domain closes within the H-ball it was computed from"""
    P = D.presentation
    problems = []
    for j, (generator, expression) in enumerate(zip(D.generators, D.expressions)):
        if D.evaluate_z(expression) != generator:
            problems.append(f"generator h{j + 1} is not regenerated by {expression}")
    for pairing in D.pairings:
        if act(P, pairing.h, pairing.partner) != pairing.vertex:
            problems.append(f"{pairing.name} does not carry its partner onto {render_vertex(P, pairing.vertex)}")
    for k, u in enumerate(D.y1):
        for v in D.y1[k + 1:]:
            if u.side != v.side:
                continue
            s_u_inverse, s_v = P.inverse(D.s(u)), D.s(v)
            if D.ball.find(lambda h: P.local(P.multiply(s_u_inverse, h, s_v), u.side) is not None) is not None:
                problems.append(f"{render_vertex(P, u)} and {render_vertex(P, v)} are H-equivalent")
    return problems


def find_fixed_vertex(P: AmalgamPresentation, generators: Sequence[CanonicalForm], depth: int) -> TreeVertex | None:
    """The vertex nearest d₁ fixed by every generator, if there is one within `depth`

    A common fixed vertex nearest d₁ lies on some path [d₁, g·d₁], so the hull of
    the generators' translates of d₁ and d₋₁ is searched.
    """
    seeds = [D1, D_MINUS]
    for g in generators:
        seeds.extend(vertex_at(P, g, side) for side in Side)
    for v in sort_vertices(P, hull(seeds)):
        if v.depth > depth:
            break
        if all(fixes(P, g, v) for g in generators):
            return v
    return None


def elliptic_certificate(P: AmalgamPresentation, generators: Sequence[CanonicalForm], vertex: TreeVertex) -> EllipticCertificate:
    s = s_element(P, vertex)
    s_inverse = P.inverse(s)
    local = []
    for g in generators:
        a = P.local(P.multiply(s_inverse, g, s), vertex.side)
        if a is None:
            raise DomainError(f"{P.render(g)} does not fix {render_vertex(P, vertex)}")
        local.append(a)
    label = vertex.side.label
    if vertex in (D1, D_MINUS):
        reason = f"every generator lies in A{label}"
    else:
        reason = f"s_v⁻¹·H·s_v lies in A{label} for the conjugator s_v = {P.render(s)}"
    logger.info("H is conjugate into the factor A%s by %s", label, P.render(s))
    return EllipticCertificate(vertex, vertex.side, tuple(local), reason, s)


def compute_fundamental_domain(P: AmalgamPresentation, h_gens: Sequence[WordLike], budgets: Budgets) -> DomainResult:
    if budgets.hball <= 0 or budgets.depth <= 0:
        return Inconclusive("zero budgets", [f"budgets: {budgets.describe()}"])
    words = [P.parse(g) if isinstance(g, str) else g for g in h_gens]
    generators = [g for g in (P.element(w) for w in words) if not g.is_identity]
    if generators:
        vertex = find_fixed_vertex(P, generators, budgets.depth)
        if vertex is not None:
            return elliptic_certificate(P, generators, vertex)
    try:
        ball = SubgroupBall(P, generators, budgets.hball, limit=budgets.memory)
        return _DomainBuilder(P, generators, ball, budgets).build()
    except BudgetError as e:
        logger.warning("fundamental domain search ran out of budget: %s", e)
        return Inconclusive(str(e), [f"budgets: {budgets.describe()}"])
