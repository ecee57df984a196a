"""Reduced sequences in π₁(𝔹, Y₁).

A sequence (g₁, e₁, g₂, …, e_k, g_{k+1}) alternates vertex-group elements, stored in the local
coordinates of their vertex (an element of A_v, meaning s_v·g·s_v⁻¹ in G), and oriented edges of 𝔹.
Tree edges evaluate to 1 and stable edges e to h_e.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from logging import getLogger
from typing import Iterable, NamedTuple

from .. import AlphabetError, AmalgamError, MalformedSequenceError
from ..amalgam import CanonicalForm, syllable_length
from ..bass_serre.graph import BEdge, GraphOfGroups
from ..bass_serre.tree import D1, TreeVertex, render_vertex
from ..factors import Element
from ..words import Letter, Word, render_word

logger = getLogger(__name__)

CONDITIONS = {
    1: "edge path",
    2: "vertex-group membership",
    3: "starts and ends at d1",
    4: "no e,1,e^-1",
    5: "g_i outside the omega-image",
    6: "no pull-through",
}


class EdgeStep(NamedTuple):
    """An edge of 𝔹 traversed along (sign 1) or against (sign -1) its orientation"""

    edge: BEdge
    sign: int = 1

    @property
    def start(self) -> TreeVertex:
        return self.edge.source if self.sign > 0 else self.edge.target

    @property
    def end(self) -> TreeVertex:
        return self.edge.target if self.sign > 0 else self.edge.source

    @property
    def is_stable(self) -> bool:
        return self.edge.is_stable

    @property
    def inverse(self) -> EdgeStep:
        return EdgeStep(self.edge, -self.sign)

    def push_right(self, B: GraphOfGroups, x: Element) -> Element | None:
        """The element at the end vertex equal to x across this edge, if x lies in the boundary image"""
        return B.transport(self.edge, x, forward=self.sign > 0)

    def pull_left(self, B: GraphOfGroups, x: Element) -> Element | None:
        return B.transport(self.edge, x, forward=self.sign < 0)

    def render(self) -> str:
        return self.edge.name if self.sign > 0 else f"{self.edge.name}'"


class VertexTerm(NamedTuple):
    vertex: TreeVertex
    element: Element


@dataclass(frozen=True)
class ReducedSequence:
    graph: GraphOfGroups = field(compare=False, repr=False)
    vertices: tuple[TreeVertex, ...]
    elements: tuple[Element, ...]
    steps: tuple[EdgeStep, ...]

    def __len__(self) -> int:
        return len(self.steps)

    def terms(self) -> list[VertexTerm | EdgeStep]:
        """g₁, e₁, g₂, …, e_k, g_{k+1}"""
        out: list[VertexTerm | EdgeStep] = []
        for k, step in enumerate(self.steps):
            out.append(VertexTerm(self.vertices[k], self.elements[k]))
            out.append(step)
        out.append(VertexTerm(self.vertices[-1], self.elements[-1]))
        return out

    def is_trivial_term(self, k: int) -> bool:
        return self.graph.presentation.factor(self.vertices[k].side).is_identity(self.elements[k])

    def evaluate(self) -> CanonicalForm:
        B = self.graph
        P = B.presentation
        values = []
        for term in self.terms():
            if isinstance(term, EdgeStep):
                if term.is_stable:
                    h = B.domain.z_value(term.edge.name)
                    values.append(h if term.sign > 0 else P.inverse(h))
            else:
                values.append(B.local_to_global(term.vertex, term.element))
        return P.multiply(*values)

    def normal_form(self) -> list[VertexTerm | EdgeStep]:
        """Drop trivial vertex terms and tree edges (both equal 1 in H)"""
        out: list[VertexTerm | EdgeStep] = []
        for k, term in enumerate(self.terms()):
            if isinstance(term, EdgeStep):
                if term.is_stable:
                    out.append(term)
            elif not self.is_trivial_term(k // 2):
                out.append(term)
        return out

    @property
    def stable_count(self) -> int:
        return sum(1 for step in self.steps if step.is_stable)

    def render(self) -> str:
        P = self.graph.presentation
        parts = []
        for term in self.terms():
            if isinstance(term, EdgeStep):
                parts.append(term.render())
            else:
                parts.append(P.factor(term.vertex.side).render(term.element))
        return "(" + ", ".join(parts) + ")"


def render_normal_form(B: GraphOfGroups, terms: Iterable[VertexTerm | EdgeStep]) -> str:
    P = B.presentation
    parts = []
    for term in terms:
        if isinstance(term, EdgeStep):
            parts.append(term.render())
        else:
            parts.append(f"[{P.factor(term.vertex.side).render(term.element)}]@v{B.domain.index(term.vertex)}")
    return " ".join(parts) or "1"


class _Builder:
    def __init__(self, B: GraphOfGroups):
        self.B = B
        self.vertices: list[TreeVertex] = [D1]
        self.elements: list[Element] = [B.presentation.factor(D1.side).identity]
        self.steps: list[EdgeStep] = []

    def factor(self, v: TreeVertex):
        return self.B.presentation.factor(v.side)

    @property
    def here(self) -> TreeVertex:
        return self.vertices[-1]

    def traverse(self, step: EdgeStep):
        self.steps.append(step)
        self.vertices.append(step.end)
        self.elements.append(self.factor(step.end).identity)

    def travel(self, target: TreeVertex):
        path = self.B.tree_path(self.here, target)
        for x, y in zip(path, path[1:]):
            self.traverse(self.tree_step(x, y))

    def tree_step(self, x: TreeVertex, y: TreeVertex) -> EdgeStep:
        for e in self.B.tree_edges:
            if e.source == x and e.target == y:
                return EdgeStep(e, 1)
            if e.source == y and e.target == x:
                return EdgeStep(e, -1)
        raise AmalgamError(f"no Y1 edge between {render_vertex(self.B.presentation, x)} and {render_vertex(self.B.presentation, y)}")

    def multiply(self, element: Element):
        v = self.here
        self.elements[-1] = self.factor(v).multiply(self.elements[-1], element)

    def feed(self, name: str, sign: int):
        B = self.B
        D = B.domain
        if name.startswith("v") and "." in name:
            k, j = name[1:].split(".", 1)
            v = D.y1[int(k)]
            generator = D.groups[v].generators[int(j) - 1]
            self.travel(v)
            factor = self.factor(v)
            self.multiply(generator if sign > 0 else factor.inverse(generator))
            return
        try:
            e = B.edge(name)
        except KeyError:
            raise AlphabetError(f"{name} is not a letter of the induced presentation") from None
        step = EdgeStep(e, 1 if sign > 0 else -1)
        self.travel(step.start)
        self.traverse(step)

    def close(self):
        self.travel(D1)


def _settle(B: GraphOfGroups, vertices: list[TreeVertex], elements: list[Element], steps: list[EdgeStep]):
    """Rewrite in place until conditions 4, 5 and 6 hold"""
    P = B.presentation

    def factor(k: int):
        return P.factor(vertices[k].side)

    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(steps) - 1:
            first, second = steps[i], steps[i + 1]
            if first.edge.name == second.edge.name and first.sign == -second.sign:
                back = first.pull_left(B, elements[i + 1])
                if back is not None:
                    elements[i] = factor(i).product(elements[i], back, elements[i + 2])
                    del steps[i:i + 2]
                    del elements[i + 1:i + 3]
                    del vertices[i + 1:i + 3]
                    logger.debug("cancelled %s,%s at position %s", first.render(), second.render(), i)
                    changed = True
                    i = max(i - 1, 0)
                    continue
            i += 1
        for i in range(1, len(elements)):
            if factor(i).is_identity(elements[i]):
                continue
            back = steps[i - 1].pull_left(B, elements[i])
            if back is not None:
                elements[i - 1] = factor(i - 1).multiply(elements[i - 1], back)
                elements[i] = factor(i).identity
                changed = True
        if changed:
            continue
        nontrivial = [k for k in range(len(elements)) if not factor(k).is_identity(elements[k])]
        for i, j in zip(nontrivial, nontrivial[1:]):
            x: Element | None = elements[i]
            for step in steps[i:j]:
                x = step.push_right(B, x)
                if x is None:
                    break
            if x is not None:
                elements[j] = factor(j).multiply(x, elements[j])
                elements[i] = factor(i).identity
                logger.debug("pushed term %s into term %s", i, j)
                changed = True
                break


def h_reduced_sequence(B: GraphOfGroups, w: Iterable[Letter]) -> ReducedSequence:
    """The reduced sequence of a word over the generators of presentation (2)"""
    builder = _Builder(B)
    for name, sign in w:
        builder.feed(name, sign)
    builder.close()
    vertices, elements, steps = builder.vertices, builder.elements, builder.steps
    _settle(B, vertices, elements, steps)
    sequence = ReducedSequence(B, tuple(vertices), tuple(elements), tuple(steps))
    violated = check_reduced_sequence(sequence)
    if violated:
        raise MalformedSequenceError(f"rewriting left conditions {violated} violated in {sequence.render()}", violated)
    return sequence


def check_reduced_sequence(p: ReducedSequence) -> list[int]:
    """Numbers of the reduced-sequence conditions p violates, checked from scratch"""
    B = p.graph
    D = B.domain
    violated: set[int] = set()
    k = len(p.steps)
    if len(p.vertices) != k + 1 or len(p.elements) != k + 1:
        return [1]
    for i, step in enumerate(p.steps):
        if step.start != p.vertices[i] or step.end != p.vertices[i + 1]:
            violated.add(1)
    for v, g in zip(p.vertices, p.elements):
        if not D.in_y1(v) or D.group(v).express(g) is None:
            violated.add(2)
    if p.vertices[0] != D1 or p.vertices[-1] != D1:
        violated.add(3)
    for i in range(k - 1):
        first, second = p.steps[i], p.steps[i + 1]
        if first.edge.name == second.edge.name and first.sign == -second.sign and p.is_trivial_term(i + 1):
            violated.add(4)
    for i in range(1, k + 1):
        if not p.is_trivial_term(i) and p.steps[i - 1].pull_left(B, p.elements[i]) is not None:
            violated.add(5)
    nontrivial = [i for i in range(k + 1) if not p.is_trivial_term(i)]
    for i, j in zip(nontrivial, nontrivial[1:]):
        x: Element | None = p.elements[i]
        for step in p.steps[i:j]:
            x = step.push_right(B, x)
            if x is None:
                break
        if x is not None:
            violated.add(6)
    if violated:
        logger.debug("sequence %s violates %s", p.render(), sorted(violated))
    return sorted(violated)


def normal_form(B: GraphOfGroups, w: Iterable[Letter]) -> list[VertexTerm | EdgeStep]:
    return h_reduced_sequence(B, w).normal_form()


class SyllableBound(NamedTuple):
    n_stable: int
    m: int

    @property
    def ok(self) -> bool:
        return self.m >= self.n_stable


def syllable_lower_bound(B: GraphOfGroups, w: Word) -> SyllableBound:
    """Stable letters in the normal form of w against the syllable length of w in G"""
    sequence = h_reduced_sequence(B, w)
    m = syllable_length(B.presentation, B.domain.evaluate_z(w))
    bound = SyllableBound(sequence.stable_count, m)
    if not bound.ok:
        logger.warning("%s stable letters but syllable length %s for %s", bound.n_stable, m, render_word(w))
    return bound
