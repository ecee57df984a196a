"""From normal forms in π₁(𝔹, Y₁) to reduced forms in G.

The transform multiplies the presentation-(1) forms of the normal-form terms u₁, u₂, … one at a time,
tracking for every vertex-group term the syllable that carries it (its core element), and
records after each step the nerve length and the case of the inductive construction that applies.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from logging import getLogger
from typing import NamedTuple

from .. import MalformedSequenceError
from ..amalgam import AmalgamPresentation, ReducedForm, Syllable
from ..bass_serre.graph import GraphOfGroups
from ..bass_serre.laws import LawReport, Tally, c_sample
from ..bass_serre.transversal import nerve_of_form, transversal_elements
from ..bass_serre.tree import TreeVertex, ancestors, precedes
from ..factors import Element
from ..words import render_word
from .sequences import EdgeStep, ReducedSequence, VertexTerm, check_reduced_sequence

logger = getLogger(__name__)

# (ẑ empty, û empty) -> subcase, per case
SUBCASES = {
    "1": {(False, False): "A", (True, False): "B", (False, True): "C", (True, True): "D"},
    "2": {(False, True): "A", (True, True): "B", (False, False): "C", (True, False): "D"},
    "3": {(False, True): "A", (True, False): "B", (False, False): "C", (True, True): "D"},
    "4": {(False, True): "A", (True, False): "B", (True, True): "C", (False, False): "D"},
}


class TermForm(NamedTuple):
    """Reduced form of one normal-form term: s_v·a·s_v⁻¹ or s_u·b·a⁻¹·s_q⁻¹"""

    syllables: tuple[Syllable, ...]
    core: int | None
    start: TreeVertex
    end: TreeVertex


def term_form(B: GraphOfGroups, term: VertexTerm | EdgeStep) -> TermForm:
    P = B.presentation
    if isinstance(term, VertexTerm):
        v = term.vertex
        path = v.path
        return TermForm(path + (Syllable(v.side, term.element),) + P.invert_syllables(path), len(path), v, v)
    e = term.edge
    assert e.label is not None and e.a is not None
    forward = (*e.source.path, e.label, Syllable(e.target.side, P.factor(e.target.side).inverse(e.a)),
               *P.invert_syllables(e.target.path))
    if term.sign > 0:
        return TermForm(tuple(forward), None, e.source, e.target)
    return TermForm(P.invert_syllables(forward), None, e.target, e.source)


class _TaggedReducer:
    """SyllableReducer that remembers which terms contributed to each syllable"""

    def __init__(self, presentation: AmalgamPresentation):
        self.presentation = presentation
        self.stack: list[Syllable] = []
        self.tags: list[frozenset[int]] = []
        self.lost: set[int] = set()

    def push(self, syllable: Syllable, tags: frozenset[int] = frozenset()):
        P = self.presentation
        side, u = syllable
        factor = P.factor(side)
        if self.stack and self.stack[-1].side == side:
            x = factor.multiply(self.stack.pop().element, u)
            tags |= self.tags.pop()
        elif len(self.stack) == 1 and P.is_c(*self.stack[0]):
            lone = self.stack.pop()
            x = factor.multiply(P.transfer(lone.element, lone.side, side), u)
            tags |= self.tags.pop()
        else:
            x = u
        if P.is_c(side, x):
            if factor.is_identity(x):
                self.lost |= tags
                return
            if self.stack:
                top = self.stack.pop()
                x = P.factor(top.side).multiply(top.element, P.transfer(x, side, top.side))
                side = top.side
                tags |= self.tags.pop()
        self.stack.append(Syllable(side, x))
        self.tags.append(tags)

    def form(self) -> ReducedForm:
        P = self.presentation
        in_c = not self.stack or (len(self.stack) == 1 and P.is_c(*self.stack[0]))
        return ReducedForm(tuple(self.stack), in_c)

    def cores(self) -> dict[int, int]:
        """term index k -> 1-based syllable position i_k"""
        return {k: position for position, tags in enumerate(self.tags, 1) for k in tags}


class TraceStep(NamedTuple):
    k: int
    branch: str
    word: str
    nerve: int
    cores: dict[int, int]


@dataclass
class AnnotatedReducedForm:
    form: ReducedForm
    terms: list[VertexTerm | EdgeStep]
    cores: dict[int, int]
    nerve: int
    K: int
    trace: list[TraceStep] = field(default_factory=list)
    checks: LawReport = field(default_factory=LawReport)

    @property
    def length(self) -> int:
        return self.form.length

    @property
    def n(self) -> int:
        return len(self.terms)

    @property
    def branches(self) -> list[str]:
        return [step.branch for step in self.trace]

    def lines(self) -> list[str]:
        lines = [f"step{s.k}: {s.word} ; branch = {s.branch} ; nerve = {s.nerve}" for s in self.trace]
        lines.append("core: " + (", ".join(str(self.cores[k]) for k in sorted(self.cores)) or "-"))
        lines.append(f"nerve: {self.nerve}")
        lines.append(f"K: {self.K}")
        return lines + self.checks.lines()


def _meet(u: TreeVertex, v: TreeVertex) -> TreeVertex:
    down = set(ancestors(v))
    return next(x for x in ancestors(u) if x in down)


def branch_of(B: GraphOfGroups, previous: VertexTerm | EdgeStep | None, current: VertexTerm | EdgeStep, prefix_in_c: bool) -> str:
    """Name of the case of the inductive construction that handles `current`"""
    if previous is None:
        return "base"
    if prefix_in_c:
        return "0.A" if isinstance(current, VertexTerm) else "0.B"
    before, after = term_form(B, previous), term_form(B, current)
    match isinstance(previous, VertexTerm), isinstance(current, VertexTerm):
        case True, True:
            kind = "1"
        case True, False:
            kind = "2"
        case False, False:
            kind = "3"
        case _:
            kind = "4"
    meet = _meet(before.end, after.start)
    return f"{kind}.{SUBCASES[kind][(meet == before.end, meet == after.start)]}"


def proposition_a_transform(B: GraphOfGroups, p: ReducedSequence) -> AnnotatedReducedForm:
    violated = check_reduced_sequence(p)
    if violated:
        raise MalformedSequenceError(f"{p.render()} is not reduced: conditions {violated} fail", violated)
    P = B.presentation
    D = B.domain
    terms = p.normal_form()
    if p.evaluate().in_c:
        raise MalformedSequenceError(f"{p.render()} represents an element of C")
    reducer = _TaggedReducer(P)
    trace: list[TraceStep] = []
    previous: VertexTerm | EdgeStep | None = None
    for k, term in enumerate(terms, 1):
        branch = branch_of(B, previous, term, reducer.form().in_c)
        form = term_form(B, term)
        for j, syllable in enumerate(form.syllables):
            reducer.push(syllable, frozenset({k}) if j == form.core else frozenset())
        current = reducer.form()
        nerve = nerve_of_form(D, current).length
        trace.append(TraceStep(k, branch, render_word(P.spell_syllables(current.syllables)), nerve, reducer.cores()))
        logger.debug("term %s: branch %s, nerve %s", k, branch, nerve)
        previous = term
    data = transversal_elements(D)
    annotated = AnnotatedReducedForm(reducer.form(), terms, reducer.cores(), trace[-1].nerve if trace else 0, data.K, trace)
    annotated.checks = check_annotated_form(B, annotated, reducer.lost)
    return annotated


def check_annotated_form(B: GraphOfGroups, W: AnnotatedReducedForm, lost: frozenset[int] | set[int] = frozenset(), radius: int = 2) -> LawReport:
    P = B.presentation
    D = B.domain
    data = transversal_elements(D)
    S = W.form.syllables
    n = W.n
    vertex_terms = [k for k, term in enumerate(W.terms, 1) if isinstance(term, VertexTerm)]

    tail = Tally("tail-shape", "W ends in x·s_v⁻¹ (or x·b⁻¹·s_q⁻¹) with the matching element not transversal")
    if n:
        last = W.terms[-1]
        form = term_form(B, last)
        q = form.end
        if isinstance(last, VertexTerm):
            suffix = P.invert_syllables(q.path)
        else:
            suffix = form.syllables[len(form.syllables) - len(q.path) - 1:]
        holds = len(S) > len(suffix) and tuple(S[len(S) - len(suffix):]) == tuple(suffix)
        if holds:
            x = S[len(S) - len(suffix) - 1]
            factor = P.factor(x.side)
            witness = [*q.path, *P.invert_syllables(suffix[:len(suffix) - len(q.path)]), Syllable(x.side, factor.inverse(x.element))]
            holds = not P.is_c(*x) and not data.is_transversal(P.canonical_from_syllables(witness))
        tail.check(holds, f"term {n}")

    growth = Tally("nerve-grows", "nerve length never drops and grows except when a stable letter leaves the vertex just used")
    for before, after in zip(W.trace, W.trace[1:]):
        strict = after.branch != "2.B"
        holds = after.nerve > before.nerve if strict else after.nerve >= before.nerve
        growth.check(holds, f"step {after.k} ({after.branch}): {before.nerve} -> {after.nerve}")

    order = Tally("core-order", "each vertex-group term has a core element outside C and core positions increase")
    for k in vertex_terms:
        position = W.cores.get(k)
        order.check(k not in lost and position is not None and not P.is_c(*S[position - 1]), f"term {k}")
    positions = [W.cores[k] for k in vertex_terms if k in W.cores]
    for first, second in zip(positions, positions[1:]):
        order.check(first < second, f"positions {first}, {second}")

    shape = Tally("core-shape", "core elements are f·a·f' (f·a for the last term) with f, f' from Σ, modulo C")
    for k in vertex_terms:
        if k not in W.cores:
            continue
        term = W.terms[k - 1]
        assert isinstance(term, VertexTerm)
        core = S[W.cores[k] - 1]
        holds = core.side == term.vertex.side and _core_shape(P, data.sigma_on(core.side), core, term.element, k == n, radius)
        shape.check(holds, f"term {k}: {P.render_syllable(core)}")

    tail_core = Tally("last-core-is-tail", "when the last term is a vertex-group term its core is the syllable x before s_v⁻¹")
    if n and isinstance(W.terms[-1], VertexTerm):
        depth = len(W.terms[-1].vertex.path)
        tail_core.check(W.cores.get(n) == len(S) - depth, f"term {n}")

    adjacent = Tally("adjacent-cores", "adjacent core elements come from preceding vertex terms or surround one stable letter")
    owner = {position: k for k, position in W.cores.items()}
    for position in sorted(owner):
        if position + 1 not in owner:
            continue
        s, t = owner[position], owner[position + 1]
        first, second = W.terms[s - 1], W.terms[t - 1]
        assert isinstance(first, VertexTerm) and isinstance(second, VertexTerm)
        nested = precedes(first.vertex, second.vertex) or precedes(second.vertex, first.vertex)
        around = t == s + 2 and isinstance(W.terms[s], EdgeStep)
        adjacent.check((t == s + 1 and nested) or around, f"terms {s}, {t}")

    bounded = Tally("non-core-bounded", "every syllable that is not a core element has factor length at most K")
    cores = set(W.cores.values())
    for position, syllable in enumerate(S, 1):
        if position in cores:
            continue
        size = P.factor(syllable.side).length(syllable.element)
        bounded.check(size <= W.K, f"syllable {position}: length {size} > K = {W.K}" if size > W.K else f"syllable {position}")

    return LawReport(t.entry() for t in (tail, growth, order, shape, tail_core, adjacent, bounded))


def _core_shape(P: AmalgamPresentation, sigma: list[Element], core: Syllable, a: Element, last: bool, radius: int) -> bool:
    side = core.side
    factor = P.factor(side)
    single = [factor.identity, *sigma]
    left = single + [factor.multiply(f, g) for f in sigma for g in sigma]
    right = [factor.identity] if last else single
    a_inverse = factor.inverse(a)
    cs = c_sample(P, side, radius)
    for f_right in right:
        y = factor.multiply(core.element, factor.inverse(f_right))
        for f_left in left:
            z = factor.multiply(factor.inverse(f_left), y)
            if any(P.is_c(side, factor.product(a_inverse, factor.inverse(c), z)) for c in cs):
                return True
    return False
