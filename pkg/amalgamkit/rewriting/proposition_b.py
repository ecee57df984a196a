"""Quasigeodesic normal forms for G seen as a graph of groups with one edge.

The pipeline rewrites a word over X₁ ∪ X₋₁ in five steps into W₁…W_n, where every W_k is the edge
letter (or its inverse) or a factor-geodesic word, and the barred sequence is reduced. Each step
leaves one `step<k>: <word>` line in the trace.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from logging import getLogger
from typing import Iterable, NamedTuple

from ..amalgam import AmalgamPresentation, WordLike, reduce_to_syllables
from ..bass_serre.laws import c_sample
from ..constants import CosetSide, Side
from ..factors import Element
from ..words import EMPTY, Letter, Word, letter, render_word

logger = getLogger(__name__)

EDGE = "y1"


class Segment(NamedTuple):
    """A factor-geodesic word on `side`, or the edge letter when side is None"""

    side: Side | None
    word: Word

    @property
    def is_edge(self) -> bool:
        return self.side is None

    def render(self) -> str:
        return render_word(self.word) if self.side is not None else render_word(self.word).replace("'", "^-1")


@dataclass
class PipelineResult:
    segments: list[Segment]
    trace: list[str] = field(default_factory=list)
    collapses: list[int] = field(default_factory=list)

    @property
    def word(self) -> Word:
        """The output over X₁ ∪ X₋₁ (edge letters evaluate to 1)"""
        out = EMPTY
        for segment in self.vertex_segments:
            out = out * segment.word
        return out

    @property
    def vertex_segments(self) -> list[Segment]:
        return [s for s in self.segments if not s.is_edge]

    @property
    def claim_bound(self) -> int:
        """Largest l_k − i_k seen in Step 4"""
        return max(self.collapses, default=0)

    def lines(self) -> list[str]:
        rendered = " ".join(f"({s.render()})" if not s.is_edge else s.render() for s in self.segments) or "1"
        return self.trace + [f"output: {rendered}", f"claim: max l_k - i_k = {self.claim_bound}"]


class _Path:
    """g₁, e₁, g₂, …, e_k, g_{k+1} in the single-edge graph of groups; edge signs +1 go from A₁ to A₋₁"""

    def __init__(self, P: AmalgamPresentation, sides: list[Side], elements: list[Element], signs: list[int]):
        self.P = P
        self.sides = sides
        self.elements = elements
        self.signs = signs

    def factor(self, k: int):
        return self.P.factor(self.sides[k])

    def trivial(self, k: int) -> bool:
        return self.factor(k).is_identity(self.elements[k])

    def in_c(self, k: int) -> bool:
        return self.P.is_c(self.sides[k], self.elements[k])

    def moved(self, k: int, target: Side) -> Element:
        return self.P.transfer(self.elements[k], self.sides[k], target)

    def pinch(self) -> bool:
        """Collapse e, c, e⁻¹ with c ∈ C into the vertex before"""
        for i in range(len(self.signs) - 1):
            if self.signs[i] == -self.signs[i + 1] and self.in_c(i + 1):
                factor = self.factor(i)
                self.elements[i] = factor.product(self.elements[i], self.moved(i + 1, self.sides[i]), self.elements[i + 2])
                del self.signs[i:i + 2]
                del self.elements[i + 1:i + 3]
                del self.sides[i + 1:i + 3]
                return True
        return False

    def pull_left(self) -> bool:
        for i in range(1, len(self.elements)):
            if not self.trivial(i) and self.in_c(i):
                target = self.sides[i - 1]
                self.elements[i - 1] = self.P.factor(target).multiply(self.elements[i - 1], self.moved(i, target))
                self.elements[i] = self.factor(i).identity
                return True
        return False

    def pull_through(self) -> bool:
        nontrivial = [k for k in range(len(self.elements)) if not self.trivial(k)]
        for i, j in zip(nontrivial, nontrivial[1:]):
            if self.in_c(i):
                target = self.sides[j]
                self.elements[j] = self.P.factor(target).multiply(self.moved(i, target), self.elements[j])
                self.elements[i] = self.factor(i).identity
                return True
        return False

    def segments(self, keep_trivial: bool = False) -> list[Segment]:
        out = []
        for k, element in enumerate(self.elements):
            if keep_trivial or not self.trivial(k):
                out.append(Segment(self.sides[k], self.factor(k).spell(element)))
            if k < len(self.signs):
                out.append(Segment(None, letter(EDGE, self.signs[k])))
        return out

    def render(self) -> str:
        return render_segments(self.segments())


def render_segments(segments: Iterable[Segment]) -> str:
    word = EMPTY
    for segment in segments:
        word = Word(tuple(word) + tuple(segment.word))
    return render_word(word)


def _runs(P: AmalgamPresentation, word: Iterable[Letter]) -> list[tuple[Side, Word]]:
    runs: list[tuple[Side, list[Letter]]] = []
    for read in word:
        side = P.side_of(read[0])
        if runs and runs[-1][0] == side:
            runs[-1][1].append(read)
        else:
            runs.append((side, [read]))
    return [(side, Word(tuple(letters))) for side, letters in runs]


def _home(P: AmalgamPresentation, word: Word) -> tuple[Side, Element] | None:
    """The factor containing the element of `word`, preferring A₁ for elements of C"""
    g = P.element(word)
    for side in Side:
        local = P.local(g, side)
        if local is not None:
            return side, local
    return None


def proposition_b_pipeline(P: AmalgamPresentation, source: WordLike) -> PipelineResult:
    if isinstance(source, str):
        word = P.parse(source)
    elif isinstance(source, Word):
        word = source
    else:
        word = P.word_of(source)
    trace: list[str] = []

    # Step 1: maximal pieces lying in a vertex group, respelled as factor geodesics
    pieces = [(side, w, P.factor(side).evaluate(w)) for side, w in _runs(P, word)]
    merged = True
    while merged:
        merged = False
        for i in range(len(pieces)):
            for j in range(len(pieces) - 1, i, -1):
                joined = EMPTY
                for _, w, _ in pieces[i:j + 1]:
                    joined = joined * w
                home = _home(P, joined)
                if home is not None:
                    pieces[i:j + 1] = [(home[0], joined, home[1])]
                    merged = True
                    break
            if merged:
                break
    sides = [side for side, _, _ in pieces]
    elements = [element for _, _, element in pieces]
    trace.append("step1: " + render_segments(Segment(s, P.factor(s).spell(g)) for s, g in zip(sides, elements)))

    # Step 2: edge paths between consecutive vertex groups, and back to A₁ at both ends
    path_sides: list[Side] = [Side.PLUS]
    path_elements: list[Element] = [P.factor(Side.PLUS).identity]
    signs: list[int] = []
    for side, element in zip(sides, elements):
        if side != path_sides[-1]:
            signs.append(1 if side is Side.MINUS else -1)
            path_sides.append(side)
            path_elements.append(P.factor(side).identity)
        path_elements[-1] = P.factor(side).multiply(path_elements[-1], element)
    if path_sides[-1] is Side.MINUS:
        signs.append(-1)
        path_sides.append(Side.PLUS)
        path_elements.append(P.factor(Side.PLUS).identity)
    path = _Path(P, path_sides, path_elements, signs)
    trace.append("step2: " + path.render())

    # Step 3: loops e⁻¹·u·e around elements of C collapse into the vertex group they return to
    while path.pinch():
        pass
    trace.append("step3: " + path.render())

    # Step 4: runs of edges joined by C-elements; l_k - i_k counts edge pairs with infinite common image
    collapses = []
    run = 0
    for k in range(1, len(path.elements)):
        inside = 0 < k < len(path.signs) and path.in_c(k)
        if inside:
            run += 1
        else:
            collapses.append(run if not P.c_is_finite else 0)
            run = 0
    while path.pull_left() or path.pinch():
        pass
    trace.append("step4: " + path.render())

    # Step 5: elements of C are pulled through to the next nontrivial term
    while path.pull_through() or path.pinch():
        pass
    trace.append("step5: " + path.render())
    segments = path.segments()
    logger.debug("pipeline output %s", render_segments(segments))
    return PipelineResult(segments, trace, collapses)


class Lemma31Form(NamedTuple):
    syllables: list[tuple[Side, Word]]
    trace: list[str]
    # (side, z_k, x_{k+1}) for every pair of C-tails merged in Step 2
    seams: tuple[tuple[Side, Element, Element], ...] = ()

    @property
    def word(self) -> Word:
        out = EMPTY
        for _, w in self.syllables:
            out = out * w
        return out

    @property
    def s(self) -> int:
        return len(self.syllables) - 1


def _double_coset_split(P: AmalgamPresentation, side: Side, g: Element, radius: int) -> tuple[Element, Element, Element]:
    """g = x·v·z with x, z in C and v shortest in C·g·C among the sampled elements of C"""
    factor = P.factor(side)
    best = (factor.identity, g, factor.identity)
    sample = c_sample(P, side, radius)
    for x in sample:
        left = factor.multiply(factor.inverse(x), g)
        for z in sample:
            v = factor.multiply(left, factor.inverse(z))
            if factor.key(v) < factor.key(best[1]):
                best = (x, v, z)
    return best


def lemma31_form(P: AmalgamPresentation, w: WordLike, radius: int = 2) -> Lemma31Form:
    """u₀u₁…u_s with factor-geodesic u_k, coset-shortest in C·ū_k for k > 0"""
    g = P.element(w)
    if g.in_c:
        u0 = P.factor(Side.PLUS).spell(g.tail)
        return Lemma31Form([(Side.PLUS, u0)], [f"step1: {render_word(u0)}"])
    form = reduce_to_syllables(P, g)
    trace = []
    split = [(s.side, *_double_coset_split(P, s.side, s.element, radius)) for s in form.syllables]

    trace.append("step1: " + _spelled(P, ((side, e) for side, x, v, z in split for e in (x, v, z))))

    # Step 2: adjacent C-tails z_k·x_{k+1} merge into one element of C, kept on the left syllable's side
    middles: list[tuple[Side, Element]] = []
    seams: list[tuple[Side, Element, Element]] = []
    for k, (side, x, v, z) in enumerate(split):
        if k == 0:
            middles.append((side, x))
        middles.append((side, v))
        if k + 1 < len(split):
            following = split[k + 1]
            x_next = P.transfer(following[1], following[0], side)
            seams.append((side, z, x_next))
            middles.append((side, P.factor(side).multiply(z, x_next)))
        else:
            middles.append((side, z))
    trace.append("step2: " + _spelled(P, middles))

    # Step 3: right-to-left coset normalisation; q_k is the C-element carried out of syllable k
    carry_side, carry = Side.PLUS, P.factor(Side.PLUS).identity
    out: list[tuple[Side, Word]] = []
    carried: list[tuple[Side, Element]] = []
    syllables = list(form.syllables)
    for k in range(len(syllables) - 1, 0, -1):
        side, element = syllables[k]
        factor = P.factor(side)
        value = factor.multiply(element, P.transfer(carry, carry_side, side))
        u = factor.coset_representative(P.recognizer(side), value, CosetSide.RIGHT)
        out.append((side, factor.spell(u)))
        carry_side, carry = side, factor.multiply(value, factor.inverse(u))
        carried.append((side, carry))
    side, element = syllables[0]
    factor = P.factor(side)
    out.append((side, factor.spell(factor.multiply(element, P.transfer(carry, carry_side, side)))))
    out.reverse()
    carried.reverse()

    def pair(side: Side, q: Element, inverse_first: bool) -> list[tuple[Side, Element]]:
        q_inverse = P.factor(side).inverse(q)
        return [(side, q_inverse), (side, q)] if inverse_first else [(side, q), (side, q_inverse)]

    inserted: list[tuple[Side, Element]] = []
    for k, (side, x, v, z) in enumerate(split):
        if k == 0:
            inserted.append((side, x))
        inserted.append((side, v))
        if k + 1 < len(split):
            inserted.append(middles[2 * k + 2])
            inserted.extend(pair(*carried[k], inverse_first=False))
        else:
            inserted.append((side, z))
    trace.append("step3: " + _spelled(P, inserted))

    # Step 4: regroup as u₀·q₁⁻¹·q₁·u₁⋯
    regrouped: list[tuple[Side, Word]] = [out[0]]
    for k in range(1, len(out)):
        for side, q in pair(*carried[k - 1], inverse_first=True):
            regrouped.append((side, P.factor(side).spell(q)))
        regrouped.append(out[k])
    trace.append("step4: " + render_word(Word(tuple(read for _, w in regrouped for read in w))))

    # Step 5: cancel each q_k⁻¹·q_k
    trace.append("step5: " + render_word(Word(tuple(read for _, u in out for read in u))))
    return Lemma31Form(out, trace, tuple(seams))


def _spelled(P: AmalgamPresentation, parts: Iterable[tuple[Side, Element]]) -> str:
    return render_word(Word(tuple(read for side, e in parts for read in P.factor(side).spell(e))))
