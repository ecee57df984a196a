from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from logging import getLogger
from typing import Iterable, NamedTuple, Sequence, Union

from . import AlphabetError, MalformedAmalgamError, UnsupportedAmalgamError, ValidationError
from .constants import CosetSide, Side, Strategy
from .factors import Element, FactorGroup, SubgroupRecognizer
from .factors.main import FactorKind
from .words import EMPTY, GeneratorOrdering, Letter, Word, free_reduce, parse_word, render_word

logger = getLogger(__name__)


@dataclass
class FactorData:
    kind: str
    generators: list[str]
    order: list[str] = field(default_factory=list)
    elements: list[str] = field(default_factory=list)
    table: dict[tuple[str, str], str] = field(default_factory=dict)
    line: int | None = None


@dataclass
class PresentationData:
    """Raw, unvalidated amalgam data as read from a presentation file or built by the catalog"""

    factors: dict[Side, FactorData]
    c_names: list[str]
    images: dict[Side, list[str]]
    name: str = ""


class Syllable(NamedTuple):
    side: Side
    element: Element


class ReducedForm(NamedTuple):
    syllables: tuple[Syllable, ...]
    in_c: bool

    @property
    def length(self) -> int:
        return 0 if self.in_c else len(self.syllables)


@dataclass(frozen=True)
class CanonicalForm:
    """g = t₁…t_k·c with t_j transversal representatives and the tail c stored on side 1"""

    syllables: tuple[Syllable, ...]
    tail: Element
    tail_word: Word = field(compare=False, default=EMPTY)

    @property
    def length(self) -> int:
        return len(self.syllables)

    @property
    def in_c(self) -> bool:
        return not self.syllables

    @property
    def is_identity(self) -> bool:
        return not self.syllables and not self.tail_word

    @property
    def coset(self) -> tuple[Syllable, ...]:
        """Key of the left coset gC"""
        return self.syllables

    @property
    def last_side(self) -> Side | None:
        return self.syllables[-1].side if self.syllables else None


WordLike = Union[Word, CanonicalForm, str]


def build_factor(data: FactorData) -> FactorGroup:
    kind = FactorKind.get(data.kind)
    if data.order:
        ordering = GeneratorOrdering.from_order(data.order)
        if set(ordering.symbols) != set(data.generators):
            raise ValidationError(f"order does not list exactly the generators {','.join(data.generators)}")
    else:
        ordering = GeneratorOrdering(data.generators)
    match kind:
        case FactorKind.FREE:
            return kind.factor(ordering)
        case FactorKind.FINITE:
            return kind.factor(ordering, data.elements, data.table)  # type: ignore[call-arg]


class AmalgamPresentation:
    """G = A₁ ∗_C A₋₁ with C given by its generator images in both factors"""

    def __init__(self, factors: dict[Side, FactorGroup], c_names: Sequence[str], images: dict[Side, Sequence[Word]], name: str = ""):
        self.name = name
        self._transfers: dict[tuple[Element, Side, Side], Element] = {}
        self._factors = dict(factors)
        self.c_names = tuple(c_names)
        self.image_words = {side: tuple(images[side]) for side in Side}
        self.images = {side: tuple(self._factors[side].evaluate(w) for w in self.image_words[side]) for side in Side}
        self._recognizers = {side: self._factors[side].build_recognizer(self.images[side], self.c_names) for side in Side}
        self.ordering = self._factors[Side.PLUS].ordering.merged(self._factors[Side.MINUS].ordering)
        self._sides = {name: side for side in Side for name in self._factors[side].generators}

    def __repr__(self) -> str:
        return "<AmalgamPresentation {}>".format(self.name or ",".join(self.ordering.symbols))

    def factor(self, side: Side) -> FactorGroup:
        return self._factors[side]

    def recognizer(self, side: Side) -> SubgroupRecognizer:
        return self._recognizers[side]

    @property
    def c_is_finite(self) -> bool:
        return self._recognizers[Side.PLUS].is_finite

    def side_of(self, name: str) -> Side:
        try:
            return self._sides[name]
        except KeyError:
            raise AlphabetError(f"generator {name} belongs to neither factor") from None

    def is_c(self, side: Side, element: Element) -> bool:
        return self._recognizers[side].is_member(element)

    def c_word(self, side: Side, element: Element) -> Word:
        certificate = self._recognizers[side].express(element)
        if certificate is None:
            raise ValueError(f"{self._factors[side].render(element)} is not in C")
        return certificate

    def evaluate_c(self, word: Iterable[Letter], side: Side) -> Element:
        factor = self._factors[side]
        values = dict(zip(self.c_names, self.images[side]))
        result = factor.identity
        for name, sign in word:
            value = values[name]
            result = factor.multiply(result, value if sign > 0 else factor.inverse(value))
        return result

    def transfer(self, element: Element, source: Side, target: Side) -> Element:
        """Move an element of C from its source-side representation to the target side"""
        if source == target:
            return element
        key = (element, source, target)
        if key not in self._transfers:
            self._transfers[key] = self.evaluate_c(self.c_word(source, element), target)
        return self._transfers[key]

    def parse(self, text: str) -> Word:
        return parse_word(text, self.ordering)

    def syllables_of(self, word: Iterable[Letter]) -> list[Syllable]:
        word = free_reduce(word, self.ordering)
        syllables = []
        run: list[Letter] = []
        run_side = None
        for read in word:
            side = self.side_of(read[0])
            if run and side != run_side:
                syllables.append(Syllable(run_side, self._factors[run_side].evaluate(run)))
                run = []
            run.append(read)
            run_side = side
        if run:
            syllables.append(Syllable(run_side, self._factors[run_side].evaluate(run)))
        return syllables

    def canonical_from_syllables(self, syllables: Iterable[Syllable]) -> CanonicalForm:
        out: list[Syllable] = []
        carry_side, carry = Side.PLUS, self._factors[Side.PLUS].identity
        for side, u in syllables:
            factor = self._factors[side]
            x = factor.multiply(self.transfer(carry, carry_side, side), u)
            if out and out[-1].side == side:
                x = factor.multiply(out.pop().element, x)
            if self.is_c(side, x):
                carry_side, carry = side, x
                continue
            t = factor.coset_representative(self._recognizers[side], x, CosetSide.LEFT)
            out.append(Syllable(side, t))
            carry_side, carry = side, factor.multiply(factor.inverse(t), x)
        tail = self.transfer(carry, carry_side, Side.PLUS)
        return CanonicalForm(tuple(out), tail, self.c_word(Side.PLUS, tail))

    def element(self, value: WordLike) -> CanonicalForm:
        if isinstance(value, CanonicalForm):
            return value
        if isinstance(value, str):
            value = self.parse(value)
        return self.canonical_from_syllables(self.syllables_of(value))

    @property
    def identity(self) -> CanonicalForm:
        return self.canonical_from_syllables(())

    def syllables_with_tail(self, g: CanonicalForm) -> tuple[Syllable, ...]:
        """A reduced form of g: the tail is merged into the last syllable"""
        if not g.syllables:
            return () if g.is_identity else (Syllable(Side.PLUS, g.tail),)
        *head, (side, t) = g.syllables
        factor = self._factors[side]
        return (*head, Syllable(side, factor.multiply(t, self.transfer(g.tail, Side.PLUS, side))))

    def multiply(self, *elements: WordLike) -> CanonicalForm:
        syllables: list[Syllable] = []
        for value in elements:
            syllables.extend(self.syllables_with_tail(self.element(value)))
        return self.canonical_from_syllables(syllables)

    def inverse(self, g: WordLike) -> CanonicalForm:
        return self.canonical_from_syllables(self.invert_syllables(self.syllables_with_tail(self.element(g))))

    def invert_syllables(self, syllables: Sequence[Syllable]) -> tuple[Syllable, ...]:
        return tuple(Syllable(side, self._factors[side].inverse(u)) for side, u in reversed(syllables))

    def invert_form(self, form: ReducedForm) -> ReducedForm:
        return ReducedForm(self.invert_syllables(form.syllables), form.in_c)

    def local(self, g: CanonicalForm, side: Side) -> Element | None:
        """The factor element of side `side` equal to g, if g lies in that factor"""
        if not g.syllables:
            return self.transfer(g.tail, Side.PLUS, side)
        if len(g.syllables) == 1 and g.syllables[0].side == side:
            return self.syllables_with_tail(g)[0].element
        return None

    def embed(self, side: Side, element: Element) -> CanonicalForm:
        return self.canonical_from_syllables((Syllable(side, element),))

    def word_of(self, g: WordLike) -> Word:
        g = self.element(g)
        letters: list[Letter] = []
        for side, t in g.syllables:
            letters.extend(self._factors[side].spell(t))
        letters.extend(self._factors[Side.PLUS].spell(g.tail))
        return free_reduce(letters)

    def spell_syllables(self, syllables: Iterable[Syllable]) -> Word:
        letters: list[Letter] = []
        for side, u in syllables:
            letters.extend(self._factors[side].spell(u))
        return free_reduce(letters)

    def render_syllable(self, syllable: Syllable) -> str:
        return self._factors[syllable.side].render(syllable.element)

    def render(self, g: WordLike) -> str:
        g = self.element(g)
        if g.is_identity:
            return "1"
        parts = [self.render_syllable(s) for s in g.syllables] or ["1"]
        if g.tail_word:
            parts.append("| " + render_word(g.tail_word))
        return " ".join(parts)

    def render_form(self, form: ReducedForm) -> str:
        return " ".join(f"({self.render_syllable(s)})" for s in form.syllables) or "1"

    def transversal(self, side: Side, radius: int) -> list[Element]:
        factor = self._factors[side]
        ball = factor.enumerate_ball(radius)
        reps = {factor.coset_representative(self._recognizers[side], g, CosetSide.LEFT) for g in ball.elements}
        return sorted((t for t in reps if factor.length(t) <= radius), key=factor.key)

    def summary(self, radius: int = 2) -> list[str]:
        lines = [f"presentation: {self.name or 'unnamed'}"]
        for side in Side:
            factor = self._factors[side]
            size = f" order {factor.size}" if factor.size is not None else ""
            lines.append(f"factor {side.label}: {factor.kind} on {','.join(factor.ordering.order_tokens())}{size}")
        kind = "finite" if self.c_is_finite else "infinite cyclic"
        lines.append(f"C: {kind} on {','.join(self.c_names) or '(trivial)'}")
        for side in Side:
            images = ", ".join(f"{c} -> {render_word(w)}" for c, w in zip(self.c_names, self.image_words[side]))
            lines.append(f"images {side.label}: {images or '-'}")
        for side in Side:
            factor = self._factors[side]
            reps = self.transversal(side, radius)
            truncated = "" if factor.is_finite else f" (l <= {radius})"
            lines.append(f"T{side.label}{truncated}: {{{', '.join(factor.render(t) for t in reps)}}}")
        return lines


class SyllableReducer:
    """Eager left-to-right syllable reduction; elements of C are absorbed into the left neighbour"""

    def __init__(self, presentation: AmalgamPresentation):
        self.presentation = presentation
        self.stack: list[Syllable] = []

    def push(self, syllable: Syllable) -> "SyllableReducer":
        P = self.presentation
        side, u = syllable
        factor = P.factor(side)
        if self.stack and self.stack[-1].side == side:
            x = factor.multiply(self.stack.pop().element, u)
        elif len(self.stack) == 1 and P.is_c(*self.stack[0]):
            lone = self.stack.pop()
            x = factor.multiply(P.transfer(lone.element, lone.side, side), u)
        else:
            x = u
        if P.is_c(side, x):
            if factor.is_identity(x):
                return self
            if not self.stack:
                self.stack.append(Syllable(side, x))
            else:
                top = self.stack.pop()
                merged = P.factor(top.side).multiply(top.element, P.transfer(x, side, top.side))
                self.stack.append(Syllable(top.side, merged))
            return self
        self.stack.append(Syllable(side, x))
        return self

    def extend(self, syllables: Iterable[Syllable]) -> "SyllableReducer":
        for syllable in syllables:
            self.push(syllable)
        return self

    def form(self) -> ReducedForm:
        in_c = not self.stack or (len(self.stack) == 1 and self.presentation.is_c(*self.stack[0]))
        return ReducedForm(tuple(self.stack), in_c)


def _check_isomorphism(P: AmalgamPresentation):
    finite = {side: P.recognizer(side).is_finite for side in Side}
    if all(finite.values()):
        first, second = (P.factor(side) for side in Side)
        pairs = [(P.images[Side.PLUS][j], P.images[Side.MINUS][j]) for j in range(len(P.c_names))]
        steps = pairs + [(first.inverse(x), second.inverse(y)) for x, y in pairs]
        start = (first.identity, second.identity)
        seen = {start}
        queue = deque([start])
        forward: dict = {}
        backward: dict = {}
        while queue:
            x, y = queue.popleft()
            if forward.setdefault(x, y) != y:
                raise MalformedAmalgamError(
                    f"images do not define an isomorphism: {first.render(x)} is matched with both "
                    f"{second.render(forward[x])} and {second.render(y)}"
                )
            if backward.setdefault(y, x) != x:
                raise MalformedAmalgamError(
                    f"images do not define an isomorphism: {second.render(y)} is matched with both "
                    f"{first.render(backward[y])} and {first.render(x)}"
                )
            for a, b in steps:
                following = (first.multiply(x, a), second.multiply(y, b))
                if following not in seen:
                    seen.add(following)
                    queue.append(following)
        logger.debug("finite C of order %s", len(forward))
        return
    if finite[Side.PLUS] != finite[Side.MINUS]:
        raise MalformedAmalgamError("C is finite in one factor and infinite in the other")
    if len(P.c_names) != 1:
        raise UnsupportedAmalgamError(
            "only finite C or infinite cyclic C on a single generator are supported, got infinite C on {} generators".format(len(P.c_names))
        )


def validate_presentation(data: PresentationData) -> AmalgamPresentation:
    factors = {side: build_factor(data.factors[side]) for side in Side}
    shared = set(factors[Side.PLUS].generators) & set(factors[Side.MINUS].generators)
    if shared:
        raise ValidationError(f"generator names shared between factors: {','.join(sorted(shared))}")
    if len(set(data.c_names)) != len(data.c_names):
        raise ValidationError("duplicate C generator names")
    clash = set(data.c_names) & (set(factors[Side.PLUS].generators) | set(factors[Side.MINUS].generators))
    if clash:
        raise ValidationError(f"C generator names clash with factor generators: {','.join(sorted(clash))}")
    images = {}
    for side in Side:
        words = data.images.get(side, [])
        if len(words) != len(data.c_names):
            raise ValidationError(f"factor {side.label} lists {len(words)} images for {len(data.c_names)} C generators")
        images[side] = [parse_word(w, factors[side].ordering) for w in words]
    P = AmalgamPresentation(factors, data.c_names, images, data.name)
    _check_isomorphism(P)
    logger.info("validated %r", P)
    return P


def reduce_to_syllables(P: AmalgamPresentation, w: WordLike, strategy: Strategy = Strategy.LEFT_TO_RIGHT) -> ReducedForm:
    syllables = _syllables(P, w)
    match strategy:
        case Strategy.LEFT_TO_RIGHT:
            return SyllableReducer(P).extend(syllables).form()
        case Strategy.RIGHT_TO_LEFT:
            return P.invert_form(SyllableReducer(P).extend(P.invert_syllables(syllables)).form())


def _syllables(P: AmalgamPresentation, w: WordLike) -> list[Syllable]:
    if isinstance(w, CanonicalForm):
        return list(P.syllables_with_tail(w))
    if isinstance(w, str):
        w = P.parse(w)
    return P.syllables_of(w)


def coset_sequence(P: AmalgamPresentation, form: ReducedForm) -> list[tuple[Syllable, ...]]:
    """Keys of the cosets u₁C, u₁u₂C, …"""
    return [P.canonical_from_syllables(form.syllables[:k]).coset for k in range(1, form.length + 1)]


def canonical_form(P: AmalgamPresentation, w: WordLike) -> CanonicalForm:
    return P.element(w)


def syllable_length(P: AmalgamPresentation, w: WordLike) -> int:
    return P.element(w).length


def ends_in(P: AmalgamPresentation, w: WordLike) -> Side | None:
    return P.element(w).last_side


def is_right_segment(P: AmalgamPresentation, x: WordLike, y: WordLike) -> bool:
    xs, ys = P.syllables_with_tail(P.element(x)), P.element(y)
    k, s = P.element(x).length, ys.length
    if s == 0:
        return True
    if s > k:
        return False
    test = list(xs[k - s:]) + list(P.invert_syllables(P.syllables_with_tail(ys)))
    return P.canonical_from_syllables(test).in_c


def is_left_segment(P: AmalgamPresentation, x: WordLike, y: WordLike) -> bool:
    xs, ys = P.syllables_with_tail(P.element(x)), P.element(y)
    k, s = P.element(x).length, ys.length
    if s == 0:
        return True
    if s > k:
        return False
    test = list(P.invert_syllables(P.syllables_with_tail(ys))) + list(xs[:s])
    return P.canonical_from_syllables(test).in_c


def is_proper_right_segment(P: AmalgamPresentation, x: WordLike, y: WordLike) -> bool:
    k, s = syllable_length(P, x), syllable_length(P, y)
    return is_right_segment(P, x, y) and (s < k or (s == 0 and k > 0))


def is_proper_left_segment(P: AmalgamPresentation, x: WordLike, y: WordLike) -> bool:
    k, s = syllable_length(P, x), syllable_length(P, y)
    return is_left_segment(P, x, y) and (s < k or (s == 0 and k > 0))

