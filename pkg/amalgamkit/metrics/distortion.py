"""Empirical constants: subgroup distortion, fellow-traveler ε, quasigeodesic λ.

Every measurement is exact inside the Cayley ball it is given and says nothing outside it,
so the values are lower bounds for the constants they estimate.
"""
from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from logging import getLogger
from typing import Iterable, NamedTuple, Sequence

from .. import BudgetError
from ..amalgam import AmalgamPresentation, CanonicalForm, WordLike
from ..rewriting.proposition_b import lemma31_form
from ..subgroup import SubgroupBall
from ..words import EMPTY, Letter, Word, render_word
from .ball import CayleyBall, all_geodesics, geodesic_points

logger = getLogger(__name__)


class Measured(NamedTuple):
    """An element of H with both of its lengths"""

    element: CanonicalForm
    l_h: int
    l_g: int
    spelling: Word


class DistortionRow(NamedTuple):
    radius: int
    ball_size: int
    h_elements: int
    max_ratio: float
    fitted_C_add: int
    fitted_C_mul: float
    epsilon: int | None = None
    stabilized: bool | None = None

    @property
    def fitted_C(self) -> float:
        return max(self.fitted_C_add, self.fitted_C_mul)


class EpsilonRow(NamedTuple):
    radius: int
    epsilon: int
    witness: str
    stabilized: bool


class QuasigeodesicFit(NamedTuple):
    lam: float
    witness: Word | None
    words: int

    @property
    def vacuous(self) -> bool:
        return self.words == 0

    def describe(self) -> str:
        if self.vacuous:
            return "lambda = 0 (vacuous)"
        return f"lambda = {self.lam:.4g} ; witness = {render_word(self.witness or EMPTY) or '1'}"


def measure_subgroup(P: AmalgamPresentation, h_gens: Sequence[WordLike], hball: int, ball: CayleyBall,
                     limit: int | None = None) -> list[Measured]:
    """Elements of the H-ball of radius `hball` that lie in `ball`, in H-ball order"""
    sub = SubgroupBall(P, h_gens, hball, limit=limit)
    out = []
    for g, spelling in sub.items():
        l_g = ball.distance(g)
        length = sub.length(g)
        if l_g is not None and length is not None:
            out.append(Measured(g, length, l_g, spelling))
    return out


def distortion_profile(P: AmalgamPresentation, h_gens: Sequence[WordLike], R: int, hball: int,
                       ball: CayleyBall | None = None, limit: int | None = None) -> list[DistortionRow]:
    """One row per radius r ≤ R over the H-elements of G-length at most r"""
    if ball is None or ball.radius < R:
        ball = CayleyBall(P, R, limit)
    measured = measure_subgroup(P, h_gens, hball, ball, limit)
    rows = []
    for r in range(R + 1):
        inside = [m for m in measured if m.l_g <= r]
        rows.append(DistortionRow(
            radius=r,
            ball_size=ball.size(r),
            h_elements=len(inside),
            max_ratio=max((m.l_h / (m.l_g + 1) for m in inside), default=0.0),
            fitted_C_add=max((m.l_h - m.l_g for m in inside), default=0),
            fitted_C_mul=max((m.l_h / m.l_g for m in inside if m.l_g), default=0.0),
        ))
    logger.debug("distortion rows: %s", [(row.radius, row.h_elements, row.fitted_C) for row in rows])
    return rows


class _NearestH:
    """d(x, H) for points x of the ball, searched outward from x in BFS order"""

    def __init__(self, P: AmalgamPresentation, ball: CayleyBall, members: set[CanonicalForm]):
        self.presentation = P
        self.ball = ball
        self.members = members
        self._memo: dict[CanonicalForm, int] = {}

    def __call__(self, x: CanonicalForm) -> int:
        if x not in self._memo:
            self._memo[x] = self._search(x)
        return self._memo[x]

    def _search(self, x: CanonicalForm) -> int:
        P = self.presentation
        for r, sphere in enumerate(self.ball.spheres):
            if any(P.multiply(x, u) in self.members for u in sphere):
                return r
        return self.ball.radius + 1


def fellow_traveler_epsilon(P: AmalgamPresentation, h_gens: Sequence[WordLike], R: int, hball: int,
                            ball: CayleyBall | None = None, limit: int | None = None,
                            threads: int = 1) -> list[EpsilonRow]:
    """ε(r): how far geodesics to H-elements of length ≤ r stray from the known H-set"""
    if ball is None or ball.radius < R:
        ball = CayleyBall(P, R, limit, threads)
    measured = measure_subgroup(P, h_gens, hball, ball, limit)
    nearest = _NearestH(P, ball, {m.element for m in measured})
    targets = [m for m in measured if m.l_g <= R]

    def reach(m: Measured) -> tuple[int, str]:
        worst, witness = 0, "1"
        for word in all_geodesics(P, m.element, R, ball):
            for k, x in enumerate(geodesic_points(P, word)):
                d = nearest(x)
                if d > worst:
                    worst, witness = d, f"{render_word(word) or '1'} @ {k}"
        return worst, witness

    with ThreadPoolExecutor(max_workers=max(threads, 1)) as pool:
        reached = list(pool.map(reach, targets))
    rows: list[EpsilonRow] = []
    epsilon, witness = 0, "1"
    for r in range(R + 1):
        for m, (d, w) in zip(targets, reached):
            if m.l_g == r and d > epsilon:
                epsilon, witness = d, w
        stabilized = r >= 2 and rows[r - 2].epsilon == epsilon
        rows.append(EpsilonRow(r, epsilon, witness, stabilized))
    logger.debug("epsilon rows: %s", [(row.radius, row.epsilon) for row in rows])
    return rows


def quasigeodesic_fit(P: AmalgamPresentation, words: Iterable[Sequence[Letter]], ball: CayleyBall | None = None) -> QuasigeodesicFit:
    """Least λ ≥ 1 with l(u) ≤ λ·(l_𝒢(ū) + 1) for every subword u, and the subword attaining it"""
    words = [Word(tuple(w)) for w in words]
    if not words:
        return QuasigeodesicFit(0.0, None, 0)
    longest = max(len(w) for w in words)
    if ball is None or ball.radius < longest:
        ball = CayleyBall(P, longest)
    best, witness = 0.0, words[0]
    for w in words:
        for size in range(len(w), 0, -1):
            for start in range(len(w) - size + 1):
                u = Word(w[start:start + size])
                ratio = size / (ball.require(u) + 1)
                if ratio > best:
                    best, witness = ratio, u
    return QuasigeodesicFit(max(1.0, best), witness, len(words))


def random_words(P: AmalgamPresentation, count: int, max_length: int, seed: int) -> list[Word]:
    rng = random.Random(seed)
    letters = P.ordering.letters()
    return [Word(tuple(rng.choice(letters) for _ in range(rng.randint(0, max_length)))) for _ in range(count)]


class Lemma31Probe(NamedTuple):
    fit: QuasigeodesicFit
    max_ratio: float
    tail_defect: int
    samples: int

    def lines(self) -> list[str]:
        return [
            f"lemma31: samples = {self.samples} ; {self.fit.describe()}",
            f"lemma31: max l(w)/l_G = {self.max_ratio:.4g} ; C-tail defect = {self.tail_defect}",
        ]


def lemma31_length_probe(P: AmalgamPresentation, count: int, max_length: int, seed: int, radius: int = 2) -> Lemma31Probe:
    """Length behaviour of coset-shortest normal forms of seeded random words"""
    forms = [lemma31_form(P, w, radius) for w in random_words(P, count, max_length, seed)]
    outputs = [Word(tuple(read for _, u in form.syllables for read in u)) for form in forms]
    ball = CayleyBall(P, max((len(w) for w in outputs), default=0))
    fit = quasigeodesic_fit(P, outputs, ball)
    ratio = max((len(w) / ball.require(w) for w in outputs if ball.require(w)), default=0.0)
    defect = 0
    for form in forms:
        for side, z, x in form.seams:
            factor = P.factor(side)
            merged = len(P.c_word(side, factor.multiply(z, x)))
            defect = max(defect, len(P.c_word(side, z)) + len(P.c_word(side, x)) - merged)
    return Lemma31Probe(fit, ratio, defect, len(forms))


class Constant(NamedTuple):
    name: str
    value: float
    witness: str
    instances: int

    def line(self) -> str:
        return f"constant: {self.name} = {self.value:.4g} ; instances = {self.instances} ; witness = {self.witness}"


class Lemma22Report(NamedTuple):
    constants: dict[str, Constant]
    precondition_violated: bool
    skipped: int
    diagnostics: list[str]

    def lines(self) -> list[str]:
        lines = [c.line() for c in self.constants.values()]
        if self.precondition_violated:
            lines.append("precondition: the intersection of C1 and C2 appears infinite within range")
        lines.append(f"skipped: {self.skipped}")
        return lines + [f"diagnostic: {d}" for d in self.diagnostics]


class _Sample(NamedTuple):
    element: CanonicalForm
    word: Word


def _subgroup_sample(P: AmalgamPresentation, gens: Sequence[WordLike], n: int, ball: CayleyBall) -> list[_Sample]:
    """Elements of ⟨gens⟩ of subgroup length ≤ n spelled as words over 𝒢 by substitution"""
    words = [P.parse(g) if isinstance(g, str) else P.word_of(g) for g in gens]
    sub = SubgroupBall(P, words, n)
    values = dict(zip(sub.names, words))
    out = []
    for g, spelling in sub.items():
        if g in ball:
            out.append(_Sample(g, Word(tuple(read for name, sign in spelling for read in values[name] ** sign))))
    return out


def lemma22_probe(P: AmalgamPresentation, c1_gens: Sequence[WordLike], c2_gens: Sequence[WordLike], n: int,
                  ball: CayleyBall) -> Lemma22Report:
    """Empirical constants for pairs of virtually cyclic subgroups C₁, C₂ with finite intersection"""
    first = _subgroup_sample(P, c1_gens, n, ball)
    second = _subgroup_sample(P, c2_gens, n, ball)
    diagnostics: list[str] = []
    common = {s.element for s in first} & {s.element for s in second}
    shorter = {s.element for s in _subgroup_sample(P, c1_gens, n - 1, ball)} & {s.element for s in _subgroup_sample(P, c2_gens, n - 1, ball)}
    if n >= 2 and len(common) > len(shorter):
        diagnostics.append(f"|C1 ∩ C2| grows from {len(shorter)} to {len(common)} at range {n}")
        return Lemma22Report({}, True, 0, diagnostics)
    skipped = 0
    constants: dict[str, Constant] = {}

    def product(*parts: CanonicalForm) -> CanonicalForm | None:
        nonlocal skipped
        g = P.multiply(*parts)
        if g not in ball:
            skipped += 1
            return None
        return g

    # (5) and (6): shortest elements of the cosets c₁C₂
    k2, k2_witness, k3, k3_witness, count = 0, "-", 0.0, "-", 0
    for c1 in first:
        best: tuple[int, int, CanonicalForm] | None = None
        for c2 in second:
            u = product(c1.element, c2.element)
            if u is None:
                continue
            key = (ball.require(u), ball.require(c2.element), u)
            if best is None or key[:2] < best[:2]:
                best = key
        if best is None:
            continue
        count += 1
        l_u, l_c2, _ = best
        if l_c2 > k2:
            k2, k2_witness = l_c2, render_word(c1.word) or "1"
        l_c1 = ball.require(c1.element)
        needed = (-l_u + math.sqrt(l_u * l_u + 4 * l_c1)) / 2
        if needed > k3:
            k3, k3_witness = needed, render_word(c1.word) or "1"
    constants["K2"] = Constant("K2", k2, k2_witness, count)
    constants["K3"] = Constant("K3", k3, k3_witness, count)

    # (7): geodesic spellings of c₁ and c₂ side by side
    pairs = [_concat(ball.geodesic(c1.element), ball.geodesic(c2.element)) for c1 in first for c2 in second]
    fit = quasigeodesic_fit(P, _within(P, pairs, ball), ball)
    constants["lambda2"] = Constant("lambda2", fit.lam, render_word(fit.witness or EMPTY) or "1", fit.words)

    # (1): U shortest in U·C₁ followed by a C₁-geodesic word
    near = [g for sphere in ball.spheres[:2] for g in sphere]
    coset_short = [u for u in near if all(
        (v := product(u, c.element)) is None or ball.require(v) >= ball.require(u) for c in first)]
    words = [_concat(ball.geodesic(u), c.word) for u in coset_short for c in first]
    fit = quasigeodesic_fit(P, _within(P, words, ball), ball)
    constants["lambda"] = Constant("lambda", fit.lam, render_word(fit.witness or EMPTY) or "1", fit.words)

    # (3): V·U·V' with U shortest in C₁UC₁
    double_short = [u for u in coset_short if all(
        (v := product(c.element, u)) is None or ball.require(v) >= ball.require(u) for c in first)]
    words = [_concat(c.word, ball.geodesic(u), d.word) for u in double_short for c in first for d in first]
    fit = quasigeodesic_fit(P, _within(P, words, ball), ball)
    constants["lambda1"] = Constant("lambda1", fit.lam, render_word(fit.witness or EMPTY) or "1", fit.words)

    # (2) and (4): how far c₁u sits from the shortest element of c₁uC₁
    k, k_witness, count = 0, "-", 0
    for u in double_short:
        for c1 in first:
            start = product(c1.element, u)
            if start is None:
                continue
            options = [(ball.require(g), ball.require(c.element)) for c in first if (g := product(start, c.element)) is not None]
            if not options:
                continue
            count += 1
            shortest = min(length for length, _ in options)
            displacement = min(step for length, step in options if length == shortest)
            if displacement > k:
                k, k_witness = displacement, f"{render_word(c1.word) or '1'} * {P.render(u)}"
    constants["K"] = Constant("K", k, k_witness, count)
    constants["K1"] = Constant("K1", k, k_witness, count)
    logger.debug("virtually cyclic pair constants: %s", {name: c.value for name, c in constants.items()})
    return Lemma22Report(constants, False, skipped, diagnostics)


def _concat(*words: Word) -> Word:
    """Concatenation without free reduction"""
    return Word(tuple(read for w in words for read in w))


def _within(P: AmalgamPresentation, words: Iterable[Word], ball: CayleyBall) -> list[Word]:
    """Words whose every subword stays inside the ball"""
    out = []
    for w in words:
        try:
            for size in range(1, len(w) + 1):
                for start in range(len(w) - size + 1):
                    ball.require(Word(w[start:start + size]))
        except BudgetError:
            continue
        out.append(w)
    return out
