from __future__ import annotations

from functools import lru_cache
from logging import getLogger
from typing import NamedTuple

from ..amalgam import AmalgamPresentation, CanonicalForm, ReducedForm, Syllable, WordLike, reduce_to_syllables
from ..constants import Side, Strategy
from ..factors import Element
from .domain import FundamentalDomain
from .tree import TreeVertex, preceding

logger = getLogger(__name__)


class RhoSigma(NamedTuple):
    rho: CanonicalForm
    sigma: CanonicalForm


def rho_sigma(D: FundamentalDomain, v: TreeVertex, j: Side) -> RhoSigma:
    P = D.presentation
    s_v = D.s(v)
    if j != v.side:
        parent = preceding(v)
        return RhoSigma(s_v, D.s(parent) if parent is not None else P.identity)
    pairing = D.pairing(v)
    if pairing is None:
        return RhoSigma(s_v, s_v)
    s_q = D.s(pairing.partner)
    return RhoSigma(P.multiply(s_q, P.embed(v.side, pairing.a)), s_q)


def label_length(P: AmalgamPresentation, path: tuple[Syllable, ...]) -> int:
    return sum(P.factor(s.side).length(s.element) for s in path)


class TransversalData:
    """im(ρ₁)C ∪ im(ρ₋₁)C together with the constants K and Σ"""

    def __init__(self, D: FundamentalDomain):
        P = D.presentation
        self.presentation = P
        lengths: dict[CanonicalForm, int] = {}
        for v in D.vertices:
            base = label_length(P, v.path)
            pairing = D.pairing(v)
            for j in Side:
                rho = rho_sigma(D, v, j).rho
                if pairing is not None and j == v.side:
                    lengths[rho] = label_length(P, pairing.partner.path) + P.factor(v.side).length(pairing.a)
                else:
                    lengths[rho] = base
        self.lengths = lengths
        self.representatives = sorted(lengths, key=lambda r: (r.length, P.render(r)))
        self.cosets = {r.coset for r in self.representatives}
        self.K = 2 * sum(lengths.values())
        sigma: set[Syllable] = set()
        for v in D.vertices:
            for s in v.path:
                sigma.add(s)
        for pairing in D.pairings:
            sigma.add(Syllable(pairing.vertex.side, pairing.a))
        sigma |= {Syllable(s.side, P.factor(s.side).inverse(s.element)) for s in sigma}
        self.sigma = sorted(sigma, key=lambda s: (int(s.side) * -1, P.factor(s.side).key(s.element)))
        logger.debug("%s transversal representatives, K = %s, |Σ| = %s", len(self.representatives), self.K, len(self.sigma))

    def is_transversal(self, g: WordLike) -> bool:
        return self.presentation.element(g).coset in self.cosets

    def sigma_on(self, side: Side) -> list[Element]:
        return [s.element for s in self.sigma if s.side == side]


@lru_cache(maxsize=32)
def transversal_elements(D: FundamentalDomain) -> TransversalData:
    return TransversalData(D)


def is_transversal(D: FundamentalDomain, g: WordLike) -> bool:
    return transversal_elements(D).is_transversal(g)


class Nerve(NamedTuple):
    prefix: ReducedForm
    length: int


def nerve_of_form(D: FundamentalDomain, form: ReducedForm) -> Nerve:
    P = D.presentation
    data = transversal_elements(D)
    if form.in_c:
        return Nerve(ReducedForm((), True), 0)
    syllables = form.syllables
    for s in range(len(syllables) + 1):
        rest = P.canonical_from_syllables(syllables[s:])
        if data.is_transversal(P.inverse(rest)):
            return Nerve(ReducedForm(syllables[:s], s == 0), s)
    raise AssertionError("the empty suffix is always transversal")


def nerve(D: FundamentalDomain, w: WordLike, strategy: Strategy = Strategy.LEFT_TO_RIGHT) -> Nerve:
    return nerve_of_form(D, reduce_to_syllables(D.presentation, w, strategy))
