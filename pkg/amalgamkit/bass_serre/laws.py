"""Executable checks of the structural facts every fundamental domain satisfies.

Each law is instantiated over the finite data of a domain and over bounded samples of
factor elements; a failing instance means the domain (or the code that computed it) is wrong.
"""
from __future__ import annotations

from logging import getLogger
from typing import Iterable, NamedTuple

from ..amalgam import AmalgamPresentation, CanonicalForm, is_left_segment
from ..constants import LawStatus, Side
from ..factors import Element
from .domain import FundamentalDomain
from .transversal import rho_sigma, transversal_elements
from .tree import D1, D_MINUS, TreeVertex, precedes, preceding, render_vertex

logger = getLogger(__name__)


class LawEntry(NamedTuple):
    law: str
    statement: str
    instances: int
    failures: tuple[str, ...]

    @property
    def status(self) -> LawStatus:
        if self.failures:
            return LawStatus.FAIL
        return LawStatus.PASS if self.instances else LawStatus.NOT_EXERCISED


class Tally:
    def __init__(self, law: str, statement: str):
        self.law = law
        self.statement = statement
        self.instances = 0
        self.failures: list[str] = []

    def check(self, holds: bool, instance: str):
        self.instances += 1
        if not holds:
            self.failures.append(instance)
            logger.warning("law %s fails on %s", self.law, instance)

    def entry(self) -> LawEntry:
        return LawEntry(self.law, self.statement, self.instances, tuple(self.failures))


class LawReport:
    def __init__(self, entries: Iterable[LawEntry] = ()):
        self.entries = list(entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, law: str) -> LawEntry:
        for entry in self.entries:
            if entry.law == law:
                return entry
        raise KeyError(law)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def failures(self) -> list[LawEntry]:
        return [entry for entry in self.entries if entry.status is LawStatus.FAIL]

    def lines(self) -> list[str]:
        return [f"law: {e.law} ; instances = {e.instances} ; status = {e.status.value}" for e in self.entries]


def c_sample(P: AmalgamPresentation, side: Side, radius: int) -> list[Element]:
    """Elements of C in the factor of `side`: all of them when C is finite, C-words of length ≤ radius otherwise"""
    factor = P.factor(side)
    steps = list(P.images[side]) + [factor.inverse(g) for g in P.images[side]]
    seen = [factor.identity]
    known = {factor.identity}
    layer = [factor.identity]
    depth = 0
    while layer and (P.c_is_finite or depth < radius):
        following = []
        for x in layer:
            for step in steps:
                y = factor.multiply(x, step)
                if y not in known:
                    known.add(y)
                    seen.append(y)
                    following.append(y)
        layer = following
        depth += 1
    return seen


def subgroup_sample(P: AmalgamPresentation, side: Side, generators: list[Element], radius: int) -> list[Element]:
    factor = P.factor(side)
    steps = list(generators) + [factor.inverse(g) for g in generators]
    seen = [factor.identity]
    layer = [factor.identity]
    for _ in range(radius):
        following = []
        for x in layer:
            for step in steps:
                y = factor.multiply(x, step)
                if y not in seen:
                    seen.append(y)
                    following.append(y)
        layer = following
    return seen


def outside_c(P: AmalgamPresentation, side: Side, radius: int) -> list[Element]:
    factor = P.factor(side)
    return [g for g in factor.enumerate_ball(radius).elements if not P.is_c(side, g)]


def verify_domain_laws(D: FundamentalDomain, radius: int = 2) -> LawReport:
    P = D.presentation
    data = transversal_elements(D)
    ball = D.ball
    vertices = D.vertices
    children: dict[TreeVertex, list[TreeVertex]] = {v: [] for v in vertices}
    for v in vertices:
        parent = preceding(v)
        if parent is not None:
            children[parent].append(v)
    cs = {side: c_sample(P, side, radius) for side in Side}

    def name(v: TreeVertex) -> str:
        return render_vertex(P, v)

    def label_of(v: TreeVertex) -> Element:
        return P.factor(v.side.other).identity if v.label is None else v.label.element

    def in_ball(predicate) -> bool:
        return ball.find(predicate) is not None

    def inv(g: CanonicalForm) -> CanonicalForm:
        return P.inverse(g)

    tallies = []

    tally = Tally("edges-inequivalent", "no two edges of Y are H-equivalent")
    edge_children = [v for v in vertices if v != D1]
    for k, c1 in enumerate(edge_children):
        for c2 in edge_children[k + 1:]:
            left, right = inv(D.s(c1)), D.s(c2)
            tally.check(not in_ball(lambda h: P.multiply(left, h, right).in_c), f"{name(c1)} ~ {name(c2)}")
    tallies.append(tally)

    tally = Tally("label-coset-misses-stabilizer", "a·C ∩ A_u = ∅ for every label a ≠ 1 of an edge leaving u")
    for v in edge_children:
        u = preceding(v)
        assert u is not None
        if v.label is None:
            continue
        factor = P.factor(u.side)
        group = D.groups[u]
        a = v.label.element
        tally.check(all(group.express(factor.multiply(a, c)) is None for c in cs[u.side]), f"edge to {name(v)}")
    tallies.append(tally)

    tally = Tally("pairing-coset-misses-c", "A_q·a ∩ C = ∅ for every pairing h_v = s_v·a⁻¹·s_q⁻¹")
    for p in D.pairings:
        factor = P.factor(p.partner.side)
        group = D.groups[p.partner]
        a_inverse = factor.inverse(p.a)
        tally.check(all(group.express(factor.multiply(c, a_inverse)) is None for c in cs[p.partner.side]), p.name)
    tallies.append(tally)

    tally = Tally("pairings-distinct-double-cosets", "A_q·a₁·C ≠ A_q·a₂·C for distinct pairings onto q")
    for k, p1 in enumerate(D.pairings):
        for p2 in D.pairings[k + 1:]:
            if p1.partner != p2.partner:
                continue
            factor = P.factor(p1.partner.side)
            group = D.groups[p1.partner]
            a2_inverse = factor.inverse(p2.a)
            tally.check(
                all(group.express(factor.product(p1.a, factor.inverse(c), a2_inverse)) is None for c in cs[p1.partner.side]),
                f"{p1.name}, {p2.name}",
            )
    tallies.append(tally)

    tally = Tally("child-label-misses-pairing-coset", "b·C ∩ A_q·a = ∅ for pairings onto q and labels b of edges leaving q")
    for p in D.pairings:
        q = p.partner
        factor = P.factor(q.side)
        group = D.groups[q]
        a_inverse = factor.inverse(p.a)
        for w in children[q]:
            b = label_of(w)
            tally.check(all(group.express(factor.product(b, c, a_inverse)) is None for c in cs[q.side]), f"{p.name}, {name(w)}")
    tallies.append(tally)

    tally = Tally("sibling-labels-distinct-cosets", "A_u·a ≠ A_u·b for distinct edges (u, ua), (u, ub) of Y")
    for u, kids in children.items():
        factor = P.factor(u.side)
        for k, v in enumerate(kids):
            for w in kids[k + 1:]:
                x = factor.multiply(label_of(v), factor.inverse(label_of(w)))
                tally.check(D.groups[u].express(x) is None, f"{name(v)}, {name(w)}")
    tallies.append(tally)

    tally = Tally("double-cosets-separate-vertices", "H·s_v·C ≠ H·s_w·C for distinct vertices of Y of one type")
    for k, v in enumerate(vertices):
        for w in vertices[k + 1:]:
            if v.side != w.side:
                continue
            left, right = inv(D.s(v)), D.s(w)
            tally.check(not in_ball(lambda h: P.multiply(left, h, right).in_c), f"{name(v)}, {name(w)}")
    tallies.append(tally)

    tally = Tally("left-segment-iff-precedes", "s_u is a left segment of s_v exactly when u ≤ v")
    for v in vertices:
        if v == D1:
            continue
        for u in vertices:
            if u == D_MINUS:
                continue
            segment = is_left_segment(P, D.s(v), D.s(u))
            tally.check(segment == precedes(u, v), f"{name(u)} ≤ {name(v)}")
    tallies.append(tally)

    rs = {(v, j): rho_sigma(D, v, j) for v in vertices for j in Side}

    t1 = Tally("sigma-in-double-coset", "σ_j(s_v) ∈ H·s_v·A_j")
    t2 = Tally("rho-in-coset", "ρ_j(s_v) ∈ H·s_v")
    t3 = Tally("rho-extends-sigma", "ρ_j(s_v) = σ_j(s_v)·a_j with a_j ∈ A_j")
    t4 = Tally("sigma-ends-opposite", "σ_j(s_v) is 1 or ends in A_-j")
    t5 = Tally("pairing-from-rho", "h_v = ρ_-i(s_v)·ρ_i(s_v)⁻¹ for v of type A_i in Y − Y₁")
    for v in vertices:
        s_v = D.s(v)
        for j in Side:
            rho, sigma = rs[(v, j)]
            left = inv(s_v)
            t1.check(in_ball(lambda h: P.local(P.multiply(left, h, sigma), j) is not None), f"{name(v)}, j = {j.label}")
            t2.check(P.multiply(rho, inv(s_v)) in ball, f"{name(v)}, j = {j.label}")
            t3.check(P.local(P.multiply(inv(sigma), rho), j) is not None, f"{name(v)}, j = {j.label}")
            t4.check(sigma.is_identity or sigma.last_side == j.other, f"{name(v)}, j = {j.label}")
        p = D.pairing(v)
        if p is not None:
            i = v.side
            t5.check(P.multiply(rs[(v, i.other)].rho, inv(rs[(v, i)].rho)) == p.h, p.name)
    tallies.extend([t1, t2, t3, t4, t5])

    t6 = Tally("sigma-separates", "H·σ_j(s_v)·A_j = H·σ_j(s_w)·A_j implies σ_j(s_v) = σ_j(s_w)")
    t7 = Tally("rho-separates", "H·ρ_j(s_v)·C = H·ρ_j(s_w)·C implies ρ_j(s_v) = ρ_j(s_w)")
    for j in Side:
        sigmas = sorted({rs[(v, j)].sigma for v in vertices}, key=P.render)
        rhos = sorted({rs[(v, j)].rho for v in vertices}, key=P.render)
        for k, x in enumerate(sigmas):
            for y in sigmas[k + 1:]:
                left = inv(x)
                t6.check(not in_ball(lambda h: P.local(P.multiply(left, h, y), j) is not None), f"{P.render(x)}, {P.render(y)}")
        for k, x in enumerate(rhos):
            for y in rhos[k + 1:]:
                left = inv(x)
                t7.check(not in_ball(lambda h: P.multiply(left, h, y).in_c), f"{P.render(x)}, {P.render(y)}")
    tallies.extend([t6, t7])

    t1 = Tally("stabilizer-leaves-transversals", "s_v·a_v is not transversal for a_v ∈ A_v − C_v")
    t2 = Tally("edge-moving-stabilizer", "s_v·a_v·b is not transversal when s_v·a_v·s_v⁻¹ moves the edge labelled b")
    for v in D.y1:
        factor = P.factor(v.side)
        group = D.groups[v]
        s_v = D.s(v)
        for a_v in subgroup_sample(P, v.side, group.generators, radius):
            if P.is_c(v.side, a_v):
                continue
            x = P.multiply(s_v, P.embed(v.side, a_v))
            t1.check(not data.is_transversal(x), f"{name(v)}, {factor.render(a_v)}")
            for w in children[v]:
                if w.label is None:
                    continue
                b = w.label.element
                if P.is_c(v.side, factor.conjugate(a_v, factor.inverse(b))):
                    continue
                t2.check(not data.is_transversal(P.multiply(x, P.embed(v.side, b))), f"{name(v)}, {factor.render(a_v)}, {name(w)}")
    tallies.extend([t1, t2])

    t3 = Tally("pairing-then-opposite", "s_q·a·b is not transversal for b ∈ A_-i − C")
    t4 = Tally("pairing-vertex-then-same", "s_w·a₁ is not transversal for a₁ ∈ A_i − C")
    t5 = Tally("stable-tail-then-same", "ρ_j(t)·b is not transversal for b ∈ A_-j − C when ρ_-j(t)·ρ_j(t)⁻¹ ≠ 1")
    t6 = Tally("stabilizer-shifted-pairing", "s_q·(a_q·a) is not transversal when a_q·a·C ≠ a·C")
    samples = {side: outside_c(P, side, radius) for side in Side}
    for p in D.pairings:
        i = p.vertex.side
        q = p.partner
        factor = P.factor(i)
        s_q, s_w = D.s(q), D.s(p.vertex)
        s_qa = P.multiply(s_q, P.embed(i, p.a))
        for b in samples[i.other]:
            t3.check(not data.is_transversal(P.multiply(s_qa, P.embed(i.other, b))), f"{p.name}, {P.factor(i.other).render(b)}")
        for a1 in samples[i]:
            t4.check(not data.is_transversal(P.multiply(s_w, P.embed(i, a1))), f"{p.name}, {factor.render(a1)}")
        for a_q in subgroup_sample(P, i, D.groups[q].generators, radius):
            shifted = factor.multiply(a_q, p.a)
            if P.is_c(i, factor.multiply(factor.inverse(p.a), shifted)):
                continue
            t6.check(not data.is_transversal(P.multiply(s_q, P.embed(i, shifted))), f"{p.name}, {factor.render(a_q)}")
        for j in Side:
            rho = rs[(p.vertex, j)].rho
            if P.multiply(rs[(p.vertex, j.other)].rho, inv(rho)).is_identity:
                continue
            for b in samples[j.other]:
                t5.check(not data.is_transversal(P.multiply(rho, P.embed(j.other, b))), f"{p.name}, ρ{j.label}, {P.factor(j.other).render(b)}")
    tallies.extend([t3, t4, t5, t6])

    tally = Tally("stable-coset-avoids-tree-label", "a·C ≠ b·C for a stable transversal product and a Y₁ label b at its start")
    for p in D.pairings:
        q, u = p.partner, p.parent
        factor = P.factor(q.side)
        for w in children[q]:
            if D.in_y1(w) and w.label is not None:
                tally.check(not P.is_c(q.side, factor.multiply(factor.inverse(w.label.element), p.a)), f"{p.name}, {name(w)}")
        own = label_of(p.vertex)
        u_factor = P.factor(u.side)
        for w in children[u]:
            if D.in_y1(w):
                tally.check(not P.is_c(u.side, u_factor.multiply(u_factor.inverse(label_of(w)), own)), f"{p.name} inverted, {name(w)}")
    tallies.append(tally)

    report = LawReport(t.entry() for t in tallies)
    logger.info("domain laws: %s entries, %s failing", len(report.entries), len(report.failures))
    return report
