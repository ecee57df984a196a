"""Seeded invariant suites over the catalog.

Every suite returns law entries; a suite whose budget is zero records no instances and shows
up as not exercised instead of failing. Suites run concurrently but are reported in a fixed
order, so the summary depends only on the seed and the budgets.
"""
from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from logging import getLogger
from typing import Callable

from . import MalformedSequenceError, catalog
from .amalgam import AmalgamPresentation, canonical_form, coset_sequence, reduce_to_syllables
from .bass_serre.domain import FundamentalDomain, compute_fundamental_domain
from .bass_serre.graph import GraphOfGroups, induced_graph_of_groups
from .bass_serre.laws import LawEntry, LawReport, Tally, verify_domain_laws
from .constants import Budgets, LawStatus, Strategy
from .metrics.ball import CayleyBall
from .metrics.distortion import fellow_traveler_epsilon, lemma31_length_probe, measure_subgroup, random_words
from .rewriting.proposition_a import proposition_a_transform
from .rewriting.sequences import h_reduced_sequence, syllable_lower_bound
from .words import Word, free_reduce, parse_word, render_word

logger = getLogger(__name__)

WORD_PROBLEM_CATALOG = ("surface", "sl2z", "centralizer")
DOMAIN_RUNS = ("sl2z", "surface", "centralizer")
# vertex groups ⟨a⟩ and ⟨c⟩, so every vertex-group term carries a core element
CORE_RUN = ("surface", ("a", "c"))

Suite = Callable[[], list[LawEntry]]


def _load(name: str) -> AmalgamPresentation:
    return catalog.get(name).load()


def suite_words(seed: int, samples: int) -> list[LawEntry]:
    P = _load("surface")
    tally = Tally("words-round-trip", "parse(render(w)) = w and free reduction is idempotent")
    for w in random_words(P, samples, 10, seed):
        reduced = free_reduce(w)
        tally.check(free_reduce(reduced) == reduced and parse_word(render_word(reduced)) == reduced, render_word(w))
    return [tally.entry()]


def suite_word_problem(seed: int, samples: int) -> list[LawEntry]:
    tallies = []
    for name in WORD_PROBLEM_CATALOG:
        P = _load(name)
        tally = Tally(f"word-problem/{name}", "canonical(u·v) = canonical(canonical(u)·canonical(v))")
        words = random_words(P, 2 * samples, 10, seed)
        for u, v in zip(words[::2], words[1::2]):
            direct = canonical_form(P, Word(tuple(u) + tuple(v)))
            tally.check(direct == P.multiply(canonical_form(P, u), canonical_form(P, v)), f"{render_word(u)} * {render_word(v)}")
        tallies.append(tally)
    return [t.entry() for t in tallies]


def suite_strategies(seed: int, samples: int) -> list[LawEntry]:
    tallies = []
    for name in WORD_PROBLEM_CATALOG:
        P = _load(name)
        tally = Tally(f"reduction-strategies/{name}", "both reduction orders give one syllable length and one coset sequence")
        for w in random_words(P, samples, 10, seed + 1):
            first = reduce_to_syllables(P, w, Strategy.LEFT_TO_RIGHT)
            second = reduce_to_syllables(P, w, Strategy.RIGHT_TO_LEFT)
            tally.check(first.length == second.length and coset_sequence(P, first) == coset_sequence(P, second), render_word(w))
        tallies.append(tally)
    return [t.entry() for t in tallies]


def _domain(name: str, budgets: Budgets, gens: tuple[str, ...] | None = None) -> tuple[AmalgamPresentation, FundamentalDomain | None]:
    entry = catalog.get(name)
    P = entry.load()
    result = compute_fundamental_domain(P, entry.subgroup if gens is None else gens, budgets)
    return P, result if isinstance(result, FundamentalDomain) else None


def suite_domain_laws(name: str, budgets: Budgets) -> list[LawEntry]:
    P, D = _domain(name, budgets)
    if D is None:
        return [Tally(f"domain-laws/{name}", "the fundamental domain closes within budget").entry()]
    return [entry._replace(law=f"domain-laws/{name}/{entry.law}") for entry in verify_domain_laws(D)]


def stable_words(letters: list[str], length: int) -> list[Word]:
    """Freely reduced words of length 1 to `length` over `letters` and their inverses"""
    reads = [(name, sign) for name in letters for sign in (1, -1)]
    out = []
    for n in range(1, length + 1):
        for combination in itertools.product(reads, repeat=n):
            if all(a[0] != b[0] or a[1] != -b[1] for a, b in zip(combination, combination[1:])):
                out.append(Word(combination))
    return out


def suite_stable_letters(budgets: Budgets) -> list[LawEntry]:
    bound = Tally("stable-letter-bound", "syllable length m of a stable-letter word is at least its stable-letter count n")
    doubling = Tally("stable-letter-doubling", "m = 2n for the stable letter of <sr> in sl2z")
    bounded = Tally("non-core-bounded", "every non-core syllable of the transformed form has factor length at most K")
    P, D = _domain("sl2z", budgets)
    if D is None or not D.certified:
        return [bound.entry(), doubling.entry(), bounded.entry()]
    B = induced_graph_of_groups(D)
    for w in stable_words(D.stable_letters, 4):
        result = syllable_lower_bound(B, w)
        bound.check(result.ok, render_word(w))
        doubling.check(result.m == 2 * result.n_stable, render_word(w))
        _check_transform(B, w, bounded)
    return [bound.entry(), doubling.entry(), bounded.entry()]


def _check_transform(B: GraphOfGroups, w: Word, bounded: Tally, checks: Tally | None = None):
    """A rejected word counts as a failure; none of the words fed here lies in C"""
    try:
        transformed = proposition_a_transform(B, h_reduced_sequence(B, w))
    except MalformedSequenceError as e:
        bounded.check(False, f"{render_word(w)} rejected: {e}")
        return
    bounded.check(transformed.checks["non-core-bounded"].status is not LawStatus.FAIL, render_word(w))
    if checks is not None:
        checks.check(transformed.checks.passed, f"{render_word(w)}: {[e.law for e in transformed.checks.failures]}")


def suite_vertex_cores(budgets: Budgets) -> list[LawEntry]:
    name, gens = CORE_RUN
    cores = Tally("core-elements", f"every word of length ≤ 4 in <{', '.join(gens)}> of {name} transforms with all core clauses holding")
    bounded = Tally("non-core-bounded/cores", "non-core syllables stay within K on a domain with nontrivial vertex groups")
    P, D = _domain(name, budgets, gens)
    if D is None or not D.certified:
        return [cores.entry(), bounded.entry()]
    B = induced_graph_of_groups(D)
    for w in stable_words(D.z_names, 4):
        _check_transform(B, w, bounded, cores)
    return [cores.entry(), bounded.entry()]


def suite_isometric(budgets: Budgets) -> list[LawEntry]:
    tally = Tally("isometric-embedding", "l_H(h) ≤ l_G(h) on the H-ball of <sr> in sl2z")
    powers = Tally("powers-of-sr", "l_H((sr)^n) = n for n ≤ 4")
    if budgets.radius <= 0 or budgets.hball <= 0:
        return [tally.entry(), powers.entry()]
    P = _load("sl2z")
    ball = CayleyBall(P, 8, budgets.memory)
    measured = measure_subgroup(P, ["sr"], max(budgets.hball, 4), ball, budgets.memory)
    lengths = {m.element: m.l_h for m in measured}
    for m in measured:
        tally.check(m.l_h <= m.l_g, P.render(m.element))
    for n in range(1, 5):
        powers.check(lengths.get(P.element("sr" * n)) == n, f"n = {n}")
    return [tally.entry(), powers.entry()]


def suite_ball_sizes(budgets: Budgets) -> list[LawEntry]:
    tally = Tally("ball-sizes", "BFS ball sizes equal brute-force word enumeration on sl2z for R ≤ 4")
    sphere = Tally("surface-sphere", "the sphere of radius 1 in the surface group has 8 elements")
    if budgets.radius <= 0:
        return [tally.entry(), sphere.entry()]
    P = _load("sl2z")
    ball = CayleyBall(P, 4, budgets.memory)
    letters = P.ordering.letters()
    seen = {P.identity}
    for r in range(5):
        if r:
            seen |= {P.element(Word(w)) for w in itertools.product(letters, repeat=r)}
        tally.check(len(seen) == ball.size(r), f"R = {r}: {len(seen)} against {ball.size(r)}")
    surface = CayleyBall(_load("surface"), 1, budgets.memory)
    sphere.check(surface.sphere_sizes[1] == 8, f"sizes {surface.sphere_sizes}")
    return [tally.entry(), sphere.entry()]


def suite_lemma31(seed: int, samples: int, budgets: Budgets) -> list[LawEntry]:
    tally = Tally("lemma31-stability", "fitted λ at word length 8 is at most λ at length 6 plus 1")
    if budgets.radius <= 0:
        return [tally.entry()]
    P = _load("sl2z")
    short = lemma31_length_probe(P, samples, 6, seed)
    long = lemma31_length_probe(P, samples, 8, seed)
    tally.check(long.fit.lam <= short.fit.lam + 1, f"{long.fit.lam:.4g} against {short.fit.lam:.4g}")
    return [tally.entry()]


def suite_epsilon(budgets: Budgets) -> list[LawEntry]:
    tally = Tally("epsilon-stabilizes", "ε(8) = ε(6) for <sr> in sl2z")
    if budgets.radius <= 0 or budgets.hball <= 0:
        return [tally.entry()]
    P = _load("sl2z")
    rows = fellow_traveler_epsilon(P, ["sr"], 8, max(budgets.hball, 8), limit=budgets.memory)
    tally.check(rows[8].stabilized, f"ε(6) = {rows[6].epsilon}, ε(8) = {rows[8].epsilon}")
    return [tally.entry()]


def suite_catalog() -> list[LawEntry]:
    tally = Tally("catalog-health", "every catalog entry validates and meets its documented expectations")
    for name, entry in catalog.CATALOG.items():
        problems = entry.check(entry.load())
        tally.check(not problems, f"{name}: {'; '.join(problems)}")
    return [tally.entry()]


def run_selftest(seed: int, budgets: Budgets, threads: int = 1, samples: int = 500) -> LawReport:
    rng = random.Random(seed)
    seeds = [rng.randrange(2 ** 31) for _ in range(4)]
    suites: list[Suite] = [
        suite_catalog,
        lambda: suite_words(seeds[0], samples),
        lambda: suite_word_problem(seeds[1], samples),
        lambda: suite_strategies(seeds[2], samples),
        *[(lambda name=name: suite_domain_laws(name, budgets)) for name in DOMAIN_RUNS],
        lambda: suite_stable_letters(budgets),
        lambda: suite_vertex_cores(budgets),
        lambda: suite_isometric(budgets),
        lambda: suite_ball_sizes(budgets),
        lambda: suite_lemma31(seeds[3], min(samples, 200), budgets),
        lambda: suite_epsilon(budgets),
    ]
    with ThreadPoolExecutor(max_workers=max(threads, 1)) as pool:
        results = list(pool.map(lambda suite: suite(), suites))
    report = LawReport(entry for entries in results for entry in entries)
    logger.info("selftest: %s entries, %s failing", len(report.entries), len(report.failures))
    return report
