"""Amalgamated free products: normal forms, Bass-Serre decompositions and a quasiconvexity lab"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from logging import getLogger
from pathlib import Path
from typing import Sequence

from . import AlphabetError, AmalgamError, ParseError, ValidationError, __version__, catalog
from .amalgam import AmalgamPresentation, reduce_to_syllables, validate_presentation
from .bass_serre.domain import EllipticCertificate, FundamentalDomain, Inconclusive, compute_fundamental_domain
from .bass_serre.graph import induced_graph_of_groups
from .bass_serre.laws import verify_domain_laws
from .bass_serre.transversal import transversal_elements
from .bass_serre.tree import render_vertex
from .constants import DEFAULT_BUDGETS, Budgets, ExitCode, LawStatus, Side, Verdict
from .fileformat import dump_domain, dump_presentation, parse_presentation, parse_subgroup
from .metrics.report import write_report
from .metrics.verdict import quasiconvexity_verdict
from .rewriting.proposition_a import proposition_a_transform
from .rewriting.proposition_b import lemma31_form, proposition_b_pipeline
from .rewriting.sequences import h_reduced_sequence
from .selftest import run_selftest, stable_words
from .words import render_word

logger = getLogger(__name__)


@dataclass
class RunConfig:
    catalog: str | None = None
    presentation: Path | None = None
    subgroup: Path | None = None
    gens: list[str] = field(default_factory=list)
    budgets: Budgets = DEFAULT_BUDGETS
    out: Path | None = None
    seed: int = 0
    threads: int = 1
    trace: bool = False

    def load(self) -> AmalgamPresentation:
        if self.presentation is not None:
            text = self.presentation.read_text(encoding="utf-8")
            return validate_presentation(parse_presentation(text, self.presentation.stem))
        if self.catalog is not None:
            return catalog.get(self.catalog).load()
        raise ValidationError("either --catalog or --presentation is required")

    def subgroup_generators(self) -> list[str]:
        """Generators from --gens, the subgroup file, or the catalog entry, in that order"""
        if self.gens:
            return self.gens
        if self.subgroup is not None:
            spec = parse_subgroup(self.subgroup.read_text(encoding="utf-8"))
            self.budgets = spec.budgets(self.budgets)
            return spec.generators
        if self.catalog is not None and self.presentation is None:
            return list(catalog.get(self.catalog).subgroup)
        return []


def _emit(lines: Sequence[str]):
    for line in lines:
        print(line)


def cmd_validate(config: RunConfig, dump: bool = False) -> ExitCode:
    P = config.load()
    generators = config.subgroup_generators()
    for g in generators:
        P.parse(g)
    _emit(P.summary(min(config.budgets.radius, 2)))
    if generators:
        print(f"subgroup: <{', '.join(generators)}>")
    if config.catalog is not None and config.presentation is None:
        problems = catalog.get(config.catalog).check(P)
        _emit(f"expectation failed: {problem}" for problem in problems)
        if problems:
            return ExitCode.VALIDATION
    if dump:
        print(dump_presentation(P), end="")
    print("OK")
    return ExitCode.OK


def cmd_normal_form(config: RunConfig, word: str) -> ExitCode:
    P = config.load()
    w = P.parse(word)
    g = P.element(w)
    if g.is_identity:
        print("identity")
    elif g.in_c:
        print(f"element of C: {render_word(g.tail_word)}")
    else:
        print(f"canonical: {P.render(g)}")
    form = reduce_to_syllables(P, w)
    print(f"reduced: {P.render_form(form)}")
    print(f"syllable length: {form.length}")
    if config.trace:
        _emit(f"lemma31 {line}" for line in lemma31_form(P, w).trace)
        _emit(f"pipeline {line}" for line in proposition_b_pipeline(P, w).lines())
    return ExitCode.OK


def _domain_or_exit(P: AmalgamPresentation, config: RunConfig, generators: list[str]) -> FundamentalDomain | ExitCode:
    result = compute_fundamental_domain(P, generators, config.budgets)
    match result:
        case EllipticCertificate():
            print(f"elliptic: H fixes {render_vertex(P, result.vertex)} ; {result.reason}")
            return ExitCode.OK
        case Inconclusive():
            print(f"inconclusive: {result.reason}")
            _emit(f"diagnostic: {d}" for d in result.diagnostics)
            print("advice: raise --hball or --depth")
            return ExitCode.INCONCLUSIVE
    assert isinstance(result, FundamentalDomain)
    return result


def cmd_transversal(config: RunConfig) -> ExitCode:
    P = config.load()
    radius = config.budgets.radius
    for side in Side:
        factor = P.factor(side)
        print(f"T{side.label}: {{{', '.join(factor.render(t) for t in P.transversal(side, radius))}}}")
    generators = config.subgroup_generators()
    if not generators:
        return ExitCode.OK
    D = _domain_or_exit(P, config, generators)
    if isinstance(D, ExitCode):
        return D
    data = transversal_elements(D)
    _emit(f"transversal: {P.render(r)}" for r in data.representatives)
    print(f"K: {data.K}")
    print(f"Sigma: {{{', '.join(P.render_syllable(s) for s in data.sigma)}}}")
    return ExitCode.OK


def cmd_decompose(config: RunConfig) -> ExitCode:
    P = config.load()
    generators = config.subgroup_generators()
    if not generators:
        raise ValidationError("decompose needs --gens, --subgroup or a catalog subgroup")
    D = _domain_or_exit(P, config, generators)
    if isinstance(D, ExitCode):
        return D
    _emit(dump_domain(D))
    B = induced_graph_of_groups(D)
    _emit(B.describe())
    laws = verify_domain_laws(D)
    _emit(laws.lines())
    if D.is_free_on_stable_letters():
        rank = len(B.stable_edges)
        print(f"free: H is free on {rank} stable letters ; {rank} <= {len(D.generators)} generators")
    if config.trace and D.certified:
        for w in stable_words(D.stable_letters, 2):
            sequence = h_reduced_sequence(B, w)
            print(f"sequence {render_word(w)}: {sequence.render()}")
            if sequence.evaluate().in_c:
                continue
            _emit(f"  {line}" for line in proposition_a_transform(B, sequence).lines())
    if not laws.passed:
        return ExitCode.LAW_FAILURE
    return ExitCode.OK if D.certified else ExitCode.INCONCLUSIVE


def cmd_lab(config: RunConfig) -> ExitCode:
    P = config.load()
    generators = config.subgroup_generators()
    if not generators:
        raise ValidationError("lab needs --gens, --subgroup or a catalog subgroup")
    report = quasiconvexity_verdict(P, generators, config.budgets, config.seed, config.threads)
    _emit(report.lines())
    for path in write_report(P, report, config.out or Path(".")):
        print(f"written: {path}")
    if report.partial and report.verdict is Verdict.INCONCLUSIVE:
        return ExitCode.INCONCLUSIVE
    return ExitCode.OK


def cmd_selftest(config: RunConfig) -> ExitCode:
    report = run_selftest(config.seed, config.budgets, config.threads)
    lines = [f"seed: {config.seed}", f"budgets: {config.budgets.describe()}"]
    lines.extend(f"suite: {e.law} ; instances = {e.instances} ; status = {e.status.value}" for e in report)
    for entry in report.failures:
        lines.extend(f"failure: {entry.law} ; {instance}" for instance in entry.failures)
    skipped = sum(1 for e in report if e.status is LawStatus.NOT_EXERCISED)
    lines.append(f"summary: {len(report.entries)} suites ; {len(report.failures)} failed ; {skipped} skipped")
    _emit(lines)
    if config.out is not None:
        config.out.mkdir(parents=True, exist_ok=True)
        (config.out / f"selftest-{config.seed}.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return ExitCode.OK if report.passed else ExitCode.LAW_FAILURE


def cmd_catalog(action: str) -> ExitCode:
    if action != "list":
        raise ValueError(f"Catalog action not found : {action}")
    _emit(catalog.describe())
    return ExitCode.OK


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group()
    source.add_argument("--catalog", help="catalog entry, e.g. sl2z or cyclic:4,6,2")
    source.add_argument("--presentation", type=Path, help="presentation file")
    subgroup = common.add_mutually_exclusive_group()
    subgroup.add_argument("--subgroup", type=Path, help="subgroup spec file")
    subgroup.add_argument("--gens", help="comma separated generator words of H")
    common.add_argument("--radius", type=_non_negative, default=DEFAULT_BUDGETS.radius, help="Cayley ball radius")
    common.add_argument("--hball", type=_non_negative, default=DEFAULT_BUDGETS.hball, help="H-ball radius")
    common.add_argument("--depth", type=_non_negative, default=DEFAULT_BUDGETS.depth, help="tree exploration depth")
    common.add_argument("--memory", type=_non_negative, default=DEFAULT_BUDGETS.memory, help="element cap for balls")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", type=Path, help="output directory for reports")
    common.add_argument("--trace", action="store_true", help="print rewriting traces")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="amalgam", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", required=True)
    validate = commands.add_parser("validate", parents=[common], help="check a presentation and print its summary")
    validate.add_argument("--dump", action="store_true", help="print the presentation in file syntax")
    normal = commands.add_parser("normal-form", parents=[common], help="canonical and reduced forms of a word")
    normal.add_argument("-w", "--word", required=True)
    commands.add_parser("transversal", parents=[common], help="coset transversals and transversal elements")
    commands.add_parser("decompose", parents=[common], help="fundamental domain, graph of groups and law report")
    commands.add_parser("lab", parents=[common], help="distortion profile, fellow-traveler constants and verdict")
    commands.add_parser("selftest", parents=[common], help="seeded invariant suites over the catalog")
    listing = commands.add_parser("catalog", help="built-in presentations")
    listing.add_argument("action", choices=["list"])
    listing.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def config_from(args: argparse.Namespace) -> RunConfig:
    budgets = Budgets(hball=args.hball, depth=args.depth, radius=args.radius, memory=args.memory)
    gens = [g.strip() for g in args.gens.split(",") if g.strip()] if args.gens else []
    return RunConfig(args.catalog, args.presentation, args.subgroup, gens, budgets, args.out, args.seed, args.threads, args.trace)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "catalog":
            return cmd_catalog(args.action)
        config = config_from(args)
        match args.command:
            case "validate":
                return cmd_validate(config, args.dump)
            case "normal-form":
                return cmd_normal_form(config, args.word)
            case "transversal":
                return cmd_transversal(config)
            case "decompose":
                return cmd_decompose(config)
            case "lab":
                return cmd_lab(config)
            case "selftest":
                return cmd_selftest(config)
    except (ParseError, ValidationError, AlphabetError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return ExitCode.VALIDATION
    except AmalgamError as e:
        print(f"error: {e}", file=sys.stderr)
        return ExitCode.FAILURE
    return ExitCode.FAILURE


if __name__ == "__main__":
    sys.exit(main())
