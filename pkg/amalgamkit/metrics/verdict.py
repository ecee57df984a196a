from __future__ import annotations

from dataclasses import dataclass, field
from logging import getLogger
from typing import Sequence

from .. import BudgetError
from ..amalgam import AmalgamPresentation, WordLike
from ..bass_serre.domain import EllipticCertificate, FundamentalDomain, Inconclusive, compute_fundamental_domain
from ..bass_serre.graph import induced_graph_of_groups
from ..bass_serre.laws import verify_domain_laws
from ..bass_serre.tree import render_vertex
from ..constants import REPORT_HEADER, Budgets, Verdict
from ..words import render_word
from .ball import CayleyBall
from .distortion import DistortionRow, distortion_profile, fellow_traveler_epsilon

logger = getLogger(__name__)


@dataclass
class DistortionReport:
    presentation: str
    subgroup: list[str]
    budgets: Budgets
    seed: int
    rows: list[DistortionRow] = field(default_factory=list)
    structural: list[str] = field(default_factory=list)
    verdict: Verdict = Verdict.INCONCLUSIVE
    diagnostics: list[str] = field(default_factory=list)
    partial: bool = False

    @property
    def stabilized(self) -> bool:
        return bool(self.rows) and bool(self.rows[-1].stabilized)

    def lines(self) -> list[str]:
        lines = [f"# {REPORT_HEADER}", f"presentation: {self.presentation}",
                 f"subgroup: <{', '.join(self.subgroup)}>", f"budgets: {self.budgets.describe()}", f"seed: {self.seed}"]
        lines.extend(f"structural: {line}" for line in self.structural)
        for row in self.rows:
            lines.append(f"row: R = {row.radius} ; ball = {row.ball_size} ; H = {row.h_elements} ; "
                         f"C_add = {row.fitted_C_add} ; C_mul = {row.fitted_C_mul:.4g} ; epsilon = {row.epsilon} ; "
                         f"stabilized = {str(row.stabilized).lower()}")
        lines.extend(f"diagnostic: {d}" for d in self.diagnostics)
        if self.partial:
            lines.append("partial: true")
        lines.append(f"verdict: {self.verdict.value}")
        return lines


def _structural_track(P: AmalgamPresentation, h_gens: Sequence[WordLike], budgets: Budgets, report: DistortionReport) -> bool:
    """True when the action on the Bass-Serre tree certifies quasiconvexity"""
    result = compute_fundamental_domain(P, h_gens, budgets)
    match result:
        case EllipticCertificate():
            report.structural.append(f"elliptic: H fixes {render_vertex(P, result.vertex)} ; {result.reason}")
            report.structural.append(f"H is a subgroup of a conjugate of A{result.side.label}, quasiconvex in its factor")
            return True
        case Inconclusive():
            report.diagnostics.append(f"domain: {result.reason}")
            report.diagnostics.extend(result.diagnostics)
            return False
    assert isinstance(result, FundamentalDomain)
    D = result
    if not D.certified:
        report.diagnostics.append("domain: not certified within the H-ball")
        report.diagnostics.extend(D.diagnostics)
        return False
    B = induced_graph_of_groups(D)
    for v in D.y1:
        group = D.groups[v]
        report.structural.append(f"vertex group v{group.index} at {render_vertex(P, v)}: {len(group.generators)} generators")
    report.structural.append(f"stable letters: {len(B.stable_edges)}")
    laws = verify_domain_laws(D)
    if not laws.passed:
        report.diagnostics.extend(f"law failure: {e.law}" for e in laws.failures)
        return False
    if D.has_trivial_stabilizers:
        rank = len(B.stable_edges)
        bound = "holds" if rank <= len(D.generators) else "fails"
        report.structural.append(f"free: H is free on {rank} stable letters ; rank <= {len(D.generators)} generators {bound}")
    return True


def quasiconvexity_verdict(P: AmalgamPresentation, h_gens: Sequence[WordLike], budgets: Budgets,
                           seed: int = 0, threads: int = 1) -> DistortionReport:
    names = [g if isinstance(g, str) else render_word(P.word_of(g)) for g in h_gens]
    report = DistortionReport(P.name or "unnamed", names, budgets, seed)
    structural = _structural_track(P, h_gens, budgets, report)
    R = budgets.radius
    try:
        ball = CayleyBall(P, R, budgets.memory, threads)
        profile = distortion_profile(P, h_gens, R, budgets.hball, ball, budgets.memory)
        epsilon = fellow_traveler_epsilon(P, h_gens, R, budgets.hball, ball, budgets.memory, threads)
        report.rows = [row._replace(epsilon=e.epsilon, stabilized=e.stabilized) for row, e in zip(profile, epsilon)]
    except BudgetError as e:
        logger.warning("empirical track stopped: %s", e)
        report.diagnostics.append(f"empirical: {e}")
        report.partial = True
    if structural:
        report.verdict = Verdict.STRUCTURAL
    elif report.stabilized and not report.partial:
        report.verdict = Verdict.EMPIRICAL
    logger.info("verdict for <%s>: %s", ", ".join(names), report.verdict.value)
    return report
