import json

import pytest

from amalgamkit import BudgetError
from amalgamkit.constants import Budgets, Verdict
from amalgamkit.metrics.ball import CayleyBall, all_geodesics, cayley_ball, geodesic_points
from amalgamkit.metrics.distortion import (distortion_profile, fellow_traveler_epsilon, lemma22_probe, lemma31_length_probe,
                                           measure_subgroup, quasigeodesic_fit)
from amalgamkit.metrics.report import CSV_COLUMNS, render_csv, write_report
from amalgamkit.metrics.verdict import quasiconvexity_verdict
from amalgamkit.words import EMPTY, Word, parse_word


@pytest.fixture(scope="module")
def sl2z_ball(sl2z):
    return CayleyBall(sl2z, 8)


class TestCayleyBall:
    def test_sizes(self, sl2z, surface):
        assert len(CayleyBall(sl2z, 0)) == 1
        assert len(CayleyBall(sl2z, 1)) == 5
        ball = CayleyBall(surface, 1)
        assert len(ball) == 9
        assert ball.sphere_sizes == [1, 8]

    def test_distances(self, sl2z_ball):
        assert sl2z_ball.distance("1") == 0
        assert sl2z_ball.distance("ssrrr") == 0
        assert sl2z_ball.distance("rrr") == 2
        assert sl2z_ball.size(1) == 5

    def test_memory_limit(self, surface):
        with pytest.raises(BudgetError) as error:
            CayleyBall(surface, 6, limit=50)
        assert error.value.last_radius < 6

    def test_negative_radius(self, sl2z):
        with pytest.raises(ValueError):
            cayley_ball(sl2z, -1)

    def test_threads_do_not_change_the_ball(self, sl2z):
        assert CayleyBall(sl2z, 5, threads=4).sphere_sizes == CayleyBall(sl2z, 5).sphere_sizes


class TestGeodesics:
    def test_square_of_s(self, sl2z, sl2z_ball):
        assert all_geodesics(sl2z, "ss", 4, sl2z_ball) == [parse_word("ss"), parse_word("s's'")]

    def test_identity(self, sl2z, sl2z_ball):
        assert all_geodesics(sl2z, "1", 4, sl2z_ball) == [EMPTY]

    def test_beyond_cap(self, sl2z, sl2z_ball):
        with pytest.raises(BudgetError):
            all_geodesics(sl2z, "srsrsr", 4, sl2z_ball)

    def test_points_follow_the_word(self, sl2z):
        points = geodesic_points(sl2z, parse_word("sr"))
        assert points == [sl2z.identity, sl2z.element("s"), sl2z.element("sr")]


class TestDistortion:
    def test_powers_of_sr(self, sl2z, sl2z_ball):
        measured = measure_subgroup(sl2z, ["sr"], 4, sl2z_ball)
        assert len(measured) == 9
        assert all(m.l_g == 2 * m.l_h for m in measured)

    def test_whole_group_is_undistorted(self, sl2z, sl2z_ball):
        rows = distortion_profile(sl2z, ["s", "r"], 6, 6, sl2z_ball)
        assert [row.fitted_C_add for row in rows] == [0] * 7
        assert rows[-1].fitted_C_mul == 1.0
        assert rows[-1].fitted_C == 1.0
        assert rows[-1].h_elements == sl2z_ball.size(6)

    def test_whole_group_epsilon(self, sl2z, sl2z_ball):
        rows = fellow_traveler_epsilon(sl2z, ["s", "r"], 4, 4, sl2z_ball)
        assert [row.epsilon for row in rows] == [0] * 5

    def test_epsilon_stabilizes(self, sl2z, sl2z_ball):
        rows = fellow_traveler_epsilon(sl2z, ["sr"], 8, 4, sl2z_ball, threads=2)
        assert rows[8].epsilon == rows[6].epsilon
        assert rows[8].stabilized
        assert all(a.epsilon <= b.epsilon for a, b in zip(rows, rows[1:]))


class TestQuasigeodesics:
    def test_empty_list_is_vacuous(self, sl2z):
        fit = quasigeodesic_fit(sl2z, [])
        assert fit.vacuous
        assert fit.lam == 0.0

    def test_geodesic_word(self, sl2z, sl2z_ball):
        fit = quasigeodesic_fit(sl2z, [parse_word("srsr")], sl2z_ball)
        assert fit.lam == 1.0

    def test_backtracking_word(self, sl2z, sl2z_ball):
        s, s_inverse = ("s", 1), ("s", -1)
        fit = quasigeodesic_fit(sl2z, [Word((s, s_inverse, s))], sl2z_ball)
        assert fit.lam == 2.0
        assert fit.witness == Word((s, s_inverse))

    def test_coset_shortest_forms(self, sl2z):
        probe = lemma31_length_probe(sl2z, 30, 6, seed=3)
        assert probe.samples == 30
        assert probe.fit.lam >= 1.0
        assert probe.tail_defect >= 0


class TestLemma22:
    def test_finite_intersection(self, surface):
        report = lemma22_probe(surface, ["aba'b'"], ["a"], 2, CayleyBall(surface, 3))
        assert not report.precondition_violated
        assert set(report.constants) == {"K", "K1", "K2", "K3", "lambda", "lambda1", "lambda2"}
        assert report.constants["K"].value == report.constants["K1"].value

    def test_growing_intersection(self, surface):
        report = lemma22_probe(surface, ["a"], ["a"], 2, CayleyBall(surface, 3))
        assert report.precondition_violated
        assert report.constants == {}


class TestVerdict:
    def test_free_subgroup_is_certified(self, sl2z, budgets):
        report = quasiconvexity_verdict(sl2z, ["sr"], budgets, seed=1)
        assert report.verdict is Verdict.STRUCTURAL
        assert not report.partial
        assert len(report.rows) == budgets.radius + 1
        assert report.lines()[-1] == "verdict: qc-certified-structural"

    def test_elliptic_subgroup(self, surface):
        report = quasiconvexity_verdict(surface, ["a", "b"], Budgets(hball=3, depth=3, radius=2, memory=2_000_000))
        assert report.verdict is Verdict.STRUCTURAL
        assert any(line.startswith("elliptic:") for line in report.structural)

    def test_memory_budget_gives_partial_report(self, surface):
        report = quasiconvexity_verdict(surface, ["ab", "cd"], Budgets(hball=0, depth=0, radius=6, memory=50))
        assert report.partial
        assert report.verdict is Verdict.INCONCLUSIVE

    def test_written_report(self, sl2z, budgets, tmp_path):
        report = quasiconvexity_verdict(sl2z, ["sr"], budgets, seed=1)
        csv_path, json_path = write_report(sl2z, report, tmp_path)
        assert csv_path.read_text().splitlines()[0] == ",".join(CSV_COLUMNS)
        assert len(csv_path.read_text().splitlines()) == budgets.radius + 2
        document = json.loads(json_path.read_text())
        assert document["verdict"] == "qc-certified-structural"
        assert all(row["epsilon_is_lower_bound"] for row in document["rows"])
        again = write_report(sl2z, quasiconvexity_verdict(sl2z, ["sr"], budgets, seed=1), tmp_path / "again")
        assert again[0].read_text() == render_csv(report)
