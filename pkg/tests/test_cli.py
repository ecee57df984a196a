import functools

import pytest

from amalgamkit import cli
from amalgamkit.constants import ExitCode

SMALL = ["--radius", "0", "--hball", "0", "--depth", "0"]


def run(capsys, *argv: str) -> tuple[int, list[str]]:
    code = cli.main(list(argv))
    return code, capsys.readouterr().out.splitlines()


def test_validate_sl2z(capsys):
    code, lines = run(capsys, "validate", "--catalog", "sl2z")
    assert code == ExitCode.OK
    assert "T1: {1, s}" in lines
    assert "T-1: {1, r, r'}" in lines
    assert lines[-1] == "OK"


def test_validate_dump_round_trips(capsys, tmp_path):
    code, lines = run(capsys, "validate", "--catalog", "surface", "--dump")
    assert code == ExitCode.OK
    dumped = "\n".join(lines[lines.index("[factor 1]"):-1]) + "\n"
    path = tmp_path / "genus2.amalgam"
    path.write_text(dumped)
    code, lines = run(capsys, "validate", "--presentation", str(path))
    assert code == ExitCode.OK
    assert lines[0] == "presentation: genus2"


def test_malformed_presentation(capsys, tmp_path):
    path = tmp_path / "broken.amalgam"
    path.write_text("[factor 1]\nkind = finite\ngenerators = s\nelements = 1, s\ntable\n1 * 1\n")
    assert cli.main(["validate", "--presentation", str(path)]) == ExitCode.VALIDATION
    assert capsys.readouterr().err.startswith("error: line 6:")


def test_foreign_generator(capsys):
    assert cli.main(["validate", "--catalog", "sl2z", "--gens", "sq"]) == ExitCode.VALIDATION
    assert "error:" in capsys.readouterr().err


def test_negative_budget():
    with pytest.raises(SystemExit):
        cli.main(["lab", "--catalog", "sl2z", "--radius", "-1"])


class TestNormalForm:
    def test_alternating_word(self, capsys):
        code, lines = run(capsys, "normal-form", "--catalog", "sl2z", "-w", "srs")
        assert code == ExitCode.OK
        assert "syllable length: 3" in lines

    def test_commutator(self, capsys):
        _, lines = run(capsys, "normal-form", "--catalog", "surface", "-w", "aba'b'")
        assert lines[0] == "element of C: t"
        assert "syllable length: 0" in lines

    def test_identity(self, capsys):
        _, lines = run(capsys, "normal-form", "--catalog", "sl2z", "-w", "ssrrr")
        assert lines[0] == "identity"

    def test_trace(self, capsys):
        _, lines = run(capsys, "normal-form", "--catalog", "sl2z", "-w", "sssrrrr", "--trace")
        assert any(line.startswith("lemma31 step5:") for line in lines)
        assert any(line.startswith("pipeline output:") for line in lines)


class TestDecompose:
    def test_sl2z(self, capsys):
        code, lines = run(capsys, "decompose", "--catalog", "sl2z", "--gens", "sr")
        assert code == ExitCode.OK
        assert lines[0] == "domain: certified = true"
        assert any(line.startswith("free: H is free on 1 stable letters") for line in lines)

    def test_elliptic(self, capsys):
        code, lines = run(capsys, "decompose", "--catalog", "surface", "--gens", "a,b")
        assert code == ExitCode.OK
        assert lines[0].startswith("elliptic: H fixes")

    def test_conjugate_elliptic(self, capsys):
        code, lines = run(capsys, "decompose", "--catalog", "sl2z", "--gens", "srs'")
        assert code == ExitCode.OK
        assert lines[0].startswith("elliptic: H fixes s·A-1 ;")
        assert "conjugator" in lines[0]

    def test_centralizer(self, capsys):
        code, lines = run(capsys, "decompose", "--catalog", "centralizer", "--gens", "b,x", "--trace")
        assert code == ExitCode.OK
        assert not any(line.startswith("free:") for line in lines)

    def test_no_budget(self, capsys):
        code, lines = run(capsys, "decompose", "--catalog", "sl2z", "--gens", "sr", "--hball", "0")
        assert code == ExitCode.INCONCLUSIVE
        assert lines[-1] == "advice: raise --hball or --depth"

    def test_subgroup_file(self, capsys, tmp_path):
        path = tmp_path / "h.subgroup"
        path.write_text("[subgroup]\ngen = sr\nbudget.hball = 0\n")
        code, _ = run(capsys, "decompose", "--catalog", "sl2z", "--subgroup", str(path))
        assert code == ExitCode.INCONCLUSIVE


def test_transversal(capsys):
    code, lines = run(capsys, "transversal", "--catalog", "sl2z", "--gens", "sr")
    assert code == ExitCode.OK
    assert lines[0] == "T1: {1, s}"
    assert any(line.startswith("K: ") for line in lines)


def test_lab_writes_reports(capsys, tmp_path):
    code, lines = run(capsys, "lab", "--catalog", "sl2z", "--gens", "sr", "--radius", "4", "--out", str(tmp_path))
    assert code == ExitCode.OK
    assert "verdict: qc-certified-structural" in lines
    assert sorted(p.suffix for p in tmp_path.iterdir()) == [".csv", ".json"]


def test_catalog_list(capsys):
    code, lines = run(capsys, "catalog", "list")
    assert code == ExitCode.OK
    assert any(line.startswith("sl2z:") for line in lines)


def test_selftest_ignores_thread_count(capsys, tmp_path, monkeypatch):
    monkeypatch.setattr(cli, "run_selftest", functools.partial(cli.run_selftest, samples=20))
    for threads in ("1", "4"):
        code, _ = run(capsys, "selftest", "--seed", "5", "--threads", threads, "--out", str(tmp_path / threads), *SMALL)
        assert code == ExitCode.OK
    first = (tmp_path / "1" / "selftest-5.txt").read_text()
    assert first == (tmp_path / "4" / "selftest-5.txt").read_text()
    assert "status = not exercised" in first
