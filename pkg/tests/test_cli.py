import json
import subprocess
import sys

from purecubic.cli import canonical_line, load_records, main, p4_locus, run_survey


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_1430_report(capsys):
    code, out, _ = run(capsys, "classify", 1430, "--mclass", "--verify")
    assert code == 0
    assert "maximal order: period 50" in out
    assert "period 48" in out
    for frag in ("-16", "1100", "-34", "1210", "239", "183"):
        assert frag in out
    assert out.strip().endswith("type beta, M0")


def test_classify_json(capsys):
    code, out, _ = run(capsys, "classify", 12, "--json")
    rec = json.loads(out)
    assert code == 0 and rec["species"] == "1a" and rec["type"] == "beta"
    assert rec["evidence"]["norm"] == 4


def test_undecided_exit_code(capsys):
    code, _, err = run(capsys, "--precision-budget", 8, "classify", 3)
    assert code == 2 and "undecided" in err


def test_error_exit_code(capsys):
    code, _, err = run(capsys, "classify", 27)
    assert code == 1 and "cube" in err
    code, _, err = run(capsys, "justify", 7)
    assert code == 1


def test_survey_summary(capsys, tmp_path):
    out = tmp_path / "s.jsonl"
    code, text, _ = run(capsys, "survey", 2, 10, "--out", out, "--json")
    assert code == 0
    assert json.loads(text) == {"lo": 2, "hi": 10, "alpha": 1, "beta": 4, "gamma": 1, "total": 6}
    lines = out.read_text().splitlines()
    assert [json.loads(x)["d"] for x in lines] == [2, 3, 5, 6, 7, 10]
    assert list(json.loads(lines[0])) == [
        "d", "a", "b", "species", "f", "R", "type", "Q",
        "period_length", "pf_norms", "m_class", "timing",
    ]  # fmt: skip


def test_resume_is_idempotent(tmp_path, monkeypatch):
    out = str(tmp_path / "s.jsonl")
    run_survey(2, 10, out, resume=True)
    first = open(out).read()
    import purecubic.cli as cli

    def boom(*a, **k):
        raise AssertionError("recomputed")

    monkeypatch.setattr(cli, "_survey_one", boom)
    run_survey(2, 10, out, resume=True)
    assert open(out).read() == first


def test_resume_discards_partial_line(tmp_path):
    out = tmp_path / "s.jsonl"
    run_survey(2, 10, str(out))
    full = out.read_text()
    lines = full.splitlines(keepends=True)
    out.write_text("".join(lines[:3]) + lines[3][:10])
    assert len(load_records(str(out))) == 3
    run_survey(2, 10, str(out), resume=True)
    again = [canonical_line(json.loads(x)) for x in out.read_text().splitlines()]
    assert again == [canonical_line(json.loads(x)) for x in full.splitlines()]


def test_workers_do_not_change_output(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    run_survey(2, 60, str(a), workers=1, mclass=True)
    run_survey(2, 60, str(b), workers=2, mclass=True)
    canon = lambda p: [canonical_line(json.loads(x)) for x in p.read_text().splitlines()]
    assert canon(a) == canon(b)


def test_justify_csv(capsys):
    code, out, _ = run(capsys, "justify", 1430)
    rows = out.strip().splitlines()
    assert rows[0] == "d,coset,norm,y,C,coarse,P2,B"
    assert rows[1] == "1430,first,1100,1.3000,2.4494,✓,4.5812,9.0000"
    assert rows[2] == "1430,second,1210,1.1818,2.0000,✓,4.6919,9.0000"


def test_p4_locus():
    rows = list(p4_locus(0, 4, -20, 0, 0.1))
    sample = {(x, y): s for k, x, y, v, s in rows if k == "sample"}
    assert sample[(1.0, 0.0)] == -1
    dip = min(y for (x, y), s in sample.items() if s <= 0 and x > 0 and y < 0)
    assert -16.5 < dip < -15.5
    markers = {round(y, 6) for k, x, y, v, s in rows if k == "marker"}
    assert markers == {2.0, round(6**0.5, 6)}


def test_p4_sign_flips_at_x3():
    # P4(3, Y) = Y^2 + 12 Y - 18 has two real zeros
    import math

    c = 3**4 - 3**3 - 8 * 9
    disc = 144 - 4 * c
    roots = [(-12 - math.sqrt(disc)) / 2, (-12 + math.sqrt(disc)) / 2]
    rows = {round(y, 6): s for k, x, y, v, s in p4_locus(3, 3, -20, 5, 0.01) if k == "sample"}
    for z in roots:
        below = rows[round(math.floor(z * 100) / 100, 6)]
        above = rows[round(math.ceil(z * 100) / 100, 6)]
        assert below * above < 0


def test_module_entry_point():
    p = subprocess.run(
        [sys.executable, "-m", "purecubic", "classify", "7", "--json"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(p.stdout)["type"] == "alpha"
