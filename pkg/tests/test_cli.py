import json
from fractions import Fraction

import pytest

from wildrep import cli


def job(p, n, coeffs, **kw):
    return cli.JobSpec(p=p, n=n, coefficients=[Fraction(c) for c in coeffs], **kw)


def test_run_p3a():
    report, code = cli.run(job(3, 1, [0, 0, 0, 6, 4]))
    assert code == cli.EXIT_OK
    assert report["classification"]["tag"] == "WildC3"
    assert report["representation"]["case_tag"] == "p3a"
    assert report["verification"]["all_passed"]


def test_run_p3b_branch_frozen():
    # regression-frozen after the first verified run: [0,0,0,6,1] is (b.i)
    report, code = cli.run(job(3, 1, [0, 0, 0, 6, 1]))
    assert code == cli.EXIT_OK
    assert report["representation"]["case_tag"] == "p3bi"


def test_run_multiplicative_exit_2():
    report, code = cli.run(job(2, 1, [1, 0, 0, 0, 2]))
    assert code == cli.EXIT_OUT_OF_SCOPE
    assert report["classification"]["tag"] == "PotentiallyMultiplicative"


def test_invalid_input():
    with pytest.raises(cli.InvalidInput):
        cli.run(job(5, 1, [0, 0, 0, 1, 1]))
    with pytest.raises(cli.InvalidInput):
        cli.run(job(3, 1, [0, 0, 0, 1]))
    with pytest.raises(cli.InvalidInput):
        cli.run(job(3, 1, [0, 0, 0, 0, 0]))  # singular


def test_parse_coefficient_rationals_and_wpolys():
    assert cli.parse_coefficient("-7/4") == Fraction(-7, 4)
    tag, poly = cli.parse_coefficient("1+2*w")
    assert tag == "wpoly" and poly == {0: 1, 1: 2}
    tag, poly = cli.parse_coefficient("w^2-w")
    assert poly == {2: 1, 1: -1}
    with pytest.raises(cli.InvalidInput):
        cli.parse_coefficient("x+1")


def test_main_exit_codes(capsys):
    assert cli.main(["--p", "3", "--n", "1", "--a", "0,0,0,6,4", "--format", "json"]) == 0
    out = capsys.readouterr().out
    data = json.loads(out)
    assert data["representation"]["case_tag"] == "p3a"
    assert cli.main(["--p", "2", "--n", "1", "--a", "1,0,0,0,2"]) == 2
    capsys.readouterr()
    assert cli.main(["--p", "7", "--n", "1", "--a", "0,0,0,1,1"]) == 4


def test_determinism_same_job(tmp_path):
    r1, _ = cli.run(job(3, 1, [0, 0, 0, 6, 1]))
    r2, _ = cli.run(job(3, 1, [0, 0, 0, 6, 1]))
    r1.pop("meta")
    r2.pop("meta")
    assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)


def test_representation_section_stable_at_double_precision():
    r1, _ = cli.run(job(3, 1, [0, 0, 0, 6, 1], precision=60))
    r2, _ = cli.run(job(3, 1, [0, 0, 0, 6, 1], precision=120))
    s1 = json.dumps(r1["representation"], sort_keys=True)
    s2 = json.dumps(r2["representation"], sort_keys=True)
    assert s1 == s2


def test_corpus_small(tmp_path):
    path = tmp_path / "corpus.txt"
    path.write_text(
        "# a comment line\n"
        "\n"
        "3 1 0,0,0,6,4\n"
        "2 1 1,0,0,0,2\n"
        "this line is malformed\n"
        "3 1 0,0,0,54,27  # inline comment\n"
    )
    out, code = cli.run_corpus(str(path))
    s = out["summary"]
    assert s["lines"] == 4
    assert s["ok"] == 2
    assert s["out_of_scope"] == 1
    assert s["errors"] == 1
    assert code == 1  # malformed line makes the run fail overall


def test_corpus_empty(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("")
    out, code = cli.run_corpus(str(path))
    assert out["summary"]["lines"] == 0
    assert code == 0
