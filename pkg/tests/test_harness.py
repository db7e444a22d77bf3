import re

import pytest

from superbracket.exprio import to_machine_encoding
from superbracket.harness import SUITE_CITATIONS, SUITES, run_suite, run_suites
from superbracket.session import default_session, load_session

SESSION = default_session()


def strip_elapsed(text):
    return re.sub(r"(?m)^elapsed .*$", "", text)


def test_citation_table_covers_every_suite():
    assert set(SUITE_CITATIONS) == set(SUITES)


@pytest.mark.parametrize(
    "suite", ["axioms-canonical", "casimir", "star-assoc", "hochschild-l1", "theorem3-d1", "parser-roundtrip"]
)
def test_suites_pass(suite):
    report = run_suite(SESSION, suite, 12, 7)
    assert report.passed, report.text()
    assert report.cases == 12 and report.checks >= 12


def test_xi_suite_lists_all_sixteen_combinations():
    report = run_suite(SESSION, "theorem2-xi", 20, 1)
    xi_notes = [n for n in report.notes if n.startswith("xi(")]
    assert len(xi_notes) == 16
    assert sum(n.endswith("= Odd") for n in xi_notes) == 4
    assert report.passed


def test_split_dirac_suites_report_counterexamples():
    report = run_suite(SESSION, "lemma1-dirac", 16, 42)
    assert not report.passed
    assert {f.identity for f in report.failures} == {"leibniz"}
    f = report.failures[0]
    assert set(f.inputs) == {"f", "g", "h"} and f.residual != "0"


def test_single_branch_dirac_suites_pass():
    for suite in ("lemma1-dirac", "theorem1-jacobi"):
        report = run_suite(SESSION, suite, 12, 42, dirac_branch="single")
        assert report.passed, report.text()
        assert "dirac bracket: single branch" in report.notes


def test_unknown_branch_and_suite():
    with pytest.raises(ValueError):
        run_suite(SESSION, "casimir", 1, 0, dirac_branch="other")
    with pytest.raises(KeyError):
        run_suite(SESSION, "nope", 1, 0)


def test_reproducible_minus_timing():
    a = run_suite(SESSION, "theorem1-jacobi", 8, 99)
    b = run_suite(SESSION, "theorem1-jacobi", 8, 99)
    assert strip_elapsed(to_machine_encoding(a)) == strip_elapsed(to_machine_encoding(b))
    assert a.text() == b.text()


def test_seed_changes_inputs():
    a = run_suite(SESSION, "lemma1-dirac", 8, 1)
    b = run_suite(SESSION, "lemma1-dirac", 8, 2)
    assert [f.inputs for f in a.failures] != [f.inputs for f in b.failures]


def test_report_encoding_fields():
    text = to_machine_encoding(run_suite(SESSION, "casimir", 3, 5))
    lines = text.splitlines()
    assert lines[1] == "report casimir"
    assert "field passed true" in lines and "field cases 3" in lines
    assert lines[-1] == "endreport" and lines[-2].startswith("elapsed ")


def test_run_all():
    reports = run_suites(SESSION, "all", 2, 0)
    assert [r.suite for r in reports] == list(SUITES)


def test_other_sessions():
    s = load_session("pairs: [[q, p]]\nodd: [a, b]\nconstraints: [a]\norder: 2\n")
    assert run_suite(s, "casimir", 10, 3).passed
    assert run_suite(s, "star-assoc", 6, 3).passed
