"""
Secciones de reproducción y su tabla resumen.
"""
from fractions import Fraction

import pytest

from controllers.reproduction import (
    SECTIONS, TRIPARTITE_CENSUS, ReproductionCheck, normalize_section, run_reproduction, summary_frame,
)


class TestSections:
    @pytest.mark.parametrize("alias, section", [("4", "bipartite"), ("5", "tripartite"), ("A", "appendix"),
                                                ("a", "appendix"), ("Bipartite", "bipartite")])
    def test_aliases(self, alias, section):
        assert normalize_section(alias) == section

    def test_unknown_section(self):
        with pytest.raises(ValueError):
            normalize_section("6")

    def test_census_table_covers_every_vertex(self):
        assert sum(TRIPARTITE_CENSUS.values()) == 2 ** 24
        assert len(TRIPARTITE_CENSUS) == 16


class TestRun:
    def test_appendix_passes(self):
        checks = run_reproduction(["A"])
        assert checks
        assert {c.section for c in checks} == {"appendix"}
        assert all(c.passed for c in checks), [c.to_json() for c in checks if not c.passed]

    def test_tripartite_quick_checks_pass(self):
        checks = run_reproduction(["5"], jobs=1)
        names = {c.name for c in checks}
        assert "GYNIN on BFW" in names
        assert "census (3,2,2)" not in names
        assert all(c.passed for c in checks), [c.to_json() for c in checks if not c.passed]

    def test_bipartite_passes(self):
        checks = run_reproduction(["bipartite"], jobs=1)
        assert all(c.passed for c in checks), [c.to_json() for c in checks if not c.passed]

    def test_sections_run_in_order(self):
        checks = run_reproduction(["A", "5"], jobs=1)
        sections = [c.section for c in checks]
        assert sections.index("tripartite") > sections.index("appendix")
        assert set(SECTIONS) >= set(sections)


class TestSummary:
    def test_summary_frame(self):
        checks = [
            ReproductionCheck("appendix", "ok", 1, 1, True),
            ReproductionCheck("appendix", "bad", [1, 2], "ValueError: boom", False),
        ]
        frame = summary_frame(checks)
        assert list(frame.columns) == ["section", "name", "expected", "actual", "status", "seconds"]
        assert frame["status"].tolist() == ["PASS", "FAIL"]

    def test_empty_summary(self):
        assert len(summary_frame([])) == 0

    def test_fractions_are_plain_json(self):
        doc = ReproductionCheck("tripartite", "x", Fraction(5, 8), Fraction(2, 2), True).to_json()
        assert doc["expected"] == "5/8"
        assert doc["actual"] == 1
