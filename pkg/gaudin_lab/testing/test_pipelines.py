#!/usr/bin/env python3
"""
Tests for the batch pipelines and their reports.

Topics covered:
- Every pipeline passes on the two-site A1 instance
- Report sections and CSV tables
- Deterministic JSON output
- Plot rendering from a saved report
"""
import json
import os
from fractions import Fraction
from unittest import mock

import pytest

from gaudin_lab.bethe import CensusCounts
from gaudin_lab.config import ExperimentConfig
from gaudin_lab.pipelines import CHI_CONVENTION, RANK_SWEEP, PipelineReport, run_pipeline
from gaudin_lab.reports import load_report, report_plot, write_report


def make_config(census_config, pipeline, **changes):
    data = dict(census_config, pipeline=pipeline)
    data.update(changes)
    return ExperimentConfig.from_dict(data)


@pytest.mark.parametrize("pipeline", ["commute", "dmt", "shift"])
def test_exact_pipelines_pass(census_config, pipeline):
    report = run_pipeline(make_config(census_config, pipeline))
    assert report.checks
    assert report.passed, [c.claim for c in report.failures]


def test_commute_on_a2(census_config):
    config = make_config(census_config, "commute", algebra="A2", weights=[[1, 0], [0, 1]],
                         points=[0, "1/2"], chi=[2, "-1/3"])
    report = run_pipeline(config)
    assert report.passed
    assert {r["dim"] for r in report.sections["hamiltonians"]} == {1, 3}


def test_shift_section(census_config):
    report = run_pipeline(make_config(census_config, "shift"))
    assert report.sections["shift"] == {
        "generators": 2,
        "rank_at_chi": 2,
        "rank_sweep": {"samples": RANK_SWEEP, "full_rank": RANK_SWEEP, "min_rank": 2},
        "rank_at_nilpotent": 2,
        "rank_at_zero": 1,
    }


@pytest.mark.parametrize("pipeline", ["commute", "dmt", "shift", "bethe-census", "opers"])
def test_every_check_names_its_anchor(census_config, pipeline):
    report = run_pipeline(make_config(census_config, pipeline))
    assert report.checks
    assert all(c.anchor for c in report.checks)
    assert all(entry["anchor"] for entry in report.to_json()["checks"])


def test_hamiltonian_records_state_the_chi_convention(census_config):
    report = run_pipeline(make_config(census_config, "commute"))
    for record in report.sections["hamiltonians"]:
        assert record["parameters"]["chi"] == ["-7/3"]
        assert record["parameters"]["connection_chi"] == ["7/3"]
        assert record["parameters"]["chi_convention"] == CHI_CONVENTION


def test_dmt_pipeline_reports_curvature(census_config):
    config = make_config(census_config, "dmt", algebra="A2", weights=[[1, 1]], points=[0],
                         chi=[2, "-1/3"])
    report = run_pipeline(config)
    curvature = [c for c in report.checks if c.operation == "hamiltonians.dmt_curvature"]
    assert len(curvature) == 1
    assert curvature[0].passed
    assert curvature[0].detail["pairs"] > 0
    assert curvature[0].detail["max_norm"] == 0


@pytest.mark.numeric
class TestBethePipelines:
    def test_census(self, census_config):
        report = run_pipeline(make_config(census_config, "bethe-census"))
        assert report.passed, [c.claim for c in report.failures]
        dims = [entry["block_dimension"] for entry in report.sections["census"]]
        classes = [entry["bethe_solution_classes"] for entry in report.sections["census"]]
        assert dims == classes == [1, 2, 1]
        assert report.sections["census_counts"]["counts_by_m"] == {"0": 1, "1": 2, "2": 1}
        assert report.sections["census_counts"]["complete"]
        assert len(report.tables["bethe_solutions"]) == 0 + 2 + 2

    def test_incomplete_census_is_data_not_a_failure(self, census_config, caplog):
        short = CensusCounts((Fraction(0),), 1, (0,), solution_classes=1, block_dimension=2,
                             matched_eigenvectors=1, zero_vectors=0,
                             joint_eigenvalues=[(1 + 0j, -1 + 0j)])
        with mock.patch("gaudin_lab.pipelines.census", return_value=short):
            report = run_pipeline(make_config(census_config, "bethe-census"))
        assert report.passed
        assert not report.sections["census_counts"]["complete"]
        assert "census incomplete" in caplog.text

    def test_eigenvalue_outside_spectrum_fails(self, census_config):
        stray = CensusCounts((Fraction(0),), 1, (0,), solution_classes=1, block_dimension=2,
                             matched_eigenvectors=0, zero_vectors=0,
                             joint_eigenvalues=[(5 + 0j, -5 + 0j)])
        with mock.patch("gaudin_lab.pipelines.census", return_value=stray):
            report = run_pipeline(make_config(census_config, "bethe-census"))
        assert [c.operation for c in report.failures] == ["bethe.census"]
        assert report.failures[0].anchor

    def test_opers(self, census_config):
        report = run_pipeline(make_config(census_config, "opers"))
        assert report.passed, [c.claim for c in report.failures]
        assert len(report.sections["opers"]) == 4

    @pytest.mark.slow
    def test_monodromy(self, census_config):
        report = run_pipeline(make_config(census_config, "monodromy"))
        assert report.passed, [c.claim for c in report.failures]
        assert report.tables["monodromy"]

    @pytest.mark.slow
    def test_full(self, census_config):
        report = run_pipeline(make_config(census_config, "full"))
        assert report.passed, [c.claim for c in report.failures]
        assert set(report.sections) >= {"hamiltonians", "dmt", "shift", "census", "opers",
                                        "monodromy"}
        assert all(c.anchor for c in report.checks)


def test_failed_check_is_reported(census_config):
    report = PipelineReport("commute", make_config(census_config, "commute"))
    report.add("bethe.solve", "a claim that holds", True, anchor="a statement")
    report.add("bethe.census", "a claim that fails", False, anchor="another statement", gap=1)
    assert not report.passed
    assert [c.operation for c in report.failures] == ["bethe.census"]
    assert report.to_json()["checks"][1]["detail"] == {"gap": 1}
    assert report.to_json()["checks"][1]["anchor"] == "another statement"


def test_check_without_anchor_is_rejected(census_config):
    report = PipelineReport("commute", make_config(census_config, "commute"))
    with pytest.raises(ValueError) as excinfo:
        report.add("bethe.solve", "a claim", True, anchor="")
    assert "bethe.solve" in str(excinfo.value)


class TestReports:
    def test_report_is_deterministic(self, census_config, tmp_path):
        config = make_config(census_config, "commute")
        first = write_report(run_pipeline(config), str(tmp_path / "a"))
        second = write_report(run_pipeline(config), str(tmp_path / "b"))
        with open(first[0]) as f, open(second[0]) as g:
            assert f.read() == g.read()

    def test_tables_become_csv(self, census_config, out_dir):
        written = write_report(run_pipeline(make_config(census_config, "bethe-census")), out_dir)
        assert os.path.join(out_dir, "bethe_solutions.csv") in written
        document = load_report(os.path.join(out_dir, "report.json"))
        assert document["pipeline"] == "bethe-census"
        assert document["config"]["chi"] == ["7/3"]

    def test_plots(self, census_config, out_dir):
        write_report(run_pipeline(make_config(census_config, "bethe-census")), out_dir)
        document = load_report(os.path.join(out_dir, "report.json"))
        paths = report_plot(document, out_dir)
        assert os.path.join(out_dir, "bethe_roots.png") in paths
        assert all(os.path.getsize(p) > 0 for p in paths)

    def test_plot_skips_missing_sections(self, out_dir, caplog):
        assert report_plot({"sections": {}}, out_dir) == []
        assert "skipping" in caplog.text

    def test_json_is_sorted(self, census_config, out_dir):
        write_report(run_pipeline(make_config(census_config, "commute")), out_dir)
        with open(os.path.join(out_dir, "report.json")) as f:
            text = f.read()
        assert list(json.loads(text)) == sorted(json.loads(text))
