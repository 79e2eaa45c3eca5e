#!/usr/bin/env python3
"""
Tests for experiment configuration and validation.

Topics covered:
- Building a config from a JSON object
- JSON pointers of rejected fields
- Exact reading of rationals and complex points
- Command-line overrides of seed and tolerances
"""
from fractions import Fraction

import pytest

from gaudin_lab.config import ExperimentConfig, Tolerances
from gaudin_lab.errors import ConfigError


def test_valid_config(census_config):
    config = ExperimentConfig.from_dict(census_config)
    assert config.algebra == "A1"
    assert config.weights == ((1,), (1,))
    assert config.points == (0, 1)
    assert config.chi == (Fraction(7, 3),)
    assert config.seed == 3
    assert config.exact_points
    assert config.lie_algebra.dim == 3
    assert config.tolerances == Tolerances()


def test_floats_are_read_exactly(census_config):
    census_config["chi"] = [0.1]
    census_config["points"] = [0, "1/3"]
    config = ExperimentConfig.from_dict(census_config)
    assert config.chi == (Fraction(1, 10),)
    assert config.points[1] == Fraction(1, 3)


def test_complex_points(census_config):
    census_config["points"] = [[0, 1], [2.5, -1]]
    config = ExperimentConfig.from_dict(census_config)
    assert config.points == (1j, 2.5 - 1j)
    assert not config.exact_points


@pytest.mark.parametrize("change, pointer", [
    ({"chi": [1, 2]}, "/chi"),
    ({"chi": ["one"]}, "/chi/0"),
    ({"colour": 1}, "/colour"),
    ({"points": [0, 0]}, "/points/1"),
    ({"points": [0]}, "/points"),
    ({"points": [[0, 1, 2], 1]}, "/points/0"),
    ({"weights": [[1], [-1]]}, "/weights/1/0"),
    ({"weights": [["1/2"], [1]]}, "/weights/0/0"),
    ({"weights": []}, "/weights"),
    ({"algebra": "B2"}, "/algebra"),
    ({"algebra": 2}, "/algebra"),
    ({"pipeline": "everything"}, "/pipeline"),
    ({"tolerances": {"eigen": -1}}, "/tolerances/eigen"),
    ({"tolerances": {"epsilon": 1e-3}}, "/tolerances/epsilon"),
    ({"tolerances": []}, "/tolerances"),
    ({"seed": -4}, "/seed"),
    ({"seed": True}, "/seed"),
    ({"homotopy": "yes"}, "/homotopy"),
    ({"log_level": "LOUD"}, "/log_level"),
    ({"gammas": [[1, 2]]}, "/gammas/0"),
    ({"control_kappa": "1/0"}, "/control_kappa"),
], ids=lambda v: v if isinstance(v, str) else None)
def test_bad_field_pointer(census_config, change, pointer):
    census_config.update(change)
    with pytest.raises(ConfigError) as excinfo:
        ExperimentConfig.from_dict(census_config)
    assert excinfo.value.field == pointer


def test_missing_field(census_config):
    del census_config["chi"]
    with pytest.raises(ConfigError) as excinfo:
        ExperimentConfig.from_dict(census_config)
    assert excinfo.value.field == "/chi"
    assert "missing" in excinfo.value.message


def test_not_an_object():
    with pytest.raises(ConfigError) as excinfo:
        ExperimentConfig.from_dict([1, 2])
    assert excinfo.value.field == ""


def test_tolerance_override(census_config):
    census_config["tolerances"] = {"eigen": 1e-6, "block_cap": 16}
    config = ExperimentConfig.from_dict(census_config)
    assert config.tolerances.eigen == 1e-6
    assert config.tolerances.block_cap == 16


class TestOverrides:
    def test_seed(self, census_config):
        config = ExperimentConfig.from_dict(census_config).with_overrides(seed=11)
        assert config.seed == 11

    def test_tol_scale_keeps_block_cap(self, census_config):
        config = ExperimentConfig.from_dict(census_config).with_overrides(tol_scale=10)
        assert config.tolerances.eigen == pytest.approx(1e-7)
        assert config.tolerances.block_cap == Tolerances().block_cap

    @pytest.mark.parametrize("factor", [0, -1.5])
    def test_tol_scale_must_be_positive(self, census_config, factor):
        config = ExperimentConfig.from_dict(census_config)
        with pytest.raises(ConfigError) as excinfo:
            config.with_overrides(tol_scale=factor)
        assert excinfo.value.field == "/tol_scale"

    def test_no_overrides_is_identity(self, census_config):
        config = ExperimentConfig.from_dict(census_config)
        assert config.with_overrides() is config


def test_json_round_trip_of_fields(census_config):
    data = ExperimentConfig.from_dict(census_config).to_json()
    assert data["chi"] == ["7/3"]
    assert data["weights"] == [["1"], ["1"]]
    assert data["control_kappa"] == "1/3"
