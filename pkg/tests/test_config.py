"""Strict JSON config parsing: schema errors, realized objects, round trips."""

import json
import math

import numpy as np
import pytest

from qbath.baths import CoherentStateBath, EquilibriumBath, NumberStateBath, member_rng
from qbath.config import load_config, parse_config, realize_bath
from qbath.errors import SchemaError
from qbath.presets import SAMPLE_CONFIG_NAMES, STOCK_MODEL_NAMES, sample_config
from qbath.states import CatState, GaussianMoments, SqueezedDisplaced


def _base_doc():
    return {
        "model": {
            "nu": 1.0,
            "coupling_family": "RWA",
            "spectral": {
                "family": "OhmicExpCutoff",
                "strength": 0.1,
                "cutoff": 5.0,
                "omega_min": 0.5,
                "omega_max": 1.6,
                "N": 8,
            },
        },
        "bath": {"kind": "equilibrium", "beta": 1.0},
        "oscillator": {"kind": "squeezed", "r": 0.5},
        "time_grid": {"t_max": 10.0, "steps": 20},
    }


def test_sample_configs_parse(tmp_path):
    for name in SAMPLE_CONFIG_NAMES:
        doc = sample_config(name)
        cfg = parse_config(doc, json.dumps(doc))
        assert cfg.model.n_modes >= 1
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(doc))
        cfg2 = load_config(path)
        assert cfg2.model.n_modes == cfg.model.n_modes


def test_unknown_keys_rejected_with_line_anchor():
    doc = _base_doc()
    doc["modle"] = {}
    raw = json.dumps(doc, indent=2)
    with pytest.raises(SchemaError) as err:
        parse_config(doc, raw)
    assert "modle" in str(err.value)
    assert "line" in str(err.value)
    # nested unknown keys carry their section name
    doc = _base_doc()
    doc["model"]["spectral"]["gamma"] = 1.0
    with pytest.raises(SchemaError) as err:
        parse_config(doc, json.dumps(doc))
    assert "model.spectral" in str(err.value)


def test_long_line_excerpt_is_truncated():
    doc = _base_doc()
    doc["bath"]["mystery"] = 1
    raw = json.dumps(doc)  # single line, several hundred chars
    with pytest.raises(SchemaError) as err:
        parse_config(doc, raw)
    msg = str(err.value)
    assert "mystery" in msg
    assert len(msg) < 300


def test_type_errors():
    doc = _base_doc()
    doc["model"]["nu"] = "one"
    with pytest.raises(SchemaError):
        parse_config(doc, "")
    doc = _base_doc()
    doc["time_grid"]["steps"] = 2.5
    with pytest.raises(SchemaError):
        parse_config(doc, "")
    doc = _base_doc()
    doc["time_grid"]["steps"] = True  # bools are not integers here
    with pytest.raises(SchemaError):
        parse_config(doc, "")
    doc = _base_doc()
    doc["model"]["coupling_family"] = "rwa"
    with pytest.raises(SchemaError):
        parse_config(doc, "")


def test_explicit_section_rules():
    doc = _base_doc()
    # explicit section is rejected unless the spectral family asks for it
    doc["model"]["explicit"] = {"omegas": [1.0], "u_re": [0.1]}
    with pytest.raises(SchemaError):
        parse_config(doc, "")
    doc = _base_doc()
    doc["model"]["spectral"] = {"family": "Explicit", "N": 2}
    with pytest.raises(SchemaError):  # missing explicit section
        parse_config(doc, "")
    doc["model"]["coupling_family"] = "Custom"
    doc["model"]["explicit"] = {
        "omegas": [1.0, 2.0],
        "u_re": [0.1, 0.2],
        "v_im": [0.05, 0.0],
    }
    cfg = parse_config(doc, "")
    assert cfg.model.n_modes == 2
    assert cfg.model.v[0] == 0.05j
    doc["model"]["explicit"]["u_re"] = [0.1]
    with pytest.raises(SchemaError):  # length mismatch against N
        parse_config(doc, "")


def test_bath_kind_key_rules():
    doc = _base_doc()
    doc["bath"] = {"kind": "equilibrium", "beta": 1.0, "n": [1] * 8}
    with pytest.raises(SchemaError):  # 'n' belongs to number baths
        parse_config(doc, "")
    doc["bath"] = {"kind": "number", "n": [1, 0, 2, 0, 1, 0, 0, 3]}
    bath = realize_bath(parse_config(doc, ""))
    assert isinstance(bath, NumberStateBath)
    assert bath.n[7] == 3
    doc["bath"] = {"kind": "number", "n": [1, 0]}
    with pytest.raises(SchemaError):  # length must match N
        parse_config(doc, "")
    doc["bath"] = {"kind": "number", "n": [1, -1, 0, 0, 0, 0, 0, 0]}
    with pytest.raises(SchemaError):
        parse_config(doc, "")
    doc["bath"] = {"kind": "coherent", "amps_re": [0.1] * 8, "amps_im": [0.2] * 8}
    bath = realize_bath(parse_config(doc, ""))
    assert isinstance(bath, CoherentStateBath)
    assert bath.amps[0] == 0.1 + 0.2j
    doc["bath"] = {"kind": "coherent", "amps_re": [0.1] * 8, "amps_im": [0.2] * 7}
    with pytest.raises(SchemaError):
        parse_config(doc, "")


def test_beta_forms():
    for form in ("inf", "Infinity", "INF"):
        doc = _base_doc()
        doc["bath"]["beta"] = form
        bath = realize_bath(parse_config(doc, ""))
        assert isinstance(bath, EquilibriumBath)
        assert bath.beta == math.inf
    doc = _base_doc()
    doc["bath"]["beta"] = -2.0
    with pytest.raises(SchemaError):
        parse_config(doc, "")
    doc["bath"]["beta"] = "cold"
    with pytest.raises(SchemaError):
        parse_config(doc, "")


def test_sampled_bath_seeds():
    doc = _base_doc()
    doc["bath"] = {"kind": "sample_number", "beta": 1.0, "seed": 11}
    cfg = parse_config(doc, "")
    a = realize_bath(cfg)
    b = realize_bath(cfg)
    assert np.array_equal(a.n, b.n)  # one fixed realization per seed
    c = realize_bath(cfg, seed_override=12)
    assert isinstance(c, NumberStateBath)
    doc["bath"] = {"kind": "sample_coherent", "beta": 1.0, "seed": 11}
    amps = realize_bath(parse_config(doc, "")).amps
    from qbath.baths import sample_coherent_state

    expected = sample_coherent_state(1.0, cfg.model, member_rng(11, 0)).amps
    assert np.array_equal(amps, expected)
    doc["bath"] = {"kind": "sample_number", "beta": 1.0, "seed": -1}
    with pytest.raises(SchemaError):
        parse_config(doc, "")


def test_oscillator_kinds():
    doc = _base_doc()
    doc["oscillator"] = {"kind": "gaussian", "mean_re": 0.4, "n_ex": 0.2, "aa_re": 0.16}
    cfg = parse_config(doc, "")
    assert isinstance(cfg.oscillator, GaussianMoments)
    assert cfg.oscillator.mean_a == 0.4
    doc["oscillator"] = {"kind": "cat", "alpha_re": 1.0, "beta_re": -1.0}
    cfg = parse_config(doc, "")
    assert isinstance(cfg.oscillator, CatState)
    doc["oscillator"] = {"kind": "squeezed", "r": 0.3, "phi": 0.1}
    cfg = parse_config(doc, "")
    assert isinstance(cfg.oscillator, SqueezedDisplaced)
    doc["oscillator"] = {"kind": "thermal"}
    with pytest.raises(SchemaError):
        parse_config(doc, "")
    doc["oscillator"] = {"kind": "squeezed", "alpha_re": 1.0}
    with pytest.raises(SchemaError):  # cat keys on a squeezed state
        parse_config(doc, "")


def test_experiment_section():
    doc = _base_doc()
    doc["experiment"] = {"kind": "n-sweep", "n_list": [16, 32, 64], "seed": 3}
    cfg = parse_config(doc, "")
    assert cfg.experiment["n_list"] == [16, 32, 64]
    assert cfg.experiment["n_samples"] == 1000  # default
    doc["experiment"]["n_list"] = [32, 16]
    with pytest.raises(SchemaError):  # must ascend
        parse_config(doc, "")
    doc["experiment"] = {"kind": "number", "time_index": "auto"}
    assert parse_config(doc, "").experiment["time_index"] == "auto"
    doc["experiment"] = {"kind": "number", "time_index": 1.5}
    with pytest.raises(SchemaError):
        parse_config(doc, "")
    doc["experiment"] = {"kind": "bogus"}
    with pytest.raises(SchemaError):
        parse_config(doc, "")
    doc["experiment"] = {"n_samples": 0}
    with pytest.raises(SchemaError):
        parse_config(doc, "")


def test_outputs_section():
    doc = _base_doc()
    doc["outputs"] = {"directory": "out", "formats": ["csv", "sidecar"]}
    cfg = parse_config(doc, "")
    assert cfg.out_dir == "out"
    assert cfg.formats == ("csv", "sidecar")
    doc["outputs"]["formats"] = ["csv", "parquet"]
    with pytest.raises(SchemaError):
        parse_config(doc, "")
    doc = _base_doc()
    assert parse_config(doc, "").formats == ("csv", "json")


def test_missing_bath_realize():
    doc = _base_doc()
    del doc["bath"]
    cfg = parse_config(doc, "")
    with pytest.raises(SchemaError):
        realize_bath(cfg)


def test_invalid_json_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(SchemaError):
        load_config(path)
    path.write_text("[1, 2]")
    with pytest.raises(SchemaError):
        load_config(path)


def test_stock_names_cover_presets():
    assert len(STOCK_MODEL_NAMES) == 5
