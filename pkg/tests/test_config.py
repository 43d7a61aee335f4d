"""Tests for config parsing, validation, and resolved serialization."""
import pytest

from swarmconn import config


MINIMAL = {"n": 4, "ticks": 100}


def test_defaults_resolved():
    cfg = config.from_dict(dict(MINIMAL))
    assert cfg.dim == 2 and cfg.arena == (50.0, 50.0)
    assert cfg.radio.comm_range == 16.0 and cfg.radio.drop_prob == 0.0
    assert cfg.sigma_w == pytest.approx(16.0 / 3.0)
    assert cfg.lj.delta == 16.0            # follows comm_range
    assert cfg.alpha == pytest.approx(1.0 / (2 * 3 + 1))  # bound n-1
    assert cfg.failure.mtbf is None


def test_lj_delta_tracks_comm_range():
    cfg = config.from_dict({**MINIMAL, "radio": {"comm_range": 10.0}})
    assert cfg.lj.delta == 10.0
    cfg = config.from_dict({**MINIMAL, "radio": {"comm_range": 10.0},
                            "lj": {"delta": 7.0}})
    assert cfg.lj.delta == 7.0


def test_unknown_keys_rejected():
    with pytest.raises(ValueError, match="frobnicate"):
        config.from_dict({**MINIMAL, "frobnicate": 1})
    with pytest.raises(ValueError, match="sigma_W"):
        config.from_dict({**MINIMAL, "weights": {"sigma_W": 2.0}})


def test_missing_required():
    with pytest.raises(ValueError, match="'n'"):
        config.from_dict({"ticks": 10})
    with pytest.raises(ValueError, match="'ticks'"):
        config.from_dict({"n": 3})


def test_value_validation():
    with pytest.raises(ValueError):
        config.from_dict({**MINIMAL, "dt": -0.1})
    with pytest.raises(ValueError):
        config.from_dict({**MINIMAL, "weights": {"mode": "sharp"}})
    with pytest.raises(ValueError):
        config.from_dict({**MINIMAL, "radio": {"drop_prob": 1.5}})
    with pytest.raises(ValueError):
        config.from_dict({**MINIMAL, "robustness": {"trigger": "sideways"}})
    with pytest.raises(ValueError):
        config.from_dict({**MINIMAL, "pi": {"correction_period": 0}})


def test_explicit_placement():
    cfg = config.from_dict({**MINIMAL,
                            "placement": {"positions": [[0, 0], [1, 0],
                                                        [2, 0], [3, 0]]}})
    assert cfg.placement == "explicit"
    assert cfg.initial_positions == ((0.0, 0.0), (1.0, 0.0),
                                     (2.0, 0.0), (3.0, 0.0))
    with pytest.raises(ValueError, match="n initial positions"):
        config.from_dict({**MINIMAL, "placement": {"positions": [[0, 0]]}})


def test_dim_and_arena():
    cfg = config.from_dict({**MINIMAL, "dim": 3,
                            "arena": {"sides": [10, 20, 30]}})
    assert cfg.arena == (10.0, 20.0, 30.0)
    assert config.from_dict({**MINIMAL, "dim": 3}).arena == (50.0,) * 3
    with pytest.raises(ValueError, match="match dim"):
        config.from_dict({**MINIMAL, "dim": 3, "arena": {"sides": [10, 20]}})


def test_toml_roundtrip(tmp_path):
    cfg = config.from_dict({**MINIMAL, "seed": 7,
                            "radio": {"comm_range": 12.0, "drop_prob": 0.25},
                            "gains": {"sigma": 0.5},
                            "failure": {"mtbf": 300.0},
                            "netsim": {"ttl": 9}})
    p = tmp_path / "cfg.toml"
    p.write_text(config.to_toml(cfg))
    cfg2 = config.load_config(p)
    assert cfg2.seed == 7
    assert cfg2.radio == cfg.radio
    assert cfg2.gains == cfg.gains
    assert cfg2.lj == cfg.lj
    assert cfg2.failure.mtbf == 300.0
    assert cfg2.ttl == 9
    assert cfg2.alpha == cfg.alpha
    assert cfg2.sigma_w == cfg.sigma_w


def test_toml_roundtrip_explicit_positions(tmp_path):
    cfg = config.from_dict({"n": 2, "ticks": 5,
                            "placement": {"positions": [[0.25, 1.5],
                                                        [3.125, 4.0]]}})
    p = tmp_path / "cfg.toml"
    p.write_text(config.to_toml(cfg))
    cfg2 = config.load_config(p)
    assert cfg2.initial_positions == cfg.initial_positions
