import json

import numpy as np
import pytest

from polarpsu.channel import ChannelSpec, count_errors
from polarpsu.core import CodeParams
from polarpsu.decoder import decode
from polarpsu.errors import ParameterError
from polarpsu.sim import CSV_FIELDS, SimConfig, decode_parallel, make_frames, run_simulation, simulate_frames


def test_no_frozen_noiseless():
    res = run_simulation(SimConfig(n=3, k=8, params=[60.0], frames=50))
    (pt,) = res.points
    assert (pt.bit_errors, pt.frame_errors, pt.ber, pt.fer) == (0, 0, 0.0, 0.0)


def test_csv_schema_and_determinism():
    cfg = dict(n=6, k=32, params=[0.0, 2.0], frames=300, seed=9)
    a = run_simulation(SimConfig(**cfg)).to_csv(timing=False)
    b = run_simulation(SimConfig(**cfg)).to_csv(timing=False)
    assert a == b
    assert a.splitlines()[0] == ",".join(CSV_FIELDS)


def test_json_mirrors_csv():
    res = run_simulation(SimConfig(n=5, k=16, params=[1.0], frames=100))
    rows = json.loads(res.to_json())
    assert list(rows[0]) == list(CSV_FIELDS)
    assert rows[0]["frames"] == 100


def test_ber_fer_definitions():
    res = run_simulation(SimConfig(n=6, k=20, params=[0.0], frames=250, seed=3))
    (pt,) = res.points
    assert pt.ber == pt.bit_errors / (250 * 20)
    assert pt.fer == pt.frame_errors / 250
    assert 0 < pt.frame_errors <= 250


def test_aggregate_is_sum_of_frames():
    params = CodeParams.from_nk(6, 32)
    spec = ChannelSpec("awgn", 1.0, 0.5)
    res = run_simulation(SimConfig(n=6, k=32, params=[1.0], frames=450, seed=4))
    u, llrs = make_frames(params, spec, 4, range(450))
    per_frame = [count_errors(decode(l, params).u_hat, uu, params.frozen) for l, uu in zip(llrs, u)]
    assert res.points[0].bit_errors == sum(b for b, _ in per_frame)
    assert res.points[0].frame_errors == sum(f for _, f in per_frame)


def test_partition_independence():
    params = CodeParams.from_nk(5, 16)
    spec = ChannelSpec("bsc", 0.05, 0.5)
    be, fe = simulate_frames(params, spec, "register", 2, range(100))
    parts = [simulate_frames(params, spec, "shift", 2, range(a, b)) for a, b in [(0, 13), (13, 77), (77, 100)]]
    assert np.array_equal(be, np.concatenate([p[0] for p in parts]))
    assert np.array_equal(fe, np.concatenate([p[1] for p in parts]))


def test_workers_do_not_change_results():
    cfg = dict(n=6, k=32, params=[1.0, 3.0], frames=500, seed=1)
    one = run_simulation(SimConfig(**cfg, workers=1)).to_csv(timing=False)
    four = run_simulation(SimConfig(**cfg, workers=4)).to_csv(timing=False)
    assert one == four


def test_target_errors_mode_deterministic():
    cfg = dict(n=5, k=16, params=[0.0, 4.0], target_errors=10, max_frames=5000, seed=5)
    one = run_simulation(SimConfig(**cfg, workers=1))
    two = run_simulation(SimConfig(**cfg, workers=3))
    assert one.to_csv(False) == two.to_csv(False)
    assert all(p.frame_errors >= 10 or p.frames == 5000 for p in one.points)


def test_default_is_target_errors():
    assert SimConfig(n=4, k=8).target_errors == 100


def test_decode_parallel_matches_serial(rng):
    params = CodeParams.from_nk(6, 30)
    llrs = rng.normal(size=(37, 64))
    assert np.array_equal(decode_parallel(llrs, params, "shift", 1), decode_parallel(llrs, params, "matrix", 3))


@pytest.mark.parametrize("bad", [
    dict(frames=10, target_errors=5), dict(frames=0), dict(k=0), dict(k=17), dict(psu="rom"),
    dict(workers=0), dict(channel="bsc", params=[0.7]), dict(seed=-1),
])
def test_config_validation(bad):
    kwargs = dict(n=4, k=8, params=[1.0])
    kwargs.update(bad)
    with pytest.raises(ParameterError):
        SimConfig(**kwargs)


def test_config_file(tmp_path):
    path = tmp_path / "exp.toml"
    path.write_text('n = 5\nk = 16\nchannel = "bsc"\nparams = [0.01, 0.05]\nframes = 40\nseed = 3\n')
    cfg = SimConfig.from_file(path, frames=None, seed=None, psu="matrix")
    assert (cfg.n, cfg.k, cfg.channel, cfg.params, cfg.frames, cfg.seed, cfg.psu) == (5, 16, "bsc", [0.01, 0.05], 40, 3, "matrix")
    cfg = SimConfig.from_file(path, target_errors=7)
    assert cfg.frames is None and cfg.target_errors == 7
    path.write_text("n = 5\nk = 16\nbogus = 1\n")
    with pytest.raises(ParameterError):
        SimConfig.from_file(path)
    path.write_text("n = = 5\n")
    with pytest.raises(ParameterError):
        SimConfig.from_file(path)


def test_config_file_defaults_lose_to_file(tmp_path):
    path = tmp_path / "exp.toml"
    path.write_text("n = 4\nk = 8\nframes = 5\n")
    assert SimConfig.from_file(path, defaults={"seed": 42}).seed == 42
    path.write_text("n = 4\nk = 8\nframes = 5\nseed = 1\n")
    assert SimConfig.from_file(path, defaults={"seed": 42}).seed == 1
