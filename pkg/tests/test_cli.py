import json
import math
from dataclasses import replace

import numpy as np
import pytest

from dastid.atoms import AtomicModel
from dastid.cli import EXIT_INVALID_CONFIG, EXIT_NONCONVERGENCE, EXIT_OK, main
from dastid.experiments import (RECORD_FIELDS, ConfigError, ExperimentConfig, ExperimentError,
                                default_system, parse_config_text, records_from_csv,
                                records_from_json, records_to_csv, records_to_json,
                                run_dast_vs_subspace, run_error_vs_n, run_identify)
from dastid.net import net_for_cardinality


def _strip_time(r):
    return replace(r, wall_time=0.0)


def _same(a, b):
    """Field-wise equality treating NaN as equal to NaN."""
    for k in RECORD_FIELDS:
        x, y = getattr(a, k), getattr(b, k)
        if isinstance(x, float) and math.isnan(x):
            assert math.isnan(y), k
        else:
            assert x == y, k


@pytest.fixture(scope="module")
def identify_record():
    return run_identify(ExperimentConfig())


def test_default_system():
    m = default_system()
    assert m.real_system and len(m) == 2
    assert np.allclose(sorted(np.abs(m.poles)), [0.7, 0.7])
    i = int(np.argmax(m.poles.imag))
    assert m.coeffs[i] == pytest.approx(1 - 1j)
    assert np.angle(m.poles[i]) == pytest.approx(np.pi / 4)


def test_identify_order_of_magnitude(identify_record):
    r = identify_record
    assert r.status == "converged"
    assert 4e-4 < r.h2_error < 4e-2
    assert r.n == 80 and abs(r.net_size - 2000) <= 20
    assert r.sigma ** 2 == pytest.approx(1e-4)
    assert r.matrix_rank == 80


def test_identify_noiseless_on_grid():
    net = net_for_cardinality(0.9, 2000)
    k = int(np.argmin(np.abs(net.points - (0.5 + 0.4j))))
    truth = AtomicModel.conjugate_pair(net.points[k], 1 - 1j, 0.9)
    cfg = ExperimentConfig(sigma=0.0, mu=1e-4, true_model=truth.to_json())
    r = run_identify(cfg)
    assert r.h2_error < 1e-3


def test_identify_deterministic(identify_record):
    again = run_identify(ExperimentConfig())
    assert _strip_time(again) == _strip_time(identify_record)


def test_failing_stage_is_named():
    with pytest.raises(ExperimentError) as info:
        run_identify(ExperimentConfig(eps=1e-5))
    assert info.value.stage == "net"


def test_fig2_counts_and_summary():
    cfg = ExperimentConfig(experiment="fig2", n_list=(10, 40), seeds=(0, 1, 2), net_size=300)
    res = run_error_vs_n(cfg)
    assert len(res.records) == 6
    assert [(r.n, r.seed) for r in res.records] == [(n, s) for n in (10, 40) for s in (0, 1, 2)]
    med = {x: v for x, s, v in res.curve if s == "median_h2_error"}
    assert med[10] == pytest.approx(np.median([r.h2_error for r in res.records if r.n == 10]))
    assert "median_nonincreasing" in res.flags


def test_fig2_empty_seeds():
    with pytest.raises(ConfigError):
        ExperimentConfig(experiment="fig2", seeds=())


def test_fig2_parallel_matches_serial():
    cfg = ExperimentConfig(experiment="fig2", n_list=(10, 20), seeds=(0, 1), net_size=200)
    serial = run_error_vs_n(cfg).records
    parallel = run_error_vs_n(replace(cfg, workers=2)).records
    assert [_strip_time(r) for r in serial] == [_strip_time(r) for r in parallel]


def test_fig3_paired_records():
    cfg = ExperimentConfig(experiment="fig3", m_list=(10, 30), seeds=(0, 1), net_size=300)
    res = run_dast_vs_subspace(cfg)
    methods = [r.method for r in res.records]
    assert methods.count("dast") == methods.count("subspace") == 4
    assert methods.count("subspace_order+2") == 4
    base = [r for r in res.records if r.method == "subspace"]
    assert all(r.markov_horizon >= 1 and r.hankel_size >= 2 for r in base)
    assert {s for _, s, _ in res.curve} == {"dast", "subspace", "subspace_order+2"}
    assert isinstance(res.flags["small_m_superiority"], bool)


def test_csv_json_round_trip(identify_record):
    cfg = ExperimentConfig(experiment="fig3", m_list=(10,), seeds=(3,), net_size=200)
    recs = [identify_record] + run_dast_vs_subspace(cfg).records
    text = records_to_csv(recs)
    assert text.splitlines()[0].split(",") == list(RECORD_FIELDS)
    back = records_from_csv(text)
    for a, b in zip(recs, back):
        _same(a, b)
    via_json = records_from_json(records_to_json(back))
    for a, b in zip(recs, via_json):
        _same(a, b)
    json.loads(records_to_json(recs))  # strict JSON, no bare NaN


def test_config_text_parsing(tmp_path):
    truth = AtomicModel.conjugate_pair(0.3 + 0.3j, 2, 0.8)
    (tmp_path / "truth.json").write_text(truth.to_json())
    text = """
    # comment line
    experiment = fig2
    rho = 0.8          # trailing comment
    seeds = 0:5
    n_list = 10, 20
    true_model = truth.json
    real_system = yes
    """
    path = tmp_path / "cfg.txt"
    path.write_text(text)
    cfg = ExperimentConfig.from_file(path)
    assert cfg.experiment == "fig2" and cfg.rho == 0.8
    assert cfg.seeds == (0, 1, 2, 3, 4) and cfg.n_list == (10, 20)
    assert cfg.real_system is True
    assert np.allclose(sorted(cfg.truth().poles, key=lambda p: p.imag), [0.3 - 0.3j, 0.3 + 0.3j])


@pytest.mark.parametrize("text", [
    "rho = 1.5",
    "bogus = 1",
    "rho = abc",
    "rho = 0.5\nrho = 0.6",
    "no equals sign",
    "experiment = fig9",
    "rho = 0.6",            # default system has poles at 0.7
    "sigma = 0",
    "true_model = {broken",
])
def test_invalid_configs(text):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_text(text)


def test_parse_config_text_skips_blank():
    assert parse_config_text("\n  a = 1 \n#x\n") == {"a": "1"}


def test_config_hash():
    base = ExperimentConfig()
    assert base.config_hash() == replace(base, seed=5, threads=2).config_hash()
    assert base.config_hash() != replace(base, rho=0.9).config_hash()


def test_cli_identify_json(tmp_path):
    cfg = tmp_path / "c.txt"
    cfg.write_text("n = 30\nnet_size = 300\n")
    out = tmp_path / "out" / "r.json"
    code = main(["--config", str(cfg), "--seed", "4", "--threads", "1", "--out", str(out), "--format", "json"])
    assert code == EXIT_OK
    rows = json.loads(out.read_text())
    assert len(rows) == 1 and rows[0]["seed"] == 4 and rows[0]["threads"] == 1
    assert set(rows[0]) == set(RECORD_FIELDS)


def test_cli_fig2_writes_curve(tmp_path):
    out = tmp_path / "f2.csv"
    code = main(["--experiment", "fig2", "--set", "n_list=10,20", "--set", "seeds=0,1",
                 "--set", "net_size=200", "--out", str(out)])
    assert code == EXIT_OK
    assert len(records_from_csv(out.read_text())) == 4
    curve = (tmp_path / "f2_curve.csv").read_text().splitlines()
    assert curve[0] == "x,series,value"
    assert json.loads((tmp_path / "f2_summary.json").read_text())


@pytest.mark.parametrize("argv", [
    ["--set", "rho=2"],
    ["--set", "nonsense"],
    ["--config", "/nonexistent/cfg.txt"],
    ["--experiment", "fig7"],
    ["--format", "xml"],
])
def test_cli_invalid_config_exit_code(argv, capsys):
    assert main(argv) == EXIT_INVALID_CONFIG


def test_cli_nonconvergence_exit_code(tmp_path):
    out = tmp_path / "r.csv"
    code = main(["--set", "max_iter=5", "--set", "net_size=200", "--out", str(out)])
    assert code == EXIT_NONCONVERGENCE
    (rec,) = records_from_csv(out.read_text())
    assert rec.status == "max_iter"
