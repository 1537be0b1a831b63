import numpy as np
import pytest

from kdvsym.cli import main as cli_main
from kdvsym.diagnostics import galilean_discrepancy
from kdvsym.errors import ConfigError
from kdvsym.harness import (
    CosineProfile,
    ExperimentSpec,
    boost_sweep_spec,
    load_config,
    preset_names,
    ramp_spec,
    run_experiment,
    soliton_count,
    zk_spec,
)
from kdvsym.mesh import MeshLayer, Periodic
from kdvsym.schemes import Fixed, Lagrangian, SchemeKind
from kdvsym.solutions import SolitonBoosted

GOOD_CONFIG = """
[scheme]
kind = trapezoidal_ten
dt = 1e-3

[mesh]
strategy = lagrangian

[solution]
kind = ramp

[domain]
kind = dirichlet
xmin = 0.0
xmax = 20.0
n = 35

[time]
start = 1.0
stop = 1.05

[output]
report_every = 10
"""


def test_preset_names():
    names = preset_names()
    for expected in (
        "zabusky_kruskal",
        "exact_ramp",
        "cnoidal_convergence",
        "cnoidal_soliton_rmse",
        "double_soliton_boost",
    ):
        assert expected in names


def test_soliton_count_basic():
    nodes = np.linspace(0.0, 2.0, 64)
    flat = MeshLayer(0.0, nodes, np.full(64, 0.7))
    assert soliton_count(flat, 0.3) == 0
    single = MeshLayer(0.0, nodes, np.asarray(SolitonBoosted(4.0).evaluate(0.0, nodes - 1.0)))
    assert soliton_count(single, 0.3) == 1
    # two bumps and a plateau, plateau counted once
    u = np.zeros(64)
    u[10:13] = 1.0  # plateau
    u[30] = 2.0
    u[50] = 0.1  # below threshold
    lay = MeshLayer(0.0, nodes, u)
    assert soliton_count(lay, 0.3) == 2
    assert soliton_count(lay, 0.05) == 3


def test_run_experiment_rows_and_determinism(tmp_path):
    spec = ramp_spec("lagrangian").with_updates(t_final=1.02, report_every=5)
    rep1 = run_experiment(spec)
    rep2 = run_experiment(spec)
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    rep1.to_csv(p1)
    rep2.to_csv(p2)
    assert p1.read_bytes() == p2.read_bytes()
    text = p1.read_text().splitlines()
    assert text[0] == "step,time,rmse,linf,momentum,min_spacing"
    assert text[-1].startswith("summary,")
    assert len(rep1.rows) == 1 + 20 // 5


def test_expected_tangling_abort():
    # a steep decreasing profile tangles the Lagrangian mesh quickly
    spec = ExperimentSpec(
        name="tangle",
        initial=CosineProfile(amplitude=5.0, wavelength=0.5),
        boundary=Periodic(2.0),
        xmin=0.0,
        xmax=2.0,
        n=32,
        dt=0.05,
        t_start=0.0,
        t_final=1.0,
        kind=SchemeKind.INVARIANT_TRAPEZOIDAL_TEN,
        mesh_strategy=Lagrangian(),
    )
    rep = run_experiment(spec)
    assert rep.aborted is not None
    assert rep.aborted_step is not None


def test_load_config_roundtrip(tmp_path):
    path = tmp_path / "ramp.cfg"
    path.write_text(GOOD_CONFIG)
    spec = load_config(path)
    assert spec.n == 35
    assert spec.kind is SchemeKind.INVARIANT_TRAPEZOIDAL_TEN
    assert isinstance(spec.mesh_strategy, Lagrangian)
    rep = run_experiment(spec)
    assert rep.aborted is None
    assert rep.rows[-1][3] < 1e-11


def test_load_config_rejects_negative_dt(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text(GOOD_CONFIG.replace("dt = 1e-3", "dt = -1e-3"))
    with pytest.raises(ConfigError):
        load_config(path)


def test_load_config_unknown_scheme(tmp_path):
    path = tmp_path / "bad2.cfg"
    path.write_text(GOOD_CONFIG.replace("trapezoidal_ten", "leapfrog"))
    with pytest.raises(ConfigError):
        load_config(path)


def test_galilean_discrepancy_zero_boost():
    sol = SolitonBoosted(4.0)
    spec = ExperimentSpec(
        name="disc",
        initial=sol,
        boundary=Periodic(16.0),
        xmin=-8.0,
        xmax=8.0,
        n=48,
        dt=1e-3,
        t_start=0.0,
        t_final=0.02,
        kind=SchemeKind.MOMENTUM_CONSERVING_TRAPEZOIDAL,
        mesh_strategy=Fixed(),
        reference=sol,
    )
    assert galilean_discrepancy(spec, sol, 0.0, 0.02) == 0.0


def test_cli_list(capsys):
    assert cli_main(["list"]) == 0
    out = capsys.readouterr().out
    assert "zabusky_kruskal" in out
    assert "exact_ramp" in out


def test_cli_run_and_exit_codes(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(GOOD_CONFIG)
    assert cli_main(["run", str(cfg), "--out", str(tmp_path / "out")]) == 0
    assert (tmp_path / "out" / "run.csv").exists()
    bad = tmp_path / "bad.cfg"
    bad.write_text(GOOD_CONFIG.replace("dt = 1e-3", "dt = -1e-3"))
    assert cli_main(["run", str(bad)]) == 2
    capsys.readouterr()


def test_cli_rejects_seed(capsys):
    assert cli_main(["preset", "exact_ramp", "--seed", "7"]) == 2
    assert cli_main(["--seed=3", "list"]) == 2
    err = capsys.readouterr().err
    assert "seed" in err


def test_cli_preset_ramp(tmp_path, capsys):
    assert cli_main(["preset", "exact_ramp", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "ramp_lagrangian" in out
    assert (tmp_path / "summary.csv").exists()
    summary = (tmp_path / "summary.csv").read_text()
    linf = float(summary.splitlines()[1].split(",")[2])
    assert linf <= 1e-10


def test_cli_sweep(tmp_path, capsys):
    cfg = tmp_path / "cno.cfg"
    from kdvsym.harness import cnoidal_period

    period = cnoidal_period()
    cfg.write_text(
        f"""
[scheme]
kind = trapezoidal_ten
dt = 1e-3

[mesh]
strategy = fixed

[solution]
kind = cnoidal
a = 3.332
v = 0.784

[domain]
kind = periodic
xmin = 0.0
xmax = {period}
n = 16

[time]
start = 0.0
stop = 0.02
"""
    )
    assert cli_main(["sweep", str(cfg), "--param", "N=16,24,32", "--out", str(tmp_path / "sw")]) == 0
    out = capsys.readouterr().out
    assert "fitted order" in out


def test_zk_spec_construction():
    spec = zk_spec("standard")
    assert spec.n == 512
    assert spec.dispersion == pytest.approx(4.84e-4)
    assert spec.t_final == pytest.approx(3.6 / np.pi)
    sweep = boost_sweep_spec("adaptive_mcons")
    assert sweep.n == 128
    assert (sweep.xmax - sweep.xmin) / sweep.n == pytest.approx(0.3125)
