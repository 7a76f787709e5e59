import itertools

import pytest

import seal


def short(months=3, seed=1, **kw):
    return seal.Params(seed=seed, total_days=months * seal.DAYS_PER_MONTH, **kw)


def test_worked_examples():
    assert seal.wage_base(1000, 200) == 1.2
    grid = seal.sensitivity_grid("ALPHA", 6)
    assert grid == pytest.approx([0.01, 0.208, 0.406, 0.604, 0.802, 1.0], abs=1e-9)


def test_gini_matches_pairwise_definition():
    x = [0.0, 1.0, 4.0, 4.0, 9.5]
    mean = sum(x) / len(x)
    pairwise = sum(abs(a - b) for a, b in itertools.product(x, x)) / (2 * len(x) ** 2 * mean)
    assert seal.gini(x) == pytest.approx(pairwise, abs=1e-12)
    with pytest.raises(ValueError):
        seal.gini([1.0, -1.0])


def test_params_round_trip_and_validation():
    p = short(alpha=0.3, alternative0=False)
    assert p.alpha == 0.3
    assert p["alternative0"] == "False"
    assert seal.Params.from_config(p.dump()) == p
    with pytest.raises(ValueError):
        seal.Params(NOT_A_KEY=1)
    p.alpha = 7.0
    assert p.validate()


def test_synthetic_run_is_deterministic(tmp_path):
    world = seal.synthetic_world(seal.Params(seed=3))
    assert world.citizens == 200
    assert world.regions == ["A", "B"]
    a = seal.run(world, short(seed=3), out_dir=tmp_path / "a")
    b = seal.run(world, short(seed=3))
    assert a.ok and b.ok
    assert a.final_state_digest == b.final_state_digest
    assert [r["month"] for r in a.general] == [0, 1, 2]
    assert set(a.general[0]) == set(seal.general_columns())
    assert len(a.regional) == 6
    assert sorted(p.name.split("_")[1] for p in (tmp_path / "a").glob("temp_*.txt")) == [
        "agent", "firm", "general", "house", "regional"]


def test_simulation_steps_and_conservation():
    world = seal.synthetic_world(seal.Params(seed=5))
    sim = seal.Simulation(world, short(seed=5))
    sim.bootstrap()
    report = sim.run_month()
    assert len(report["steps"]) == 11
    assert report["steps"][0][0] == "record_month"
    for name, before, after in report["steps"]:
        spent = report["fiscal_spent"] if name == "fiscal_spend" else 0.0
        assert before - spent == pytest.approx(after, rel=1e-9, abs=1e-9)
    for _ in range(seal.DAYS_PER_MONTH):
        sim.run_day()
    assert sim.month == 1


def test_snapshot_round_trip(tmp_path):
    world = seal.synthetic_world(seal.Params(seed=2))
    world.save(tmp_path / "w.seal-snap")
    assert seal.load_snapshot(tmp_path / "w.seal-snap") == world
    (tmp_path / "bad.seal-snap").write_text("garbage")
    with pytest.raises(seal.SnapshotError):
        seal.load_snapshot(tmp_path / "bad.seal-snap")


def test_cli_entry_point(tmp_path):
    assert seal.cli(["run", "--synthetic", "--days", "21", "--out", str(tmp_path)]) == 0
    assert seal.cli(["run", "--synthetic", "--set", "ALPHA=9", "--out", str(tmp_path)]) == 1
