import math

import networkx as nx
import numpy as np
import pytest

import moeadstn


def test_problem_info_and_evaluate():
    info = moeadstn.problem_info("DASCMOP7")
    assert info["num_objectives"] == 3
    assert info["num_constraints"] == 7
    x = [(lo + hi) / 2 for lo, hi in info["bounds"]]
    e = moeadstn.evaluate("DASCMOP7", x)
    assert len(e["objectives"]) == 3
    assert len(e["constraints"]) == 7
    assert e["violation"] == pytest.approx(sum(max(0.0, c) for c in e["constraints"]))


def test_bad_input_raises_value_error():
    with pytest.raises(ValueError):
        moeadstn.evaluate("DASCMOP1", [0.5] * 3)
    with pytest.raises(ValueError):
        moeadstn.problem_info("DASCMOP10")


def test_weights_lie_on_the_simplex():
    for w in (moeadstn.uniform_design(100, 3), moeadstn.simplex_lattice(4, 2), moeadstn.sobol_weights(10, 2)):
        assert np.allclose(w.sum(axis=1), 1.0)
        assert (w >= 0).all()
    assert moeadstn.simplex_lattice(99, 2).shape == (100, 2)


def test_metrics():
    assert moeadstn.hypervolume(np.zeros((1, 2)), [11, 11]) == 121.0
    assert moeadstn.hypervolume(np.ones((1, 2)), [11, 11]) == 100.0
    ref = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert moeadstn.igd(np.array([[0.0, 1.0]]), ref) == pytest.approx(math.sqrt(2) / 2)
    x = np.array([[0.0, 5.0, 5.0], [1.0, 5.0, 5.0]])
    assert moeadstn.population_variance(x) == pytest.approx(0.5 / 3)


def test_run_is_deterministic():
    a = moeadstn.run("DASCMOP2", seed=3, budget=2000)
    b = moeadstn.run("DASCMOP2", seed=3, budget=2000)
    assert a["evaluations"] == 2000
    assert np.array_equal(a["final_x"], b["final_x"])
    assert np.array_equal(a["archive"], b["archive"])
    hvs = [hv for _, hv, _ in a["checkpoints"]]
    assert hvs == sorted(hvs)
    assert a["accumulated_hv"] == pytest.approx(sum(hvs))


def test_config_override():
    toml = moeadstn.config_toml("no-restart")
    assert "restart = false" in toml
    r = moeadstn.run("DASCMOP2", seed=1, budget=600, config_toml="population_size = 30\nneighborhood_size = 5\n")
    assert r["final_x"].shape == (30, 30)
    with pytest.raises(ValueError):
        moeadstn.run("DASCMOP2", seed=1, variant="nope")


def test_stn_graphml_reads_in_networkx(tmp_path):
    a = moeadstn.build_stn("DASCMOP2", seeds=[1, 2], budget=1000)
    b = moeadstn.build_stn("DASCMOP2", seeds=[1, 2], variant="update", budget=1000)
    merged = moeadstn.merge_stn(a, b)
    assert merged.num_nodes == a.num_nodes + b.num_nodes - merged.shared_nodes
    path = tmp_path / "merged.graphml"
    merged.write_graphml(path)
    g = nx.read_graphml(path)
    assert g.number_of_nodes() == merged.num_nodes
    assert g.number_of_edges() == merged.num_edges
    owners = nx.get_node_attributes(g, "owner")
    assert sum(1 for o in owners.values() if o == "shared") == merged.shared_nodes
    assert moeadstn.StnGraph.read_graphml(path) == merged


def test_small_experiment(tmp_path):
    out = moeadstn.run_experiment(["DASCMOP2"], ["base", "update"], [1, 2], tmp_path, budget=800)
    assert out["runs"] == 4
    assert out["failures"] == []
    assert (tmp_path / "metrics.csv").exists()
    assert (tmp_path / "DASCMOP2_update_vs_base.graphml").exists()
