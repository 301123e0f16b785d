from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aft.errors import ScaleError
from aft.expansion import waiting_schedules
from aft.instances import dag_instance, generate_dag
from aft.oracle import classical_max_flow_over_time, oracle_strict, oracle_waiting

from conftest import make_net


def test_single_path(single):
    assert oracle_strict(single, 4).optimum == 2


def test_single_path_waiting(single):
    # σ1+σ2 <= 1: schedules (0,0), (0,1), (1,0). The first two share (e1,0),
    # the last two share (e2,2), so at most two units fit.
    schedules = list(waiting_schedules(single, 4))
    assert sorted(ws.wait for ws in schedules) == [(0, 0), (0, 1), (1, 0)]
    assert oracle_waiting(single, 4).optimum == 2


def test_horizon_below_every_path(single):
    assert oracle_strict(single, 2).optimum == 0
    assert oracle_waiting(single, 2).optimum == 0


def test_no_slack_gives_bottleneck():
    net = make_net([("a", "b", "c")], a=(3, 1), b=(Fraction(3, 2), 2), c=(4, 0))
    assert oracle_strict(net, 4).optimum == Fraction(3, 2)
    assert oracle_waiting(net, 4).optimum == Fraction(3, 2)


def test_example2(ex2):
    strict = oracle_strict(ex2, 5)
    assert strict.optimum == 2 == oracle_waiting(ex2, 5).optimum
    assert sum(strict.argument.values()) == 2


def test_size_bounds(ex1, monkeypatch):
    with pytest.raises(ScaleError):
        oracle_strict(ex1, 6, limit=3)
    monkeypatch.setenv("AFT_BOUNDS", "oracle_waiting=5")
    with pytest.raises(ScaleError):
        oracle_waiting(ex1, 6)


class TestClassical:
    def test_diamond(self):
        arcs = [("s", "a", 1, 1), ("a", "t", 1, 1), ("s", "b", 1, 1), ("b", "t", 1, 1)]
        assert classical_max_flow_over_time(arcs, "s", "t", 4) == 4
        assert classical_max_flow_over_time(arcs, "s", "t", 2) == 0

    def test_uses_residual_arcs(self):
        # the cheap path s-a-b-t blocks both long paths unless it is undone
        arcs = [
            ("s", "a", 1, 0), ("s", "b", 1, 3), ("a", "b", 1, 0),
            ("a", "t", 1, 3), ("b", "t", 1, 0),
        ]
        # Two paths of length 3 each give 2*(T-3); the single cheap path gives T.
        assert classical_max_flow_over_time(arcs, "s", "t", 10) == 14

    def test_unreachable(self):
        assert classical_max_flow_over_time([("s", "a", 1, 0)], "s", "t", 5) == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 7))
def test_classical_agrees_with_expansion(seed, horizon):
    doc = generate_dag(5, 7, seed, horizon=horizon)
    net = doc.network()
    arcs = [(u, v, net.capacity(name), net.transit(name)) for name, (u, v) in doc.graph["arcs"].items()]
    assert classical_max_flow_over_time(arcs, doc.graph["source"], doc.graph["sink"], horizon) == oracle_strict(
        net, horizon
    ).optimum


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_waiting_is_a_relaxation(seed):
    doc = generate_dag(4, 4, seed, max_horizon=5)
    net = doc.network()
    assert oracle_waiting(net, doc.horizon).optimum >= oracle_strict(net, doc.horizon).optimum


def test_dag_instance_paths():
    doc = dag_instance({"x": ("s", "t")}, "s", "t", {"x": 2}, {"x": 1}, 3)
    assert doc.paths == [("x",)]
    assert oracle_strict(doc.network(), 3).optimum == 4
