from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aft.errors import DomainError, PreconditionError
from aft.expansion import (
    CutOverTime,
    FlowOverTime,
    check_expansion_switching,
    check_weak_duality,
    entry_time,
    expand,
    temporal_path,
    waiting_path,
    waiting_schedules,
)
from aft.instances import generate_closure, generate_dag
from aft.oracle import oracle_strict

from conftest import make_net

P, Q, R, S = ("s", "a", "b", "t"), ("s", "b", "a", "t"), ("s", "a", "t"), ("s", "b", "t")


def starts(temporal):
    out = {}
    for tp in temporal:
        out.setdefault(tp.base, []).append(tp.start)
    return out


class TestExpand:
    def test_single_path(self, single):
        assert [tp.start for tp in expand(single, 4)] == [0, 1]

    def test_example2(self, ex2, ex2_abt):
        assert starts(expand(ex2, 5)) == {P: [0], Q: [0], R: [0, 1], S: [0, 1]}
        assert starts(expand(ex2_abt, 5)) == {P: [0], Q: [0], R: [0, 1], ("a", "b", "t"): [0, 1]}

    def test_horizon_too_short(self, single):
        assert expand(single, 1) == []

    def test_bad_horizon(self, single):
        with pytest.raises(DomainError):
            expand(single, 0)

    def test_late_copy_rejected(self, single):
        with pytest.raises(DomainError):
            temporal_path(single, ("e1", "e2"), 2, horizon=4)


class TestEntryTime:
    def test_meeting_point(self, ex2):
        assert entry_time(temporal_path(ex2, P, 0), "b") == 2

    def test_waiting_identification(self, ex2):
        for t in range(3):
            ws = waiting_path(ex2, P, (t, 0, 0, 0))
            tp = temporal_path(ex2, P, t)
            assert ws.elements == tp.elements
            assert all(entry_time(ws, e) == entry_time(tp, e) for e in P)

    def test_gamma(self, single):
        ws = waiting_path(single, ("e1", "e2"), (1, 2))
        assert entry_time(ws, "e2") == 4
        assert ws.sigma("e2") == 2

    def test_not_on_path(self, single):
        with pytest.raises(DomainError):
            entry_time(temporal_path(single, ("e1", "e2"), 0), "zz")


class TestExpansionSwitching:
    def test_example2_time_gap(self, ex2):
        assert check_expansion_switching(ex2, 5).ok
        report = check_expansion_switching(ex2, 6)
        found = {(str(p), str(q), x) for p, q, x in report.violations}
        assert found == {
            ("(s,a,b,t)@0", "(s,b,a,t)@1", ("b", 2)),
            ("(s,b,a,t)@0", "(s,a,b,t)@1", ("a", 2)),
        }

    def test_single_path(self, single):
        assert check_expansion_switching(single, 6).ok

    def test_dag_equal_prefix_transit(self):
        # diamond with uniform transit: every shared element is entered after the same delay
        net = make_net([("s-a", "a-t"), ("s-b", "b-t")])
        assert check_expansion_switching(net, 6).ok


class TestWeakDuality:
    def test_zero_flow(self, ex2):
        full = CutOverTime((el.id, t) for el in ex2.elements for t in range(5))
        assert check_weak_duality(FlowOverTime(), full, ex2, 5)

    def test_oracle_flow_against_full_cut(self, ex2):
        result = oracle_strict(ex2, 5)
        full = CutOverTime((el.id, t) for el in ex2.elements for t in range(5))
        assert check_weak_duality(FlowOverTime(result.argument), full, ex2, 5)

    def test_non_covering_cut(self, single):
        with pytest.raises(PreconditionError, match="misses"):
            check_weak_duality(FlowOverTime(), CutOverTime([("e1", 0)]), single, 4)

    def test_infeasible_flow(self, single):
        tp = temporal_path(single, ("e1", "e2"), 0)
        flow = FlowOverTime({tp: Fraction(2)})
        with pytest.raises(PreconditionError, match="infeasible"):
            check_weak_duality(flow, CutOverTime([("e1", 0), ("e1", 1)]), single, 4)

    def test_cut_outside_horizon(self, single):
        with pytest.raises(PreconditionError):
            check_weak_duality(FlowOverTime(), CutOverTime([("e1", 9)]), single, 4)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(["dag", "closure"]), st.integers(1, 8))
def test_expansion_properties(seed, kind, horizon):
    doc = generate_dag(5, 7, seed) if kind == "dag" else generate_closure(seed)
    net = doc.network()
    temporal = expand(net, horizon)
    assert len(temporal) == sum(max(0, horizon - net.path_transit(p)) for p in net.paths)
    for tp in temporal:
        assert tp.arrival < horizon
        for e, f in zip(tp.base, tp.base[1:]):
            assert entry_time(tp, f) == entry_time(tp, e) + net.transit(e)
    for ws in waiting_schedules(net, min(horizon, 5)):
        assert ws.arrival < min(horizon, 5)
        for e, f in zip(ws.base, ws.base[1:]):
            assert entry_time(ws, f) == entry_time(ws, e) + net.transit(e) + ws.sigma(f)
