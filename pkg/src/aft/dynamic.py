"""Temporally repeated flows, cuts over time, coverage checks and certification."""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import AftError, CutInconsistencyError, FalsificationError, ScaleError, SwitchingViolationError
from .expansion import CutOverTime, FlowOverTime, expand, temporal_path, waiting_path
from .network import AbstractNetwork, SwitchingReport, format_path, open_prefix, validate_switching
from .static import (
    StaticSolution,
    SupermodularReport,
    build_horizon_weights,
    check_static_solution,
    check_supermodular,
    solve_weighted_abstract_flow,
)


@dataclass
class TemporallyRepeatedFlow:
    static_flow: dict
    horizon: int
    net: AbstractNetwork = field(repr=False)

    @property
    def value(self) -> Fraction:
        total = Fraction(0)
        for p, v in self.static_flow.items():
            total += max(0, self.horizon - self.net.path_transit(p)) * v
        return total

    def expand(self) -> FlowOverTime:
        values = {}
        for p in self.net.paths:
            v = self.static_flow.get(p, 0)
            if not v:
                continue
            for t in range(self.horizon - self.net.path_transit(p)):
                values[temporal_path(self.net, p, t)] = Fraction(v)
        return FlowOverTime(values)


def build_temporally_repeated(sol: StaticSolution, net: AbstractNetwork, horizon: int) -> TemporallyRepeatedFlow:
    return TemporallyRepeatedFlow(dict(sol.flow), horizon, net)


@dataclass
class CutSchedule:
    """Entry time ``alpha`` and duration of every element in the cut over time.

    ``alpha`` is ``math.inf`` for elements on no path.
    """

    alpha: dict
    duration: dict
    horizon: int
    warnings: list = field(default_factory=list)

    def unclipped(self) -> list[tuple[str, int]]:
        out = []
        for e, d in sorted(self.duration.items()):
            if d > 0:
                out.extend((e, theta) for theta in range(self.alpha[e], self.alpha[e] + d))
        return out

    def cut(self) -> CutOverTime:
        return CutOverTime(m for m in self.unclipped() if m[1] < self.horizon)

    def capacity(self, net: AbstractNetwork) -> Fraction:
        return sum((net.capacity(e) * d for e, d in self.duration.items()), Fraction(0))


def build_cut_schedule(dual: Mapping[str, int], net: AbstractNetwork, horizon: int) -> CutSchedule:
    alpha = {}
    for el in net.elements:
        e = el.id
        through = net.paths_through(e)
        if not through:
            alpha[e] = math.inf
            continue
        alpha[e] = min(
            sum(net.transit(x) + dual.get(x, 0) for x in open_prefix(p, e)) for p in through
        )
    duration = {el.id: int(dual.get(el.id, 0)) for el in net.elements}
    schedule = CutSchedule(alpha, duration, horizon)
    for e, d in duration.items():
        if d < 0:
            raise CutInconsistencyError(f"negative duration on {e}")
        if d > 0 and alpha[e] == math.inf:
            raise CutInconsistencyError(f"element {e} is on no path but has duration {d}")
        if d > 0 and alpha[e] >= horizon:
            schedule.warnings.append(f"{e} enters the cut at {alpha[e]}, not before the horizon {horizon}")
        elif d > 0 and alpha[e] + d > horizon:
            schedule.warnings.append(f"{e} stays in the cut past the horizon; members clipped")
    return schedule


# -- coverage ------------------------------------------------------------------


@dataclass
class CoverageReport:
    uncovered: list = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.uncovered


def verify_cut_covers_strict(cut: CutSchedule, net: AbstractNetwork, horizon: int) -> CoverageReport:
    members = cut.cut()
    report = CoverageReport()
    for tp in expand(net, horizon):
        report.checked += 1
        if not members.covers(tp):
            report.uncovered.append(tp)
    return report


def verify_cut_covers_waiting(cut: CutSchedule, net: AbstractNetwork, horizon: int) -> CoverageReport:
    """Search every base path for a waiting schedule that dodges the cut.

    Reachability over (position, entry time): ``reach[i][θ]`` says the
    path can enter its i-th element at time θ without meeting the cut so
    far. One witness schedule is reported per base path that has one.
    """
    members = cut.cut().members
    report = CoverageReport()
    for p in net.paths:
        report.checked += 1
        k = len(p)
        reach = [[False] * horizon for _ in range(k)]
        parent = [[None] * horizon for _ in range(k)]
        for theta in range(horizon):
            reach[0][theta] = (p[0], theta) not in members
        for i in range(1, k):
            step = net.transit(p[i - 1])
            earliest = None  # earliest reachable entry time into p[i-1]
            for theta in range(horizon):
                prev = theta - step
                if prev >= 0 and reach[i - 1][prev] and earliest is None:
                    earliest = prev
                if earliest is not None and (p[i], theta) not in members:
                    reach[i][theta] = True
                    parent[i][theta] = earliest
        last = net.transit(p[-1])
        end = next((th for th in range(horizon) if reach[k - 1][th] and th + last < horizon), None)
        if end is None:
            continue
        times = [end]
        for i in range(k - 1, 0, -1):
            times.append(parent[i][times[-1]])
        times.reverse()
        wait = [times[0]] + [times[i] - times[i - 1] - net.transit(p[i - 1]) for i in range(1, k)]
        report.uncovered.append(waiting_path(net, p, wait, horizon))
    return report


# -- certification -------------------------------------------------------------


@dataclass
class Certificate:
    horizon: int
    weights: dict
    static: StaticSolution
    flow_value: Fraction
    cut_capacity: Fraction
    clipped_cut_capacity: Fraction
    schedule: CutSchedule
    oracle_strict: Fraction
    oracle_waiting: Fraction | None
    switching: SwitchingReport
    supermodular: SupermodularReport
    strict_coverage: CoverageReport
    waiting_coverage: CoverageReport
    notes: list = field(default_factory=list)

    @property
    def all_equal(self) -> bool:
        return self.flow_value == self.cut_capacity == self.oracle_strict

    @property
    def falsified(self) -> bool:
        waiting_mismatch = self.oracle_waiting is not None and self.oracle_waiting != self.oracle_strict
        return (
            not self.all_equal
            or waiting_mismatch
            or not self.strict_coverage.ok
            or not self.waiting_coverage.ok
            or not self.supermodular.ok
        )


@contextmanager
def _stage(name: str):
    try:
        yield
    except AftError as exc:
        if exc.stage is None:
            exc.stage = name
        raise


def certify(net: AbstractNetwork, horizon: int, waiting_oracle: bool = True) -> Certificate:
    """Run the whole pipeline and compare it against the brute-force oracles.

    Errors from any stage propagate with ``stage`` set. A waiting oracle
    that exceeds its size bound is skipped and noted, not fatal.
    """
    from .oracle import oracle_strict, oracle_waiting

    notes = []
    with _stage("validate"):
        switching = validate_switching(net)
        if not switching.ok:
            p, q, e = switching.violations[0]
            raise SwitchingViolationError(
                f"{len(switching.violations)} switching violations, e.g. {format_path(p)} x_{e} {format_path(q)}"
            )
        if switching.zero_transit_paths:
            notes.append(f"{len(switching.zero_transit_paths)} paths have total transit 0")
    with _stage("weights"):
        weights = build_horizon_weights(net, horizon)
        supermodular = check_supermodular(net, weights)
    with _stage("static_solve"):
        static = solve_weighted_abstract_flow(net, weights)
        problems = check_static_solution(net, weights, static)
        if problems:
            raise FalsificationError("; ".join(problems))
    with _stage("temporal_flow"):
        repeated = build_temporally_repeated(static, net, horizon)
        expanded = repeated.expand()
        bad = expanded.overloaded(net)
        if bad:
            raise FalsificationError(f"temporally repeated flow overloads {bad[0]}")
        flow_value = expanded.value()
        if flow_value != repeated.value:
            raise FalsificationError(f"expanded value {flow_value} differs from {repeated.value}")
    with _stage("cut_schedule"):
        schedule = build_cut_schedule(static.dual, net, horizon)
        notes.extend(schedule.warnings)
        cut_capacity = schedule.capacity(net)
        clipped = schedule.cut().capacity(net)
    with _stage("coverage_strict"):
        strict_cov = verify_cut_covers_strict(schedule, net, horizon)
    with _stage("coverage_waiting"):
        waiting_cov = verify_cut_covers_waiting(schedule, net, horizon)
    with _stage("oracle_strict"):
        strict = oracle_strict(net, horizon).optimum
    waiting = None
    if waiting_oracle:
        with _stage("oracle_waiting"):
            try:
                waiting = oracle_waiting(net, horizon).optimum
            except ScaleError as exc:
                notes.append(f"waiting oracle skipped: {exc}")
    return Certificate(
        horizon=horizon,
        weights=weights,
        static=static,
        flow_value=flow_value,
        cut_capacity=cut_capacity,
        clipped_cut_capacity=clipped,
        schedule=schedule,
        oracle_strict=strict,
        oracle_waiting=waiting,
        switching=switching,
        supermodular=supermodular,
        strict_coverage=strict_cov,
        waiting_coverage=waiting_cov,
        notes=notes,
    )
