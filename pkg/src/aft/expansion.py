"""Time expansion: temporal paths, waiting schedules, flows and cuts over time.

Time is discrete with steps 0..T-1. A temporal path is a copy of a base
path that enters each element after the transit times of its predecessors;
with waiting, an extra delay may be spent before every element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Union

from .errors import DomainError, PreconditionError
from .network import AbstractNetwork, Path, SwitchingReport, format_path, switching_violations

TemporalElement = tuple  # (element id, time)


def _check_horizon(horizon: int) -> None:
    if isinstance(horizon, bool) or not isinstance(horizon, int) or horizon < 1:
        raise DomainError(f"horizon must be a positive integer, got {horizon!r}")


@dataclass(frozen=True)
class TemporalPath:
    base: Path
    start: int
    elements: tuple = field(compare=False, repr=False)
    arrival: int = field(compare=False, repr=False, default=0)

    def __str__(self):
        return f"{format_path(self.base)}@{self.start}"


@dataclass(frozen=True)
class WaitingSchedule:
    """A base path plus a waiting time before each of its elements (by position)."""

    base: Path
    wait: tuple
    elements: tuple = field(compare=False, repr=False)
    arrival: int = field(compare=False, repr=False, default=0)

    def sigma(self, e: str) -> int:
        return self.wait[self.base.index(e)]

    def __str__(self):
        return f"{format_path(self.base)}~{list(self.wait)}"


AnyTemporalPath = Union[TemporalPath, WaitingSchedule]


def _timeline(net: AbstractNetwork, base: Path, wait) -> tuple[tuple, int]:
    now = 0
    out = []
    for e, s in zip(base, wait):
        now += s
        out.append((e, now))
        now += net.transit(e)
    return tuple(out), now


def temporal_path(net: AbstractNetwork, base: Path, start: int, horizon: int | None = None) -> TemporalPath:
    base = tuple(base)
    if start < 0:
        raise DomainError(f"negative start time {start}")
    elements, arrival = _timeline(net, base, (start,) + (0,) * (len(base) - 1))
    if horizon is not None and arrival >= horizon:
        raise DomainError(f"{format_path(base)}@{start} arrives at {arrival}, not before {horizon}")
    return TemporalPath(base, start, elements, arrival)


def waiting_path(net: AbstractNetwork, base: Path, wait, horizon: int | None = None) -> WaitingSchedule:
    base, wait = tuple(base), tuple(int(s) for s in wait)
    if len(wait) != len(base) or any(s < 0 for s in wait):
        raise DomainError(f"need one nonnegative waiting time per element of {format_path(base)}")
    elements, arrival = _timeline(net, base, wait)
    if horizon is not None and arrival >= horizon:
        raise DomainError(f"schedule on {format_path(base)} arrives at {arrival}, not before {horizon}")
    return WaitingSchedule(base, wait, elements, arrival)


def entry_time(tp: AnyTemporalPath, e: str) -> int:
    for x, theta in tp.elements:
        if x == e:
            return theta
    raise DomainError(f"{e!r} is not on {format_path(tp.base)}")


def expand(net: AbstractNetwork, horizon: int) -> list[TemporalPath]:
    """All admissible temporal paths, ordered by base path then start time."""
    _check_horizon(horizon)
    out = []
    for p in net.paths:
        for t in range(horizon - net.path_transit(p)):
            out.append(temporal_path(net, p, t))
    return out


def waiting_schedules(net: AbstractNetwork, horizon: int, base: Path | None = None) -> Iterator[WaitingSchedule]:
    """Every schedule with total waiting plus transit below the horizon."""
    _check_horizon(horizon)
    bases = net.paths if base is None else (tuple(base),)
    for p in bases:
        slack = horizon - 1 - net.path_transit(p)
        if slack < 0:
            continue
        for wait in _bounded_compositions(len(p), slack):
            yield waiting_path(net, p, wait)


def _bounded_compositions(k: int, total: int) -> Iterator[tuple]:
    """Tuples of k nonnegative ints with sum at most ``total``, in lexicographic order."""
    if k == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in _bounded_compositions(k - 1, total - first):
            yield (first,) + rest


def check_expansion_switching(net: AbstractNetwork, horizon: int) -> SwitchingReport:
    """Run the switching check on the expanded family (diagnostic only).

    Violations are reported as (P_t, Q_u, (e, θ)) with temporal paths.
    """
    temporal = expand(net, horizon)
    by_seq = {tp.elements: tp for tp in temporal}
    raw = switching_violations([tp.elements for tp in temporal])
    return SwitchingReport(violations=[(by_seq[p], by_seq[q], x) for p, q, x in raw])


# -- flows and cuts over time --------------------------------------------------


@dataclass
class FlowOverTime:
    values: dict = field(default_factory=dict)  # temporal path or schedule -> Fraction

    def value(self) -> Fraction:
        return sum(self.values.values(), Fraction(0))

    def loads(self) -> dict:
        out: dict = {}
        for tp, v in self.values.items():
            for x in tp.elements:
                out[x] = out.get(x, Fraction(0)) + v
        return out

    def overloaded(self, net: AbstractNetwork) -> list:
        """Temporal elements whose load exceeds the capacity, plus negative entries."""
        bad = [x for x, load in self.loads().items() if load > net.capacity(x[0])]
        bad += [tp for tp, v in self.values.items() if v < 0]
        return bad


@dataclass(frozen=True)
class CutOverTime:
    members: frozenset

    def __init__(self, members: Iterable[TemporalElement]):
        object.__setattr__(self, "members", frozenset(tuple(m) for m in members))

    def capacity(self, net: AbstractNetwork) -> Fraction:
        return sum((net.capacity(e) for e, _ in self.members), Fraction(0))

    def covers(self, tp: AnyTemporalPath) -> bool:
        return any(x in self.members for x in tp.elements)


def check_weak_duality(flow: FlowOverTime, cut: CutOverTime, net: AbstractNetwork, horizon: int) -> bool:
    """value(flow) <= capacity(cut), after verifying feasibility and coverage.

    The cut must meet every temporal path of the expansion and every path
    that carries flow in ``flow``.
    """
    _check_horizon(horizon)
    for e, theta in cut.members:
        if e not in net.by_id or not 0 <= theta < horizon:
            raise PreconditionError(f"cut member {(e, theta)} lies outside E x [0,{horizon})")
    bad = flow.overloaded(net)
    if bad:
        raise PreconditionError(f"flow infeasible at {bad[0]}")
    for tp in flow.values:
        if tp.arrival >= horizon:
            raise PreconditionError(f"flow uses {tp}, which arrives after the horizon")
    for tp in list(expand(net, horizon)) + [tp for tp, v in flow.values.items() if v > 0]:
        if not cut.covers(tp):
            raise PreconditionError(f"cut misses {tp}")
    return flow.value() <= cut.capacity(net)
