"""Brute-force optima on the time expansion, used to check the pipeline.

Nothing here touches the static solver. The packing LPs are handed to
sympy's exact rational simplex, and the classical routine works on an arc
graph with successive shortest paths, never seeing the path family.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

from sympy import Matrix, Rational
from sympy.solvers.simplex import linprog

from .config import bound
from .errors import FalsificationError, ScaleError
from .expansion import AnyTemporalPath, expand, waiting_schedules
from .network import AbstractNetwork


@dataclass
class OracleResult:
    optimum: Fraction
    argument: dict = field(default_factory=dict)  # temporal path or schedule -> Fraction
    mode: str = "strict"


def _to_fraction(v) -> Fraction:
    if isinstance(v, int):
        return Fraction(v)
    return Fraction(int(v.p), int(v.q))


def max_packing(net: AbstractNetwork, columns: Sequence[AnyTemporalPath]) -> tuple[Fraction, dict]:
    """Maximum total flow over ``columns`` under per-(e, θ) capacities."""
    if not columns:
        return Fraction(0), {}
    rows: dict = {}
    for j, tp in enumerate(columns):
        for x in tp.elements:
            rows.setdefault(x, []).append(j)
    keys = sorted(rows)
    a = [[0] * len(columns) for _ in keys]
    for i, x in enumerate(keys):
        for j in rows[x]:
            a[i][j] = 1
    b = [net.capacity(e) for e, _ in keys]
    value, xs = linprog(
        Matrix([[-1] * len(columns)]),
        Matrix(a),
        Matrix([[Rational(v.numerator, v.denominator)] for v in b]),
    )
    argument = {}
    for tp, v in zip(columns, xs):
        v = _to_fraction(v)
        if v:
            argument[tp] = v
    optimum = -_to_fraction(value)
    _verify(net, argument, optimum)
    return optimum, argument


def _verify(net: AbstractNetwork, argument: dict, optimum: Fraction) -> None:
    load: dict = {}
    for tp, v in argument.items():
        if v < 0:
            raise FalsificationError(f"oracle returned negative flow on {tp}")
        for x in tp.elements:
            load[x] = load.get(x, Fraction(0)) + v
    for (e, theta), v in load.items():
        if v > net.capacity(e):
            raise FalsificationError(f"oracle solution overloads {(e, theta)}")
    if sum(argument.values(), Fraction(0)) != optimum:
        raise FalsificationError("oracle optimum differs from its argument's value")


def oracle_strict(net: AbstractNetwork, horizon: int, limit: int | None = None) -> OracleResult:
    limit = bound("oracle_strict") if limit is None else limit
    columns = expand(net, horizon)
    if len(columns) > limit:
        raise ScaleError(f"{len(columns)} temporal paths exceed the bound {limit}; use a smaller horizon")
    optimum, argument = max_packing(net, columns)
    return OracleResult(optimum, argument, "strict")


def oracle_waiting(net: AbstractNetwork, horizon: int, limit: int | None = None) -> OracleResult:
    """Same LP with one column per waiting schedule; duplicates by element set are dropped."""
    limit = bound("oracle_waiting") if limit is None else limit
    columns = []
    seen = set()
    for ws in waiting_schedules(net, horizon):
        key = frozenset(ws.elements)
        if key in seen:
            continue
        seen.add(key)
        columns.append(ws)
        if len(columns) > limit:
            raise ScaleError(f"more than {limit} waiting schedules; use a smaller horizon")
    optimum, argument = max_packing(net, columns)
    return OracleResult(optimum, argument, "waiting")


def uncovered_schedules_exhaustive(members, net: AbstractNetwork, horizon: int) -> list:
    """Every waiting schedule in the expansion that misses all of ``members``."""
    members = set(members)
    return [ws for ws in waiting_schedules(net, horizon) if not any(x in members for x in ws.elements)]


# -- classical flows over time -------------------------------------------------


def classical_max_flow_over_time(
    arcs: Iterable[tuple[Hashable, Hashable, Fraction, int]],
    source: Hashable,
    sink: Hashable,
    horizon: int,
) -> Fraction:
    """Ford and Fulkerson's value for a graph with arc capacities and transit times.

    Maximises ``T·|f| - Σ τ(a) f(a)`` over static s-t flows by successive
    shortest paths, stopping once the cheapest augmenting path costs T or
    more. Every path then arrives by T-1 at the latest.
    """
    # residual arcs as [head, residual capacity, cost, index of reverse arc]
    graph: dict = {}

    def add(u, v, cap, cost):
        graph.setdefault(u, [])
        graph.setdefault(v, [])
        graph[u].append([v, Fraction(cap), cost, len(graph[v])])
        graph[v].append([u, Fraction(0), -cost, len(graph[u]) - 1])

    for u, v, cap, tau in arcs:
        add(u, v, cap, tau)
    if source not in graph or sink not in graph:
        return Fraction(0)

    value = Fraction(0)
    while True:
        dist = {source: 0}
        parent: dict = {}
        for _ in range(len(graph)):
            changed = False
            for u in list(dist):
                for idx, (v, cap, cost, _) in enumerate(graph[u]):
                    if cap > 0 and dist[u] + cost < dist.get(v, float("inf")):
                        dist[v] = dist[u] + cost
                        parent[v] = (u, idx)
                        changed = True
            if not changed:
                break
        if sink not in dist or dist[sink] >= horizon:
            return value
        push = None
        v = sink
        while v != source:
            u, idx = parent[v]
            cap = graph[u][idx][1]
            push = cap if push is None else min(push, cap)
            v = u
        v = sink
        while v != source:
            u, idx = parent[v]
            arc = graph[u][idx]
            arc[1] -= push
            graph[v][arc[3]][1] += push
            v = u
        value += push * (horizon - dist[sink])
