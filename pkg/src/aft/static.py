"""Static maximum weighted abstract flow and its integral dual.

The LP is solved exactly over explicitly enumerated path variables with a
rational tableau simplex (Bland's rule). An integral optimal dual is then
found by a bounded search in nondecreasing l1 norm, restricted by
complementary slackness against the optimal primal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .config import bound
from .errors import DomainError, ScaleError, TDIViolationError
from .network import AbstractNetwork, Path, canonical_switch, triples
from .rational import is_integral, to_fraction

WeightFunction = Mapping[Path, Fraction]


def build_horizon_weights(net: AbstractNetwork, horizon: int) -> dict[Path, int]:
    """Number of admissible start times per path; may be zero or negative."""
    if horizon < 1:
        raise DomainError(f"horizon must be positive, got {horizon}")
    return {p: horizon - net.path_transit(p) for p in net.paths}


@dataclass
class SupermodularReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_supermodular(net: AbstractNetwork, w: WeightFunction) -> SupermodularReport:
    report = SupermodularReport()
    for p, q, e in triples(net.paths):
        pq = canonical_switch(net, p, q, e).result
        qp = canonical_switch(net, q, p, e).result
        lhs = w[pq] + w[qp]
        rhs = w[p] + w[q]
        if lhs < rhs:
            report.violations.append((p, q, e, pq, qp, lhs, rhs))
    return report


# -- exact simplex -----------------------------------------------------------


def simplex_max(objective: Sequence, rows: Sequence[Sequence], rhs: Sequence):
    """Maximise ``objective·x`` subject to ``rows x <= rhs``, ``x >= 0``.

    Requires ``rhs >= 0`` so the slack basis is feasible. Returns
    ``(value, x, y)`` with ``y`` the optimal dual on the rows.
    """
    m, n = len(rows), len(objective)
    if any(Fraction(b) < 0 for b in rhs):
        raise DomainError("simplex_max needs a nonnegative right-hand side")
    tab = []
    for i, row in enumerate(rows):
        line = [Fraction(v) for v in row]
        line += [Fraction(int(i == k)) for k in range(m)]
        line.append(Fraction(rhs[i]))
        tab.append(line)
    cost = [Fraction(v) for v in objective] + [Fraction(0)] * m
    basis = [n + i for i in range(m)]

    while True:
        enter = next((j for j in range(n + m) if cost[j] > 0), None)
        if enter is None:
            break
        leave = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                key = (tab[i][-1] / a, basis[i])
                if leave is None or key < leave[0]:
                    leave = (key, i)
        if leave is None:
            raise DomainError("LP is unbounded")
        r = leave[1]
        piv = tab[r][enter]
        tab[r] = [v / piv for v in tab[r]]
        prow = tab[r]
        for i in range(m):
            f = tab[i][enter]
            if i != r and f:
                tab[i] = [a - f * b for a, b in zip(tab[i], prow)]
        f = cost[enter]
        cost = [a - f * b for a, b in zip(cost, prow[:-1])]
        basis[r] = enter

    x = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            x[b] = tab[i][-1]
    y = [-cost[n + i] for i in range(m)]
    value = sum((Fraction(c) * v for c, v in zip(objective, x)), Fraction(0))
    return value, x, y


# -- the weighted abstract flow LP -------------------------------------------


@dataclass
class StaticSolution:
    flow: dict  # path -> Fraction
    dual: dict  # element id -> int
    objective: Fraction

    def load(self, e: str) -> Fraction:
        return sum((v for p, v in self.flow.items() if e in p), Fraction(0))


def _lp_data(net: AbstractNetwork, w: WeightFunction):
    missing = [p for p in net.paths if p not in w]
    if missing:
        raise DomainError(f"weight function undefined on {missing[0]}")
    weights = [to_fraction(w[p]) for p in net.paths]
    ids = [el.id for el in net.elements]
    rows = [[1 if e in p else 0 for p in net.paths] for e in ids]
    caps = [net.capacity(e) for e in ids]
    return weights, ids, rows, caps


def solve_weighted_abstract_flow(
    net: AbstractNetwork, w: WeightFunction, integral_primal: bool = False
) -> StaticSolution:
    """Optimal path flow and an optimal integral element dual with equal objective.

    With ``integral_primal=True`` (integral capacities required) the returned
    flow is integral as well. Raises TDIViolationError if no integral optimum
    exists within the search bounds.
    """
    weights, ids, rows, caps = _lp_data(net, w)
    if not all(is_integral(v) for v in weights):
        raise DomainError("weights must be integral for an integral dual")
    if not net.paths:
        return StaticSolution({}, {e: 0 for e in ids}, Fraction(0))

    value, x, _ = simplex_max(weights, rows, caps)
    if integral_primal:
        if not all(is_integral(c) for c in caps):
            raise DomainError("an integral primal needs integral capacities")
        x = _integral_primal(weights, rows, caps, value)
        if x is None:
            raise TDIViolationError(f"no integral primal attains the LP optimum {value}")
    flow = dict(zip(net.paths, x))
    dual = next(integral_duals(net, w, flow, value), None)
    if dual is None:
        raise TDIViolationError(f"no integral dual attains the LP optimum {value}")
    return StaticSolution(flow, dual, value)


def _integral_primal(weights, rows, caps, target):
    """Depth-first branch and bound; explores only subproblems still worth ``target``."""
    n = len(weights)
    stack = [({}, {})]
    while stack:
        lower, upper = stack.pop()
        rhs = [c - sum(row[j] * lower.get(j, 0) for j in range(n)) for row, c in zip(rows, caps)]
        if any(b < 0 for b in rhs) or any(upper[j] < lower.get(j, 0) for j in upper):
            continue
        sub_rows = [list(row) for row in rows]
        for j, u in upper.items():
            sub_rows.append([int(k == j) for k in range(n)])
            rhs.append(u - lower.get(j, 0))
        value, xs, _ = simplex_max(weights, sub_rows, rhs)
        value += sum(weights[j] * v for j, v in lower.items())
        if value < target:
            continue
        x = [xs[j] + lower.get(j, 0) for j in range(n)]
        frac = next((j for j in range(n) if not is_integral(x[j])), None)
        if frac is None:
            return x
        fl = math.floor(x[frac])
        stack.append(({**lower, frac: fl + 1}, dict(upper)))
        stack.append((dict(lower), {**upper, frac: fl}))
    return None


def integral_duals(
    net: AbstractNetwork, w: WeightFunction, flow: Mapping[Path, Fraction], objective: Fraction
) -> Iterator[dict[str, int]]:
    """Every integral optimal dual with entries in [0, max(0, max r)].

    Yields in nondecreasing l1 norm, lexicographically smallest first within
    a norm. ``flow`` must be an optimal primal with value ``objective``;
    complementary slackness against it fixes every slack element to zero.
    """
    weights = {p: to_fraction(w[p]) for p in net.paths}
    cap = max([0] + [math.floor(v) for v in weights.values()])
    load = {el.id: Fraction(0) for el in net.elements}
    for p, v in flow.items():
        for e in p:
            load[e] += v
    free = [el.id for el in net.elements if net.on_some_path(el.id) and load[el.id] == el.capacity]
    k = len(free)
    where = {e: i for i, e in enumerate(free)}
    cost = [net.capacity(e) for e in free]
    cons = []
    for p in net.paths:
        members = sorted(where[e] for e in p if e in where)
        cons.append((members, weights[p], flow.get(p, 0) > 0))
    if any(not members and r > 0 for members, r, _ in cons):
        return

    budget = bound("dual_candidates")
    visited = 0
    y = [0] * k

    def consistent(i, rem):
        # y[:i] assigned, rem units of l1 still to place on y[i:]
        for members, r, tight in cons:
            done = sum(y[j] for j in members if j < i)
            open_ = sum(1 for j in members if j >= i)
            if done + min(rem, open_ * cap) < r:
                return False
            if tight and done > r:
                return False
        return True

    def dfs(i, rem, spent):
        nonlocal visited
        visited += 1
        if visited > budget:
            raise ScaleError("integral dual search exceeded its node budget")
        if i == k:
            if rem == 0 and spent == objective and all(
                sum(y[j] for j in members) >= r and (not tight or sum(y[j] for j in members) == r)
                for members, r, tight in cons
            ):
                yield {e: (y[where[e]] if e in where else 0) for e in (el.id for el in net.elements)}
            return
        if rem > (k - i) * cap:
            return
        rest = cost[i + 1:]
        hi = max(rest, default=Fraction(0))
        lo = min(rest, default=Fraction(0))
        for v in range(min(cap, rem) + 1):
            s = spent + cost[i] * v
            if s > objective:
                break
            left = rem - v
            if s + left * hi < objective or s + left * lo > objective:
                continue
            y[i] = v
            if consistent(i + 1, left):
                yield from dfs(i + 1, left, s)
        y[i] = 0

    for norm in range(k * cap + 1):
        yield from dfs(0, norm, Fraction(0))


def check_static_solution(net: AbstractNetwork, w: WeightFunction, sol: StaticSolution) -> list[str]:
    """Problems with primal feasibility, dual feasibility or the duality gap; empty if none."""
    problems = []
    for el in net.elements:
        if sol.load(el.id) > el.capacity:
            problems.append(f"element {el.id} overloaded")
        if sol.dual.get(el.id, 0) < 0:
            problems.append(f"negative dual on {el.id}")
    for p in net.paths:
        if sol.flow.get(p, 0) < 0:
            problems.append(f"negative flow on {p}")
        if sum(sol.dual.get(e, 0) for e in p) < w[p]:
            problems.append(f"dual constraint of {p} violated")
    primal = sum((to_fraction(w[p]) * v for p, v in sol.flow.items()), Fraction(0))
    dual = sum((net.capacity(e) * v for e, v in sol.dual.items()), Fraction(0))
    if not primal == dual == sol.objective:
        problems.append(f"objectives differ: primal {primal}, dual {dual}, claimed {sol.objective}")
    return problems
