"""Abstract networks: ground set, ordered path family, switching property.

A path is a tuple of element ids; its order is the tuple order. Two paths
with the same elements in a different order are different family members.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Sequence

from .errors import (
    DomainError,
    InstanceError,
    StructuralInconsistencyError,
    SwitchingViolationError,
)
from .rational import RationalLike, to_fraction

Path = tuple  # tuple of element ids


@dataclass(frozen=True)
class Element:
    id: str
    capacity: Fraction
    transit: int = 0

    def __post_init__(self):
        try:
            cap = to_fraction(self.capacity)
        except (TypeError, ValueError) as exc:
            raise InstanceError(f"element {self.id!r}: bad capacity: {exc}") from None
        if cap < 0:
            raise InstanceError(f"element {self.id!r}: negative capacity {cap}")
        if isinstance(self.transit, bool) or not isinstance(self.transit, int):
            raise InstanceError(f"element {self.id!r}: transit must be an integer")
        if self.transit < 0:
            raise InstanceError(f"element {self.id!r}: negative transit {self.transit}")
        object.__setattr__(self, "capacity", cap)


def element(id: str, capacity: RationalLike = 1, transit: int = 0) -> Element:
    return Element(id, to_fraction(capacity), transit)


@dataclass(frozen=True)
class AbstractNetwork:
    """Elements with capacities and transit times plus an explicit path family.

    Elements are kept sorted by id and paths lexicographically, so two
    networks built from the same data compare equal regardless of input order.
    Construction only checks well-formedness; the switching property is
    checked separately by :func:`validate_switching`.
    """

    elements: tuple[Element, ...]
    paths: tuple[Path, ...]

    def __init__(self, elements: Iterable[Element], paths: Iterable[Sequence[str]]):
        elems = sorted(elements, key=lambda el: el.id)
        ids = [el.id for el in elems]
        for a, b in zip(ids, ids[1:]):
            if a == b:
                raise InstanceError(f"duplicate element id {a!r}")
        known = set(ids)
        family = []
        seen = set()
        for raw in paths:
            p = tuple(raw)
            if not p:
                raise InstanceError("empty path")
            if len(set(p)) != len(p):
                raise InstanceError(f"path {format_path(p)} repeats an element")
            missing = [x for x in p if x not in known]
            if missing:
                raise InstanceError(f"path {format_path(p)} uses undeclared {missing[0]!r}")
            if p in seen:
                raise InstanceError(f"path {format_path(p)} listed twice")
            seen.add(p)
            family.append(p)
        object.__setattr__(self, "elements", tuple(elems))
        object.__setattr__(self, "paths", tuple(sorted(family)))

    @cached_property
    def by_id(self) -> dict[str, Element]:
        return {el.id: el for el in self.elements}

    @cached_property
    def _through(self) -> dict[str, tuple[Path, ...]]:
        index = defaultdict(list)
        for p in self.paths:
            for x in p:
                index[x].append(p)
        return {k: tuple(v) for k, v in index.items()}

    def capacity(self, e: str) -> Fraction:
        return self.by_id[e].capacity

    def transit(self, e: str) -> int:
        return self.by_id[e].transit

    def path_transit(self, p: Path) -> int:
        return sum(self.by_id[x].transit for x in p)

    def paths_through(self, e: str) -> tuple[Path, ...]:
        return self._through.get(e, ())

    def on_some_path(self, e: str) -> bool:
        return e in self._through

    def with_paths(self, paths: Iterable[Sequence[str]]) -> "AbstractNetwork":
        return AbstractNetwork(self.elements, paths)


def format_path(p: Sequence[Hashable]) -> str:
    return "(" + ",".join(_fmt_item(x) for x in p) + ")"


def _fmt_item(x) -> str:
    if isinstance(x, tuple):
        return "(" + ",".join(str(v) for v in x) + ")"
    return str(x)


def _index(p: Sequence, e) -> int:
    try:
        return p.index(e)
    except ValueError:
        raise DomainError(f"{e!r} is not on path {format_path(p)}") from None


def closed_prefix(p: Sequence, e) -> tuple:
    return tuple(p[: _index(p, e) + 1])


def open_prefix(p: Sequence, e) -> tuple:
    return tuple(p[: _index(p, e)])


def closed_suffix(p: Sequence, e) -> tuple:
    return tuple(p[_index(p, e):])


def open_suffix(p: Sequence, e) -> tuple:
    return tuple(p[_index(p, e) + 1:])


def triples(paths: Sequence[Sequence]) -> Iterator[tuple[tuple, tuple, object]]:
    """Yield every (P, Q, e) with e on both P and Q, P == Q included."""
    through = defaultdict(list)
    for q in paths:
        for x in q:
            through[x].append(tuple(q))
    for p in paths:
        p = tuple(p)
        for x in p:
            for q in through[x]:
                yield p, q, x


# -- switching ---------------------------------------------------------------


@dataclass
class SwitchingReport:
    violations: list = field(default_factory=list)
    zero_transit_paths: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def switching_violations(paths: Sequence[Sequence[Hashable]]) -> list[tuple]:
    """All (P, Q, e) for which no member of ``paths`` fits in [P,e] ∪ [e,Q].

    Works on any family of ordered sequences of hashable items, so the time
    expansion can be checked with the same routine.
    """
    paths = [tuple(p) for p in paths]
    sets = [frozenset(p) for p in paths]
    violations = []
    for p, q, x in triples(paths):
        allowed = set(closed_prefix(p, x))
        allowed.update(closed_suffix(q, x))
        if not any(s <= allowed for s in sets):
            violations.append((p, q, x))
    return violations


def validate_switching(net: AbstractNetwork) -> SwitchingReport:
    report = SwitchingReport(violations=switching_violations(net.paths))
    report.zero_transit_paths = [p for p in net.paths if net.path_transit(p) == 0]
    return report


@dataclass(frozen=True)
class SwitchWitness:
    p: Path
    q: Path
    pivot: str
    result: Path
    prefix_part: tuple
    suffix_part: tuple


def canonical_switch(net: AbstractNetwork, p: Path, q: Path, pivot: str) -> SwitchWitness:
    """The switch result R ⊆ [p,pivot] ∪ [pivot,q] with fewest elements outside [p,pivot].

    Ties go to the lexicographically smallest id sequence. A minimiser on a
    valid network never mixes its two parts; if it does, the family is not
    an abstract network and StructuralInconsistencyError is raised.
    """
    p, q = tuple(p), tuple(q)
    prefix = set(closed_prefix(p, pivot))
    allowed = prefix | set(closed_suffix(q, pivot))
    best = None
    for r in net.paths:
        if set(r) <= allowed:
            key = (sum(1 for x in r if x not in prefix), r)
            if best is None or key < best:
                best = key
    if best is None:
        raise SwitchingViolationError(
            f"no path inside [{format_path(p)},{pivot}] ∪ [{pivot},{format_path(q)}]"
        )
    r = best[1]
    flags = [x in prefix for x in r]
    # unmixed: once we leave the prefix part we never come back
    if any(not a and b for a, b in zip(flags, flags[1:])):
        raise StructuralInconsistencyError(
            f"minimal switch {format_path(r)} of {format_path(p)} x_{pivot} {format_path(q)} is mixed"
        )
    return SwitchWitness(
        p=p,
        q=q,
        pivot=pivot,
        result=r,
        prefix_part=tuple(x for x in r if x in prefix),
        suffix_part=tuple(x for x in r if x not in prefix),
    )


# -- structural reductions ---------------------------------------------------


def order_agreeing_subpath(sub: Path, full: Path) -> bool:
    """True iff ``sub`` is a strict subset of ``full`` listed in ``full``'s order."""
    if not set(sub) < set(full):
        return False
    pos = {x: i for i, x in enumerate(full)}
    return all(pos[a] < pos[b] for a, b in zip(sub, sub[1:]))


def reduce_assumption2(net: AbstractNetwork) -> AbstractNetwork:
    """Drop every path that has an order-agreeing strict subpath, to a fixpoint."""
    remaining = list(net.paths)
    while True:
        victim = next(
            (p for p in remaining if any(order_agreeing_subpath(q, p) for q in remaining)),
            None,
        )
        if victim is None:
            break
        remaining.remove(victim)
    return net.with_paths(remaining)


def inclusion_pairs(net: AbstractNetwork) -> list[tuple[Path, Path]]:
    """(Q, P) pairs with Q a strict subset of P as sets."""
    sets = {p: set(p) for p in net.paths}
    return [(q, p) for p in net.paths for q in net.paths if sets[q] < sets[p]]


def check_no_inclusion(net: AbstractNetwork) -> bool:
    return not inclusion_pairs(net)


@dataclass
class OrderReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_order_preservation(net: AbstractNetwork) -> OrderReport:
    """Check that canonical switches keep P's order on the prefix part and Q's on the rest."""
    report = OrderReport()
    for p, q, e in triples(net.paths):
        w = canonical_switch(net, p, q, e)
        pos_r = {x: i for i, x in enumerate(w.result)}
        for part, ref, clause in ((w.prefix_part, p, "prefix"), (w.suffix_part, q, "suffix")):
            pos_ref = {x: i for i, x in enumerate(ref)}
            for a in part:
                for b in part:
                    if pos_ref[a] < pos_ref[b] and not pos_r[a] < pos_r[b]:
                        report.violations.append((p, q, e, w.result, a, b, clause))
    return report
