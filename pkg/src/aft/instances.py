"""Instance files, fixtures, random generators and certificate documents.

Instances are JSON objects with keys ``elements``, ``paths`` and
``horizon``. Capacities are integers or ``"p/q"`` strings. DAG-derived
instances may carry an optional ``graph`` key naming the arc endpoints so
that classical flow routines can be run on them.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .config import bound
from .errors import DomainError, GenerationError, InstanceError
from .network import AbstractNetwork, Element, closed_prefix, format_path, open_suffix, switching_violations
from .rational import format_fraction, to_fraction


@dataclass
class InstanceDocument:
    elements: list  # of Element
    paths: list  # of tuples of names
    horizon: int
    graph: dict | None = None  # {"source", "sink", "arcs": {name: [u, v]}}

    def network(self) -> AbstractNetwork:
        return AbstractNetwork(self.elements, self.paths)

    def canonical(self) -> dict:
        out: dict[str, Any] = {
            "elements": [
                {"name": el.id, "capacity": format_fraction(el.capacity), "transit": el.transit}
                for el in sorted(self.elements, key=lambda el: el.id)
            ],
            "paths": [list(p) for p in sorted(tuple(p) for p in self.paths)],
            "horizon": self.horizon,
        }
        if self.graph is not None:
            out["graph"] = {
                "source": self.graph["source"],
                "sink": self.graph["sink"],
                "arcs": {k: list(v) for k, v in sorted(self.graph["arcs"].items())},
            }
        return out

    def __eq__(self, other):
        if not isinstance(other, InstanceDocument):
            return NotImplemented
        return self.canonical() == other.canonical()


def canonical_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def serialize_instance(doc: InstanceDocument) -> str:
    return canonical_json(doc.canonical())


def digest(doc: InstanceDocument) -> str:
    return hashlib.sha256(serialize_instance(doc).encode("utf-8")).hexdigest()


def parse_instance(text: str) -> InstanceDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise InstanceError("top level: expected an object")
    unknown = set(raw) - {"elements", "paths", "horizon", "graph"}
    if unknown:
        raise InstanceError(f"top level: unknown key {sorted(unknown)[0]!r}")
    for key in ("elements", "paths", "horizon"):
        if key not in raw:
            raise InstanceError(f"top level: missing key {key!r}")

    if not isinstance(raw["elements"], list):
        raise InstanceError("elements: expected a list")
    elements = []
    names = set()
    for i, item in enumerate(raw["elements"]):
        where = f"elements[{i}]"
        if not isinstance(item, dict) or not isinstance(item.get("name"), str):
            raise InstanceError(f"{where}: expected an object with a string 'name'")
        name = item["name"]
        if name in names:
            raise InstanceError(f"{where}: duplicate name {name!r}")
        names.add(name)
        cap = item.get("capacity")
        if isinstance(cap, float):
            raise InstanceError(f"{where}.capacity: floats are not allowed, use \"p/q\"")
        try:
            cap = to_fraction(cap)
        except (TypeError, ValueError, ZeroDivisionError):
            raise InstanceError(f"{where}.capacity: not a rational: {cap!r}") from None
        if cap < 0:
            raise InstanceError(f"{where}.capacity: negative")
        transit = item.get("transit", 0)
        if isinstance(transit, bool) or not isinstance(transit, int) or transit < 0:
            raise InstanceError(f"{where}.transit: expected a nonnegative integer")
        extra = set(item) - {"name", "capacity", "transit"}
        if extra:
            raise InstanceError(f"{where}: unknown key {sorted(extra)[0]!r}")
        elements.append(Element(name, cap, transit))

    if not isinstance(raw["paths"], list):
        raise InstanceError("paths: expected a list")
    paths = []
    seen = set()
    for i, item in enumerate(raw["paths"]):
        where = f"paths[{i}]"
        if not isinstance(item, list) or not all(isinstance(x, str) for x in item):
            raise InstanceError(f"{where}: expected a list of element names")
        p = tuple(item)
        if not p:
            raise InstanceError(f"{where}: empty path")
        dup = next((x for j, x in enumerate(p) if x in p[:j]), None)
        if dup is not None:
            raise InstanceError(f"{where} {format_path(p)}: element {dup!r} appears twice")
        missing = next((x for x in p if x not in names), None)
        if missing is not None:
            raise InstanceError(f"{where} {format_path(p)}: undeclared element {missing!r}")
        if p in seen:
            raise InstanceError(f"{where} {format_path(p)}: listed twice")
        seen.add(p)
        paths.append(p)

    horizon = raw["horizon"]
    if isinstance(horizon, bool) or not isinstance(horizon, int) or horizon < 1:
        raise InstanceError("horizon: expected a positive integer")

    graph = raw.get("graph")
    if graph is not None:
        ok = (
            isinstance(graph, dict)
            and set(graph) == {"source", "sink", "arcs"}
            and isinstance(graph["arcs"], dict)
            and all(isinstance(v, list) and len(v) == 2 for v in graph["arcs"].values())
            and set(graph["arcs"]) <= names
        )
        if not ok:
            raise InstanceError("graph: expected {source, sink, arcs: {element: [tail, head]}}")
    return InstanceDocument(elements, paths, horizon, graph)


def read_instance(path: str) -> InstanceDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- fixtures ------------------------------------------------------------------


def example1(capacity=1, transit: int = 1, horizon: int = 6) -> InstanceDocument:
    """Two paths crossing a third with no path joining their ends."""
    names = ["1", "2", "3", "4", "a", "b", "c", "d"]
    paths = [("1", "2", "3", "4"), ("a", "2", "c"), ("b", "3", "d"), ("1", "c"), ("1", "d"), ("a", "4"), ("b", "4")]
    return InstanceDocument([Element(n, to_fraction(capacity), transit) for n in names], paths, horizon)


def example2(capacity=1, transit: int = 1, horizon: int = 6) -> InstanceDocument:
    """A valid network whose time expansion breaks switching.

    With unit transit times, (s,a,b,t)@0 and (s,b,a,t)@1 meet at (b,2) and
    no temporal path fits inside the prefix and suffix around it. The
    second copy arrives at time 5, so the failure needs a horizon of 6.
    """
    names = ["s", "a", "b", "t"]
    paths = [("s", "a", "b", "t"), ("s", "b", "a", "t"), ("s", "a", "t"), ("s", "b", "t")]
    return InstanceDocument([Element(n, to_fraction(capacity), transit) for n in names], paths, horizon)


def example2_abt(capacity=1, transit: int = 1, horizon: int = 6) -> InstanceDocument:
    """Same as :func:`example2` with (a,b,t) in place of (s,b,t).

    This family is not an abstract network: (a,b,t) x_a (s,a,t) must fit in
    {a,t} and (s,b,a,t) x_b (s,a,b,t) in {s,b,t}, and no path does. Kept as
    an invalid fixture.
    """
    names = ["s", "a", "b", "t"]
    paths = [("s", "a", "b", "t"), ("s", "b", "a", "t"), ("s", "a", "t"), ("a", "b", "t")]
    return InstanceDocument([Element(n, to_fraction(capacity), transit) for n in names], paths, horizon)


FIXTURES = {
    "example1.json": example1,
    "example2.json": example2,
    "example2-abt.json": example2_abt,
}


# -- generators ----------------------------------------------------------------


def _st_paths(arcs: dict, source, sink, limit: int) -> list[tuple]:
    out_arcs: dict = {}
    for name, (u, v) in sorted(arcs.items()):
        out_arcs.setdefault(u, []).append((name, v))
    found = []

    def walk(node, trail):
        if node == sink:
            found.append(tuple(trail))
            if len(found) > limit:
                raise GenerationError(f"more than {limit} s-t paths")
            return
        for name, v in out_arcs.get(node, []):
            trail.append(name)
            walk(v, trail)
            trail.pop()

    walk(source, [])
    return found


def dag_instance(arcs: dict, source, sink, capacities: dict, transits: dict, horizon: int,
                 max_paths: int | None = None) -> InstanceDocument:
    """Instance whose elements are the arcs and whose paths are all s-t paths."""
    limit = bound("dag_paths") if max_paths is None else max_paths
    paths = _st_paths(arcs, source, sink, limit)
    elements = [Element(name, to_fraction(capacities[name]), transits[name]) for name in arcs]
    doc = InstanceDocument(elements, paths, horizon, {"source": source, "sink": sink, "arcs": dict(arcs)})
    _ensure_valid(doc)
    return doc


def generate_dag(nodes: int, arcs: int, seed: int, horizon: int | None = None,
                 max_capacity: int = 5, max_transit: int = 2, max_horizon: int = 8,
                 max_paths: int | None = None) -> InstanceDocument:
    """Random DAG on nodes 0..n-1 with source 0 and sink n-1.

    Arc sets are resampled until the sink is reachable. Arcs are named
    ``u-v``. Raises GenerationError when the path family grows beyond the
    bound.
    """
    if nodes < 2:
        raise DomainError("a DAG instance needs at least 2 nodes")
    pairs = [(u, v) for u in range(nodes) for v in range(u + 1, nodes)]
    if not 1 <= arcs <= len(pairs):
        raise DomainError(f"arcs must lie in [1, {len(pairs)}]")
    rng = random.Random(seed)
    for _ in range(1000):
        chosen = sorted(rng.sample(pairs, arcs))
        reach = {0}
        for u, v in chosen:
            if u in reach:
                reach.add(v)
        if nodes - 1 in reach:
            break
    else:
        raise GenerationError("could not draw a DAG with an s-t path")
    named = {f"{u}-{v}": (u, v) for u, v in chosen}
    caps = {k: rng.randint(1, max_capacity) for k in named}
    transits = {k: rng.randint(0, max_transit) for k in named}
    if horizon is None:
        paths = _st_paths(named, 0, nodes - 1, bound("dag_paths") if max_paths is None else max_paths)
        shortest = min(sum(transits[a] for a in p) for p in paths)
        horizon = rng.randint(max(1, shortest + 1), max(max_horizon, shortest + 1))
    return dag_instance(named, 0, nodes - 1, caps, transits, horizon, max_paths)


def switch_closure(paths, max_paths: int) -> list[tuple]:
    """Add prefix·suffix concatenations until every triple has a witness."""
    family = sorted(set(tuple(p) for p in paths))
    while True:
        violations = switching_violations(family)
        if not violations:
            return family
        p, q, e = violations[0]
        joined = []
        for x in closed_prefix(p, e) + open_suffix(q, e):
            if x not in joined:
                joined.append(x)
        family = sorted(set(family) | {tuple(joined)})
        if len(family) > max_paths:
            raise GenerationError(f"closure exceeded {max_paths} paths")


def generate_closure(seed: int, max_elements: int = 8, seed_paths: int = 3, max_length: int = 4,
                     max_paths: int | None = None, max_capacity: int = 5, max_transit: int = 2,
                     max_horizon: int = 8, horizon: int | None = None) -> InstanceDocument:
    """Random ordered seed paths closed under switching."""
    if min(max_elements, seed_paths, max_length) < 1:
        raise DomainError("generator bounds must be positive")
    limit = bound("closure_paths") if max_paths is None else max_paths
    rng = random.Random(seed)
    n = rng.randint(1, max_elements)
    names = [chr(ord("a") + i) for i in range(n)]
    seeds = set()
    for _ in range(rng.randint(1, seed_paths)):
        k = rng.randint(1, min(max_length, n))
        seeds.add(tuple(rng.sample(names, k)))
    family = switch_closure(seeds, limit)
    used = sorted({x for p in family for x in p})
    elements = [Element(x, Fraction(rng.randint(1, max_capacity)), rng.randint(0, max_transit)) for x in used]
    if horizon is None:
        transit = {el.id: el.transit for el in elements}
        shortest = min(sum(transit[x] for x in p) for p in family)
        horizon = rng.randint(max(1, shortest + 1), max(max_horizon, shortest + 1))
    doc = InstanceDocument(elements, family, horizon)
    _ensure_valid(doc)
    return doc


def _ensure_valid(doc: InstanceDocument) -> None:
    bad = switching_violations(doc.network().paths)
    if bad:
        raise GenerationError(f"generated family violates switching at {bad[0]}")


@dataclass
class CorpusEntry:
    name: str
    doc: InstanceDocument
    kind: str  # "dag" or "closure"


def corpus(n_dag: int = 60, n_closure: int = 60, seed: int = 0, max_horizon: int = 8,
           min_paths: int = 2) -> list[CorpusEntry]:
    """Deterministic mix of DAG and closure instances within desk-scale bounds.

    Bounds: at most 8 elements, 12 paths, horizon 8, capacities 5. Draws
    that break a bound or have fewer than ``min_paths`` paths are skipped,
    so the seeds used are not contiguous.
    """
    rng = random.Random(seed)
    out = []
    while sum(e.kind == "dag" for e in out) < n_dag:
        s = rng.randrange(2**32)
        nodes = rng.randint(3, 6)
        arcs = rng.randint(nodes - 1, min(8, nodes * (nodes - 1) // 2))
        try:
            doc = generate_dag(nodes, arcs, s, max_horizon=max_horizon, max_paths=12)
        except GenerationError:
            continue
        if doc.horizon <= max_horizon and len(doc.paths) >= min_paths:
            out.append(CorpusEntry(f"dag-{nodes}-{arcs}-{s}", doc, "dag"))
    while sum(e.kind == "closure" for e in out) < n_closure:
        s = rng.randrange(2**32)
        try:
            doc = generate_closure(s, seed_paths=4, max_paths=12, max_horizon=max_horizon)
        except GenerationError:
            continue
        if doc.horizon <= max_horizon and len(doc.paths) >= min_paths:
            out.append(CorpusEntry(f"closure-{s}", doc, "closure"))
    return out


def tiny_corpus(count: int = 36, seed: int = 1) -> list[CorpusEntry]:
    """Instances with paths of at most 3 elements and horizon at most 6."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        s = rng.randrange(2**32)
        if rng.random() < 0.5:
            nodes = rng.randint(2, 4)
            arcs = rng.randint(1, nodes * (nodes - 1) // 2)
            try:
                doc = generate_dag(nodes, arcs, s, max_horizon=6, max_paths=12)
            except GenerationError:
                continue
            kind = "dag"
        else:
            try:
                doc = generate_closure(s, max_elements=5, seed_paths=3, max_length=3, max_paths=12, max_horizon=6)
            except GenerationError:
                continue
            kind = "closure"
        if doc.horizon <= 6 and len(doc.paths) >= 2 and all(len(p) <= 3 for p in doc.paths):
            out.append(CorpusEntry(f"tiny-{kind}-{s}", doc, kind))
    return out


# -- certificates --------------------------------------------------------------


def certificate_document(doc: InstanceDocument, cert) -> dict:
    """Machine-readable certificate for ``cert``, a :class:`aft.dynamic.Certificate`."""
    net = doc.network()
    fr = format_fraction
    static = cert.static
    return {
        "instance_digest": digest(doc),
        "horizon": cert.horizon,
        "capacities": {el.id: fr(el.capacity) for el in net.elements},
        "weights": [{"path": list(p), "weight": fr(w)} for p, w in sorted(cert.weights.items())],
        "static_flow": [{"path": list(p), "value": fr(v)} for p, v in sorted(static.flow.items())],
        "dual": {e: int(v) for e, v in sorted(static.dual.items())},
        "static_objective": fr(static.objective),
        "flow_value": fr(cert.flow_value),
        "cut_capacity": fr(cert.cut_capacity),
        "clipped_cut_capacity": fr(cert.clipped_cut_capacity),
        "alpha": {e: ("inf" if a == float("inf") else int(a)) for e, a in sorted(cert.schedule.alpha.items())},
        "cut": [[e, t] for e, t in sorted(cert.schedule.cut().members)],
        "oracle_strict": fr(cert.oracle_strict),
        "oracle_waiting": None if cert.oracle_waiting is None else fr(cert.oracle_waiting),
        "coverage": {
            "strict": {"checked": cert.strict_coverage.checked,
                       "uncovered": [str(tp) for tp in cert.strict_coverage.uncovered]},
            "waiting": {"checked": cert.waiting_coverage.checked,
                        "uncovered": [str(ws) for ws in cert.waiting_coverage.uncovered]},
        },
        "validation": {
            "switching_violations": len(cert.switching.violations),
            "zero_transit_paths": [list(p) for p in cert.switching.zero_transit_paths],
            "supermodular_violations": len(cert.supermodular.violations),
        },
        "notes": list(cert.notes),
        "all_equal": cert.all_equal,
    }


def load_certificate(text: str) -> dict:
    """Parse a certificate and recompute its sums; InstanceError on any mismatch."""
    try:
        data = json.loads(text)
        caps = {e: to_fraction(v) for e, v in data["capacities"].items()}
        weights = {tuple(item["path"]): to_fraction(item["weight"]) for item in data["weights"]}
        flow = {tuple(item["path"]): to_fraction(item["value"]) for item in data["static_flow"]}
        dual = {e: int(v) for e, v in data["dual"].items()}
        claimed = {k: to_fraction(data[k]) for k in ("static_objective", "flow_value", "cut_capacity", "oracle_strict")}
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceError(f"malformed certificate: {exc}") from None
    primal = sum((weights[p] * v for p, v in flow.items()), Fraction(0))
    repeated = sum((max(Fraction(0), weights[p]) * v for p, v in flow.items()), Fraction(0))
    dual_value = sum((caps[e] * v for e, v in dual.items()), Fraction(0))
    checks = [
        ("static_objective", primal, claimed["static_objective"]),
        ("static_objective (dual side)", dual_value, claimed["static_objective"]),
        ("flow_value", repeated, claimed["flow_value"]),
        ("cut_capacity", dual_value, claimed["cut_capacity"]),
    ]
    for name, got, want in checks:
        if got != want:
            raise InstanceError(f"certificate inconsistent: {name} recomputes to {got}, document says {want}")
    expected_flag = claimed["flow_value"] == claimed["cut_capacity"] == claimed["oracle_strict"]
    if bool(data.get("all_equal")) != expected_flag:
        raise InstanceError("certificate inconsistent: all_equal flag")
    return data
