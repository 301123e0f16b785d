import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aft.config import bounds
from aft.dynamic import certify
from aft.errors import DomainError, GenerationError, InstanceError
from aft.instances import (
    FIXTURES,
    certificate_document,
    canonical_json,
    corpus,
    dag_instance,
    digest,
    example1,
    example2,
    generate_closure,
    generate_dag,
    load_certificate,
    parse_instance,
    read_instance,
    serialize_instance,
    switch_closure,
    tiny_corpus,
    write_atomic,
)
from aft.network import validate_switching


class TestParse:
    def test_example1_round_trip(self):
        doc = parse_instance(serialize_instance(example1()))
        net = doc.network()
        assert len(net.elements) == 8 and len(net.paths) == 7
        assert doc == example1()

    def test_example2(self):
        net = parse_instance(serialize_instance(example2())).network()
        assert len(net.elements) == 4 and len(net.paths) == 4
        assert all(el.transit == 1 for el in net.elements)

    def test_rational_capacity(self):
        doc = parse_instance(
            '{"elements": [{"name": "a", "capacity": "3/2", "transit": 1}], "paths": [["a"]], "horizon": 3}'
        )
        assert doc.network().capacity("a") == Fraction(3, 2)
        assert '"3/2"' in serialize_instance(doc)

    def test_duplicate_in_path(self):
        text = '{"elements": [{"name": "a", "capacity": 1}], "paths": [["a", "a"]], "horizon": 2}'
        with pytest.raises(InstanceError, match=r"paths\[0\] \(a,a\)"):
            parse_instance(text)

    @pytest.mark.parametrize(
        "text, fragment",
        [
            ("{", "line 1"),
            ("[]", "top level"),
            ('{"elements": [], "paths": []}', "horizon"),
            ('{"elements": [{"name": "a", "capacity": 0.5}], "paths": [], "horizon": 1}', "floats"),
            ('{"elements": [{"name": "a", "capacity": -1}], "paths": [], "horizon": 1}', "negative"),
            ('{"elements": [{"name": "a", "capacity": 1}], "paths": [["b"]], "horizon": 1}', "undeclared"),
            ('{"elements": [{"name": "a", "capacity": 1}], "paths": [], "horizon": 0}', "horizon"),
            ('{"elements": [], "paths": [], "horizon": 1, "x": 1}', "unknown key"),
        ],
    )
    def test_schema_errors(self, text, fragment):
        with pytest.raises(InstanceError, match=fragment):
            parse_instance(text)

    def test_canonical_form_is_order_free(self):
        a = parse_instance(
            '{"elements": [{"name": "b", "capacity": 1}, {"name": "a", "capacity": 2}],'
            ' "paths": [["b"], ["a", "b"]], "horizon": 2}'
        )
        b = parse_instance(
            '{"paths": [["a", "b"], ["b"]], "horizon": 2,'
            ' "elements": [{"name": "a", "capacity": "2"}, {"name": "b", "capacity": 1, "transit": 0}]}'
        )
        assert digest(a) == digest(b)

    def test_files(self, tmp_path):
        for name, make in FIXTURES.items():
            path = tmp_path / name
            write_atomic(str(path), serialize_instance(make()))
            assert read_instance(str(path)) == make()
        assert not [p for p in tmp_path.iterdir() if p.name.startswith(".tmp-")]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(["dag", "closure"]))
def test_round_trip_generated(seed, kind):
    doc = generate_dag(5, 7, seed) if kind == "dag" else generate_closure(seed)
    text = serialize_instance(doc)
    again = parse_instance(text)
    assert again == doc and serialize_instance(again) == text


class TestGenerators:
    def test_two_nodes(self):
        doc = generate_dag(2, 1, 0)
        assert [el.id for el in doc.elements] == ["0-1"] and doc.paths == [("0-1",)]

    def test_diamond(self):
        arcs = {"sa": ("s", "a"), "sb": ("s", "b"), "at": ("a", "t"), "bt": ("b", "t")}
        ones = dict.fromkeys(arcs, 1)
        doc = dag_instance(arcs, "s", "t", ones, ones, 4)
        assert sorted(doc.paths) == [("sa", "at"), ("sb", "bt")]
        assert validate_switching(doc.network()).ok

    def test_deterministic(self):
        assert digest(generate_dag(6, 9, 42)) == digest(generate_dag(6, 9, 42))
        assert digest(generate_closure(7)) == digest(generate_closure(7))

    def test_bad_arguments(self):
        with pytest.raises(DomainError):
            generate_dag(1, 1, 0)
        with pytest.raises(DomainError):
            generate_dag(3, 9, 0)
        with pytest.raises(DomainError):
            generate_closure(0, seed_paths=0)

    def test_path_explosion(self):
        with pytest.raises(GenerationError):
            generate_dag(6, 15, 0, max_paths=5)

    def test_closure_examples(self):
        assert switch_closure([("a", "b", "c")], 12) == [("a", "b", "c")]
        # (a,b) x_b (b,c) is witnessed by (a,b) itself; (b,c) x_b (a,b) needs a path
        # inside {b}, which the closure adds as (b)
        assert switch_closure([("a", "b"), ("b", "c")], 12) == [("a", "b"), ("b",), ("b", "c")]

    def test_closure_bound(self):
        with pytest.raises(GenerationError):
            switch_closure([("a", "b", "c", "d"), ("d", "c", "b", "a")], 3)

    def test_corpus_bounds(self):
        entries = corpus(8, 8, seed=3)
        assert len(entries) == 16
        for entry in entries:
            net = entry.doc.network()
            assert len(net.elements) <= 8 and 2 <= len(net.paths) <= 12
            assert entry.doc.horizon <= 8
            assert all(el.capacity <= 5 and el.capacity.denominator == 1 for el in net.elements)
            assert validate_switching(net).ok

    def test_tiny_corpus_bounds(self):
        for entry in tiny_corpus(6):
            assert entry.doc.horizon <= 6 and all(len(p) <= 3 for p in entry.doc.paths)


class TestBounds:
    def test_override(self, monkeypatch):
        monkeypatch.setenv("AFT_BOUNDS", "oracle_strict=7, dag_paths=3")
        assert bounds()["oracle_strict"] == 7 and bounds()["dag_paths"] == 3

    @pytest.mark.parametrize("value", ["nope=1", "oracle_strict", "oracle_strict=x"])
    def test_bad_override(self, monkeypatch, value):
        monkeypatch.setenv("AFT_BOUNDS", value)
        with pytest.raises(DomainError):
            bounds()


class TestCertificate:
    def test_reproducible_and_consistent(self):
        doc = example2(horizon=5)
        first = canonical_json(certificate_document(doc, certify(doc.network(), 5)))
        second = canonical_json(certificate_document(doc, certify(doc.network(), 5)))
        assert first == second
        data = load_certificate(first)
        assert data["all_equal"] and data["flow_value"] == "2"

    def test_tampering_detected(self):
        doc = example1()
        data = certificate_document(doc, certify(doc.network(), 6))
        data["cut_capacity"] = "12"
        with pytest.raises(InstanceError, match="cut_capacity"):
            load_certificate(json.dumps(data))
        data = certificate_document(doc, certify(doc.network(), 6))
        data["all_equal"] = False
        with pytest.raises(InstanceError, match="all_equal"):
            load_certificate(json.dumps(data))
