"""Tests for knowledge graph ingestion, neighbor queries, and the edge client."""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import httpx
from ideafeed.errors import AllLinesMalformed, IoFailure, NetworkFailure
from ideafeed.kg import (
    DEFAULT_EXCLUDED_RELATIONS,
    KnowledgeEdge,
    KnowledgeGraph,
    RelationFilter,
    RemoteEdgeClient,
)
from ideafeed.runtime import data_path


FIVE_EDGES = """RelatedTo\twalk\tstroll\t4.0
RelatedTo\twalk\thike\t3.0
Synonym\twalk\tamble\t5.0
UsedFor\tshoes\twalk\t2.0
RelatedTo\trun\tsprint\t6.0
"""


def graph_from(text, tmp_path, name="edges.tsv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return KnowledgeGraph.ingest(path)


# -- ingestion ---------------------------------------------------------------


def test_ingest_five_edge_file(tmp_path):
    graph, stats = graph_from(FIVE_EDGES, tmp_path)
    assert len(graph) == 5
    assert stats.edges == 5
    assert stats.malformed == 0
    assert stats.comments == 0


def test_ingest_skips_and_counts_bad_lines(tmp_path):
    text = (
        "# header comment\n"
        "RelatedTo\twalk\tstroll\t4.0\n"
        "RelatedTo\twalk\thike\n"  # 3 fields
        "RelatedTo\twalk\tjog\tnotanumber\n"
        "RelatedTo\twalk\tmarch\t-1.0\n"  # negative weight
        "\n"
        "UsedFor\tshoes\twalk\t2.0\n"
    )
    graph, stats = graph_from(text, tmp_path)
    assert stats.edges == 2
    assert stats.malformed == 3
    assert stats.comments == 1
    assert len(graph) == 2


def test_ingest_empty_file_gives_empty_graph(tmp_path):
    graph, stats = graph_from("", tmp_path)
    assert len(graph) == 0
    assert stats.edges == 0
    assert graph.related_words("anything") == []


def test_ingest_all_malformed_raises(tmp_path):
    with pytest.raises(AllLinesMalformed):
        graph_from("one\ttwo\nthree\tfour\n", tmp_path)


def test_ingest_missing_file_raises(tmp_path):
    with pytest.raises(IoFailure):
        KnowledgeGraph.ingest(tmp_path / "absent.tsv")


def test_ingest_lowercases_and_dedupes(tmp_path):
    text = "RelatedTo\tWalk\tStroll\t4.0\nRelatedTo\twalk\tstroll\t4.0\n"
    graph, stats = graph_from(text, tmp_path)
    assert len(graph) == 1
    assert graph.edges[0].start_term == "walk"


def test_bundled_graph_loads_cleanly():
    graph, stats = KnowledgeGraph.ingest(data_path("graph.tsv"))
    assert stats.malformed == 0
    assert len(graph) == stats.edges > 300


# -- neighbor queries --------------------------------------------------------


def test_related_words_filters_and_sorts(tmp_path):
    graph, _ = graph_from(FIVE_EDGES, tmp_path)
    got = graph.related_words("walk")
    # Synonym edge excluded by default; sorted by weight descending
    assert got == [("stroll", "RelatedTo", 4.0), ("hike", "RelatedTo", 3.0), ("shoes", "UsedFor", 2.0)]


def test_related_words_unknown_term_is_empty(tmp_path):
    graph, _ = graph_from(FIVE_EDGES, tmp_path)
    assert graph.related_words("teleport") == []


def test_related_words_only_excluded_relations_is_empty(tmp_path):
    graph, _ = graph_from("Synonym\twalk\tamble\t5.0\nAntonym\twalk\tsit\t4.0\n", tmp_path)
    assert graph.related_words("walk") == []
    keep_all = RelationFilter(excluded=frozenset())
    assert len(graph.related_words("walk", keep_all)) == 2


def test_related_words_is_bidirectional(tmp_path):
    graph, _ = graph_from(FIVE_EDGES, tmp_path)
    assert ("walk", "UsedFor", 2.0) in graph.related_words("shoes")


def test_related_words_dedupes_to_max_weight(tmp_path):
    text = (
        "RelatedTo\twalk\tstroll\t2.0\n"
        "UsedFor\twalk\tstroll\t5.0\n"
        "HasSubevent\twalk\tstroll\t5.0\n"
    )
    graph, _ = graph_from(text, tmp_path)
    got = graph.related_words("walk")
    # max weight wins; equal weights pick the alphabetically first relation
    assert got == [("stroll", "HasSubevent", 5.0)]


def test_ties_in_weight_sort_by_term(tmp_path):
    text = "RelatedTo\twalk\tzebra\t3.0\nRelatedTo\twalk\tapple\t3.0\n"
    graph, _ = graph_from(text, tmp_path)
    assert [t for t, _, _ in graph.related_words("walk")] == ["apple", "zebra"]


@settings(max_examples=60, deadline=None)
@given(
    relations=st.lists(
        st.sampled_from(sorted(DEFAULT_EXCLUDED_RELATIONS) + ["RelatedTo", "UsedFor", "HasA"]),
        min_size=1,
        max_size=12,
    ),
    data=st.data(),
)
def test_excluded_relations_never_surface(relations, data):
    edges = [
        KnowledgeEdge(rel, "hub", f"spoke{i}", float(i + 1))
        for i, rel in enumerate(relations)
    ]
    graph = KnowledgeGraph(edges)
    for _, rel, _ in graph.related_words("hub"):
        assert rel not in DEFAULT_EXCLUDED_RELATIONS


# -- export round trip -------------------------------------------------------


def test_export_then_ingest_round_trips_bit_identically(tmp_path):
    graph, _ = KnowledgeGraph.ingest(data_path("graph.tsv"))
    out1 = tmp_path / "round1.tsv"
    graph.export(out1)
    graph2, stats2 = KnowledgeGraph.ingest(out1)
    assert stats2.malformed == 0
    out2 = tmp_path / "round2.tsv"
    graph2.export(out2)
    assert out1.read_bytes() == out2.read_bytes()
    assert graph2.edges == graph.edges


# -- remote edge client ------------------------------------------------------


def _remote_body(term):
    return {
        "edges": [
            {
                "rel": {"label": "RelatedTo"},
                "start": {"label": term},
                "end": {"label": "movement"},
                "weight": 2.5,
            },
            {
                "rel": {"label": "UsedFor"},
                "start": {"label": "legs"},
                "end": {"label": term},
                "weight": 1.5,
            },
            {"rel": {"label": "Broken"}},  # missing fields, skipped
        ]
    }


class _FakeResponse:
    def __init__(self, body):
        self._body = body

    def raise_for_status(self):
        return None

    def json(self):
        return self._body


def test_remote_fetch_persists_snapshot(monkeypatch, tmp_path):
    calls = []

    def fake_get(url, timeout):
        calls.append(url)
        return _FakeResponse(_remote_body("dance"))

    monkeypatch.setattr(httpx, "get", fake_get)
    snap = tmp_path / "snapshot.tsv"
    client = RemoteEdgeClient("http://graph.example/api", snap, delay=0.0)
    edges = client.fetch("Dance")
    assert calls == ["http://graph.example/api/c/en/dance"]
    assert len(edges) == 2
    assert snap.exists()

    # cached term: no further network traffic, even in a fresh client
    again = client.fetch("dance")
    assert len(calls) == 1
    assert sorted(again) == sorted(edges)
    offline = RemoteEdgeClient("http://graph.example/api", snap, delay=0.0)
    assert sorted(offline.fetch("dance")) == sorted(edges)
    assert len(calls) == 1


def test_remote_fetch_network_failure(monkeypatch, tmp_path):
    def fake_get(url, timeout):
        raise httpx.ConnectError("no route")

    monkeypatch.setattr(httpx, "get", fake_get)
    client = RemoteEdgeClient("http://graph.example/api", tmp_path / "s.tsv", delay=0.0)
    with pytest.raises(NetworkFailure):
        client.fetch("dance")


def test_remote_multiword_terms_use_underscores(monkeypatch, tmp_path):
    seen = []

    def fake_get(url, timeout):
        seen.append(url)
        return _FakeResponse({"edges": []})

    monkeypatch.setattr(httpx, "get", fake_get)
    client = RemoteEdgeClient("http://graph.example/api/", tmp_path / "s.tsv", delay=0.0)
    client.fetch("spin class")
    assert seen == ["http://graph.example/api/c/en/spin_class"]
